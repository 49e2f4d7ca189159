"""Exact scalar arithmetic: rational functions in x1, x2, x3 over the rationals.

Every coefficient in the engine is a ScalarField: a quotient of two expanded
multivariate polynomials with Fraction coefficients.  Arithmetic is eager and
canonical, so a field is identically zero exactly when its numerator has no
terms.  is_zero keeps the hybrid exact/probabilistic contract so callers can
pin seeds and point counts.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

Exps = tuple[int, int, int]

_ZERO_EXPS: Exps = (0, 0, 0)
_VAR_EXPS: dict[int, Exps] = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}

_RESAMPLE_LIMIT = 64


class FieldError(Exception):
    pass


class ScalarParseError(FieldError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class PoleError(FieldError):
    """Denominator vanishes at the evaluation point."""


class ZeroDenominatorError(FieldError):
    """Division by an identically zero polynomial."""


class SamplingExhaustedError(FieldError):
    """Could not find a pole-free sample point within the retry budget."""


def _grlex_key(exps: Exps) -> tuple[int, Exps]:
    return (exps[0] + exps[1] + exps[2], exps)


class MultiPoly:
    """Sparse polynomial in x1, x2, x3: map from exponent triple to Fraction.

    Zero coefficients are never stored; the zero polynomial is the empty map.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Exps, Fraction] | None = None, normalize: bool = True):
        if terms is None:
            self.terms = {}
        elif normalize:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}
        else:
            self.terms = terms

    @staticmethod
    def constant(value) -> "MultiPoly":
        c = Fraction(value)
        if c == 0:
            return MultiPoly(None)
        return MultiPoly({_ZERO_EXPS: c}, normalize=False)

    @staticmethod
    def variable(axis: int) -> "MultiPoly":
        return MultiPoly({_VAR_EXPS[axis]: Fraction(1)}, normalize=False)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m)
            if s is None:
                res[m] = c
            else:
                s = s + c
                if s == 0:
                    del res[m]
                else:
                    res[m] = s
        return MultiPoly(res, normalize=False)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m)
            if s is None:
                res[m] = -c
            else:
                s = s - c
                if s == 0:
                    del res[m]
                else:
                    res[m] = s
        return MultiPoly(res, normalize=False)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({m: -c for m, c in self.terms.items()}, normalize=False)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        if not self.terms or not other.terms:
            return MultiPoly(None)
        res: dict[Exps, Fraction] = {}
        for (a1, a2, a3), c1 in self.terms.items():
            for (b1, b2, b3), c2 in other.terms.items():
                m = (a1 + b1, a2 + b2, a3 + b3)
                s = res.get(m)
                if s is None:
                    res[m] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s == 0:
                        del res[m]
                    else:
                        res[m] = s
        return MultiPoly(res, normalize=False)

    def scale(self, factor: Fraction) -> "MultiPoly":
        if factor == 0:
            return MultiPoly(None)
        return MultiPoly({m: c * factor for m, c in self.terms.items()}, normalize=False)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MultiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(i + j + k for (i, j, k) in self.terms)

    def leading_monomial(self) -> Exps:
        return max(self.terms, key=_grlex_key)

    def content(self) -> Fraction:
        """Positive rational g with self/g having coprime integer coefficients."""
        nums = 0
        dens = 1
        for c in self.terms.values():
            nums = math.gcd(nums, abs(c.numerator))
            dens = dens * c.denominator // math.gcd(dens, c.denominator)
        return Fraction(nums, dens)

    def diff(self, axis: int) -> "MultiPoly":
        k = axis - 1
        res: dict[Exps, Fraction] = {}
        for m, c in self.terms.items():
            e = m[k]
            if e == 0:
                continue
            lowered = list(m)
            lowered[k] = e - 1
            key = tuple(lowered)
            s = res.get(key)
            res[key] = c * e if s is None else s + c * e
        return MultiPoly(res)

    def evaluate(self, x1: Fraction, x2: Fraction, x3: Fraction) -> Fraction:
        total = Fraction(0)
        for (i, j, k), c in self.terms.items():
            total += c * x1**i * x2**j * x3**k
        return total

    def try_divide(self, divisor: "MultiPoly") -> "MultiPoly | None":
        """Exact quotient self/divisor, or None when the division is not exact."""
        if divisor.is_zero():
            raise ZeroDenominatorError("polynomial division by zero")
        if self.is_zero():
            return MultiPoly(None)
        if self.total_degree() < divisor.total_degree():
            return None
        lead = divisor.leading_monomial()
        lead_coeff = divisor.terms[lead]
        remainder = dict(self.terms)
        quotient: dict[Exps, Fraction] = {}
        while remainder:
            m = max(remainder, key=_grlex_key)
            q = (m[0] - lead[0], m[1] - lead[1], m[2] - lead[2])
            if q[0] < 0 or q[1] < 0 or q[2] < 0:
                return None
            coeff = remainder[m] / lead_coeff
            quotient[q] = coeff
            for (d1, d2, d3), dc in divisor.terms.items():
                key = (q[0] + d1, q[1] + d2, q[2] + d3)
                s = remainder.get(key)
                s = -coeff * dc if s is None else s - coeff * dc
                if s == 0:
                    remainder.pop(key, None)
                else:
                    remainder[key] = s
        return MultiPoly(quotient, normalize=False)

    def __repr__(self):
        return f"MultiPoly({poly_text(self)!r})"


_POLY_ZERO = MultiPoly(None)
_POLY_ONE = MultiPoly.constant(1)


class ScalarField:
    """Rational function numerator/denominator in canonical form.

    Canonical means: a common monomial factor and the denominator content are
    cancelled, and the denominator's grlex-leading coefficient is positive.
    Equality cross-multiplies, which is exact for expanded polynomials.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = _POLY_ONE):
        if den.is_zero():
            raise ZeroDenominatorError("denominator is identically zero")
        self.num, self.den = _canonical(num, den)

    @staticmethod
    def constant(value) -> "ScalarField":
        return ScalarField(MultiPoly.constant(value))

    @staticmethod
    def variable(axis: int) -> "ScalarField":
        return ScalarField(MultiPoly.variable(axis))

    def is_structurally_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == _POLY_ONE and self.den == _POLY_ONE

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarField):
            other = ScalarField.constant(other)
        if self.den == other.den:
            return self.num == other.num
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "ScalarField") -> "ScalarField":
        if not isinstance(other, ScalarField):
            other = ScalarField.constant(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return ScalarField(self.num + other.num, self.den)
        if self.den == _POLY_ONE:
            return ScalarField(self.num * other.den + other.num, other.den)
        if other.den == _POLY_ONE:
            return ScalarField(self.num + other.num * self.den, self.den)
        q = other.den.try_divide(self.den)
        if q is not None:
            return ScalarField(self.num * q + other.num, other.den)
        q = self.den.try_divide(other.den)
        if q is not None:
            return ScalarField(self.num + other.num * q, self.den)
        return ScalarField(self.num * other.den + other.num * self.den,
                           self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        if not isinstance(other, ScalarField):
            other = ScalarField.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return ScalarField.constant(other) - self

    def __neg__(self) -> "ScalarField":
        out = ScalarField.__new__(ScalarField)
        out.num = -self.num
        out.den = self.den
        return out

    def __mul__(self, other) -> "ScalarField":
        if not isinstance(other, ScalarField):
            other = ScalarField.constant(other)
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        n1, d2 = _cancel(self.num, other.den)
        n2, d1 = _cancel(other.num, self.den)
        return ScalarField(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScalarField":
        if not isinstance(other, ScalarField):
            other = ScalarField.constant(other)
        if other.num.is_zero():
            raise ZeroDenominatorError("division by an identically zero field")
        inv = ScalarField.__new__(ScalarField)
        inv.num, inv.den = _canonical(other.den, other.num)
        return self * inv

    def __rtruediv__(self, other):
        return ScalarField.constant(other) / self

    def __pow__(self, n: int) -> "ScalarField":
        if n < 0:
            return ScalarField.constant(1) / self ** (-n)
        result = ONE
        for _ in range(n):
            result = result * self
        return result

    def __repr__(self):
        return f"ScalarField({field_text(self)!r})"


def _canonical(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    if num.is_zero():
        return _POLY_ZERO, _POLY_ONE
    g = _monomial_gcd(num, den)
    if g != _ZERO_EXPS:
        num = _shift_down(num, g)
        den = _shift_down(den, g)
    if den != _POLY_ONE:
        q = num.try_divide(den)
        if q is not None:
            return q, _POLY_ONE
    c = den.content()
    lead = den.terms[den.leading_monomial()]
    if lead < 0:
        c = -c
    if c != 1:
        inv = 1 / c
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def _monomial_gcd(p: MultiPoly, q: MultiPoly) -> Exps:
    g = None
    for source in (p.terms, q.terms):
        for m in source:
            if g is None:
                g = m
            else:
                g = (min(g[0], m[0]), min(g[1], m[1]), min(g[2], m[2]))
            if g == _ZERO_EXPS:
                return _ZERO_EXPS
    return g if g is not None else _ZERO_EXPS


def _shift_down(p: MultiPoly, g: Exps) -> MultiPoly:
    return MultiPoly({(i - g[0], j - g[1], k - g[2]): c for (i, j, k), c in p.terms.items()},
                     normalize=False)


def _cancel(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Cancel an exact polynomial factor between a numerator and a denominator."""
    if den == _POLY_ONE or num.is_zero():
        return num, den
    q = num.try_divide(den)
    if q is not None:
        return q, _POLY_ONE
    return num, den


ZERO = ScalarField(_POLY_ZERO)
ONE = ScalarField(_POLY_ONE)
X1 = ScalarField.variable(1)
X2 = ScalarField.variable(2)
X3 = ScalarField.variable(3)


@dataclass(frozen=True)
class Point:
    x1: Fraction
    x2: Fraction
    x3: Fraction

    @staticmethod
    def of(a, b, c) -> "Point":
        return Point(Fraction(a), Fraction(b), Fraction(c))


@dataclass(frozen=True)
class ZeroTestConfig:
    seed: int = 1729
    num_points: int = 8
    coord_bound: int = 1000
    max_expand_degree: int = 12

    def __post_init__(self):
        if self.num_points < 4:
            raise ValueError("num_points must be at least 4")
        if self.coord_bound < 1 or self.max_expand_degree < 0:
            raise ValueError("invalid zero-test configuration")


DEFAULT_ZERO_CONFIG = ZeroTestConfig()


def differentiate(f: ScalarField, axis: int) -> ScalarField:
    """Exact partial derivative along coordinate axis 1..3 (quotient rule)."""
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1..3, got {axis}")
    if f.den == _POLY_ONE:
        return ScalarField(f.num.diff(axis))
    num = f.num.diff(axis) * f.den - f.num * f.den.diff(axis)
    return ScalarField(num, f.den * f.den)


def evaluate(f: ScalarField, p: Point) -> Fraction:
    """Exact rational value of f at p; raises PoleError on a vanishing denominator."""
    d = f.den.evaluate(p.x1, p.x2, p.x3)
    if d == 0:
        raise PoleError(f"denominator vanishes at ({p.x1}, {p.x2}, {p.x3})")
    return f.num.evaluate(p.x1, p.x2, p.x3) / d


def is_zero(f: ScalarField, cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG) -> bool:
    """Decide whether f is identically zero.

    Below max_expand_degree the expanded numerator answers exactly; above it
    the field is evaluated at seeded random rational points (Schwartz-Zippel),
    resampling points that land on a denominator zero.
    """
    if f.num.is_zero():
        return True
    if f.num.total_degree() <= cfg.max_expand_degree:
        return False
    rng = random.Random(cfg.seed)
    for _ in range(cfg.num_points):
        value = None
        for _ in range(_RESAMPLE_LIMIT):
            p = _sample_point(rng, cfg.coord_bound)
            try:
                value = evaluate(f, p)
            except PoleError:
                continue
            break
        else:
            raise SamplingExhaustedError(
                f"no pole-free sample found in {_RESAMPLE_LIMIT} attempts")
        if value != 0:
            return False
    return True


def _sample_point(rng: random.Random, bound: int) -> Point:
    def coord() -> Fraction:
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    return Point(coord(), coord(), coord())


# ---------------------------------------------------------------------------
# Scalar expression grammar (shared with the scenario language):
#   integers, rationals p/q, variables x|x1, y|x2, z|x3,
#   operators + - * / ^ (power: non-negative integer literal), parentheses.
# ---------------------------------------------------------------------------

_VAR_NAMES = {"x": 1, "x1": 1, "y": 2, "x2": 2, "z": 3, "x3": 3}


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str):
        raise ScalarParseError(message, self.line, self.col)

    def _advance(self, n: int = 1):
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self._advance()

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self._advance()
            return True
        return False

    def expect(self, ch: str):
        if not self.take(ch):
            self.error(f"expected {ch!r}")

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self._advance()
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def identifier(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self._advance()
        return self.text[start:self.pos]

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_expr(s: _Scanner) -> ScalarField:
    value = _parse_term(s)
    while True:
        if s.take("+"):
            value = value + _parse_term(s)
        elif s.take("-"):
            value = value - _parse_term(s)
        else:
            return value


def _parse_term(s: _Scanner) -> ScalarField:
    value = _parse_unary(s)
    while True:
        if s.take("*"):
            value = value * _parse_unary(s)
        elif s.take("/"):
            line, col = s.line, s.col
            divisor = _parse_unary(s)
            if divisor.is_structurally_zero():
                raise ScalarParseError("division by an identically zero expression",
                                       line, col)
            value = value / divisor
        else:
            return value


def _parse_unary(s: _Scanner) -> ScalarField:
    if s.take("-"):
        return -_parse_unary(s)
    if s.take("+"):
        return _parse_unary(s)
    return _parse_power(s)


def _parse_power(s: _Scanner) -> ScalarField:
    base = _parse_atom(s)
    if s.take("^"):
        exponent = s.integer()
        return base**exponent
    return base


def _parse_atom(s: _Scanner) -> ScalarField:
    ch = s.peek()
    if ch == "(":
        s.expect("(")
        value = _parse_expr(s)
        s.expect(")")
        return value
    if ch.isdigit():
        return ScalarField.constant(s.integer())
    if ch.isalpha():
        name = s.identifier()
        axis = _VAR_NAMES.get(name)
        if axis is None:
            s.error(f"unknown variable {name!r}")
        return ScalarField.variable(axis)
    s.error("expected a number, variable, or parenthesized expression")


def parse_scalar(text: str) -> ScalarField:
    """Parse a scalar expression into a canonical ScalarField."""
    s = _Scanner(text)
    value = _parse_expr(s)
    if not s.at_end():
        s.error(f"unexpected trailing input {s.peek()!r}")
    return value


# ---------------------------------------------------------------------------
# Canonical, re-parseable text forms (grlex-descending monomial order).
# ---------------------------------------------------------------------------

_VAR_TEXT = ("x1", "x2", "x3")


def _monomial_text(exps: Exps) -> str:
    parts = []
    for name, e in zip(_VAR_TEXT, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def poly_text(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for m in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[m]
        mono = _monomial_text(m)
        mag = abs(c)
        if mono == "":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


def field_text(f: ScalarField) -> str:
    if f.den == _POLY_ONE:
        return poly_text(f.num)
    return f"({poly_text(f.num)}) / ({poly_text(f.den)})"
