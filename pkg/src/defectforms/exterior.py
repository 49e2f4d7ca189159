"""Tensor-valued differential forms on 3D Euclidean space.

A TensorForm is a degree-p form carrying r upper and s lower orthonormal-frame
indices.  The form part of every component is stored in the coordinate basis
(dx1, dx2, dx3) as a map from strictly increasing multi-index to ScalarField;
the orthonormal-frame basis is a view produced by change_basis.  Frame index
gymnastics with the Euclidean metric are free at the component level.
"""

from __future__ import annotations

from itertools import permutations

from .field import ONE, ScalarField, ZERO, differentiate

Midx = tuple[int, ...]
FormPart = dict  # Midx -> ScalarField
SlotKey = tuple  # (upper index tuple, lower index tuple)

AXES = (1, 2, 3)


def eps(a: int, b: int, c: int) -> int:
    """Totally antisymmetric symbol with eps(1,2,3) = +1."""
    if a == b or b == c or a == c:
        return 0
    return 1 if (a, b, c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


EPSILON_TRIPLES = tuple(p for p in permutations(AXES))


def delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def _merge_midx(left: Midx, right: Midx) -> tuple[int, Midx] | None:
    """Sort the concatenation of two increasing multi-indices.

    Returns (sign, merged) or None when an index repeats.
    """
    merged = list(left)
    sign = 1
    for idx in right:
        pos = len(merged)
        while pos > 0 and merged[pos - 1] > idx:
            pos -= 1
        if pos > 0 and merged[pos - 1] == idx:
            return None
        if (len(merged) - pos) % 2:
            sign = -sign
        merged.insert(pos, idx)
    return sign, tuple(merged)


def _fp_set(fp: FormPart, midx: Midx, value: ScalarField):
    if midx in fp:
        value = fp[midx] + value
    if value.is_structurally_zero():
        fp.pop(midx, None)
    else:
        fp[midx] = value


def fp_add(a: FormPart, b: FormPart) -> FormPart:
    out = dict(a)
    for midx, value in b.items():
        _fp_set(out, midx, value)
    return out


def fp_scale(fp: FormPart, factor) -> FormPart:
    if isinstance(factor, ScalarField) and factor.is_structurally_zero():
        return {}
    out = {}
    for midx, value in fp.items():
        scaled = value * factor
        if not scaled.is_structurally_zero():
            out[midx] = scaled
    return out


def fp_wedge(a: FormPart, b: FormPart) -> FormPart:
    out: FormPart = {}
    for ma, fa in a.items():
        for mb, fb in b.items():
            merged = _merge_midx(ma, mb)
            if merged is None:
                continue
            sign, midx = merged
            coeff = fa * fb
            if sign < 0:
                coeff = -coeff
            _fp_set(out, midx, coeff)
    return out


def fp_d(fp: FormPart) -> FormPart:
    out: FormPart = {}
    for midx, value in fp.items():
        for axis in AXES:
            dv = differentiate(value, axis)
            if dv.is_structurally_zero():
                continue
            merged = _merge_midx((axis,), midx)
            if merged is None:
                continue
            sign, key = merged
            _fp_set(out, key, dv if sign > 0 else -dv)
    return out


def fp_interior(components: tuple, fp: FormPart) -> FormPart:
    """Contract a vector (contravariant coordinate components) into a form part."""
    out: FormPart = {}
    for midx, value in fp.items():
        for pos, idx in enumerate(midx):
            comp = components[idx - 1]
            if comp.is_structurally_zero():
                continue
            coeff = value * comp
            if pos % 2:
                coeff = -coeff
            _fp_set(out, midx[:pos] + midx[pos + 1:], coeff)
    return out


def fp_transform(fp: FormPart, matrix, degree: int) -> FormPart:
    """Rewrite a form part under a linear change of basis.

    matrix[src][dst] expresses each source basis 1-form as a combination of
    target basis 1-forms; indices are 0-based rows/columns over 1..3.
    """
    if degree == 0 or not fp:
        return dict(fp)
    out: FormPart = {}
    if degree == 1:
        for (i,), value in fp.items():
            row = matrix[i - 1]
            for a in AXES:
                coeff = value * row[a - 1]
                if not coeff.is_structurally_zero():
                    _fp_set(out, (a,), coeff)
        return out
    if degree == 2:
        for (i, j), value in fp.items():
            ri, rj = matrix[i - 1], matrix[j - 1]
            for a in AXES:
                for b in AXES:
                    if a >= b:
                        continue
                    coeff = value * (ri[a - 1] * rj[b - 1] - ri[b - 1] * rj[a - 1])
                    if not coeff.is_structurally_zero():
                        _fp_set(out, (a, b), coeff)
        return out
    # degree 3: single component scales by the determinant
    det = _det3(matrix)
    for midx, value in fp.items():
        coeff = value * det
        if not coeff.is_structurally_zero():
            _fp_set(out, midx, coeff)
    return out


def _det3(m) -> ScalarField:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


_HODGE_RULES = {
    0: {(): (1, (1, 2, 3))},
    1: {(1,): (1, (2, 3)), (2,): (-1, (1, 3)), (3,): (1, (1, 2))},
    2: {(1, 2): (1, (3,)), (1, 3): (-1, (2,)), (2, 3): (1, (1,))},
    3: {(1, 2, 3): (1, ())},
}


def fp_hodge(fp: FormPart, degree: int) -> FormPart:
    """Euclidean Hodge map on a frame-basis form part (epsilon rules)."""
    rules = _HODGE_RULES[degree]
    out: FormPart = {}
    for midx, value in fp.items():
        sign, image = rules[midx]
        _fp_set(out, image, value if sign > 0 else -value)
    return out


class VectorField:
    """Vector field given by three contravariant coordinate components."""

    __slots__ = ("components",)

    def __init__(self, c1: ScalarField, c2: ScalarField, c3: ScalarField):
        self.components = (c1, c2, c3)

    @staticmethod
    def coordinate(axis: int) -> "VectorField":
        comps = [ZERO, ZERO, ZERO]
        comps[axis - 1] = ONE
        return VectorField(*comps)

    def __repr__(self):
        return f"VectorField{self.components!r}"


class TensorForm:
    """Degree-p differential form with (r, s) orthonormal-frame valence.

    comps maps (upper tuple, lower tuple) -> coordinate-basis form part; only
    slots with a nonzero component are stored.
    """

    __slots__ = ("degree", "upper", "lower", "comps")

    def __init__(self, degree: int, upper: int = 0, lower: int = 0,
                 comps: dict | None = None):
        if degree > 3 or degree < 0:
            degree = min(max(degree, 0), 3)
            comps = {}
        self.degree = degree
        self.upper = upper
        self.lower = lower
        self.comps = {} if comps is None else comps

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(degree: int = 0, upper: int = 0, lower: int = 0) -> "TensorForm":
        return TensorForm(degree, upper, lower, {})

    @staticmethod
    def scalar(value: ScalarField) -> "TensorForm":
        if value.is_structurally_zero():
            return TensorForm.zero(0)
        return TensorForm(0, 0, 0, {((), ()): {(): value}})

    @staticmethod
    def dx(axis: int) -> "TensorForm":
        return TensorForm(1, 0, 0, {((), ()): {(axis,): ONE}})

    @staticmethod
    def from_part(degree: int, fp: FormPart, upper: tuple = (), lower: tuple = ()) -> "TensorForm":
        fp = {m: v for m, v in fp.items() if not v.is_structurally_zero()}
        out = TensorForm(degree, len(upper), len(lower), {})
        if fp:
            out.comps[(tuple(upper), tuple(lower))] = fp
        return out

    # -- access --------------------------------------------------------

    def part(self, upper: tuple = (), lower: tuple = ()) -> FormPart:
        return self.comps.get((tuple(upper), tuple(lower)), {})

    def component(self, upper: tuple, lower: tuple, midx: Midx) -> ScalarField:
        return self.part(upper, lower).get(tuple(midx), ZERO)

    def is_structurally_zero(self) -> bool:
        return not self.comps

    def set_part(self, upper: tuple, lower: tuple, fp: FormPart):
        fp = {m: v for m, v in fp.items() if not v.is_structurally_zero()}
        key = (tuple(upper), tuple(lower))
        if fp:
            self.comps[key] = fp
        else:
            self.comps.pop(key, None)

    def add_to_part(self, upper: tuple, lower: tuple, fp: FormPart):
        self.set_part(upper, lower, fp_add(self.part(upper, lower), fp))

    def slot_keys(self):
        """All populated (upper, lower) slot keys, deterministically ordered."""
        return sorted(self.comps.keys())

    # -- arithmetic ------------------------------------------------------

    def _check_shape(self, other: "TensorForm"):
        if (self.degree, self.upper, self.lower) != (other.degree, other.upper, other.lower):
            if self.is_structurally_zero() or other.is_structurally_zero():
                return
            raise ValueError(
                f"shape mismatch: ({self.degree},{self.upper},{self.lower}) vs "
                f"({other.degree},{other.upper},{other.lower})")

    def __add__(self, other: "TensorForm") -> "TensorForm":
        self._check_shape(other)
        degree = self.degree if self.comps else other.degree
        out = TensorForm(degree, max(self.upper, other.upper),
                         max(self.lower, other.lower), dict(self.comps))
        for key, fp in other.comps.items():
            merged = fp_add(out.comps.get(key, {}), fp)
            if merged:
                out.comps[key] = merged
            else:
                out.comps.pop(key, None)
        return out

    def __sub__(self, other: "TensorForm") -> "TensorForm":
        return self + (-other)

    def __neg__(self) -> "TensorForm":
        out = TensorForm(self.degree, self.upper, self.lower, {})
        for key, fp in self.comps.items():
            out.comps[key] = {m: -v for m, v in fp.items()}
        return out

    def scale(self, factor) -> "TensorForm":
        out = TensorForm(self.degree, self.upper, self.lower, {})
        for key, fp in self.comps.items():
            scaled = fp_scale(fp, factor)
            if scaled:
                out.comps[key] = scaled
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorForm):
            return NotImplemented
        keys = set(self.comps) | set(other.comps)
        for key in keys:
            a = self.comps.get(key, {})
            b = other.comps.get(key, {})
            for midx in set(a) | set(b):
                if a.get(midx, ZERO) != b.get(midx, ZERO):
                    return False
        return True

    def __hash__(self):
        raise TypeError("TensorForm is not hashable")

    def __repr__(self):
        n = sum(len(fp) for fp in self.comps.values())
        return (f"TensorForm(degree={self.degree}, valence=({self.upper},{self.lower}), "
                f"{n} nonzero coefficients)")


def wedge(a: TensorForm, b: TensorForm) -> TensorForm:
    """Graded product; frame-index slots concatenate (upper+upper, lower+lower)."""
    degree = a.degree + b.degree
    out = TensorForm(degree, a.upper + b.upper, a.lower + b.lower, {})
    if degree > 3:
        return TensorForm.zero(3, a.upper + b.upper, a.lower + b.lower)
    for (ua, la), fpa in a.comps.items():
        for (ub, lb), fpb in b.comps.items():
            fp = fp_wedge(fpa, fpb)
            if fp:
                out.add_to_part(ua + ub, la + lb, fp)
    return out


def d(a: TensorForm) -> TensorForm:
    """Componentwise coordinate exterior derivative; frame indices untouched."""
    if a.degree >= 3:
        return TensorForm.zero(3, a.upper, a.lower)
    out = TensorForm(a.degree + 1, a.upper, a.lower, {})
    for key, fp in a.comps.items():
        df = fp_d(fp)
        if df:
            out.comps[key] = df
    return out


def interior(v: VectorField, a: TensorForm) -> TensorForm:
    """Interior product: graded contraction on the first form slot."""
    if a.degree < 1:
        raise ValueError("interior product requires a form of degree >= 1")
    out = TensorForm(a.degree - 1, a.upper, a.lower, {})
    for key, fp in a.comps.items():
        contracted = fp_interior(v.components, fp)
        if contracted:
            out.comps[key] = contracted
    return out


TO_FRAME = "to-frame"
TO_COORDINATE = "to-coordinate"


def change_basis(a: TensorForm, frame, direction: str) -> TensorForm:
    """Rewrite the form part between the coordinate and orthonormal-frame bases.

    frame must expose .matrix (rows = frame index, columns = coordinate index)
    and .inverse (rows = coordinate index, columns = frame index), both 3x3
    ScalarField grids; the round trip is the identity.
    """
    if direction == TO_FRAME:
        matrix = frame.inverse
    elif direction == TO_COORDINATE:
        matrix = frame.matrix
    else:
        raise ValueError(f"unknown direction {direction!r}")
    out = TensorForm(a.degree, a.upper, a.lower, {})
    for key, fp in a.comps.items():
        moved = fp_transform(fp, matrix, a.degree)
        if moved:
            out.comps[key] = moved
    return out


def hodge(a: TensorForm, frame) -> TensorForm:
    """Hodge map: convert to the frame basis, apply the epsilon rules, convert back."""
    in_frame = change_basis(a, frame, TO_FRAME)
    out = TensorForm(3 - a.degree, a.upper, a.lower, {})
    for key, fp in in_frame.comps.items():
        out.comps[key] = fp_hodge(fp, a.degree)
    return change_basis(out, frame, TO_COORDINATE)
