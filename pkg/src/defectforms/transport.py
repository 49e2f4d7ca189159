"""Floating-point transport and integration experiments.

Curves and patches are piecewise-polynomial (the coefficient ring has no
trigonometric functions, so loops are squares/triangles or polynomial arcs).
Quadrature is Gauss-Legendre, parallel transport is classical fixed-step RK4,
and the scalar-product drift experiment integrates its line prediction along
the transported solutions in the same ODE state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import MultiPoly, PoleError, ScalarField
from .exterior import AXES, TensorForm
from .geometry import Geometry, cartan_tensors, mat_identity

UNIT_INTERVAL_NODES = {}


class TransportError(Exception):
    pass


class OrientationError(TransportError):
    """Coframe determinant changed sign at an evaluation point."""


@dataclass(frozen=True)
class NumericConfig:
    ode_steps: int = 4096
    quad_order: int = 16
    tol: float = 1e-9

    def __post_init__(self):
        if self.ode_steps < 16:
            raise ValueError("ode_steps must be at least 16")
        if self.quad_order < 4:
            raise ValueError("quad_order must be at least 4")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


DEFAULT_NUMERIC_CONFIG = NumericConfig()


@dataclass(frozen=True)
class FrameVector:
    components: tuple

    @staticmethod
    def of(a, b, c) -> "FrameVector":
        return FrameVector((float(a), float(b), float(c)))


def _poly1(coeffs) -> MultiPoly:
    """Univariate polynomial in the curve parameter (stored on the x1 slot)."""
    return MultiPoly({(k, 0, 0): Fraction(c) for k, c in enumerate(coeffs)})


class PiecewiseCurve:
    """Ordered polynomial segments [0,1] -> R^3 with exactly matching endpoints."""

    def __init__(self, segments):
        if not segments:
            raise TransportError("a curve needs at least one segment")
        self.segments = [tuple(seg) for seg in segments]
        for seg in self.segments:
            if len(seg) != 3:
                raise TransportError("each segment needs three coordinate polynomials")
        for prev, nxt in zip(self.segments, self.segments[1:]):
            if self._point(prev, 1) != self._point(nxt, 0):
                raise TransportError("consecutive segment endpoints do not coincide")
        self.closed = self._point(self.segments[-1], 1) == self._point(self.segments[0], 0)

    @staticmethod
    def _point(segment, t):
        t = Fraction(t)
        return tuple(p.evaluate(t, Fraction(0), Fraction(0)) for p in segment)

    @staticmethod
    def from_points(points) -> "PiecewiseCurve":
        """Polygonal curve through exact rational points."""
        segments = []
        for start, end in zip(points, points[1:]):
            seg = []
            for i in range(3):
                a = Fraction(start[i])
                b = Fraction(end[i])
                seg.append(_poly1([a, b - a]))
            segments.append(tuple(seg))
        return PiecewiseCurve(segments)

    @staticmethod
    def unit_square_xy() -> "PiecewiseCurve":
        return PiecewiseCurve.from_points(
            [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 0)])


class Patch:
    """Polynomial map [0,1]^2 -> R^3; u and v live on the x1/x2 slots."""

    def __init__(self, components):
        self.components = tuple(components)
        if len(self.components) != 3:
            raise TransportError("a patch needs three coordinate polynomials")

    @staticmethod
    def unit_square_xy() -> "Patch":
        return Patch((MultiPoly.variable(1), MultiPoly.variable(2), MultiPoly(None)))

    @staticmethod
    def unit_square_normal_to(axis: int) -> "Patch":
        comps = [MultiPoly(None), MultiPoly(None), MultiPoly(None)]
        others = [i for i in (1, 2, 3) if i != axis]
        comps[others[0] - 1] = MultiPoly.variable(1)
        comps[others[1] - 1] = MultiPoly.variable(2)
        return Patch(comps)


# ---------------------------------------------------------------------------
# Compiled evaluation
# ---------------------------------------------------------------------------

def _compile_poly(p: MultiPoly):
    terms = [(float(c), i, j, k) for (i, j, k), c in sorted(p.terms.items())]

    def run(x1: float, x2: float, x3: float) -> float:
        total = 0.0
        for c, i, j, k in terms:
            total += c * x1**i * x2**j * x3**k
        return total
    return run


def compile_field(f: ScalarField, tol: float = 1e-12):
    num = _compile_poly(f.num)
    den = _compile_poly(f.den)

    def run(x1: float, x2: float, x3: float) -> float:
        d = den(x1, x2, x3)
        if abs(d) < tol:
            raise PoleError(f"denominator ~ 0 at ({x1}, {x2}, {x3})")
        return num(x1, x2, x3) / d
    return run


def eval_form(form: TensorForm, point, tol: float = 1e-12) -> dict:
    """IEEE-double values of every coefficient at a float point.

    Returns {(upper, lower, multi-index): float}; raises PoleError near poles.
    """
    x1, x2, x3 = (float(point[0]), float(point[1]), float(point[2]))
    out = {}
    for (u, l), fp in sorted(form.comps.items()):
        for midx in sorted(fp):
            out[(u, l, midx)] = compile_field(fp[midx], tol)(x1, x2, x3)
    return out


def _gauss_nodes(order: int):
    if order not in UNIT_INTERVAL_NODES:
        x, w = np.polynomial.legendre.leggauss(order)
        UNIT_INTERVAL_NODES[order] = ((x + 1.0) / 2.0, w / 2.0)
    return UNIT_INTERVAL_NODES[order]


class _OrientationGuard:
    def __init__(self, geom: Geometry, tol: float):
        self.det = compile_field(geom.frame.det, tol)

    def check(self, x1, x2, x3):
        if self.det(x1, x2, x3) <= 0.0:
            raise OrientationError(
                f"coframe determinant not positive at ({x1}, {x2}, {x3})")


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def line_integral(form: TensorForm, curve: PiecewiseCurve,
                  cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> float:
    """Gauss-Legendre quadrature of a scalar-valued 1-form pulled back to the curve."""
    if form.degree != 1 and not form.is_structurally_zero():
        raise TransportError("line_integral needs a 1-form")
    coeffs = [compile_field(form.component((), (), (i,)), cfg.tol) for i in AXES]
    nodes, weights = _gauss_nodes(cfg.quad_order)
    total = 0.0
    for seg in curve.segments:
        gamma = [_compile_poly(p) for p in seg]
        gamma_dot = [_compile_poly(p.diff(1)) for p in seg]
        for t, w in zip(nodes, weights):
            x = [g(t, 0.0, 0.0) for g in gamma]
            val = 0.0
            for i in range(3):
                dot = gamma_dot[i](t, 0.0, 0.0)
                if dot:
                    val += coeffs[i](x[0], x[1], x[2]) * dot
            total += w * val
    return total


def surface_integral(form: TensorForm, patch: Patch,
                     cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> float:
    """Tensor-product Gauss-Legendre quadrature of a scalar 2-form over a patch."""
    if form.degree != 2 and not form.is_structurally_zero():
        raise TransportError("surface_integral needs a 2-form")
    pairs = ((1, 2), (1, 3), (2, 3))
    coeffs = {p: compile_field(form.component((), (), p), cfg.tol) for p in pairs}
    smap = [_compile_poly(p) for p in patch.components]
    du = [_compile_poly(p.diff(1)) for p in patch.components]
    dv = [_compile_poly(p.diff(2)) for p in patch.components]
    nodes, weights = _gauss_nodes(cfg.quad_order)
    total = 0.0
    for u, wu in zip(nodes, weights):
        for v, wv in zip(nodes, weights):
            x = [m(u, v, 0.0) for m in smap]
            jac_u = [m(u, v, 0.0) for m in du]
            jac_v = [m(u, v, 0.0) for m in dv]
            val = 0.0
            for (i, j) in pairs:
                area = jac_u[i - 1] * jac_v[j - 1] - jac_u[j - 1] * jac_v[i - 1]
                if area:
                    val += coeffs[(i, j)](x[0], x[1], x[2]) * area
            total += wu * wv * val
    return total


# ---------------------------------------------------------------------------
# Parallel transport and the scalar-product drift experiment
# ---------------------------------------------------------------------------

def _connection_matrix(geom: Geometry, tol: float):
    entries = {}
    for a in AXES:
        for b in AXES:
            fp = geom.conn.part(a, b)
            if fp:
                entries[(a, b)] = [(i, compile_field(fp.get((i,), _SF_ZERO), tol))
                                   for i in AXES if (i,) in fp]
    return entries


_SF_ZERO = ScalarField.constant(0)


def _transport_rhs(entries, x, gamma_dot, state_u):
    out = [0.0, 0.0, 0.0]
    for (a, b), comps in entries.items():
        coeff = 0.0
        for i, fn in comps:
            dot = gamma_dot[i - 1]
            if dot:
                coeff += fn(x[0], x[1], x[2]) * dot
        if coeff:
            out[a - 1] -= coeff * state_u[b - 1]
    return out


def parallel_transport(geom: Geometry, curve: PiecewiseCurve, start: FrameVector,
                       cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> FrameVector:
    """Transport a frame vector along the curve with fixed-step RK4."""
    entries = _connection_matrix(geom, cfg.tol)
    guard = _OrientationGuard(geom, cfg.tol)
    u = list(start.components)
    for seg in curve.segments:
        gamma = [_compile_poly(p) for p in seg]
        dot = [_compile_poly(p.diff(1)) for p in seg]
        h = 1.0 / cfg.ode_steps
        for n in range(cfg.ode_steps):
            t0 = n * h

            def f(t, y):
                x = [g(t, 0.0, 0.0) for g in gamma]
                gd = [g(t, 0.0, 0.0) for g in dot]
                return _transport_rhs(entries, x, gd, y)

            guard.check(*[g(t0, 0.0, 0.0) for g in gamma])
            k1 = f(t0, u)
            k2 = f(t0 + h / 2, [u[i] + h / 2 * k1[i] for i in range(3)])
            k3 = f(t0 + h / 2, [u[i] + h / 2 * k2[i] for i in range(3)])
            k4 = f(t0 + h, [u[i] + h * k3[i] for i in range(3)])
            u = [u[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
                 for i in range(3)]
    return FrameVector(tuple(u))


def product_drift(geom: Geometry, loop: PiecewiseCurve, start_u: FrameVector,
                  start_v: FrameVector,
                  cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> tuple:
    """Drift of the scalar product around a loop and its line-integral prediction.

    Both vectors are transported together; the prediction integrates the
    non-metricity against the transported solutions in the same RK4 state, so
    the two outputs agree to the integrator's accuracy.
    """
    if not loop.closed:
        raise TransportError("product_drift needs a closed curve")
    entries = _connection_matrix(geom, cfg.tol)
    guard = _OrientationGuard(geom, cfg.tol)
    q = cartan_tensors(geom)[0]
    q_entries = {}
    for a in AXES:
        for b in AXES:
            fp = q.part((), (a, b))
            if fp:
                q_entries[(a, b)] = [(i, compile_field(fp.get((i,), _SF_ZERO), cfg.tol))
                                     for i in AXES if (i,) in fp]

    state = list(start_u.components) + list(start_v.components) + [0.0]

    def f(gamma, dot, t, y):
        x = [g(t, 0.0, 0.0) for g in gamma]
        gd = [g(t, 0.0, 0.0) for g in dot]
        du = _transport_rhs(entries, x, gd, y[0:3])
        dv = _transport_rhs(entries, x, gd, y[3:6])
        acc = 0.0
        for (a, b), comps in q_entries.items():
            coeff = 0.0
            for i, fn in comps:
                if gd[i - 1]:
                    coeff += fn(x[0], x[1], x[2]) * gd[i - 1]
            if coeff:
                acc += coeff * y[a - 1] * y[3 + b - 1]
        return du + dv + [-2.0 * acc]

    for seg in loop.segments:
        gamma = [_compile_poly(p) for p in seg]
        dot = [_compile_poly(p.diff(1)) for p in seg]
        h = 1.0 / cfg.ode_steps
        for n in range(cfg.ode_steps):
            t0 = n * h
            guard.check(*[g(t0, 0.0, 0.0) for g in gamma])
            k1 = f(gamma, dot, t0, state)
            k2 = f(gamma, dot, t0 + h / 2,
                   [state[i] + h / 2 * k1[i] for i in range(7)])
            k3 = f(gamma, dot, t0 + h / 2,
                   [state[i] + h / 2 * k2[i] for i in range(7)])
            k4 = f(gamma, dot, t0 + h, [state[i] + h * k3[i] for i in range(7)])
            state = [state[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
                     for i in range(7)]

    end_product = sum(state[i] * state[3 + i] for i in range(3))
    start_product = sum(start_u.components[i] * start_v.components[i]
                        for i in range(3))
    return (end_product - start_product, state[6])


# ---------------------------------------------------------------------------
# Burgers and Frank vectors
# ---------------------------------------------------------------------------

def _is_identity_frame(geom: Geometry) -> bool:
    eye = mat_identity()
    for i in range(3):
        for j in range(3):
            if not (geom.frame.matrix[i][j] - eye[i][j]).is_structurally_zero():
                return False
    return True


_STAR_DX = {
    1: ((2, 3), 1),    # *dx1 = dx2 ^ dx3
    2: ((1, 3), -1),   # *dx2 = -dx1 ^ dx3
    3: ((1, 2), 1),    # *dx3 = dx1 ^ dx2
}


def burgers_frank(geom: Geometry, densities, patch: Patch,
                  cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> tuple:
    """Surface fluxes of the defect densities (Cartesian regime only).

    The defining integrals are stated for the Cartesian coframe, so any other
    coframe is rejected rather than silently reinterpreted.
    """
    if not _is_identity_frame(geom):
        raise TransportError("Burgers/Frank integrals require the identity coframe")
    from .exterior import eps
    coords = [ScalarField.variable(i) for i in AXES]
    burgers = []
    frank = []
    for l in AXES:
        fp = {}
        for p in AXES:
            coeff = densities.alpha[p - 1][l - 1]
            for qq in AXES:
                for r in AXES:
                    e = eps(l, qq, r)
                    if e:
                        coeff = coeff + densities.theta[p - 1][qq - 1] \
                            * coords[r - 1] * e
            if coeff.is_structurally_zero():
                continue
            midx, sign = _STAR_DX[p]
            fp[midx] = fp.get(midx, _SF_ZERO) + coeff * sign
        burgers.append(surface_integral(TensorForm.from_part(2, fp), patch, cfg))
    for qq in AXES:
        fp = {}
        for p in AXES:
            coeff = densities.theta[p - 1][qq - 1]
            if coeff.is_structurally_zero():
                continue
            midx, sign = _STAR_DX[p]
            fp[midx] = fp.get(midx, _SF_ZERO) + coeff * sign
        frank.append(surface_integral(TensorForm.from_part(2, fp), patch, cfg))
    return (tuple(burgers), tuple(frank))


def stokes_residual(form: TensorForm, patch: Patch, boundary: PiecewiseCurve,
                    cfg: NumericConfig = DEFAULT_NUMERIC_CONFIG) -> float:
    """|boundary integral - surface integral of d(form)|; small by Stokes' theorem."""
    from .exterior import d as exterior_d
    line = line_integral(form, boundary, cfg)
    surf = surface_integral(exterior_d(form), patch, cfg)
    return abs(line - surf)
