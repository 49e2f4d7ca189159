"""Named geometries and seeded random geometry factories used across the suite.

G0: trivial flat geometry (identity coframe, zero connection).
G1: shear gauge lambda = I + x*E12 on the identity coframe (general teleparallel).
G2: Cayley rotation gauge S = z*(E12 - E21) (metric teleparallel).
G3: symmetric-teleparallel coframe from the shear gauge and coordinate fields.
G4: conformal gauge f = 1 + x with the G2 rotation (pure-trace non-metricity).
G5: shear gauge lambda = I + z*E12; its non-metricity has vanishing second trace.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .field import MultiPoly, ONE, ScalarField, X1, X2, X3, ZERO, differentiate
from .exterior import AXES, FormPart, TensorForm
from .geometry import (
    Coframe,
    Connection,
    GaugeField,
    Geometry,
    cayley_rotation,
    conformal_gauge,
    gauge_connection,
    levi_civita,
    mat_identity,
    mat_mul,
    symmetric_coframe,
)

COORD_FIELDS = (X1, X2, X3)


def shear_matrix(entry: ScalarField, row: int = 1, col: int = 2):
    """Identity plus a single off-diagonal entry (a unipotent shear)."""
    rows = [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]
    rows[row - 1][col - 1] = entry
    return tuple(tuple(r) for r in rows)


def antisym_matrix(v12: ScalarField, v13: ScalarField = ZERO, v23: ScalarField = ZERO):
    return ((ZERO, v12, v13),
            (-v12, ZERO, v23),
            (-v13, -v23, ZERO))


def g0() -> Geometry:
    return Geometry(Coframe.identity(), Connection.zero())


def g1() -> Geometry:
    gauge = GaugeField(shear_matrix(X1))
    return Geometry(Coframe.identity(), gauge_connection(gauge))


def g2() -> Geometry:
    gauge = cayley_rotation(antisym_matrix(X3))
    return Geometry(Coframe.identity(), gauge_connection(gauge))


def g3() -> Geometry:
    gauge = GaugeField(shear_matrix(X1))
    frame = symmetric_coframe(gauge, COORD_FIELDS)
    return Geometry(frame, gauge_connection(gauge))


def g4() -> Geometry:
    gauge = conformal_gauge(ONE + X1, antisym_matrix(X3))
    return Geometry(Coframe.identity(), gauge_connection(gauge))


def g5() -> Geometry:
    """Shear by z: general teleparallel with vanishing second non-metricity trace."""
    gauge = GaugeField(shear_matrix(X3))
    return Geometry(Coframe.identity(), gauge_connection(gauge))


NAMED = {"g0": g0, "g1": g1, "g2": g2, "g3": g3, "g4": g4, "g5": g5}


# ---------------------------------------------------------------------------
# Seeded random factories.  Coframes are products of unipotent shears, so the
# determinant is exactly 1 and inverses stay polynomial.
# ---------------------------------------------------------------------------

def random_poly(rng: random.Random, degree: int = 1, terms: int = 2,
                bound: int = 2) -> ScalarField:
    out: dict = {}
    for _ in range(rng.randint(1, terms)):
        m = [0, 0, 0]
        for _ in range(rng.randint(0, degree)):
            m[rng.randrange(3)] += 1
        c = rng.randint(-bound, bound)
        if c:
            key = tuple(m)
            out[key] = out.get(key, 0) + c
    return ScalarField(MultiPoly({k: Fraction(v) for k, v in out.items()}))


def random_one_form_part(rng: random.Random, degree: int = 1, axes: int = 2) -> FormPart:
    fp: FormPart = {}
    for i in rng.sample(AXES, rng.randint(1, axes)):
        coeff = random_poly(rng, degree)
        if not coeff.is_structurally_zero():
            fp[(i,)] = coeff
    return fp


def random_coframe(rng: random.Random, degree: int = 1) -> Coframe:
    lower = [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]
    upper = [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]
    lower[2][0] = random_poly(rng, degree)
    lower[1][0] = random_poly(rng, degree)
    upper[0][1] = random_poly(rng, degree)
    upper[1][2] = random_poly(rng, degree)
    return Coframe(mat_mul(tuple(map(tuple, lower)), tuple(map(tuple, upper))))


def random_connection(rng: random.Random, degree: int = 1, entries: int = 4) -> Connection:
    picks = rng.sample([(a, b) for a in AXES for b in AXES], entries)
    return Connection.from_entries(
        {pair: random_one_form_part(rng, degree) for pair in picks})


def random_metric_affine(rng: random.Random, degree: int = 1) -> Geometry:
    """Generic geometry: non-metricity, torsion, and curvature all nonzero."""
    return Geometry(random_coframe(rng, degree), random_connection(rng, degree))


def random_antisym_connection(rng: random.Random, frame: Coframe,
                              degree: int = 1) -> Connection:
    """Levi-Civita plus a random antisymmetric part: metric compatible (Q = 0)."""
    lc = levi_civita(frame)
    beta = {}
    for a in AXES:
        for b in AXES:
            if a < b:
                beta[(a, b)] = random_one_form_part(rng, degree)
    entries = {}
    for a in AXES:
        for b in AXES:
            fp = dict(lc.part(a, b))
            if (a, b) in beta:
                for m, v in beta[(a, b)].items():
                    fp[m] = fp.get(m, ZERO) + v
            elif (b, a) in beta:
                for m, v in beta[(b, a)].items():
                    fp[m] = fp.get(m, ZERO) - v
            entries[(a, b)] = {m: v for m, v in fp.items()
                               if not v.is_structurally_zero()}
    return Connection.from_entries(entries)


def random_riemann_cartan(rng: random.Random, degree: int = 1) -> Geometry:
    frame = random_coframe(rng, degree)
    return Geometry(frame, random_antisym_connection(rng, frame, degree))


def random_semimetric(rng: random.Random, degree: int = 1) -> Geometry:
    """Connection with pure-trace non-metricity (and pure-trace metrical part)."""
    frame = random_coframe(rng, degree)
    base = random_antisym_connection(rng, frame, degree)
    trace = random_one_form_part(rng, degree)
    third = ScalarField.constant(Fraction(1, 3))
    entries = {}
    for a in AXES:
        for b in AXES:
            fp = dict(base.part(a, b))
            if a == b:
                for m, v in trace.items():
                    fp[m] = fp.get(m, ZERO) + third * v
            entries[(a, b)] = {m: v for m, v in fp.items()
                               if not v.is_structurally_zero()}
    return Geometry(frame, Connection.from_entries(entries))


def random_gauge(rng: random.Random, degree: int = 1, shears: int = 2) -> GaugeField:
    """Random product of unipotent shears (determinant exactly 1)."""
    acc = mat_identity()
    pairs = [(1, 2), (2, 3), (1, 3), (2, 1), (3, 2), (3, 1)]
    for row, col in rng.sample(pairs, shears):
        acc = mat_mul(acc, shear_matrix(random_poly(rng, degree), row, col))
    return GaugeField(acc)


def random_teleparallel(rng: random.Random, degree: int = 1) -> Geometry:
    """Flat (pure gauge) geometry; generically both torsion and non-metricity nonzero."""
    gauge = random_gauge(rng, degree)
    return Geometry(Coframe.identity(), gauge_connection(gauge))


def random_metric_teleparallel(rng: random.Random, degree: int = 1) -> Geometry:
    """Flat orthogonal-gauge geometry: torsion only (zero non-metricity)."""
    gauge = cayley_rotation(antisym_matrix(random_poly(rng, degree),
                                           random_poly(rng, degree),
                                           random_poly(rng, degree)))
    return Geometry(Coframe.identity(), gauge_connection(gauge))


def random_flat_coframe(rng: random.Random, degree: int = 1) -> Coframe:
    """Coframe whose metric is a pullback of the Euclidean one (flat base).

    Built as rotation * Jacobian of a triangular polynomial map, so the
    Riemannian curvature vanishes while the Levi-Civita connection does not.
    """
    phi1 = X1 + random_poly(rng, degree) * X2
    phi2 = X2 + random_poly(rng, degree) * X3
    phi3 = X3
    jac = tuple(tuple(differentiate(phi, i) for i in AXES)
                for phi in (phi1, phi2, phi3))
    rotation = cayley_rotation(antisym_matrix(random_poly(rng, 1)))
    return Coframe(mat_mul(rotation.matrix, jac))


def random_flat_riemann_cartan(rng: random.Random, degree: int = 1) -> Geometry:
    """Metric-compatible geometry over a flat base; used by the linear-limit check."""
    frame = random_flat_coframe(rng, degree)
    return Geometry(frame, random_antisym_connection(rng, frame, degree))


def constant_density_fixture() -> Geometry:
    """Exactly linear fixture: constant dislocation density, zero disclination.

    Identity coframe with connection M*dx3 for a constant antisymmetric M, so
    curvature vanishes exactly and torsion has constant coefficients.
    """
    m = antisym_matrix(ScalarField.constant(1), ScalarField.constant(2),
                       ScalarField.constant(-1))
    entries = {}
    for a in AXES:
        for b in AXES:
            coeff = m[a - 1][b - 1]
            if not coeff.is_structurally_zero():
                entries[(a, b)] = {(3,): coeff}
    return Geometry(Coframe.identity(), Connection.from_entries(entries))


def prescribed_torsion_geometry(components: dict) -> Geometry:
    """Identity-coframe geometry with the given torsion frame components.

    components maps (a, b, c) with b < c to the T^a coefficient of e^b ^ e^c;
    the realizing connection is omega^a_b = -(1/2) T^a_bc e^c.
    """
    entries: dict = {}
    half = ScalarField.constant(Fraction(1, 2))
    for (a, b, c), coeff in components.items():
        fp = entries.setdefault((a, b), {})
        fp[(c,)] = fp.get((c,), ZERO) - half * coeff
        fp = entries.setdefault((a, c), {})
        fp[(b,)] = fp.get((b,), ZERO) + half * coeff
    cleaned = {key: {m: v for m, v in fp.items() if not v.is_structurally_zero()}
               for key, fp in entries.items()}
    return Geometry(Coframe.identity(), Connection.from_entries(cleaned))


def random_traceless_matrix(rng: random.Random, degree: int = 0):
    """Random traceless 3x3 ScalarField matrix (constant entries by default)."""
    rows = [[random_poly(rng, degree) for _ in range(3)] for _ in range(3)]
    rows[2][2] = -(rows[0][0] + rows[1][1])
    return tuple(tuple(r) for r in rows)


def form_from_parts(degree: int, parts: dict) -> TensorForm:
    out = TensorForm(degree, 0, 0, {})
    merged: FormPart = {}
    for midx, value in parts.items():
        merged[tuple(midx)] = value
    out.set_part((), (), merged)
    return out
