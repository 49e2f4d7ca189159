"""Defect densities in both formulations.

The review theory pairs dislocation density with torsion and the two
disclination densities with the antisymmetric/symmetric curvature parts; the
teleparallel theory pairs disclination with non-metricity and dislocation with
the antisymmetric defect 1-form, with curvature required to vanish.  All maps
here are exact linear maps with exact inverses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .field import (
    DEFAULT_ZERO_CONFIG,
    Point,
    ScalarField,
    ZERO,
    ZeroTestConfig,
    evaluate,
    is_zero,
)
from .exterior import AXES, TensorForm, eps, hodge, interior, wedge
from .geometry import (
    Coframe,
    Connection,
    Geometry,
    cartan_tensors,
    connection_split,
    cov_d_with,
    form_is_zero,
)

_HALF = ScalarField.constant(Fraction(1, 2))


class DefectError(Exception):
    pass


@dataclass(frozen=True)
class TheoryParams:
    """Unit-conversion constant C and the constants it determines."""

    C: Fraction
    A: Fraction
    B: Fraction
    K: Fraction


def solve_constants(c) -> TheoryParams:
    """Solve 3AC = 1 and 5AC + 10BC = 1 exactly, with the second trace pinned to zero."""
    c = Fraction(c)
    if c == 0:
        raise DefectError("the unit conversion constant C must be nonzero")
    a = Fraction(1, 3) / c
    b = (1 - 5 * a * c) / (10 * c)
    return TheoryParams(C=c, A=a, B=b, K=c)


@dataclass
class DefectDensities:
    """Dislocation, rotational disclination, and metrical disclination densities."""

    alpha: tuple                 # 3x3 ScalarField
    theta: tuple                 # 3x3 ScalarField
    zeta: tuple                  # 3x3x3 ScalarField, symmetric in the first two slots
    theory_tag: str              # "RCW" or "GT"


def zero_matrix():
    return tuple(tuple(ZERO for _ in range(3)) for _ in range(3))


def zero_zeta():
    return tuple(tuple(tuple(ZERO for _ in range(3)) for _ in range(3))
                 for _ in range(3))


# ---------------------------------------------------------------------------
# Frame-component extraction
# ---------------------------------------------------------------------------

def nonmetricity_components(geom: Geometry) -> dict:
    """Q_abc = iota_c Q_ab in the orthonormal frame."""
    q = cartan_tensors(geom)[0]
    frame = geom.frame
    out = {}
    for a in AXES:
        for b in AXES:
            part = TensorForm.from_part(1, q.part((), (a, b)))
            if part.is_structurally_zero():
                for c in AXES:
                    out[(a, b, c)] = ZERO
                continue
            for c in AXES:
                out[(a, b, c)] = frame.interior(c, part).component((), (), ())
    return out


def torsion_components(geom: Geometry) -> dict:
    """T^a_bc = iota_c iota_b T^a in the orthonormal frame."""
    t = cartan_tensors(geom)[1]
    frame = geom.frame
    out = {}
    for a in AXES:
        part = TensorForm.from_part(2, t.part((a,), ()))
        if part.is_structurally_zero():
            for b in AXES:
                for c in AXES:
                    out[(a, b, c)] = ZERO
            continue
        for b in AXES:
            inner = frame.interior(b, part)
            for c in AXES:
                out[(a, b, c)] = frame.interior(c, inner).component((), (), ())
    return out


def weyl_components(geom: Geometry) -> tuple:
    """First trace Q_c of the non-metricity."""
    qc = nonmetricity_components(geom)
    return tuple(sum((qc[(a, a, c)] for a in AXES), ZERO) for c in AXES)


def second_trace_components(geom: Geometry) -> tuple:
    """Second trace P_a = iota^b Q_ab."""
    qc = nonmetricity_components(geom)
    return tuple(sum((qc[(a, b, b)] for b in AXES), ZERO) for a in AXES)


@dataclass
class Traces:
    weyl_components: tuple
    second_trace: tuple


def traces(geom: Geometry) -> Traces:
    return Traces(weyl_components=weyl_components(geom),
                  second_trace=second_trace_components(geom))


# ---------------------------------------------------------------------------
# Review-theory densities and their inverses
# ---------------------------------------------------------------------------

def _scalar_of(form: TensorForm) -> ScalarField:
    return form.component((), (), ())


def rcw_densities(geom: Geometry) -> DefectDensities:
    """Dislocation from torsion, disclinations from the curvature parts."""
    frame = geom.frame
    _, t, r = cartan_tensors(geom)

    t_parts = [TensorForm.from_part(2, t.part((a,), ())) for a in AXES]
    alpha = tuple(
        tuple(_scalar_of(hodge(wedge(frame.one_form(a), t_parts[b - 1]), frame))
              for b in AXES)
        for a in AXES)

    r_anti = {}
    r_sym = {}
    for c in AXES:
        for dd in AXES:
            rcd = TensorForm.from_part(2, r.part((c,), (dd,)))
            rdc = TensorForm.from_part(2, r.part((dd,), (c,)))
            r_anti[(c, dd)] = (rcd - rdc).scale(_HALF)
            r_sym[(c, dd)] = (rcd + rdc).scale(_HALF)

    theta = []
    for a in AXES:
        row = []
        for b in AXES:
            acc = ZERO
            for c in AXES:
                for dd in AXES:
                    e = eps(b, c, dd)
                    if not e:
                        continue
                    term = _scalar_of(hodge(
                        wedge(frame.one_form(a), r_anti[(c, dd)]), frame))
                    acc = acc + term * Fraction(e, 2)
            row.append(acc)
        theta.append(tuple(row))
    theta = tuple(theta)

    zeta = tuple(
        tuple(
            tuple(_scalar_of(hodge(wedge(r_sym[(a, b)], frame.one_form(c)), frame))
                  for c in AXES)
            for b in AXES)
        for a in AXES)

    return DefectDensities(alpha=alpha, theta=theta, zeta=zeta, theory_tag="RCW")


def rcw_reconstruct(densities: DefectDensities, frame: Coframe):
    """Torsion and both curvature parts back from the densities (exact inverse)."""
    star_e = [hodge(frame.one_form(b), frame) for b in AXES]

    torsion = TensorForm(2, 1, 0, {})
    for a in AXES:
        acc = TensorForm.zero(2)
        for b in AXES:
            acc = acc + star_e[b - 1].scale(densities.alpha[b - 1][a - 1])
        torsion.set_part((a,), (), acc.part())

    r_anti = TensorForm(2, 0, 2, {})
    for a in AXES:
        for b in AXES:
            acc = TensorForm.zero(2)
            for c in AXES:
                e = eps(a, b, c)
                if not e:
                    continue
                for dd in AXES:
                    acc = acc + star_e[dd - 1].scale(
                        densities.theta[dd - 1][c - 1] * e)
            r_anti.set_part((), (a, b), acc.part())

    r_sym = TensorForm(2, 0, 2, {})
    for a in AXES:
        for b in AXES:
            acc = TensorForm.zero(2)
            for c in AXES:
                acc = acc + star_e[c - 1].scale(densities.zeta[a - 1][b - 1][c - 1])
            r_sym.set_part((), (a, b), acc.part())

    return torsion, r_anti, r_sym


# ---------------------------------------------------------------------------
# Teleparallel-theory densities
# ---------------------------------------------------------------------------

def theta_from_nonmetricity(qc: dict, params: TheoryParams) -> tuple:
    """Disclination density from non-metricity components (traceless by construction)."""
    a_const = ScalarField.constant(params.A)
    b_const = ScalarField.constant(params.B)
    weyl = [sum((qc[(k, k, c)] for k in AXES), ZERO) for c in AXES]
    out = []
    for a in AXES:
        row = []
        for b in AXES:
            acc = ZERO
            for c in AXES:
                for dd in AXES:
                    e = eps(a, c, dd)
                    if e:
                        acc = acc + qc[(b, c, dd)] * (a_const * e)
            for c in AXES:
                e = eps(a, b, c)
                if e:
                    acc = acc + weyl[c - 1] * (b_const * e)
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def gt_theta(geom: Geometry, params: TheoryParams) -> tuple:
    return theta_from_nonmetricity(nonmetricity_components(geom), params)


def q_components_from_theta(theta, params: TheoryParams) -> dict:
    """Non-metricity components postulated from a traceless disclination density."""
    c_const = ScalarField.constant(params.C)
    k_const = ScalarField.constant(params.K)
    out = {}
    for b in AXES:
        for c in AXES:
            for dd in AXES:
                acc = ZERO
                for k in AXES:
                    e = eps(k, c, dd)
                    if e:
                        acc = acc + theta[k - 1][b - 1] * (c_const * e)
                    e = eps(k, b, dd)
                    if e:
                        acc = acc + theta[k - 1][c - 1] * (c_const * e)
                if b == c:
                    for m in AXES:
                        for n in AXES:
                            e = eps(dd, m, n)
                            if e:
                                acc = acc + theta[m - 1][n - 1] * (k_const * e)
                out[(b, c, dd)] = acc
    return out


def gt_q_from_theta(theta, params: TheoryParams, frame: Coframe,
                    cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG) -> TensorForm:
    """Build the non-metricity 1-form from a traceless disclination density."""
    trace = sum((theta[a - 1][a - 1] for a in AXES), ZERO)
    if not is_zero(trace, cfg):
        raise DefectError("disclination density must be traceless")
    comps = q_components_from_theta(theta, params)
    q = TensorForm(1, 0, 2, {})
    for b in AXES:
        for c in AXES:
            acc = TensorForm.zero(1)
            for dd in AXES:
                coeff = comps[(b, c, dd)]
                if not coeff.is_structurally_zero():
                    acc = acc + frame.one_form(dd).scale(coeff)
            q.set_part((), (b, c), acc.part())
    return q


def alpha_from_components(tc: dict, theta, params: TheoryParams) -> tuple:
    """Dislocation density: pure torsion part shifted by the disclination."""
    c4 = ScalarField.constant(4 * params.C)
    c1 = ScalarField.constant(params.C)
    out = []
    for a in AXES:
        row = []
        for b in AXES:
            acc = ZERO
            for m in AXES:
                for n in AXES:
                    e = eps(a, m, n)
                    if e:
                        acc = acc + tc[(b, m, n)] * Fraction(e, 2)
            acc = acc + theta[a - 1][b - 1] * c4 - theta[b - 1][a - 1] * c1
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def gt_alpha(geom: Geometry, params: TheoryParams) -> tuple:
    return alpha_from_components(torsion_components(geom), gt_theta(geom, params),
                                 params)


def gt_densities(geom: Geometry, params: TheoryParams) -> DefectDensities:
    theta = gt_theta(geom, params)
    alpha = alpha_from_components(torsion_components(geom), theta, params)
    return DefectDensities(alpha=alpha, theta=theta, zeta=zero_zeta(),
                           theory_tag="GT")


def gt_torsion_from_densities(alpha, theta, params: TheoryParams,
                              frame: Coframe) -> TensorForm:
    """Torsion back from the teleparallel densities (exact inverse of the pairing)."""
    c4 = ScalarField.constant(4 * params.C)
    c1 = ScalarField.constant(params.C)
    star_e = [hodge(frame.one_form(b), frame) for b in AXES]
    torsion = TensorForm(2, 1, 0, {})
    for a in AXES:
        acc = TensorForm.zero(2)
        for b in AXES:
            coeff = (alpha[b - 1][a - 1] - theta[b - 1][a - 1] * c4
                     + theta[a - 1][b - 1] * c1)
            if not coeff.is_structurally_zero():
                acc = acc + star_e[b - 1].scale(coeff)
        torsion.set_part((a,), (), acc.part())
    return torsion


def alpha_via_defect_form(geom: Geometry) -> tuple:
    """Dislocation density through the antisymmetric defect 1-form route."""
    frame = geom.frame
    split = connection_split(geom)
    out = []
    for a in AXES:
        row = []
        for b in AXES:
            acc = TensorForm.zero(3)
            for c in AXES:
                part = TensorForm.from_part(1, split.antisym_part.part((), (b, c)))
                if part.is_structurally_zero():
                    continue
                acc = acc + wedge(wedge(part, frame.one_form(c)), frame.one_form(a))
            row.append(_scalar_of(hodge(acc, frame)))
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Observable diagnostics for the teleparallel postulates."""

    P_zero: bool        # second non-metricity trace vanishes
    Q_in_image: bool    # non-metricity is exactly reproduced from its disclination
    R_zero: bool        # full curvature vanishes (teleparallel regime)


def gt_admissibility(geom: Geometry, params: TheoryParams,
                     cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG) -> AdmissibilityReport:
    p = second_trace_components(geom)
    p_zero = all(is_zero(v, cfg) for v in p)
    theta = gt_theta(geom, params)
    reproduced = gt_q_from_theta(theta, params, geom.frame, cfg)
    q = cartan_tensors(geom)[0]
    q_in_image = form_is_zero(q - reproduced, cfg)
    r_zero = form_is_zero(cartan_tensors(geom)[2], cfg)
    return AdmissibilityReport(P_zero=p_zero, Q_in_image=q_in_image, R_zero=r_zero)


# ---------------------------------------------------------------------------
# Linear limit (two-scale numeric order check)
# ---------------------------------------------------------------------------

_REFERENCE_POINTS = (
    Point.of(Fraction(2, 5), Fraction(1, 3), Fraction(1, 7)),
    Point.of(Fraction(-1, 4), Fraction(2, 7), Fraction(3, 5)),
    Point.of(Fraction(1, 9), Fraction(-2, 5), Fraction(1, 2)),
)


def linearized_continuity(geom: Geometry, scale) -> tuple:
    """Residual magnitudes of the linear-limit equations at a rescaled defect part.

    The defect part of the connection is rescaled by the given factor, the
    densities are recomputed, and the residuals of the two linearized
    equations are evaluated exactly at a reference point, returned as floats.
    """
    scale = Fraction(scale)
    split = connection_split(geom)
    lc = split.levi_civita
    entries = {}
    for a in AXES:
        for b in AXES:
            fp = dict(lc.part(a, b))
            defect_fp = split.defect_one_form.part((), (a, b))
            for m, v in defect_fp.items():
                scaled = v * scale
                cur = fp.get(m)
                cur = scaled if cur is None else cur + scaled
                if cur.is_structurally_zero():
                    fp.pop(m, None)
                else:
                    fp[m] = cur
            entries[(a, b)] = fp
    rescaled = Geometry(geom.frame, Connection.from_entries(entries))
    densities = rcw_densities(rescaled)

    res1 = []
    res2 = []
    d_alpha = _matrix_div_first(lc, geom.frame, densities.alpha)
    d_theta = _matrix_div_first(lc, geom.frame, densities.theta)
    for a in AXES:
        rot = ZERO
        for b in AXES:
            for c in AXES:
                e = eps(a, b, c)
                if e:
                    rot = rot + densities.theta[b - 1][c - 1] * e
        res1.append(d_alpha[a - 1] - rot)
        res2.append(d_theta[a - 1])

    return (_magnitude_at_reference(res1), _magnitude_at_reference(res2))


def _matrix_div_first(conn: Connection, frame: Coframe, matrix) -> list:
    """D_b M^{ba} for a (2,0)-valued 0-form given as a 3x3 ScalarField matrix."""
    form = TensorForm(0, 2, 0, {})
    for b in AXES:
        for a in AXES:
            value = matrix[b - 1][a - 1]
            if not value.is_structurally_zero():
                form.comps[((b, a), ())] = {(): value}
    derivative = cov_d_with(conn, form)
    out = []
    for a in AXES:
        acc = ZERO
        for b in AXES:
            part = TensorForm.from_part(1, derivative.part((b, a), ()))
            if part.is_structurally_zero():
                continue
            acc = acc + frame.interior(b, part).component((), (), ())
        out.append(acc)
    return out


def _magnitude_at_reference(residuals) -> float:
    for point in _REFERENCE_POINTS:
        try:
            values = [evaluate(r, point) for r in residuals]
        except Exception:
            continue
        return math.sqrt(float(sum(v * v for v in values)))
    raise DefectError("all reference points hit a pole")
