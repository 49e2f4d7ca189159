"""Defect-density tests: both theories, round trips, constants, admissibility."""

import random
from fractions import Fraction

import pytest

from defectforms import fixtures
from defectforms.field import ONE, ScalarField, ZERO, parse_scalar
from defectforms.exterior import AXES, TensorForm, eps
from defectforms.geometry import Coframe, Geometry, cartan_tensors
from defectforms.defects import (
    DefectError,
    alpha_via_defect_form,
    gt_admissibility,
    gt_alpha,
    gt_densities,
    gt_q_from_theta,
    gt_theta,
    gt_torsion_from_densities,
    linearized_continuity,
    nonmetricity_components,
    rcw_densities,
    rcw_reconstruct,
    second_trace_components,
    solve_constants,
    theta_from_nonmetricity,
    torsion_components,
    weyl_components,
    zero_matrix,
)

sf = parse_scalar
PARAMS = solve_constants(1)


def _matrix_equal(m, expected):
    for a in range(3):
        for b in range(3):
            assert m[a][b] == expected[a][b], (a + 1, b + 1)


# ---------------------------------------------------------------------
# Constants (linear system of the unit-conversion appendix)
# ---------------------------------------------------------------------

def test_solve_constants_reference_values():
    p = solve_constants(1)
    assert (p.A, p.B, p.K) == (Fraction(1, 3), Fraction(-1, 15), 1)
    p = solve_constants(Fraction(2, 3))
    assert (p.A, p.B, p.K) == (Fraction(1, 2), Fraction(-1, 10), Fraction(2, 3))
    p = solve_constants(-3)
    assert (p.A, p.B, p.K) == (Fraction(-1, 9), Fraction(1, 45), -3)


def test_solve_constants_zero_rejected():
    with pytest.raises(DefectError):
        solve_constants(0)


def test_solve_constants_system_randomized(rng):
    for _ in range(10):
        c = Fraction(rng.randint(1, 40), rng.randint(1, 9)) * rng.choice((1, -1))
        p = solve_constants(c)
        assert 3 * p.A * p.C == 1
        assert 5 * p.A * p.C + 10 * p.B * p.C == 1
        assert p.K == p.C


# ---------------------------------------------------------------------
# Review-theory densities
# ---------------------------------------------------------------------

def test_rcw_densities_trivial(geom_g0):
    d = rcw_densities(geom_g0)
    _matrix_equal(d.alpha, zero_matrix())
    _matrix_equal(d.theta, zero_matrix())


def test_rcw_densities_g1(geom_g1):
    d = rcw_densities(geom_g1)
    expected = [[ZERO] * 3 for _ in range(3)]
    expected[2][0] = ONE
    _matrix_equal(d.alpha, expected)
    _matrix_equal(d.theta, zero_matrix())
    for a in range(3):
        for b in range(3):
            for c in range(3):
                assert d.zeta[a][b][c].is_structurally_zero()


def test_rcw_component_formula_agreement(rng):
    # densities from the exterior-form route equal the epsilon-contraction route
    for _ in range(5):
        geom = fixtures.random_metric_affine(rng)
        d = rcw_densities(geom)
        tc = torsion_components(geom)
        _, _, r = cartan_tensors(geom)
        frame = geom.frame
        rc = {}
        for a in AXES:
            for b in AXES:
                part = TensorForm.from_part(2, r.part((a,), (b,)))
                for c in AXES:
                    inner = frame.interior(c, part) if not part.is_structurally_zero() \
                        else TensorForm.zero(1)
                    for dd in AXES:
                        if part.is_structurally_zero():
                            rc[(a, b, c, dd)] = ZERO
                        else:
                            rc[(a, b, c, dd)] = frame.interior(dd, inner).component(
                                (), (), ())
        for a in AXES:
            for b in AXES:
                acc = ZERO
                for c in AXES:
                    for dd in AXES:
                        e = eps(a, c, dd)
                        if e:
                            acc = acc + tc[(b, c, dd)] * Fraction(e, 2)
                assert d.alpha[a - 1][b - 1] == acc
        for a in AXES:
            for b in AXES:
                acc = ZERO
                for m in AXES:
                    for n in AXES:
                        em = eps(a, m, n)
                        if not em:
                            continue
                        for k in AXES:
                            for l in AXES:
                                el = eps(b, k, l)
                                if not el:
                                    continue
                                anti = (rc[(k, l, m, n)] - rc[(l, k, m, n)]) \
                                    * Fraction(1, 2)
                                acc = acc + anti * Fraction(em * el, 4)
                assert d.theta[a - 1][b - 1] == acc
        for a in AXES:
            for b in AXES:
                for c in AXES:
                    acc = ZERO
                    for k in AXES:
                        for l in AXES:
                            e = eps(c, k, l)
                            if e:
                                sym = (rc[(a, b, k, l)] + rc[(b, a, k, l)]) \
                                    * Fraction(1, 2)
                                acc = acc + sym * Fraction(e, 2)
                    assert d.zeta[a - 1][b - 1][c - 1] == acc


def test_rcw_reconstruct_single_entry():
    alpha = [[ZERO] * 3 for _ in range(3)]
    alpha[2][0] = ONE
    from defectforms.defects import DefectDensities, zero_zeta
    densities = DefectDensities(alpha=tuple(map(tuple, alpha)), theta=zero_matrix(),
                                zeta=zero_zeta(), theory_tag="RCW")
    torsion, r_anti, r_sym = rcw_reconstruct(densities, Coframe.identity())
    assert torsion.part((1,), ()) == {(1, 2): ONE}
    assert r_anti.is_structurally_zero()
    assert r_sym.is_structurally_zero()


def test_rcw_round_trip_random(rng):
    for _ in range(10):
        geom = fixtures.random_metric_affine(rng)
        densities = rcw_densities(geom)
        torsion, r_anti, r_sym = rcw_reconstruct(densities, geom.frame)
        _, t, r = cartan_tensors(geom)
        assert torsion == t
        for a in AXES:
            for b in AXES:
                ra = TensorForm.from_part(2, r.part((a,), (b,)))
                rb = TensorForm.from_part(2, r.part((b,), (a,)))
                half = ScalarField.constant(Fraction(1, 2))
                assert TensorForm.from_part(2, r_anti.part((), (a, b))) == \
                    (ra - rb).scale(half)
                assert TensorForm.from_part(2, r_sym.part((), (a, b))) == \
                    (ra + rb).scale(half)


def test_rcw_teleparallel_disclinations_vanish(rng, geom_g1, geom_g4):
    # zero curvature forces both disclination densities to vanish
    for geom in (geom_g1, geom_g4, fixtures.random_teleparallel(rng)):
        d = rcw_densities(geom)
        _matrix_equal(d.theta, zero_matrix())
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    assert d.zeta[a][b][c].is_structurally_zero()


# ---------------------------------------------------------------------
# Teleparallel-theory maps
# ---------------------------------------------------------------------

def test_gt_theta_zero_for_metric_teleparallel(geom_g2):
    _matrix_equal(gt_theta(geom_g2, PARAMS), zero_matrix())


def test_gt_theta_g1_frozen(geom_g1):
    # brute-force oracle on raw components, then the frozen value
    qc = nonmetricity_components(geom_g1)
    oracle = [[ZERO] * 3 for _ in range(3)]
    for a in AXES:
        for b in AXES:
            acc = ZERO
            for c in AXES:
                for dd in AXES:
                    acc = acc + qc[(b, c, dd)] * (ScalarField.constant(PARAMS.A)
                                                  * eps(a, c, dd))
            for c in AXES:
                weyl_c = sum((qc[(k, k, c)] for k in AXES), ZERO)
                acc = acc + weyl_c * (ScalarField.constant(PARAMS.B) * eps(a, b, c))
            oracle[a - 1][b - 1] = acc
    theta = gt_theta(geom_g1, PARAMS)
    _matrix_equal(theta, oracle)
    expected = [[ZERO] * 3 for _ in range(3)]
    expected[2][0] = ScalarField.constant(Fraction(-1, 6))
    _matrix_equal(theta, expected)


def test_gt_theta_pure_weyl_frozen(geom_g4):
    # for pure-trace non-metricity: theta_ab = (2/15C) eps_abc (df/f)_c, frozen
    theta = gt_theta(geom_g4, PARAMS)
    phi = sf("1/(1+x)")
    coeff = ScalarField.constant(Fraction(2, 15)) * phi
    expected = [[ZERO] * 3 for _ in range(3)]
    expected[1][2] = coeff
    expected[2][1] = -coeff
    _matrix_equal(theta, expected)


def test_gt_theta_traceless_always(rng, geom_g1, geom_g4):
    for geom in (geom_g1, geom_g4, fixtures.random_metric_affine(rng),
                 fixtures.random_teleparallel(rng)):
        theta = gt_theta(geom, PARAMS)
        trace = sum((theta[a][a] for a in range(3)), ZERO)
        assert trace.is_structurally_zero()


def test_gt_q_from_theta_properties(rng):
    # second trace vanishes and the first trace matches 5C eps theta identically
    frame = Coframe.identity()
    for _ in range(10):
        theta = fixtures.random_traceless_matrix(rng, degree=1)
        q = gt_q_from_theta(theta, PARAMS, frame)
        geom_like = {}
        for b in AXES:
            for c in AXES:
                part = TensorForm.from_part(1, q.part((), (b, c)))
                for dd in AXES:
                    geom_like[(b, c, dd)] = part.component((), (), (dd,))
        for b in AXES:
            p_b = sum((geom_like[(b, c, c)] for c in AXES), ZERO)
            assert p_b.is_structurally_zero()
        c5 = ScalarField.constant(5 * PARAMS.C)
        for dd in AXES:
            weyl_d = sum((geom_like[(k, k, dd)] for k in AXES), ZERO)
            expected = ZERO
            for m in AXES:
                for n in AXES:
                    e = eps(dd, m, n)
                    if e:
                        expected = expected + theta[m - 1][n - 1] * (c5 * e)
            assert weyl_d == expected


def test_gt_q_from_theta_rejects_trace():
    theta = [[ONE if a == b else ZERO for b in range(3)] for a in range(3)]
    with pytest.raises(DefectError):
        gt_q_from_theta(tuple(map(tuple, theta)), PARAMS, Coframe.identity())


def test_gt_theta_q_round_trip(rng):
    # theta -> Q -> theta is the identity on traceless matrices
    frame = Coframe.identity()
    for _ in range(20):
        theta = fixtures.random_traceless_matrix(rng, degree=1)
        q = gt_q_from_theta(theta, PARAMS, frame)
        qc = {}
        for b in AXES:
            for c in AXES:
                part = TensorForm.from_part(1, q.part((), (b, c)))
                for dd in AXES:
                    qc[(b, c, dd)] = part.component((), (), (dd,))
        back = theta_from_nonmetricity(qc, PARAMS)
        _matrix_equal(back, theta)


def test_gt_alpha_g1_frozen(geom_g1):
    alpha = gt_alpha(geom_g1, PARAMS)
    expected = [[ZERO] * 3 for _ in range(3)]
    expected[2][0] = ScalarField.constant(Fraction(1, 3))
    expected[0][2] = ScalarField.constant(Fraction(1, 6))
    _matrix_equal(alpha, expected)
    # brute-force component oracle for the shifted dislocation density
    tc = torsion_components(geom_g1)
    theta = gt_theta(geom_g1, PARAMS)
    c = PARAMS.C
    for a in AXES:
        for b in AXES:
            acc = ZERO
            for m in AXES:
                for n in AXES:
                    e = eps(a, m, n)
                    if e:
                        acc = acc + tc[(b, m, n)] * Fraction(e, 2)
            acc = acc + theta[a - 1][b - 1] * ScalarField.constant(4 * c) \
                - theta[b - 1][a - 1] * ScalarField.constant(c)
            assert alpha[a - 1][b - 1] == acc


def test_gt_alpha_reduces_to_rcw_when_metric(geom_g2, rng):
    for geom in (geom_g2, fixtures.random_riemann_cartan(rng)):
        gt = gt_alpha(geom, PARAMS)
        rcw = rcw_densities(geom).alpha
        _matrix_equal(gt, rcw)


def test_gt_alpha_defect_form_route_agrees_when_p_zero(geom_g5):
    # second trace vanishes for the z-shear fixture: both routes agree exactly
    assert all(v.is_structurally_zero() for v in second_trace_components(geom_g5))
    _matrix_equal(alpha_via_defect_form(geom_g5), gt_alpha(geom_g5, PARAMS))


def test_gt_alpha_route_difference_is_second_trace(geom_g1, rng):
    # the two printed routes differ by (1/3) eps^{abc} P_c exactly
    for geom in (geom_g1, fixtures.random_teleparallel(rng)):
        via_form = alpha_via_defect_form(geom)
        via_components = gt_alpha(geom, PARAMS)
        p = second_trace_components(geom)
        for a in AXES:
            for b in AXES:
                diff = via_form[a - 1][b - 1] - via_components[a - 1][b - 1]
                expected = ZERO
                for c in AXES:
                    e = eps(a, b, c)
                    if e:
                        expected = expected + p[c - 1] * Fraction(e, 3)
                assert diff == expected


def test_gt_torsion_round_trip(rng, geom_g1):
    geoms = [geom_g1] + [fixtures.random_teleparallel(rng) for _ in range(10)]
    for geom in geoms:
        d = gt_densities(geom, PARAMS)
        torsion = gt_torsion_from_densities(d.alpha, d.theta, PARAMS, geom.frame)
        assert torsion == cartan_tensors(geom)[1]


def test_gt_densities_invariants(geom_g1):
    d = gt_densities(geom_g1, PARAMS)
    assert d.theory_tag == "GT"
    trace = sum((d.theta[a][a] for a in range(3)), ZERO)
    assert trace.is_structurally_zero()
    for a in range(3):
        for b in range(3):
            for c in range(3):
                assert d.zeta[a][b][c].is_structurally_zero()


# ---------------------------------------------------------------------
# Admissibility diagnostics
# ---------------------------------------------------------------------

def test_admissibility_fixtures(geom_g0, geom_g1, geom_g2, geom_g5, zero_cfg):
    rep = gt_admissibility(geom_g0, PARAMS, zero_cfg)
    assert (rep.P_zero, rep.Q_in_image, rep.R_zero) == (True, True, True)
    rep = gt_admissibility(geom_g2, PARAMS, zero_cfg)
    assert (rep.P_zero, rep.Q_in_image, rep.R_zero) == (True, True, True)
    rep = gt_admissibility(geom_g1, PARAMS, zero_cfg)
    assert rep.P_zero is False
    assert rep.R_zero is True
    rep = gt_admissibility(geom_g5, PARAMS, zero_cfg)
    assert rep.P_zero is True
    assert rep.R_zero is True
    assert rep.Q_in_image is False


def test_g1_second_trace_value(geom_g1):
    p = second_trace_components(geom_g1)
    assert p[0].is_structurally_zero()
    assert p[1] == ScalarField.constant(Fraction(1, 2))
    assert p[2].is_structurally_zero()


def test_weyl_components_g4(geom_g4):
    w = weyl_components(geom_g4)
    assert w[0] == sf("3/(1+x)")
    assert w[1].is_structurally_zero()
    assert w[2].is_structurally_zero()


# ---------------------------------------------------------------------
# Linear limit (two-scale order check)
# ---------------------------------------------------------------------

def test_linearized_continuity_quadratic_decay(rng):
    for _ in range(5):
        geom = fixtures.random_flat_riemann_cartan(rng)
        s = Fraction(1, 8)
        res1_a, res2_a = linearized_continuity(geom, s)
        res1_b, res2_b = linearized_continuity(geom, s / 2)
        for big, small in ((res1_a, res1_b), (res2_a, res2_b)):
            if big < 1e-12 and small < 1e-12:
                continue
            ratio = big / small
            assert 3.0 <= ratio <= 5.0, ratio


def test_linearized_continuity_exact_linear_fixture():
    geom = fixtures.constant_density_fixture()
    for scale in (Fraction(1), Fraction(1, 2), Fraction(1, 7)):
        res1, res2 = linearized_continuity(geom, scale)
        assert res1 <= 1e-10
        assert res2 <= 1e-10


def test_linearized_continuity_zero_scale(rng):
    geom = fixtures.random_flat_riemann_cartan(rng)
    res1, res2 = linearized_continuity(geom, 0)
    assert res1 == 0.0
    assert res2 == 0.0
