"""Geometry tests: Cartan tensors, covariant derivative, splits, classification."""

import random

import pytest

from defectforms import fixtures
from defectforms.field import ONE, ScalarField, ZERO, parse_scalar
from defectforms.exterior import AXES, TensorForm, d, wedge
from defectforms.geometry import (
    Coframe,
    Connection,
    DegenerateError,
    GaugeField,
    Geometry,
    GeometryClass,
    bianchi_residuals,
    cartan_tensors,
    cayley_rotation,
    classify,
    conformal_gauge,
    connection_split,
    cov_d,
    curvature_split,
    form_is_zero,
    gauge_connection,
    levi_civita,
    mat_mul,
    symmetric_coframe,
)
from defectforms.fixtures import antisym_matrix, shear_matrix

sf = parse_scalar
DX1, DX2, DX3 = TensorForm.dx(1), TensorForm.dx(2), TensorForm.dx(3)


def kronecker_form(upper: int, lower: int) -> TensorForm:
    out = TensorForm(0, upper, lower, {})
    for a in AXES:
        key = ((a,) * upper, (a,) * lower)
        out.comps[key] = {(): ONE}
    return out


# ---------------------------------------------------------------------
# Coframe basics
# ---------------------------------------------------------------------

def test_coframe_inverse_exact(rng):
    frame = fixtures.random_coframe(rng)
    prod = mat_mul(frame.matrix, tuple(zip(*[frame.inverse[i] for i in range(3)])))
    # matrix * inverse should be the identity: e[a][i] E[i][b] = delta
    for a in range(3):
        for b in range(3):
            expected = ONE if a == b else ZERO
            got = sum((frame.matrix[a][i] * frame.inverse[i][b] for i in range(3)), ZERO)
            assert got == expected


def test_degenerate_coframe_rejected():
    with pytest.raises(DegenerateError):
        Coframe(((ONE, ZERO, ZERO), (ONE, ZERO, ZERO), (ZERO, ZERO, ONE)))


# ---------------------------------------------------------------------
# Cartan tensors
# ---------------------------------------------------------------------

def test_g0_cartan_all_zero(geom_g0):
    q, t, r = cartan_tensors(geom_g0)
    assert q.is_structurally_zero()
    assert t.is_structurally_zero()
    assert r.is_structurally_zero()


def test_g1_connection_and_cartan(geom_g1):
    conn = geom_g1.conn
    assert conn.part(1, 2) == {(1,): ONE}
    for a in AXES:
        for b in AXES:
            if (a, b) != (1, 2):
                assert not conn.part(a, b)
    q, t, r = cartan_tensors(geom_g1)
    half = ScalarField.constant("1/2")
    assert q.part((), (1, 2)) == {(1,): half}
    assert q.part((), (2, 1)) == {(1,): half}
    assert sum(len(fp) for fp in q.comps.values()) == 2
    assert t.part((1,), ()) == {(1, 2): ONE}
    assert sum(len(fp) for fp in t.comps.values()) == 1
    assert r.is_structurally_zero()


def test_cartan_cache_consistency(rng):
    geom = fixtures.random_metric_affine(rng)
    first = cartan_tensors(geom)
    again = cartan_tensors(geom)
    assert first is again
    fresh = Geometry(geom.frame, geom.conn)
    for cached, recomputed in zip(first, cartan_tensors(fresh)):
        assert cached == recomputed


def test_curvature_echoes_definition(rng):
    geom = fixtures.random_metric_affine(rng)
    _, _, r = cartan_tensors(geom)
    for a in AXES:
        for b in AXES:
            direct = d(geom.conn.entry(a, b))
            for c in AXES:
                direct = direct + wedge(geom.conn.entry(a, c), geom.conn.entry(c, b))
            assert TensorForm.from_part(2, r.part((a,), (b,))) == direct


# ---------------------------------------------------------------------
# Covariant exterior derivative
# ---------------------------------------------------------------------

def test_cov_d_on_scalar_is_d(rng, geom_g1):
    f = TensorForm.scalar(fixtures.random_poly(rng, 2))
    assert cov_d(geom_g1, f) == d(f)


def test_cov_d_mixed_kronecker_vanishes(geom_g1, rng):
    assert cov_d(geom_g1, kronecker_form(1, 1)).is_structurally_zero()
    geom = fixtures.random_metric_affine(rng)
    assert cov_d(geom, kronecker_form(1, 1)).is_structurally_zero()


def test_cov_d_lower_kronecker_gives_nonmetricity(geom_g1):
    got = cov_d(geom_g1, kronecker_form(0, 2))
    q = cartan_tensors(geom_g1)[0]
    assert got == q.scale(-2)
    assert got.part((), (1, 2)) == {(1,): -ONE}


def test_cov_d_upper_kronecker_gives_plus_nonmetricity(rng):
    geom = fixtures.random_metric_affine(rng)
    got = cov_d(geom, kronecker_form(2, 0))
    q = cartan_tensors(geom)[0]
    expected = TensorForm(1, 2, 0, {})
    for a in AXES:
        for b in AXES:
            expected.set_part((a, b), (), q.part((), (a, b)))
    assert got == expected.scale(2)


def test_cov_d_leibniz_product_rule(rng):
    geom = fixtures.random_metric_affine(rng)
    for p in (0, 1):
        a = TensorForm.from_part(p, dict(
            fixtures.random_one_form_part(rng) if p else {(): fixtures.random_poly(rng, 1)}),
            upper=(rng.randint(1, 3),))
        b = TensorForm.from_part(1, fixtures.random_one_form_part(rng),
                                 lower=(rng.randint(1, 3),))
        lhs = cov_d(geom, wedge(a, b))
        rhs = wedge(cov_d(geom, a), b) + wedge(a, cov_d(geom, b)).scale((-1) ** p)
        assert lhs == rhs


# ---------------------------------------------------------------------
# Levi-Civita connection
# ---------------------------------------------------------------------

def test_levi_civita_identity_coframe():
    assert levi_civita(Coframe.identity()).form.is_structurally_zero()


def test_levi_civita_shear_coframe():
    frame = Coframe(((ONE, ZERO, ZERO),
                     (ZERO, ONE, ZERO),
                     (ZERO, sf("x"), ONE)))
    lc = levi_civita(frame)
    assert not lc.form.is_structurally_zero()
    _assert_levi_civita_property(frame, lc)


def _assert_levi_civita_property(frame, lc):
    for a in AXES:
        acc = TensorForm.zero(2)
        for b in AXES:
            acc = acc + wedge(lc.entry(a, b), frame.one_form(b))
        assert acc == d(frame.one_form(a)).scale(-1)


def test_levi_civita_defining_property_random(rng):
    for _ in range(20):
        frame = fixtures.random_coframe(rng)
        lc = levi_civita(frame)
        _assert_levi_civita_property(frame, lc)
        for a in AXES:
            for b in AXES:
                diff = lc.entry(a, b) + lc.entry(b, a)
                assert diff.is_structurally_zero()


# ---------------------------------------------------------------------
# Connection split
# ---------------------------------------------------------------------

def test_split_trivial_geometry(geom_g0):
    split = connection_split(geom_g0)
    assert split.levi_civita.form.is_structurally_zero()
    assert split.contortion.is_structurally_zero()
    assert split.disformation.is_structurally_zero()
    assert split.defect_one_form.is_structurally_zero()
    assert split.antisym_part.is_structurally_zero()


def _assert_split_invariants(geom):
    split = connection_split(geom)
    q = cartan_tensors(geom)[0]
    for a in AXES:
        for b in AXES:
            # reassembly omega = LC + defect
            reassembled = (TensorForm.from_part(1, split.levi_civita.part(a, b))
                           + TensorForm.from_part(1, split.defect_one_form.part((), (a, b))))
            assert reassembled == geom.conn.entry(a, b)
            # antisymmetries
            assert (TensorForm.from_part(1, split.levi_civita.part(a, b))
                    + TensorForm.from_part(1, split.levi_civita.part(b, a))
                    ).is_structurally_zero()
            assert (TensorForm.from_part(1, split.contortion.part((), (a, b)))
                    + TensorForm.from_part(1, split.contortion.part((), (b, a)))
                    ).is_structurally_zero()
            # symmetric part of the defect form is the non-metricity
            sym = (TensorForm.from_part(1, split.defect_one_form.part((), (a, b)))
                   + TensorForm.from_part(1, split.defect_one_form.part((), (b, a))))
            assert sym == TensorForm.from_part(1, q.part((), (a, b))).scale(2)


def test_split_invariants_random(rng):
    for _ in range(5):
        _assert_split_invariants(fixtures.random_metric_affine(rng))


def test_split_metric_compatible_contortion_reproduces_torsion(rng):
    geom = fixtures.random_riemann_cartan(rng)
    split = connection_split(geom)
    assert split.disformation.is_structurally_zero()
    t = cartan_tensors(geom)[1]
    for a in AXES:
        acc = TensorForm.zero(2)
        for b in AXES:
            acc = acc + wedge(TensorForm.from_part(1, split.contortion.part((), (a, b))),
                              geom.frame.one_form(b))
        assert acc == TensorForm.from_part(2, t.part((a,), ()))


def test_split_g1_regression(geom_g1):
    split = connection_split(geom_g1)
    half = ScalarField.constant("1/2")
    # L_(12) = Q_12 = (1/2) dx1
    sym = (TensorForm.from_part(1, split.defect_one_form.part((), (1, 2)))
           + TensorForm.from_part(1, split.defect_one_form.part((), (2, 1)))).scale(half)
    assert sym == TensorForm.from_part(1, {(1,): half})
    # L_[12] = K_12 + (iota_2 Q_1c - iota_1 Q_2c) e^c, frozen expansion
    anti = (TensorForm.from_part(1, split.defect_one_form.part((), (1, 2)))
            - TensorForm.from_part(1, split.defect_one_form.part((), (2, 1)))).scale(half)
    k12 = TensorForm.from_part(1, split.contortion.part((), (1, 2)))
    q = cartan_tensors(geom_g1)[0]
    corr = TensorForm.zero(1)
    for c in AXES:
        q1c = TensorForm.from_part(1, q.part((), (1, c)))
        q2c = TensorForm.from_part(1, q.part((), (2, c)))
        s = (geom_g1.frame.interior(2, q1c) - geom_g1.frame.interior(1, q2c)
             ).component((), (), ())
        corr = corr + geom_g1.frame.one_form(c).scale(s)
    assert anti == k12 + corr
    # frozen value: with T^1 = dx1 ^ dx2 the contortion entry K_12 is dx1
    assert k12 == TensorForm.from_part(1, {(1,): ONE})


# ---------------------------------------------------------------------
# Curvature split
# ---------------------------------------------------------------------

def _sym_anti_parts(r):
    half = ScalarField.constant("1/2")
    sym = TensorForm(2, 0, 2, {})
    anti = TensorForm(2, 0, 2, {})
    for a in AXES:
        for b in AXES:
            ra = TensorForm.from_part(2, r.part((a,), (b,)))
            rb = TensorForm.from_part(2, r.part((b,), (a,)))
            sym.set_part((), (a, b), ((ra + rb).scale(half)).part())
            anti.set_part((), (a, b), ((ra - rb).scale(half)).part())
    return sym, anti


def test_curvature_split_reassembles(rng):
    for _ in range(5):
        geom = fixtures.random_metric_affine(rng)
        r_anti, r_sym, r_riem, r_nonriem = curvature_split(geom)
        _, _, r = cartan_tensors(geom)
        sym, anti = _sym_anti_parts(r)
        assert r_sym == sym
        assert r_anti == anti
        total = TensorForm(2, 1, 1, {})
        for a in AXES:
            for b in AXES:
                fp = (TensorForm.from_part(2, r_riem.part((a,), (b,)))
                      + TensorForm.from_part(2, r_nonriem.part((a,), (b,))))
                total.set_part((a,), (b,), fp.part())
        assert total == r


def test_curvature_split_metric_compatible_sym_vanishes(rng, geom_g2):
    r_anti, r_sym, _, _ = curvature_split(geom_g2)
    assert r_sym.is_structurally_zero()
    geom = fixtures.random_riemann_cartan(rng)
    assert curvature_split(geom)[1].is_structurally_zero()


def test_curvature_split_g1_antisym_opposes_sym(geom_g1):
    r_anti, r_sym, _, _ = curvature_split(geom_g1)
    assert r_anti == r_sym.scale(-1)


# ---------------------------------------------------------------------
# Bianchi residuals
# ---------------------------------------------------------------------

def test_bianchi_residuals_zero_on_fixtures(geom_g0, geom_g1):
    for geom in (geom_g0, geom_g1):
        for res in bianchi_residuals(geom):
            assert res.is_structurally_zero()


def test_bianchi_residuals_zero_random(rng):
    for _ in range(20):
        geom = fixtures.random_metric_affine(rng, degree=2)
        for res in bianchi_residuals(geom):
            assert res.is_structurally_zero()


# ---------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------

def test_classify_fixtures(geom_g0, geom_g1, geom_g2, geom_g3, geom_g4, zero_cfg):
    assert classify(geom_g0, zero_cfg) == GeometryClass.MINKOWSKI
    assert classify(geom_g1, zero_cfg) == GeometryClass.GENERAL_TELEPARALLEL
    assert classify(geom_g2, zero_cfg) == GeometryClass.METRIC_TELEPARALLEL
    assert classify(geom_g3, zero_cfg) == GeometryClass.SYMMETRIC_TELEPARALLEL
    assert classify(geom_g4, zero_cfg) == GeometryClass.GENERAL_TELEPARALLEL


def test_classify_random_classes(rng, zero_cfg):
    assert classify(fixtures.random_metric_affine(rng), zero_cfg) == GeometryClass.METRIC_AFFINE
    assert classify(fixtures.random_riemann_cartan(rng), zero_cfg) == GeometryClass.RIEMANN_CARTAN


def test_classify_riemann_and_weyl(rng, zero_cfg):
    frame = fixtures.random_coframe(rng)
    riemann = Geometry(frame, levi_civita(frame))
    got = classify(riemann, zero_cfg)
    assert got in (GeometryClass.RIEMANN, GeometryClass.MINKOWSKI)
    semi = fixtures.random_semimetric(rng)
    assert classify(semi, zero_cfg) in (GeometryClass.RIEMANN_WEYL,
                                        GeometryClass.METRIC_AFFINE)


# ---------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------

def test_gauge_connection_identity_gauge():
    gauge = GaugeField(shear_matrix(ZERO))
    assert gauge_connection(gauge).form.is_structurally_zero()


def test_gauge_connection_flatness_random(rng):
    for _ in range(10):
        gauge = fixtures.random_gauge(rng, degree=2)
        geom = Geometry(Coframe.identity(), gauge_connection(gauge))
        assert cartan_tensors(geom)[2].is_structurally_zero()


def test_cayley_rotation_block_values():
    gauge = cayley_rotation(antisym_matrix(sf("z")))
    num = sf("1 - z^2")
    den = sf("1 + z^2")
    assert gauge.matrix[0][0] == num / den
    assert gauge.matrix[0][1] == sf("-2*z") / den
    assert gauge.matrix[1][0] == sf("2*z") / den
    assert gauge.matrix[1][1] == num / den
    assert gauge.matrix[2][2] == ONE


def test_cayley_rotation_is_orthogonal(rng):
    for _ in range(10):
        s = antisym_matrix(fixtures.random_poly(rng), fixtures.random_poly(rng),
                           fixtures.random_poly(rng))
        gauge = cayley_rotation(s)
        for i in range(3):
            for j in range(3):
                got = sum((gauge.matrix[k][i] * gauge.matrix[k][j] for k in range(3)),
                          ZERO)
                assert got == (ONE if i == j else ZERO)
        geom = Geometry(Coframe.identity(), gauge_connection(gauge))
        assert cartan_tensors(geom)[0].is_structurally_zero()
        assert cartan_tensors(geom)[2].is_structurally_zero()


def test_cayley_rejects_non_antisymmetric():
    from defectforms.geometry import GeometryError
    with pytest.raises(GeometryError):
        cayley_rotation(((ZERO, sf("x"), ZERO), (sf("x"), ZERO, ZERO),
                         (ZERO, ZERO, ZERO)))


def test_symmetric_coframe_trivial():
    gauge = GaugeField(shear_matrix(ZERO))
    frame = symmetric_coframe(gauge, fixtures.COORD_FIELDS)
    assert frame.matrix[0][0] == ONE
    assert frame.matrix[0][1] == ZERO


def test_symmetric_coframe_g3(geom_g3, zero_cfg):
    assert geom_g3.frame.matrix[0][0] == ONE
    assert geom_g3.frame.matrix[0][1] == sf("-x")
    q, t, r = cartan_tensors(geom_g3)
    assert t.is_structurally_zero()
    assert r.is_structurally_zero()
    assert not form_is_zero(q, zero_cfg)


def test_symmetric_coframe_random(rng, zero_cfg):
    for _ in range(10):
        gauge = fixtures.random_gauge(rng)
        frame = symmetric_coframe(gauge, fixtures.COORD_FIELDS)
        geom = Geometry(frame, gauge_connection(gauge))
        _, t, r = cartan_tensors(geom)
        assert t.is_structurally_zero()
        assert r.is_structurally_zero()
        assert classify(geom, zero_cfg) in (GeometryClass.SYMMETRIC_TELEPARALLEL,
                                            GeometryClass.MINKOWSKI)


def test_conformal_gauge_reduces_to_rotation():
    got = conformal_gauge(ONE, antisym_matrix(sf("z")))
    rot = cayley_rotation(antisym_matrix(sf("z")))
    assert got.matrix == rot.matrix


def test_conformal_gauge_pure_trace_nonmetricity():
    gauge = conformal_gauge(sf("1 + x"), antisym_matrix(ZERO))
    geom = Geometry(Coframe.identity(), gauge_connection(gauge))
    q = cartan_tensors(geom)[0]
    expected = sf("1 / (1 + x)")
    for a in AXES:
        for b in AXES:
            part = TensorForm.from_part(1, q.part((), (a, b)))
            if a == b:
                assert part == TensorForm.from_part(1, {(1,): expected})
            else:
                assert part.is_structurally_zero()


def test_conformal_gauge_tracefree_part_vanishes(rng, geom_g4):
    third = ScalarField.constant("1/3")
    for geom in (geom_g4,
                 Geometry(Coframe.identity(),
                          gauge_connection(conformal_gauge(
                              fixtures.random_poly(rng) + ScalarField.constant(7),
                              antisym_matrix(fixtures.random_poly(rng)))))):
        q = cartan_tensors(geom)[0]
        trace = TensorForm.zero(1)
        for c in AXES:
            trace = trace + TensorForm.from_part(1, q.part((), (c, c)))
        for a in AXES:
            for b in AXES:
                part = TensorForm.from_part(1, q.part((), (a, b)))
                if a == b:
                    part = part - trace.scale(third)
                assert part.is_structurally_zero()
