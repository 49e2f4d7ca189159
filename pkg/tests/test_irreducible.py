"""Irreducible decomposition tests: sums, traces, orthogonality, counts, idempotence."""

import random
from fractions import Fraction

import numpy as np

from defectforms import fixtures
from defectforms.field import ONE, Point, ScalarField, ZERO, evaluate, parse_scalar
from defectforms.exterior import AXES, TensorForm, hodge, wedge
from defectforms.geometry import Connection, Coframe, Geometry, cartan_tensors
from defectforms.irreducible import nonmetricity_pieces, torsion_pieces

sf = parse_scalar


def _assert_zero_form(form):
    assert form.is_structurally_zero()


def _piece_forms(decomp, upper):
    for piece in decomp.pieces():
        yield piece


# ---------------------------------------------------------------------
# Torsion decomposition
# ---------------------------------------------------------------------

def test_torsion_zero_geometry(geom_g0):
    dec = torsion_pieces(geom_g0)
    for piece in dec.pieces():
        _assert_zero_form(piece)
    _assert_zero_form(dec.trace_one_form)
    _assert_zero_form(dec.sigma)


def test_torsion_sum_and_certificates_random(rng):
    for _ in range(20):
        geom = fixtures.random_metric_affine(rng)
        dec = torsion_pieces(geom)
        t = cartan_tensors(geom)[1]
        total = dec.piece1 + dec.piece2 + dec.piece3
        assert total == t
        frame = geom.frame
        for piece in (dec.piece1, dec.piece3):
            acc = TensorForm.zero(1)
            for a in AXES:
                acc = acc + frame.interior(a, TensorForm.from_part(2, piece.part((a,), ())))
            _assert_zero_form(acc)
        for piece in (dec.piece1, dec.piece2):
            acc = TensorForm.zero(3)
            for a in AXES:
                acc = acc + wedge(frame.one_form(a),
                                  TensorForm.from_part(2, piece.part((a,), ())))
            _assert_zero_form(acc)


def test_torsion_orthogonality_random(rng):
    for _ in range(10):
        geom = fixtures.random_metric_affine(rng)
        dec = torsion_pieces(geom)
        pieces = dec.pieces()
        frame = geom.frame
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                acc = TensorForm.zero(3)
                for a in AXES:
                    left = TensorForm.from_part(2, pieces[i].part((a,), ()))
                    right = TensorForm.from_part(2, pieces[j].part((a,), ()))
                    acc = acc + wedge(left, hodge(right, frame))
                _assert_zero_form(acc)


def test_torsion_trace_type(rng):
    # torsion of the form e^a ^ phi decomposes into the pure trace piece
    phi = [fixtures.random_poly(rng, 1) for _ in range(3)]
    comps = {}
    for a in AXES:
        for b in AXES:
            for c in AXES:
                if b < c:
                    coeff = (phi[c - 1] if a == b else ZERO) - (phi[b - 1] if a == c else ZERO)
                    if not coeff.is_structurally_zero():
                        comps[(a, b, c)] = coeff
    geom = fixtures.prescribed_torsion_geometry(comps)
    dec = torsion_pieces(geom)
    t = cartan_tensors(geom)[1]
    assert dec.piece2 == t
    _assert_zero_form(dec.piece1)
    _assert_zero_form(dec.piece3)


def test_torsion_g1_regression(geom_g1):
    dec = torsion_pieces(geom_g1)
    half = ScalarField.constant(Fraction(1, 2))
    assert dec.trace_one_form == TensorForm.from_part(1, {(2,): ONE})
    _assert_zero_form(dec.sigma)
    _assert_zero_form(dec.piece3)
    assert dec.piece2.part((1,), ()) == {(1, 2): half}
    # (1/2) dx3 ^ dx2 stored on the increasing multi-index
    assert dec.piece2.part((3,), ()) == {(2, 3): -half}
    t = cartan_tensors(geom_g1)[1]
    assert dec.piece1 == t - dec.piece2


def test_torsion_idempotence(rng):
    # identity coframe so coordinate coefficients are the frame components
    geom = Geometry(Coframe.identity(), fixtures.random_connection(rng))
    dec = torsion_pieces(geom)
    for index, piece in enumerate(dec.pieces()):
        comps = {}
        for a in AXES:
            part = piece.part((a,), ())
            for (b, c), v in part.items():
                comps[(a, b, c)] = v
        again = torsion_pieces(fixtures.prescribed_torsion_geometry(comps))
        for jndex, other in enumerate(again.pieces()):
            if jndex == index:
                assert other == piece
            else:
                _assert_zero_form(other)


# ---------------------------------------------------------------------
# Non-metricity decomposition
# ---------------------------------------------------------------------

def _prescribed_q_geometry(entries):
    """Identity-coframe geometry whose connection is the given symmetric 1-form."""
    conn_entries = {}
    for (a, b), fp in entries.items():
        conn_entries[(a, b)] = dict(fp)
    return Geometry(Coframe.identity(), Connection.from_entries(conn_entries))


def test_nonmetricity_zero_for_metric_compatible(geom_g2):
    dec = nonmetricity_pieces(geom_g2)
    for piece in dec.pieces():
        _assert_zero_form(piece)
    _assert_zero_form(dec.weyl)
    _assert_zero_form(dec.tracefree)


def test_nonmetricity_weyl_type(rng):
    q = fixtures.random_one_form_part(rng)
    third = ScalarField.constant(Fraction(1, 3))
    entries = {(a, a): {m: third * v for m, v in q.items()} for a in AXES}
    geom = _prescribed_q_geometry(entries)
    dec = nonmetricity_pieces(geom)
    qq = cartan_tensors(geom)[0]
    assert dec.piece4 == qq
    _assert_zero_form(dec.piece1)
    _assert_zero_form(dec.piece2)
    _assert_zero_form(dec.piece3)


def test_nonmetricity_sum_traces_random(rng):
    for _ in range(20):
        geom = fixtures.random_metric_affine(rng)
        dec = nonmetricity_pieces(geom)
        q = cartan_tensors(geom)[0]
        assert dec.piece1 + dec.piece2 + dec.piece3 + dec.piece4 == q
        frame = geom.frame
        for piece in (dec.piece1, dec.piece2, dec.piece3):
            acc = TensorForm.zero(1)
            for a in AXES:
                acc = acc + TensorForm.from_part(1, piece.part((), (a, a)))
            _assert_zero_form(acc)
        for piece in (dec.piece1, dec.piece2):
            for b in AXES:
                acc = TensorForm.zero(0)
                for a in AXES:
                    part = TensorForm.from_part(1, piece.part((), (a, b)))
                    if not part.is_structurally_zero():
                        acc = acc + frame.interior(a, part)
                _assert_zero_form(acc)
        for b in AXES:
            acc = TensorForm.zero(2)
            for a in AXES:
                acc = acc + wedge(frame.one_form(a),
                                  TensorForm.from_part(1, dec.piece1.part((), (a, b))))
            _assert_zero_form(acc)


def test_nonmetricity_orthogonality_random(rng):
    for _ in range(10):
        geom = fixtures.random_metric_affine(rng)
        dec = nonmetricity_pieces(geom)
        pieces = dec.pieces()
        frame = geom.frame
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                acc = TensorForm.zero(3)
                for a in AXES:
                    for b in AXES:
                        left = TensorForm.from_part(1, pieces[i].part((), (a, b)))
                        right = TensorForm.from_part(1, pieces[j].part((), (a, b)))
                        if left.is_structurally_zero() or right.is_structurally_zero():
                            continue
                        acc = acc + wedge(left, hodge(right, frame))
                _assert_zero_form(acc)


def test_nonmetricity_g1_regression(geom_g1):
    dec = nonmetricity_pieces(geom_g1)
    _assert_zero_form(dec.weyl)
    half = ScalarField.constant(Fraction(1, 2))
    assert dec.lambda_a[0].is_structurally_zero()
    assert dec.lambda_a[1] == half
    assert dec.lambda_a[2].is_structurally_zero()
    assert dec.piece1 + dec.piece2 + dec.piece3 == cartan_tensors(geom_g1)[0]


def test_nonmetricity_idempotence(rng):
    geom = Geometry(Coframe.identity(), fixtures.random_connection(rng))
    dec = nonmetricity_pieces(geom)
    for index, piece in enumerate(dec.pieces()):
        entries = {(a, b): piece.part((), (a, b)) for a in AXES for b in AXES}
        again = nonmetricity_pieces(_prescribed_q_geometry(entries))
        for jndex, other in enumerate(again.pieces()):
            if jndex == index:
                assert other == piece
            else:
                _assert_zero_form(other)


# ---------------------------------------------------------------------
# Component counts by rank at a random point
# ---------------------------------------------------------------------

def test_component_counts_by_rank(rng):
    point = Point.of(Fraction(1, 3), Fraction(2, 7), Fraction(-1, 5))
    samples = 24
    t_vectors = [[], [], []]
    q_vectors = [[], [], [], []]
    for _ in range(samples):
        # identity coframe keeps the component span in a fixed basis
        geom = Geometry(Coframe.identity(), fixtures.random_connection(rng, entries=9))
        tdec = torsion_pieces(geom)
        for k, piece in enumerate(tdec.pieces()):
            vec = []
            for a in AXES:
                for (b, c) in ((1, 2), (1, 3), (2, 3)):
                    vec.append(float(evaluate(piece.component((a,), (), (b, c)), point)))
            t_vectors[k].append(vec)
        qdec = nonmetricity_pieces(geom)
        for k, piece in enumerate(qdec.pieces()):
            vec = []
            for a in AXES:
                for b in AXES:
                    for i in AXES:
                        vec.append(float(evaluate(piece.component((), (a, b), (i,)), point)))
            q_vectors[k].append(vec)
    expected_t = (5, 3, 1)
    for k in range(3):
        rank = np.linalg.matrix_rank(np.array(t_vectors[k]), tol=1e-8)
        assert rank == expected_t[k]
    # SO(3)-irreducible dimensions of the four pieces: spin-3, spin-2, two vectors.
    expected_q = (7, 5, 3, 3)
    for k in range(4):
        rank = np.linalg.matrix_rank(np.array(q_vectors[k]), tol=1e-8)
        assert rank == expected_q[k]
