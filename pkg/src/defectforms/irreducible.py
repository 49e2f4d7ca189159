"""SO(3)-irreducible decompositions of torsion and non-metricity.

Torsion splits into a tentor (5), trace (3) and axial (1) piece; non-metricity
into four pieces of dimensions 3 + 9 + 3 + 3.  All Hodge maps and interior
products use the geometry's own coframe; trace and orthogonality certificates
are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .field import ScalarField
from .exterior import AXES, TensorForm, hodge, wedge
from .geometry import Geometry, cartan_tensors

_HALF = ScalarField.constant(Fraction(1, 2))
_THIRD = ScalarField.constant(Fraction(1, 3))
_THREE_TENTHS = ScalarField.constant(Fraction(3, 10))
_TWO_THIRDS = ScalarField.constant(Fraction(2, 3))


@dataclass
class TorsionDecomposition:
    trace_one_form: TensorForm      # iota_a T^a
    sigma: TensorForm               # e_a ^ T^a (axial 3-form)
    piece1: TensorForm              # tentor part, (1,0) 2-form
    piece2: TensorForm              # trace part
    piece3: TensorForm              # axial part

    def pieces(self):
        return (self.piece1, self.piece2, self.piece3)


@dataclass
class NonmetricityDecomposition:
    tracefree: TensorForm           # Q with the Weyl trace removed, (0,2) 1-form
    weyl: TensorForm                # trace 1-form
    theta_a: tuple                  # helper 1-forms, indexed by frame index
    theta: TensorForm               # e^a ^ theta_a (2-form)
    omega_a: tuple                  # helper 1-forms
    lambda_a: tuple                 # helper 0-form scalars
    lambda_one_form: TensorForm
    piece1: TensorForm              # (0,2) 1-forms
    piece2: TensorForm
    piece3: TensorForm
    piece4: TensorForm
    second_trace: tuple             # P_a = iota^b Q_ab, three scalars

    def pieces(self):
        return (self.piece1, self.piece2, self.piece3, self.piece4)


def torsion_pieces(geom: Geometry) -> TorsionDecomposition:
    frame = geom.frame
    torsion = cartan_tensors(geom)[1]
    t_parts = [TensorForm.from_part(2, torsion.part((a,), ())) for a in AXES]

    trace = TensorForm.zero(1)
    sigma = TensorForm.zero(3)
    for a in AXES:
        trace = trace + frame.interior(a, t_parts[a - 1])
        sigma = sigma + wedge(frame.one_form(a), t_parts[a - 1])

    piece2 = TensorForm(2, 1, 0, {})
    piece3 = TensorForm(2, 1, 0, {})
    piece1 = TensorForm(2, 1, 0, {})
    for a in AXES:
        p2 = wedge(frame.one_form(a), trace).scale(_HALF)
        piece2.set_part((a,), (), p2.part())
        p3 = frame.interior(a, sigma).scale(_THIRD) if not sigma.is_structurally_zero() \
            else TensorForm.zero(2)
        piece3.set_part((a,), (), p3.part())
        p1 = t_parts[a - 1] - p2 - p3
        piece1.set_part((a,), (), p1.part())

    return TorsionDecomposition(trace_one_form=trace, sigma=sigma,
                                piece1=piece1, piece2=piece2, piece3=piece3)


def nonmetricity_pieces(geom: Geometry) -> NonmetricityDecomposition:
    frame = geom.frame
    q = cartan_tensors(geom)[0]
    q_parts = {(a, b): TensorForm.from_part(1, q.part((), (a, b)))
               for a in AXES for b in AXES}

    weyl = TensorForm.zero(1)
    for a in AXES:
        weyl = weyl + q_parts[(a, a)]

    tracefree = TensorForm(1, 0, 2, {})
    tf_parts = {}
    for a in AXES:
        for b in AXES:
            part = q_parts[(a, b)]
            if a == b:
                part = part - weyl.scale(_THIRD)
            tf_parts[(a, b)] = part
            tracefree.set_part((), (a, b), part.part())

    theta_a = []
    for a in AXES:
        acc = TensorForm.zero(2)
        for b in AXES:
            acc = acc + wedge(tf_parts[(a, b)], frame.one_form(b))
        theta_a.append(hodge(acc, frame))
    theta_a = tuple(theta_a)

    theta = TensorForm.zero(2)
    for a in AXES:
        theta = theta + wedge(frame.one_form(a), theta_a[a - 1])

    omega_a = tuple(
        theta_a[a - 1] - (frame.interior(a, theta).scale(_HALF)
                          if not theta.is_structurally_zero() else TensorForm.zero(1))
        for a in AXES)

    lambda_a = tuple(
        sum((frame.interior(b, tf_parts[(a, b)]).component((), (), ())
             for b in AXES), ScalarField.constant(0))
        for a in AXES)

    lambda_one_form = TensorForm.zero(1)
    for a in AXES:
        lambda_one_form = lambda_one_form + frame.one_form(a).scale(lambda_a[a - 1])

    piece2 = TensorForm(1, 0, 2, {})
    piece3 = TensorForm(1, 0, 2, {})
    piece4 = TensorForm(1, 0, 2, {})
    piece1 = TensorForm(1, 0, 2, {})
    for a in AXES:
        for b in AXES:
            p2 = hodge(wedge(frame.one_form(a), omega_a[b - 1])
                       + wedge(frame.one_form(b), omega_a[a - 1]), frame).scale(_THIRD)
            piece2.set_part((), (a, b), p2.part())

            p3 = (frame.one_form(b).scale(lambda_a[a - 1])
                  + frame.one_form(a).scale(lambda_a[b - 1]))
            if a == b:
                p3 = p3 - lambda_one_form.scale(_TWO_THIRDS)
            p3 = p3.scale(_THREE_TENTHS)
            piece3.set_part((), (a, b), p3.part())

            p4 = weyl.scale(_THIRD) if a == b else TensorForm.zero(1)
            piece4.set_part((), (a, b), p4.part())

            p1 = q_parts[(a, b)] - p2 - p3 - p4
            piece1.set_part((), (a, b), p1.part())

    second_trace = tuple(
        sum((frame.interior(b, q_parts[(a, b)]).component((), (), ())
             for b in AXES), ScalarField.constant(0))
        for a in AXES)

    return NonmetricityDecomposition(
        tracefree=tracefree, weyl=weyl, theta_a=theta_a, theta=theta,
        omega_a=omega_a, lambda_a=lambda_a, lambda_one_form=lambda_one_form,
        piece1=piece1, piece2=piece2, piece3=piece3, piece4=piece4,
        second_trace=second_trace)
