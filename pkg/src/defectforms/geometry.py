"""Metric affine geometries on 3D Euclidean space.

A Geometry is an invertible coframe plus a full connection 1-form.  This
module computes the Cartan tensors (non-metricity, torsion, full curvature),
the covariant exterior derivative of tensor-valued forms, the unique split of
the connection into its Riemannian and defect parts, curvature splits, Bianchi
residuals, the eight-way classification by which Cartan tensors vanish, and
rational generators for each teleparallel class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .field import (
    DEFAULT_ZERO_CONFIG,
    ONE,
    ScalarField,
    ZERO,
    ZeroTestConfig,
    differentiate,
    is_zero,
)
from .exterior import (
    AXES,
    FormPart,
    TensorForm,
    VectorField,
    d,
    fp_add,
    fp_d,
    fp_interior,
    fp_scale,
    fp_wedge,
    interior,
    wedge,
)

Matrix = tuple  # 3x3 nested tuple of ScalarField


class GeometryError(Exception):
    pass


class DegenerateError(GeometryError):
    """A required matrix is singular as a field of matrices."""


# ---------------------------------------------------------------------------
# Exact 3x3 matrix helpers over ScalarField
# ---------------------------------------------------------------------------

def mat_identity() -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(3)) for i in range(3))


def mat_from(rows) -> Matrix:
    return tuple(tuple(entry for entry in row) for row in rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(3)), ZERO) for j in range(3))
        for i in range(3))


def mat_det(m: Matrix) -> ScalarField:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def mat_inverse(m: Matrix, det: ScalarField | None = None) -> Matrix:
    if det is None:
        det = mat_det(m)
    if det.is_structurally_zero():
        raise DegenerateError("matrix is singular")
    cof = [[None] * 3 for _ in range(3)]
    idx = ((1, 2), (0, 2), (0, 1))
    for i in range(3):
        for j in range(3):
            r = idx[i]
            c = idx[j]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            if (i + j) % 2:
                minor = -minor
            cof[i][j] = minor
    # adjugate = transpose of cofactors
    return tuple(tuple(cof[j][i] / det for j in range(3)) for i in range(3))


def mat_scale(m: Matrix, factor: ScalarField) -> Matrix:
    return tuple(tuple(entry * factor for entry in row) for row in m)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(a[i][j] + b[i][j] for j in range(3)) for i in range(3))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(a[i][j] - b[i][j] for j in range(3)) for i in range(3))


# ---------------------------------------------------------------------------
# Coframe and connection
# ---------------------------------------------------------------------------

class Coframe:
    """Invertible 3x3 coframe matrix e (row = frame index, column = coordinate)."""

    __slots__ = ("matrix", "inverse", "det", "_one_forms", "_vectors", "_d_one_forms")

    def __init__(self, rows, cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG):
        self.matrix = mat_from(rows)
        self.det = mat_det(self.matrix)
        if is_zero(self.det, cfg):
            raise DegenerateError("coframe determinant is identically zero")
        inv = mat_inverse(self.matrix, self.det)
        # store as E[i][a] (column a of the inverse is the frame vector X_a)
        self.inverse = inv
        self._one_forms = tuple(
            TensorForm.from_part(1, {(i,): self.matrix[a][i - 1] for i in AXES})
            for a in range(3))
        self._vectors = tuple(
            VectorField(self.inverse[0][a], self.inverse[1][a], self.inverse[2][a])
            for a in range(3))
        self._d_one_forms = None

    @staticmethod
    def identity() -> "Coframe":
        return Coframe(mat_identity())

    def one_form(self, a: int) -> TensorForm:
        """The frame 1-form e^a as a scalar-valued form."""
        return self._one_forms[a - 1]

    def vector(self, a: int) -> VectorField:
        """The frame vector X_a (column a of the inverse)."""
        return self._vectors[a - 1]

    def d_one_form(self, a: int) -> TensorForm:
        if self._d_one_forms is None:
            self._d_one_forms = tuple(d(f) for f in self._one_forms)
        return self._d_one_forms[a - 1]

    def interior(self, a: int, form: TensorForm) -> TensorForm:
        """Frame interior product with X_a."""
        return interior(self._vectors[a - 1], form)

    def volume(self) -> TensorForm:
        """The oriented volume form e^1 ^ e^2 ^ e^3 = det(e) dx123."""
        return TensorForm.from_part(3, {(1, 2, 3): self.det})

    def __eq__(self, other):
        return isinstance(other, Coframe) and self.matrix == other.matrix


class Connection:
    """Full connection 1-form, a (1,1)-valued degree-1 TensorForm."""

    __slots__ = ("form",)

    def __init__(self, form: TensorForm):
        if form.degree != 1 and not form.is_structurally_zero():
            raise GeometryError("connection must be a 1-form")
        self.form = form

    @staticmethod
    def zero() -> "Connection":
        return Connection(TensorForm.zero(1, 1, 1))

    @staticmethod
    def from_entries(entries: dict) -> "Connection":
        """Build from a map (a, b) -> scalar 1-form part."""
        form = TensorForm(1, 1, 1, {})
        for (a, b), fp in entries.items():
            form.set_part((a,), (b,), fp)
        return Connection(form)

    def part(self, a: int, b: int) -> FormPart:
        """The scalar 1-form part of omega^a_b."""
        return self.form.part((a,), (b,))

    def entry(self, a: int, b: int) -> TensorForm:
        return TensorForm.from_part(1, self.part(a, b))

    def __eq__(self, other):
        return isinstance(other, Connection) and self.form == other.form


class Geometry:
    """A coframe together with a full connection; Cartan tensors are cached."""

    __slots__ = ("frame", "conn", "_cartan")

    def __init__(self, frame: Coframe, conn: Connection):
        self.frame = frame
        self.conn = conn
        self._cartan = None

    @property
    def nonmetricity(self) -> TensorForm:
        return cartan_tensors(self)[0]

    @property
    def torsion(self) -> TensorForm:
        return cartan_tensors(self)[1]

    @property
    def curvature(self) -> TensorForm:
        return cartan_tensors(self)[2]


class GeometryClass(enum.Enum):
    MINKOWSKI = "Minkowski"
    RIEMANN = "Riemann"
    METRIC_TELEPARALLEL = "MetricTeleparallel"
    SYMMETRIC_TELEPARALLEL = "SymmetricTeleparallel"
    RIEMANN_CARTAN = "RiemannCartan"
    RIEMANN_WEYL = "RiemannWeyl"
    GENERAL_TELEPARALLEL = "GeneralTeleparallel"
    METRIC_AFFINE = "MetricAffine"


@dataclass
class ConnectionSplit:
    """Unique split of the full connection into Riemannian and defect parts."""

    levi_civita: Connection        # antisymmetric Riemannian piece
    contortion: TensorForm         # torsion part of the defect 1-form, (0,2)
    disformation: TensorForm       # non-metricity part of the defect 1-form, (0,2)
    defect_one_form: TensorForm    # contortion + disformation, (0,2)
    antisym_part: TensorForm       # antisymmetric part of the full connection, (0,2)


class GaugeField:
    """Invertible matrix field used to generate flat (pure gauge) connections."""

    __slots__ = ("matrix", "inverse", "det")

    def __init__(self, rows, cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG):
        self.matrix = mat_from(rows)
        self.det = mat_det(self.matrix)
        if is_zero(self.det, cfg):
            raise DegenerateError("gauge field determinant is identically zero")
        self.inverse = mat_inverse(self.matrix, self.det)


# ---------------------------------------------------------------------------
# Cartan tensors and the covariant exterior derivative
# ---------------------------------------------------------------------------

def cartan_tensors(geom: Geometry) -> tuple[TensorForm, TensorForm, TensorForm]:
    """Non-metricity (0,2), torsion (1,0), full curvature (1,1); cached."""
    if geom._cartan is not None:
        return geom._cartan
    conn = geom.conn
    half = ScalarField.constant("1/2")

    q = TensorForm(1, 0, 2, {})
    for a in AXES:
        for b in AXES:
            fp = fp_scale(fp_add(conn.part(a, b), conn.part(b, a)), half)
            q.set_part((), (a, b), fp)

    t = TensorForm(2, 1, 0, {})
    for a in AXES:
        fp = fp_d(geom.frame.one_form(a).part())
        for b in AXES:
            fp = fp_add(fp, fp_wedge(conn.part(a, b), geom.frame.one_form(b).part()))
        t.set_part((a,), (), fp)

    r = TensorForm(2, 1, 1, {})
    for a in AXES:
        for b in AXES:
            fp = fp_d(conn.part(a, b))
            for c in AXES:
                fp = fp_add(fp, fp_wedge(conn.part(a, c), conn.part(c, b)))
            r.set_part((a,), (b,), fp)

    geom._cartan = (q, t, r)
    return geom._cartan


def cov_d(geom: Geometry, form: TensorForm) -> TensorForm:
    """Covariant exterior derivative: d plus one connection term per frame slot."""
    return cov_d_with(geom.conn, form)


def cov_d_with(conn: Connection, form: TensorForm) -> TensorForm:
    out = d(form)
    if form.degree >= 3:
        return out
    for (u, l), fp in form.comps.items():
        for k, c in enumerate(u):
            for a in AXES:
                w = conn.part(a, c)
                if w:
                    out.add_to_part(u[:k] + (a,) + u[k + 1:], l, fp_wedge(w, fp))
        for k, c in enumerate(l):
            for b in AXES:
                w = conn.part(c, b)
                if w:
                    out.add_to_part(u, l[:k] + (b,) + l[k + 1:],
                                    fp_scale(fp_wedge(w, fp), -1))
    return out


def levi_civita(frame: Coframe) -> Connection:
    """The unique antisymmetric connection with covariant-constant coframe."""
    half = ScalarField.constant("1/2")
    de = [frame.d_one_form(a) for a in AXES]
    entries = {}
    for a in AXES:
        for b in AXES:
            if a == b:
                continue
            total = interior(frame.vector(b), de[a - 1]) \
                - interior(frame.vector(a), de[b - 1])
            fp = total.part()
            for c in AXES:
                coeff = frame.interior(a, frame.interior(b, de[c - 1]))
                s = coeff.component((), (), ())
                if s.is_structurally_zero():
                    continue
                fp = fp_add(fp, fp_scale(frame.one_form(c).part(), s))
            entries[(a, b)] = fp_scale(fp, half)
    return Connection.from_entries(entries)


def connection_split(geom: Geometry) -> ConnectionSplit:
    """Split omega into Levi-Civita + contortion + disformation pieces."""
    half = ScalarField.constant("1/2")
    frame = geom.frame
    q, t, _ = cartan_tensors(geom)
    lc = levi_civita(frame)

    contortion = TensorForm(1, 0, 2, {})
    for a in AXES:
        for b in AXES:
            if a == b:
                continue
            t_b = TensorForm.from_part(2, t.part((b,), ()))
            t_a = TensorForm.from_part(2, t.part((a,), ()))
            total = interior(frame.vector(a), t_b) - interior(frame.vector(b), t_a)
            fp = total.part()
            for c in AXES:
                t_c = TensorForm.from_part(2, t.part((c,), ()))
                s = frame.interior(a, frame.interior(b, t_c)).component((), (), ())
                if s.is_structurally_zero():
                    continue
                fp = fp_add(fp, fp_scale(frame.one_form(c).part(), -s))
            contortion.set_part((), (a, b), fp_scale(fp, half))

    disformation = TensorForm(1, 0, 2, {})
    for a in AXES:
        for b in AXES:
            fp = dict(q.part((), (a, b)))
            for c in AXES:
                q_ac = TensorForm.from_part(1, q.part((), (a, c)))
                q_bc = TensorForm.from_part(1, q.part((), (b, c)))
                s = (frame.interior(b, q_ac) - frame.interior(a, q_bc)).component((), (), ())
                if s.is_structurally_zero():
                    continue
                fp = fp_add(fp, fp_scale(frame.one_form(c).part(), s))
            disformation.set_part((), (a, b), fp)

    defect = contortion + disformation

    antisym = TensorForm(1, 0, 2, {})
    for a in AXES:
        for b in AXES:
            fp = fp_scale(fp_add(geom.conn.part(a, b),
                                 fp_scale(geom.conn.part(b, a), -1)), half)
            antisym.set_part((), (a, b), fp)

    return ConnectionSplit(levi_civita=lc, contortion=contortion,
                           disformation=disformation, defect_one_form=defect,
                           antisym_part=antisym)


def curvature_split(geom: Geometry):
    """Antisymmetric/symmetric and Riemannian/non-Riemannian curvature splits."""
    q, _, _ = cartan_tensors(geom)
    split = connection_split(geom)
    omega_anti = split.antisym_part

    r_antisym = TensorForm(2, 0, 2, {})
    r_sym = TensorForm(2, 0, 2, {})
    for a in AXES:
        for b in AXES:
            fp = fp_d(omega_anti.part((), (a, b)))
            for c in AXES:
                fp = fp_add(fp, fp_wedge(omega_anti.part((), (a, c)),
                                         omega_anti.part((), (c, b))))
                fp = fp_add(fp, fp_wedge(q.part((), (a, c)), q.part((), (c, b))))
            r_antisym.set_part((), (a, b), fp)

            fp = fp_d(q.part((), (a, b)))
            for c in AXES:
                fp = fp_add(fp, fp_wedge(omega_anti.part((), (a, c)),
                                         q.part((), (c, b))))
                fp = fp_add(fp, fp_wedge(q.part((), (a, c)),
                                         omega_anti.part((), (c, b))))
            r_sym.set_part((), (a, b), fp)

    lc = split.levi_civita
    r_riemann = TensorForm(2, 1, 1, {})
    for a in AXES:
        for b in AXES:
            fp = fp_d(lc.part(a, b))
            for c in AXES:
                fp = fp_add(fp, fp_wedge(lc.part(a, c), lc.part(c, b)))
            r_riemann.set_part((a,), (b,), fp)

    defect = split.defect_one_form
    r_nonriemann = TensorForm(2, 1, 1, {})
    for a in AXES:
        for b in AXES:
            # Levi-Civita covariant derivative of the defect 1-form
            fp = fp_d(defect.part((), (a, b)))
            for c in AXES:
                fp = fp_add(fp, fp_wedge(lc.part(a, c), defect.part((), (c, b))))
                fp = fp_add(fp, fp_scale(
                    fp_wedge(lc.part(c, b), defect.part((), (a, c))), -1))
                fp = fp_add(fp, fp_wedge(defect.part((), (a, c)),
                                         defect.part((), (c, b))))
            r_nonriemann.set_part((a,), (b,), fp)

    return r_antisym, r_sym, r_riemann, r_nonriemann


def bianchi_residuals(geom: Geometry):
    """Residuals of the three Bianchi identities; identically zero for every geometry."""
    q, t, r = cartan_tensors(geom)
    res1 = cov_d(geom, q)
    for a in AXES:
        for b in AXES:
            half = ScalarField.constant("1/2")
            sym = fp_scale(fp_add(r.part((a,), (b,)), r.part((b,), (a,))), half)
            res1.add_to_part((), (a, b), fp_scale(sym, -1))

    res2 = cov_d(geom, t)
    for a in AXES:
        acc = {}
        for b in AXES:
            acc = fp_add(acc, fp_wedge(r.part((a,), (b,)),
                                       geom.frame.one_form(b).part()))
        res2.add_to_part((a,), (), fp_scale(acc, -1))

    res3 = cov_d(geom, r)
    return res1, res2, res3


def form_is_zero(form: TensorForm, cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG) -> bool:
    for fp in form.comps.values():
        for value in fp.values():
            if not is_zero(value, cfg):
                return False
    return True


def classify(geom: Geometry, cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG) -> GeometryClass:
    """Which of non-metricity, torsion, curvature vanish decides the class."""
    q, t, r = cartan_tensors(geom)
    key = (form_is_zero(q, cfg), form_is_zero(t, cfg), form_is_zero(r, cfg))
    return {
        (True, True, True): GeometryClass.MINKOWSKI,
        (True, True, False): GeometryClass.RIEMANN,
        (True, False, True): GeometryClass.METRIC_TELEPARALLEL,
        (False, True, True): GeometryClass.SYMMETRIC_TELEPARALLEL,
        (True, False, False): GeometryClass.RIEMANN_CARTAN,
        (False, True, False): GeometryClass.RIEMANN_WEYL,
        (False, False, True): GeometryClass.GENERAL_TELEPARALLEL,
        (False, False, False): GeometryClass.METRIC_AFFINE,
    }[key]


# ---------------------------------------------------------------------------
# Generators: every teleparallel class has an exact rational representative
# ---------------------------------------------------------------------------

def gauge_connection(gauge: GaugeField) -> Connection:
    """Pure-gauge (hence flat) connection from an invertible matrix field."""
    inv = gauge.inverse
    lam = gauge.matrix
    entries = {}
    for a in AXES:
        for b in AXES:
            fp: FormPart = {}
            for c in AXES:
                for i in AXES:
                    coeff = inv[a - 1][c - 1] * differentiate(lam[c - 1][b - 1], i)
                    if not coeff.is_structurally_zero():
                        existing = fp.get((i,))
                        coeff = coeff if existing is None else existing + coeff
                        if coeff.is_structurally_zero():
                            fp.pop((i,), None)
                        else:
                            fp[(i,)] = coeff
            entries[(a, b)] = fp
    return Connection.from_entries(entries)


def _check_antisymmetric(s: Matrix):
    for a in range(3):
        if not s[a][a].is_structurally_zero():
            raise GeometryError("matrix has a nonzero diagonal entry")
        for b in range(a + 1, 3):
            if not (s[a][b] + s[b][a]).is_structurally_zero():
                raise GeometryError("matrix is not antisymmetric")


def cayley_rotation(s_rows, cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG) -> GaugeField:
    """Rational orthogonal gauge (I - S)(I + S)^-1 from an antisymmetric S."""
    s = mat_from(s_rows)
    _check_antisymmetric(s)
    eye = mat_identity()
    plus = mat_add(eye, s)
    det = mat_det(plus)
    if is_zero(det, cfg):
        raise DegenerateError("I + S is singular")
    return GaugeField(mat_mul(mat_sub(eye, s), mat_inverse(plus, det)), cfg)


def symmetric_coframe(gauge: GaugeField, fields, cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG) -> Coframe:
    """Coframe (lambda^-1 dF) that is torsion-free for the matching pure gauge."""
    inv = gauge.inverse
    rows = []
    for a in range(3):
        row = []
        for i in AXES:
            entry = ZERO
            for b in range(3):
                entry = entry + inv[a][b] * differentiate(fields[b], i)
            row.append(entry)
        rows.append(row)
    return Coframe(rows, cfg)


def conformal_gauge(f: ScalarField, s_rows, cfg: ZeroTestConfig = DEFAULT_ZERO_CONFIG) -> GaugeField:
    """Conformally scaled rotation; its pure gauge has pure-trace non-metricity."""
    if f.is_structurally_zero():
        raise DegenerateError("conformal factor is identically zero")
    rotation = cayley_rotation(s_rows, cfg)
    return GaugeField(mat_scale(rotation.matrix, f), cfg)


# ---------------------------------------------------------------------------
# Frame-component extraction (used by decompositions, densities, claims)
# ---------------------------------------------------------------------------

def frame_components_1form(frame: Coframe, fp: FormPart) -> list:
    """Components f_c of a scalar 1-form f = f_c e^c (frame interior products)."""
    form = TensorForm.from_part(1, fp)
    return [frame.interior(c, form).component((), (), ()) for c in AXES]


def frame_components_2form(frame: Coframe, fp: FormPart) -> dict:
    """Components f_bc (antisymmetric) of a scalar 2-form f = 1/2 f_bc e^b ^ e^c."""
    form = TensorForm.from_part(2, fp)
    out = {}
    for b in AXES:
        inner = frame.interior(b, form)
        for c in AXES:
            out[(b, c)] = frame.interior(c, inner).component((), (), ())
    return out
