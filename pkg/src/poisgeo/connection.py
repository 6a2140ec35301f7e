"""Cotangent metrics and the contravariant Levi-Civita connection.

The connection coefficients are solved pairwise from the six-term Koszul
formula

    2 <D_a b, c> = pi(a).<b,c> + pi(b).<a,c> - pi(c).<a,b>
                 + <[a,b]_pi, c> + <[c,a]_pi, b> + <[c,b]_pi, a>

with a, b, c running over coordinate forms, then extended to arbitrary
1-forms by D_{f a} b = f D_a b and D_a (f b) = f D_a b + (pi(a).f) b.
"""

from fractions import Fraction

from .chart import as_point
from .errors import (
    NotPositiveDefiniteAt,
    NotSymmetric,
    PoisgeoError,
    SingularMatrix,
    SingularMetric,
)
from .linalg import FieldMatrix
from .scalar import ScalarField
from .tensor import OneForm


class CoMetric:
    """Symmetric matrix of ScalarFields: entry(i, j) = <dx_i, dx_j>."""

    __slots__ = ("chart", "matrix")

    def __init__(self, chart, matrix):
        matrix = tuple(tuple(row) for row in matrix)
        n = chart.dim
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise PoisgeoError(f"cometric matrix must be {n}x{n}")
        for i in range(n):
            for j in range(i, n):
                if matrix[i][j] != matrix[j][i]:
                    raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
        self.chart = chart
        self.matrix = matrix

    @classmethod
    def identity(cls, chart):
        return cls(chart, FieldMatrix.identity(chart, chart.dim).entries)

    @classmethod
    def diagonal(cls, chart, diag):
        n = chart.dim
        zero = ScalarField.zero(chart)
        return cls(chart, [[diag[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_upper(cls, chart, upper):
        """Build from {(i, j): ScalarField} with i <= j; missing entries are 0."""
        n = chart.dim
        zero = ScalarField.zero(chart)
        m = [[zero] * n for _ in range(n)]
        for (i, j), val in upper.items():
            if not 0 <= i <= j < n:
                raise PoisgeoError(f"bad upper-triangular index {(i, j)}")
            m[i][j] = val
            m[j][i] = val
        return cls(chart, m)

    def entry(self, i, j):
        return self.matrix[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, CoMetric)
            and self.chart == other.chart
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.chart, self.matrix))

    def field_matrix(self):
        return FieldMatrix(self.chart, self.matrix)

    def pairing(self, alpha, beta):
        """<alpha, beta> for 1-forms."""
        out = ScalarField.zero(self.chart)
        n = self.chart.dim
        for i in range(n):
            a = alpha.comps[i]
            if a.is_zero:
                continue
            for j in range(n):
                g = self.matrix[i][j]
                b = beta.comps[j]
                if not (g.is_zero or b.is_zero):
                    out = out + a * g * b
        return out

    def sharp(self, alpha):
        """The metric identification T*P -> TP: beta(sharp(alpha)) = <alpha, beta>."""
        from .tensor import VectorField

        n = self.chart.dim
        comps = []
        for j in range(n):
            acc = ScalarField.zero(self.chart)
            for i in range(n):
                a = alpha.comps[i]
                g = self.matrix[i][j]
                if not (a.is_zero or g.is_zero):
                    acc = acc + a * g
            comps.append(acc)
        return VectorField(self.chart, comps)

    def validate(self, samples):
        """Symmetry symbolically plus Sylvester positivity at every sample.

        Returns the list of checked points; raises NotSymmetric /
        NotPositiveDefiniteAt on failure.  Symmetry already held at
        construction; re-checked here so a report can cite this method.
        """
        n = self.chart.dim
        for i in range(n):
            for j in range(i + 1, n):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
        if not samples:
            raise PoisgeoError("need at least one sample point")
        pts = [as_point(self.chart, p) for p in samples]
        for pt in pts:
            values = [[e.eval_at(pt) for e in row] for row in self.matrix]
            for k in range(1, n + 1):
                minor = [row[:k] for row in values[:k]]
                if _fraction_det(minor) <= 0:
                    raise NotPositiveDefiniteAt(pt, k - 1)
        return pts

    def leading_minor(self, k):
        """Leading principal k x k minor as a symbolic determinant."""
        sub = [row[:k] for row in self.matrix[:k]]
        return FieldMatrix(self.chart, sub).det()


def _fraction_det(rows):
    n = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            factor = m[i][c] / m[c][c]
            for j in range(c, n):
                m[i][j] -= factor * m[c][j]
    return det


class ChristoffelTable:
    """Contravariant connection coefficients: D_{dx_i} dx_j = sum_k G[i][j][k] dx_k."""

    __slots__ = ("chart", "pi", "gamma")

    def __init__(self, chart, pi, gamma):
        self.chart = chart
        self.pi = pi
        self.gamma = tuple(tuple(tuple(row) for row in plane) for plane in gamma)

    def coefficient(self, i, j, k):
        return self.gamma[i][j][k]

    def basis_derivative(self, i, j):
        """D_{dx_i} dx_j as a OneForm."""
        return OneForm(self.chart, self.gamma[i][j])

    def derivative(self, alpha, beta):
        """D_alpha beta for arbitrary 1-forms, by the contravariant Leibniz rule."""
        chart = self.chart
        n = chart.dim
        zero = ScalarField.zero(chart)
        comps = [zero] * n
        for i in range(n):
            a = alpha.comps[i]
            if a.is_zero:
                continue
            sharp_i = self.pi.sharp_basis(i)
            for j in range(n):
                b = beta.comps[j]
                if not b.is_zero:
                    for k in range(n):
                        g = self.gamma[i][j][k]
                        if not g.is_zero:
                            comps[k] = comps[k] + a * b * g
                db = sharp_i.apply_to(b)
                if not db.is_zero:
                    comps[j] = comps[j] + a * db
        return OneForm(chart, comps)

    def perturbed(self, i, j, k, delta=1):
        """Copy with gamma[i][j][k] shifted by a constant (mutation testing)."""
        shift = ScalarField.constant(self.chart, delta)
        gamma = [
            [
                [
                    self.gamma[a][b][c] + shift if (a, b, c) == (i, j, k) else self.gamma[a][b][c]
                    for c in range(self.chart.dim)
                ]
                for b in range(self.chart.dim)
            ]
            for a in range(self.chart.dim)
        ]
        return ChristoffelTable(self.chart, self.pi, gamma)


def levi_civita(pi, g):
    """Solve the Koszul-type formula for the contravariant Christoffel table.

    Raises SingularMetric when the cometric matrix is symbolically singular.
    """
    chart = pi.chart
    if g.chart != chart:
        raise PoisgeoError("bivector and cometric on different charts")
    n = chart.dim
    gm = g.field_matrix()
    if gm.rank() < n:
        raise SingularMetric("cometric matrix is singular")
    forms = [OneForm.basis(chart, i) for i in range(n)]
    sharp = [pi.sharp_basis(i) for i in range(n)]
    koszul = {}
    for i in range(n):
        for j in range(n):
            koszul[(i, j)] = pi.koszul_coordinate(i, j)
    rhs_cols = []
    pairs = [(i, j) for i in range(n) for j in range(n)]
    for i, j in pairs:
        col = []
        for k in range(n):
            val = sharp[i].apply_to(g.entry(j, k))
            val = val + sharp[j].apply_to(g.entry(i, k))
            val = val - sharp[k].apply_to(g.entry(i, j))
            val = val + g.pairing(koszul[(i, j)], forms[k])
            val = val + g.pairing(koszul[(k, i)], forms[j])
            val = val + g.pairing(koszul[(k, j)], forms[i])
            col.append(val)
        rhs_cols.append(col)
    rhs = FieldMatrix(chart, list(zip(*rhs_cols)))
    try:
        sols = gm.solve(rhs)
    except SingularMatrix as exc:
        raise SingularMetric(str(exc)) from exc
    half = ScalarField.constant(chart, Fraction(1, 2))
    gamma = [[[None] * n for _ in range(n)] for _ in range(n)]
    for col, (i, j) in enumerate(pairs):
        for k in range(n):
            gamma[i][j][k] = half * sols.entry(k, col)
    return ChristoffelTable(chart, pi, gamma)


def torsion_defect(D, pi, alpha, beta):
    """D_a b - D_b a - [a, b]_pi; identically zero for the Levi-Civita table."""
    return D.derivative(alpha, beta) - D.derivative(beta, alpha) - pi.koszul(alpha, beta)


def metric_defect(D, g, pi, alpha, beta, gamma_form):
    """pi(a).<b,c> - <D_a b, c> - <b, D_a c>; identically zero for Levi-Civita."""
    lead = pi.sharp(alpha).apply_to(g.pairing(beta, gamma_form))
    return (
        lead
        - g.pairing(D.derivative(alpha, beta), gamma_form)
        - g.pairing(beta, D.derivative(alpha, gamma_form))
    )


def d_pi_tensor(D, pi, alpha, beta, gamma_form):
    """The covariant derivative of pi as a 3-tensor:

    Dpi(a,b,c) = pi(a).pi(b,c) - pi(D_a b, c) - pi(b, D_a c).
    """
    lead = pi.sharp(alpha).apply_to(pi.pairing(beta, gamma_form))
    return (
        lead
        - pi.pairing(D.derivative(alpha, beta), gamma_form)
        - pi.pairing(beta, D.derivative(alpha, gamma_form))
    )


def d_pi_tensor_coordinate(D, pi, i, j, k):
    """Dpi on the coordinate triple (dx_i, dx_j, dx_k)."""
    chart = pi.chart
    lead = pi.sharp_basis(i).apply_to(pi.entry(j, k))
    dij = D.basis_derivative(i, j)
    dik = D.basis_derivative(i, k)
    return lead - pi.pairing(dij, OneForm.basis(chart, k)) - pi.pairing(
        OneForm.basis(chart, j), dik
    )


def riemann_poisson_defect(pi, g, D=None):
    """First nonzero Dpi coordinate component, or None when Dpi vanishes.

    Returns ((i, j, k), ScalarField) scanning triples in lexicographic order,
    so the reported witness is deterministic.
    """
    if D is None:
        D = levi_civita(pi, g)
    n = pi.chart.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                val = d_pi_tensor_coordinate(D, pi, i, j, k)
                if not val.is_zero:
                    return (i, j, k), val
    return None


def is_riemann_poisson(pi, g, D=None):
    """True iff pi is Poisson and Dpi vanishes on all coordinate triples."""
    if not pi.is_poisson():
        return False
    return riemann_poisson_defect(pi, g, D) is None


def cyclic_d_pi(D, pi, alpha, beta, gamma_form):
    """Dpi(a,b,c) + Dpi(b,c,a) + Dpi(c,a,b).

    Metric-independent, and proportional to the jacobiator on exact forms;
    vanishes identically exactly when pi is Poisson.
    """
    return (
        d_pi_tensor(D, pi, alpha, beta, gamma_form)
        + d_pi_tensor(D, pi, beta, gamma_form, alpha)
        + d_pi_tensor(D, pi, gamma_form, alpha, beta)
    )


def prop_elementary_report(pi, g, split, D=None):
    """The three elementary closure properties of the connection.

    1. pi(b) = 0 implies pi(D_a b) = 0 for every coordinate a;
    2. pi(a) = 0 implies D_a = 0 (checked on coordinate forms);
    3. the g-orthogonal complement of ker pi is closed under D and the bracket.

    Returns {"kernel_stays_kernel": bool, "kernel_kills": bool,
    "perp_closed": bool} evaluated on the split frames.
    """
    if D is None:
        D = levi_civita(pi, g)
    chart = pi.chart
    n = chart.dim
    coords = [OneForm.basis(chart, i) for i in range(n)]
    item1 = True
    for kappa in split.kernel_frame:
        for a in coords:
            if not pi.sharp(D.derivative(a, kappa)).is_zero:
                item1 = False
    item2 = True
    for kappa in split.kernel_frame:
        for b in coords:
            if not D.derivative(kappa, b).is_zero:
                item2 = False
    item3 = True
    for a in split.perp_frame:
        for b in split.perp_frame:
            for kappa in split.kernel_frame:
                if not g.pairing(D.derivative(a, b), kappa).is_zero:
                    item3 = False
                if not g.pairing(pi.koszul(a, b), kappa).is_zero:
                    item3 = False
    return {
        "kernel_stays_kernel": item1,
        "kernel_kills": item2,
        "perp_closed": item3,
    }
