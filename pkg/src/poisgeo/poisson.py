"""Poisson bivectors: sharp map, brackets, Jacobi test, Casimirs, d_pi.

Sign conventions follow beta(pi_sharp(alpha)) = pi(alpha, beta), so for the
standard plane structure pi = dd_x ^ dd_y one gets pi_sharp(dx) = dd_y and
pi_sharp(dy) = -dd_x.  A consequence worth remembering: the degree-0
coboundary is d_pi f = -pi_sharp(df).
"""

from itertools import combinations

from .errors import ChartMismatch, InternalInconsistency, PoisgeoError
from .linalg import FieldMatrix
from .scalar import ScalarField
from .tensor import (
    OneForm,
    PVector,
    VectorField,
    exterior_d,
    interior_vector,
    lie_bracket,
    lie_derivative,
)


class Bivector:
    """Antisymmetric matrix of ScalarFields; entry(i, j) = pi(dx_i, dx_j)."""

    __slots__ = ("chart", "matrix", "_koszul_table", "_sharp_table")

    def __init__(self, chart, matrix):
        matrix = tuple(tuple(row) for row in matrix)
        n = chart.dim
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise PoisgeoError(f"bivector matrix must be {n}x{n}")
        for i in range(n):
            if not matrix[i][i].is_zero:
                raise PoisgeoError("bivector matrix must have zero diagonal")
            for j in range(i + 1, n):
                if matrix[i][j] != -matrix[j][i]:
                    raise PoisgeoError("bivector matrix must be antisymmetric")
                if matrix[i][j].chart != chart:
                    raise ChartMismatch("entry chart mismatch")
        self.chart = chart
        self.matrix = matrix
        self._koszul_table = None
        self._sharp_table = None

    @classmethod
    def from_upper(cls, chart, upper):
        """Build from {(i, j): ScalarField} with i < j."""
        n = chart.dim
        zero = ScalarField.zero(chart)
        m = [[zero] * n for _ in range(n)]
        for (i, j), val in upper.items():
            if not 0 <= i < j < n:
                raise PoisgeoError(f"bad upper-triangular index {(i, j)}")
            m[i][j] = val
            m[j][i] = -val
        return cls(chart, m)

    def entry(self, i, j):
        return self.matrix[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Bivector)
            and self.chart == other.chart
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.chart, self.matrix))

    def as_pvector(self):
        n = self.chart.dim
        return PVector(
            self.chart,
            2,
            {(i, j): self.matrix[i][j] for i, j in combinations(range(n), 2)},
        )

    def field_matrix(self):
        return FieldMatrix(self.chart, self.matrix)

    def is_polynomial(self):
        return all(e.is_polynomial for row in self.matrix for e in row)

    def max_entry_degree(self):
        """Largest numerator total degree over the entries (0 for the zero bivector)."""
        d = 0
        for row in self.matrix:
            for e in row:
                t = e.total_degree()
                if t > d:
                    d = t
        return d

    # -- the bundle map and brackets ----------------------------------------

    def sharp(self, alpha):
        """pi_sharp(alpha): the vector V with beta(V) = pi(alpha, beta)."""
        _check(self, alpha)
        n = self.chart.dim
        zero = ScalarField.zero(self.chart)
        comps = []
        for j in range(n):
            acc = zero
            for i in range(n):
                a = alpha.comps[i]
                p = self.matrix[i][j]
                if not (a.is_zero or p.is_zero):
                    acc = acc + a * p
            comps.append(acc)
        return VectorField(self.chart, comps)

    def sharp_basis(self, i):
        """pi_sharp(dx_i), cached."""
        if self._sharp_table is None:
            self._sharp_table = tuple(
                VectorField(self.chart, self.matrix[i]) for i in range(self.chart.dim)
            )
        return self._sharp_table[i]

    def pairing(self, alpha, beta):
        """pi(alpha, beta) for 1-forms."""
        _check(self, alpha)
        _check(self, beta)
        return beta.pair(self.sharp(alpha))

    def bracket(self, f, g):
        """Function bracket {f, g} = pi(df, dg)."""
        out = ScalarField.zero(self.chart)
        n = self.chart.dim
        for i in range(n):
            dfi = f.diff(i)
            if dfi.is_zero:
                continue
            for j in range(n):
                p = self.matrix[i][j]
                if p.is_zero:
                    continue
                dgj = g.diff(j)
                if not dgj.is_zero:
                    out = out + dfi * p * dgj
        return out

    def jacobiator(self, f, g, h):
        """Cyclic sum {{f,g},h} + {{g,h},f} + {{h,f},g}; zero iff Jacobi holds."""
        return (
            self.bracket(self.bracket(f, g), h)
            + self.bracket(self.bracket(g, h), f)
            + self.bracket(self.bracket(h, f), g)
        )

    def is_poisson(self):
        """Jacobi identity, checked on coordinate triples (sufficient by the
        Leibniz rule and trilinearity of the jacobiator)."""
        n = self.chart.dim
        coords = [ScalarField.coordinate(self.chart, i) for i in range(n)]
        for i, j, k in combinations(range(n), 3):
            if not self.jacobiator(coords[i], coords[j], coords[k]).is_zero:
                return False
        return True

    def jacobi_witness(self):
        """First coordinate triple with nonzero jacobiator, or None."""
        n = self.chart.dim
        coords = [ScalarField.coordinate(self.chart, i) for i in range(n)]
        for i, j, k in combinations(range(n), 3):
            val = self.jacobiator(coords[i], coords[j], coords[k])
            if not val.is_zero:
                return (i, j, k), val
        return None

    def koszul(self, alpha, beta):
        """The 1-form bracket [alpha, beta]_pi.

        Both classical expressions are evaluated:

            L_{pi(alpha)} beta - L_{pi(beta)} alpha - d(pi(alpha, beta))
            i_{pi(alpha)} d beta - i_{pi(beta)} d alpha + d(pi(alpha, beta))

        They agree identically (expand the Lie derivatives with Cartan's
        formula and use beta(pi(alpha)) = pi(alpha, beta)); computing both
        guards the implementation, hence InternalInconsistency on mismatch.
        """
        _check(self, alpha)
        _check(self, beta)
        pa = self.sharp(alpha)
        pb = self.sharp(beta)
        d_pair = exterior_d(self.pairing(alpha, beta))
        line1 = (
            lie_derivative(pa, beta.as_pform())
            - lie_derivative(pb, alpha.as_pform())
            - d_pair
        )
        line2 = (
            interior_vector(pa, exterior_d(beta.as_pform()))
            - interior_vector(pb, exterior_d(alpha.as_pform()))
            + d_pair
        )
        if line1 != line2:
            raise InternalInconsistency(
                f"the two Koszul bracket expressions disagree for {alpha!r}, {beta!r}"
            )
        return line1.as_oneform()

    def koszul_coordinate(self, i, j):
        """[dx_i, dx_j]_pi, cached (reduces to d of the matrix entry)."""
        if self._koszul_table is None:
            n = self.chart.dim
            table = {}
            for a in range(n):
                for b in range(a + 1, n):
                    table[(a, b)] = self.koszul(
                        OneForm.basis(self.chart, a), OneForm.basis(self.chart, b)
                    )
            self._koszul_table = table
        if i == j:
            return OneForm.zero(self.chart)
        if i < j:
            return self._koszul_table[(i, j)]
        return -self._koszul_table[(j, i)]

    def homomorphism_defect(self, alpha, beta):
        """pi_sharp([alpha,beta]_pi) - [pi_sharp(alpha), pi_sharp(beta)].

        Identically zero exactly when the bracket satisfies Jacobi.
        """
        lhs = self.sharp(self.koszul(alpha, beta))
        rhs = lie_bracket(self.sharp(alpha), self.sharp(beta))
        return lhs - rhs

    def is_casimir(self, f):
        """True iff pi_sharp(df) vanishes identically."""
        return self.sharp(exterior_d(f).as_oneform()).is_zero

    # -- the multivector differential ----------------------------------------

    def d_pi(self, Q):
        """Degree +1 differential on multivector fields.

        On (p+1) coordinate 1-forms a_0..a_p:

            sum_j (-1)^j pi(a_j) . Q(..no a_j..)
          + sum_{i<j} (-1)^{i+j} Q([a_i, a_j]_pi, ..no a_i, a_j..)

        Accepts a ScalarField as a 0-vector.  Defined for any bivector;
        d_pi of d_pi vanishes only when the bivector is Poisson.
        """
        if isinstance(Q, ScalarField):
            Q = PVector(self.chart, 0, {(): Q})
        if isinstance(Q, VectorField):
            Q = Q.as_pvector()
        _check_chart(self, Q)
        chart = self.chart
        n = chart.dim
        p = Q.degree
        if p >= n:
            raise PoisgeoError(f"d_pi of a degree-{p} multivector in dimension {n}")
        out = {}
        for idx in combinations(range(n), p + 1):
            val = ScalarField.zero(chart)
            for jpos in range(p + 1):
                rest = idx[:jpos] + idx[jpos + 1:]
                comp = Q.component(rest) if p else Q.component(())
                if not comp.is_zero:
                    term = self.sharp_basis(idx[jpos]).apply_to(comp)
                    val = val + term if jpos % 2 == 0 else val - term
            if p:
                for apos in range(p + 1):
                    for bpos in range(apos + 1, p + 1):
                        br = self.koszul_coordinate(idx[apos], idx[bpos])
                        if br.is_zero:
                            continue
                        rest = tuple(
                            idx[t] for t in range(p + 1) if t != apos and t != bpos
                        )
                        term = Q.contract_first(br, rest)
                        if not term.is_zero:
                            val = val + term if (apos + bpos) % 2 == 0 else val - term
            if not val.is_zero:
                out[idx] = val
        return PVector(chart, p + 1, out)


def _check(pi, obj):
    if obj.chart != pi.chart:
        raise ChartMismatch("operand chart differs from the bivector chart")


_check_chart = _check


def pi_sharp(pi, alpha):
    return pi.sharp(alpha)


def fn_bracket(pi, f, g):
    return pi.bracket(f, g)


def koszul_bracket(pi, alpha, beta):
    return pi.koszul(alpha, beta)
