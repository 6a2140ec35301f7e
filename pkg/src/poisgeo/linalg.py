"""Exact linear algebra over the rational-function field and over Q.

FieldMatrix entries are ScalarFields; elimination clears each row to
integer-polynomial form and runs fraction-free (Bareiss-style) reduction,
so intermediate entries stay polynomial instead of swelling into nested
fractions.  RationalMatrix is the dense exact-rational workhorse for the
cohomology rank computations.
"""

import math
from fractions import Fraction

from .errors import ChartMismatch, PoisgeoError, SingularMatrix
from .kernel import int_row_echelon, poly_mul, poly_sub
from .polyops import poly_div_exact, poly_gcd, poly_lcm, poly_lead
from .scalar import ScalarField


class FieldMatrix:
    """Immutable rectangular matrix of ScalarFields over one chart."""

    __slots__ = ("chart", "rows", "cols", "entries")

    def __init__(self, chart, entries):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise PoisgeoError("matrix needs at least one row and one column")
        cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise PoisgeoError("ragged matrix")
            for e in row:
                if e.chart != chart:
                    raise ChartMismatch("matrix entries must share one chart")
        self.chart = chart
        self.rows = len(entries)
        self.cols = cols
        self.entries = entries

    @classmethod
    def identity(cls, chart, n):
        one = ScalarField.one(chart)
        zero = ScalarField.zero(chart)
        return cls(chart, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def entry(self, i, j):
        return self.entries[i][j]

    def transpose(self):
        return FieldMatrix(self.chart, list(zip(*self.entries)))

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise PoisgeoError("shape mismatch in matrix product")
        zero = ScalarField.zero(self.chart)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if not (a.is_zero or b.is_zero):
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return FieldMatrix(self.chart, out)

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.chart == other.chart
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.chart, self.entries))

    def is_zero(self):
        return all(e.is_zero for row in self.entries for e in row)

    def eval_at(self, point):
        return RationalMatrix([[e.eval_at(point) for e in row] for row in self.entries])

    # -- elimination core ----------------------------------------------------

    def _cleared_rows(self):
        """Rows as integer-polynomial dicts (each row scaled by its lcm of dens)."""
        out = []
        for row in self.entries:
            lcm = None
            for e in row:
                d = e.den_dict()
                lcm = d if lcm is None else poly_lcm(lcm, d)
            polys = []
            for e in row:
                factor = poly_div_exact(lcm, e.den_dict())
                polys.append(poly_mul(e.num_dict(), factor))
            out.append(polys)
        return out

    @staticmethod
    def _poly_echelon(rows_in):
        """Fraction-free echelon over Z[x..]; returns (rank, pivot_cols, rows)."""
        m = [list(r) for r in rows_in]
        nrows = len(m)
        ncols = len(m[0])
        pivot_cols = []
        prev = None
        r = 0
        for c in range(ncols):
            p = -1
            for i in range(r, nrows):
                if m[i][c]:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                m[r], m[p] = m[p], m[r]
            pivot = m[r][c]
            for i in range(r + 1, nrows):
                head = m[i][c]
                for j in range(c, ncols):
                    elt = poly_sub(poly_mul(pivot, m[i][j]), poly_mul(head, m[r][j]))
                    if prev is not None and elt:
                        elt = poly_div_exact(elt, prev)
                    m[i][j] = elt
            prev = pivot
            pivot_cols.append(c)
            r += 1
            if r == nrows:
                break
        return r, pivot_cols, m

    def rank(self):
        rank, _, _ = self._poly_echelon(self._cleared_rows())
        return rank

    def kernel_basis(self):
        """Columns spanning ker(M) symbolically, canonically normalized.

        Each vector is a list of ScalarFields scaled to coprime integer
        polynomials with the first nonzero entry's leading coefficient
        positive, so frames derived from kernels are deterministic.
        """
        rank, pivot_cols, ech = self._poly_echelon(self._cleared_rows())
        free_cols = [c for c in range(self.cols) if c not in pivot_cols]
        chart = self.chart
        zero = ScalarField.zero(chart)
        one = ScalarField.one(chart)
        basis = []
        for f in free_cols:
            vec = [zero] * self.cols
            vec[f] = one
            for r in range(rank - 1, -1, -1):
                pc = pivot_cols[r]
                acc = zero
                for j in range(pc + 1, self.cols):
                    if ech[r][j] and not vec[j].is_zero:
                        acc = acc + ScalarField(chart, ech[r][j], {(0,) * chart.dim: 1}) * vec[j]
                pivot = ScalarField(chart, ech[r][pc], {(0,) * chart.dim: 1})
                vec[pc] = -acc / pivot
            basis.append(_normalize_vector(chart, vec))
        return basis

    def solve(self, rhs):
        """Solve M X = rhs; free variables (if any) are set to zero.

        Raises SingularMatrix when the system is inconsistent.
        """
        if rhs.rows != self.rows:
            raise PoisgeoError("rhs row count mismatch")
        chart = self.chart
        aug = FieldMatrix(
            chart,
            [list(self.entries[i]) + list(rhs.entries[i]) for i in range(self.rows)],
        )
        rank, pivot_cols, ech = self._poly_echelon(aug._cleared_rows())
        if any(pc >= self.cols for pc in pivot_cols):
            raise SingularMatrix("inconsistent linear system")
        zero = ScalarField.zero(chart)
        const_one = {(0,) * chart.dim: 1}
        out_cols = []
        sys_pivots = [pc for pc in pivot_cols if pc < self.cols]
        for b in range(rhs.cols):
            vec = [zero] * self.cols
            for r in range(len(sys_pivots) - 1, -1, -1):
                pc = sys_pivots[r]
                acc = ScalarField(chart, ech[r][self.cols + b], const_one)
                for j in range(pc + 1, self.cols):
                    if ech[r][j] and not vec[j].is_zero:
                        acc = acc - ScalarField(chart, ech[r][j], const_one) * vec[j]
                vec[pc] = acc / ScalarField(chart, ech[r][pc], const_one)
            out_cols.append(vec)
        return FieldMatrix(chart, list(zip(*out_cols)))

    def inverse(self):
        if self.rows != self.cols:
            raise PoisgeoError("inverse needs a square matrix")
        if self.rank() < self.rows:
            raise SingularMatrix("matrix has identically zero determinant")
        return self.solve(FieldMatrix.identity(self.chart, self.rows))

    def det(self):
        if self.rows != self.cols:
            raise PoisgeoError("determinant needs a square matrix")
        n = self.rows
        if n == 1:
            return self.entries[0][0]
        # cofactor expansion is fine at chart dimensions (n <= 6 or so)
        first = self.entries[0]
        total = ScalarField.zero(self.chart)
        for j in range(n):
            if first[j].is_zero:
                continue
            minor = FieldMatrix(
                self.chart,
                [[row[k] for k in range(n) if k != j] for row in self.entries[1:]],
            )
            term = first[j] * minor.det()
            total = total + term if j % 2 == 0 else total - term
        return total


def _normalize_vector(chart, vec):
    """Scale a ScalarField vector to coprime integer-polynomial entries."""
    lcm = None
    for e in vec:
        d = e.den_dict()
        lcm = d if lcm is None else poly_lcm(lcm, d)
    polys = []
    for e in vec:
        polys.append(poly_mul(e.num_dict(), poly_div_exact(lcm, e.den_dict())))
    g = None
    for p in polys:
        if p:
            g = p if g is None else poly_gcd(g, p)
    if g is None:
        return list(vec)
    sign = 1
    for p in polys:
        if p:
            sign = 1 if p[poly_lead(p)] > 0 else -1
            break
    const_one = {(0,) * chart.dim: 1}
    out = []
    for p in polys:
        q = poly_div_exact(p, g) if p else {}
        if sign < 0:
            q = {m: -c for m, c in q.items()}
        out.append(ScalarField(chart, q, const_one))
    return out


class RationalMatrix:
    """Dense exact-rational matrix; ranks and kernels via integer Bareiss."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(Fraction(e) for e in row) for row in entries)
        if not entries:
            raise PoisgeoError("matrix needs at least one row")
        cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise PoisgeoError("ragged matrix")
        self.rows = len(entries)
        self.cols = cols
        self.entries = entries

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns, nrows):
        if not columns:
            return cls.zero(nrows, 1)
        return cls([[col[i] for col in columns] for i in range(nrows)])

    def entry(self, i, j):
        return self.entries[i][j]

    def is_zero(self):
        return all(e == 0 for row in self.entries for e in row)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise PoisgeoError("shape mismatch in matrix product")
        return RationalMatrix(
            [
                [
                    sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ]
        )

    def _int_rows(self):
        out = []
        for row in self.entries:
            lcm = 1
            for e in row:
                lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
            out.append([int(e * lcm) for e in row])
        return out

    def rank(self):
        rank, _, _ = int_row_echelon(self._int_rows())
        return rank

    def kernel_basis(self):
        """Fraction vectors spanning the nullspace."""
        rank, pivot_cols, ech = int_row_echelon(self._int_rows())
        free_cols = [c for c in range(self.cols) if c not in pivot_cols]
        basis = []
        for f in free_cols:
            vec = [Fraction(0)] * self.cols
            vec[f] = Fraction(1)
            for r in range(rank - 1, -1, -1):
                pc = pivot_cols[r]
                acc = Fraction(0)
                for j in range(pc + 1, self.cols):
                    if ech[r][j] and vec[j]:
                        acc += Fraction(ech[r][j]) * vec[j]
                vec[pc] = -acc / ech[r][pc]
            basis.append(vec)
        return basis
