"""Truncated Poisson cohomology and the cochain-level comparison maps.

All dimensions here are windowed: multivector coefficients are polynomials
of bounded total degree, the differential is assembled as an exact rational
matrix between such windows, and ranks come from integer fraction-free
elimination.  Results are therefore exact integers, reproducible from the
window parameters, and never claims about the smooth cohomology.
"""

from itertools import combinations

from .errors import (
    InternalInconsistency,
    NonPolynomialBivector,
    NotBasic,
    PoisgeoError,
    WindowTooSmall,
)
from .foliation import LeafwiseForm, basic_form_family, casimir_monomials, leafwise_d
from .linalg import RationalMatrix
from .scalar import ScalarField
from .tensor import OneForm, PForm, PVector, exterior_d, interior_form, interior_vector


def _monomials_upto(n, d):
    out = []

    def rec(prefix, remaining, total):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for e in range(d - total + 1):
            rec(prefix + [e], remaining - 1, total + e)

    rec([], n, 0)
    out.sort(key=lambda m: (sum(m), m))
    return out


class GradedBasis:
    """Ordered basis of p-multivectors with polynomial coefficients <= degree d.

    Elements are (monomial, multi-index) pairs ordered by graded-lex monomial
    then multi-index; size C(n, p) * C(n + d, d).
    """

    __slots__ = ("chart", "degree", "coeff_bound", "elements", "_index")

    def __init__(self, chart, degree, coeff_bound):
        n = chart.dim
        if not 0 <= degree <= n:
            raise PoisgeoError(f"degree {degree} outside 0..{n}")
        if coeff_bound < 0:
            raise PoisgeoError("coefficient degree bound must be >= 0")
        idxs = list(combinations(range(n), degree))
        self.chart = chart
        self.degree = degree
        self.coeff_bound = coeff_bound
        self.elements = [
            (mono, idx) for mono in _monomials_upto(n, coeff_bound) for idx in idxs
        ]
        self._index = {elt: k for k, elt in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def index_of(self, mono, idx):
        return self._index[(mono, idx)]

    def element_pvector(self, k):
        mono, idx = self.elements[k]
        f = ScalarField(self.chart, {mono: 1}, {(0,) * self.chart.dim: 1})
        return PVector(self.chart, self.degree, {idx: f})

    def coordinates_of(self, Q):
        """Column of Q in this basis; raises WindowTooSmall on overflow."""
        if Q.degree != self.degree:
            raise PoisgeoError("degree mismatch")
        col = [0] * len(self.elements)
        for idx, field in Q.comps.items():
            if not field.is_polynomial:
                raise NonPolynomialBivector(
                    "windowed cohomology needs polynomial coefficients"
                )
            for mono, coef in field.poly_terms().items():
                key = (mono, idx)
                if key not in self._index:
                    raise WindowTooSmall(
                        f"coefficient degree {sum(mono)} exceeds the window bound "
                        f"{self.coeff_bound}"
                    )
                col[self._index[key]] = coef
        return col

    def from_coordinates(self, col):
        comps = {}
        for k, c in enumerate(col):
            if c:
                mono, idx = self.elements[k]
                f = ScalarField(
                    self.chart, {mono: c.numerator}, {(0,) * self.chart.dim: c.denominator}
                )
                comps[idx] = comps.get(idx, ScalarField.zero(self.chart)) + f
        return PVector(self.chart, self.degree, comps)


def degree_shift(pi):
    """Worst-case increase in coefficient degree under d_pi."""
    if not pi.is_polynomial():
        raise NonPolynomialBivector("d_pi windows need polynomial bivector entries")
    return pi.max_entry_degree() - 1


def assemble_dpi_matrix(pi, p, d_in, d_out):
    """Matrix of d_pi from the (p, d_in) window into the (p+1, d_out) window."""
    chart = pi.chart
    shift = degree_shift(pi)
    if d_out < d_in + shift:
        raise WindowTooSmall(
            f"target degree bound {d_out} cannot hold the image (need {d_in + shift})"
        )
    source = GradedBasis(chart, p, d_in)
    target = GradedBasis(chart, p + 1, d_out)
    cols = [target.coordinates_of(pi.d_pi(source.element_pvector(k))) for k in range(len(source))]
    return RationalMatrix.from_columns(cols, len(target)), source, target


def truncated_betti(pi, p, d, with_representatives=False):
    """dim ker(d_pi | degree p, coeffs <= d) minus the matching image rank.

    The image is taken from the (p-1)-window whose d_pi lands exactly inside
    coefficient degree d, so kernel and image live in the same space.
    Returns a report dict with the window bookkeeping.
    """
    chart = pi.chart
    n = chart.dim
    shift = degree_shift(pi)
    if p == n:
        basis = GradedBasis(chart, p, d)
        kernel_dim = len(basis)
        kernel_cols = [
            [1 if i == k else 0 for i in range(len(basis))] for k in range(len(basis))
        ]
        out_basis = basis
    else:
        mat, basis, out_basis = assemble_dpi_matrix(pi, p, d, max(d + shift, 0))
        kernel_cols = mat.kernel_basis()
        kernel_dim = len(kernel_cols)
    d_pre = d - shift
    if p == 0 or d_pre < 0:
        image_rank = 0
        image_matrix = None
    else:
        image_matrix, _, _ = assemble_dpi_matrix(pi, p - 1, d_pre, d)
        image_rank = image_matrix.rank()
    report = {
        "p": p,
        "window_degree": d,
        "preimage_degree": None if p == 0 else d_pre,
        "kernel_dim": kernel_dim,
        "image_rank": image_rank,
        "betti": kernel_dim - image_rank,
    }
    if with_representatives:
        report["representatives"] = _representatives(
            basis, kernel_cols, image_matrix, image_rank
        )
    return report


def _representatives(basis, kernel_cols, image_matrix, image_rank):
    """Kernel vectors extending the image to a basis of the cocycles."""
    image_cols = []
    if image_matrix is not None:
        image_cols = [
            [image_matrix.entry(i, j) for i in range(image_matrix.rows)]
            for j in range(image_matrix.cols)
        ]
    chosen = []
    current = list(image_cols)
    rank = image_rank
    for vec in kernel_cols:
        trial = current + [vec]
        r = RationalMatrix.from_columns(trial, len(basis)).rank()
        if r > rank:
            chosen.append(basis.from_coordinates(vec))
            current = trial
            rank = r
    return chosen


def dpi_squared_matrix(pi, p, d):
    """The composed matrix d_pi . d_pi out of the (p, d) window (exact product)."""
    shift = degree_shift(pi)
    mid = max(d + shift, 0)
    outer = max(mid + shift, 0)
    m1, _, _ = assemble_dpi_matrix(pi, p, d, mid)
    m2, _, _ = assemble_dpi_matrix(pi, p + 1, mid, outer)
    return m2 @ m1


# -- the splitting of multivectors -------------------------------------------


def split_multivector(Q, split):
    """Q = Q0 + Q1 with i_kappa Q0 = 0 for kernel kappa and Q1 zero on perp tuples."""
    chart = split.chart
    n = chart.dim
    r = split.rank
    p = Q.degree
    if p == 0:
        return Q, PVector.zero(chart, 0)
    co = split.coframe()
    frame = [X.as_pvector() for X in split.ts_frame + split.h_frame]
    part0 = PVector.zero(chart, p)
    part1 = PVector.zero(chart, p)
    for idx in combinations(range(n), p):
        coeff = Q.apply([co[i] for i in idx])
        if coeff.is_zero:
            continue
        term = frame[idx[0]]
        for i in idx[1:]:
            term = term.wedge(frame[i])
        term = coeff * term
        if all(i < r for i in idx):
            part0 = part0 + term
        else:
            part1 = part1 + term
    if part0 + part1 != Q:
        raise InternalInconsistency("multivector splitting does not add back up")
    return part0, part1


def split_residuals(Q0, Q1, split):
    """Verification data: kernel contractions of Q0 and perp evaluations of Q1."""
    res0 = [interior_form(kappa, Q0) for kappa in split.kernel_frame]
    res1 = []
    p = Q1.degree
    for idx in combinations(range(split.rank), p):
        res1.append(Q1.apply([split.perp_frame[i] for i in idx]))
    return res0, res1


def dpi_preserves_split(pi, g, split, p, d):
    """Check d_pi maps each summand of the (p, d) window into itself.

    Returns {"preserved": bool, "witness": (mono, idx, side) or None}.
    At p = dim the differential lands in the zero space, so preservation
    is trivial.
    """
    if p >= split.chart.dim:
        return {"preserved": True, "witness": None}
    basis = GradedBasis(split.chart, p, d)
    for k in range(len(basis)):
        B = basis.element_pvector(k)
        B0, B1 = split_multivector(B, split)
        if not B0.is_zero:
            _, bad = split_multivector(pi.d_pi(B0), split)
            if not bad.is_zero:
                return {"preserved": False, "witness": (*basis.elements[k], "part0")}
        if not B1.is_zero:
            good, _ = split_multivector(pi.d_pi(B1), split)
            if not good.is_zero:
                return {"preserved": False, "witness": (*basis.elements[k], "part1")}
    return {"preserved": True, "witness": None}


# -- comparison maps ----------------------------------------------------------


def pi_pushforward(split, omega):
    """Leafwise form -> multivector: (pi w)(a_1..a_p) = w(pi(a_1), .., pi(a_p))."""
    chart = split.chart
    n = chart.dim
    r = split.rank
    p = omega.degree
    if p == 0:
        return PVector(chart, 0, {(): omega.component(())})
    sharp_rows = []
    for i in range(n):
        coeffs = split.decompose_vector(split.pi.sharp_basis(i))
        for extra in coeffs[r:]:
            if not extra.is_zero:
                raise InternalInconsistency("pi image leaves the leaf tangents")
        sharp_rows.append(coeffs[:r])
    comps = {}
    for idx in combinations(range(n), p):
        val = omega.apply_frame_coeffs([sharp_rows[i] for i in idx])
        if not val.is_zero:
            comps[idx] = val
    return PVector(chart, p, comps)


def pushforward_naturality_residual(split, omega):
    """pi(d_F w) - d_pi(pi(w)); identically zero by construction of d_pi."""
    lhs = pi_pushforward(split, leafwise_d(split, omega))
    rhs = split.pi.d_pi(pi_pushforward(split, omega))
    return lhs - rhs


def is_basic_pform(split, omega):
    """i_X w = 0 and i_X dw = 0 for X in the leaf frame; returns a witness."""
    if omega.degree == 0:
        f = omega.component(())
        for t in split.ts_frame:
            if not t.apply_to(f).is_zero:
                return False, f"X.f != 0 for X = {t!r}"
        return True, None
    d_omega = exterior_d(omega) if omega.degree < split.chart.dim else None
    for t in split.ts_frame:
        if not interior_vector(t, omega).is_zero:
            return False, f"i_X omega != 0 for X = {t!r}"
        if d_omega is not None and not interior_vector(t, d_omega).is_zero:
            return False, f"i_X d omega != 0 for X = {t!r}"
    return True, None


def sharp_basic(split, omega):
    """Basic p-form -> multivector via the metric: (#w)(a_1..) = w(#a_1, ..)."""
    ok, witness = is_basic_pform(split, omega)
    if not ok:
        raise NotBasic(witness)
    chart = split.chart
    n = chart.dim
    p = omega.degree
    if p == 0:
        return PVector(chart, 0, {(): omega.component(())})
    sharps = [split.g.sharp(OneForm.basis(chart, i)) for i in range(n)]
    comps = {}
    for idx in combinations(range(n), p):
        val = omega.apply([sharps[i] for i in idx])
        if not val.is_zero:
            comps[idx] = val
    return PVector(chart, p, comps)


def basic_pform_family(pi, g, p, max_degree):
    """Wedges of p kernel-frame forms times Casimir monomials, filtered basic.

    The p = 0 family is the Casimir monomials themselves (as 0-forms).
    """
    chart = pi.chart
    monos = casimir_monomials(pi, max_degree)
    if p == 0:
        return [PForm(chart, 0, {(): m}) for m in monos]
    kernel_vecs = pi.field_matrix().kernel_basis()
    kappas = [OneForm(chart, v).as_pform() for v in kernel_vecs]
    out = []
    for combo in combinations(range(len(kappas)), p):
        w = kappas[combo[0]]
        for i in combo[1:]:
            w = w.wedge(kappas[i])
        for m in monos:
            out.append(m * w)
    return out


def leafwise_degree_shift(split, structure):
    """Worst-case coefficient degree increase of d_F on polynomial windows."""
    tdeg = 0
    for t in split.ts_frame:
        for c in t.comps:
            if not c.is_polynomial:
                raise NonPolynomialBivector("leafwise windows need a polynomial leaf frame")
            tdeg = max(tdeg, c.total_degree())
    cdeg = -1
    for row in structure:
        for cell in row:
            for c in cell:
                if not c.is_polynomial:
                    raise NonPolynomialBivector(
                        "leafwise windows need polynomial structure functions"
                    )
                cdeg = max(cdeg, c.total_degree())
    return max(tdeg - 1, cdeg)


class LeafBasis:
    """Windowed basis of leafwise p-forms: monomial x increasing frame tuple."""

    __slots__ = ("split", "degree", "coeff_bound", "elements", "_index")

    def __init__(self, split, degree, coeff_bound):
        r = split.rank
        idxs = list(combinations(range(r), degree))
        self.split = split
        self.degree = degree
        self.coeff_bound = coeff_bound
        self.elements = [
            (mono, idx)
            for mono in _monomials_upto(split.chart.dim, coeff_bound)
            for idx in idxs
        ]
        self._index = {elt: k for k, elt in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def element(self, k):
        mono, idx = self.elements[k]
        f = ScalarField(self.split.chart, {mono: 1}, {(0,) * self.split.chart.dim: 1})
        return LeafwiseForm(self.split, self.degree, {idx: f})

    def coordinates_of(self, omega):
        col = [0] * len(self.elements)
        for idx, field in omega.comps.items():
            if not field.is_polynomial:
                raise NonPolynomialBivector("leafwise window needs polynomial coefficients")
            for mono, coef in field.poly_terms().items():
                key = (mono, idx)
                if key not in self._index:
                    raise WindowTooSmall(
                        f"leafwise coefficient degree {sum(mono)} exceeds {self.coeff_bound}"
                    )
                col[self._index[key]] = coef
        return col

    def from_coordinates(self, col):
        comps = {}
        chart = self.split.chart
        for k, c in enumerate(col):
            if c:
                mono, idx = self.elements[k]
                f = ScalarField(chart, {mono: c.numerator}, {(0,) * chart.dim: c.denominator})
                comps[idx] = comps.get(idx, ScalarField.zero(chart)) + f
        return LeafwiseForm(self.split, self.degree, comps)


def leafwise_truncated_betti(split, p, d, structure=None):
    """Windowed leafwise cohomology dimension, mirroring truncated_betti."""
    from .foliation import _ts_structure_coefficients

    if structure is None:
        structure = _ts_structure_coefficients(split)
    shift = leafwise_degree_shift(split, structure)
    r = split.rank

    def matrix(p_in, d_in, d_out):
        source = LeafBasis(split, p_in, d_in)
        target = LeafBasis(split, p_in + 1, d_out)
        cols = [
            target.coordinates_of(leafwise_d(split, source.element(k), structure))
            for k in range(len(source))
        ]
        return RationalMatrix.from_columns(cols, len(target)), source

    if p == r:
        kernel_dim = len(LeafBasis(split, p, d))
    else:
        mat, _ = matrix(p, d, max(d + shift, 0))
        kernel_dim = len(mat.kernel_basis())
    d_pre = d - shift
    if p == 0 or d_pre < 0:
        image_rank = 0
    else:
        mat0, _ = matrix(p - 1, d_pre, d)
        image_rank = mat0.rank()
    return {
        "p": p,
        "window_degree": d,
        "kernel_dim": kernel_dim,
        "image_rank": image_rank,
        "betti": kernel_dim - image_rank,
    }


def thm31_cochain_report(pi, g, split, p, d):
    """Cochain-level evidence for the basic+leafwise embedding into H_pi.

    (a) every enumerated basic p-form maps to a d_pi-closed multivector
        through the metric identification;
    (b) every d_F-closed windowed leafwise p-form pushes forward to a
        d_pi-closed multivector;
    (c) for p = 1, the windowed dimensions: betti_pi == dim(basic window)
        + betti_leafwise.  Reported as a flag, not asserted, so windows
        where truncation effects break the count are visible.
    """
    report = {"p": p, "window_degree": d}
    closed = []
    for omega in basic_pform_family(pi, g, p, d):
        image = sharp_basic(split, omega)
        closed.append(pi.d_pi(image).is_zero)
    report["basic_count"] = len(closed)
    report["basic_forms_closed"] = all(closed)

    from .foliation import _ts_structure_coefficients

    structure = _ts_structure_coefficients(split)
    shift = leafwise_degree_shift(split, structure)
    source = LeafBasis(split, p, d)
    if p == split.rank:
        kernel_cols = [
            [1 if i == k else 0 for i in range(len(source))] for k in range(len(source))
        ]
    else:
        target = LeafBasis(split, p + 1, max(d + shift, 0))
        cols = [
            target.coordinates_of(leafwise_d(split, source.element(k), structure))
            for k in range(len(source))
        ]
        kernel_cols = RationalMatrix.from_columns(cols, len(target)).kernel_basis()
    pushed_closed = []
    for vec in kernel_cols:
        omega = source.from_coordinates(vec)
        image = pi_pushforward(split, omega)
        if image.degree >= split.chart.dim:
            pushed_closed.append(True)  # the target multivector space is zero
        else:
            pushed_closed.append(pi.d_pi(image).is_zero)
    report["leaf_cocycle_count"] = len(pushed_closed)
    report["pushforwards_closed"] = all(pushed_closed)

    if p == 1:
        betti_pi = truncated_betti(pi, 1, d)["betti"]
        betti_leaf = leafwise_truncated_betti(split, 1, d, structure)["betti"]
        family = [
            f
            for f in basic_form_family(pi, g, d)
            if all(c.is_polynomial and c.total_degree() <= d for c in f.comps)
        ]
        if family:
            rows = []
            monos = _monomials_upto(pi.chart.dim, d)
            mono_index = {m: i for i, m in enumerate(monos)}
            n = pi.chart.dim
            for f in family:
                row = [0] * (n * len(monos))
                for i, c in enumerate(f.comps):
                    if not c.is_zero:
                        for mono, coef in c.poly_terms().items():
                            row[i * len(monos) + mono_index[mono]] = coef
                rows.append(row)
            basic_dim = RationalMatrix(rows).rank()
        else:
            basic_dim = 0
        report["betti_pi"] = betti_pi
        report["betti_leafwise"] = betti_leaf
        report["basic_window_dim"] = basic_dim
        report["dimension_match"] = betti_pi == basic_dim + betti_leaf
    else:
        report["dimension_match"] = None
    return report
