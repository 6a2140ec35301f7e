"""Coordinate tensor fields and the classical operators on them.

Vectors and 1-forms store one ScalarField per coordinate; higher-degree
forms and multivectors store one component per strictly increasing
multi-index, with all sign bookkeeping done by permutation parity.
"""

from itertools import combinations

from .errors import (
    ChartMismatch,
    DegreeOverflow,
    DegreeUnderflow,
    PoisgeoError,
)
from .scalar import ScalarField


def _same_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatch(f"{a.chart} vs {b.chart}")


def _sort_sign(idx):
    """(sign, sorted tuple) of an index tuple; sign 0 on repeats."""
    idx = list(idx)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(idx)):
        if idx[i - 1] == idx[i]:
            return 0, tuple(idx)
    return sign, tuple(idx)


def _det(chart, rows):
    """Determinant of a small ScalarField matrix by cofactor expansion."""
    n = len(rows)
    if n == 0:
        return ScalarField.one(chart)
    if n == 1:
        return rows[0][0]
    total = ScalarField.zero(chart)
    for j in range(n):
        if rows[0][j].is_zero:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        term = rows[0][j] * _det(chart, minor)
        total = total + term if j % 2 == 0 else total - term
    return total


class _Linear:
    """Shared parts of VectorField and OneForm (n components)."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart, comps):
        comps = tuple(comps)
        if len(comps) != chart.dim:
            raise PoisgeoError(f"need {chart.dim} components, got {len(comps)}")
        for c in comps:
            if c.chart != chart:
                raise ChartMismatch("component chart mismatch")
        self.chart = chart
        self.comps = comps

    @classmethod
    def zero(cls, chart):
        z = ScalarField.zero(chart)
        return cls(chart, (z,) * chart.dim)

    @classmethod
    def basis(cls, chart, i):
        z = ScalarField.zero(chart)
        one = ScalarField.one(chart)
        return cls(chart, tuple(one if j == i else z for j in range(chart.dim)))

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.comps)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _same_chart(self, other)
        return type(self)(self.chart, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _same_chart(self, other)
        return type(self)(self.chart, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return type(self)(self.chart, tuple(-a for a in self.comps))

    def __mul__(self, f):
        if isinstance(f, int):
            f = ScalarField.constant(self.chart, f)
        if not isinstance(f, ScalarField):
            return NotImplemented
        return type(self)(self.chart, tuple(f * a for a in self.comps))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.chart == other.chart
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((type(self).__name__, self.chart, self.comps))

    def _display(self, symbols):
        parts = [f"({c})*{s}" for c, s in zip(self.comps, symbols) if not c.is_zero]
        return " + ".join(parts) if parts else "0"


class VectorField(_Linear):
    """sum comps[i] * d/dx_i."""

    def apply_to(self, f):
        """Directional derivative X.f."""
        return f.derivative_along(self.comps)

    def as_pvector(self):
        return PVector(self.chart, 1, {(i,): c for i, c in enumerate(self.comps)})

    def __repr__(self):
        return self._display([f"d/d{nm}" for nm in self.chart.names])


class OneForm(_Linear):
    """sum comps[i] * dx_i."""

    def pair(self, X):
        """alpha(X)."""
        _same_chart(self, X)
        out = ScalarField.zero(self.chart)
        for a, v in zip(self.comps, X.comps):
            if not (a.is_zero or v.is_zero):
                out = out + a * v
        return out

    __call__ = pair

    def as_pform(self):
        return PForm(self.chart, 1, {(i,): c for i, c in enumerate(self.comps)})

    def __repr__(self):
        return self._display([f"d{nm}" for nm in self.chart.names])


class _Alternating:
    """Shared storage for PForm / PVector: components on increasing multi-indices."""

    __slots__ = ("chart", "degree", "comps", "_zero")

    def __init__(self, chart, degree, components):
        n = chart.dim
        if not 0 <= degree <= n:
            raise DegreeOverflow(f"degree {degree} outside 0..{n}")
        idxs = list(combinations(range(n), degree))
        z = ScalarField.zero(chart)
        comps = {}
        if isinstance(components, dict):
            for idx, val in components.items():
                idx = tuple(idx)
                if idx not in set(idxs):
                    raise PoisgeoError(f"index {idx} is not increasing in range")
                if not val.is_zero:
                    comps[idx] = val
        else:
            vals = list(components)
            if len(vals) != len(idxs):
                raise PoisgeoError("wrong component count")
            for idx, val in zip(idxs, vals):
                if not val.is_zero:
                    comps[idx] = val
        for v in comps.values():
            if v.chart != chart:
                raise ChartMismatch("component chart mismatch")
        self.chart = chart
        self.degree = degree
        self.comps = comps
        self._zero = z

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {})

    def component(self, idx):
        """Component at a strictly increasing index tuple."""
        return self.comps.get(tuple(idx), self._zero)

    def component_signed(self, idx):
        """Component at an arbitrary index tuple (0 on repeats)."""
        sign, key = _sort_sign(idx)
        if sign == 0:
            return self._zero
        c = self.comps.get(key, self._zero)
        return c if sign == 1 else -c

    @property
    def is_zero(self):
        return not self.comps

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _same_chart(self, other)
        if self.degree != other.degree:
            raise PoisgeoError("degree mismatch")
        out = dict(self.comps)
        for k, v in other.comps.items():
            s = out.get(k)
            out[k] = v if s is None else s + v
        return type(self)(self.chart, self.degree, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(self.chart, self.degree, {k: -v for k, v in self.comps.items()})

    def __mul__(self, f):
        if isinstance(f, int):
            f = ScalarField.constant(self.chart, f)
        if not isinstance(f, ScalarField):
            return NotImplemented
        return type(self)(self.chart, self.degree, {k: f * v for k, v in self.comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.chart == other.chart
            and self.degree == other.degree
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash(
            (type(self).__name__, self.chart, self.degree, tuple(sorted(self.comps.items(), key=lambda kv: kv[0])))
        )

    def wedge(self, other):
        if type(other) is not type(self):
            raise PoisgeoError("wedge needs two objects of the same kind")
        _same_chart(self, other)
        p, q = self.degree, other.degree
        if p + q > self.chart.dim:
            raise DegreeOverflow(f"wedge degree {p + q} exceeds dimension {self.chart.dim}")
        out = {}
        for ia, ca in self.comps.items():
            for ib, cb in other.comps.items():
                sign, key = _sort_sign(ia + ib)
                if sign == 0:
                    continue
                term = ca * cb if sign == 1 else -(ca * cb)
                s = out.get(key)
                out[key] = term if s is None else s + term
        return type(self)(self.chart, p + q, out)

    __xor__ = wedge

    def _apply(self, rows):
        """Multilinear alternating evaluation given the argument component rows."""
        chart = self.chart
        total = ScalarField.zero(chart)
        for idx, c in self.comps.items():
            mat = [[row[i] for i in idx] for row in rows]
            d = _det(chart, mat)
            if not d.is_zero:
                total = total + c * d
        return total

    def contract_first(self, cov, rest_indices):
        """Evaluate with a general object in slot 0 and coordinate slots after.

        ``cov`` is a OneForm for PVector, a VectorField for PForm.
        """
        sign, key = _sort_sign(rest_indices)
        if sign == 0:
            return self._zero
        out = ScalarField.zero(self.chart)
        for m, cm in enumerate(cov.comps):
            if cm.is_zero:
                continue
            val = self.component_signed((m,) + key)
            if not val.is_zero:
                out = out + cm * val
        return out if sign == 1 else -out

    def _interior_first(self, cov):
        """Contraction in the first slot with a OneForm/VectorField."""
        if self.degree == 0:
            raise DegreeUnderflow("cannot contract a degree-0 object")
        out = {}
        for idx, c in self.comps.items():
            for t, i in enumerate(idx):
                w = cov.comps[i]
                if w.is_zero:
                    continue
                key = idx[:t] + idx[t + 1:]
                term = w * c if t % 2 == 0 else -(w * c)
                s = out.get(key)
                out[key] = term if s is None else s + term
        return type(self)(self.chart, self.degree - 1, out)

    def _repr_symbols(self, fmt):
        names = self.chart.names
        parts = []
        for idx in combinations(range(self.chart.dim), self.degree):
            c = self.comps.get(idx)
            if c is None:
                continue
            sym = "^".join(fmt.format(names[i]) for i in idx) or "1"
            parts.append(f"({c})*{sym}")
        return " + ".join(parts) if parts else "0"


class PForm(_Alternating):
    """Differential p-form in coordinates."""

    def apply(self, vectors):
        vectors = list(vectors)
        if len(vectors) != self.degree:
            raise PoisgeoError("argument count must match the degree")
        return self._apply([X.comps for X in vectors])

    def as_oneform(self):
        if self.degree != 1:
            raise PoisgeoError("not a 1-form")
        return OneForm(self.chart, tuple(self.component((i,)) for i in range(self.chart.dim)))

    def __repr__(self):
        return self._repr_symbols("d{}")


class PVector(_Alternating):
    """p-multivector field in coordinates."""

    def apply(self, forms):
        forms = list(forms)
        if len(forms) != self.degree:
            raise PoisgeoError("argument count must match the degree")
        return self._apply([a.comps for a in forms])

    def as_vector(self):
        if self.degree != 1:
            raise PoisgeoError("not a 1-vector")
        return VectorField(self.chart, tuple(self.component((i,)) for i in range(self.chart.dim)))

    def __repr__(self):
        return self._repr_symbols("d/d{}")


def scalar_as_pform(f):
    return PForm(f.chart, 0, {(): f})


def scalar_as_pvector(f):
    return PVector(f.chart, 0, {(): f})


def wedge(a, b):
    """Graded-antisymmetric product of two forms or two multivectors."""
    return a.wedge(b)


def interior_vector(X, omega):
    """i_X omega: contraction of a p-form with a vector field in slot one."""
    _same_chart(X, omega)
    if not isinstance(omega, PForm):
        raise PoisgeoError("interior_vector expects a PForm")
    return omega._interior_first(X)


def interior_form(alpha, Q):
    """i_alpha Q: contraction of a p-multivector with a 1-form in slot one."""
    _same_chart(alpha, Q)
    if not isinstance(Q, PVector):
        raise PoisgeoError("interior_form expects a PVector")
    return Q._interior_first(alpha)


def exterior_d(omega):
    """Coordinate exterior derivative; accepts a ScalarField as a 0-form."""
    if isinstance(omega, ScalarField):
        omega = scalar_as_pform(omega)
    chart = omega.chart
    n = chart.dim
    if omega.degree >= n:
        raise DegreeOverflow(f"d of a degree-{omega.degree} form in dimension {n}")
    out = {}
    for idx, c in omega.comps.items():
        for m in range(n):
            if m in idx:
                continue
            dc = c.diff(m)
            if dc.is_zero:
                continue
            sign, key = _sort_sign((m,) + idx)
            term = dc if sign == 1 else -dc
            s = out.get(key)
            out[key] = term if s is None else s + term
    return PForm(chart, omega.degree + 1, out)


def lie_bracket(X, Y):
    """Commutator [X, Y] of vector fields."""
    _same_chart(X, Y)
    return VectorField(
        X.chart,
        tuple(X.apply_to(yc) - Y.apply_to(xc) for xc, yc in zip(X.comps, Y.comps)),
    )


def lie_derivative(X, omega):
    """L_X omega for a p-form, via Cartan's formula i_X d + d i_X."""
    if isinstance(omega, ScalarField):
        return X.apply_to(omega)
    _same_chart(X, omega)
    if omega.degree == 0:
        return scalar_as_pform(X.apply_to(omega.component(())))
    n = omega.chart.dim
    inner = interior_vector(X, omega)
    out = exterior_d(inner) if inner.degree < n else PForm.zero(omega.chart, omega.degree)
    if omega.degree < n:
        out = out + interior_vector(X, exterior_d(omega))
    return out


def lie_derivative_oneform(X, alpha):
    return lie_derivative(X, alpha.as_pform()).as_oneform()


def lie_derivative_bivector(X, B):
    """L_X B for a bivector, by the Leibniz expansion on coordinate forms.

    Componentwise: (L_X B)(dx_i, dx_j) = X.B(dx_i, dx_j)
                    - B(L_X dx_i, dx_j) - B(dx_i, L_X dx_j),
    with L_X dx_i = d(X^i).
    """
    _same_chart(X, B)
    if not (isinstance(B, PVector) and B.degree == 2):
        raise PoisgeoError("lie_derivative_bivector expects a bivector PVector")
    chart = X.chart
    n = chart.dim
    dX = [exterior_d(X.comps[i]).as_oneform() for i in range(n)]
    out = {}
    for i, j in combinations(range(n), 2):
        val = X.apply_to(B.component((i, j)))
        val = val - B.contract_first(dX[i], (j,))
        val = val + B.contract_first(dX[j], (i,))
        if not val.is_zero:
            out[(i, j)] = val
    return PVector(chart, 2, out)
