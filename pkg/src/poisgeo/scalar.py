"""Exact scalar fields: multivariate rational functions over Q.

A ScalarField is a canonical fraction num/den of integer-coefficient
polynomials: gcd(num, den) = 1, den has positive graded-lex leading
coefficient, and zero is represented as 0/1.  Equality of values is
therefore equality of representations, which is what makes every "is this
identically zero" verdict in the engine decidable.
"""

from fractions import Fraction

from .chart import as_point
from .errors import (
    ChartMismatch,
    DivisionByZeroField,
    IndexOutOfRange,
    PoleAtPoint,
    PoisgeoError,
)
from .kernel import poly_add, poly_diff, poly_eval, poly_mul, poly_neg, poly_sub
from .polyops import (
    poly_div_exact,
    poly_gcd,
    poly_is_const,
    poly_lead,
    poly_lead_coeff,
    poly_sorted_terms,
)

_ONE = 1


def _const_poly(n, c):
    return {(0,) * n: c} if c else {}


class ScalarField:
    """Immutable exact rational function on a chart."""

    __slots__ = ("chart", "_num", "_den", "_hash")

    def __init__(self, chart, num, den):
        """Build from raw polynomial dicts; canonicalizes. Prefer the classmethods."""
        if not den:
            raise DivisionByZeroField("zero denominator")
        n = chart.dim
        if not num:
            den = _const_poly(n, 1)
        else:
            g = poly_gcd(num, den)
            if not (poly_is_const(g) and poly_lead_coeff(g) == 1):
                num = poly_div_exact(num, g)
                den = poly_div_exact(den, g)
            if den[poly_lead(den)] < 0:
                num = poly_neg(num)
                den = poly_neg(den)
        self.chart = chart
        self._num = num
        self._den = den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, chart):
        return cls(chart, {}, _const_poly(chart.dim, 1))

    @classmethod
    def one(cls, chart):
        return cls.constant(chart, 1)

    @classmethod
    def constant(cls, chart, value):
        q = Fraction(value)
        n = chart.dim
        return cls(chart, _const_poly(n, q.numerator), _const_poly(n, q.denominator))

    @classmethod
    def coordinate(cls, chart, i):
        n = chart.dim
        if not 0 <= i < n:
            raise IndexOutOfRange(f"coordinate index {i} outside 0..{n - 1}")
        mono = tuple(1 if j == i else 0 for j in range(n))
        return cls(chart, {mono: 1}, _const_poly(n, 1))

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self):
        return not self._num

    @property
    def is_constant(self):
        return poly_is_const(self._num) and poly_is_const(self._den)

    @property
    def is_polynomial(self):
        """True when the canonical denominator is a constant."""
        return poly_is_const(self._den)

    def constant_value(self):
        if not self.is_constant:
            raise PoisgeoError(f"{self} is not constant")
        num = next(iter(self._num.values())) if self._num else 0
        return Fraction(num, next(iter(self._den.values())))

    def poly_terms(self):
        """{exponent tuple: Fraction} for a polynomial field."""
        if not self.is_polynomial:
            raise PoisgeoError(f"{self} is not polynomial")
        d = next(iter(self._den.values()))
        return {m: Fraction(c, d) for m, c in self._num.items()}

    def total_degree(self):
        """Total degree of the numerator (-1 for zero); polynomial fields only."""
        if not self.is_polynomial:
            raise PoisgeoError(f"{self} is not polynomial")
        if not self._num:
            return -1
        return max(sum(m) for m in self._num)

    def monic_parts(self):
        """(num, den) with Fraction coefficients and monic denominator.

        This is the normalization in which the denominator's graded-lex
        leading coefficient is exactly 1.
        """
        lc = self._den[poly_lead(self._den)]
        num = {m: Fraction(c, lc) for m, c in self._num.items()}
        den = {m: Fraction(c, lc) for m, c in self._den.items()}
        return num, den

    def num_dict(self):
        return dict(self._num)

    def den_dict(self):
        return dict(self._den)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ScalarField):
            if other.chart != self.chart:
                raise ChartMismatch(f"{self.chart} vs {other.chart}")
            return other
        if isinstance(other, (int, Fraction)):
            return ScalarField.constant(self.chart, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        if self._den == o._den:
            return ScalarField(self.chart, poly_add(self._num, o._num), self._den)
        num = poly_add(poly_mul(self._num, o._den), poly_mul(o._num, self._den))
        return ScalarField(self.chart, num, poly_mul(self._den, o._den))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            return self
        if self._den == o._den:
            return ScalarField(self.chart, poly_sub(self._num, o._num), self._den)
        num = poly_sub(poly_mul(self._num, o._den), poly_mul(o._num, self._den))
        return ScalarField(self.chart, num, poly_mul(self._den, o._den))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = ScalarField.__new__(ScalarField)
        out.chart = self.chart
        out._num = poly_neg(self._num)
        out._den = self._den
        out._hash = None
        return out

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return ScalarField.zero(self.chart)
        a_num, a_den, b_num, b_den = self._num, self._den, o._num, o._den
        # cross-cancel before multiplying to keep the gcd inputs small
        if not poly_is_const(b_den):
            g = poly_gcd(a_num, b_den)
            if not (poly_is_const(g) and poly_lead_coeff(g) == 1):
                a_num = poly_div_exact(a_num, g)
                b_den = poly_div_exact(b_den, g)
        if not poly_is_const(a_den):
            g = poly_gcd(b_num, a_den)
            if not (poly_is_const(g) and poly_lead_coeff(g) == 1):
                b_num = poly_div_exact(b_num, g)
                a_den = poly_div_exact(a_den, g)
        return ScalarField(
            self.chart, poly_mul(a_num, b_num), poly_mul(a_den, b_den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise DivisionByZeroField("division by the zero field")
        inv = ScalarField(self.chart, o._den, o._num)
        return self * inv

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return ScalarField.one(self.chart)
        base = self
        if k < 0:
            if self.is_zero:
                raise DivisionByZeroField("0 ** negative")
            base = ScalarField(self.chart, self._den, self._num)
            k = -k
        # canonical fractions stay canonical under powers (coprimality persists)
        num, den = base._num, base._den
        rnum, rden = num, den
        for _ in range(k - 1):
            rnum = poly_mul(rnum, num)
            rden = poly_mul(rden, den)
        out = ScalarField.__new__(ScalarField)
        out.chart = self.chart
        out._num = rnum
        out._den = rden if rnum else _const_poly(self.chart.dim, 1)
        out._hash = None
        return out

    # -- calculus ----------------------------------------------------------

    def diff(self, i):
        """Partial derivative with respect to coordinate i (quotient rule)."""
        n = self.chart.dim
        if not 0 <= i < n:
            raise IndexOutOfRange(f"coordinate index {i} outside 0..{n - 1}")
        dn = poly_diff(self._num, i)
        dd = poly_diff(self._den, i)
        if not dd:
            return ScalarField(self.chart, dn, self._den)
        num = poly_sub(poly_mul(dn, self._den), poly_mul(self._num, dd))
        return ScalarField(self.chart, num, poly_mul(self._den, self._den))

    def derivative_along(self, components):
        """Directional derivative sum(components[i] * d/dx_i)."""
        out = ScalarField.zero(self.chart)
        for i, c in enumerate(components):
            if not c.is_zero:
                out = out + c * self.diff(i)
        return out

    def eval_at(self, point):
        """Exact value at a rational point; raises PoleAtPoint on a pole."""
        pt = as_point(self.chart, point)
        dv = poly_eval(self._den, pt)
        if dv == 0:
            raise PoleAtPoint(pt)
        return poly_eval(self._num, pt) / dv

    __call__ = eval_at

    # -- identity ----------------------------------------------------------

    def _key(self):
        return (
            self.chart,
            tuple(poly_sorted_terms(self._num)),
            tuple(poly_sorted_terms(self._den)),
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarField.constant(self.chart, other)
        if not isinstance(other, ScalarField):
            return NotImplemented
        return (
            self.chart == other.chart
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    # -- printing ----------------------------------------------------------

    def _poly_str(self, poly):
        names = self.chart.names
        parts = []
        for mono, coef in poly_sorted_terms(poly):
            vars_ = "*".join(
                nm if e == 1 else f"{nm}^{e}"
                for nm, e in zip(names, mono)
                if e
            )
            if not vars_:
                parts.append(str(coef))
            elif coef == 1:
                parts.append(vars_)
            elif coef == -1:
                parts.append(f"-{vars_}")
            else:
                parts.append(f"{coef}*{vars_}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __str__(self):
        if self.is_zero:
            return "0"
        num = self._poly_str(self._num)
        if poly_is_const(self._den) and poly_lead_coeff(self._den) == 1:
            return num
        den = self._poly_str(self._den)
        if len(self._num) > 1:
            num = f"({num})"
        if any(ch in den for ch in "+-*"):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"ScalarField({self})"


def coordinate_fields(chart):
    """The tuple (x_0, ..., x_{n-1}) as ScalarFields."""
    return tuple(ScalarField.coordinate(chart, i) for i in range(chart.dim))
