"""Pure-Python polynomial and elimination kernels.

A polynomial in n variables is a dict mapping exponent tuples (length n) to
nonzero int coefficients; {} is the zero polynomial.  These routines are the
inner loop of every scalar-field operation, so they stay allocation-lean and
free of any class machinery.  ``poisgeo._kernel_cy`` is a compiled twin with
the same contract; ``poisgeo.kernel`` picks one at import time.
"""

from fractions import Fraction


def poly_add(a, b):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def poly_sub(a, b):
    if not b:
        return dict(a)
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = -c
        else:
            s = s - c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def poly_neg(a):
    return {m: -c for m, c in a.items()}


def poly_scale(a, k):
    if not k:
        return {}
    return {m: c * k for m, c in a.items()}


def poly_mul(a, b):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            s = out.get(m)
            if s is None:
                out[m] = ca * cb
            else:
                s = s + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
    return out


def poly_term_mul(a, mono, coef):
    """a * (coef * x^mono); coef must be nonzero."""
    if not a:
        return {}
    return {tuple(x + y for x, y in zip(m, mono)): c * coef for m, c in a.items()}


def poly_diff(a, i):
    out = {}
    for m, c in a.items():
        e = m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
    return out


def poly_eval(a, point):
    """Evaluate at a tuple of Fractions (exact)."""
    if not a:
        return Fraction(0)
    n = len(point)
    cache = [{0: Fraction(1)} for _ in range(n)]
    total = Fraction(0)
    for m, c in a.items():
        term = Fraction(c)
        for i in range(n):
            e = m[i]
            if e:
                pows = cache[i]
                p = pows.get(e)
                if p is None:
                    p = point[i] ** e
                    pows[e] = p
                term *= p
        total += term
    return total


def grlex_key(m):
    return (sum(m), m)


def poly_lead(a):
    """Leading monomial under graded lex (total degree first, then lex)."""
    return max(a, key=grlex_key)


def int_row_echelon(rows):
    """Fraction-free (Bareiss) row echelon form of an integer matrix.

    Mutates nothing; returns (rank, pivot_cols, echelon) where echelon is a
    new list of rows.  Entries stay integral throughout: every 2x2 cross
    update is exactly divisible by the previous pivot.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivot_cols = []
    prev = 1
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
            row_i = m[i]
            row_r = m[r]
            for j in range(c, ncols):
                row_i[j] = (pivot * row_i[j] - head * row_r[j]) // prev
        prev = pivot
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    return r, pivot_cols, m
