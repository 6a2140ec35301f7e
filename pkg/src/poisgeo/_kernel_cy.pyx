# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of poisgeo._kernel_py.

Same contract, same dict-of-exponent-tuples representation; the win comes
from C-level loop and tuple handling around the arbitrary-precision
coefficient arithmetic, which stays exact Python ints.
"""

from fractions import Fraction


def poly_add(dict a, dict b):
    cdef dict out
    cdef tuple m
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


def poly_sub(dict a, dict b):
    cdef dict out
    cdef tuple m
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


def poly_neg(dict a):
    cdef dict out = {}
    cdef tuple m
    for m, c in a.items():
        out[m] = -c
    return out


def poly_scale(dict a, k):
    cdef dict out = {}
    cdef tuple m
    if not k:
        return out
    for m, c in a.items():
        out[m] = c * k
    return out


cdef inline tuple _mono_mul(tuple ma, tuple mb):
    cdef Py_ssize_t i, n = len(ma)
    cdef list parts = [0] * n
    for i in range(n):
        parts[i] = <object> ma[i] + <object> mb[i]
    return tuple(parts)


def poly_mul(dict a, dict b):
    cdef dict out = {}
    cdef tuple ma, mb, m
    if not a or not b:
        return out
    if len(a) > len(b):
        a, b = b, a
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
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


def poly_term_mul(dict a, tuple mono, coef):
    cdef dict out = {}
    cdef tuple m
    if not a:
        return out
    for m, c in a.items():
        out[_mono_mul(m, mono)] = c * coef
    return out


def poly_diff(dict a, Py_ssize_t i):
    cdef dict out = {}
    cdef tuple m
    cdef long e
    for m, c in a.items():
        e = <long> m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
    return out


def poly_eval(dict a, tuple point):
    cdef Py_ssize_t i, n = len(point)
    cdef tuple m
    cdef list cache = [None] * n
    for i in range(n):
        cache[i] = {0: Fraction(1)}
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
                term = term * p
        total = total + term
    return total


def grlex_key(tuple m):
    return (sum(m), m)


def poly_lead(dict a):
    cdef tuple best = None
    cdef tuple m
    best_key = None
    for m in a:
        key = (sum(m), m)
        if best_key is None or key > best_key:
            best_key = key
            best = m
    return best


def int_row_echelon(rows):
    """Fraction-free Bareiss echelon over the integers; see the pure twin."""
    cdef list m = [list(row) for row in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t ncols = len(m[0]) if nrows else 0
    cdef list pivot_cols = []
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef list row_i, row_r
    prev = 1
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
            row_i = m[i]
            head = row_i[c]
            row_r = m[r]
            for j in range(c, ncols):
                row_i[j] = (pivot * row_i[j] - head * row_r[j]) // prev
        prev = pivot
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    return r, pivot_cols, m
