"""Seeded random generators for property-style tests."""

import random
from fractions import Fraction

from poisgeo import OneForm, PForm, ScalarField, VectorField
from poisgeo.errors import PoleAtPoint


def rng(seed):
    return random.Random(seed)


def rand_poly_field(r, chart, degree=2, terms=3, coef=6):
    n = chart.dim
    out = {}
    for _ in range(r.randint(1, terms)):
        mono = [0] * n
        for _ in range(r.randint(0, degree)):
            mono[r.randrange(n)] += 1
        c = r.randint(-coef, coef)
        if c:
            key = tuple(mono)
            out[key] = out.get(key, 0) + c
    out = {m: c for m, c in out.items() if c}
    return ScalarField(chart, out, {(0,) * n: 1})


def rand_field(r, chart, degree=2, terms=3, coef=6):
    """Random rational function: polynomial over a nonvanishing-ish denominator."""
    num = rand_poly_field(r, chart, degree, terms, coef)
    den = rand_poly_field(r, chart, degree=1, terms=2, coef=3)
    if den.is_zero:
        den = ScalarField.one(chart)
    # keep denominators pole-light: 1 + (something squared)
    den = ScalarField.one(chart) + den * den
    return num / den


def rand_point(r, chart, bound=4):
    return tuple(
        Fraction(r.randint(-bound, bound), r.randint(1, bound)) for _ in chart.names
    )


def pole_free_points(r, chart, fields, count, bound=4, attempts=400):
    pts = []
    for _ in range(attempts):
        if len(pts) == count:
            break
        p = rand_point(r, chart, bound)
        try:
            for f in fields:
                f.eval_at(p)
        except PoleAtPoint:
            continue
        pts.append(p)
    if len(pts) < count:
        raise RuntimeError("could not find enough pole-free points")
    return pts


def rand_one_form(r, chart, degree=2, rational=False):
    make = rand_field if rational else rand_poly_field
    return OneForm(chart, [make(r, chart, degree) for _ in chart.names])


def rand_vector_field(r, chart, degree=2, rational=False):
    make = rand_field if rational else rand_poly_field
    return VectorField(chart, [make(r, chart, degree) for _ in chart.names])


def rand_constant_vector_field(r, chart, bound=6):
    return VectorField(
        chart,
        [
            ScalarField.constant(chart, Fraction(r.randint(-bound, bound), r.randint(1, 3)))
            for _ in chart.names
        ],
    )


def rand_pform(r, chart, p, degree=2):
    from itertools import combinations

    comps = {}
    for idx in combinations(range(chart.dim), p):
        comps[idx] = rand_poly_field(r, chart, degree)
    return PForm(chart, p, comps)
