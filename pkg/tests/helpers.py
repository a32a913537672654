"""Shared builders for the test suite."""

import random

from sigmacodes import curve
from sigmacodes.curve import Divisor

SEED = 20240611

MODEL_DESCS = {
    "p1_q5": ("rational", 5),
    "p1_q9": ("rational", 9),
    "quartic_q5": ("y2=3*(x^4+2)", 5),
    "quartic_q9": ("y2=x^4+1", 9),
    "cubic_q7": ("y2=x^3+x+1", 7),
    "cubic_q5": ("y2=x^3+2*x+1", 5),
}

_models = {}


def model(name):
    if name not in _models:
        _models[name] = curve.parse_curve(*MODEL_DESCS[name])
    return _models[name]


def rng(offset=0):
    return random.Random(SEED + offset)


def random_poly(F, r, max_deg):
    return tuple(r.randrange(F.q) for _ in range(r.randint(0, max_deg) + 1))


def random_function(m, r, max_deg=3, nonzero=True):
    F = m.field
    while True:
        a = random_poly(F, r, max_deg)
        b = () if m.genus == 0 else random_poly(F, r, max_deg - 1)
        c = random_poly(F, r, max_deg)
        if not any(c):
            continue
        f = m.canonical(a, b, c)
        if nonzero and f.is_zero():
            continue
        return f


def places_upto(m, degree):
    return [p for d in range(1, degree + 1) for p in m.places_of_degree(d)]


def random_divisor(m, r, places, terms=3, lo=-2, hi=3):
    coeffs = {}
    for _ in range(r.randint(0, terms)):
        coeffs[r.choice(places)] = r.randint(lo, hi)
    return Divisor(coeffs)
