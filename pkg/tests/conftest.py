"""Shared fixtures and random generators for the test suite.

Randomized property tests use seeded numpy generators so the suite is
deterministic run to run.
"""

from fractions import Fraction

import numpy as np
import pytest

from isochrone.polyalg import BivarPoly


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)


def random_fraction(rng, lo=-6, hi=7, max_den=4) -> Fraction:
    return Fraction(int(rng.integers(lo, hi)), int(rng.integers(1, max_den)))


def random_poly(rng, max_deg=4, density=0.6) -> BivarPoly:
    terms = {}
    for i in range(max_deg + 1):
        for j in range(max_deg + 1 - i):
            if rng.random() < density:
                f = random_fraction(rng)
                if f:
                    terms[(i, j)] = f
    return BivarPoly(terms)


def random_nonzero_poly(rng, max_deg=4, density=0.6) -> BivarPoly:
    while True:
        p = random_poly(rng, max_deg, density)
        if not p.is_zero:
            return p


def random_homogeneous(rng, deg, density=0.8) -> BivarPoly:
    while True:
        terms = {}
        for i in range(deg + 1):
            if rng.random() < density:
                f = random_fraction(rng)
                if f:
                    terms[(i, deg - i)] = f
        if terms:
            return BivarPoly(terms)


def random_radial_coeffs(rng, m, nonzero_lead=True):
    a = [random_fraction(rng, -3, 4, 3) for _ in range(m + 1)]
    if nonzero_lead and a[-1] == 0:
        a[-1] = Fraction(1)
    if all(c == 0 for c in a):
        a[0] = Fraction(1)
    return tuple(a)
