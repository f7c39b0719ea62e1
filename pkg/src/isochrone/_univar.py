"""Exact univariate polynomial helpers over the rationals.

Polynomials are lists of Fraction coefficients, ascending by power, with no
trailing zeros (the zero polynomial is the empty list).  Used for radial
root isolation and the kernel-parameter search in the structural form checks.
All sign decisions are made with exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd
from typing import List, Sequence

Poly = List[Fraction]


def trim(coeffs: Sequence) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    p = trim(p)
    return len(p) - 1


def evaluate(p: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(p)):
        acc = acc * x + Fraction(c)
    return acc


def derivative(p: Sequence) -> Poly:
    return trim([Fraction(c) * i for i, c in enumerate(p)][1:])


def _divmod(a: Poly, b: Poly) -> tuple:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while r and len(r) >= len(b):
        f = r[-1] / b[-1]
        k = len(r) - len(b)
        q[k] = f
        for i, c in enumerate(b):
            r[i + k] -= f * c
        r = trim(r)
    return trim(q), r


def poly_gcd(a: Sequence, b: Sequence) -> Poly:
    """Monic gcd via the Euclidean algorithm."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, _divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def squarefree_part(p: Sequence) -> Poly:
    """p divided by gcd(p, p'): same roots, all simple."""
    p = trim(p)
    if degree(p) < 1:
        return p
    g = poly_gcd(p, derivative(p))
    if degree(g) < 1:
        return p
    return _divmod(p, g)[0]


def _sturm_chain(p: Poly) -> list:
    chain = [trim(p), derivative(p)]
    while chain[-1]:
        rem = _divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append([-c for c in rem])
    return [c for c in chain if c]


def _variations(chain: list, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = evaluate(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def count_roots(p: Sequence, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi], by Sturm's theorem.

    Requires a squarefree input for a meaningful count of a general
    polynomial's roots; callers pass `squarefree_part` output.
    """
    chain = _sturm_chain(trim(p))
    return _variations(chain, Fraction(lo)) - _variations(chain, Fraction(hi))


def root_upper_bound(p: Sequence) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    p = trim(p)
    if len(p) <= 1:
        return Fraction(1)
    lead = abs(p[-1])
    return Fraction(1) + max(abs(c) for c in p[:-1]) / lead


def isolate_real_roots(p: Sequence, lo: Fraction, hi: Fraction, width: Fraction) -> list:
    """Disjoint intervals (a, b], each holding exactly one root of p in (lo, hi].

    p must be squarefree.  Intervals are bisected until narrower than `width`.
    Returns a list of (a, b) Fraction pairs.
    """
    p = trim(p)
    chain = _sturm_chain(p)

    def count(a: Fraction, b: Fraction) -> int:
        return _variations(chain, a) - _variations(chain, b)

    out = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1 and b - a <= width:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        # Nudge off an exact root so every root stays strictly inside a half
        if evaluate(p, mid) == 0:
            mid = a + (b - a) * Fraction(127, 256)
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort()
    return out


def positive_roots(p: Sequence, width: Fraction = Fraction(1, 10**28)) -> list:
    """All distinct positive real roots of p, as floats.

    Isolation intervals are narrowed below `width` (exact bisection is
    cheap, so the default leaves root error far below callers' tolerances
    even after square-root changes of variable).  Multiplicities are
    collapsed via the squarefree part, so double roots are still found.
    """
    p = trim(p)
    if degree(p) < 1:
        return []
    sf = squarefree_part(p)
    bound = root_upper_bound(sf)
    intervals = isolate_real_roots(sf, Fraction(0), bound, Fraction(width))
    return [float((a + b) / 2) for a, b in intervals]


def rational_roots(p: Sequence) -> list:
    """All rational roots of p, exactly, via the rational root theorem."""
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial has every rational as a root")
    if degree(p) == 0:
        return []
    den_lcm = 1
    for c in p:
        den_lcm = den_lcm * c.denominator // _int_gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in p]
    while ints and ints[0] == 0:
        ints.pop(0)
    # factor out x^m first; zero is a root iff the original constant term is 0
    roots = []
    if p[0] == 0:
        roots.append(Fraction(0))
    a0, an = abs(ints[0]), abs(ints[-1])
    for num in _divisors(a0):
        for den in _divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and evaluate(p, cand) == 0:
                    roots.append(cand)
    roots.sort()
    return roots


def has_real_root(p: Sequence) -> bool:
    """True iff p has at least one real root (p nonconstant or zero)."""
    p = trim(p)
    if not p:
        return True
    if degree(p) == 0:
        return False
    sf = squarefree_part(p)
    b = root_upper_bound(sf)
    return count_roots(sf, -b, b) > 0


def _divisors(n: int) -> list:
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)
