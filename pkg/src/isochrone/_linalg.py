"""Exact linear algebra over the rationals.

Rank, nullspace, and linear solves are computed by Bareiss fraction-free
elimination on integer matrices (rows are cleared of denominators first), so
no rank decision ever depends on floating point.  Scale: a few hundred rows
by a few dozen columns, well within desk range.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence

Vector = List[Fraction]
Matrix = List[List[Fraction]]


def _to_int_rows(rows: Sequence[Sequence[Fraction]]) -> list:
    out = []
    for row in rows:
        fr = [Fraction(c) for c in row]
        lcm = 1
        for c in fr:
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in fr]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def _bareiss_echelon(m: list) -> tuple:
    """In-place fraction-free row echelon form.

    Returns (rows, pivot_columns) where rows is the reduced integer matrix.
    The division in the Bareiss update is exact by construction.
    """
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    m = _to_int_rows(rows)
    return len(_bareiss_echelon(m)[1])


def nullspace_basis(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """Basis of {v : A v = 0}, one primitive integer vector per free column.

    The basis follows the reduced-echelon convention: for each free column f
    the vector has v[f] = 1 (before integer normalization) and zeros in the
    other free columns, which makes results reproducible.
    """
    if not rows:
        rows = []
    m = _to_int_rows(rows)
    for row in m:
        if len(row) != ncols:
            raise ValueError("row length does not match ncols")
    ech, pivots = _bareiss_echelon(m)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        v: Vector = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            s = Fraction(0)
            for j in range(c + 1, ncols):
                if v[j]:
                    s += Fraction(ech[i][j]) * v[j]
            v[c] = -s / ech[i][c]
        basis.append(_primitive(v))
    return basis


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[Vector]:
    """One exact solution of A v = b, or None if inconsistent.

    Free variables are set to zero.  Kernel directions, when needed, come
    from `nullspace_basis`.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    m = _to_int_rows(aug)
    ech, pivots = _bareiss_echelon(m)
    if pivots and pivots[-1] == ncols:
        return None
    v: Vector = [Fraction(0)] * ncols
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        s = Fraction(ech[i][ncols])
        for j in range(c + 1, ncols):
            if v[j]:
                s -= Fraction(ech[i][j]) * v[j]
        v[c] = s / ech[i][c]
    return v


def in_span(basis: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> bool:
    """Exact membership of `target` in the row span of `basis`."""
    base = [list(r) for r in basis]
    r0 = rank(base)
    return rank(base + [list(target)]) == r0


def _primitive(v: Vector) -> Vector:
    """Scale a rational vector to primitive integer form with positive lead."""
    lcm = 1
    for c in v:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = [c * lcm for c in v]
    g = 0
    for c in ints:
        g = gcd(g, abs(int(c)))
    if g > 1:
        ints = [c / g for c in ints]
    for c in ints:
        if c != 0:
            if c < 0:
                ints = [-x for x in ints]
            break
    return [Fraction(c) for c in ints]
