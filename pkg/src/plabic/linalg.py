"""Exact rational linear algebra on lists of ``Fraction`` rows.

Thin adapter over sympy's ``DomainMatrix`` on the field QQ.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Matrix = list[list[Fraction]]


def _to_qq(x: Fraction):
    if type(x) is int:
        return QQ(x)
    return QQ(x.numerator, x.denominator)


def _from_qq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def to_domain(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> DomainMatrix:
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    return DomainMatrix([[_to_qq(v) for v in r] for r in rows], (m, n), QQ)


def from_domain(dm: DomainMatrix) -> Matrix:
    return [[_from_qq(v) for v in row] for row in dm.to_list()]


def _small_det(r) -> Fraction:
    if len(r) == 1:
        return Fraction(r[0][0])
    if len(r) == 2:
        return Fraction(r[0][0] * r[1][1] - r[0][1] * r[1][0])
    return Fraction(
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    )


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    if not rows:
        return Fraction(1)
    if len(rows) <= 3:
        return _small_det(rows)
    return _from_qq(to_domain(rows).det())


def det_and_solve(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> tuple[Fraction, Matrix | None]:
    """Determinant of square ``a`` and, when it is nonzero, the solution of ``a x = b``."""
    if not a:
        return Fraction(1), []
    dm = to_domain(a)
    _, u, swaps = dm.lu()
    d = Fraction(-1 if len(swaps) % 2 else 1)
    for i, row in enumerate(u.to_list()):
        d *= _from_qq(row[i])
    if d == 0:
        return d, None
    return d, from_domain(dm.lu_solve(to_domain(b)))


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return to_domain(rows, ncols).rank()


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    """Solve ``a x = b`` for square nonsingular ``a`` (``b`` may have many columns)."""
    if not a:
        return []
    return from_domain(to_domain(a).lu_solve(to_domain(b)))


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = to_domain(rows, ncols).nullspace()
    return from_domain(ns)


def maximal_minors(a: Sequence[Sequence[Fraction]], n: int | None = None) -> dict[tuple[int, ...], Fraction]:
    """All k x k minors of a k x n matrix, keyed by 1-based column subsets."""
    k = len(a)
    n = n if n is not None else (len(a[0]) if a else 0)
    out = {}
    for cols in itertools.combinations(range(n), k):
        sub = [[a[r][c] for c in cols] for r in range(k)]
        out[tuple(c + 1 for c in cols)] = det(sub)
    return out
