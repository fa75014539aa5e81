"""Exact elimination over Gaussian rationals."""

from __future__ import annotations

from itertools import combinations

from .coefficient import ONE, ZERO, Coefficient


def _copy(rows):
    return [[Coefficient.of(x) for x in row] for row in rows]


def bareiss(rows) -> tuple[int, list[list[Coefficient]], Coefficient]:
    """Fraction-free (Bareiss) elimination.

    Returns ``(rank, echelon, det)``; ``det`` is only meaningful for square
    input and is zero when the matrix is singular.
    """
    a = _copy(rows)
    n = len(a)
    m = len(a[0]) if n else 0
    prev = ONE
    sign = 1
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        for i in range(r + 1, n):
            for j in range(c + 1, m):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev
            a[i][c] = ZERO
        prev = a[r][c]
        r += 1
    det = ZERO
    if n == m and r == n:
        det = prev * sign if n else ONE
    return r, a, det


def rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    return bareiss(rows)[0]


def det(rows) -> Coefficient:
    if not rows:
        return ONE
    return bareiss(rows)[2]


def principal_minors(rows):
    """Yield ``(indices, determinant)`` for every principal minor."""
    n = len(rows)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            sub = [[rows[i][j] for j in idx] for i in idx]
            yield idx, det(sub)


def solve(rows, rhs) -> list[Coefficient] | None:
    """One solution of ``rows @ x = rhs`` (free variables set to zero), or None."""
    a = _copy(rows)
    b = [Coefficient.of(x) for x in rhs]
    n = len(a)
    m = len(a[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        b[r], b[piv] = b[piv], b[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        b[r] = b[r] * inv
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                b[i] = b[i] - f * b[r]
        pivots.append(c)
        r += 1
    if any(b[i] for i in range(r, n)):
        return None
    x = [ZERO] * m
    for i, c in enumerate(pivots):
        x[c] = b[i]
    return x


def sparse_rank(vectors) -> int:
    """Rank of a list of sparse vectors (dicts index -> coefficient)."""
    pivots: dict[int, dict] = {}
    r = 0
    for vec in vectors:
        v = {k: Coefficient.of(x) for k, x in vec.items() if x}
        while v:
            lead = min(v)
            row = pivots.get(lead)
            if row is None:
                inv = ONE / v[lead]
                pivots[lead] = {k: x * inv for k, x in v.items()}
                r += 1
                break
            f = v[lead]
            for k, x in row.items():
                y = v.get(k, ZERO) - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return r
