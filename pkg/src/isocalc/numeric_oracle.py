"""Floating-point oracle: dense truncations, norm estimates, product checks.

Truncations are independent of the symbolic machinery: they are built
column by column from ``apply``.  Near the truncation edge the compression
of a product differs from the product of compressions, so comparisons only
use *safe* columns, whose images all land inside the window.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .op_algebra import Operator, op_mul

NORM_TOL = 1e-12


@dataclass(frozen=True)
class Truncation:
    size: int
    matrix: np.ndarray
    safe_columns: frozenset

    def to_csv(self, path_or_file) -> None:
        """Nonzero entries as rows ``i,j,re,im``."""
        rows = [(i, j, float(self.matrix[i, j].real), float(self.matrix[i, j].imag))
                for i, j in zip(*np.nonzero(self.matrix))]
        if hasattr(path_or_file, "write"):
            _write(path_or_file, rows)
        else:
            with open(path_or_file, "w", newline="") as fh:
                _write(fh, rows)


def _write(fh, rows):
    w = csv.writer(fh)
    w.writerow(["i", "j", "re", "im"])
    w.writerows(rows)


def truncate(a, n: int) -> Truncation:
    """``P_N A P_N`` as a dense complex matrix."""
    if n < 1:
        raise ValueError("truncation size must be positive")
    m = np.zeros((n, n), dtype=complex)
    safe = set()
    for j in range(n):
        col = a.apply(j)
        inside = True
        for i, c in col:
            if i < n:
                m[i, j] = complex(c)
            else:
                inside = False
        if inside and _images_inside(a, j, n):
            safe.add(j)
    return Truncation(n, m, frozenset(safe))


def _images_inside(a, j: int, n: int) -> bool:
    # apply() drops cancelled entries, so check every term's map directly
    if isinstance(a, Operator):
        for _, f in a.terms:
            y = f(j)
            if y is not None and y >= n:
                return False
        return True
    y = a.forward(j)
    return y is None or y < n


def norm_estimate(a, n: int, seed: int = 0) -> float:
    """Largest singular value of the N-truncation, by power iteration on ``M^H M``."""
    m = truncate(a, n).matrix
    if not m.any():
        return 0.0
    mh = m.conj().T
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(10 * n):
        w = mh @ (m @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(nw - est) <= NORM_TOL * max(nw, 1.0):
            est = nw
            break
        est = nw
    return float(np.sqrt(est))


@dataclass(frozen=True)
class CrossValidation:
    size: int
    max_diff: float
    columns: tuple

    @property
    def ok(self) -> bool:
        return self.max_diff == 0.0


def cross_validate(a: Operator, b: Operator, n: int) -> CrossValidation:
    """Compare the symbolic product with the product of truncations on safe columns."""
    ta, tb = truncate(a, n), truncate(b, n)
    tab = truncate(op_mul(a, b), n)
    cols = []
    for j in sorted(tb.safe_columns):
        if all(i in ta.safe_columns for i, _ in b.apply(j)) and all(
                f(j) is None or f(j) in ta.safe_columns for _, f in b.terms):
            cols.append(j)
    if not cols:
        return CrossValidation(n, 0.0, ())
    prod = ta.matrix @ tb.matrix[:, cols]
    diff = np.abs(prod - tab.matrix[:, cols]).max()
    return CrossValidation(n, float(diff), tuple(cols))
