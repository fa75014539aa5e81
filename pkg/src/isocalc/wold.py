"""Wold decomposition of basis-map isometries.

For ``A e_i = w(i) e_{f(i)}`` with ``f`` injective and total, the unitary
part lives on the indices whose backward orbit ``i, f^-1(i), f^-2(i), ...``
never leaves the range of ``f``, and the wandering space is indexed by the
complement of the range.

Exact certificates come from one of two routes:

* the range chain ``f^k(N)`` stabilizes, and then it *is* the unitary part;
* a candidate ``S`` read off backward orbits in a window is verified
  symbolically: ``f(S) = S`` exactly, and on the complement every piece
  strictly increases indices except at finitely many points, whose backward
  orbits are followed to exit.  Between two visits to that finite set an
  orbit strictly decreases, so this decides every index.

When neither applies the result is certified only below the prefix bound.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import InjectivityError, NotIsometryError, WoldUndecided
from .index_arith import INFINITE, IndexSet
from .op_algebra import (
    Operator,
    PartialInjection,
    PrefixOperator,
    classify,
    invert_injection,
    validate_injection,
)
from .op_algebra import linalg
from .op_algebra.operator import DEFAULT_BOUND

CHAIN_STEPS = 10
CHAIN_MODULUS_CAP = 4096


@dataclass(frozen=True)
class WoldResult:
    unitary_part: IndexSet
    shift_part: IndexSet
    wandering: IndexSet
    multiplicity: int | float
    certificate: object = "exact"

    @property
    def is_exact(self) -> bool:
        return self.certificate == "exact"

    def to_json(self) -> dict:
        cert = "exact" if self.is_exact else {"prefix": self.certificate[1]}
        mult = "inf" if self.multiplicity == INFINITE else int(self.multiplicity)
        return {
            "unitary": self.unitary_part.to_json(),
            "shift": self.shift_part.to_json(),
            "wandering": self.wandering.to_json(),
            "multiplicity": mult,
            "certificate": cert,
        }


def default_bound() -> int:
    env = os.environ.get("ISOCALC_BOUND")
    return int(env) if env else DEFAULT_BOUND


def basis_map_of(a: Operator) -> PartialInjection:
    """The index map of a weighted basis-map operator, or NotIsometryError."""
    if a.is_zero:
        raise NotIsometryError("the zero operator has no Wold decomposition")
    pieces = [p for _, f in a.terms for p in f.pieces]
    try:
        f = validate_injection(pieces)
    except InjectivityError as exc:
        raise NotIsometryError(
            f"not a basis-map operator (column or row {exc.witness} carries two entries)") from exc
    if not f.is_total:
        raise NotIsometryError(f"column {(~f.domain()).min()} of the operator is zero")
    weights = {c.abs2() for c, _ in a.terms}
    if len(weights) != 1:
        raise NotIsometryError("basis map with unequal weights is not an isometry multiple")
    return f


def _orbit_kind(backward, i: int, cap: int) -> str:
    seen = {i}
    j = i
    for _ in range(cap):
        j = backward(j)
        if j is None:
            return "shift"
        if j in seen:
            return "unitary"
        seen.add(j)
    return "undecided"


def _range_chain(f: PartialInjection) -> IndexSet | None:
    r = IndexSet.naturals()
    for _ in range(CHAIN_STEPS):
        nxt = f.restrict(r).image()
        if nxt == r:
            return r
        if nxt.modulus > CHAIN_MODULUS_CAP:
            return None
        r = nxt
    return None


def _candidate(f: PartialInjection, finv: PartialInjection, scale: int) -> IndexSet:
    L = 1
    top = 0
    for p in f.pieces + finv.pieces:
        L = math.lcm(L, p.domain.modulus)
        top = max(top, p.domain.exception_bound(), max(p.domain.added, default=-1) + 1)
    L *= scale
    end = max(top + 4 * L, 64)
    cap = 4 * end + 64
    kinds = {i: _orbit_kind(finv, i, cap) != "shift" for i in range(end)}
    residues = [r for r in range(L)
                if all(kinds[i] for i in range(top, end) if i % L == r)]
    added = [i for i in range(end) if kinds[i] and (i < top or i % L not in residues)]
    removed = [i for i in range(end) if not kinds[i] and (i < top or i % L in residues)]
    return IndexSet.build(L, residues, added, removed)


def _verify(f: PartialInjection, finv: PartialInjection, s: IndexSet) -> bool:
    if f.restrict(s).image() != s:
        return False
    t = ~s
    exceptional: set[int] = set()
    for p in f.pieces:
        dom = p.domain & t
        if dom.is_empty:
            continue
        law = p.law
        if dom.is_finite:
            exceptional.update(dom.elements())
            continue
        if law.slope < 1 or (law.slope == 1 and law.intercept <= 0):
            return False
        if law.slope > 1:
            root = -law.intercept / (law.slope - 1)
            exceptional.update(x for x in dom.elements(below=max(0, math.floor(root)) + 1)
                               if law(x) <= x)
    if not exceptional:
        return True
    top = max(max(exceptional), max(f(e) for e in exceptional))
    cap = (len(exceptional) + 1) * (top + 2)
    return all(_orbit_kind(finv, e, cap) == "shift" for e in exceptional)


def _result(f: PartialInjection, unitary: IndexSet, cert) -> WoldResult:
    wandering = ~f.image()
    return WoldResult(unitary, ~unitary, wandering, wandering.cardinality(), cert)


def wold_decompose(a, bound: int | None = None) -> WoldResult:
    """Split N into unitary-part and shift-part indices for a basis-map isometry."""
    bound = bound or default_bound()
    if isinstance(a, PrefixOperator):
        return _wold_prefix(a.forward, a.backward, bound)
    f = basis_map_of(a)
    finv = invert_injection(f)
    stable = _range_chain(f)
    if stable is not None:
        return _result(f, stable, "exact")
    for scale in (1, 2, 4):
        cand = _candidate(f, finv, scale)
        if _verify(f, finv, cand):
            return _result(f, cand, "exact")
    return _wold_prefix(f, finv, bound)


def _wold_prefix(forward, backward, bound: int) -> WoldResult:
    cap = 4 * bound + 256
    kinds: dict[int, str] = {}
    wand = []
    for i in range(bound):
        if i in kinds:
            continue
        # every index on the path shares the fate of the path's end
        path, on_path, j = [], set(), i
        while True:
            if j in kinds:
                kind = kinds[j]
                break
            if j in on_path:
                kind = "unitary"
                break
            if len(path) > cap:
                raise WoldUndecided(f"backward orbit of {i} did not settle within {cap} steps")
            path.append(j)
            on_path.add(j)
            nxt = backward(j)
            if nxt is None:
                kind = "shift"
                break
            j = nxt
        for p in path:
            kinds[p] = kind
    unitary = [i for i in range(bound) if kinds[i] == "unitary"]
    wand = [j for j in range(bound) if backward(j) is None]
    half = sum(1 for j in wand if j < bound // 2)
    mult = INFINITE if len(wand) > half else len(wand)
    u = IndexSet.finite(unitary)
    cert = ("prefix", bound)
    return WoldResult(u, IndexSet.below(bound) - u, IndexSet.finite(wand), mult, cert)


def multiplicity_certified(a, bound: int | None = None) -> tuple[int | float, object]:
    """``dim ker A*`` for an isometry multiple, with its certificate."""
    if isinstance(a, PrefixOperator):
        res = wold_decompose(a, bound)
        return res.multiplicity, res.certificate
    kind = classify(a)
    if not kind.is_isometry_multiple:
        raise NotIsometryError(f"multiplicity needs an isometry multiple, got {kind.kind}")
    try:
        f = basis_map_of(a)
    except NotIsometryError:
        f = None
    if f is not None:
        return (~f.image()).cardinality(), "exact"
    hit = IndexSet.empty()
    for _, g in a.terms:
        hit = hit | g.image()
    if not (~hit).is_finite:
        return INFINITE, "exact"
    # ker A* restricted to span{e_j : j < n} grows without bound iff the kernel is infinite
    small, large = 64, 128
    k_small = _restricted_nullity(a, small)
    k_large = _restricted_nullity(a, large)
    if k_large > k_small:
        return INFINITE, ("prefix", large)
    return k_large, ("prefix", large)


def _restricted_nullity(a: Operator, n: int) -> int:
    cols = []
    for j in range(n):
        cols.append({i: c for i, c in a.apply_adjoint(j)})
    return n - linalg.sparse_rank(cols)


def multiplicity(a, bound: int | None = None) -> int | float:
    return multiplicity_certified(a, bound)[0]
