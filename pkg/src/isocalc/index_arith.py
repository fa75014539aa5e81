"""Decidable index sets over the naturals and pairing bijections.

An :class:`IndexSet` is an eventually periodic subset of N, stored as a
residue pattern ``{aL + r : a >= 0, r in residues}`` patched by two finite
exception sets.  Every set is kept in a canonical form, so ``==`` on
instances is equality of the underlying sets.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

INFINITE = math.inf

COMBINE_KINDS = ("union", "intersection", "difference", "complement-of-first")


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _minimal_period(modulus: int, residues: frozenset[int]) -> tuple[int, frozenset[int]]:
    for p in _prime_factors(modulus):
        while modulus % p == 0:
            d = modulus // p
            if all((r + d) % modulus in residues for r in residues):
                modulus = d
                residues = frozenset(r % d for r in residues)
            else:
                break
    return modulus, residues


@dataclass(frozen=True)
class IndexSet:
    """Canonical eventually periodic subset of N.

    Use :meth:`build` (or the other constructors) rather than the raw
    dataclass constructor; only ``build`` canonicalizes.
    """

    modulus: int
    residues: frozenset[int]
    added: frozenset[int]
    removed: frozenset[int]
    _added_sorted: tuple[int, ...] = field(default=(), compare=False, repr=False)
    _removed_sorted: tuple[int, ...] = field(default=(), compare=False, repr=False)
    _res_sorted: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_added_sorted", tuple(sorted(self.added)))
        object.__setattr__(self, "_removed_sorted", tuple(sorted(self.removed)))
        object.__setattr__(self, "_res_sorted", tuple(sorted(self.residues)))

    # -- constructors -----------------------------------------------------

    @classmethod
    def build(cls, modulus: int = 1, residues: Iterable[int] = (),
              added: Iterable[int] = (), removed: Iterable[int] = ()) -> "IndexSet":
        """Canonical set ``(progression ∪ added) \\ removed``."""
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        removed = frozenset(removed)
        added = frozenset(added)
        if any(x < 0 for x in added | removed):
            raise ValueError("index sets hold naturals only")
        mod, res = _minimal_period(modulus, frozenset(r % modulus for r in residues))
        new_added = frozenset(x for x in added if x % mod not in res and x not in removed)
        new_removed = frozenset(x for x in removed if x % mod in res)
        return cls(mod, res, new_added, new_removed)

    @classmethod
    def finite(cls, elements: Iterable[int]) -> "IndexSet":
        return cls.build(1, (), elements, ())

    @classmethod
    def empty(cls) -> "IndexSet":
        return cls.build()

    @classmethod
    def naturals(cls) -> "IndexSet":
        return cls.build(1, (0,))

    @classmethod
    def progression(cls, modulus: int, residues: Iterable[int]) -> "IndexSet":
        return cls.build(modulus, residues)

    @classmethod
    def at_least(cls, k: int) -> "IndexSet":
        return cls.build(1, (0,), (), range(k))

    @classmethod
    def below(cls, k: int) -> "IndexSet":
        return cls.finite(range(k))

    # -- basic queries ----------------------------------------------------

    def in_progression(self, i: int) -> bool:
        return i % self.modulus in self.residues

    def __contains__(self, i: int) -> bool:
        if i < 0:
            return False
        if i in self.removed:
            return False
        return i in self.added or i % self.modulus in self.residues

    def contains(self, i: int) -> bool:
        return i in self

    @property
    def is_finite(self) -> bool:
        return not self.residues

    @property
    def is_empty(self) -> bool:
        return not self.residues and not self.added

    def cardinality(self) -> int | float:
        """Number of elements; ``INFINITE`` (``math.inf``) for infinite sets."""
        return len(self.added) if self.is_finite else INFINITE

    def density(self) -> Fraction:
        return Fraction(len(self.residues), self.modulus)

    def exception_bound(self) -> int:
        """Smallest multiple of the modulus above every exceptional point."""
        top = max(self.added | self.removed, default=-1) + 1
        return -(-top // self.modulus) * self.modulus

    def min(self) -> int | None:
        best = self._added_sorted[0] if self.added else None
        if self.residues:
            base = 0
            while True:
                hit = next((base + r for r in self._res_sorted if base + r not in self.removed), None)
                if hit is not None:
                    break
                base += self.modulus
            best = hit if best is None else min(best, hit)
        return best

    def max(self) -> int | None:
        if not self.is_finite:
            raise ValueError("infinite set has no maximum")
        return self._added_sorted[-1] if self.added else None

    def count_below(self, n: int) -> int:
        """``|{x in S : x < n}|``."""
        if n <= 0:
            return 0
        L = self.modulus
        total = 0
        for r in self._res_sorted:
            if n > r:
                total += (n - r + L - 1) // L
        total += bisect_left(self._added_sorted, n)
        total -= bisect_left(self._removed_sorted, n)
        return total

    def rank_of(self, i: int) -> int:
        if i not in self:
            raise ValueError(f"{i} is not an element of the set")
        return self.count_below(i)

    def element_at(self, k: int) -> int:
        """The k-th element (0-based) in increasing order."""
        if k < 0:
            raise IndexError(k)
        if self.is_finite:
            if k >= len(self.added):
                raise IndexError(f"index {k} out of range for finite set of size {len(self.added)}")
            return self._added_sorted[k]
        per = len(self.residues)
        hi = self.exception_bound() + ((k + 1 + len(self.removed)) // per + 1) * self.modulus
        lo = 0
        # smallest n with count_below(n + 1) >= k + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self.count_below(mid + 1) >= k + 1:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def elements(self, below: int | None = None) -> Iterator[int]:
        """Increasing enumeration, truncated at ``below`` when given."""
        if below is None:
            if not self.is_finite:
                raise ValueError("refusing to enumerate an infinite set without a bound")
            yield from self._added_sorted
            return
        if self.is_finite:
            for x in self._added_sorted:
                if x >= below:
                    return
                yield x
            return
        for x in range(below):
            if x in self:
                yield x

    # -- set algebra ------------------------------------------------------

    def _binary(self, other: "IndexSet", op) -> "IndexSet":
        L = math.lcm(self.modulus, other.modulus)
        res = [r for r in range(L) if op(self.in_progression(r), other.in_progression(r))]
        points = self.added | self.removed | other.added | other.removed
        added, removed = [], []
        for x in points:
            want = op(x in self, x in other)
            patt = x % L in res
            if want and not patt:
                added.append(x)
            elif patt and not want:
                removed.append(x)
        return IndexSet.build(L, res, added, removed)

    def __or__(self, other: "IndexSet") -> "IndexSet":
        return _combine_cached(self, other, "union")

    def __and__(self, other: "IndexSet") -> "IndexSet":
        return _combine_cached(self, other, "intersection")

    def __sub__(self, other: "IndexSet") -> "IndexSet":
        return _combine_cached(self, other, "difference")

    def __invert__(self) -> "IndexSet":
        res = frozenset(range(self.modulus)) - self.residues
        return IndexSet.build(self.modulus, res, self.removed, self.added)

    def complement(self) -> "IndexSet":
        return ~self

    def isdisjoint(self, other: "IndexSet") -> bool:
        return (self & other).is_empty

    def issubset(self, other: "IndexSet") -> bool:
        return (self - other).is_empty

    def __le__(self, other: "IndexSet") -> bool:
        return self.issubset(other)

    def shifted(self, k: int) -> "IndexSet":
        """``{x + k : x in S}`` for ``k >= 0``."""
        if k < 0:
            raise ValueError("use a nonnegative shift")
        if k == 0:
            return self
        return IndexSet.build(
            self.modulus,
            [r + k for r in self.residues],
            [x + k for x in self.added],
            [x + k for x in self.removed] + [x for x in range(k) if (x - k) % self.modulus in self.residues],
        )

    # -- presentation -----------------------------------------------------

    def key(self) -> tuple:
        return (self.modulus, self._res_sorted, self._added_sorted, self._removed_sorted)

    def to_json(self) -> dict:
        return {
            "mod": self.modulus,
            "res": list(self._res_sorted),
            "plus": list(self._added_sorted),
            "minus": list(self._removed_sorted),
        }

    @classmethod
    def from_json(cls, data: dict) -> "IndexSet":
        return cls.build(int(data.get("mod", 1)), data.get("res", ()),
                         data.get("plus", ()), data.get("minus", ()))

    def __repr__(self) -> str:
        if self.is_finite:
            return f"IndexSet({{{', '.join(map(str, self._added_sorted))}}})"
        parts = [f"mod={self.modulus}", f"res={list(self._res_sorted)}"]
        if self.added:
            parts.append(f"plus={list(self._added_sorted)}")
        if self.removed:
            parts.append(f"minus={list(self._removed_sorted)}")
        return f"IndexSet({', '.join(parts)})"


_OPS = {
    "union": lambda a, b: a or b,
    "intersection": lambda a, b: a and b,
    "difference": lambda a, b: a and not b,
}


@lru_cache(maxsize=65536)
def _combine_cached(s: IndexSet, t: IndexSet, kind: str) -> IndexSet:
    return s._binary(t, _OPS[kind])


def combine(s: IndexSet, t: IndexSet | None, kind: str) -> IndexSet:
    """Set operation on canonical index sets; ``t`` is ignored for complements."""
    if kind == "complement-of-first":
        return ~s
    if kind not in _OPS:
        raise ValueError(f"unknown combine kind {kind!r}; expected one of {COMBINE_KINDS}")
    return _combine_cached(s, t, kind)


def contains(s: IndexSet, i: int) -> bool:
    return i in s


def rank_of(s: IndexSet, i: int) -> int:
    return s.rank_of(i)


def element_at(s: IndexSet, k: int) -> int:
    return s.element_at(k)


# -- pairing ---------------------------------------------------------------


@dataclass(frozen=True)
class PairingScheme:
    """Bijection X x N -> N; ``kind`` is ``"row-major"`` (needs ``m``) or ``"cantor"``."""

    kind: str
    m: int | None = None

    def __post_init__(self):
        if self.kind == "row-major":
            if self.m is None or self.m < 1:
                raise ValueError("row-major pairing needs a positive width m")
        elif self.kind != "cantor":
            raise ValueError(f"unknown pairing kind {self.kind!r}")

    def pair(self, r: int, k: int) -> int:
        if r < 0 or k < 0:
            raise ValueError("pairing is defined on naturals")
        if self.kind == "row-major":
            if r >= self.m:
                raise ValueError(f"row index {r} out of range for width {self.m}")
            return k * self.m + r
        s = r + k
        return s * (s + 1) // 2 + k

    def unpair(self, n: int) -> tuple[int, int]:
        if n < 0:
            raise ValueError("pairing is defined on naturals")
        if self.kind == "row-major":
            k, r = divmod(n, self.m)
            return r, k
        w = (math.isqrt(8 * n + 1) - 1) // 2
        k = n - w * (w + 1) // 2
        return w - k, k


ROW_MAJOR = "row-major"
CANTOR = PairingScheme("cantor")


def pair(scheme: PairingScheme, r: int, k: int) -> int:
    return scheme.pair(r, k)


def unpair(scheme: PairingScheme, n: int) -> tuple[int, int]:
    return scheme.unpair(n)
