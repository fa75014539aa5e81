"""Partial affine injections of N.

A piece sends ``i -> slope*i + intercept`` on an :class:`IndexSet` domain.
Slopes and intercepts are rational so that inverses stay in the class
(the inverse of ``i -> 2i`` is ``j -> j/2`` on the evens); validity
requires integral, nonnegative values on the domain.

The canonical form is computed by :func:`normalize_atoms`, which is also
what :mod:`isocalc.op_algebra.operator` uses for operator normal forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from ..errors import InjectivityError
from ..index_arith import IndexSet


def _frac_str(q: Fraction):
    return q.numerator if q.denominator == 1 else str(q)


@dataclass(frozen=True, order=True)
class Law:
    """The affine map ``x -> slope*x + intercept`` (slope > 0)."""

    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "intercept", Fraction(self.intercept))
        if self.slope <= 0:
            raise ValueError("affine pieces need a positive slope")

    def __call__(self, x: int) -> Fraction:
        return self.slope * x + self.intercept

    def value(self, x: int) -> int | None:
        """Integer image of ``x``, or None when it is not a natural."""
        y = self(x)
        if y.denominator != 1 or y < 0:
            return None
        return int(y)

    def inverse(self) -> "Law":
        return Law(1 / self.slope, -self.intercept / self.slope)

    def after(self, inner: "Law") -> "Law":
        """``self ∘ inner``."""
        return Law(self.slope * inner.slope, self.slope * inner.intercept + self.intercept)

    def meet(self, other: "Law") -> int | None:
        """The natural x with ``self(x) == other(x)`` if there is exactly one."""
        if self.slope == other.slope:
            return None
        x = (other.intercept - self.intercept) / (self.slope - other.slope)
        if x.denominator != 1 or x < 0:
            return None
        return int(x)

    @property
    def is_identity(self) -> bool:
        return self.slope == 1 and self.intercept == 0

    def key(self) -> tuple:
        return (self.slope, self.intercept)

    def __repr__(self):
        s = "" if self.slope == 1 else f"{self.slope}*"
        b = ""
        if self.intercept > 0:
            b = f"+{self.intercept}"
        elif self.intercept < 0:
            b = f"{self.intercept}"
        return f"i->{s}i{b}"


IDENTITY_LAW = Law(Fraction(1), Fraction(0))


def translation(offset: int) -> Law:
    return Law(Fraction(1), Fraction(offset))


# -- images and preimages of index sets --------------------------------------


def _class_step(domain: IndexSet, law: Law) -> int:
    step = law.slope * domain.modulus
    if step.denominator != 1:
        raise ValueError(f"{law!r} is not integral on {domain!r}")
    return int(step)


@lru_cache(maxsize=65536)
def affine_image(domain: IndexSet, law: Law) -> IndexSet:
    """``{law(x) : x in domain}``; the law must be integral on the domain."""
    added = []
    for x in domain.added:
        y = law.value(x)
        if y is None:
            raise ValueError(f"{law!r} is not natural-valued at {x}")
        added.append(y)
    if domain.is_finite:
        return IndexSet.finite(added)
    step = _class_step(domain, law)
    residues, removed = [], []
    for r in domain.residues:
        y0 = law(r)
        if y0.denominator != 1:
            raise ValueError(f"{law!r} is not integral on {domain!r}")
        y0 = int(y0)
        res = y0 % step
        residues.append(res)
        if y0 > res:
            removed.extend(range(res, y0, step))
    for x in domain.removed:
        y = law(x)
        if y >= 0:
            removed.append(int(y))
    return IndexSet.build(step, residues, added, removed)


@lru_cache(maxsize=65536)
def affine_preimage(domain: IndexSet, law: Law, target: IndexSet) -> IndexSet:
    """``{x in domain : law(x) in target}``; the law must be valid on the domain."""
    added = [x for x in domain.added if (y := law.value(x)) is not None and y in target]
    if domain.is_finite:
        return IndexSet.finite(added)
    L = domain.modulus
    step = _class_step(domain, law)
    LT = target.modulus
    period = LT // math.gcd(step, LT)
    residues = []
    for r in domain.residues:
        y0 = law(r)
        for t in range(period):
            if (y0 + step * t) % LT in target.residues:
                residues.append(r + L * t)
    removed = set(domain.removed)
    inv = law.inverse()
    for y in target.removed:
        x = inv.value(y)
        if x is not None and domain.in_progression(x):
            removed.add(x)
    for y in target.added:
        x = inv.value(y)
        if x is not None and domain.in_progression(x) and x not in domain.removed:
            added.append(x)
    return IndexSet.build(L * period, residues, added, removed)


def law_is_valid_on(domain: IndexSet, law: Law) -> int | None:
    """None if the law maps the domain into N; otherwise an offending domain point."""
    for x in sorted(domain.added):
        if law.value(x) is None:
            return x
    if not domain.is_finite:
        step = law.slope * domain.modulus
        start = domain.exception_bound()
        for r in sorted(domain.residues):
            # two consecutive unexceptional class members settle integrality
            x = start + r
            for y in (x, x + domain.modulus):
                if law(y).denominator != 1:
                    return y
            if step.denominator == 1 and law(r).denominator != 1:
                return next(y for y in range(r, start + r + 1, domain.modulus) if y in domain)
    low = domain.min()
    if low is not None and law(low) < 0:
        return low
    return None


# -- pieces ------------------------------------------------------------------


@dataclass(frozen=True)
class AffinePiece:
    domain: IndexSet
    law: Law

    @property
    def a(self) -> Fraction:
        return self.law.slope

    @property
    def b(self) -> Fraction:
        return self.law.intercept

    def image(self) -> IndexSet:
        return affine_image(self.domain, self.law)

    def __call__(self, i: int) -> int | None:
        if i not in self.domain:
            return None
        return int(self.law(i))

    def key(self) -> tuple:
        return (self.domain.key(), self.law.key())

    def to_json(self) -> dict:
        return {"domain": self.domain.to_json(), "a": _frac_str(self.law.slope),
                "b": _frac_str(self.law.intercept)}

    def __repr__(self):
        return f"{self.law!r} on {self.domain!r}"


def piece(domain: IndexSet, a, b) -> AffinePiece:
    return AffinePiece(domain, Law(Fraction(a), Fraction(b)))


# -- canonical forms ---------------------------------------------------------

Atom = tuple  # (coefficient, Law, IndexSet)


def normalize_atoms(atoms: Iterable[Atom], coef_key: Callable[[Hashable], tuple]) -> list[Atom]:
    """Canonical atom list for a formal sum of weighted affine graphs.

    Coefficients only need ``+``, truthiness (zero test), hashing and a sort
    key.  Two atom lists describe the same edge->coefficient function iff
    their normalized forms are equal:

    * laws with infinitely many edges ("major" laws) are intrinsic;
    * an edge lying on several major laws goes to the smallest one;
    * the finitely many remaining edges go to translation laws.
    """
    by_law: dict[Law, list[tuple]] = {}
    for c, law, dom in atoms:
        if dom.is_empty or not c:
            continue
        by_law.setdefault(law, []).append((c, dom))

    cells: dict[Law, list[tuple]] = {law: _refine(items) for law, items in by_law.items()}
    cells = {law: cs for law, cs in cells.items() if cs}
    support = {law: _union(d for _, d in cs) for law, cs in cells.items()}
    majors = sorted(law for law, sup in support.items() if not sup.is_finite)

    special: set[tuple[int, int]] = set()
    for law, sup in support.items():
        if sup.is_finite:
            special.update((x, int(law(x))) for x in sup.elements())
    for l1, l2 in combinations(majors, 2):
        x = l1.meet(l2)
        if x is None:
            continue
        if x in support[l1]:
            special.add((x, int(l1(x))))
        elif x in support[l2]:
            special.add((x, int(l2(x))))

    if special:
        totals: dict[tuple[int, int], object] = {}
        drop: dict[Law, set[int]] = {}
        for (i, j) in special:
            for law, cs in cells.items():
                if i in support[law] and law(i) == j:
                    c = next(c for c, d in cs if i in d)
                    totals[(i, j)] = c if (i, j) not in totals else totals[(i, j)] + c
                    drop.setdefault(law, set()).add(i)
        for law, pts in drop.items():
            gone = IndexSet.finite(pts)
            cells[law] = [(c, d - gone) for c, d in cells[law]]
            cells[law] = [(c, d) for c, d in cells[law] if not d.is_empty]
        for (i, j), c in sorted(totals.items()):
            if not c:
                continue
            target = next((law for law in majors if law(i) == j), None) or translation(j - i)
            cs = cells.setdefault(target, [])
            for idx, (c0, d0) in enumerate(cs):
                if c0 == c:
                    cs[idx] = (c0, d0 | IndexSet.finite([i]))
                    break
            else:
                cs.append((c, IndexSet.finite([i])))

    out = []
    for law in sorted(cells):
        for c, d in sorted(cells[law], key=lambda cd: (coef_key(cd[0]), cd[1].key())):
            if not d.is_empty:
                out.append((c, law, d))
    return out


def _union(sets: Iterable[IndexSet]) -> IndexSet:
    acc = IndexSet.empty()
    for s in sets:
        acc = acc | s
    return acc


def _refine(items: Sequence[tuple]) -> list[tuple]:
    """Split overlapping (coef, domain) pairs into disjoint cells, summing coefficients."""
    cells: list[tuple] = []
    for c, dom in items:
        new = []
        rest = dom
        for c0, d0 in cells:
            both = d0 & dom
            if both.is_empty:
                new.append((c0, d0))
                continue
            new.append((c0 + c, both))
            only = d0 - dom
            if not only.is_empty:
                new.append((c0, only))
            rest = rest - d0
        if not rest.is_empty:
            new.append((c, rest))
        cells = new
    merged: dict = {}
    for c, d in cells:
        if not c:
            continue
        merged[c] = merged[c] | d if c in merged else d
    return list(merged.items())


# -- partial injections ------------------------------------------------------


class _Unit:
    """Coefficient placeholder for bare maps (overlaps never occur after validation)."""

    def __add__(self, other):
        return self

    def __bool__(self):
        return True

    def __hash__(self):
        return 1

    def __eq__(self, other):
        return isinstance(other, _Unit)


_UNIT = _Unit()


@dataclass(frozen=True)
class PartialInjection:
    """Injective partial map N -> N, held in canonical form.

    Build instances with :func:`validate_injection` (checked) or
    :meth:`from_pieces` (trusted input, canonicalized only).
    """

    pieces: tuple[AffinePiece, ...]

    @classmethod
    def from_pieces(cls, pieces: Iterable[AffinePiece]) -> "PartialInjection":
        atoms = [(_UNIT, p.law, p.domain) for p in pieces]
        norm = normalize_atoms(atoms, coef_key=lambda c: ())
        out = sorted((AffinePiece(d, law) for _, law, d in norm), key=AffinePiece.key)
        return cls(tuple(out))

    @classmethod
    def empty(cls) -> "PartialInjection":
        return cls(())

    @classmethod
    def affine(cls, a, b, domain: IndexSet | None = None) -> "PartialInjection":
        return validate_injection([piece(domain or IndexSet.naturals(), a, b)])

    @classmethod
    def identity(cls, domain: IndexSet | None = None) -> "PartialInjection":
        return cls.from_pieces([AffinePiece(domain or IndexSet.naturals(), IDENTITY_LAW)])

    @classmethod
    def from_pairs(cls, mapping: dict[int, int]) -> "PartialInjection":
        return validate_injection(
            [AffinePiece(IndexSet.finite([i]), translation(j - i)) for i, j in mapping.items()]
        )

    def __call__(self, i: int) -> int | None:
        for p in self.pieces:
            if i in p.domain:
                return int(p.law(i))
        return None

    def domain(self) -> IndexSet:
        return _union(p.domain for p in self.pieces)

    def image(self) -> IndexSet:
        return _union(p.image() for p in self.pieces)

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def is_total(self) -> bool:
        return self.domain() == IndexSet.naturals()

    @property
    def is_identity_on_domain(self) -> bool:
        return all(p.law.is_identity for p in self.pieces)

    def inverse(self) -> "PartialInjection":
        return invert_injection(self)

    def compose(self, inner: "PartialInjection") -> "PartialInjection":
        """``self ∘ inner``."""
        return compose_injection(self, inner)

    def restrict(self, subset: IndexSet) -> "PartialInjection":
        return PartialInjection.from_pieces(AffinePiece(p.domain & subset, p.law) for p in self.pieces)

    def key(self) -> tuple:
        return tuple(p.key() for p in self.pieces)

    def to_json(self) -> dict:
        return {"pieces": [p.to_json() for p in self.pieces]}

    def __repr__(self):
        if not self.pieces:
            return "PartialInjection(empty)"
        return "PartialInjection(" + "; ".join(map(repr, self.pieces)) + ")"


def compose_injection(p: PartialInjection, q: PartialInjection) -> PartialInjection:
    """``p ∘ q`` with domain ``{i in dom q : q(i) in dom p}``."""
    return _compose_cached(p, q)


@lru_cache(maxsize=65536)
def _compose_cached(p: PartialInjection, q: PartialInjection) -> PartialInjection:
    out = []
    for qp in q.pieces:
        for pp in p.pieces:
            dom = affine_preimage(qp.domain, qp.law, pp.domain)
            if not dom.is_empty:
                out.append(AffinePiece(dom, pp.law.after(qp.law)))
    return PartialInjection.from_pieces(out)


@lru_cache(maxsize=65536)
def invert_injection(p: PartialInjection) -> PartialInjection:
    return PartialInjection.from_pieces(AffinePiece(pc.image(), pc.law.inverse()) for pc in p.pieces)


def validate_injection(pieces: Iterable[AffinePiece]) -> PartialInjection:
    """Check a piece list and return its canonical injection.

    Raises :class:`InjectivityError` naming the two clashing pieces and the
    smallest witness index when domains or images overlap, and
    ``ValueError`` when a piece leaves N.
    """
    pieces = list(pieces)
    for k, p in enumerate(pieces):
        bad = law_is_valid_on(p.domain, p.law)
        if bad is not None:
            raise InjectivityError(
                f"piece {k} ({p.law!r}) does not map index {bad} to a natural",
                pieces=(k, k), witness=bad, kind="range")
    images = [p.image() for p in pieces]
    for j, k in combinations(range(len(pieces)), 2):
        both = pieces[j].domain & pieces[k].domain
        if not both.is_empty:
            w = both.min()
            raise InjectivityError(f"pieces {j} and {k} share domain index {w}",
                                   pieces=(j, k), witness=w, kind="domain")
        both = images[j] & images[k]
        if not both.is_empty:
            w = both.min()
            raise InjectivityError(f"pieces {j} and {k} both hit output index {w}",
                                   pieces=(j, k), witness=w, kind="image")
    return PartialInjection.from_pieces(pieces)
