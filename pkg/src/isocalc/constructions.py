"""Isometries with prescribed geometry.

Every construction works on coordinate subspaces: a subspace is the closed
span of ``{e_i : i in S}`` for an :class:`IndexSet` ``S``.  Bases of such
subspaces are always taken in increasing index order.

Shifts with a finite wandering set come out exact (the index map is
eventually ``i -> i + m``).  Infinite wandering sets need the Cantor
pairing, which is not piecewise affine, so those shifts are
:class:`PrefixOperator` instances evaluated pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotIsometryError
from .index_arith import CANTOR, IndexSet, PairingScheme
from .op_algebra import (
    ONE,
    AffinePiece,
    Coefficient,
    Law,
    Operator,
    PartialInjection,
    PrefixOperator,
    compose_injection,
    invert_injection,
)
from .op_algebra.injection import translation
from .op_algebra.operator import DEFAULT_BOUND


def enumeration_map(s: IndexSet) -> PartialInjection:
    """The increasing bijection ``{0, .., |S|-1} -> S`` (all of N when S is infinite)."""
    if s.is_finite:
        return PartialInjection.from_pieces(
            AffinePiece(IndexSet.finite([k]), translation(x - k)) for k, x in enumerate(s.elements())
        )
    L = s.modulus
    c = len(s.residues)
    top = s.exception_bound()
    base = s.count_below(top)
    pieces = [AffinePiece(IndexSet.finite([k]), translation(x - k))
              for k, x in enumerate(s.elements(below=top))]
    for j, r in enumerate(sorted(s.residues)):
        # k = base + q*c + j  ->  top + q*L + r
        slope = Fraction(L, c)
        law = Law(slope, top + r - slope * (base + j))
        dom = IndexSet.build(c, [(base + j) % c], (), range((base + j) % c, base + j, c))
        pieces.append(AffinePiece(dom, law))
    return PartialInjection.from_pieces(pieces)


def _shift_positions(m: int, M: IndexSet, C: IndexSet) -> PartialInjection:
    """Position index -> basis index for the row-major layout of width m."""
    pieces = list(enumeration_map(M).pieces)
    for p in enumeration_map(C).pieces:
        pieces.append(AffinePiece(p.domain.shifted(m), p.law.after(translation(-m))))
    return PartialInjection.from_pieces(pieces)


def build_basis_isometry(f: PartialInjection) -> Operator:
    """The unique isometry sending ``e_i`` to ``e_{f(i)}``."""
    if not f.is_total:
        missing = (~f.domain()).min()
        raise NotIsometryError(f"basis map must be defined on every index; {missing} is missing")
    return Operator.basis_map(f).with_provenance({"construction": "basis_isometry"})


def make_shift_with_wandering(M: IndexSet, bound: int = DEFAULT_BOUND):
    """A shift whose wandering space is spanned by ``{e_i : i in M}``.

    Rows of the layout are headed by M in increasing order; the complement
    fills positions ``(r, k)``, k >= 1, through row-major pairing (finite M,
    exact result) or Cantor pairing (infinite M, prefix-tier result).  The
    operator moves each position one step down its row.
    """
    C = ~M
    if C.is_finite:
        raise ValueError("the complement of the wandering set must be infinite")
    if M.is_empty:
        raise ValueError("a shift on an infinite-dimensional space has a nonzero wandering space")
    prov = {"construction": "shift_with_wandering", "wandering": M.to_json()}
    if M.is_finite:
        m = len(M.added)
        prov["pairing"] = {"kind": "row-major", "m": m}
        pos = _shift_positions(m, M, C)
        f = compose_injection(pos, compose_injection(PartialInjection.affine(1, m), invert_injection(pos)))
        return Operator.basis_map(f).with_provenance(prov)
    prov["pairing"] = {"kind": "cantor"}
    return _cantor_shift(M, C, CANTOR, prov, bound)


def _cantor_shift(M: IndexSet, C: IndexSet, scheme: PairingScheme, prov: dict, bound: int) -> PrefixOperator:
    def position(i):
        if i in M:
            return M.rank_of(i), 0
        r, k = scheme.unpair(C.rank_of(i))
        return r, k + 1

    def basis(r, k):
        return M.element_at(r) if k == 0 else C.element_at(scheme.pair(r, k - 1))

    def forward(i):
        if i < 0:
            return None
        r, k = position(i)
        return basis(r, k + 1)

    def backward(j):
        if j < 0 or j in M:
            return None
        r, k = position(j)
        return basis(r, k - 1)

    return PrefixOperator(forward, backward, provenance=prov, bound=bound)


def make_shift_with_range(K: IndexSet, bound: int = DEFAULT_BOUND):
    """A shift with range spanned by ``{e_i : i in K}``."""
    if K.is_finite:
        raise ValueError("the range of a shift is infinite dimensional")
    op = make_shift_with_wandering(~K, bound)
    op.provenance.update({"construction": "shift_with_range", "range": K.to_json()})
    return op


@dataclass(frozen=True)
class UnitarySpec:
    """Phase-twisted bijection of ``carrier``: ``e_i -> phase(i) e_{map(i)}``."""

    carrier: IndexSet
    map: PartialInjection
    phases: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.map.domain() != self.carrier or self.map.image() != self.carrier:
            raise ValueError("unitary map must be a bijection of its carrier onto itself")
        for i, c in self.phases.items():
            if i not in self.carrier:
                raise ValueError(f"phase index {i} lies outside the carrier")
            if Coefficient.of(c).abs2() != 1:
                raise ValueError(f"phase at {i} does not have modulus one")

    @classmethod
    def identity(cls, carrier: IndexSet) -> "UnitarySpec":
        return cls(carrier, PartialInjection.identity(carrier))

    def operator(self) -> Operator:
        pts = IndexSet.finite(self.phases)
        terms = [(ONE, self.map.restrict(~pts))]
        for i, c in self.phases.items():
            terms.append((Coefficient.of(c), self.map.restrict(IndexSet.finite([i]))))
        return Operator.from_terms(terms)

    def weight(self, i: int) -> Coefficient:
        return Coefficient.of(self.phases.get(i, ONE))

    def to_json(self) -> dict:
        return {
            "carrier": self.carrier.to_json(),
            "map": self.map.to_json(),
            "phases": {str(i): Coefficient.of(c).to_json() for i, c in sorted(self.phases.items())},
        }


def make_isometry_with_parts(U: UnitarySpec, K: IndexSet, bound: int = DEFAULT_BOUND):
    """An isometry with unitary part ``U`` (on ``U.carrier``) and range ``K``.

    The result is ``U ⊕ A_s`` where ``A_s`` is the shift on the complement
    of the carrier with range ``K \\ carrier``.
    """
    Ku = U.carrier
    if not Ku.issubset(K):
        raise ValueError("the unitary carrier must lie inside the range")
    if (K - Ku).is_finite:
        raise ValueError("the range minus the unitary carrier must be infinite")
    if (~K).is_empty:
        raise ValueError("the range must miss some index: a shift part needs a wandering vector")
    Cu = ~Ku
    psi = enumeration_map(Cu)
    psi_inv = invert_injection(psi)
    wandering = PartialInjection.from_pieces(
        AffinePiece(p.domain & ~K, p.law) for p in psi_inv.pieces).image()
    prov = {"construction": "isometry_with_parts", "unitary": U.to_json(), "range": K.to_json()}
    g = make_shift_with_wandering(wandering, bound)
    if isinstance(g, Operator):
        (_, gmap), = g.terms
        shift_part = compose_injection(psi, compose_injection(gmap, psi_inv))
        return (U.operator() + Operator.basis_map(shift_part)).with_provenance(prov)

    def forward(i):
        if i in Ku:
            return U.map(i)
        return psi(g.forward(psi_inv(i)))

    def backward(j):
        if j in Ku:
            return invert_injection(U.map)(j)
        n = g.backward(psi_inv(j))
        return None if n is None else psi(n)

    def weight(i):
        return U.weight(i) if i in Ku else ONE

    return PrefixOperator(forward, backward, weight, provenance=prov, bound=bound)


def make_cuntz(n: int) -> list[Operator]:
    """Isometries ``S_r: e_i -> e_{n i + r}``, r = 0..n-1."""
    if n < 2:
        raise ValueError("a Cuntz family needs n >= 2")
    return [Operator.basis_map(PartialInjection.affine(n, r)).with_provenance(
        {"construction": "cuntz", "n": n, "r": r}) for r in range(n)]


def unilateral_shift(power: int = 1) -> Operator:
    return Operator.basis_map(PartialInjection.affine(1, power))


def parity_swap() -> Operator:
    from .op_algebra import validate_injection, piece
    f = validate_injection([piece(IndexSet.progression(2, [0]), 1, 1),
                            piece(IndexSet.progression(2, [1]), 1, -1)])
    return Operator.basis_map(f)
