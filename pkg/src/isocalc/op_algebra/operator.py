"""Operators as finite sums of weighted partial affine injections.

An exact :class:`Operator` is ``sum_t c_t P_{f_t}`` where ``P_f e_i = e_{f(i)}``
on the domain of ``f`` and zero elsewhere.  Normal form: the graphs of the
terms are pairwise disjoint, no coefficient is zero, and the presentation
is canonical, so two operators are equal iff their ``terms`` are equal.

A :class:`PrefixOperator` is a single weighted basis map given by Python
callables.  It supports pointwise evaluation only; anything derived from it
is certified up to a finite index bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, ClassVar, Iterable, Sequence, Union

from ..errors import TierError
from ..index_arith import IndexSet
from .coefficient import ONE, ZERO, Coefficient
from .injection import (
    AffinePiece,
    PartialInjection,
    invert_injection,
    compose_injection,
    normalize_atoms,
)

DEFAULT_BOUND = 4096

Term = tuple  # (Coefficient, PartialInjection)


def _normal_form(atoms: Iterable[tuple]) -> tuple[Term, ...]:
    norm = normalize_atoms(atoms, coef_key=Coefficient.sort_key)
    by_coef: dict[Coefficient, list[AffinePiece]] = {}
    for c, law, dom in norm:
        by_coef.setdefault(c, []).append(AffinePiece(dom, law))
    terms = []
    for c in sorted(by_coef, key=Coefficient.sort_key):
        # greedy packing of same-coefficient pieces into injections
        buckets: list[list] = []
        for pc in by_coef[c]:
            img = pc.image()
            for b in buckets:
                if b[1].isdisjoint(pc.domain) and b[2].isdisjoint(img):
                    b[0].append(pc)
                    b[1] = b[1] | pc.domain
                    b[2] = b[2] | img
                    break
            else:
                buckets.append([[pc], pc.domain, img])
        for pieces, _, _ in buckets:
            terms.append((c, PartialInjection.from_pieces(pieces)))
    terms.sort(key=lambda t: (t[1].key(), t[0].sort_key()))
    return tuple(terms)


@dataclass(frozen=True)
class Operator:
    """Exact-tier operator in normal form; build with :meth:`from_terms`."""

    terms: tuple[Term, ...] = ()
    provenance: dict | None = field(default=None, compare=False, hash=False, repr=False)

    tier: ClassVar[str] = "exact"

    @classmethod
    def from_terms(cls, terms: Iterable[tuple], provenance: dict | None = None) -> "Operator":
        atoms = []
        for c, f in terms:
            c = Coefficient.of(c)
            for p in f.pieces:
                atoms.append((c, p.law, p.domain))
        return cls(_normal_form(atoms), provenance)

    @classmethod
    def zero(cls) -> "Operator":
        return cls(())

    @classmethod
    def identity(cls, scale=1) -> "Operator":
        return cls.from_terms([(scale, PartialInjection.identity())])

    @classmethod
    def basis_map(cls, f: PartialInjection, scale=1) -> "Operator":
        return cls.from_terms([(scale, f)])

    def with_provenance(self, provenance: dict) -> "Operator":
        return Operator(self.terms, provenance)

    # -- structure --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def atoms(self):
        for c, f in self.terms:
            for p in f.pieces:
                yield c, p.law, p.domain

    def key(self) -> tuple:
        return tuple((f.key(), c.sort_key()) for c, f in self.terms)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, PrefixOperator):
            raise TierError("cannot add a prefix-tier operator")
        if not isinstance(other, Operator):
            return NotImplemented
        return linear_combine([(ONE, self), (ONE, other)])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return linear_combine([(ONE, self), (-ONE, other)])

    def scale(self, c) -> "Operator":
        return Operator.from_terms((Coefficient.of(c) * t, f) for t, f in self.terms)

    def __mul__(self, other):
        if isinstance(other, (Operator, PrefixOperator)):
            return op_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int) -> "Operator":
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = Operator.identity()
        for _ in range(k):
            out = op_mul(out, self)
        return out

    def adjoint(self) -> "Operator":
        return op_adjoint(self)

    @property
    def H(self) -> "Operator":
        return op_adjoint(self)

    # -- evaluation -------------------------------------------------------

    def apply(self, i: int) -> list[tuple[int, Coefficient]]:
        out = []
        for c, f in self.terms:
            j = f(i)
            if j is not None:
                out.append((j, c))
        out.sort(key=lambda jc: jc[0])
        return out

    def apply_adjoint(self, j: int) -> list[tuple[int, Coefficient]]:
        out = []
        for c, f in self.terms:
            i = invert_injection(f)(j)
            if i is not None:
                out.append((i, c.conjugate()))
        out.sort(key=lambda ic: ic[0])
        return out

    def __repr__(self):
        if not self.terms:
            return "Operator(0)"
        return "Operator(" + " + ".join(f"{c}·[{f!r}]" for c, f in self.terms) + ")"


class PrefixOperator:
    """Weighted basis map ``e_i -> w(i) e_{f(i)}`` given pointwise.

    ``forward`` and ``backward`` return None off the domain / range.
    """

    tier = "prefix"

    def __init__(self, forward: Callable[[int], int | None], backward: Callable[[int], int | None],
                 weight: Callable[[int], Coefficient] | None = None, provenance: dict | None = None,
                 bound: int = DEFAULT_BOUND):
        self.forward = forward
        self.backward = backward
        self.weight = weight or (lambda i: ONE)
        self.provenance = provenance or {}
        self.bound = bound

    def apply(self, i: int) -> list[tuple[int, Coefficient]]:
        j = self.forward(i)
        return [] if j is None else [(j, self.weight(i))]

    def apply_adjoint(self, j: int) -> list[tuple[int, Coefficient]]:
        i = self.backward(j)
        return [] if i is None else [(i, self.weight(i).conjugate())]

    def adjoint(self):
        raise TierError("prefix-tier operators support adjoint-apply only")

    def __repr__(self):
        return f"PrefixOperator({self.provenance.get('construction', '?')}, bound={self.bound})"


AnyOperator = Union[Operator, PrefixOperator]


def _require_exact(*ops):
    for op in ops:
        if not isinstance(op, Operator):
            raise TierError(f"symbolic operation needs exact-tier operands, got {op!r}")


def linear_combine(pairs: Iterable[tuple]) -> Operator:
    """Normal form of ``sum c_k A_k``."""
    terms = []
    for c, op in pairs:
        _require_exact(op)
        c = Coefficient.of(c)
        terms.extend((c * t, f) for t, f in op.terms)
    return Operator.from_terms(terms)


def op_mul(a: Operator, b: Operator) -> Operator:
    """Operator product ``AB``."""
    _require_exact(a, b)
    terms = []
    for ca, fa in a.terms:
        for cb, fb in b.terms:
            g = compose_injection(fa, fb)
            if not g.is_empty:
                terms.append((ca * cb, g))
    return Operator.from_terms(terms)


def op_adjoint(a: Operator) -> Operator:
    _require_exact(a)
    return Operator.from_terms((c.conjugate(), invert_injection(f)) for c, f in a.terms)


def apply(a: AnyOperator, i: int) -> list[tuple[int, Coefficient]]:
    """Coordinates of ``A e_i``."""
    return a.apply(i)


def apply_adjoint(a: AnyOperator, j: int) -> list[tuple[int, Coefficient]]:
    return a.apply_adjoint(j)


# -- scalar decisions --------------------------------------------------------


@dataclass(frozen=True)
class Scalar:
    """``A = value * I``; ``certificate`` is ``"exact"`` or ``("prefix", N)``."""

    value: Coefficient
    certificate: object = "exact"

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotScalar:
    """``A`` is not a scalar multiple of I; column ``witness`` shows it."""

    witness: int
    certificate: object = "exact"

    def __bool__(self):
        return False


ScalarVerdict = Union[Scalar, NotScalar]


def _identity_term_coefficient(a: Operator) -> Coefficient:
    """Best guess for lambda: the dominant coefficient on the diagonal law."""
    dens: dict[Coefficient, IndexSet] = {}
    for c, law, dom in a.atoms():
        if law.is_identity and not dom.is_finite:
            dens[c] = dens[c] | dom if c in dens else dom
    if not dens:
        return ZERO
    return max(dens, key=lambda c: (dens[c].density(), tuple(-x for x in c.sort_key())))


def scalar_test(a: AnyOperator, bound: int | None = None) -> ScalarVerdict:
    """Decide whether ``A = lambda I``.

    Exact operators are decided from the normal form.  Prefix operators are
    checked column by column below ``bound`` and the verdict says so.
    """
    if isinstance(a, PrefixOperator):
        return _scalar_test_prefix(a, bound or a.bound)
    if a.is_zero:
        return Scalar(ZERO)
    if len(a.terms) == 1:
        c, f = a.terms[0]
        if len(f.pieces) == 1 and f.pieces[0].law.is_identity and f.pieces[0].domain == IndexSet.naturals():
            return Scalar(c)
    lam = _identity_term_coefficient(a)
    if lam:
        good = IndexSet.empty()
        others = IndexSet.empty()
        for c, law, dom in a.atoms():
            if c == lam and law.is_identity:
                good = good | dom
            else:
                others = others | dom
        bad = ~good | others
    else:
        bad = IndexSet.empty()
        for _, _, dom in a.atoms():
            bad = bad | dom
    # the structural set contains every discrepancy; scan it for the first real one
    i = bad.min()
    while i is not None:
        col = a.apply(i)
        if col and col != [(i, lam)] or not col and lam:
            return NotScalar(i)
        i = _next_in(bad, i)
    raise AssertionError("normal form is not scalar but no witness column exists")  # pragma: no cover


def _next_in(s: IndexSet, i: int) -> int | None:
    rest = s - IndexSet.below(i + 1)
    return rest.min()


def _scalar_test_prefix(a: PrefixOperator, bound: int) -> ScalarVerdict:
    col0 = a.apply(0)
    lam = col0[0][1] if col0 and col0[0][0] == 0 else ZERO
    for i in range(bound):
        col = a.apply(i)
        ok = (not col and not lam) or col == [(i, lam)]
        if not ok:
            return NotScalar(i, ("prefix", bound))
    return Scalar(lam, ("prefix", bound))


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    """``kind`` is one of zero, scalar, unitary-multiple, isometry-multiple, other.

    ``norm_sq`` is ``|lambda|^2`` with ``A*A = |lambda|^2 I`` when it exists.
    """

    kind: str
    norm_sq: object = None
    scalar: Coefficient | None = None
    witness: int | None = None
    certificate: object = "exact"

    @property
    def is_isometry_multiple(self) -> bool:
        return self.kind in ("scalar", "unitary-multiple", "isometry-multiple")


def classify(a: AnyOperator, bound: int | None = None) -> Classification:
    if isinstance(a, PrefixOperator):
        return _classify_prefix(a, bound or a.bound)
    if a.is_zero:
        return Classification("zero", norm_sq=ZERO.re)
    gram = scalar_test(op_mul(op_adjoint(a), a))
    if not isinstance(gram, Scalar):
        return Classification("other", witness=gram.witness)
    norm_sq = gram.value.re
    s = scalar_test(a)
    if isinstance(s, Scalar):
        return Classification("scalar", norm_sq=norm_sq, scalar=s.value)
    co = scalar_test(op_mul(a, op_adjoint(a)))
    if isinstance(co, Scalar) and co.value:
        return Classification("unitary-multiple", norm_sq=norm_sq)
    return Classification("isometry-multiple", norm_sq=norm_sq, witness=co.witness)


def _classify_prefix(a: PrefixOperator, bound: int) -> Classification:
    cert = ("prefix", bound)
    weights = set()
    for i in range(bound):
        col = a.apply(i)
        if not col:
            return Classification("other", witness=i, certificate=cert)
        weights.add(col[0][1].abs2())
    if len(weights) != 1:
        return Classification("other", certificate=cert)
    norm_sq = weights.pop()
    onto = all(a.backward(j) is not None for j in range(bound))
    return Classification("unitary-multiple" if onto else "isometry-multiple", norm_sq=norm_sq,
                          certificate=cert)


# -- coefficient vectors (used for span computations) -------------------------


class CoefVector(tuple):
    """Tuple of coefficients with componentwise addition."""

    def __add__(self, other):
        return CoefVector(a + b for a, b in zip(self, other))

    def __bool__(self):
        return any(self)

    def sort_key(self):
        return tuple(c.sort_key() for c in self)


def joint_cells(ops: Sequence[Operator]) -> list[tuple[CoefVector, object, IndexSet]]:
    """Common refinement of several operators' edge sets.

    Each returned cell carries the vector of the operators' coefficients on
    it; edges outside all cells are zero for every operator.
    """
    n = len(ops)
    atoms = []
    for k, op in enumerate(ops):
        _require_exact(op)
        for c, law, dom in op.atoms():
            vec = [ZERO] * n
            vec[k] = c
            atoms.append((CoefVector(vec), law, dom))
    return normalize_atoms(atoms, coef_key=CoefVector.sort_key)
