"""MI-space analysis: Gram matrices, spans, commutators, structural audits.

A finite family of operators spans an MI-space iff every ``A_k* A_j`` is a
scalar multiple of the identity.  The map ``(A, B) -> B*A`` is
sesquilinear, so checking generator pairs decides the whole span; the
scalars form the Gram matrix of the induced inner product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotIsometryError, NotMIError
from .index_arith import INFINITE
from .op_algebra import (
    ONE,
    ZERO,
    Coefficient,
    NotScalar,
    Operator,
    Scalar,
    classify,
    linear_combine,
    op_adjoint,
    op_mul,
    scalar_test,
)
from .op_algebra import linalg
from .op_algebra.operator import joint_cells

REDUCTION_NOTE = ("generator pairs suffice: (A, B) -> B*A is sesquilinear, so scalar values "
                  "on generator pairs extend to the whole span")


@dataclass(frozen=True)
class NotMI:
    """``B*A`` is not scalar; ``A e_witness`` is where it shows."""

    witness: int

    def __bool__(self):
        return False


def inner_product(a: Operator, b: Operator) -> Coefficient | NotMI:
    """``<A, B>`` with ``B*A = <A, B> I``, or :class:`NotMI`."""
    verdict = scalar_test(op_mul(op_adjoint(b), a))
    if isinstance(verdict, Scalar):
        return verdict.value
    return NotMI(verdict.witness)


def _require_inner(a: Operator, b: Operator) -> Coefficient:
    ip = inner_product(a, b)
    if isinstance(ip, NotMI):
        raise NotMIError(f"B*A is not a scalar multiple of I (column {ip.witness})", witness=ip.witness)
    return ip


@dataclass
class Finding:
    code: str
    ok: bool
    detail: str
    internal: bool = False

    def to_json(self) -> dict:
        return {"code": self.code, "ok": self.ok, "detail": self.detail, "internal": self.internal}


@dataclass
class GramReport:
    generators: list
    gram: list | None
    verdict: str
    violation: tuple | None = None
    witness: int | None = None
    dimension: int | None = None
    certificate: object = "exact"
    pairs_checked: list = field(default_factory=list)
    reduction: str = REDUCTION_NOTE

    @property
    def is_mi(self) -> bool:
        return self.verdict == "mi-space"

    def findings(self) -> list[Finding]:
        if self.is_mi:
            return [Finding("MI-OK", True, "all generator pairs give scalar B*A"),
                    Finding("DIM", True, f"dimension {self.dimension}")]
        j, k = self.violation
        return [Finding("MI-VIOLATION", False,
                        f"<A_{j}, A_{k}> is not scalar: column {self.witness} of A_{k}*A_{j}")]

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "certificate": "exact" if self.certificate == "exact" else {"prefix": self.certificate[1]},
            "reduction": self.reduction,
            "findings": [f.to_json() for f in self.findings()],
        }
        if self.is_mi:
            out["gram"] = [[c.to_json() for c in row] for row in self.gram]
            out["dimension"] = self.dimension
        else:
            out["violation"] = {"pair": list(self.violation), "witness": self.witness}
        return out


def check_mi_space(generators: list[Operator]) -> GramReport:
    """Decide whether ``span(generators)`` is an MI-space.

    ``gram[j][k] = <A_j, A_k>``.  All ordered pairs are computed; the
    reported violation is the first one in row order over ``k <= j``,
    falling back to the upper triangle.
    """
    gens = list(generators)
    n = len(gens)
    entries: dict[tuple[int, int], Coefficient | NotMI] = {}
    for j in range(n):
        for k in range(n):
            entries[j, k] = inner_product(gens[j], gens[k])
    pairs = sorted(entries, key=lambda jk: (jk[1] > jk[0], jk[0], jk[1]))
    for jk in pairs:
        if isinstance(entries[jk], NotMI):
            return GramReport(gens, None, "violation", jk, entries[jk].witness,
                              pairs_checked=pairs)
    gram = [[entries[j, k] for k in range(n)] for j in range(n)]
    return GramReport(gens, gram, "mi-space", dimension=linalg.rank(gram) if n else 0,
                      pairs_checked=pairs)


def gram_is_hermitian(gram) -> bool:
    n = len(gram)
    return all(gram[k][j] == gram[j][k].conjugate() for j in range(n) for k in range(n))


def gram_is_psd(gram) -> bool:
    """All principal minors real and nonnegative (exact)."""
    for _, d in linalg.principal_minors(gram):
        if d.im != 0 or d.re < 0:
            return False
    return True


def orthogonalize(report: GramReport) -> list[Operator]:
    """Unnormalized Gram-Schmidt over the generators; zero vectors dropped."""
    if not report.is_mi:
        raise NotMIError("orthogonalization needs an MI-space", witness=report.witness,
                         pair=report.violation)
    basis: list[Operator] = []
    norms: list[Coefficient] = []
    for a in report.generators:
        pairs = [(ONE, a)]
        for b, nb in zip(basis, norms):
            pairs.append((-(_require_inner(a, b) / nb), b))
        v = linear_combine(pairs)
        if not v.is_zero:
            basis.append(v)
            norms.append(_require_inner(v, v))
    return basis


def span_membership(t: Operator, generators: list[Operator]) -> list[Coefficient] | None:
    """Coefficients ``c`` with ``sum c_j A_j = T``, or None when T is outside the span."""
    gens = list(generators)
    if not gens:
        return [] if t.is_zero else None
    cells = joint_cells(gens + [t])
    rows = [list(vec[:-1]) for vec, _, _ in cells]
    rhs = [vec[-1] for vec, _, _ in cells]
    if not rows:
        return [ZERO] * len(gens)
    return linalg.solve(rows, rhs)


def commutator(a: Operator, b: Operator) -> Operator:
    """``[A, B] = AB - BA``."""
    return op_mul(a, b) - op_mul(b, a)


@dataclass(frozen=True)
class CommutatorIdentity:
    lhs: Operator
    rhs_scalar: Coefficient
    holds: bool
    commutator: Operator

    @property
    def code(self) -> str:
        return "CI-HOLDS" if self.holds else "CI-FAIL"


def _pair_gram(a: Operator, b: Operator):
    report = check_mi_space([a, b])
    if not report.is_mi:
        raise NotMIError(f"span(A, B) is not an MI-space (column {report.witness})",
                         witness=report.witness, pair=report.violation)
    (aa, ab), (ba, bb) = report.gram
    return aa, ab, ba, bb


def commutator_identity_check(a: Operator, b: Operator) -> CommutatorIdentity:
    """Compare ``[A,B]*[A,B]`` with ``2(<A,A><B,B> - |<A,B>|^2) I`` exactly."""
    aa, ab, _, bb = _pair_gram(a, b)
    c = commutator(a, b)
    lhs = op_mul(op_adjoint(c), c)
    rhs = 2 * (aa * bb - ab * ab.conjugate())
    verdict = scalar_test(lhs)
    holds = isinstance(verdict, Scalar) and verdict.value == rhs
    return CommutatorIdentity(lhs, rhs, holds, c)


@dataclass(frozen=True)
class CommutationReport:
    commute: bool
    dependent: bool

    @property
    def consistent(self) -> bool:
        return self.commute == self.dependent


def commutation_check(a: Operator, b: Operator) -> CommutationReport:
    aa, ab, _, bb = _pair_gram(a, b)
    return CommutationReport(commutator(a, b).is_zero, aa * bb == ab * ab.conjugate())


@dataclass(frozen=True)
class AdjointReport:
    adjoint_in_MI: bool
    forced_unitary: bool
    witness: int | None


def adjoint_membership_check(a: Operator) -> AdjointReport:
    """Is ``A*`` a scalar multiple of an isometry; if so, ``A`` must be unitary up to scale."""
    kind = classify(a)
    if kind.kind == "zero" or not kind.is_isometry_multiple:
        raise NotIsometryError(f"need a nonzero isometry multiple, got {kind.kind}")
    co = scalar_test(op_mul(a, op_adjoint(a)))
    if isinstance(co, Scalar) and co.value:
        return AdjointReport(True, kind.kind in ("unitary-multiple", "scalar"), None)
    witness = co.witness if isinstance(co, NotScalar) else 0
    return AdjointReport(False, False, witness)


@dataclass
class ProductReport:
    product_in_span: bool
    b_scalar: bool
    b_in_span: bool
    space_is_CI: bool
    power_membership: dict
    consistent: bool
    notes: list


def _is_CI(report: GramReport) -> bool:
    if report.dimension != 1:
        return False
    return span_membership(Operator.identity(), report.generators) is not None


def product_membership_check(generators: list[Operator], a: Operator, b: Operator,
                             max_power: int = 3) -> ProductReport:
    """Test multiplicative closure against what the algebra forces.

    With ``S = span(generators)`` an MI-space and ``A in S``: ``AB in S``
    forces ``B`` scalar (for ``A != 0``); if ``S != CI`` and ``B in S`` then
    ``AB in S`` only for ``B = 0``; and ``A^k in S`` (k > 1) only for ``A = 0``.
    """
    report = check_mi_space(generators)
    if not report.is_mi:
        raise NotMIError("generators do not span an MI-space", witness=report.witness,
                         pair=report.violation)
    gens = report.generators
    if span_membership(a, gens) is None:
        raise ValueError("A is not in the span of the generators")
    ab_in = span_membership(op_mul(a, b), gens) is not None
    b_scalar = isinstance(scalar_test(b), Scalar)
    b_in = span_membership(b, gens) is not None
    ci = _is_CI(report)
    notes = []
    ok = True
    if ab_in and not a.is_zero and not b_scalar:
        ok = False
        notes.append("AB in span but B is not scalar")
    if not ci and b_in and ab_in and not b.is_zero and not a.is_zero:
        ok = False
        notes.append("S != CI, B in S nonzero, yet AB in S")
    powers = {}
    for k in range(2, max_power + 1):
        pk = span_membership(a ** k, gens) is not None
        powers[k] = pk
        if pk and not ci and not a.is_zero:
            ok = False
            notes.append(f"A^{k} in S although S != CI and A != 0")
    return ProductReport(ab_in, b_scalar, b_in, ci, powers, ok, notes)


def structural_audit(report: GramReport) -> list[Finding]:
    """Self-test of the orthogonal basis against the finite-multiplicity and unitary no-go results.

    A failed finding here is an internal inconsistency, not a user error.
    """
    from .wold import multiplicity_certified

    if not report.is_mi:
        raise NotMIError("audit needs an MI-space", witness=report.witness, pair=report.violation)
    findings = [Finding("DIM", True, f"dimension {report.dimension}")]
    dim = report.dimension
    basis = orthogonalize(report)
    for idx, v in enumerate(basis):
        kind = classify(v)
        if not kind.is_isometry_multiple:
            findings.append(Finding("AUDIT-P24", False, f"basis vector {idx} is not an isometry multiple",
                                    internal=True))
            continue
        mult, cert = multiplicity_certified(v)
        if mult != INFINITE:
            ok = dim == 1
            findings.append(Finding("AUDIT-P24", ok,
                                    f"basis vector {idx} has finite multiplicity {mult} ({_cert(cert)}); "
                                    f"dimension must be 1, is {dim}", internal=not ok))
        else:
            findings.append(Finding("AUDIT-P24", True,
                                    f"basis vector {idx} has infinite multiplicity ({_cert(cert)})"))
        if kind.kind in ("unitary-multiple", "scalar"):
            ok = dim == 1
            findings.append(Finding("AUDIT-C25A", ok,
                                    f"basis vector {idx} is a unitary multiple; dimension {dim}",
                                    internal=not ok))
    if span_membership(Operator.identity(), report.generators) is not None:
        ok = dim == 1
        findings.append(Finding("AUDIT-C25B", ok, f"I lies in the span; dimension {dim}",
                                internal=not ok))
    else:
        findings.append(Finding("AUDIT-C25B", True, "I is not in the span"))
    return findings


def _cert(cert) -> str:
    return "exact" if cert == "exact" else f"prefix {cert[1]}"
