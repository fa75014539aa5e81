import pytest
from hypothesis import given
from hypothesis import strategies as st

from isocalc.constructions import make_cuntz, parity_swap, unilateral_shift
from isocalc.errors import NotIsometryError, NotMIError
from isocalc.index_arith import IndexSet
from isocalc.mi_space import (
    NotMI,
    adjoint_membership_check,
    check_mi_space,
    commutation_check,
    commutator,
    commutator_identity_check,
    gram_is_hermitian,
    gram_is_psd,
    inner_product,
    orthogonalize,
    product_membership_check,
    span_membership,
    structural_audit,
)
from isocalc.op_algebra import (
    ONE,
    ZERO,
    Coefficient,
    Operator,
    PartialInjection,
    Scalar,
    linear_combine,
    op_adjoint,
    op_mul,
    scalar_test,
)
from strategies import coefficients, commutator_corpus

S0, S1 = make_cuntz(2)
s = unilateral_shift()
I = Operator.identity()


def C(x):
    return Coefficient(x)


def gram_of(*ops):
    return [[C(x) for x in row] for row in ops]


class TestInnerProduct:
    def test_examples(self):
        assert inner_product(S0, S1) == ZERO
        assert inner_product(2 * S0 + S1, S0) == C(2)
        assert inner_product(2 * S0 + S1, 2 * S0 + S1) == C(5)

    def test_not_mi(self):
        assert inner_product(s * s, s) == NotMI(0)

    def test_conjugate_linear_in_second_slot(self):
        i = Coefficient(0, 1)
        assert inner_product(S0, i * S0) == Coefficient(0, -1)
        assert inner_product(i * S0, S0) == i


class TestCheckMISpace:
    def test_cuntz_pair(self):
        r = check_mi_space([S0, S1])
        assert r.is_mi and r.gram == gram_of([1, 0], [0, 1]) and r.dimension == 2

    def test_shift_and_square(self):
        r = check_mi_space([s, s * s])
        assert not r.is_mi
        assert r.violation == (1, 0) and r.witness == 0
        assert r.findings()[0].code == "MI-VIOLATION"

    def test_dependent_generators(self):
        r = check_mi_space([S0, S1, S0 + S1])
        assert r.gram == gram_of([1, 0, 1], [0, 1, 1], [1, 1, 2])
        assert r.dimension == 2

    def test_reduction_recorded(self):
        r = check_mi_space([S0])
        assert "sesquilinear" in r.reduction
        assert r.to_json()["findings"][0]["code"] == "MI-OK"

    def test_empty_family(self):
        assert check_mi_space([]).dimension == 0


class TestOrthogonalize:
    def test_examples(self):
        assert orthogonalize(check_mi_space([S0, S0 + S1])) == [S0, S1]
        assert orthogonalize(check_mi_space([S0])) == [S0]
        assert orthogonalize(check_mi_space([S0, 2 * S0])) == [S0]

    def test_requires_mi(self):
        with pytest.raises(NotMIError):
            orthogonalize(check_mi_space([s, s * s]))


class TestSpanMembership:
    def test_examples(self):
        assert span_membership(3 * S0, [S0, S1]) == [C(3), ZERO]
        assert span_membership(op_mul(S0, S1), [S0, S1]) is None
        assert span_membership(Operator.zero(), [S0, S1]) == [ZERO, ZERO]

    def test_identity_not_in_cuntz_span(self):
        assert span_membership(I, [S0, S1]) is None

    def test_split_domains(self):
        # S0 restricted to evens plus S0 restricted to odds is S0
        evens = IndexSet.progression(2, [0])
        a = Operator.basis_map(PartialInjection.affine(2, 0, evens))
        b = Operator.basis_map(PartialInjection.affine(2, 0, ~evens))
        assert span_membership(S0, [a, b]) == [ONE, ONE]
        assert span_membership(a, [S0]) is None


class TestCommutator:
    def test_examples(self):
        c = commutator(S0, S1)
        expected = linear_combine([(1, Operator.basis_map(PartialInjection.affine(4, 2))),
                                   (-1, Operator.basis_map(PartialInjection.affine(4, 1)))])
        assert c == expected
        assert commutator(S0, S0).is_zero
        assert commutator(s, s * s).is_zero

    def test_identity_examples(self):
        ci = commutator_identity_check(S0, S1)
        assert ci.holds and ci.lhs == 2 * I and ci.rhs_scalar == C(2) and ci.code == "CI-HOLDS"
        ci = commutator_identity_check(2 * S0 + S1, S0)
        assert ci.holds and ci.rhs_scalar == C(2)
        ci = commutator_identity_check(S0, S0)
        assert ci.holds and ci.lhs.is_zero and ci.rhs_scalar == ZERO

    def test_identity_rejects_non_mi_pair(self):
        with pytest.raises(NotMIError) as exc:
            commutator_identity_check(s, s * s)
        assert exc.value.witness == 0

    def test_commutation_examples(self):
        r = commutation_check(S0, 3 * S0)
        assert r.commute and r.dependent and r.consistent
        r = commutation_check(S0, S1)
        assert not r.commute and not r.dependent
        r = commutation_check(2 * S0 + S1, S0)
        assert not r.commute and not r.dependent


class TestAdjointMembership:
    def test_examples(self):
        r = adjoint_membership_check(s)
        assert not r.adjoint_in_MI and r.witness == 0
        r = adjoint_membership_check(parity_swap())
        assert r.adjoint_in_MI and r.forced_unitary
        r = adjoint_membership_check(S0)
        assert not r.adjoint_in_MI and r.witness == 1

    def test_rejections(self):
        with pytest.raises(NotIsometryError):
            adjoint_membership_check(Operator.zero())
        with pytest.raises(NotIsometryError):
            adjoint_membership_check(s + s * s)


class TestProductMembership:
    def test_scalar_b(self):
        r = product_membership_check([S0, S1], S0, 3 * I)
        assert r.product_in_span and r.b_scalar and r.consistent

    def test_b_in_span(self):
        r = product_membership_check([S0, S1], S0, S1)
        assert not r.product_in_span and r.b_in_span and r.consistent

    def test_powers(self):
        r = product_membership_check([s], s, I)
        assert r.power_membership == {2: False, 3: False} and r.consistent

    def test_ci_space(self):
        r = product_membership_check([I], 2 * I, 3 * I)
        assert r.space_is_CI and r.product_in_span and r.power_membership[2] and r.consistent

    def test_a_outside_span(self):
        with pytest.raises(ValueError):
            product_membership_check([S0], S1, I)


class TestAudit:
    def test_shift(self):
        findings = structural_audit(check_mi_space([s]))
        p24 = [f for f in findings if f.code == "AUDIT-P24"]
        assert p24 and all(f.ok for f in findings)
        assert "multiplicity 1" in p24[0].detail

    def test_identity(self):
        findings = structural_audit(check_mi_space([I]))
        c25b = [f for f in findings if f.code == "AUDIT-C25B"]
        assert c25b[0].ok and "lies in the span" in c25b[0].detail

    def test_cuntz(self):
        findings = structural_audit(check_mi_space([S0, S1]))
        assert all(f.ok and not f.internal for f in findings)
        assert all("infinite" in f.detail for f in findings if f.code == "AUDIT-P24")

    def test_unitary(self):
        findings = structural_audit(check_mi_space([parity_swap()]))
        assert any(f.code == "AUDIT-C25A" and f.ok for f in findings)


cuntz_terms = st.lists(st.tuples(coefficients(9), st.integers(0, 3)), min_size=1, max_size=3)


@st.composite
def cuntz_families(draw):
    gens = make_cuntz(4)
    count = draw(st.integers(1, 3))
    return [linear_combine((c, gens[k]) for c, k in draw(cuntz_terms)) for _ in range(count)]


@given(cuntz_families())
def test_gram_is_hermitian_psd(gens):
    r = check_mi_space(gens)
    assert r.is_mi
    assert gram_is_hermitian(r.gram) and gram_is_psd(r.gram)
    assert all(r.gram[k][k].im == 0 and r.gram[k][k].re >= 0 for k in range(len(gens)))
    basis = orthogonalize(r)
    assert len(basis) == r.dimension
    for j, a in enumerate(basis):
        for k, b in enumerate(basis):
            if j != k:
                assert inner_product(a, b) == ZERO
        assert span_membership(a, gens) is not None
    for g in gens:
        assert span_membership(g, basis) is not None


@given(cuntz_families())
def test_gram_entries_define_products(gens):
    r = check_mi_space(gens)
    for j, a in enumerate(gens):
        for k, b in enumerate(gens):
            assert scalar_test(op_mul(op_adjoint(b), a)) == Scalar(r.gram[j][k])


@given(cuntz_families(), st.lists(coefficients(5), min_size=3, max_size=3))
def test_span_membership_recovers_combination(gens, coefs):
    t = linear_combine(zip(coefs, gens))
    sol = span_membership(t, gens)
    assert sol is not None
    assert linear_combine(zip(sol, gens)) == t


def test_commutator_identity_on_sample():
    for a, b in commutator_corpus(40, seed=3):
        ci = commutator_identity_check(a, b)
        assert ci.holds
        assert isinstance(scalar_test(op_mul(op_adjoint(ci.commutator), ci.commutator)), Scalar)
        assert commutation_check(a, b).consistent
