import pytest
from hypothesis import given
from hypothesis import strategies as st

from isocalc.constructions import (
    UnitarySpec,
    build_basis_isometry,
    enumeration_map,
    make_cuntz,
    make_isometry_with_parts,
    make_shift_with_range,
    make_shift_with_wandering,
    parity_swap,
    unilateral_shift,
)
from isocalc.errors import NotIsometryError
from isocalc.index_arith import IndexSet
from isocalc.op_algebra import (
    ONE,
    ZERO,
    Coefficient,
    I_UNIT,
    Operator,
    PartialInjection,
    PrefixOperator,
    Scalar,
    classify,
    linear_combine,
    op_adjoint,
    op_mul,
    piece,
    scalar_test,
    validate_injection,
)
from strategies import index_sets

NAT = IndexSet.naturals()
EVENS = IndexSet.progression(2, [0])
ODDS = IndexSet.progression(2, [1])


def single_map(op):
    ((c, f),) = op.terms
    assert c == ONE
    return f


class TestBasisIsometry:
    def test_examples(self):
        assert build_basis_isometry(PartialInjection.affine(1, 1)) == unilateral_shift()
        assert build_basis_isometry(PartialInjection.affine(2, 0)) == make_cuntz(2)[0]
        swap = validate_injection([piece(EVENS, 1, 1), piece(ODDS, 1, -1)])
        assert classify(build_basis_isometry(swap)).kind == "unitary-multiple"

    def test_partial_map_rejected(self):
        with pytest.raises(NotIsometryError):
            build_basis_isometry(PartialInjection.affine(1, 0, EVENS))


class TestShiftWithWandering:
    def test_single_wandering_vector(self):
        assert make_shift_with_wandering(IndexSet.finite([0])) == unilateral_shift()

    def test_two_wandering_vectors(self):
        assert single_map(make_shift_with_wandering(IndexSet.finite([0, 1]))) == PartialInjection.affine(1, 2)

    def test_infinite_wandering_is_prefix(self):
        op = make_shift_with_wandering(EVENS)
        assert isinstance(op, PrefixOperator)
        assert op.provenance["pairing"] == {"kind": "cantor"}
        wand = [j for j in range(4096) if op.backward(j) is None]
        assert wand == list(range(0, 4096, 2))

    def test_rejections(self):
        with pytest.raises(ValueError):
            make_shift_with_wandering(IndexSet.at_least(2))
        with pytest.raises(ValueError):
            make_shift_with_wandering(IndexSet.empty())

    def test_provenance(self):
        op = make_shift_with_wandering(IndexSet.finite([3, 5]))
        assert op.provenance["pairing"] == {"kind": "row-major", "m": 2}


class TestShiftWithRange:
    def test_examples(self):
        assert single_map(make_shift_with_range(IndexSet.at_least(3))) == PartialInjection.affine(1, 3)
        assert make_shift_with_range(IndexSet.at_least(1)) == unilateral_shift()
        op = make_shift_with_range(ODDS)
        assert isinstance(op, PrefixOperator)
        assert all((op.backward(j) is not None) == (j % 2 == 1) for j in range(4096))

    def test_finite_range_rejected(self):
        with pytest.raises(ValueError):
            make_shift_with_range(IndexSet.finite([1, 2]))


class TestIsometryWithParts:
    def test_fixed_point_plus_shift(self):
        u = UnitarySpec.identity(IndexSet.finite([0]))
        k = IndexSet.finite([0]) | IndexSet.at_least(2)
        f = single_map(make_isometry_with_parts(u, k))
        assert f(0) == 0
        assert all(f(i) == i + 1 for i in range(1, 200))

    def test_pure_shift_case(self):
        assert make_isometry_with_parts(UnitarySpec.identity(IndexSet.empty()), IndexSet.at_least(1)) \
            == unilateral_shift()

    def test_evens_fixed(self):
        f = single_map(make_isometry_with_parts(UnitarySpec.identity(EVENS), NAT - IndexSet.finite([1])))
        assert f == validate_injection([piece(EVENS, 1, 0), piece(ODDS, 1, 2)])

    def test_evens_fixed_prefix(self):
        k = EVENS | IndexSet.progression(4, [3])
        op = make_isometry_with_parts(UnitarySpec.identity(EVENS), k, bound=512)
        assert isinstance(op, PrefixOperator)
        assert all(op.forward(i) == i for i in range(0, 400, 2))
        assert all(op.forward(i) % 4 == 3 for i in range(1, 400, 2))
        assert all((op.backward(j) is None) == (j % 4 == 1) for j in range(400))

    def test_range_without_gap_rejected(self):
        # with K = N there is no wandering vector, so no shift part exists
        with pytest.raises(ValueError):
            make_isometry_with_parts(UnitarySpec.identity(EVENS), NAT)

    def test_containment_and_size(self):
        with pytest.raises(ValueError):
            make_isometry_with_parts(UnitarySpec.identity(EVENS), ODDS)
        with pytest.raises(ValueError):
            make_isometry_with_parts(UnitarySpec.identity(EVENS), EVENS | IndexSet.finite([1]))

    def test_phased_unitary(self):
        swap = validate_injection([piece(IndexSet.finite([0]), 1, 2), piece(IndexSet.finite([2]), 1, -2)])
        u = UnitarySpec(IndexSet.finite([0, 2]), swap, {0: I_UNIT, 2: -ONE})
        op = make_isometry_with_parts(u, IndexSet.finite([0, 2]) | IndexSet.at_least(4))
        assert op.apply(0) == [(2, I_UNIT)]
        assert op.apply(2) == [(0, -ONE)]
        assert scalar_test(op_mul(op_adjoint(op), op)) == Scalar(ONE)

    def test_unitary_spec_validation(self):
        with pytest.raises(ValueError):
            UnitarySpec(EVENS, PartialInjection.affine(1, 2, EVENS))
        with pytest.raises(ValueError):
            UnitarySpec(EVENS, PartialInjection.identity(EVENS), {0: Coefficient(2)})


class TestCuntz:
    def test_maps(self):
        s0, s1 = make_cuntz(2)
        assert single_map(s0) == PartialInjection.affine(2, 0)
        assert single_map(s1) == PartialInjection.affine(2, 1)

    def test_relations(self):
        g = make_cuntz(3)
        assert scalar_test(op_mul(op_adjoint(g[2]), g[1])) == Scalar(ZERO)
        s0, s1 = make_cuntz(2)
        assert scalar_test(op_mul(s0, s0.H) + op_mul(s1, s1.H)) == Scalar(ONE)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            make_cuntz(1)


def test_enumeration_map_is_increasing_bijection():
    for s in (EVENS - IndexSet.finite([4]), IndexSet.build(3, [1, 2], [0], [5]), IndexSet.finite([2, 9])):
        f = enumeration_map(s)
        expect = list(s.elements(below=300))
        got = [f(k) for k in range(len(expect))]
        assert got == expect
        assert f.image() == s


finite_wandering = st.sets(st.integers(0, 40), min_size=1, max_size=8).map(IndexSet.finite)


@given(finite_wandering)
def test_exact_outputs_are_isometries(m):
    op = make_shift_with_wandering(m)
    assert scalar_test(op_mul(op_adjoint(op), op)) == Scalar(ONE)
    assert (~single_map(op).image()) == m


@given(index_sets(max_mod=4, top=30))
def test_range_equals_k(k):
    if k.is_finite or (~k).is_empty:
        return
    op = make_shift_with_range(k, bound=512)
    if isinstance(op, Operator):
        assert single_map(op).image() == k
    else:
        assert all((op.backward(j) is not None) == (j in k) for j in range(512))


@given(finite_wandering)
def test_wandering_translates_are_orthogonal_and_exhaust(m):
    f = single_map(make_shift_with_wandering(m))
    layers = [set(m.elements())]
    for _ in range(5):
        layers.append({f(i) for i in layers[-1]})
    for p in range(len(layers)):
        for q in range(p + 1, len(layers)):
            assert layers[p].isdisjoint(layers[q])
    # each row is an infinite chain, so enough layers cover any window
    covered = set(m.elements())
    frontier = set(covered)
    for _ in range(100):
        frontier = {f(i) for i in frontier}
        covered |= frontier
    assert set(range(60)) <= covered


def test_cantor_layers_orthogonal():
    op = make_shift_with_wandering(IndexSet.progression(3, [1]))
    seen = set()
    for i in range(1, 300, 3):
        orbit = [i]
        for _ in range(5):
            orbit.append(op.forward(orbit[-1]))
        assert seen.isdisjoint(orbit)
        seen.update(orbit)


def test_parity_swap_is_unitary():
    u = parity_swap()
    assert scalar_test(op_mul(u, u.H)) == Scalar(ONE)
    assert scalar_test(linear_combine([(1, op_mul(u, u))])) == Scalar(ONE)
