import io
import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from isocalc.constructions import make_cuntz, make_shift_with_wandering, unilateral_shift
from isocalc.index_arith import IndexSet
from isocalc.mi_space import commutator, inner_product
from isocalc.numeric_oracle import cross_validate, norm_estimate, truncate
from isocalc.op_algebra import I_UNIT, Operator, linear_combine, op_adjoint, op_mul
from strategies import coefficients, product_corpus

S0, S1 = make_cuntz(2)
s = unilateral_shift()


class TestTruncate:
    def test_shift(self):
        t = truncate(s, 4)
        assert np.array_equal(t.matrix, np.eye(4, k=-1))
        assert t.safe_columns == frozenset({0, 1, 2})

    def test_cuntz(self):
        t = truncate(S0, 8)
        expect = np.zeros((8, 8))
        for i in range(4):
            expect[2 * i, i] = 1
        assert np.array_equal(t.matrix, expect)
        assert t.safe_columns == frozenset({0, 1, 2, 3})

    def test_zero(self):
        t = truncate(Operator.zero(), 4)
        assert not t.matrix.any() and t.safe_columns == frozenset(range(4))

    def test_prefix_tier(self):
        op = make_shift_with_wandering(IndexSet.progression(2, [0]), bound=64)
        t = truncate(op, 16)
        for j in t.safe_columns:
            (i,) = np.nonzero(t.matrix[:, j])[0]
            assert i == op.forward(j)

    def test_csv(self):
        buf = io.StringIO()
        truncate(2 * S0, 3).to_csv(buf)
        assert buf.getvalue().splitlines() == ["i,j,re,im", "0,0,2.0,0.0", "2,1,2.0,0.0"]


class TestNorm:
    def test_examples(self):
        assert abs(norm_estimate(2 * S0 + S1, 512) - math.sqrt(5)) < 1e-9
        assert abs(norm_estimate(commutator(S0, S1), 64) - math.sqrt(2)) < 1e-9
        assert abs(norm_estimate(Operator.identity(), 16) - 1) < 1e-12
        assert norm_estimate(Operator.zero(), 8) == 0.0

    def test_monotone_in_n(self):
        a = 2 * S0 + I_UNIT * S1 + s
        values = [norm_estimate(a, n) for n in (4, 8, 16, 32)]
        assert all(x <= y + 1e-9 for x, y in zip(values, values[1:]))


class TestCrossValidate:
    def test_examples(self):
        assert cross_validate(op_adjoint(S0), S0, 64).max_diff == 0.0
        a = 2 * S0 + S1
        cv = cross_validate(op_adjoint(a), a, 64)
        assert cv.ok and cv.columns
        t = truncate(op_mul(op_adjoint(a), a), 64)
        assert all(t.matrix[j, j] == 5 for j in cv.columns)
        cv = cross_validate(s, s, 8)
        assert cv.ok and cv.columns == tuple(range(6))

    def test_product_sample(self):
        for a, b in product_corpus(20, seed=11):
            assert cross_validate(a, b, 64).max_diff == 0.0


@given(st.lists(st.tuples(coefficients(9), st.integers(0, 2)), min_size=1, max_size=3))
def test_norm_squared_matches_inner_product(terms):
    gens = make_cuntz(3)
    a = linear_combine((c, gens[k]) for c, k in terms)
    if a.is_zero:
        return
    exact = float(inner_product(a, a).re)
    est = norm_estimate(a, 96)
    assert est ** 2 <= exact * (1 + 1e-9) + 1e-9
    assert abs(est ** 2 - exact) <= 1e-9 * max(exact, 1)
