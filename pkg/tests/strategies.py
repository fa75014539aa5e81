"""Hypothesis strategies and deterministic corpora shared by the tests."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from isocalc.constructions import make_cuntz
from isocalc.index_arith import IndexSet
from isocalc.op_algebra import Coefficient, Operator, PartialInjection, linear_combine


@st.composite
def index_sets(draw, max_mod=6, top=40):
    mod = draw(st.integers(1, max_mod))
    res = draw(st.sets(st.integers(0, mod - 1)))
    added = draw(st.sets(st.integers(0, top), max_size=5))
    removed = draw(st.sets(st.integers(0, top), max_size=5))
    return IndexSet.build(mod, res, added, removed)


def rationals(bound=10):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, bound))


def coefficients(bound=10):
    return st.builds(Coefficient, rationals(bound), rationals(bound))


@st.composite
def injections(draw):
    a = draw(st.integers(1, 3))
    b = draw(st.integers(0, 5))
    return PartialInjection.affine(a, b, draw(index_sets(max_mod=4, top=20)))


@st.composite
def operators(draw, max_terms=4):
    terms = draw(st.lists(st.tuples(coefficients(), injections()), max_size=max_terms))
    return Operator.from_terms(terms)


def random_coefficient(rng, bound=9):
    def q():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    return Coefficient(q(), q())


def cuntz_combination(rng, gens, max_terms=3):
    k = rng.randint(1, min(max_terms, len(gens)))
    picked = rng.sample(gens, k)
    return linear_combine((random_coefficient(rng), g) for g in picked)


def commutator_corpus(count=200, seed=20240501):
    """Pairs in spans of Cuntz generators: n <= 4, <= 3 terms, entries <= 9."""
    rng = random.Random(seed)
    families = {n: make_cuntz(n) for n in (2, 3, 4)}
    pairs = []
    while len(pairs) < count:
        n = rng.choice((2, 3, 4))
        a = cuntz_combination(rng, families[n])
        b = cuntz_combination(rng, families[n])
        pairs.append((a, b))
    return pairs


def dyadic_coefficient(rng):
    def q():
        return Fraction(rng.randint(-8, 8), 2 ** rng.randint(0, 3))
    return Coefficient(q(), q())


def product_corpus(count=200, seed=7):
    """Random exact operators with dyadic coefficients, so float conversion is exact."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        ops = []
        for _ in range(2):
            terms = []
            for _ in range(rng.randint(1, 3)):
                mod = rng.randint(1, 4)
                res = [r for r in range(mod) if rng.random() < 0.7]
                dom = IndexSet.build(mod, res, [rng.randint(0, 30)], [rng.randint(0, 30)])
                terms.append((dyadic_coefficient(rng),
                              PartialInjection.affine(rng.randint(1, 3), rng.randint(0, 4), dom)))
            ops.append(Operator.from_terms(terms))
        if rng.random() < 0.5:
            ops[0] = ops[0].adjoint()
        out.append(tuple(ops))
    return out
