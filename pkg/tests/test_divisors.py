import pytest

from normalmonoid.criteria import CanonicalOneRelator, CanonicalTwoRelator
from normalmonoid.divisors import (FreeGenerator, MinimalPrime, divisor_data_one_relator,
                                   divisor_data_two_relator, minimal_primes_one_relator,
                                   minimal_primes_two_relator,
                                   principal_decomposition_one_relator,
                                   principal_decomposition_two_relator,
                                   prime_count_two_relator)
from normalmonoid.sweep import one_relator_family, two_relator_family, two_relator_shapes

from oracles import brute_force_minimal_primes

NORMAL = CanonicalTwoRelator((1, 2, 3, 3, 3), 5, (1, 2, 1), (1,))


def P(*label):
    return MinimalPrime(label)


def test_one_relator_primes():
    assert minimal_primes_one_relator(CanonicalOneRelator(3, 2, (2,))) == [P(1, 3), P(2, 3)]
    assert minimal_primes_one_relator(CanonicalOneRelator(2, 1, (1,))) == [P(1, 2)]
    assert len(minimal_primes_one_relator(CanonicalOneRelator(5, 3, (1, 1)))) == 6


def test_one_relator_decompositions():
    c = CanonicalOneRelator(3, 2, (2,))
    assert principal_decomposition_one_relator(c, 3) == {P(1, 3): 1, P(2, 3): 1}
    assert principal_decomposition_one_relator(c, 1) == {P(1, 3): 2}
    c = CanonicalOneRelator(4, 2, (1, 3))
    assert principal_decomposition_one_relator(c, 2) == {P(2, 3): 1, P(2, 4): 3}
    with pytest.raises(FreeGenerator):
        principal_decomposition_one_relator(c, 5)


def test_one_relator_matrices():
    assert divisor_data_one_relator(CanonicalOneRelator(3, 2, (2,))).matrix == \
        [[2, 0, 1], [0, 2, 1]]
    d = divisor_data_one_relator(CanonicalOneRelator(4, 1, (2, 3, 1)))
    assert d.matrix == [[2, 1, 0, 0], [3, 0, 1, 0], [1, 0, 0, 1]]


def test_two_relator_primes_normal_example():
    assert minimal_primes_two_relator(NORMAL) == [P(1, 2, 4), P(1, 2, 5), P(3, 2, 4), P(3, 2, 5)]
    assert prime_count_two_relator(NORMAL) == 4


def test_two_relator_decomposition_normal_example():
    # u4 sits in the last block: a_1 a_2 + b_2 on P_{1,2,4}, b_2 on P_{3,2,4}
    assert principal_decomposition_two_relator(NORMAL, 4) == {P(1, 2, 4): 3, P(3, 2, 4): 1}
    d = divisor_data_two_relator(NORMAL)
    assert d.matrix == [[2, 1, 0, 3, 0], [2, 1, 0, 0, 3], [0, 1, 2, 1, 0], [0, 1, 2, 0, 1]]


def test_two_relator_block_items():
    c = CanonicalTwoRelator((1, 2, 3, 4, 5), 7, (2, 1, 1, 2, 3), (2,))
    # k4 < w <= k5: product of P_{w,l} with multiplicity one
    assert principal_decomposition_two_relator(c, 5) == {P(5, 6): 1, P(5, 7): 1}
    # k2 < w <= k3 with k3 = k4: only the triple product remains
    c = CanonicalTwoRelator((1, 2, 3, 3, 3), 5, (1, 2, 1), (1,))
    assert principal_decomposition_two_relator(c, 3) == {P(3, 2, 4): 2, P(3, 2, 5): 2}
    with pytest.raises(FreeGenerator):
        principal_decomposition_two_relator(c, 6)


def test_degenerate_touching_blocks_count():
    # k2 = k3 = k4 = k5: only triples with v in k1+1..k2
    c = CanonicalTwoRelator((2, 3, 3, 3, 3), 6, (1, 1, 2), (2,))
    primes = minimal_primes_two_relator(c)
    assert all(p.is_triple for p in primes)
    assert len(primes) == 2 * 1 * 3


def test_prime_count_formula_matches_enumeration():
    for k, n in two_relator_shapes(8, allow_k1_zero=True):
        k1, k2, k3, k4, k5 = k
        a = tuple(1 for _ in range(k5))
        c = CanonicalTwoRelator(k, n, a, (1,) * (k2 - k1))
        assert prime_count_two_relator(c) == len(minimal_primes_two_relator(c))


def _as_sets(primes):
    return {frozenset(i - 1 for i in p.label) for p in primes}


def test_one_relator_primes_match_brute_force():
    for c in one_relator_family(5, 3):
        assert _as_sets(minimal_primes_one_relator(c)) == \
            brute_force_minimal_primes(c.presentation())


def test_two_relator_primes_match_brute_force():
    for c in two_relator_family(7, 2, allow_k1_zero=True):
        assert _as_sets(minimal_primes_two_relator(c)) == \
            brute_force_minimal_primes(c.presentation()), c.to_dict()


def _support_consistent(dd):
    for prime, row in zip(dd.primes, dd.matrix):
        for j, x in enumerate(row):
            assert (x > 0) == (j + 1 in prime.generator_set)


def test_prime_support_consistency():
    for c in one_relator_family(5, 2):
        _support_consistent(divisor_data_one_relator(c))
    for c in two_relator_family(7, 2, allow_k1_zero=True):
        _support_consistent(divisor_data_two_relator(c))


def test_matrix_row_order_triples_first():
    d = divisor_data_two_relator(CanonicalTwoRelator((1, 2, 3, 4, 5), 7, (2, 1, 1, 2, 3), (2,)))
    sizes = [len(p.label) for p in d.primes]
    assert sizes == sorted(sizes, reverse=True)
    triples = [p.label for p in d.primes if p.is_triple]
    assert triples == sorted(triples)
