import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from quiverslice.partitions import (EXTERIOR, SYMMETRIC, SizeError, as_partition, dim_gl, dominates, dual,
                                    elementary_symmetric, kostka, partitions, pieri_decompose)

from strategies import partitions_of


def ssyt_count(shape, weight):
    """Brute-force count of semistandard tableaux filled box by box."""
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    letters = [i + 1 for i, w in enumerate(weight) for _ in range(w)]
    if len(letters) != len(cells):
        return 0
    seen = set()
    for filling in set(itertools.permutations(letters)):
        tab = dict(zip(cells, filling))
        rows_ok = all(tab[(r, c)] <= tab[(r, c + 1)] for (r, c) in cells if (r, c + 1) in tab)
        cols_ok = all(tab[(r, c)] < tab[(r + 1, c)] for (r, c) in cells if (r + 1, c) in tab)
        if rows_ok and cols_ok:
            seen.add(filling)
    return len(seen)


def test_dual_examples():
    assert dual((3, 2)) == (2, 2, 1)
    assert dual(()) == ()
    assert dual((2, 1)) == (2, 1)


def test_dominance_examples():
    assert dominates((3,), (2, 1))
    assert not dominates((2, 2), (3, 1))
    assert dominates((2, 1), (2, 1))


def test_dominance_needs_equal_sizes():
    with pytest.raises(SizeError):
        dominates((2,), (1,))


def test_elementary_symmetric_examples():
    assert elementary_symmetric(1, (2, 3)) == 5
    assert elementary_symmetric(2, (2, 3)) == 6
    assert elementary_symmetric(3, (2, 3)) == 0
    assert elementary_symmetric(0, ()) == 1


def test_kostka_examples():
    assert kostka((2, 1), (1, 1, 1)) == 2
    assert kostka((4,), (4,)) == 1
    assert kostka((2, 1), (2, 1)) == 1


def test_pieri_examples():
    assert pieri_decompose([(EXTERIOR, 1), (EXTERIOR, 1)], 2) == {(2,): 1, (1, 1): 1}
    assert pieri_decompose([(SYMMETRIC, 2), (SYMMETRIC, 1)], 2) == {(3,): 1, (2, 1): 1}
    assert pieri_decompose([(EXTERIOR, 2)], 2) == {(1, 1): 1}


def test_partition_counts():
    # OEIS A000041
    assert [sum(1 for _ in partitions(n)) for n in range(10)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]


@given(partitions_of(10))
def test_dual_involution(p):
    assert dual(dual(p)) == p
    assert sum(dual(p)) == sum(p)


@given(st.integers(0, 8).flatmap(lambda n: st.tuples(st.sampled_from(list(partitions(n))),
                                                     st.sampled_from(list(partitions(n))))))
def test_dual_reverses_dominance(pair):
    p, q = pair
    assert dominates(p, q) == dominates(dual(q), dual(p))


@given(partitions_of(6), st.data())
def test_kostka_against_tableaux(shape, data):
    n = sum(shape)
    weight = data.draw(st.lists(st.integers(0, n), min_size=1, max_size=4).filter(lambda w: sum(w) == n)
                       | st.just([1] * n))
    assert kostka(shape, weight) == ssyt_count(shape, weight)


@given(partitions_of(7), st.data())
def test_kostka_weight_permutation(shape, data):
    n = sum(shape)
    weight = data.draw(st.lists(st.integers(0, 3), min_size=1, max_size=5).filter(lambda w: sum(w) == n))
    perm = data.draw(st.permutations(weight))
    assert kostka(shape, weight) == kostka(shape, perm)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3), st.integers(1, 3))
def test_exterior_pieri_is_kostka(a, m):
    dec = pieri_decompose([(EXTERIOR, x) for x in a], m)
    for lam, mult in dec.items():
        assert mult == kostka(dual(lam), a)


@given(st.integers(1, 3), st.integers(0, 5))
def test_dimension_sums(m, N):
    assert sum(dim_gl(lam, m) for lam in partitions(N, max_len=m)
               for _ in range(kostka(lam, [1] * N))) == m ** N
    assert sum(dim_gl(lam, m) for lam in partitions(N, max_len=1)) == comb(m + N - 1, N)


def test_as_partition_sorts_and_drops_zeros():
    assert as_partition([1, 0, 3]) == (3, 1)
    with pytest.raises(ValueError):
        as_partition([-1])
