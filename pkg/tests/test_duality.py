from math import comb

import pytest
from hypothesis import given, strategies as st

from quiverslice.duality import (DualityInstance, box_partitions, compositions, duality_table, mixed_duality,
                                 skew_checksum, skew_multiplicity, symmetric_checksum, symmetric_multiplicity)
from quiverslice.partitions import kostka, partitions
from quiverslice.quiverdata import QuiverInput, is_nonempty, to_gl_data


def test_skew_examples():
    assert skew_multiplicity(DualityInstance(2, 2, (1, 1), (1, 1))) == (1, 1)
    hom, wt = skew_multiplicity(DualityInstance(2, 3, (1, 1, 1), (2, 1)))
    assert hom == wt == 2
    assert skew_multiplicity(DualityInstance(2, 2, (2, 2), (2, 2))) == (1, 1)
    assert skew_multiplicity(DualityInstance(1, 2, (1, 1), (1, 1))) == (0, 0)


def test_symmetric_examples():
    assert symmetric_multiplicity(DualityInstance(2, 1, (2, 1), (2, 1))) == (1, 1)
    assert symmetric_multiplicity(DualityInstance(2, 1, (3,), (3,))) == (1, 1)
    assert symmetric_multiplicity(DualityInstance(2, 1, (3,), (2, 1))) == (0, 0)
    assert symmetric_multiplicity(DualityInstance(2, 1, (1, 1, 1), (1, 1, 1))) == (0, 0)


def test_mixed_example():
    assert mixed_duality(DualityInstance(2, 2, (2, 1), (2, 1))) == (1, 1)


def test_standard_tableaux_counts():
    # all-ones weight gives the number of standard tableaux on both sides
    for lam in partitions(4, max_len=3):
        hom, wt = symmetric_multiplicity(DualityInstance(3, 1, (1, 1, 1, 1), lam))
        assert hom == wt == kostka(lam, (1, 1, 1, 1))


def test_bad_instance():
    with pytest.raises(ValueError):
        DualityInstance(0, 1, (1,), (1,))
    with pytest.raises(ValueError):
        mixed_duality(DualityInstance(2, 2, (1,), (1,)))


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 6))
def test_checksums(m, n, N):
    lhs, rhs = skew_checksum(m, n, N)
    assert lhs == rhs == comb(m * n, N)
    lhs, rhs = symmetric_checksum(m, N)
    assert lhs == rhs == comb(m * m + N - 1, N)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 5), st.data())
def test_identities_random(m, n, N, data):
    a = data.draw(st.sampled_from(list(compositions(N, n))))
    lam = data.draw(st.sampled_from(list(partitions(N))))
    hom, wt = skew_multiplicity(DualityInstance(m, n, a, lam))
    assert hom == wt
    c = data.draw(st.sampled_from(list(compositions(N, m))))
    hom, wt = symmetric_multiplicity(DualityInstance(m, 1, c, lam))
    assert hom == wt
    boxed = list(box_partitions(N, m, n))
    if boxed:
        lhs, rhs = mixed_duality(DualityInstance(m, n, c, data.draw(st.sampled_from(boxed))))
        assert lhs == rhs


def test_geometric_tie_in():
    # for c = 0 quiver data the skew multiplicity of (λ, a) is the Kostka number K_{λ̌, a}
    for v in [(1,), (2,), (1, 1), (1, 2), (2, 1)]:
        for d in [(2,), (3,), (1, 1), (2, 1), (0, 2)]:
            if len(v) != len(d):
                continue
            q = QuiverInput(len(v) + 1, v, d)
            if not is_nonempty(q):
                continue
            gl = to_gl_data(q)
            hom, wt = skew_multiplicity(DualityInstance(gl.m, q.n, gl.a, gl.lam))
            assert hom == wt == kostka(gl.lambda_check, gl.a) > 0


def test_small_table_passes():
    rows = duality_table(2, 2, 3)
    assert rows and all(r.passed for r in rows)
    assert {r.identity for r in rows} == {"symmetric", "symmetric-checksum", "skew", "skew-checksum", "mixed"}
