import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiverslice.partitions import dominates, dual, kostka
from quiverslice.quiverdata import (EmptyQuiverVariety, QuiverInput, dimension_identity, is_nonempty, maffei_dims,
                                    quiver_from_partitions, tilde_input, to_gl_data, weight_of)


def test_gl_data_three_vertices():
    gl = to_gl_data(QuiverInput(3, (1, 1), (1, 1)))
    assert (gl.N, gl.m) == (3, 2)
    assert gl.lambda_check == (2, 1) and gl.lam == (2, 1)
    assert gl.a == (1, 1, 1) and gl.mu == (3,)
    assert gl.E == (0,) and gl.mu_tilde[0] == (3,)


def test_gl_data_two_vertices():
    gl = to_gl_data(QuiverInput(2, (1,), (2,)))
    assert (gl.N, gl.m, gl.lambda_check, gl.lam, gl.a, gl.mu) == (2, 2, (2,), (1, 1), (1, 1), (2,))


def test_gl_data_deformed():
    gl = to_gl_data(QuiverInput(2, (1,), (2,), (5,)))
    assert gl.b == (0, 5) and gl.E == (0, 5)
    assert gl.mu_tilde == {0: (1,), 5: (1,)}


def test_maffei_dims_examples():
    md = maffei_dims(QuiverInput(3, (1, 1), (1, 1)))
    assert (md.d_tilde, md.v_tilde) == ((3, 0), (2, 1))
    md = maffei_dims(QuiverInput(2, (1,), (2,)))
    assert (md.d_tilde, md.v_tilde) == ((2,), (1,))
    md = maffei_dims(QuiverInput(4, (1, 2, 0), (0, 0, 0)))
    assert (md.d_tilde, md.v_tilde) == ((0, 0, 0), (1, 2, 0))


def test_dimension_identity_examples():
    assert dimension_identity(QuiverInput(3, (1, 1), (1, 1))) == (2, 2)
    assert dimension_identity(QuiverInput(2, (1,), (2,))) == (2, 2)
    assert dimension_identity(QuiverInput(3, (0, 0), (2, 1))) == (0, 0)


def test_negative_weight_is_empty():
    q = QuiverInput(2, (3,), (1,))
    assert not is_nonempty(q)
    with pytest.raises(EmptyQuiverVariety):
        to_gl_data(q)


def test_nonnegative_weight_can_still_be_empty():
    q = QuiverInput(3, (1, 0), (0, 1))
    gl = to_gl_data(q)
    assert min(gl.a) >= 0
    assert not is_nonempty(q)
    assert not dominates(gl.mu, gl.lam)


def test_bad_lengths_rejected():
    with pytest.raises(ValueError):
        QuiverInput(3, (1,), (1, 1))
    with pytest.raises(ValueError):
        QuiverInput(1, (), ())


quiver_inputs = st.integers(2, 4).flatmap(
    lambda n: st.builds(QuiverInput, st.just(n),
                        st.tuples(*[st.integers(0, 3)] * (n - 1)),
                        st.tuples(*[st.integers(0, 3)] * (n - 1))))


@given(quiver_inputs)
def test_identity_and_weights(q):
    if min(weight_of(q)) < 0:
        return
    lhs, rhs = dimension_identity(q)
    assert lhs == rhs
    gl = to_gl_data(q)
    assert sum(sum(p) for p in gl.mu_tilde.values()) == gl.N
    assert sorted(gl.a, reverse=True)[: len(gl.mu_check)] == list(gl.mu_check)
    assert is_nonempty(q) == (kostka(gl.lambda_check, gl.a) > 0)
    if is_nonempty(q):
        assert dominates(gl.mu, gl.lam)
        md = maffei_dims(q)
        assert sum((j + 1) * x for j, x in enumerate(md.d_tilde)) == gl.N
        tl = to_gl_data(tilde_input(q))
        assert (tl.mu, tl.a) == (gl.mu, gl.a)
        assert tl.lam == (1,) * gl.N


@given(quiver_inputs)
def test_dominant_weight_round_trip(q):
    if not is_nonempty(q):
        return
    gl = to_gl_data(q)
    if list(gl.a) == sorted(gl.a, reverse=True):
        assert quiver_from_partitions(gl.lam, gl.mu, q.n) == q


@given(st.sampled_from([(Fraction(1), Fraction(-1)), (Fraction(1, 2), Fraction(3, 2))]))
def test_labels_partition_weight(c):
    q = QuiverInput(3, (1, 1), (1, 1), c)
    gl = to_gl_data(q)
    merged = sorted((x for e in gl.E for x in dual(gl.mu_tilde[e])), reverse=True)
    assert merged == sorted((x for x in gl.a if x), reverse=True)


def test_quiver_from_partitions_rejects_non_dominated():
    with pytest.raises(ValueError):
        quiver_from_partitions((3,), (2, 1))
