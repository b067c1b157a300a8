import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiverslice.exactalg import DimensionError, Matrix
from quiverslice.grassmann import (Lattice, LatticeFlag, chart, chart_coords, check_lattice_flag, classify_slice,
                                   decomposition_census, expansion_at_infinity, jordan_to_graded, orbit_type,
                                   pp_mul_z, pp_mul_zinv, psi_global, psi_local, psi_tilde, rotate, rotated_chart,
                                   satisfies_polynomial, translate_monomial, z_action)
from quiverslice.orbits import (Flag, SliceElement, class_of, jordan_matrix, random_nilpotent_slice_element,
                                random_slice_element_with_spectrum)
from quiverslice.partitions import as_partition, dominates, partitions

F = Fraction
ZERO = F(0)


def evaluate(u: dict, i: int, z: Fraction) -> Fraction:
    return sum((val / (z - e) ** k for (e, j, k), val in u.items() if j == i), F(0))


principal_parts = st.dictionaries(
    st.tuples(st.sampled_from([F(0), F(1), F(-2), F(1, 3)]), st.just(0), st.integers(1, 3)),
    st.fractions(-3, 3, max_denominator=2).filter(bool), max_size=4)
sample_points = st.sampled_from([F(7, 2), F(-5), F(11, 3), F(13)])


@given(principal_parts, sample_points)
def test_zinv_is_exact(u, z):
    assert evaluate(pp_mul_zinv(u), 0, z) == evaluate(u, 0, z) / z


@given(principal_parts)
def test_z_drops_only_a_constant(u):
    diffs = {z * evaluate(u, 0, z) - evaluate(pp_mul_z(u), 0, z) for z in (F(7, 2), F(-5), F(13))}
    assert len(diffs) == 1


@given(principal_parts)
def test_expansion_at_infinity_matches_evaluation(u):
    z = F(10 ** 9)
    top = 7
    series = sum((expansion_at_infinity(u, 0, t) / z ** t for t in range(1, top + 1)), F(0))
    assert abs(evaluate(u, 0, z) - series) * z ** top < F(1, 1000)


def test_z_action_examples():
    assert z_action((1, 1)).is_zero()
    assert z_action((2,)) == jordan_matrix((2,))
    assert z_action((3, 2)) == jordan_matrix((3, 2))


def test_standard_lattice_chart_and_type():
    L = Lattice.standard((2, 1))
    assert chart_coords(L, (2, 1)).is_zero()
    assert orbit_type(L, [0]).mu_tilde[ZERO] == (2, 1)
    assert classify_slice(L) == (2, 1)
    assert psi_local(SliceElement((2, 1), jordan_matrix((2, 1))), (2, 1)) == L


def test_psi_local_hand_example():
    s = SliceElement((1, 1), Matrix.from_rows([[0, 1], [0, 0]]))
    L = psi_local(s, (1, 1))
    expected = Lattice.from_vectors(2, [{(ZERO, 0, 1): F(1)}, {(ZERO, 1, 1): F(1), (ZERO, 0, 2): F(1)}])
    assert L == expected
    assert orbit_type(L, [0]).mu_tilde[ZERO] == (2,)


def test_psi_one_parameter_family():
    for t in (0, 1, -3):
        s = SliceElement((2,), Matrix.from_rows([[0, 1], [0, t]]))
        L = psi_global(s, (2,), sorted({F(0), F(t)}))
        assert chart_coords(L, (2,)) == s.f1
        assert (L == Lattice.standard((2,))) == (t == 0)


def test_psi_global_examples():
    s = SliceElement((1,), Matrix.from_rows([[5]]))
    L = psi_global(s, (1,), [5])
    assert L == Lattice.from_vectors(1, [{(F(5), 0, 1): F(1)}])
    s = SliceElement((1, 1), Matrix.diag([0, 5]))
    L = psi_global(s, (1, 1), [0, 5])
    assert L.poles() == (0, 5)
    assert orbit_type(L, [0, 5]).mu_tilde == {0: (1,), 5: (1,)}
    assert satisfies_polynomial(L, [0, 5])


def test_psi_global_single_eigenvalue_is_local():
    rng = random.Random(4)
    y = random_nilpotent_slice_element((2, 1), rng)
    s = SliceElement((2, 1), y)
    assert psi_global(s, (2, 1), [0]) == psi_local(s, (2, 1))


def test_psi_local_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        psi_local(SliceElement((1,), Matrix.from_rows([[5]])), (1,))


def test_chart_off_chart_and_mismatch():
    assert chart_coords(Lattice.standard((2, 0)), (1, 1)) is None
    with pytest.raises(DimensionError):
        chart(Lattice.standard((2, 0)), (1, 0))


def test_psi_tilde_flag():
    s = SliceElement((1, 1), Matrix.from_rows([[0, 1], [0, 0]]))
    flag = Flag.from_spans([Matrix.from_rows([[1], [0]]), Matrix.identity(2)], 2)
    LF = psi_tilde(s, flag, (1, 1), [0, 0])
    assert LF.top() == psi_local(s, (1, 1))
    assert LF.a == (1, 1)
    check_lattice_flag(LF)
    zero = SliceElement((1, 1), Matrix.zeros(2, 2))
    one = psi_tilde(zero, Flag.from_spans([Matrix.identity(2)], 2), (1, 1), [0])
    assert one.steps == (Lattice.standard((1, 1)),)
    with pytest.raises(ValueError):
        psi_tilde(s, Flag.from_spans([Matrix.identity(2)], 2), (1, 1), [0])
    with pytest.raises(ValueError):
        psi_tilde(s, flag, (1, 1), [0])


def test_broken_lattice_flag_detected():
    L1 = Lattice.standard((1, 0))
    L2 = Lattice.standard((1, 1))
    with pytest.raises(ArithmeticError):
        check_lattice_flag(LatticeFlag((L2, L1), (2, 0), (ZERO, ZERO)))


lams = st.integers(1, 5).flatmap(lambda n: st.sampled_from(list(partitions(n))))


@given(lams, st.integers(0, 10 ** 6))
def test_psi_local_properties(lam, seed):
    rng = random.Random(seed)
    s = SliceElement(lam, random_nilpotent_slice_element(lam, rng))
    b = list(lam) + [0]
    rng.shuffle(b)
    b = tuple(b)
    L = psi_local(s, b)
    P = jordan_to_graded(b)
    f1 = P @ s.f1 @ P.T
    assert L.is_module()
    assert orbit_type(L, [0]).same_as(class_of(s.mat, [0]))
    assert chart_coords(L, b) == f1
    assert classify_slice(L) == b
    assert dominates(orbit_type(L, [0]).mu_tilde[ZERO], as_partition(b))
    for sc in (2, 3, 5):
        assert chart_coords(rotate(L, sc), b) == rotated_chart(f1, b, sc)


@given(lams, st.integers(0, 10 ** 6))
def test_psi_global_properties(lam, seed):
    rng = random.Random(seed)
    E = [F(0), F(1), F(-1, 2)]
    s = SliceElement(lam, random_slice_element_with_spectrum(lam, E, rng))
    L = psi_global(s, lam, E)
    assert L.is_module()
    assert orbit_type(L, E).same_as(class_of(s.mat, E))
    assert chart_coords(L, lam) == s.f1
    assert classify_slice(L) == tuple(lam)
    assert satisfies_polynomial(L, [e for e in E for _ in range(sum(lam))])


def test_rotation_scaling_symbolic():
    # one slice entry from z^{-1}e_2 into z^{-2}e_1 scales by s^{1-2-1} = s^{-2}
    f1 = Matrix.from_rows([[0, 0, 0], [0, 0, 7], [0, 0, 0]])
    for sc in (2, 3, 5):
        assert rotated_chart(f1, (2, 1), sc)[1, 2] == F(7, sc ** 2)


def test_monomial_translate_permutes_coweight():
    L = Lattice.standard((2, 0))
    assert translate_monomial(L, [1, 0], [3, -1]) == Lattice.standard((0, 2))


@pytest.mark.parametrize("mu", [(1, 1), (2,), (2, 1), (3, 1), (2, 2)])
def test_census_small(mu):
    report = decomposition_census(mu, 2, 24, seed=3)
    assert report.ok
    assert sum(report.tally.values()) == 24
    assert all(dominates(mu, lam) for lam in report.tally)
    if mu == (1, 1):
        assert set(report.tally) == {(1, 1)}
