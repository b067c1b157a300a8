import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiverslice.exactalg import DimensionError, Matrix, column_basis, hstack, inverse, rank
from quiverslice.library import load_library
from quiverslice.quiverdata import QuiverInput
from quiverslice.quiverrep import (ContractError, GroupElement, Quadruple, act, invariant_generators, is_solution,
                                   is_stable, moment_residuals, path_p, path_q, random_group_element,
                                   sample_solution, zero_quadruple)

LIBRARY = load_library()
SHAPES = [QuiverInput(2, (1,), (2,)), QuiverInput(3, (1, 1), (1, 1)), QuiverInput(3, (1, 1), (1, 2)),
          QuiverInput(3, (1, 1), (1, 1), (Fraction(1, 2), Fraction(-2))), QuiverInput(4, (0, 1, 1), (1, 1, 1)),
          QuiverInput(4, (1, 1, 1), (0, 1, 1), (Fraction(1), Fraction(0), Fraction(-1)))]


def closure_stable(m: Quadruple) -> bool:
    """Oracle: the smallest x, x̄-invariant graded subspace containing Im p is everything."""
    k = m.n - 1
    spans = [column_basis(m.p[i]) if m.p[i].cols else Matrix.zeros(m.v[i], 0) for i in range(k)]
    changed = True
    while changed:
        changed = False
        for i in range(k):
            pieces = [spans[i]]
            if i >= 1 and spans[i - 1].cols:
                pieces.append(m.x[i - 1] @ spans[i - 1])
            if i + 1 < k and spans[i + 1].cols:
                pieces.append(m.x_bar[i] @ spans[i + 1])
            pieces = [p for p in pieces if p.cols]
            new = column_basis(hstack(pieces, rows=m.v[i])) if pieces else spans[i]
            if new.cols > spans[i].cols:
                spans[i] = new
                changed = True
    return all(spans[i].cols == m.v[i] for i in range(k))


def n2_point(p, q, c=0):
    inp = QuiverInput(2, (1,), (2,), (c,))
    return Quadruple(inp, [], [], [Matrix.from_rows([p])], [Matrix.from_rows([[x] for x in q])])


def test_residual_examples():
    assert all(r.is_zero() for r in moment_residuals(zero_quadruple(QuiverInput(3, (1, 2), (1, 1)))))
    assert is_solution(n2_point([1, 0], [0, 0]))
    assert is_solution(n2_point([1, 0], [1, 0], c=1))
    assert not is_solution(n2_point([1, 0], [1, 0]))


def test_stability_examples():
    assert is_stable(zero_quadruple(QuiverInput(3, (0, 0), (1, 1))))
    assert is_stable(n2_point([1, 0], [0, 1]))
    assert not is_stable(zero_quadruple(QuiverInput(2, (1,), (2,))))


def test_stability_needs_a_solution():
    with pytest.raises(ContractError):
        is_stable(n2_point([1, 0], [1, 0]))


def test_paths():
    inp = QuiverInput(3, (1, 1), (1, 1))
    m = Quadruple(inp, [Matrix.from_rows([[2]])], [Matrix.from_rows([[3]])],
                  [Matrix.from_rows([[5]]), Matrix.from_rows([[7]])], [Matrix.from_rows([[11]]), Matrix.from_rows([[13]])])
    assert path_p(m, 2, 2) == m.p[1]
    assert path_p(m, 2, 1) == Matrix.from_rows([[21]])
    assert path_q(m, 1, 2) == Matrix.from_rows([[26]])
    assert path_p(m.replace(x_bar=[Matrix.zeros(1, 1)]), 2, 1).is_zero()
    with pytest.raises(IndexError):
        path_p(m, 1, 2)


def test_shape_checks():
    with pytest.raises(DimensionError):
        Quadruple(QuiverInput(2, (1,), (2,)), [], [], [Matrix.zeros(1, 1)], [Matrix.zeros(2, 1)])


def test_scalar_group_action():
    m = n2_point([1, 0], [0, 1])
    g = GroupElement([Matrix.scalar(1, 2)])
    mg = act(g, m)
    assert mg.p[0] == m.p[0] * 2
    assert mg.q[0] == m.q[0] * Fraction(1, 2)
    assert act(GroupElement([Matrix.identity(1)]), m) == m


def test_two_vertex_generators():
    m = n2_point([1, 0], [0, 1])
    gens = invariant_generators(m)
    assert set(k[:3] for k in gens) == {(1, 1, 1)}
    assert Matrix(2, 2, [gens[(1, 1, 1, r, c)] for r in range(2) for c in range(2)]) == m.q[0] @ m.p[0]


def test_sampler_zero_vertex_dims():
    got = sample_solution(QuiverInput(3, (0, 0), (2, 1)), 0)
    assert got is not None and got[1]


@given(st.sampled_from(SHAPES), st.integers(0, 10 ** 6))
def test_sampled_points_solve_relations(inp, seed):
    got = sample_solution(inp, seed)
    if got is None:
        return
    m, stable = got
    assert is_solution(m)
    assert stable == is_stable(m) == closure_stable(m)


@given(st.sampled_from(LIBRARY), st.integers(0, 10 ** 6))
def test_group_action_properties(inst, seed):
    m = inst.quadruple
    g = random_group_element(random.Random(seed), m.v)
    mg = act(g, m)
    for r, rg, gi in zip(moment_residuals(m), moment_residuals(mg), g.g):
        assert rg == gi @ r @ inverse(gi)
    assert is_stable(mg) == is_stable(m) == inst.stable
    assert invariant_generators(mg) == invariant_generators(m)


@given(st.sampled_from(LIBRARY))
def test_library_stability_matches_oracle(inst):
    assert closure_stable(inst.quadruple) == inst.stable
