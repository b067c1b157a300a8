import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quiverslice.exactalg import Matrix, inverse, jordan_type_at, nullspace
from quiverslice.library import load_library
from quiverslice.maffei import (TildeQuadruple, build_tilde, check_transversal, extend_group_element,
                                inverse_special, phi, phi_closed_form, phi_product, phi_tilde, slice_partition)
from quiverslice.orbits import Flag, jordan_matrix, slice_contains
from quiverslice.partitions import dominates, partitions
from quiverslice.quiverdata import QuiverInput, to_gl_data
from quiverslice.quiverrep import (ContractError, Quadruple, act, is_solution, is_stable, moment_residuals,
                                   random_group_element, random_invertible, sample_solution, zero_quadruple)

LIBRARY = load_library()
BY_ID = {inst.ident: inst for inst in LIBRARY}
STABLE = [inst for inst in LIBRARY if inst.stable]


def test_two_vertex_tilde_is_p_and_q():
    m = BY_ID["hand-n2-pq-zero"].quadruple
    t = build_tilde(m)
    assert t.A == (m.p[0],) and t.B == (m.q[0],)
    assert phi(m) == m.q[0] @ m.p[0]


def test_zero_point_gives_structural_nilpotent():
    m = zero_quadruple(QuiverInput(3, (1, 1), (1, 1)))
    t = build_tilde(m)
    assert check_transversal(t, m)
    assert all(r.is_zero() for r in moment_residuals(t.as_quadruple()))
    y = phi(m)
    assert jordan_type_at(y, 0) == (2, 1) == slice_partition(m.input)
    assert y == jordan_matrix((2, 1))


def test_broken_identity_block_is_detected():
    m = BY_ID["n3-v11-d11-c0"].quadruple
    t = build_tilde(m)
    A0 = t.A[0]
    # zero the first identity block D_2^(2) -> D_2^(1) of Ã_0
    lay0, lay1 = t.layout[0], t.layout[1]
    r, c = lay1.offset(("D", 2, 1)), lay0.offset(("D", 2, 2))
    broken = TildeQuadruple(t.input, t.dims, (A0.replace(r, c, 0),) + t.A[1:], t.B, t.layout)
    assert not check_transversal(broken, m)


def test_phi_tilde_weight_dims():
    m = BY_ID["n3-v11-d11-c0"].quadruple
    y, F = phi_tilde(m)
    assert F.dims == (1, 1, 1) == to_gl_data(m.input).a
    assert y == phi(m)


def test_phi_needs_solution():
    m = BY_ID["n3-v11-d11-c0"].quadruple
    bad = m.replace(p=[m.p[0] * 2] + list(m.p[1:]))
    with pytest.raises(ContractError):
        phi(bad)


def test_phi_tilde_needs_stability():
    with pytest.raises(ContractError):
        phi_tilde(BY_ID["n3-v11-d11-c0-unstable"].quadruple)


def test_inverse_zero_and_regular():
    m = inverse_special(Matrix.zeros(3, 3), n=2)
    assert m.v == (0,)
    assert phi(m).is_zero()
    m = inverse_special(jordan_matrix((4,)), n=4)
    assert m.v == (3, 2, 1)
    assert phi_tilde(m)[0] == jordan_matrix((4,))


def test_inverse_rejects_wrong_spectrum():
    with pytest.raises(ValueError):
        inverse_special(Matrix.diag([0, 1]), n=2)


@pytest.mark.parametrize("inst", LIBRARY, ids=lambda i: i.ident)
def test_main_lemma_on_library(inst):
    m = inst.quadruple
    t = build_tilde(m)
    tq = t.as_quadruple()
    assert check_transversal(t, m)
    assert is_solution(tq)
    assert is_stable(tq) == is_stable(m) == inst.stable
    assert phi_closed_form(m) == phi_product(m, t)


@pytest.mark.parametrize("inst", STABLE, ids=lambda i: i.ident)
def test_slice_landing_on_library(inst):
    m = inst.quadruple
    y = phi(m)
    gl = to_gl_data(m.input)
    assert slice_contains(slice_partition(m.input), y)
    for e in gl.E:
        assert dominates(gl.mu_tilde[e], jordan_type_at(y, e))


@given(st.sampled_from(LIBRARY), st.integers(0, 10 ** 6))
def test_equivariance(inst, seed):
    m = inst.quadruple
    g = random_group_element(random.Random(seed), m.v)
    mg = act(g, m)
    assert phi(mg) == phi(m)
    assert build_tilde(mg).as_quadruple() == act(extend_group_element(g, m.input), build_tilde(m).as_quadruple())


SAMPLED_SHAPES = [QuiverInput(3, (1, 2), (2, 1)), QuiverInput(4, (1, 1, 1), (1, 0, 1)),
                  QuiverInput(3, (1, 1), (1, 1), (Fraction(2, 3), Fraction(-1))),
                  QuiverInput(4, (0, 1, 1), (1, 1, 1), (Fraction(1), Fraction(1), Fraction(-3)))]


@given(st.sampled_from(SAMPLED_SHAPES), st.integers(0, 10 ** 6))
def test_closed_form_on_samples(inp, seed):
    got = sample_solution(inp, seed)
    if got is None:
        return
    m, stable = got
    assert phi_closed_form(m) == phi_product(m)
    assert check_transversal(build_tilde(m), m)


def test_printed_closed_form_agrees_when_undeformed():
    for inst in LIBRARY:
        if inst.quadruple.input.is_undeformed():
            assert phi_closed_form(inst.quadruple, printed=True) == phi_product(inst.quadruple)


@given(st.integers(1, 5).flatmap(lambda N: st.sampled_from(list(partitions(N)))), st.integers(0, 10 ** 6))
def test_inverse_round_trip(mu, seed):
    N = sum(mu)
    n = max(2, mu[0])
    g = random_invertible(random.Random(seed), N)
    y = g @ jordan_matrix(mu) @ inverse(g)
    m = inverse_special(y, n=n)
    assert is_solution(m) and is_stable(m)
    yy, F = phi_tilde(m)
    assert yy == y
    expected = Flag.from_spans([nullspace(y ** l) for l in range(1, n)] + [Matrix.identity(N)], N)
    assert F.steps == expected.steps


def test_inverse_with_flag():
    y = jordan_matrix((2, 1))
    F = Flag.from_spans([nullspace(y), Matrix.identity(3)], 3)
    m = inverse_special(y, n=2, flag=F)
    yy, FF = phi_tilde(m)
    assert yy == y and FF.steps == F.steps
