"""Quadruples (x, x̄, p, q) on the type A quiver and what we do with them.

Vertices are numbered 1..n-1 in every public function, to match the usual
indexing of the relations; the underlying lists are 0-based.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exactalg import DimensionError, Matrix, hstack, inverse, is_invertible, nullspace, rank, solve_right, vstack
from .quiverdata import QuiverInput


class ContractError(ValueError):
    """An operation was called outside its precondition."""


@dataclass(frozen=True)
class Quadruple:
    input: QuiverInput
    x: tuple[Matrix, ...]
    x_bar: tuple[Matrix, ...]
    p: tuple[Matrix, ...]
    q: tuple[Matrix, ...]

    def __post_init__(self):
        for name in ("x", "x_bar", "p", "q"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        check_shapes(self)

    @property
    def n(self) -> int:
        return self.input.n

    @property
    def v(self) -> tuple[int, ...]:
        return self.input.v

    @property
    def d(self) -> tuple[int, ...]:
        return self.input.d

    @property
    def c(self) -> tuple[Fraction, ...]:
        return self.input.c

    def replace(self, **changes) -> "Quadruple":
        data = dict(input=self.input, x=self.x, x_bar=self.x_bar, p=self.p, q=self.q)
        data.update(changes)
        return Quadruple(**data)


def check_shapes(m: Quadruple) -> None:
    v, d, k = m.v, m.d, m.n - 1
    if len(m.x) != k - 1 or len(m.x_bar) != k - 1 or len(m.p) != k or len(m.q) != k:
        raise DimensionError("wrong number of maps for this quiver")
    for i in range(k - 1):
        if m.x[i].shape != (v[i + 1], v[i]):
            raise DimensionError(f"x_{i + 1} has shape {m.x[i].shape}, expected {(v[i + 1], v[i])}")
        if m.x_bar[i].shape != (v[i], v[i + 1]):
            raise DimensionError(f"x̄_{i + 1} has shape {m.x_bar[i].shape}, expected {(v[i], v[i + 1])}")
    for i in range(k):
        if m.p[i].shape != (v[i], d[i]):
            raise DimensionError(f"p_{i + 1} has shape {m.p[i].shape}, expected {(v[i], d[i])}")
        if m.q[i].shape != (d[i], v[i]):
            raise DimensionError(f"q_{i + 1} has shape {m.q[i].shape}, expected {(d[i], v[i])}")


def zero_quadruple(inp: QuiverInput) -> Quadruple:
    v, d, k = inp.v, inp.d, inp.n - 1
    return Quadruple(
        inp,
        [Matrix.zeros(v[i + 1], v[i]) for i in range(k - 1)],
        [Matrix.zeros(v[i], v[i + 1]) for i in range(k - 1)],
        [Matrix.zeros(v[i], d[i]) for i in range(k)],
        [Matrix.zeros(d[i], v[i]) for i in range(k)],
    )


def _xxbar(m: Quadruple, i: int) -> Matrix:
    """x_{i-1} x̄_{i-1} on V_i (0-based i), zero when i is the first vertex."""
    if i == 0:
        return Matrix.zeros(m.v[0], m.v[0])
    return m.x[i - 1] @ m.x_bar[i - 1]


def _xbarx(m: Quadruple, i: int) -> Matrix:
    """x̄_i x_i on V_i (0-based i), zero at the last vertex."""
    if i == m.n - 2:
        return Matrix.zeros(m.v[i], m.v[i])
    return m.x_bar[i] @ m.x[i]


def moment_residuals(m: Quadruple) -> list[Matrix]:
    """r_i = x_{i-1}x̄_{i-1} + p_i q_i - c_i - x̄_i x_i for each vertex."""
    out = []
    for i in range(m.n - 1):
        r = _xxbar(m, i) + m.p[i] @ m.q[i] - _xbarx(m, i)
        out.append(r.shift(m.c[i]))
    return out


def is_solution(m: Quadruple) -> bool:
    return all(r.is_zero() for r in moment_residuals(m))


def _vertex(m: Quadruple, i: int) -> int:
    if not 1 <= i <= m.n - 1:
        raise IndexError(f"vertex {i} outside 1..{m.n - 1}")
    return i - 1


def path_p(m: Quadruple, j: int, i: int) -> Matrix:
    """p_{j→i} = x̄_i ⋯ x̄_{j-1} p_j : D_j → V_i, for i <= j."""
    jj, ii = _vertex(m, j), _vertex(m, i)
    if ii > jj:
        raise IndexError(f"path_p needs i <= j, got i={i}, j={j}")
    out = m.p[jj]
    for k in range(jj - 1, ii - 1, -1):
        out = m.x_bar[k] @ out
    return out


def path_q(m: Quadruple, j: int, i: int) -> Matrix:
    """q_{j→i} = q_i x_{i-1} ⋯ x_j : V_j → D_i, for j <= i."""
    jj, ii = _vertex(m, j), _vertex(m, i)
    if jj > ii:
        raise IndexError(f"path_q needs j <= i, got j={j}, i={i}")
    out = m.q[ii]
    for k in range(ii - 1, jj - 1, -1):
        out = out @ m.x[k]
    return out


def is_stable(m: Quadruple, check_relations: bool = True) -> bool:
    """Rank criterion: Im x_{i-1} + Σ_{j>=i} Im p_{j→i} = V_i at every vertex."""
    if check_relations and not is_solution(m):
        raise ContractError("stability criterion applies to solutions of the relations only")
    k = m.n - 1
    for i in range(1, k + 1):
        vi = m.v[i - 1]
        if vi == 0:
            continue
        blocks = [path_p(m, j, i) for j in range(i, k + 1)]
        if i >= 2:
            blocks.append(m.x[i - 2])
        blocks = [b for b in blocks if b.cols]
        if not blocks or rank(hstack(blocks)) < vi:
            return False
    return True


# group action ---------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    g: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(self.g))
        for gi in self.g:
            if not is_invertible(gi):
                raise ValueError("group element components must be invertible")


def act(g: GroupElement, m: Quadruple) -> Quadruple:
    k = m.n - 1
    if len(g.g) != k or any(g.g[i].shape != (m.v[i], m.v[i]) for i in range(k)):
        raise DimensionError("group element does not match the dimension vector")
    ginv = [inverse(gi) for gi in g.g]
    return Quadruple(
        m.input,
        [g.g[i + 1] @ m.x[i] @ ginv[i] for i in range(k - 1)],
        [g.g[i] @ m.x_bar[i] @ ginv[i + 1] for i in range(k - 1)],
        [g.g[i] @ m.p[i] for i in range(k)],
        [m.q[i] @ ginv[i] for i in range(k)],
    )


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -3, hi: int = 3) -> Matrix:
    return Matrix(rows, cols, [rng.randint(lo, hi) for _ in range(rows * cols)])


def random_invertible(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> Matrix:
    while True:
        g = random_matrix(rng, n, n, lo, hi)
        if is_invertible(g):
            return g


def random_group_element(rng: random.Random, v: Sequence[int]) -> GroupElement:
    return GroupElement([random_invertible(rng, vi) for vi in v])


def invariant_generators(m: Quadruple) -> dict[tuple[int, int, int, int, int], Fraction]:
    """Entries of q_{l→j} p_{i→l} keyed by (i, j, l, row, col); vertices 1-based."""
    k = m.n - 1
    out = {}
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            for l in range(1, min(i, j) + 1):
                prod = path_q(m, l, j) @ path_p(m, i, l)
                for r in range(prod.rows):
                    for c in range(prod.cols):
                        out[(i, j, l, r, c)] = prod[r, c]
    return out


# sampler --------------------------------------------------------------------

# The relation at vertex i reads  Σ_t L_t R_t = c_i  with the three terms
#   (x_{i-1}, x̄_{i-1}),  (p_i, q_i),  (-x̄_i, x_i).
# Fixing all left factors it is linear in any subset of right factors, and
# vice versa.  A plan picks, for every vertex, a side and a subset of unknowns
# on that side.  An unknown on an edge must be solved before the neighbouring
# relation is, so an edge may be used by only one of its endpoints.

_TERMS = (("x", -1, "xb", -1), ("p", 0, "q", 0), ("xb", 0, "x", 0))


def _term_vars(i: int, k: int) -> list[tuple[tuple[str, int], tuple[str, int], int]]:
    """(left var, right var, sign) of each term present at 0-based vertex i."""
    out = []
    for t, (ln, lo, rn, ro) in enumerate(_TERMS):
        idx = i + lo
        if t == 0 and i == 0:
            continue
        if t == 2 and i == k - 1:
            continue
        out.append(((ln, idx if ln != "p" else i), (rn, idx if rn != "q" else i), -1 if t == 2 else 1))
    return out


def _inner_dim(var: tuple[str, int], v: Sequence[int], d: Sequence[int], side: str) -> int:
    name, e = var
    if name in ("p", "q"):
        return d[e]
    # x_e: V_e -> V_{e+1}; x̄_e: V_{e+1} -> V_e
    if side == "right":
        return v[e] if name == "xb" else v[e + 1]
    return v[e] if name == "x" else v[e + 1]


def _edge(var: tuple[str, int]) -> int | None:
    return None if var[0] in ("p", "q") else var[1]


def sampler_plans(inp: QuiverInput) -> list[tuple]:
    """Feasible plans; the default (x̄ left to right, then q_{n-1}) comes first."""
    k = inp.n - 1
    v, d = inp.v, inp.d
    options = []
    for i in range(k):
        if v[i] == 0:
            options.append([None])
            continue
        terms = _term_vars(i, k)
        opts = []
        for side in ("left", "right"):
            for mask in range(1, 1 << len(terms)):
                chosen = tuple(t for b, t in enumerate(terms) if mask >> b & 1)
                unknown = tuple(t[0] if side == "left" else t[1] for t in chosen)
                if sum(_inner_dim(u, v, d, side) for u in unknown) >= v[i]:
                    opts.append((side, unknown))
        options.append(opts)
    default = tuple(
        None if v[i] == 0 else (("left", (("xb", i),)) if i < k - 1 else ("right", (("q", i),)))
        for i in range(k)
    )
    plans = []
    for plan in product(*options):
        if _solve_order(plan) is None:
            continue
        plans.append(plan)
    plans.sort(key=lambda pl: (pl != default, sum(len(s[1]) for s in pl if s), repr(pl)))
    return plans


def _solve_order(plan) -> list[int] | None:
    k = len(plan)
    before = {i: set() for i in range(k)}
    owner: dict[int, int] = {}
    for i, step in enumerate(plan):
        if step is None:
            continue
        for var in step[1]:
            e = _edge(var)
            if e is None:
                continue
            if owner.setdefault(e, i) != i:
                return None
            other = e + 1 if e == i else e
            before[other].add(i)
    order, done = [], set()
    while len(order) < k:
        ready = [i for i in range(k) if i not in done and before[i] <= done]
        if not ready:
            return None
        order.append(ready[0])
        done.add(ready[0])
    return order


def random_solution_right(rng: random.Random, a: Matrix, m: Matrix) -> Matrix | None:
    """A random X with X a = m: particular solution plus a random left-kernel part."""
    x0 = solve_right(a, m)
    if x0 is None:
        return None
    kernel = nullspace(a.T).T  # rows y with y a = 0
    if kernel.rows == 0:
        return x0
    return x0 + random_matrix(rng, x0.rows, kernel.rows) @ kernel


def _apply_plan(inp: QuiverInput, plan, rng: random.Random) -> Quadruple | None:
    z = zero_quadruple(inp)
    val: dict[tuple[str, int], Matrix] = {}
    for name, mats in (("x", z.x), ("xb", z.x_bar), ("p", z.p), ("q", z.q)):
        for e, mat in enumerate(mats):
            val[(name, e)] = random_matrix(rng, *mat.shape)
    k = inp.n - 1
    for i in _solve_order(plan):
        if plan[i] is None:
            continue
        side, unknown = plan[i]
        vi = inp.v[i]
        rhs = Matrix.scalar(vi, inp.c[i])
        coeff_l, coeff_r, pieces = [], [], []
        for lv, rv, sign in _term_vars(i, k):
            if (lv if side == "left" else rv) in unknown:
                if side == "left":
                    coeff_r.append(val[rv])
                    pieces.append((lv, sign))
                else:
                    coeff_l.append(val[lv] * sign)
                    pieces.append((rv, 1))
            else:
                rhs = rhs - (val[lv] @ val[rv]) * sign
        if side == "left":
            a = vstack(coeff_r, cols=vi)
            sol = random_solution_right(rng, a, rhs)
            if sol is None:
                return None
            col = 0
            for var, sign in pieces:
                w = val[var].cols
                val[var] = sol.submatrix(range(vi), range(col, col + w)) * sign
                col += w
        else:
            a = hstack(coeff_l, rows=vi)
            sol = random_solution_right(rng, a.T, rhs.T)
            if sol is None:
                return None
            sol = sol.T
            row = 0
            for var, _ in pieces:
                h = val[var].rows
                val[var] = sol.submatrix(range(row, row + h), range(vi))
                row += h
    out = Quadruple(
        inp,
        [val[("x", e)] for e in range(k - 1)],
        [val[("xb", e)] for e in range(k - 1)],
        [val[("p", e)] for e in range(k)],
        [val[("q", e)] for e in range(k)],
    )
    return out if is_solution(out) else None


def sample_solution(inp: QuiverInput, seed: int, attempts: int = 20,
                    plans: Sequence | None = None) -> tuple[Quadruple, bool] | None:
    """Random point of the solution set with its stability flag, or None."""
    if sum(inp.v) == 0:
        return zero_quadruple(inp), True
    if plans is None:
        plans = sampler_plans(inp)
    if not plans:
        return None
    rng = random.Random(seed)
    for attempt in range(attempts):
        plan = plans[0] if attempt < attempts // 2 else plans[attempt % len(plans)]
        m = _apply_plan(inp, plan, rng)
        if m is not None:
            return m, is_stable(m, check_relations=False)
    return None
