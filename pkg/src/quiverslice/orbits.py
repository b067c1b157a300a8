"""Conjugacy classes, the slice pattern in a Jordan basis, and flags.

Jordan basis convention: blocks ordered by decreasing size (eigenvalues in
the given order), vectors e_{k,i} listed block by block with k ascending, and
J sends e_{k,i} to e_{k-1,i}.  So J(λ) has its ones on the superdiagonal and
the "top" vector of block i is e_{λ_i, i}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactalg import (DimensionError, Matrix, column_basis, hstack, in_column_space, jordan_type_at, rank, solve_left,
                       to_scalar)
from .partitions import Partition, as_partition, dual


class ContractViolation(ValueError):
    pass


@dataclass(frozen=True)
class ConjClassData:
    E: tuple[Fraction, ...]
    mu_tilde: dict = field(hash=False)
    N: int = 0

    def __post_init__(self):
        E = tuple(to_scalar(e) for e in self.E)
        if len(set(E)) != len(E):
            raise ValueError("eigenvalues must be distinct")
        mt = {to_scalar(e): as_partition(p) for e, p in self.mu_tilde.items()}
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "mu_tilde", mt)
        total = sum(sum(p) for p in mt.values())
        if self.N and self.N != total:
            raise ValueError(f"partition sizes add to {total}, not N = {self.N}")
        object.__setattr__(self, "N", total)

    def same_as(self, other: "ConjClassData") -> bool:
        """Equality up to the order in which eigenvalues are listed."""
        mine = {e: p for e, p in self.mu_tilde.items() if p}
        theirs = {e: p for e, p in other.mu_tilde.items() if p}
        return mine == theirs


def block_offsets(lam: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for part in lam:
        out.append(acc)
        acc += part
    return out


def jordan_matrix(lam: Sequence[int], e=0) -> Matrix:
    """Direct sum of Jordan blocks J_{λ_i}(e)."""
    N = sum(lam)
    e = to_scalar(e)
    grid = [[Fraction(0)] * N for _ in range(N)]
    for off, part in zip(block_offsets(lam), lam):
        for t in range(part):
            grid[off + t][off + t] = e
            if t + 1 < part:
                grid[off + t][off + t + 1] = Fraction(1)
    return Matrix(N, N, [x for row in grid for x in row])


def canonical_element(c: ConjClassData) -> Matrix:
    blocks = [jordan_matrix(c.mu_tilde[e], e) for e in c.E if c.mu_tilde.get(e)]
    if not blocks:
        return Matrix.zeros(0, 0)
    return Matrix.block_diag(blocks)


def class_of(y: Matrix, spectrum: Sequence) -> ConjClassData:
    if not y.is_square():
        raise DimensionError("class_of needs a square matrix")
    E, mt = [], {}
    for e in dict.fromkeys(to_scalar(s) for s in spectrum):
        part = jordan_type_at(y, e)
        if part:
            E.append(e)
            mt[e] = part
    if sum(sum(p) for p in mt.values()) != y.rows:
        raise ValueError("spectrum incomplete: multiplicities do not add up to N")
    return ConjClassData(tuple(E), mt)


def class_dimension(c: ConjClassData) -> int:
    return c.N ** 2 - sum(x * x for p in c.mu_tilde.values() for x in dual(p))


def nilpotent_class(lam: Sequence[int]) -> ConjClassData:
    return ConjClassData((Fraction(0),), {Fraction(0): tuple(lam)})


# slice pattern --------------------------------------------------------------

def slice_positions(lam: Sequence[int]) -> list[tuple[int, int]]:
    """Matrix positions (row, col) that a slice element may change.

    Row e_{λ_i, i} may pick up e_{l, j} whenever l <= λ_i.
    """
    offs = block_offsets(lam)
    out = []
    for i, li in enumerate(lam):
        row = offs[i] + li - 1
        for j, lj in enumerate(lam):
            for l in range(1, min(li, lj) + 1):
                out.append((row, offs[j] + l - 1))
    return out


def slice_contains(lam: Sequence[int], y: Matrix) -> bool:
    N = sum(lam)
    if y.shape != (N, N):
        raise DimensionError(f"expected a {N}x{N} matrix, got {y.shape}")
    f = y - jordan_matrix(lam)
    allowed = set(slice_positions(lam))
    return all(f[r, c] == 0 for r in range(N) for c in range(N) if (r, c) not in allowed)


def slice_element(lam: Sequence[int], values: dict[tuple[int, int], Fraction]) -> Matrix:
    """J(λ) plus the given entries, which must sit on slice positions."""
    allowed = set(slice_positions(lam))
    if not set(values) <= allowed:
        raise ValueError("entries outside the slice pattern")
    y = jordan_matrix(lam)
    for (r, c), val in values.items():
        y = y.replace(r, c, y[r, c] + to_scalar(val))
    return y


@dataclass(frozen=True)
class SliceElement:
    """J(λ) + f with f on the slice pattern, in the Jordan basis of J(λ)."""
    lam: Partition
    mat: Matrix

    def __post_init__(self):
        object.__setattr__(self, "lam", as_partition(self.lam))
        if not slice_contains(self.lam, self.mat):
            raise ValueError("matrix is not on the slice through J(λ)")

    @property
    def f1(self) -> Matrix:
        return self.mat - jordan_matrix(self.lam)


def slice_f_partition(lam: Sequence[int]) -> Partition:
    out = []
    for k, part in enumerate(lam, start=1):
        out.extend([part] * (2 * k - 1))
    return as_partition(out)


def random_nilpotent_slice_element(lam: Sequence[int], rng: random.Random, lo: int = -3, hi: int = 3,
                                   density: float = 0.7) -> Matrix:
    """Nilpotent slice point: entries only flow from later to earlier blocks of a random order."""
    lam = tuple(lam)
    order = list(range(len(lam)))
    rng.shuffle(order)
    rank_of = {blk: r for r, blk in enumerate(order)}
    offs = block_offsets(lam)
    values = {}
    for i, li in enumerate(lam):
        row = offs[i] + li - 1
        for j, lj in enumerate(lam):
            if rank_of[i] >= rank_of[j]:
                continue
            for l in range(1, min(li, lj) + 1):
                if rng.random() < density:
                    values[(row, offs[j] + l - 1)] = rng.randint(lo, hi)
    return slice_element(lam, values)


def _companion_row(roots: Sequence[Fraction]) -> list[Fraction]:
    """Last-row entries a_1..a_k making J_k + (last row) have the given roots."""
    coeffs = [Fraction(1)]  # monic, lowest degree first after reversal below
    for r in roots:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for t, cf in enumerate(coeffs):
            nxt[t] += -r * cf
            nxt[t + 1] += cf
        coeffs = nxt
    # t^k - a_k t^{k-1} - ... - a_1 = t^k + coeffs[k-1] t^{k-1} + ... + coeffs[0]
    return [-coeffs[t] for t in range(len(roots))]


def random_slice_element_with_spectrum(lam: Sequence[int], E: Sequence, rng: random.Random,
                                       lo: int = -2, hi: int = 2, density: float = 0.6) -> Matrix:
    """Slice point whose eigenvalues are drawn from E.

    Each diagonal block is a companion matrix with chosen roots; off-diagonal
    entries only go from later to earlier blocks of a random order, so the
    characteristic polynomial is the product of the block ones.
    """
    lam = tuple(lam)
    E = [to_scalar(e) for e in E]
    order = list(range(len(lam)))
    rng.shuffle(order)
    rank_of = {blk: r for r, blk in enumerate(order)}
    offs = block_offsets(lam)
    values = {}
    for i, li in enumerate(lam):
        row = offs[i] + li - 1
        roots = [rng.choice(E) for _ in range(li)]
        for l, val in enumerate(_companion_row(roots), start=1):
            if val:
                values[(row, offs[i] + l - 1)] = val
        for j, lj in enumerate(lam):
            if rank_of[i] >= rank_of[j]:
                continue
            for l in range(1, min(li, lj) + 1):
                if rng.random() < density:
                    values[(row, offs[j] + l - 1)] = rng.randint(lo, hi)
    return slice_element(lam, values)


# flags ----------------------------------------------------------------------

@dataclass(frozen=True)
class Flag:
    """Nested subspaces F_1 ⊆ ... ⊆ F_n of Q^N, stored as canonical column bases."""
    steps: tuple[Matrix, ...]
    N: int

    @classmethod
    def from_spans(cls, spans: Sequence[Matrix], N: int) -> "Flag":
        steps = []
        for s in spans:
            if s.rows != N:
                raise DimensionError("flag step has the wrong ambient dimension")
            steps.append(column_basis(s) if s.cols else Matrix.zeros(N, 0))
        for lo, hi in zip(steps, steps[1:]):
            if not in_column_space(hi, lo):
                raise ValueError("flag steps are not nested")
        return cls(tuple(steps), N)

    @property
    def dims(self) -> tuple[int, ...]:
        sizes = [s.cols for s in self.steps]
        return tuple(b - a for a, b in zip([0] + sizes, sizes))


def _induced_ok(y: Matrix, sub: Matrix, target: Matrix) -> bool:
    if sub.cols == 0:
        return True
    image = y @ sub
    if target.cols == 0:
        return image.is_zero()
    return in_column_space(target, image)


def flag_compatible(y: Matrix, F: Flag, labels: Sequence, strict: bool = False) -> bool:
    """Strict: y F_i ⊆ F_{i-1}.  Otherwise y F_i ⊆ F_i and (y - b_i) F_i ⊆ F_{i-1}."""
    if len(labels) != len(F.steps):
        raise ValueError(f"{len(labels)} labels for {len(F.steps)} steps")
    zero = Matrix.zeros(F.N, 0)
    for i, step in enumerate(F.steps):
        below = F.steps[i - 1] if i else zero
        if strict:
            if not _induced_ok(y, step, below):
                return False
        else:
            if not _induced_ok(y, step, step):
                return False
            if not _induced_ok(y.shift(to_scalar(labels[i])), step, below):
                return False
    return True


def induced_quotient_action(y: Matrix, lower: Matrix, upper: Matrix) -> Matrix:
    """Matrix of y on upper/lower in a basis of complement vectors of upper."""
    N = y.rows
    comp = []
    current = lower
    for t in range(upper.cols):
        col = upper.submatrix(range(N), [t])
        cand = hstack([current, col], rows=N) if current.cols else col
        if rank(cand) > (rank(current) if current.cols else 0):
            comp.append(col)
            current = cand
    if not comp:
        return Matrix.zeros(0, 0)
    cmat = hstack(comp, rows=N)
    basis = hstack([cmat, lower], rows=N) if lower.cols else cmat
    coords = solve_left(basis, y @ cmat)
    if coords is None:
        raise ContractViolation("flag is not y-invariant")
    return coords.submatrix(range(cmat.cols), range(cmat.cols))


def regular_quotient_flag(y: Matrix, F: Flag) -> bool:
    """Each quotient F_i / F_{i-1} carries a single nilpotent Jordan block."""
    zero = Matrix.zeros(F.N, 0)
    for i, step in enumerate(F.steps):
        if not _induced_ok(y, step, step):
            raise ContractViolation("flag is not y-invariant")
        below = F.steps[i - 1] if i else zero
        act = induced_quotient_action(y, below, step)
        if act.rows == 0:
            continue
        if jordan_type_at(act, 0) != (act.rows,):
            return False
    return True
