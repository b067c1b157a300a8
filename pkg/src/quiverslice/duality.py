"""Skew and symmetric (GL(m), GL(n)) duality as exact multiplicity counts.

Each identity pairs a Pieri-rule multiplicity with a Kostka number; the two
engines in :mod:`quiverslice.partitions` share no code.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator

from .partitions import EXTERIOR, SYMMETRIC, Partition, as_partition, dim_gl, dual, kostka, partitions, pieri_decompose


@dataclass(frozen=True)
class DualityInstance:
    m: int
    n: int
    weight: tuple[int, ...]
    lam: Partition

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if any(w < 0 for w in self.weight):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "weight", tuple(int(w) for w in self.weight))
        object.__setattr__(self, "lam", as_partition(self.lam))

    @property
    def N(self) -> int:
        return sum(self.weight)


def skew_multiplicity(inst: DualityInstance) -> tuple[int, int]:
    """(dim Hom_{GL(m)}(Λ^{a_1}V ⊗ ... ⊗ Λ^{a_n}V, V_λ), dim W_λ̌(a))."""
    hom = pieri_decompose([(EXTERIOR, a) for a in inst.weight], inst.m).get(inst.lam, 0)
    lam_check = dual(inst.lam)
    weight = kostka(lam_check, inst.weight) if len(lam_check) <= len(inst.weight) and len(inst.lam) <= inst.m else 0
    return hom, weight


def symmetric_multiplicity(inst: DualityInstance) -> tuple[int, int]:
    """(dim Hom_{GL(m)}(Sym^{c_1}V ⊗ ... ⊗ Sym^{c_k}V, V_λ), dim V_λ(c))."""
    hom = pieri_decompose([(SYMMETRIC, c) for c in inst.weight], inst.m).get(inst.lam, 0)
    weight = kostka(inst.lam, inst.weight) if len(inst.lam) <= inst.m else 0
    return hom, weight


def mixed_duality(inst: DualityInstance) -> tuple[int, int]:
    """Λ^{c_1}W ⊗ ... ⊗ Λ^{c_m}W → W_λ̌ over GL(n) against Sym^{c_1}V ⊗ ... → V_λ over GL(m).

    The two sides agree for λ inside the m x n box; outside it the left side
    is zero while the right side need not be.
    """
    if len(inst.weight) != inst.m:
        raise ValueError("the mixed identity needs one weight entry per GL(m) coordinate")
    lhs = pieri_decompose([(EXTERIOR, c) for c in inst.weight], inst.n).get(dual(inst.lam), 0)
    rhs = pieri_decompose([(SYMMETRIC, c) for c in inst.weight], inst.m).get(inst.lam, 0)
    if len(inst.lam) > inst.m:
        rhs = 0
    return lhs, rhs


def box_partitions(N: int, rows: int, cols: int) -> Iterator[Partition]:
    """Partitions of N with at most ``rows`` parts, each at most ``cols``."""
    yield from partitions(N, max_part=cols, max_len=rows)


def skew_checksum(m: int, n: int, N: int) -> tuple[int, int]:
    """(Σ_λ dim V_λ · dim W_λ̌ over the m×n box, C(mn, N))."""
    total = sum(dim_gl(lam, m) * dim_gl(dual(lam), n) for lam in box_partitions(N, m, n))
    return total, comb(m * n, N)


def symmetric_checksum(m: int, N: int) -> tuple[int, int]:
    """(Σ_{λ, at most m rows} (dim V_λ)², C(m² + N - 1, N))."""
    total = sum(dim_gl(lam, m) ** 2 for lam in partitions(N, max_len=m))
    return total, comb(m * m + N - 1, N)


def compositions(N: int, length: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        if N == 0:
            yield ()
        return
    for first in range(N, -1, -1):
        for rest in compositions(N - first, length - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class DualityRow:
    identity: str
    params: dict
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


def duality_table(max_m: int = 3, max_n: int = 3, max_N: int = 6) -> list[DualityRow]:
    """Every identity over m, n <= bounds and N <= max_N."""
    rows: list[DualityRow] = []
    for m in range(1, max_m + 1):
        for N in range(max_N + 1):
            lhs, rhs = symmetric_checksum(m, N)
            rows.append(DualityRow("symmetric-checksum", {"m": m, "N": N}, lhs, rhs))
            for c in compositions(N, m):
                for lam in partitions(N, max_len=m):
                    hom, wt = symmetric_multiplicity(DualityInstance(m, 1, c, lam))
                    rows.append(DualityRow("symmetric", {"m": m, "c": list(c), "lambda": list(lam)}, hom, wt))
        for n in range(1, max_n + 1):
            for N in range(max_N + 1):
                lhs, rhs = skew_checksum(m, n, N)
                rows.append(DualityRow("skew-checksum", {"m": m, "n": n, "N": N}, lhs, rhs))
                for a in compositions(N, n):
                    decomposition = pieri_decompose([(EXTERIOR, x) for x in a], m)
                    for lam in sorted(set(decomposition) | set(box_partitions(N, m, n)), reverse=True):
                        hom, wt = skew_multiplicity(DualityInstance(m, n, a, lam))
                        rows.append(DualityRow("skew", {"m": m, "n": n, "a": list(a), "lambda": list(lam)}, hom, wt))
                for c in compositions(N, m):
                    # W_λ̌ needs λ inside the m x n box
                    for lam in box_partitions(N, m, n):
                        lhs, rhs = mixed_duality(DualityInstance(m, n, c, lam))
                        rows.append(DualityRow("mixed", {"m": m, "n": n, "c": list(c), "lambda": list(lam)}, lhs, rhs))
    return rows
