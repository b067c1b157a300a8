"""Partitions, dominance, Kostka numbers and Pieri-rule decompositions.

Partitions are plain tuples of positive ints in weakly decreasing order.
Kostka numbers are computed by enumerating tableaux cell by cell, while
tensor decompositions go through the strip rules; the two engines share no
code so that comparing them is a real check.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Partition = tuple[int, ...]


class SizeError(ValueError):
    pass


def as_partition(parts: Iterable[int]) -> Partition:
    """Sort descending and drop zeros; rejects negative entries."""
    parts = [int(p) for p in parts]
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {parts}")
    return tuple(sorted((p for p in parts if p > 0), reverse=True))


def is_partition(parts: Sequence[int]) -> bool:
    return all(p >= 1 for p in parts) and all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))


def dual(p: Sequence[int]) -> Partition:
    if not p:
        return ()
    return tuple(sum(1 for x in p if x >= k) for k in range(1, p[0] + 1))


def dominates(p: Sequence[int], q: Sequence[int]) -> bool:
    """True iff p dominates q (every partial sum of p is at least q's)."""
    if sum(p) != sum(q):
        raise SizeError(f"|{tuple(p)}| != |{tuple(q)}|")
    sp = sq = 0
    for k in range(max(len(p), len(q))):
        sp += p[k] if k < len(p) else 0
        sq += q[k] if k < len(q) else 0
        if sq > sp:
            return False
    return True


def partitions(n: int, max_part: int | None = None, max_len: int | None = None) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        rest_len = None if max_len is None else max_len - 1
        for rest in partitions(n - first, first, rest_len):
            yield (first,) + rest


def elementary_symmetric(k: int, values: Sequence) -> Fraction:
    if k < 0:
        raise ValueError("k must be non-negative")
    # coefficients of prod (1 + v t), truncated at degree k
    coeffs = [Fraction(1)] + [Fraction(0)] * k
    for v in values:
        v = Fraction(v)
        for d in range(k, 0, -1):
            coeffs[d] += v * coeffs[d - 1]
    return coeffs[k]


def _cells(shape: Sequence[int]) -> list[tuple[int, int]]:
    return [(r, c) for r, length in enumerate(shape) for c in range(length)]


def _count_fillings(shape: Sequence[int], allowed) -> int:
    """Count SSYT of ``shape`` by filling cells in reading order.

    ``allowed`` is ``(letters, budget)``: entries range over ``range(letters)``
    and, when ``budget`` is a list, letter ``k`` may be used ``budget[k]`` times.
    """
    cells = _cells(shape)
    grid: dict[tuple[int, int], int] = {}
    letters, budget = allowed

    def rec(idx: int) -> int:
        if idx == len(cells):
            return 1
        r, c = cells[idx]
        lo = 0
        if c > 0:
            lo = max(lo, grid[(r, c - 1)])
        if r > 0:
            lo = max(lo, grid[(r - 1, c)] + 1)
        total = 0
        for letter in range(lo, letters):
            if budget is not None and budget[letter] == 0:
                continue
            grid[(r, c)] = letter
            if budget is not None:
                budget[letter] -= 1
            total += rec(idx + 1)
            if budget is not None:
                budget[letter] += 1
        grid.pop((r, c), None)
        return total

    return rec(0)


def kostka(shape: Sequence[int], weight: Sequence[int]) -> int:
    """Number of semistandard tableaux of ``shape`` with content ``weight``."""
    weight = [int(w) for w in weight]
    if any(w < 0 for w in weight):
        raise ValueError(f"negative weight entry in {weight}")
    if sum(shape) != sum(weight):
        return 0
    if len(shape) > len(weight):
        return 0
    return _kostka_cached(tuple(shape), tuple(weight))


def _remove_letter(shape: Partition, k: int) -> Iterator[Partition]:
    """Shapes left after deleting the cells holding the largest letter (k cells, at most one per column)."""
    rows = list(shape)

    def rec(i: int, left: int, acc: list[int]) -> Iterator[Partition]:
        if i == len(rows):
            if left == 0:
                yield tuple(x for x in acc if x > 0)
            return
        floor = rows[i + 1] if i + 1 < len(rows) else 0
        for take in range(min(left, rows[i] - floor) + 1):
            yield from rec(i + 1, left - take, acc + [rows[i] - take])

    yield from rec(0, k, [])


@lru_cache(maxsize=None)
def _kostka_cached(shape: Partition, weight: tuple[int, ...]) -> int:
    # tableaux are built one letter at a time: the cells of the largest letter
    # form a row-wise strip at the outer edge of the shape
    if not weight:
        return 0 if shape else 1
    if len(shape) > len(weight):
        return 0
    return sum(_kostka_cached(inner, weight[:-1]) for inner in _remove_letter(shape, weight[-1]))


def dim_gl(shape: Sequence[int], m: int) -> int:
    """Dimension of the GL(m) irreducible of highest weight ``shape``."""
    if len(shape) > m:
        return 0
    return _dim_cached(tuple(shape), m)


@lru_cache(maxsize=None)
def _dim_cached(shape: Partition, m: int) -> int:
    return _count_fillings(shape, (m, None))


# Pieri rules --------------------------------------------------------------

def _vertical_strips(shape: Partition, k: int, m: int) -> Iterator[Partition]:
    """Add k boxes, no two in the same row; keep at most m rows."""
    rows = list(shape) + [0] * max(0, m - len(shape))
    for chosen in combinations(range(len(rows)), k):
        new = rows[:]
        for r in chosen:
            new[r] += 1
        if all(new[i] >= new[i + 1] for i in range(len(new) - 1)):
            yield tuple(x for x in new if x > 0)


def _horizontal_strips(shape: Partition, k: int, m: int) -> Iterator[Partition]:
    """Add k boxes, no two in the same column; keep at most m rows."""
    rows = list(shape) + [0] * max(0, m - len(shape))

    def rec(i: int, left: int, acc: list[int]) -> Iterator[Partition]:
        if i == len(rows):
            if left == 0:
                yield tuple(x for x in acc if x > 0)
            return
        cap = left if i == 0 else min(left, rows[i - 1] - rows[i])
        for add in range(cap, -1, -1):
            yield from rec(i + 1, left - add, acc + [rows[i] + add])

    yield from rec(0, k, [])


EXTERIOR = "exterior"
SYMMETRIC = "symmetric"


def pieri_decompose(factors: Sequence[tuple[str, int]], m: int) -> dict[Partition, int]:
    """Irreducible multiplicities of a tensor product of exterior/symmetric powers of C^m."""
    if m < 1:
        raise ValueError("m must be positive")
    current: Counter = Counter({(): 1})
    for kind, degree in factors:
        if degree < 0:
            raise ValueError("negative degree")
        step = _vertical_strips if kind == EXTERIOR else _horizontal_strips
        if kind not in (EXTERIOR, SYMMETRIC):
            raise ValueError(f"unknown factor kind {kind!r}")
        nxt: Counter = Counter()
        for shape, mult in current.items():
            for new in step(shape, degree, m):
                if len(new) <= m:
                    nxt[new] += mult
        current = nxt
    return {k: v for k, v in sorted(current.items(), reverse=True) if v}
