"""Combinatorial transforms of type A quiver data.

Given dimension vectors (v, d) and a deformation c on the A_{n-1} quiver we
produce the GL(n) data (highest weight, weight, eigenvalue labels) and the
dimension vectors of the framed-at-one-vertex model.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactalg import to_scalar
from .partitions import Partition, as_partition, dual, kostka


class EmptyQuiverVariety(ValueError):
    """The weight a has a negative entry, so there is nothing to compute."""


@dataclass(frozen=True)
class QuiverInput:
    n: int
    v: tuple[int, ...]
    d: tuple[int, ...]
    c: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        c = tuple(to_scalar(x) for x in self.c) if self.c else (Fraction(0),) * (self.n - 1)
        object.__setattr__(self, "c", c)
        for name in ("v", "d", "c"):
            if len(getattr(self, name)) != self.n - 1:
                raise ValueError(f"{name} must have length n-1 = {self.n - 1}")
        if any(x < 0 for x in self.v + self.d):
            raise ValueError("dimensions must be non-negative")

    @property
    def vertices(self) -> int:
        return self.n - 1

    def is_undeformed(self) -> bool:
        return not any(self.c)

    def with_c(self, c: Sequence) -> "QuiverInput":
        return QuiverInput(self.n, self.v, self.d, tuple(c))


@dataclass(frozen=True)
class GLData:
    N: int
    m: int
    lambda_check: Partition
    lam: Partition
    a: tuple[int, ...]
    mu_check: Partition
    mu: Partition
    b: tuple[Fraction, ...]
    E: tuple[Fraction, ...]
    mu_tilde: dict = field(hash=False)
    P_roots: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.a)

    def mu_at(self, e) -> Partition:
        return self.mu_tilde.get(to_scalar(e), ())


@dataclass(frozen=True)
class MaffeiDims:
    v_tilde: tuple[int, ...]
    d_tilde: tuple[int, ...]


def cartan_matrix(size: int) -> list[list[int]]:
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(size)] for i in range(size)]


def _cv(v: Sequence[int]) -> list[int]:
    cm = cartan_matrix(len(v))
    return [sum(cm[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]


def lambda_check_of(q: QuiverInput) -> tuple[int, ...]:
    """(λ̌_1, ..., λ̌_n) with λ̌_i = d_i + ... + d_{n-1}; may end in zeros."""
    d = list(q.d) + [0]
    return tuple(sum(d[i:]) for i in range(q.n))


def weight_of(q: QuiverInput) -> tuple[int, ...]:
    """The GL(n) weight a_i = v_{n-1} + sum_{j>=i} (d - Cv)_j, with (d - Cv)_n = 0."""
    dcv = [dj - cj for dj, cj in zip(q.d, _cv(q.v))] + [0]
    last = q.v[-1]
    return tuple(last + sum(dcv[i:]) for i in range(q.n))


def eigen_labels(q: QuiverInput) -> tuple[Fraction, ...]:
    """b_1 = 0 and b_i = c_1 + ... + c_{i-1}."""
    out = [Fraction(0)]
    for ci in q.c:
        out.append(out[-1] + ci)
    return tuple(out)


def to_gl_data(q: QuiverInput) -> GLData:
    lam_check_raw = lambda_check_of(q)
    a = weight_of(q)
    if any(x < 0 for x in a):
        raise EmptyQuiverVariety(f"weight {a} has a negative entry for v={q.v}, d={q.d}")
    lam_check = as_partition(lam_check_raw)
    mu_check = as_partition(a)
    b = eigen_labels(q)
    E = tuple(dict.fromkeys(b))
    mu_tilde = {}
    for e in E:
        parts = as_partition(a[i] for i in range(q.n) if b[i] == e)
        mu_tilde[e] = dual(parts)
    return GLData(
        N=sum((j + 1) * dj for j, dj in enumerate(q.d)),
        m=sum(q.d),
        lambda_check=lam_check,
        lam=dual(lam_check),
        a=a,
        mu_check=mu_check,
        mu=dual(mu_check),
        b=b,
        E=E,
        mu_tilde=mu_tilde,
        P_roots=b,
    )


def is_nonempty(q: QuiverInput) -> bool:
    """Weight a occurs in the GL(n) module of highest weight λ̌.

    This is stronger than a >= 0: for instance n=3, d=(0,1), v=(1,0) gives
    a=(0,2,0) which is not a weight of the module with highest weight (1,1).
    """
    a = weight_of(q)
    if any(x < 0 for x in a):
        return False
    return kostka(as_partition(lambda_check_of(q)), a) > 0


def maffei_dims(q: QuiverInput) -> MaffeiDims:
    size = q.n - 1
    d_tilde = [0] * size
    d_tilde[0] = sum((j + 1) * dj for j, dj in enumerate(q.d))
    v_tilde = []
    for i in range(size):
        extra = sum((j - i) * q.d[j] for j in range(i + 1, size))
        v_tilde.append(q.v[i] + extra)
    return MaffeiDims(tuple(v_tilde), tuple(d_tilde))


def tilde_input(q: QuiverInput) -> QuiverInput:
    dims = maffei_dims(q)
    return QuiverInput(q.n, dims.v_tilde, dims.d_tilde, q.c)


def dimension_identity(q: QuiverInput) -> tuple[int, int]:
    """(ᵗv(2d - Cv), Σ λ̌_i² - Σ μ̌_i²)."""
    gl = to_gl_data(q)
    cv = _cv(q.v)
    lhs = sum(vi * (2 * di - ci) for vi, di, ci in zip(q.v, q.d, cv))
    rhs = sum(x * x for x in gl.lambda_check) - sum(x * x for x in gl.mu_check)
    return lhs, rhs


def quiver_from_partitions(lam: Sequence[int], mu: Sequence[int], n: int | None = None) -> QuiverInput:
    """Reverse transform: the (v, d) with c = 0 whose data is the pair (λ, μ).

    ``n`` defaults to the smallest value that fits both partitions.
    """
    lam = as_partition(lam)
    mu = as_partition(mu)
    if sum(lam) != sum(mu):
        raise ValueError("λ and μ must have the same size")
    lam_check = dual(lam)
    mu_check = dual(mu)
    if n is None:
        n = max(len(lam_check) + 1, len(mu_check), 2)
    if len(lam_check) >= n or len(mu_check) > n:
        raise ValueError("n too small for these partitions")
    lc = list(lam_check) + [0] * (n - len(lam_check))
    a = list(mu_check) + [0] * (n - len(mu_check))
    d = [lc[j] - lc[j + 1] for j in range(n - 1)]
    v = []
    acc = 0
    for i in range(n - 1):
        acc += lc[i] - a[i]
        v.append(acc)
    if any(x < 0 for x in v):
        raise ValueError(f"({lam}, {mu}) gives negative v; λ must be dominated by μ")
    return QuiverInput(n, tuple(v), tuple(d))
