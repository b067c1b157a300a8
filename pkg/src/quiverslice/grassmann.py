"""Lattices in Q(z)^m containing the standard lattice L_0 = Q[z]^m.

A lattice L ⊇ L_0 is determined by the finite-dimensional space L/L_0, which
sits inside the principal parts of rational vectors.  A principal part is a
dict ``{(e, i, k): coeff}`` meaning Σ coeff·(z - e)^{-k}·e_i with k >= 1.
Coordinates i are 0-based here; coweights b give the diagonal lattices
L_b = span{z^{-k} e_i : 0 <= k <= b_i} + L_0.

The graded basis of L_b/L_0 is z^{-k} e_i, listed i-major with k ascending.
With that ordering multiplication by z is the Jordan matrix with ones on the
superdiagonal, matching :mod:`quiverslice.orbits`.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterator, Sequence

from .exactalg import DimensionError, Matrix, inverse, is_invertible, rref, spectral_projections, to_scalar
from .orbits import (ConjClassData, Flag, SliceElement, class_of, flag_compatible, jordan_matrix, jordan_type_at,
                     random_nilpotent_slice_element)
from .partitions import Partition, as_partition, dominates, partitions

Key = tuple  # (e, i, k)
Coweight = tuple[int, ...]


def as_coweight(b: Sequence[int]) -> Coweight:
    b = tuple(int(x) for x in b)
    if any(x < 0 for x in b):
        raise ValueError(f"coweight entries must be non-negative: {b}")
    return b


# principal parts ------------------------------------------------------------

def _add(acc: dict, key: Key, value: Fraction) -> None:
    if value:
        new = acc.get(key, Fraction(0)) + value
        if new:
            acc[key] = new
        else:
            acc.pop(key, None)


def pp_add(u: dict, v: dict, scale=1) -> dict:
    out = dict(u)
    scale = to_scalar(scale)
    for key, val in v.items():
        _add(out, key, val * scale)
    return out


def pp_mul_z(u: dict) -> dict:
    """z·(z-e)^{-k} = (z-e)^{-(k-1)} + e (z-e)^{-k}; polynomial parts are dropped."""
    out: dict = {}
    for (e, i, k), val in u.items():
        if k > 1:
            _add(out, (e, i, k - 1), val)
        _add(out, (e, i, k), e * val)
    return out


def pp_mul_zinv(u: dict) -> dict:
    """Exact multiplication by z^{-1} (no polynomial part can appear)."""
    out: dict = {}
    for (e, i, k), val in u.items():
        if e == 0:
            _add(out, (e, i, k + 1), val)
            continue
        # z^{-1}(z-e)^{-k} = ((z-e)^{-k} - z^{-1}(z-e)^{-(k-1)}) / e
        factor = val
        for kk in range(k, 0, -1):
            _add(out, (e, i, kk), factor / e)
            factor = -factor / e
        _add(out, (Fraction(0), i, 1), factor)
    return out


def expansion_at_infinity(u: dict, i: int, t: int) -> Fraction:
    """Coefficient of z^{-t} e_i in the expansion of u in powers of 1/z."""
    total = Fraction(0)
    for (e, j, k), val in u.items():
        if j == i and k <= t:
            total += val * comb(t - 1, k - 1) * e ** (t - k)
    return total


# lattices -------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """L_0 plus the row span of ``basis`` over the ordered principal-part ``keys``.

    Construct through :meth:`from_vectors`, which reduces to a canonical
    form, so that equal lattices compare equal.
    """
    m: int
    keys: tuple[Key, ...]
    basis: Matrix

    @classmethod
    def from_vectors(cls, m: int, vectors: Sequence[dict]) -> "Lattice":
        for vec in vectors:
            for (_, i, k) in vec:
                if not 0 <= i < m or k < 1:
                    raise ValueError(f"bad principal-part key {(i, k)} for rank {m}")
        keys = sorted({key for vec in vectors for key in vec})
        if not keys or not vectors:
            return cls(m, (), Matrix.zeros(0, 0))
        grid = Matrix.from_rows([[vec.get(key, 0) for key in keys] for vec in vectors])
        red, piv = rref(grid)
        red = red.submatrix(range(len(piv)), range(len(keys)))
        used = [c for c in range(len(keys)) if any(red[r, c] for r in range(red.rows))]
        return cls(m, tuple(keys[c] for c in used), red.submatrix(range(red.rows), used))

    @classmethod
    def from_generators(cls, m: int, vectors: Sequence[dict]) -> "Lattice":
        """Smallest lattice containing L_0 and the given principal parts (closed under z)."""
        L = cls.from_vectors(m, vectors)
        while True:
            new = [pp_mul_z(v) for v in L.vectors()]
            if all(L.contains(v) for v in new):
                return L
            L = cls.from_vectors(m, L.vectors() + new)

    @classmethod
    def standard(cls, b: Sequence[int]) -> "Lattice":
        b = as_coweight(b)
        return cls.from_vectors(len(b), [{(Fraction(0), i, k): Fraction(1)} for i, k in graded_basis(b)])

    @property
    def dim(self) -> int:
        """dim L/L_0."""
        return self.basis.rows

    def vectors(self) -> list[dict]:
        return [{key: self.basis[r, c] for c, key in enumerate(self.keys) if self.basis[r, c]}
                for r in range(self.basis.rows)]

    def _pivots(self) -> list[int]:
        out = []
        for r in range(self.basis.rows):
            out.append(next(c for c in range(self.basis.cols) if self.basis[r, c]))
        return out

    def coordinates(self, vec: dict) -> list[Fraction] | None:
        """Coefficients of ``vec`` in the canonical basis, or None if it is outside."""
        if any(key not in self.keys for key in vec):
            return None
        coords = [vec.get(self.keys[p], Fraction(0)) for p in self._pivots()]
        for c in range(self.basis.cols):
            val = sum((coords[r] * self.basis[r, c] for r in range(self.basis.rows)), Fraction(0))
            if val != vec.get(self.keys[c], Fraction(0)):
                return None
        return coords

    def contains(self, vec: dict) -> bool:
        return not vec or self.coordinates(vec) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def z_matrix(self) -> Matrix:
        """Matrix of z on L/L_0; column r holds the coordinates of z·(basis row r)."""
        cols = []
        for vec in self.vectors():
            coords = self.coordinates(pp_mul_z(vec))
            if coords is None:
                raise ValueError("not a lattice: z·L is not contained in L")
            cols.append(coords)
        if not cols:
            return Matrix.zeros(0, 0)
        return Matrix.from_columns(cols, self.dim)

    def is_module(self) -> bool:
        return all(self.contains(pp_mul_z(v)) for v in self.vectors())

    def poles(self) -> tuple[Fraction, ...]:
        return tuple(sorted({e for (e, _, _) in self.keys}))


def rotate(L: Lattice, s) -> Lattice:
    """Loop rotation z ↦ s z: (z - e)^{-k} becomes s^{-k} (z - e/s)^{-k}."""
    s = to_scalar(s)
    if s == 0:
        raise ValueError("rotation needs s != 0")
    vecs = [{(e / s, i, k): val / s ** k for (e, i, k), val in v.items()} for v in L.vectors()]
    return Lattice.from_vectors(L.m, vecs)


def translate_monomial(L: Lattice, perm: Sequence[int], scales: Sequence) -> Lattice:
    """Apply the constant monomial matrix e_i ↦ scales[i]·e_{perm[i]} (keeps L_0 fixed)."""
    if sorted(perm) != list(range(L.m)) or len(scales) != L.m:
        raise ValueError("need a permutation and one nonzero scale per coordinate")
    scales = [to_scalar(x) for x in scales]
    if any(x == 0 for x in scales):
        raise ValueError("scales must be nonzero")
    vecs = [{(e, perm[i], k): val * scales[i] for (e, i, k), val in v.items()} for v in L.vectors()]
    return Lattice.from_vectors(L.m, vecs)


# graded basis and the z action ---------------------------------------------

def graded_basis(b: Sequence[int]) -> list[tuple[int, int]]:
    return [(i, k) for i, bi in enumerate(b) for k in range(1, bi + 1)]


def z_action(b: Sequence[int]) -> Matrix:
    """Multiplication by z on L_b/L_0 in the graded basis."""
    basis = graded_basis(as_coweight(b))
    index = {gk: t for t, gk in enumerate(basis)}
    N = len(basis)
    entries = [[0] * N for _ in range(N)]
    for (i, k), t in index.items():
        if k > 1:
            entries[index[(i, k - 1)]][t] = 1
    return Matrix(N, N, [x for row in entries for x in row])


def jordan_to_graded(b: Sequence[int]) -> Matrix:
    """Permutation P with (graded matrix) = P · (Jordan-basis matrix) · Pᵀ.

    Jordan blocks of sort(b) are matched to the coordinates of b taken by
    decreasing b_i, ties broken by index.
    """
    b = as_coweight(b)
    basis = graded_basis(b)
    index = {gk: t for t, gk in enumerate(basis)}
    coords = sorted((i for i in range(len(b)) if b[i]), key=lambda i: (-b[i], i))
    N = len(basis)
    perm = [0] * N
    t = 0
    for i in coords:
        for k in range(1, b[i] + 1):
            perm[t] = index[(i, k)]
            t += 1
    return Matrix(N, N, [1 if perm[c] == r else 0 for r in range(N) for c in range(N)])


def _graded_operator(s: SliceElement, b: Coweight) -> tuple[Matrix, Matrix]:
    lam = as_partition(b)
    if lam != s.lam:
        raise ValueError(f"coweight {b} does not sort to the slice partition {s.lam}")
    P = jordan_to_graded(b)
    A = P @ s.mat @ P.T
    return A, A - z_action(b)


def _embed(vec: Matrix, b: Coweight) -> dict:
    """Column vector on the graded basis of L_b/L_0 as a principal part at 0."""
    out: dict = {}
    for t, (i, k) in enumerate(graded_basis(b)):
        _add(out, (Fraction(0), i, k), vec[t, 0])
    return out


def _psi_images(A: Matrix, f1: Matrix, b: Coweight, E: Sequence) -> list[dict]:
    """Images of the graded basis vectors under Σ_e (1 + Σ_k (z-e)^{-k} f_1 (A-e)^{k-1}) pr_e."""
    basis = graded_basis(b)
    N = len(basis)
    tops = {t: i for t, (i, k) in enumerate(basis) if k == b[i]}
    for r in range(N):
        if r not in tops and any(f1[r, c] for c in range(N)):
            raise ValueError("f_1 must take values in the span of the top vectors z^{-b_i} e_i")
    try:
        projections = spectral_projections(A, E)
    except ValueError:
        raise ValueError("spectrum of z + f_1 is not contained in E") from None
    images = []
    for t in range(N):
        u = Matrix(N, 1, [1 if r == t else 0 for r in range(N)])
        out = _embed(u, b)
        for e, pr in projections.items():
            w = pr @ u
            k = 1
            while not w.is_zero():
                top = f1 @ w
                for r, i in tops.items():
                    if top[r, 0]:
                        term = {(e, i, k): top[r, 0]}
                        for _ in range(b[i]):
                            term = pp_mul_zinv(term)
                        out = pp_add(out, term)
                w = A.shift(e) @ w
                k += 1
                if k > N + 1:
                    raise ArithmeticError("series did not terminate")
        images.append(out)
    return images


def _combine(images: list[dict], vec: Matrix) -> dict:
    out: dict = {}
    for t, img in enumerate(images):
        if vec[t, 0]:
            out = pp_add(out, img, vec[t, 0])
    return out


def psi_global(s: SliceElement, b: Sequence[int], E: Sequence) -> Lattice:
    """The lattice (Σ_e (1 + Σ_k (z-e)^{-k} f_1 (z-e+f_1)^{k-1}) pr_e) L_b."""
    b = as_coweight(b)
    A, f1 = _graded_operator(s, b)
    images = _psi_images(A, f1, b, E)
    L = Lattice.from_vectors(len(b), images)
    if L.dim != sum(b):
        raise ArithmeticError(f"lattice has dim L/L_0 = {L.dim}, expected {sum(b)}")
    return L


def psi_local(s: SliceElement, b: Sequence[int]) -> Lattice:
    """The lattice (1 + Σ_k z^{-k} f_1 (z+f_1)^{k-1}) L_b for nilpotent z + f_1."""
    b = as_coweight(b)
    A, _ = _graded_operator(s, b)
    if A.rows and not (A ** A.rows).is_zero():
        raise ValueError("z + f_1 is not nilpotent; use psi_global")
    return psi_global(s, b, [0])


@dataclass(frozen=True)
class LatticeFlag:
    steps: tuple[Lattice, ...]
    a: tuple[int, ...]
    labels: tuple[Fraction, ...]

    def top(self) -> Lattice:
        return self.steps[-1]


def psi_tilde(s: SliceElement, F: Flag, b: Sequence[int], labels: Sequence, E: Sequence | None = None) -> LatticeFlag:
    """Lift an (x+f_1)-stable flag in the Jordan basis to a flag of lattices."""
    b = as_coweight(b)
    labels = tuple(to_scalar(x) for x in labels)
    if len(labels) != len(F.steps):
        raise ValueError(f"{len(labels)} labels for a flag with {len(F.steps)} steps")
    if not flag_compatible(s.mat, F, labels, strict=False):
        raise ValueError("flag is not compatible with the slice point and labels")
    A, f1 = _graded_operator(s, b)
    spectrum = list(dict.fromkeys(labels)) if E is None else list(E)
    images = _psi_images(A, f1, b, spectrum)
    P = jordan_to_graded(b)
    steps = []
    for step in F.steps:
        graded = P @ step
        vecs = [_combine(images, graded.submatrix(range(graded.rows), [c])) for c in range(graded.cols)]
        steps.append(Lattice.from_vectors(len(b), vecs))
    out = LatticeFlag(tuple(steps), F.dims, labels)
    check_lattice_flag(out)
    return out


def check_lattice_flag(flag: LatticeFlag) -> None:
    prev = Lattice.from_vectors(flag.steps[0].m if flag.steps else 0, [])
    for L, ai, label in zip(flag.steps, flag.a, flag.labels):
        if not L.contains_lattice(prev):
            raise ArithmeticError("lattice flag is not nested")
        if L.dim - prev.dim != ai:
            raise ArithmeticError("lattice flag steps have the wrong dimensions")
        for v in L.vectors():
            if not prev.contains(pp_add(pp_mul_z(v), v, -label)):
                raise ArithmeticError("(z - b_i) L_i is not contained in L_{i-1}")
        prev = L


# charts ---------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeChart:
    """L = (1+f) L_b with f_1 on the graded basis.

    ``outer`` holds the components of f_1 along e_i for coordinates with
    b_i = 0; those vectors lie in L_0, so they only matter for such b.
    """
    b: Coweight
    f1: Matrix
    outer: Matrix

    def is_graded(self) -> bool:
        return self.outer.is_zero()


def chart(L: Lattice, b: Sequence[int]) -> LatticeChart | None:
    b = as_coweight(b)
    if len(b) != L.m:
        raise DimensionError(f"coweight has {len(b)} entries, lattice has rank {L.m}")
    basis = graded_basis(b)
    N = len(basis)
    if L.dim != N:
        raise DimensionError(f"dim L/L_0 = {L.dim} but |b| = {N}")
    vecs = L.vectors()
    proj = Matrix.from_rows([[expansion_at_infinity(v, i, k) for (i, k) in basis] for v in vecs], cols=N)
    if N and not is_invertible(proj):
        return None
    pinv = inverse(proj) if N else Matrix.zeros(0, 0)
    # next coefficient after the top one, per coordinate
    nxt = Matrix.from_rows([[expansion_at_infinity(v, i, b[i] + 1) for i in range(L.m)] for v in vecs], cols=L.m)
    coeff = pinv @ nxt if N else Matrix.zeros(0, L.m)  # row s: f_1(u_s) along z^{-b_i} e_i
    index = {gk: t for t, gk in enumerate(basis)}
    zero_coords = [i for i in range(L.m) if b[i] == 0]
    f1 = [[Fraction(0)] * N for _ in range(N)]
    outer = [[Fraction(0)] * N for _ in zero_coords]
    for s_ in range(N):
        for i in range(L.m):
            val = coeff[s_, i]
            if b[i]:
                f1[index[(i, b[i])]][s_] = val
            else:
                outer[zero_coords.index(i)][s_] = val
    return LatticeChart(b, Matrix(N, N, [x for row in f1 for x in row]),
                        Matrix(len(zero_coords), N, [x for row in outer for x in row]))


def chart_coords(L: Lattice, b: Sequence[int]) -> Matrix | None:
    """f_1 (graded basis of L_b/L_0) with L = (1+f) L_b, or None off the chart."""
    ch = chart(L, b)
    if ch is None or not ch.is_graded():
        return None
    return ch.f1


def rotated_chart(f1: Matrix, b: Sequence[int], s) -> Matrix:
    """Chart of the rotated lattice: the entry from z^{-l}e_j to z^{-b_i}e_i gains s^{l-b_i-1}."""
    s = to_scalar(s)
    basis = graded_basis(as_coweight(b))
    N = len(basis)
    return Matrix(N, N, [f1[r, c] * s ** (basis[c][1] - basis[r][1] - 1) if f1[r, c] else 0
                         for r in range(N) for c in range(N)])


def in_slice_pattern(f1: Matrix, b: Sequence[int]) -> bool:
    """Entries from z^{-l}e_j into the top z^{-b_i}e_i vanish whenever l > b_i."""
    basis = graded_basis(as_coweight(b))
    for r, (i, k) in enumerate(basis):
        for c, (j, l) in enumerate(basis):
            if f1[r, c] and (k != b[i] or l > b[i]):
                return False
    return True


def orbit_type(L: Lattice, E: Sequence) -> ConjClassData:
    return class_of(L.z_matrix(), E)


def satisfies_polynomial(L: Lattice, roots: Sequence) -> bool:
    """P(z) = ∏ (z - root) kills L/L_0."""
    Z = L.z_matrix()
    acc = Matrix.identity(L.dim)
    for r in roots:
        acc = acc @ Z.shift(to_scalar(r))
    return acc.is_zero()


def coweights(N: int, m: int, bound: int | None = None) -> Iterator[Coweight]:
    bound = N if bound is None else bound
    for b in product(range(min(bound, N) + 1), repeat=m):
        if sum(b) == N:
            yield b


def classify_slice(L: Lattice, bound: int | None = None) -> Coweight | None:
    """The coweight b whose slice contains L, found by chart search."""
    found = []
    for b in coweights(L.dim, L.m, bound):
        ch = chart(L, b)
        if ch is not None and ch.is_graded() and in_slice_pattern(ch.f1, b):
            found.append(b)
    if len(found) > 1:
        raise ArithmeticError(f"lattice lies on several slices: {found}")
    return found[0] if found else None


# census ---------------------------------------------------------------------

@dataclass
class CensusReport:
    mu: Partition
    m: int
    samples: int
    tally: dict
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def decomposition_census(mu: Sequence[int], m: int, samples: int, seed: int) -> CensusReport:
    """Sample lattices of orbit type ⊴ μ and sort them into slice pieces.

    Each sample is ψ of a random nilpotent slice point for some λ ⊴ μ, moved
    by a random monomial matrix (which permutes the coordinate lattices).
    """
    mu = as_partition(mu)
    if len(mu) > m:
        raise ValueError("μ has more than m parts")
    N = sum(mu)
    lams = [lam for lam in partitions(N, max_len=m) if dominates(mu, lam)]
    rng = random.Random(seed)
    tally: Counter = Counter()
    failures = []
    for t in range(samples):
        lam = lams[t % len(lams)]
        s = None
        for _ in range(20):
            cand = SliceElement(lam, random_nilpotent_slice_element(lam, rng))
            if dominates(mu, jordan_type_at(cand.mat, 0)):
                s = cand
                break
        if s is None:
            s = SliceElement(lam, jordan_matrix(lam))
        b = tuple(lam) + (0,) * (m - len(lam))
        perm = list(range(m))
        rng.shuffle(perm)
        scales = [rng.choice([-2, -1, 1, 2, 3]) for _ in range(m)]
        L = translate_monomial(psi_local(s, b), perm, scales)
        expected = [0] * m
        for i in range(m):
            expected[perm[i]] = b[i]
        got = classify_slice(L)
        kind = orbit_type(L, [0]).mu_tilde.get(Fraction(0), ())
        if got != tuple(expected) or not dominates(mu, kind):
            failures.append({"lambda": list(lam), "expected": expected, "got": got, "orbit": list(kind)})
            continue
        tally[as_partition(got)] += 1
    return CensusReport(mu, m, samples, dict(sorted(tally.items(), reverse=True)), failures)
