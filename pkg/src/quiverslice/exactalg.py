"""Exact rational matrices and the bits of linear algebra everything else needs.

Scalars are :class:`fractions.Fraction`; a :class:`Matrix` is an immutable
row-major grid of them.  No floating point anywhere.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Scalar = Fraction


class DimensionError(ValueError):
    """Raised when matrix shapes do not fit together."""


def to_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point scalars are not accepted")
    return Fraction(value)


def format_scalar(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Matrix:
    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        data = tuple(to_scalar(e) for e in entries)
        if len(data) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, cols or 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), width, [e for r in rows for e in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise DimensionError("ragged columns")
        return cls(rows, len(columns), [columns[j][i] for i in range(rows) for j in range(len(columns))])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def scalar(cls, n: int, value) -> "Matrix":
        return cls(n, n, [value if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(n, n, [values[i] if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every block row must agree on heights."""
        out_rows = []
        for brow in blocks:
            height = brow[0].rows
            if any(b.rows != height for b in brow):
                raise DimensionError("block heights differ within a block row")
            for i in range(height):
                out_rows.append([e for b in brow for e in b.row(i)])
        if not out_rows:
            width = sum(b.cols for b in blocks[0]) if blocks else 0
            return cls(0, width)
        return cls.from_rows(out_rows)

    @classmethod
    def block_diag(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        grid = [[Fraction(0)] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    grid[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls(n, m, [e for r in grid for e in r])

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return self._data

    def __getitem__(self, key) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self._data[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def replace(self, i: int, j: int, value) -> "Matrix":
        data = list(self._data)
        data[i * self.cols + j] = to_scalar(value)
        return Matrix(self.rows, self.cols, data)

    # arithmetic -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self._data])

    def __mul__(self, k) -> "Matrix":
        k = to_scalar(k)
        return Matrix(self.rows, self.cols, [k * a for a in self._data])

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self._data, other._data
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            for j in range(m):
                s = Fraction(0)
                for t in range(k):
                    x = arow[t]
                    if x:
                        y = b[t * m + j]
                        if y:
                            s += x * y
                out.append(s)
        return Matrix(n, m, out)

    def __pow__(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionError("power of a non-square matrix")
        result = Matrix.identity(self.rows)
        base = self
        while e > 0:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def shift(self, value) -> "Matrix":
        """Return ``self - value * I``."""
        return self - Matrix.scalar(self.rows, value)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_scalar(e) for e in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    # linear algebra -------------------------------------------------------

    def rank(self) -> int:
        return rank(self)

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        return rref(self)

    def inverse(self) -> "Matrix":
        return inverse(self)


def hstack(mats: Sequence[Matrix], rows: int | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(rows or 0, 0)
    return Matrix.block([list(mats)])


def vstack(mats: Sequence[Matrix], cols: int | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(0, cols or 0)
    if any(m.cols != mats[0].cols for m in mats):
        raise DimensionError("column counts differ")
    return Matrix(sum(m.rows for m in mats), mats[0].cols, [e for m in mats for e in m.entries])


def rank(a: Matrix) -> int:
    """Rank by fraction-free (Bareiss) elimination on integer rows."""
    rows = []
    for i in range(a.rows):
        r = a.row(i)
        den = lcm(*(e.denominator for e in r)) if r else 1
        rows.append([int(e * den) for e in r])
    n, m = a.rows, a.cols
    rk = 0
    prev = 1
    for col in range(m):
        pivot = next((i for i in range(rk, n) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        p = rows[rk][col]
        for i in range(rk + 1, n):
            ri = rows[i]
            f = ri[col]
            rows[i] = [(p * ri[t] - f * rows[rk][t]) // prev for t in range(m)]
        prev = p
        rk += 1
        if rk == n:
            break
    return rk


def rref(a: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and the pivot columns."""
    grid = a.tolist()
    n, m = a.rows, a.cols
    pivots = []
    r = 0
    for col in range(m):
        pivot = next((i for i in range(r, n) if grid[i][col] != 0), None)
        if pivot is None:
            continue
        grid[r], grid[pivot] = grid[pivot], grid[r]
        inv = 1 / grid[r][col]
        grid[r] = [e * inv for e in grid[r]]
        for i in range(n):
            if i != r and grid[i][col] != 0:
                f = grid[i][col]
                grid[i] = [x - f * y for x, y in zip(grid[i], grid[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    return Matrix(n, m, [e for row in grid for e in row]), tuple(pivots)


def row_basis(a: Matrix) -> Matrix:
    """Canonical basis of the row space: the nonzero rows of the RREF."""
    red, piv = rref(a)
    return red.submatrix(range(len(piv)), range(a.cols))


def column_basis(a: Matrix) -> Matrix:
    """Canonical basis of the column space, as columns (transposed RREF)."""
    return row_basis(a.T).T


def nullspace(a: Matrix) -> Matrix:
    """Basis of ``{v : a v = 0}`` as the columns of the returned matrix."""
    red, piv = rref(a)
    free = [j for j in range(a.cols) if j not in piv]
    cols = []
    for f in free:
        v = [Fraction(0)] * a.cols
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -red[r, f]
        cols.append(v)
    return Matrix.from_columns(cols, a.cols)


def inverse(a: Matrix) -> Matrix:
    if not a.is_square():
        raise DimensionError("inverse of a non-square matrix")
    n = a.rows
    aug = Matrix.block([[a, Matrix.identity(n)]])
    red, piv = rref(aug)
    if piv[:n] != tuple(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return red.submatrix(range(n), range(n, 2 * n))


def is_invertible(a: Matrix) -> bool:
    return a.is_square() and rank(a) == a.rows


def solve_right(a: Matrix, m: Matrix) -> Matrix | None:
    """Solve ``X @ a == m`` for ``X``.

    ``a`` is r x s and ``m`` is t x s; the answer is t x r.  Among all
    solutions the one returned has zero in every free coordinate of the
    echelon form of ``a.T``, so the output is deterministic.  Returns None
    when some row of ``m`` is outside the row space of ``a``.
    """
    if a.cols != m.cols:
        raise DimensionError(f"solve_right: {a.shape} vs {m.shape}")
    r, s = a.shape
    t = m.rows
    if r == 0:
        return Matrix.zeros(t, 0) if m.is_zero() else None
    # X a = M  <=>  a.T X.T = M.T ; reduce [a.T | M.T] once.
    aug = Matrix.block([[a.T, m.T]]) if t else a.T
    red, piv = rref(aug)
    for p in piv:
        if p >= r:
            return None
    x_t = [[Fraction(0)] * t for _ in range(r)]
    for row, p in enumerate(piv):
        for k in range(t):
            x_t[p][k] = red[row, r + k]
    return Matrix(t, r, [x_t[i][k] for k in range(t) for i in range(r)])


def solve_left(a: Matrix, m: Matrix) -> Matrix | None:
    """Solve ``a @ X == m`` for ``X`` (transposed :func:`solve_right`)."""
    x = solve_right(a.T, m.T)
    return None if x is None else x.T


def in_column_space(basis: Matrix, vectors: Matrix) -> bool:
    """True iff every column of ``vectors`` lies in the span of ``basis``'s columns."""
    if vectors.cols == 0:
        return True
    if basis.cols == 0:
        return vectors.is_zero()
    return rank(hstack([basis, vectors])) == rank(basis)


def jordan_type_at(y: Matrix, e) -> tuple[int, ...]:
    """Jordan block sizes of ``y`` at eigenvalue ``e``, largest first.

    Uses ranks r_k of (y - e)^k: the number of blocks of size >= k is
    r_{k-1} - r_k.
    """
    if not y.is_square():
        raise DimensionError("jordan_type_at needs a square matrix")
    n = y.rows
    shifted = y.shift(to_scalar(e))
    ranks = [n]
    power = Matrix.identity(n)
    while True:
        power = power @ shifted
        rk = rank(power)
        if rk == ranks[-1]:
            break
        ranks.append(rk)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    # at_least[k-1] = #blocks of size >= k; its conjugate is the block list.
    parts = []
    for k in range(len(at_least)):
        exactly = at_least[k] - (at_least[k + 1] if k + 1 < len(at_least) else 0)
        parts.extend([k + 1] * exactly)
    return tuple(sorted(parts, reverse=True))


def generalized_eigenspace(y: Matrix, e) -> Matrix:
    """Columns spanning ker (y - e)^N."""
    n = y.rows
    return nullspace(y.shift(to_scalar(e)) ** n)


def spectral_projections(y: Matrix, spectrum: Sequence) -> dict[Fraction, Matrix]:
    """Projections onto the generalized eigenspaces along the others.

    Raises ValueError if the generalized eigenspaces for ``spectrum`` do not
    fill the whole space.
    """
    n = y.rows
    spectrum = [to_scalar(e) for e in spectrum]
    spaces = [(e, generalized_eigenspace(y, e)) for e in dict.fromkeys(spectrum)]
    if sum(s.cols for _, s in spaces) != n:
        raise ValueError("spectrum incomplete: generalized eigenspaces do not span")
    basis = hstack([s for _, s in spaces], rows=n)
    binv = inverse(basis)
    out = {}
    start = 0
    for e, s in spaces:
        mask = [1 if start <= k < start + s.cols else 0 for k in range(n)]
        out[e] = basis @ Matrix.diag(mask) @ binv
        start += s.cols
    return out
