"""The map from quadruples on (v, d) to transversal quadruples on (ṽ, d̃).

Ṽ_i = V_i ⊕ ⊕_{1<=k<=j-i} D_j^(k), with Ṽ_0 = D̃_1 = ⊕_{1<=k<=j} D_j^(k).
Summands are ordered V first, then (j ascending, k ascending).  The blocks
of Ã_i : Ṽ_i → Ṽ_{i+1} and B̃_i : Ṽ_{i+1} → Ṽ_i are written down directly
from closed formulas; nothing here solves for them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .exactalg import Matrix, column_basis, hstack, in_column_space, inverse, nullspace, rank, solve_left
from .orbits import Flag, flag_compatible
from .partitions import elementary_symmetric
from .quiverdata import GLData, MaffeiDims, QuiverInput, maffei_dims, to_gl_data
from .quiverrep import ContractError, GroupElement, Quadruple, is_solution, is_stable, path_p, path_q

Label = tuple  # ("V", i) or ("D", j, k)


@dataclass(frozen=True)
class Summands:
    """Block layout of one Ṽ_i: labels, their sizes and starting offsets."""
    labels: tuple[Label, ...]
    sizes: tuple[int, ...]

    @property
    def dim(self) -> int:
        return sum(self.sizes)

    def offset(self, label: Label) -> int:
        idx = self.labels.index(label)
        return sum(self.sizes[:idx])

    def size(self, label: Label) -> int:
        return self.sizes[self.labels.index(label)]

    def span(self, label: Label) -> range:
        start = self.offset(label)
        return range(start, start + self.size(label))

    def d_labels(self) -> list[Label]:
        return [lab for lab in self.labels if lab[0] == "D"]


def summands(inp: QuiverInput, i: int) -> Summands:
    """Layout of Ṽ_i for 0 <= i <= n-1 (i = 0 is D̃_1)."""
    k = inp.n - 1
    labels, sizes = [], []
    if i >= 1:
        labels.append(("V", i))
        sizes.append(inp.v[i - 1])
    for j in range(i + 1, k + 1):
        for h in range(1, j - i + 1):
            labels.append(("D", j, h))
            sizes.append(inp.d[j - 1])
    return Summands(tuple(labels), tuple(sizes))


@dataclass(frozen=True)
class TildeQuadruple:
    input: QuiverInput
    dims: MaffeiDims
    A: tuple[Matrix, ...]
    B: tuple[Matrix, ...]
    layout: tuple[Summands, ...]

    def block_A(self, i: int, target: Label, source: Label) -> Matrix:
        return _block(self.A[i], self.layout[i + 1], target, self.layout[i], source)

    def block_B(self, i: int, target: Label, source: Label) -> Matrix:
        return _block(self.B[i], self.layout[i], target, self.layout[i + 1], source)

    def as_quadruple(self) -> Quadruple:
        """The same data viewed as a point over (ṽ, d̃)."""
        n = self.input.n
        tin = QuiverInput(n, self.dims.v_tilde, self.dims.d_tilde, self.input.c)
        k = n - 1
        p = [self.A[0]] + [Matrix.zeros(self.dims.v_tilde[i], 0) for i in range(1, k)]
        q = [self.B[0]] + [Matrix.zeros(0, self.dims.v_tilde[i]) for i in range(1, k)]
        return Quadruple(tin, self.A[1:], self.B[1:], p, q)


def _block(mat: Matrix, rows: Summands, target: Label, cols: Summands, source: Label) -> Matrix:
    return mat.submatrix(rows.span(target), cols.span(source))


def _assemble(rows: Summands, cols: Summands, blocks: dict) -> Matrix:
    grid = [[Fraction(0)] * cols.dim for _ in range(rows.dim)]
    for (target, source), blk in blocks.items():
        r0, c0 = rows.offset(target), cols.offset(source)
        for r in range(blk.rows):
            for c in range(blk.cols):
                grid[r0 + r][c0 + c] = blk[r, c]
    return Matrix(rows.dim, cols.dim, [e for row in grid for e in row])


def b_upper(c: Sequence[Fraction], i: int, l: int) -> Fraction:
    """b^i_l = c_{i+2} + ... + c_l (1-based c)."""
    return sum((c[t - 1] for t in range(i + 2, l + 1)), Fraction(0))


def p_poly(m: Quadruple, i: int, h1: int, j: int) -> Matrix:
    """The invariant P(i, h', j) : D_j → D_j entering the last row of B̃_i."""
    c = m.c
    dj = m.d[j - 1]
    top = i + h1 + 1
    out = path_q(m, top, j) @ path_p(m, j, top)
    for k in range(1, j - i - h1):
        args = [b_upper(c, i, l) for l in range(i + 2, i + h1 + k)]
        coeff = (-1) ** k * elementary_symmetric(k, args)
        if coeff:
            out = out + (path_q(m, top + k, j) @ path_p(m, j, top + k)) * coeff
    args = [b_upper(c, i, l) for l in range(i + 2, j)]
    const = (-1) ** (j - i - h1 - 1) * elementary_symmetric(j - i - h1, args)
    return out + Matrix.scalar(dj, const)


def _t_same(h1: int, h: int, ci: Fraction) -> Fraction:
    if h1 == 1 or not 2 <= h1 <= h + 1:
        return Fraction(0)
    return (-1) ** (h - h1 + 1) * comb(h - 1, h1 - 2) * ci ** (h - h1 + 1)


def _s_same(h1: int, h: int, ci: Fraction) -> Fraction:
    if h1 > h:
        return Fraction(0)
    return comb(h - 1, h1 - 1) * ci ** (h - h1)


def build_tilde(m: Quadruple, check: bool = True) -> TildeQuadruple:
    if check and not is_solution(m):
        raise ContractError("build_tilde needs a solution of the relations")
    inp = m.input
    n, k = inp.n, inp.n - 1
    layout = tuple(summands(inp, i) for i in range(n))
    A, B = [], []
    for i in range(n - 1):
        src, tgt = layout[i], layout[i + 1]
        ci = m.c[i]  # c_{i+1}
        a_blocks, b_blocks = {}, {}
        # Ã_i : Ṽ_i -> Ṽ_{i+1}
        if i >= 1:
            a_blocks[(("V", i + 1), ("V", i))] = m.x[i - 1]
        for lab in src.d_labels():
            _, j1, h1 = lab
            if h1 == 1:
                a_blocks[(("V", i + 1), lab)] = path_p(m, j1, i + 1)
            for tlab in tgt.d_labels():
                _, j, h = tlab
                if j == j1:
                    val = _t_same(h1, h, ci)
                    if val:
                        a_blocks[(tlab, lab)] = Matrix.scalar(inp.d[j - 1], val)
        # B̃_i : Ṽ_{i+1} -> Ṽ_i
        if i >= 1:
            b_blocks[(("V", i), ("V", i + 1))] = m.x_bar[i - 1]
        for tlab in src.d_labels():
            _, j, h = tlab
            if h == j - i:
                b_blocks[(tlab, ("V", i + 1))] = path_q(m, i + 1, j)
            for lab in tgt.d_labels():
                _, j1, h1 = lab
                if j1 != j:
                    if h == j - i and i + h1 + 1 <= j:
                        top = i + h1 + 1
                        b_blocks[(tlab, lab)] = path_q(m, top, j) @ path_p(m, j1, top)
                    continue
                blk = Matrix.scalar(inp.d[j - 1], _s_same(h1, h, ci))
                if h == j - i:
                    blk = blk + p_poly(m, i, h1, j)
                b_blocks[(tlab, lab)] = blk
        A.append(_assemble(tgt, src, a_blocks))
        B.append(_assemble(src, tgt, b_blocks))
    return TildeQuadruple(inp, maffei_dims(inp), tuple(A), tuple(B), layout)


# transversality -------------------------------------------------------------

def _deg_t(j1: int, h1: int, j: int, h: int) -> int:
    return min(h - h1 + 1, h - h1 + 1 + j1 - j)


def _deg_s(j1: int, h1: int, j: int, h: int) -> int:
    return min(h - h1, h - h1 + j1 - j)


def transversality_failures(t: TildeQuadruple, m: Quadruple | None = None) -> list[str]:
    """Every violated constraint, described in words; empty means transversal."""
    bad = []
    n = t.input.n
    for i in range(n - 1):
        src, tgt = t.layout[i], t.layout[i + 1]
        # first group, Ã_i
        for lab in src.d_labels():
            _, j1, h1 = lab
            for tlab in tgt.d_labels():
                _, j, h = tlab
                blk = t.block_A(i, tlab, lab)
                deg = _deg_t(j1, h1, j, h)
                if deg < 0 or (deg == 0 and (j1, h1) != (j, h + 1)):
                    if not blk.is_zero():
                        bad.append(f"A_{i} block {tlab}<-{lab} should vanish (degree {deg})")
                elif deg == 0 and blk != Matrix.identity(blk.rows):
                    bad.append(f"A_{i} block {tlab}<-{lab} should be the identity")
            if h1 != 1 and i + 1 <= n - 1 and ("V", i + 1) in tgt.labels:
                if not t.block_A(i, ("V", i + 1), lab).is_zero():
                    bad.append(f"A_{i} block V<-{lab} should vanish")
        if i >= 1:
            for tlab in tgt.d_labels():
                if not t.block_A(i, tlab, ("V", i)).is_zero():
                    bad.append(f"A_{i} block {tlab}<-V should vanish")
        # first group, B̃_i
        for tlab in src.d_labels():
            _, j, h = tlab
            for lab in tgt.d_labels():
                _, j1, h1 = lab
                blk = t.block_B(i, tlab, lab)
                deg = _deg_s(j1, h1, j, h)
                if deg < 0 or (deg == 0 and (j1, h1) != (j, h)):
                    if not blk.is_zero():
                        bad.append(f"B_{i} block {tlab}<-{lab} should vanish (degree {deg})")
                elif deg == 0 and blk != Matrix.identity(blk.rows):
                    bad.append(f"B_{i} block {tlab}<-{lab} should be the identity")
            if h != j - i and ("V", i + 1) in tgt.labels:
                if not t.block_B(i, tlab, ("V", i + 1)).is_zero():
                    bad.append(f"B_{i} block {tlab}<-V should vanish")
        if i >= 1:
            for lab in tgt.d_labels():
                if not t.block_B(i, ("V", i), lab).is_zero():
                    bad.append(f"B_{i} block V<-{lab} should vanish")
        # second group: off the last rows, B̃_i Ã_i restricted to D-blocks is the shift
        prod = t.B[i] @ t.A[i]
        for tlab in src.d_labels():
            _, j, h = tlab
            if h == j - i:
                continue
            for lab in src.d_labels():
                _, j1, h1 = lab
                blk = prod.submatrix(src.span(tlab), src.span(lab))
                want_id = j1 == j and h1 == h + 1
                if want_id and blk != Matrix.identity(blk.rows):
                    bad.append(f"(BA)_{i} block {tlab}<-{lab} should be the shift identity")
                if not want_id and not blk.is_zero():
                    bad.append(f"(BA)_{i} block {tlab}<-{lab} should vanish")
        # blocks prescribed by the original quadruple
        if m is not None:
            if i >= 1:
                if t.block_A(i, ("V", i + 1), ("V", i)) != m.x[i - 1]:
                    bad.append(f"A_{i} restricted to V is not x_{i}")
                if t.block_B(i, ("V", i), ("V", i + 1)) != m.x_bar[i - 1]:
                    bad.append(f"B_{i} restricted to V is not x̄_{i}")
            first = ("D", i + 1, 1)
            if first in src.labels:
                if t.block_A(i, ("V", i + 1), first) != m.p[i]:
                    bad.append(f"A_{i} on D_{i + 1}^(1) is not p_{i + 1}")
                if t.block_B(i, first, ("V", i + 1)) != m.q[i]:
                    bad.append(f"B_{i} into D_{i + 1}^(1) is not q_{i + 1}")
    return bad


def check_transversal(t: TildeQuadruple, m: Quadruple | None = None) -> bool:
    return not transversality_failures(t, m)


def extend_group_element(g: GroupElement, inp: QuiverInput) -> GroupElement:
    """ĝ: g_i on V_i and the identity on every D-summand of Ṽ_i."""
    blocks = []
    for i in range(1, inp.n):
        lay = summands(inp, i)
        parts = [g.g[i - 1]] + [Matrix.identity(s) for lab, s in zip(lay.labels, lay.sizes) if lab[0] == "D"]
        blocks.append(Matrix.block_diag(parts))
    return GroupElement(blocks)


# phi ------------------------------------------------------------------------

def _d_tilde_order(inp: QuiverInput) -> list[tuple[int, int, int]]:
    """Basis of D̃_1 as (j, k, copy) in summand order."""
    return [(j, h, r) for _, j, h in summands(inp, 0).d_labels() for r in range(inp.d[j - 1])]


def jordan_order(inp: QuiverInput) -> list[int]:
    """Position in D̃_1 of each Jordan-basis vector.

    Each copy r of D_j is a Jordan chain D_j^(j) → ... → D_j^(1) of length j.
    Chains are listed by decreasing j (then by copy), vectors by k ascending.
    """
    order = _d_tilde_order(inp)
    pos = {key: idx for idx, key in enumerate(order)}
    chains = sorted({(j, r) for j, _, r in order}, key=lambda jr: (-jr[0], jr[1]))
    return [pos[(j, h, r)] for j, r in chains for h in range(1, j + 1)]


def to_jordan_basis(inp: QuiverInput, y: Matrix) -> Matrix:
    idx = jordan_order(inp)
    return y.submatrix(idx, idx)


def phi_product(m: Quadruple, tilde: TildeQuadruple | None = None) -> Matrix:
    """B̃_0 Ã_0 on D̃_1, in the Jordan basis."""
    if tilde is None:
        tilde = build_tilde(m)
    return to_jordan_basis(m.input, tilde.B[0] @ tilde.A[0])


def _partial_sums(c: Sequence[Fraction]) -> list[Fraction]:
    """[0, b_1, b_2, ...] with b_l = c_1 + ... + c_l."""
    out = [Fraction(0)]
    for ci in c:
        out.append(out[-1] + ci)
    return out


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def p_prime_printed(m: Quadruple, h1: int, j: int) -> Matrix:
    """The diagonal correction in the form it is usually printed.

    Σ_{k=1}^{j-h'-1} (-1)^k σ_k(b_1..b_{h'-2+k}) q_{h'+k→j} p_{j→h'+k}
    + (-1)^{j-h'-1} σ_{j-h'}(b_1..b_{j-1}), taken as zero for h' = j.
    It disagrees with B̃_0Ã_0 once c ≠ 0; see :func:`p_prime`.
    """
    b = _partial_sums(m.c)
    out = Matrix.zeros(m.d[j - 1], m.d[j - 1])
    if h1 >= j:
        return out
    for k in range(1, j - h1):
        coeff = _sign(k) * elementary_symmetric(k, b[1:h1 - 1 + k])
        if coeff:
            out = out + (path_q(m, h1 + k, j) @ path_p(m, j, h1 + k)) * coeff
    const = _sign(j - h1 - 1) * elementary_symmetric(j - h1, b[1:j])
    return out + Matrix.scalar(m.d[j - 1], const)


def p_prime(m: Quadruple, h1: int, j: int) -> Matrix:
    """Diagonal correction on the last rows of δ̃_1γ̃_1, for 1 <= h' <= j.

    Σ_{k=1}^{j-h'} (-1)^k σ_k(b_1..b_{h'-2+k}) q_{h'+k→j} p_{j→h'+k}
    + (-1)^{j-h'} σ_{j-h'+1}(b_1..b_{j-1}).
    """
    b = _partial_sums(m.c)
    out = Matrix.zeros(m.d[j - 1], m.d[j - 1])
    for k in range(1, j - h1 + 1):
        coeff = _sign(k) * elementary_symmetric(k, b[1:max(h1 - 1 + k, 1)])
        if coeff:
            out = out + (path_q(m, h1 + k, j) @ path_p(m, j, h1 + k)) * coeff
    const = _sign(j - h1) * elementary_symmetric(j - h1 + 1, b[1:j])
    return out + Matrix.scalar(m.d[j - 1], const)


def _cross_term(m: Quadruple, h1: int, j: int, j1: int) -> Matrix:
    """Last-row block D_{j'}^(h') → D_j^(j) for j ≠ j'.

    q_{1→j} p_{j'→1} when h' = 1, otherwise
    Σ_{u=h'}^{min(j,j')} (-1)^{u-h'} C(u-2, h'-2) c_1^{u-h'} q_{u→j} p_{j'→u}.
    """
    if h1 == 1:
        return path_q(m, 1, j) @ path_p(m, j1, 1)
    out = Matrix.zeros(m.d[j - 1], m.d[j1 - 1])
    c1 = m.c[0]
    for u in range(h1, min(j, j1) + 1):
        coeff = _sign(u - h1) * comb(u - 2, h1 - 2) * c1 ** (u - h1)
        if coeff:
            out = out + (path_q(m, u, j) @ path_p(m, j1, u)) * coeff
    return out


def phi_closed_form(m: Quadruple, printed: bool = False) -> Matrix:
    """δ̃_1γ̃_1 from closed formulas, in the Jordan basis.

    Blocks D_j^(h+1) → D_j^(h) are identities and only the rows h = j carry
    anything else.  With ``printed=True`` the last rows are
    q_{h'→j} p_{j'→h'} + [j = j'] p_prime_printed, which is only right for c = 0.
    """
    inp = m.input
    lay = summands(inp, 0)
    blocks = {}
    for tlab in lay.d_labels():
        _, j, h = tlab
        for lab in lay.d_labels():
            _, j1, h1 = lab
            if j1 == j and h1 == h + 1:
                blocks[(tlab, lab)] = Matrix.identity(inp.d[j - 1])
            elif h == j:
                if printed:
                    if h1 > j:
                        continue
                    blk = path_q(m, h1, j) @ path_p(m, j1, h1)
                    if j1 == j:
                        blk = blk + p_prime_printed(m, h1, j)
                elif j1 == j:
                    blk = path_q(m, h1, j) @ path_p(m, j, h1) + p_prime(m, h1, j)
                else:
                    blk = _cross_term(m, h1, j, j1)
                blocks[(tlab, lab)] = blk
    return to_jordan_basis(inp, _assemble(lay, lay, blocks))


def phi(m: Quadruple) -> Matrix:
    """The slice point δ̃_1γ̃_1 attached to m, via the closed formulas."""
    if not is_solution(m):
        raise ContractError("phi needs a solution of the relations")
    return phi_closed_form(m)


def slice_partition(inp: QuiverInput) -> tuple[int, ...]:
    """λ: d_j Jordan chains of length j."""
    return tuple(j for j in range(inp.n - 1, 0, -1) for _ in range(inp.d[j - 1]))


def kernel_flag(tilde: TildeQuadruple) -> Flag:
    """F_l = ker(Ã_{l-1} ⋯ Ã_0) on D̃_1, l = 1..n-1, then F_n = D̃_1 (Jordan basis)."""
    inp = tilde.input
    N = tilde.layout[0].dim
    idx = jordan_order(inp)
    # change of basis: column t of the Jordan basis is D̃_1 basis vector idx[t]
    perm = Matrix(N, N, [1 if idx[c] == r else 0 for r in range(N) for c in range(N)])
    steps = []
    comp = Matrix.identity(N)
    for l in range(inp.n - 1):
        comp = tilde.A[l] @ comp
        steps.append(nullspace(comp @ perm))
    steps.append(Matrix.identity(N))
    return Flag.from_spans(steps, N)


def phi_tilde(m: Quadruple) -> tuple[Matrix, Flag]:
    """(φ(m), kernel flag), with the flag checked against the weight a."""
    if not is_stable(m):
        raise ContractError("phi_tilde needs a stable solution")
    tilde = build_tilde(m, check=False)
    y = phi(m)
    flag = kernel_flag(tilde)
    gl = to_gl_data(m.input)
    if flag.dims != gl.a:
        raise ContractError(f"stability violated: flag steps {flag.dims} differ from a = {gl.a}")
    if not flag_compatible(y, flag, gl.b, strict=False):
        raise ContractError("kernel flag is not compatible with the eigenvalue labels")
    return y, flag


# inverse for d = (N, 0, ..., 0) ---------------------------------------------

def _image_basis(mat: Matrix) -> Matrix:
    return column_basis(mat)


def inverse_special(y: Matrix, gl: GLData | None = None, n: int | None = None,
                    c: Sequence | None = None, flag: Flag | None = None) -> Quadruple:
    """A stable quadruple with d = (N, 0, ..., 0) whose φ is y.

    Without a flag: V_i = Im ∏_{k<=i}(y - b_k), x_i is (y - b_{i+1}) corestricted,
    x̄_i the inclusion, p_1 = y onto V_1, q_1 the inclusion.  With a y-stable flag
    F the quotients V_i = D/F_i are used instead.  The result is verified.
    """
    N = y.rows
    if gl is not None:
        n = gl.n
        b = list(gl.b)
    else:
        if n is None:
            raise ValueError("need either GL data or n")
        c = [Fraction(0)] * (n - 1) if c is None else [Fraction(x) for x in c]
        b = [Fraction(0)]
        for ci in c:
            b.append(b[-1] + ci)
    c = [b[i + 1] - b[i] for i in range(n - 1)]
    k = n - 1
    total = Matrix.identity(N)
    for bi in b:
        total = total @ y.shift(bi)
    if not total.is_zero():
        raise ValueError("y is not annihilated by ∏(y - b_i)")

    if flag is None:
        bases = []  # columns spanning V_i inside D
        comp = Matrix.identity(N)
        for i in range(k):
            comp = y.shift(b[i]) @ comp
            bases.append(_image_basis(comp))
        v = tuple(bs.cols for bs in bases)
        d = tuple([N] + [0] * (k - 1))

        def coords(basis: Matrix, vecs: Matrix) -> Matrix:
            sol = solve_left(basis, vecs)
            if sol is None:
                raise ValueError("vectors outside the expected subspace")
            return sol

        x = [coords(bases[i + 1], y.shift(b[i + 1]) @ bases[i]) for i in range(k - 1)]
        xb = [coords(bases[i], bases[i + 1]) for i in range(k - 1)]
        p1 = coords(bases[0], y) if v[0] else Matrix.zeros(0, N)
        q1 = bases[0] if v[0] else Matrix.zeros(N, 0)
    else:
        # V_i = D / F_i, realised through a complement basis
        if len(flag.steps) != n:
            raise ValueError("flag length must be n")
        for i in range(n):
            below = flag.steps[i - 1] if i else Matrix.zeros(N, 0)
            if not in_column_space(below, y.shift(b[i]) @ flag.steps[i]):
                raise ValueError("flag is not compatible with y and the labels")
        comps = [_complement(flag.steps[i], N) for i in range(k)]
        projs = [_quotient_map(flag.steps[i], comps[i], N) for i in range(k)]
        v = tuple(cm.cols for cm in comps)
        d = tuple([N] + [0] * (k - 1))
        x = [projs[i + 1] @ comps[i] for i in range(k - 1)]
        xb = [projs[i] @ y.shift(b[i + 1]) @ comps[i + 1] for i in range(k - 1)]
        p1 = projs[0]
        q1 = y @ comps[0]
    inp = QuiverInput(n, v, d, tuple(c))
    p = [p1] + [Matrix.zeros(v[i], 0) for i in range(1, k)]
    q = [q1] + [Matrix.zeros(0, v[i]) for i in range(1, k)]
    out = Quadruple(inp, x, xb, p, q)
    if not is_solution(out):
        raise ValueError("constructed quadruple does not satisfy the relations")
    if not is_stable(out):
        raise ValueError("constructed quadruple is not stable")
    return out


def _quotient_map(sub: Matrix, comp: Matrix, N: int) -> Matrix:
    """D → D/sub in the coordinates of the complement columns ``comp``."""
    full = hstack([comp, sub], rows=N)
    return inverse(full).submatrix(range(comp.cols), range(N))


def _complement(sub: Matrix, N: int) -> Matrix:
    """Standard basis vectors completing the columns of ``sub`` to a basis."""
    cols = []
    current = sub
    for t in range(N):
        e = Matrix(N, 1, [1 if r == t else 0 for r in range(N)])
        cand = hstack([current, e], rows=N) if current.cols else e
        if rank(cand) > (rank(current) if current.cols else 0):
            cols.append(e)
            current = cand
    return hstack(cols, rows=N) if cols else Matrix.zeros(N, 0)
