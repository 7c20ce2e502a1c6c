"""Encoders that transport instances between matrix problems while
preserving and reflecting equivalence.

encode_quiver_pair: a quiver representation becomes a pair (M, N) with
M a direct sum of distinct scalar blocks (one per strip, vertices
duplicated on placement collisions with identity ties) and N carrying
the arrow matrices.  encode_poset_pair: a poset representation is first
completed with square block permutation matrices that simulate the
poset on the leading strip, then laid out as the pair (M, N) with
M_l = lI (+) J_2(lI) (+) ... (+) J_t(lI) and each block of the stacked
matrix placed at the intersection of the last horizontal strip of
J_i(lI) and the first vertical strip of J_j((r+1)I).  wild_gadget maps
a pair of square matrices to a 15r x 15r x 3 spatial matrix; tensor
embedding puts a spatial matrix into a cube moved by one matrix and its
inverse transpose.

Correctness of the encoders is enforced by oracle iff-tests, not
asserted by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (FieldMismatch, FieldTooSmall, NotCube, ShapeMismatch,
                     StructureMismatch)
from .fields import QQ, FieldSpec
from .matrix import Mat, invert
from .reps import Poset, PosetRep, QuiverRep
from .spatial import SpatialMatrix, SpatialWitness, transform_spatial


@dataclass(frozen=True)
class MatrixPair:
    """Square (M, N) of one size over one field, up to simultaneous
    similarity."""

    M: Mat
    N: Mat

    def __post_init__(self):
        if self.M.shape() != self.N.shape() or self.M.rows != self.M.cols:
            raise ShapeMismatch("matrix pair must be square of equal size")
        if self.M.field is not self.N.field:
            raise FieldMismatch("matrix pair over mixed fields")

    @property
    def size(self):
        return self.M.rows

    @property
    def field(self):
        return self.M.field

    def as_tuple(self):
        return (self.M, self.N)


# -- quiver encoder --------------------------------------------------------

@dataclass(frozen=True)
class QuiverPairLayout:
    """Strip plan of the quiver encoder: strip s belongs to vertex
    strip_vertex[s] and carries scalar s+1; arrows sit at placements
    (row strip, col strip); ties are identity blocks (duplicate, base)."""

    strip_vertex: tuple
    placements: tuple  # ((arrow_id, row_strip, col_strip), ...)
    ties: tuple        # ((new_strip, old_strip), ...)

    def strip_count(self):
        return len(self.strip_vertex)


def plan_quiver_encoding(X: QuiverRep) -> QuiverPairLayout:
    """Strip layout: every vertex gets a base strip; an arrow whose
    target position is occupied duplicates the target vertex (fresh
    strip, identity tie to the previous copy) until its block position
    (current copy of target, current copy of source) is free."""
    q = X.quiver
    strip_vertex = list(range(1, q.vertices + 1))
    cur = {v: v - 1 for v in range(1, q.vertices + 1)}
    taken = set()
    ties = []
    placements = []
    for aid, s, t in q.arrows:
        while True:
            pos = (cur[t], cur[s])
            if pos not in taken:
                placements.append((aid, pos[0], pos[1]))
                taken.add(pos)
                break
            new_strip = len(strip_vertex)
            strip_vertex.append(t)
            ties.append((new_strip, cur[t]))
            taken.add((new_strip, cur[t]))
            cur[t] = new_strip
    return QuiverPairLayout(tuple(strip_vertex), tuple(placements), tuple(ties))


def encode_quiver_pair(X: QuiverRep) -> MatrixPair:
    """The pair (M, N) whose simultaneous similarity classifies X.

    M is a direct sum of scalar blocks 1, 2, ... (one per strip); N
    carries each arrow matrix in its block position plus the identity
    ties of duplicated vertices.  Raises FieldTooSmall when GF(p) cannot
    provide as many distinct scalars as there are strips.
    """
    f = X.field
    layout = plan_quiver_encoding(X)
    k = layout.strip_count()
    if f.is_finite and k > f.p:
        raise FieldTooSmall(f"{k} strips need {k} distinct scalars, GF({f.p}) has {f.p}")
    sizes = [X.dims[v - 1] for v in layout.strip_vertex]
    offs = [0]
    for sz in sizes:
        offs.append(offs[-1] + sz)
    total = offs[-1]
    M = Mat.block_diag(f, [Mat.scalar_matrix(f, sizes[s], s + 1) for s in range(k)])
    N = Mat.zeros(f, total, total)
    amap = {aid: M_ for M_, (aid, _, _) in zip(X.mats, X.quiver.arrows)}
    for aid, rs, cs in layout.placements:
        N = N.set_block(offs[rs], offs[cs], amap[aid])
    for new, old in layout.ties:
        N = N.set_block(offs[new], offs[old], Mat.identity(f, sizes[new]))
    return MatrixPair(M, N)


# -- poset simulation and encoder -------------------------------------------

def simulation_step_perm(t: int, a: int, b: int, members) -> tuple:
    """Strip permutation (row -> column, 1-based) of one patching step:
    start from the anti-diagonal, and among the rows meeting columns
    a..b stably gather to the top those meeting the columns in members."""
    members = set(members)
    base = {row: t + 1 - row for row in range(1, t + 1)}
    window = [r for r in range(1, t + 1) if a <= base[r] <= b]
    gathered = [base[r] for r in window if base[r] in members]
    rest = [base[r] for r in window if base[r] not in members]
    new_cols = gathered + rest
    perm = dict(base)
    for r, c in zip(window, new_cols):
        perm[r] = c
    return tuple(perm[r] for r in range(1, t + 1))


def simulation_step_matrix(field: FieldSpec, widths, a: int, b: int, members) -> Mat:
    """The block permutation matrix of one simulation step."""
    return _perm_block_matrix(field, widths, simulation_step_perm(len(widths), a, b, members))


def _perm_block_matrix(field: FieldSpec, widths, perm) -> Mat:
    t = len(widths)
    total = sum(widths)
    offs = [0]
    for w in widths:
        offs.append(offs[-1] + w)
    M = Mat.zeros(field, total, total)
    row = 0
    for i in range(1, t + 1):
        j = perm[i - 1]
        M = M.set_block(row, offs[j - 1], Mat.identity(field, widths[j - 1]))
        row += widths[j - 1]
    return M


def _simulation_perms(poset: Poset):
    """Strip permutations of the matrices A_2, ..., A_r that shrink the
    simulated relation from the total order down to the poset, removing
    the lexicographically smallest violating pair first."""
    t = poset.size
    target = {(i, i) for i in range(1, t + 1)} | set(poset.relation)
    cur = {(i, j) for i in range(1, t + 1) for j in range(i, t + 1)}
    perms = []
    while cur != target:
        a, b = min(cur - target)
        members = {i for i in range(a, b) if i == a or poset.precedes(a, i)}
        rest = set(range(a, b + 1)) - members
        perms.append(simulation_step_perm(t, a, b, members))
        cur -= {(i, j) for i in members for j in rest if i < j}
    return perms


def simulate_poset_matrices(P: Poset, widths, field: FieldSpec = QQ) -> list:
    """The square block permutation matrices A_2, ..., A_r whose
    preservation restricts the admissible transformations on the leading
    strip to exactly the poset's moves.  A chain needs none."""
    widths = tuple(int(w) for w in widths)
    if len(widths) != P.size:
        raise StructureMismatch("one width per poset element required")
    return [_perm_block_matrix(field, widths, perm) for perm in _simulation_perms(P)]


@dataclass(frozen=True)
class StepOneLayout:
    """Block plan of the pair (M, N) encoding a stacked block matrix.

    heights[l-1][i-1] is the height of horizontal strip i of layer l
    (l = 1..r); widths are the vertical strip widths.  M is the direct
    sum of M_1, ..., M_{r+1} with M_l = lI (+) J_2(lI) (+) ... (+) J_t(lI)
    sized by the layer heights (widths for layer r+1).  positions maps
    (l, i, j) to the (row0, row1, col0, col1) span of block A_{lij} in N:
    the last horizontal strip of J_i(lI) meets the first vertical strip
    of J_j((r+1)I).
    """

    r: int
    t: int
    heights: tuple
    widths: tuple
    msize: int
    positions: dict

    @staticmethod
    def make(heights, widths) -> "StepOneLayout":
        heights = tuple(tuple(int(h) for h in row) for row in heights)
        widths = tuple(int(w) for w in widths)
        r = len(heights)
        t = len(widths)
        if any(len(row) != t for row in heights):
            raise StructureMismatch("each layer needs one height per strip")
        layer_off = []
        off = 0
        for l in range(1, r + 1):
            layer_off.append(off)
            off += sum(i * heights[l - 1][i - 1] for i in range(1, t + 1))
        last_off = off
        off += sum(j * widths[j - 1] for j in range(1, t + 1))
        msize = off
        positions = {}
        for l in range(1, r + 1):
            jrow = layer_off[l - 1]
            for i in range(1, t + 1):
                h = heights[l - 1][i - 1]
                row0 = jrow + (i - 1) * h
                jcol = last_off
                for j in range(1, t + 1):
                    w = widths[j - 1]
                    positions[(l, i, j)] = (row0, row0 + h, jcol, jcol + w)
                    jcol += j * w
                jrow += i * h
        return StepOneLayout(r, t, heights, widths, msize, positions)

    def scalar_labels(self):
        return tuple(range(1, self.r + 2))


def _block_jordan(field: FieldSpec, i: int, lam, h: int) -> Mat:
    """J_i(lam * I_h): i x i blocks, lam*I on the diagonal, I below."""
    total = i * h
    M = Mat.zeros(field, total, total)
    for u in range(i):
        M = M.set_block(u * h, u * h, Mat.scalar_matrix(field, h, lam))
        if u + 1 < i:
            M = M.set_block((u + 1) * h, u * h, Mat.identity(field, h))
    return M


def step_one_pair(field: FieldSpec, layout: StepOneLayout, blocks: dict) -> MatrixPair:
    """Assemble (M, N) from a layout and the blocks {(l, i, j): Mat}.

    Raises FieldTooSmall when GF(p) cannot tell the scalars 1..r+1 apart.
    """
    r, t = layout.r, layout.t
    if field.is_finite and r + 1 > field.p:
        raise FieldTooSmall(f"need {r + 1} distinct scalars, GF({field.p}) has {field.p}")
    parts = []
    for l in range(1, r + 1):
        parts.extend(_block_jordan(field, i, l, layout.heights[l - 1][i - 1])
                     for i in range(1, t + 1))
    parts.extend(_block_jordan(field, j, r + 1, layout.widths[j - 1])
                 for j in range(1, t + 1))
    M = Mat.block_diag(field, parts)
    N = Mat.zeros(field, layout.msize, layout.msize)
    for (l, i, j), blk in blocks.items():
        row0, row1, col0, col1 = layout.positions[(l, i, j)]
        if blk.shape() != (row1 - row0, col1 - col0):
            raise ShapeMismatch(f"block ({l},{i},{j}) has shape {blk.shape()}, "
                                f"expected {(row1 - row0, col1 - col0)}")
        N = N.set_block(row0, col0, blk)
    return MatrixPair(M, N)


def poset_pair_layout(X: PosetRep):
    """(layout, blocks) of the poset encoder: layer 1 holds X's matrix on
    its first strip (remaining strips of height 0), layers 2..r hold the
    simulation matrices."""
    f = X.field
    t = X.poset.size
    perms = _simulation_perms(X.poset)
    m = X.mat.rows
    heights = [tuple([m] + [0] * (t - 1))]
    for perm in perms:
        heights.append(tuple(X.widths[perm[i - 1] - 1] for i in range(1, t + 1)))
    layout = StepOneLayout.make(heights, X.widths)
    blocks = {}
    for j in range(1, t + 1):
        blocks[(1, 1, j)] = X.strip(j)
    for l, perm in enumerate(perms, start=2):
        for i in range(1, t + 1):
            j = perm[i - 1]
            if X.widths[j - 1]:
                blocks[(l, i, j)] = Mat.identity(f, X.widths[j - 1])
    return layout, blocks


def encode_poset_pair(X: PosetRep) -> MatrixPair:
    """The pair (M, N) whose simultaneous similarity classifies X."""
    layout, blocks = poset_pair_layout(X)
    return step_one_pair(X.field, layout, blocks)


# -- wildness gadget ---------------------------------------------------------

def wild_gadget(X: Mat, Y: Mat) -> SpatialMatrix:
    """The 15r x 15r x 3 spatial matrix whose equivalence class captures
    the pair (X, Y) up to simultaneous similarity.

    Axis-3 slices are block-diagonal triples: a rank-separating part
    (I_6r, 0, 0) / (0, I_2r, 0) / (0, 0, I_2r), an identity triple
    (I_r, I_r, I_r), and the carrier (I_4r, down-shift, X/Y blocks).
    """
    if X.shape() != Y.shape() or X.rows != X.cols:
        raise ShapeMismatch("gadget needs two square matrices of one size")
    if X.field is not Y.field:
        raise FieldMismatch("gadget matrices over mixed fields")
    f = X.field
    r = X.rows
    z2, z6 = Mat.zeros(f, 2 * r, 2 * r), Mat.zeros(f, 6 * r, 6 * r)
    i2, i6 = Mat.identity(f, 2 * r), Mat.identity(f, 6 * r)
    b = [Mat.block_diag(f, [i6, z2, z2]),
         Mat.block_diag(f, [z6, i2, z2]),
         Mat.block_diag(f, [z6, z2, i2])]
    mid = [Mat.identity(f, r)] * 3
    c1 = Mat.identity(f, 4 * r)
    c2 = Mat.zeros(f, 4 * r, 4 * r)
    for u in range(3):
        c2 = c2.set_block((u + 1) * r, u * r, Mat.identity(f, r))
    c3 = Mat.zeros(f, 4 * r, 4 * r).set_block(2 * r, 0, X).set_block(3 * r, r, Y)
    slices = [Mat.block_diag(f, [b[k], mid[k], [c1, c2, c3][k]]) for k in range(3)]
    return SpatialMatrix.from_slices(f, slices)


def gadget_similarity_witness(S: Mat) -> SpatialWitness:
    """Spatial witness carrying wild_gadget(X, Y) to
    wild_gadget(S^-1 X S, S^-1 Y S)."""
    f = S.field
    r = S.rows
    Sinv = invert(S)
    P = Mat.block_diag(f, [Mat.identity(f, 11 * r), Sinv, Sinv, Sinv, Sinv])
    Q = Mat.block_diag(f, [Mat.identity(f, 11 * r), S, S, S, S])
    return SpatialWitness(P.transpose(), Q, Mat.identity(f, 3))


# -- tensor embedding ---------------------------------------------------------

def tensor_embed(A: SpatialMatrix) -> SpatialMatrix:
    """The (m+n+q)-cube with A in block (1, 2, 3) and zeros elsewhere."""
    f = A.field
    m, n, q = A.shape()
    side = m + n + q
    data = [f.zero] * (side ** 3)
    for i in range(m):
        for j in range(n):
            for k in range(q):
                data[(i * side + (m + j)) * side + (m + n + k)] = A[i, j, k]
    return SpatialMatrix(side, side, side, f, data)


def tensor_transform(A: SpatialMatrix, C: Mat, p: int) -> SpatialMatrix:
    """Tensor action of type p: the first p axes move by C, the rest by
    the inverse transpose of C."""
    if A.m != A.n or A.n != A.q:
        raise NotCube(f"tensor action needs a cube, got {A.shape()}")
    if not 0 <= p <= 3:
        raise ShapeMismatch("tensor type must have 0 <= p <= 3")
    cvee = invert(C.transpose())
    mats = [C if axis < p else cvee for axis in range(3)]
    return transform_spatial(A, SpatialWitness(*mats))
