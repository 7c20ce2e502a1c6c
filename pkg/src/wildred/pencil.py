"""Kronecker canonical form of matrix pencils under (A, B) -> (PAQ, PBQ).

The decomposition peels minimal-index blocks off the pencil by exact
polynomial-kernel computations (smallest index first, so blocks emerge
already in canonical order), then splits the regular part into root
subspaces and reduces each to Jordan shape.  Every step accumulates the
invertible (P, Q) witness, and the final result is asserted against the
reconstructed canonical pencil entry by entry.

Jordan blocks are lower bidiagonal (identity below the diagonal).
A block (I_l, J_l(lam)) encodes the finite eigenvalue lam; (J_l(0), I_l)
encodes the eigenvalue at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (FieldMismatch, InternalCheckFailed, NonSplitSpectrum,
                     ShapeMismatch)
from .fields import FieldSpec
from .matrix import (Mat, col_span_basis, complete_basis, invert,
                     kernel_basis, rank, rref, solve_right)
from .poly import irreducible_factor, pencil_charpoly, roots_with_multiplicity


@dataclass(frozen=True)
class Pencil:
    A: Mat
    B: Mat

    def __post_init__(self):
        if self.A.shape() != self.B.shape():
            raise ShapeMismatch("pencil matrices must share a shape")
        if self.A.field is not self.B.field:
            raise FieldMismatch("pencil matrices must share a field")

    @property
    def field(self):
        return self.A.field

    def shape(self):
        return self.A.shape()

    def transpose(self) -> "Pencil":
        return Pencil(self.A.transpose(), self.B.transpose())


@dataclass(frozen=True)
class ProjPoint:
    """A point of the projective line: a field value or infinity (None)."""

    value: object = None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @staticmethod
    def finite(field: FieldSpec, v) -> "ProjPoint":
        return ProjPoint(field.coerce(v))

    @staticmethod
    def infinity() -> "ProjPoint":
        return ProjPoint(None)

    def sort_key(self, field: FieldSpec):
        if self.is_infinite:
            return (1, ())
        return (0, field.sort_key(self.value))

    def format(self, field: FieldSpec) -> str:
        return "inf" if self.is_infinite else field.format(self.value)


@dataclass(frozen=True)
class KroneckerData:
    """Complete invariant of a pencil orbit.

    right/left are ascending tuples of minimal indices (block (F_r, G_r)
    is (r-1) x r); eigen maps projective points to ascending size tuples.
    """

    right: tuple
    left: tuple
    eigen: tuple  # ((ProjPoint, sizes-tuple), ...) sorted by point
    m: int
    n: int
    field: FieldSpec

    @staticmethod
    def make(field: FieldSpec, right, left, eigen, m: int, n: int) -> "KroneckerData":
        right = tuple(sorted(right))
        left = tuple(sorted(left))
        if isinstance(eigen, dict):
            eigen = eigen.items()
        norm = tuple(sorted(((pt, tuple(sorted(sizes))) for pt, sizes in eigen if sizes),
                            key=lambda e: e[0].sort_key(field)))
        data = KroneckerData(right, left, norm, m, n, field)
        data.check_sizes()
        return data

    def check_sizes(self):
        lsum = sum(l for _, sizes in self.eigen for l in sizes)
        m = sum(r - 1 for r in self.right) + sum(self.left) + lsum
        n = sum(self.right) + sum(s - 1 for s in self.left) + lsum
        if (m, n) != (self.m, self.n):
            raise InternalCheckFailed(f"block sizes account for {m}x{n}, target {self.m}x{self.n}")

    def eigen_map(self) -> dict:
        return {pt: sizes for pt, sizes in self.eigen}

    def serialize(self) -> str:
        def mset(values):
            return "{" + ",".join(str(v) for v in values) + "}"
        eig = "; ".join(f"{pt.format(self.field)}:{mset(sizes)}" for pt, sizes in self.eigen)
        return f"right{mset(self.right)} left{mset(self.left)} eigen{{{eig}}}"


@dataclass(frozen=True)
class EquivWitness2:
    """Invertible (P, Q); the pair (A, B) is carried to (PAQ, PBQ)."""

    P: Mat
    Q: Mat

    def apply(self, pencil: Pencil) -> Pencil:
        return Pencil(self.P @ pencil.A @ self.Q, self.P @ pencil.B @ self.Q)

    def inverse(self) -> "EquivWitness2":
        return EquivWitness2(invert(self.P), invert(self.Q))

    def then(self, other: "EquivWitness2") -> "EquivWitness2":
        """Witness equal to applying self first, then other."""
        return EquivWitness2(other.P @ self.P, self.Q @ other.Q)


# -- canonical blocks ----------------------------------------------------

def f_block(field: FieldSpec, r: int) -> Mat:
    """(r-1) x r block [I | 0]."""
    z, o = field.zero, field.one
    return Mat(r - 1, r, field,
               [o if i == j else z for i in range(r - 1) for j in range(r)])


def g_block(field: FieldSpec, r: int) -> Mat:
    """(r-1) x r block [0 | I]."""
    z, o = field.zero, field.one
    return Mat(r - 1, r, field,
               [o if j == i + 1 else z for i in range(r - 1) for j in range(r)])


def jordan_block(field: FieldSpec, l: int, lam) -> Mat:
    """Lower-bidiagonal l x l Jordan block: lam on the diagonal, 1 below."""
    lam = field.coerce(lam)
    z, o = field.zero, field.one
    data = []
    for i in range(l):
        for j in range(l):
            if i == j:
                data.append(lam)
            elif i == j + 1:
                data.append(o)
            else:
                data.append(z)
    return Mat(l, l, field, data)


def _eigen_block_pair(field: FieldSpec, point: ProjPoint, l: int):
    if point.is_infinite:
        return jordan_block(field, l, field.zero), Mat.identity(field, l)
    return Mat.identity(field, l), jordan_block(field, l, point.value)


def reconstruct_pencil(data: KroneckerData) -> Pencil:
    """Canonical pencil: right blocks ascending, left blocks ascending,
    then eigen blocks by (point, size)."""
    f = data.field
    a_parts, b_parts = [], []
    for r in data.right:
        a_parts.append(f_block(f, r))
        b_parts.append(g_block(f, r))
    for s in data.left:
        a_parts.append(f_block(f, s).transpose())
        b_parts.append(g_block(f, s).transpose())
    for pt, sizes in data.eigen:
        for l in sizes:
            ab, bb = _eigen_block_pair(f, pt, l)
            a_parts.append(ab)
            b_parts.append(bb)
    A = Mat.block_diag(f, a_parts) if a_parts else Mat.zeros(f, 0, 0)
    B = Mat.block_diag(f, b_parts) if b_parts else Mat.zeros(f, 0, 0)
    # direct sums of rectangular blocks can miss empty trailing space
    if A.shape() != (data.m, data.n):
        A = _pad(A, data.m, data.n)
        B = _pad(B, data.m, data.n)
    return Pencil(A, B)


def _pad(M: Mat, m: int, n: int) -> Mat:
    out = Mat.zeros(M.field, m, n)
    return out.set_block(0, 0, M)


def direct_sum_pencil(p1: Pencil, p2: Pencil) -> Pencil:
    f = p1.field
    return Pencil(Mat.block_diag(f, [p1.A, p2.A]), Mat.block_diag(f, [p1.B, p2.B]))


# -- decomposition -------------------------------------------------------

def _poly_kernel_vector(A: Mat, B: Mat, k: int):
    """A degree-k polynomial kernel vector of the pencil, as segments
    (v_0..v_k), or None.  Kernel of the block-bidiagonal system
    A v_0 = 0, A v_j + B v_{j-1} = 0, B v_k = 0."""
    f = A.field
    m, n = A.rows, A.cols
    S = Mat.zeros(f, (k + 2) * m, (k + 1) * n)
    for j in range(k + 1):
        S = S.set_block(j * m, j * n, A)
        S = S.set_block((j + 1) * m, j * n, B)
    basis = kernel_basis(S)
    if not basis:
        return None
    v = basis[0]
    return [v.submatrix(i * n, (i + 1) * n, 0, 1) for i in range(k + 1)]


def _extract_right_once(A: Mat, B: Mat):
    """Split the smallest right minimal index block off (A, B).

    Returns (r, P, Q, A', B') with PAQ = F_r (+) A', PBQ = G_r (+) B',
    or None when the pencil has no right minimal indices.
    """
    f = A.field
    m, n = A.rows, A.cols
    found = None
    for k in range(n):
        segs = _poly_kernel_vector(A, B, k)
        if segs is not None:
            found = (k, segs)
            break
    if found is None:
        return None
    k, segs = found
    # sign-alternated chain makes the leading blocks exactly (F, G)
    w = [segs[i].scale(f.one if i % 2 == 0 else f.neg(f.one)) for i in range(k + 1)]
    z = [(A @ w[i]) for i in range(1, k + 1)]
    Q0 = complete_basis(f, [w[i] for i in range(k, -1, -1)], n)
    if k > 0:
        P0 = invert(complete_basis(f, [z[i] for i in range(k - 1, -1, -1)], m))
    else:
        P0 = Mat.identity(f, m)
    A1 = P0 @ A @ Q0
    B1 = P0 @ B @ Q0
    mp, np_ = m - k, n - k - 1
    F, G = f_block(f, k + 1), g_block(f, k + 1)
    if A1.submatrix(0, k, 0, k + 1) != F or B1.submatrix(0, k, 0, k + 1) != G:
        raise InternalCheckFailed("leading minimal-index block malformed")
    if not A1.submatrix(k, m, 0, k + 1).is_zero() or not B1.submatrix(k, m, 0, k + 1).is_zero():
        raise InternalCheckFailed("sub-block below minimal-index block not zero")
    X = A1.submatrix(0, k, k + 1, n)
    Y = B1.submatrix(0, k, k + 1, n)
    Ares = A1.submatrix(k, m, k + 1, n)
    Bres = B1.submatrix(k, m, k + 1, n)
    if k > 0 and np_ > 0:
        U, V = _solve_coupling(f, k, Ares, Bres, X, Y)
        corrP = Mat.identity(f, m).set_block(0, k, U)
        corrQ = Mat.identity(f, n).set_block(0, k + 1, -V)
        P0 = corrP @ P0
        Q0 = Q0 @ corrQ
        A1 = corrP @ A1 @ corrQ
        B1 = corrP @ B1 @ corrQ
        if not A1.submatrix(0, k, k + 1, n).is_zero() or not B1.submatrix(0, k, k + 1, n).is_zero():
            raise InternalCheckFailed("coupling block not cleared")
        Ares = A1.submatrix(k, m, k + 1, n)
        Bres = B1.submatrix(k, m, k + 1, n)
    return k + 1, P0, Q0, Ares, Bres


def _solve_coupling(f: FieldSpec, k: int, Ares: Mat, Bres: Mat, X: Mat, Y: Mat):
    """Solve F V - U Ares = X, G V - U Bres = Y for U (k x m'), V ((k+1) x n').

    Always solvable when k is the minimal right index of the full pencil
    (classical splitting lemma); solvability is asserted.
    """
    mp, np_ = Ares.rows, Ares.cols
    nU = k * mp
    nV = (k + 1) * np_
    rows = []
    rhs = []
    # (F V)[i][j] = V[i][j]; (G V)[i][j] = V[i+1][j]
    for i in range(k):
        for j in range(np_):
            row = [f.zero] * (nU + nV)
            row[nU + i * np_ + j] = f.one
            for t in range(mp):
                row[i * mp + t] = f.neg(Ares[t, j])
            rows.append(row)
            rhs.append(X[i, j])
    for i in range(k):
        for j in range(np_):
            row = [f.zero] * (nU + nV)
            row[nU + (i + 1) * np_ + j] = f.one
            for t in range(mp):
                row[i * mp + t] = f.neg(Bres[t, j])
            rows.append(row)
            rhs.append(Y[i, j])
    Msys = Mat.from_rows(f, rows) if rows else Mat.zeros(f, 0, nU + nV)
    bvec = Mat(len(rhs), 1, f, rhs)
    sol = solve_right(Msys, bvec)
    if sol is None:
        raise InternalCheckFailed("minimal-index coupling system unsolvable")
    U = Mat(k, mp, f, [sol[i * mp + t, 0] for i in range(k) for t in range(mp)])
    V = Mat(k + 1, np_, f, [sol[nU + i * np_ + j, 0] for i in range(k + 1) for j in range(np_)])
    return U, V


def _preimage_basis(M: Mat, W: Mat):
    """Basis (list of columns) of {v : M v in colspan(W)}."""
    f = M.field
    if W.cols == 0:
        return kernel_basis(M)
    stacked = M.hstack(-W)
    vecs = [v.submatrix(0, M.cols, 0, 1) for v in kernel_basis(stacked)]
    if not vecs:
        return []
    return col_span_basis(Mat.from_cols(f, vecs))


def _root_subspace(A: Mat, B: Mat, point: ProjPoint):
    """Basis of the root subspace of a regular pencil at a point.

    Finite lam: chains of ((B - lam A), A); infinity: chains of (A, B).
    """
    f = A.field
    if point.is_infinite:
        M0, step = A, B
    else:
        M0, step = B - A.scale(point.value), A
    basis = kernel_basis(M0)
    while True:
        if not basis:
            return []
        W = Mat.from_cols(f, [step @ v for v in basis])
        nxt = _preimage_basis(M0, W)
        if len(nxt) == len(basis):
            return nxt
        basis = nxt


def _nilpotent_chains(N: Mat):
    """Jordan chain basis of a nilpotent matrix.

    Returns (S, sizes) with S^-1 N S lower-bidiagonal nilpotent Jordan,
    block sizes ascending.
    """
    f = N.field
    d = N.rows
    if d == 0:
        return Mat.identity(f, 0), []
    kernels = [Mat.zeros(f, d, 0)]
    power = Mat.identity(f, d)
    t = None
    for j in range(1, d + 1):
        power = N @ power
        kb = kernel_basis(power)
        kernels.append(Mat.from_cols(f, kb) if kb else Mat.zeros(f, d, 0))
        if len(kb) == d:
            t = j
            break
    if t is None:
        raise InternalCheckFailed("matrix is not nilpotent")
    heads = []  # (level, vector), discovery order
    carried = []
    for j in range(t, 0, -1):
        base_cols = [kernels[j - 1].col_vec(c) for c in range(kernels[j - 1].cols)] + carried
        cur = Mat.from_cols(f, base_cols) if base_cols else Mat.zeros(f, d, 0)
        r = rank(cur)
        new_heads = []
        for c in range(kernels[j].cols):
            v = kernels[j].col_vec(c)
            cand = cur.hstack(v)
            r2 = rank(cand)
            if r2 > r:
                cur, r = cand, r2
                new_heads.append(v)
        heads.extend((j, v) for v in new_heads)
        carried = [N @ v for v in carried] + [N @ v for v in new_heads]
    chains = sorted(range(len(heads)), key=lambda i: (heads[i][0], i))
    cols, sizes = [], []
    for idx in chains:
        level, v = heads[idx]
        sizes.append(level)
        w = v
        for _ in range(level):
            cols.append(w)
            w = N @ w
    S = Mat.from_cols(f, cols)
    if rank(S) != d:
        raise InternalCheckFailed("Jordan chain basis is singular")
    return S, sizes


def _decompose_regular(A: Mat, B: Mat):
    """Blocks and witness for a regular (square, nonsingular) pencil."""
    f = A.field
    d = A.rows
    if d == 0:
        return [], Mat.identity(f, 0), Mat.identity(f, 0)
    chi = pencil_charpoly(A, B)
    if chi.is_zero():
        raise InternalCheckFailed("regular part has identically zero determinant")
    roots, rem = roots_with_multiplicity(chi)
    if rem.degree >= 1:
        raise NonSplitSpectrum(irreducible_factor(rem))
    m_inf = d - chi.degree
    points = [(ProjPoint.finite(f, lam), mult) for lam, mult in roots]
    if m_inf > 0:
        points.append((ProjPoint.infinity(), m_inf))
    x_cols, y_cols, spans = [], [], []
    for pt, mult in points:
        xb = _root_subspace(A, B, pt)
        if len(xb) != mult:
            raise InternalCheckFailed(f"root subspace at {pt} has dim {len(xb)}, expected {mult}")
        X = Mat.from_cols(f, xb)
        if pt.is_infinite:
            Y = (A @ X).hstack(B @ X)
        else:
            Y = ((B - A.scale(pt.value)) @ X).hstack(A @ X)
        yb = col_span_basis(Y)
        if len(yb) != mult:
            raise InternalCheckFailed("image space dimension mismatch")
        x_cols.extend(xb)
        y_cols.extend(yb)
        spans.append((pt, mult))
    Q0 = Mat.from_cols(f, x_cols)
    P0 = invert(Mat.from_cols(f, y_cols))
    A1, B1 = P0 @ A @ Q0, P0 @ B @ Q0
    blocks = []
    p_parts, q_parts = [], []
    off = 0
    for pt, mult in spans:
        Ablk = A1.submatrix(off, off + mult, off, off + mult)
        Bblk = B1.submatrix(off, off + mult, off, off + mult)
        # off-diagonal blocks must vanish: the subspaces are deflating
        for r0, r1 in ((0, off), (off + mult, d)):
            if not A1.submatrix(r0, r1, off, off + mult).is_zero() \
               or not B1.submatrix(r0, r1, off, off + mult).is_zero():
                raise InternalCheckFailed("root splitting is not block-diagonal")
        if pt.is_infinite:
            Binv = invert(Bblk)
            Nnil = Binv @ Ablk
        else:
            Ainv = invert(Ablk)
            Nnil = (Ainv @ Bblk) - Mat.scalar_matrix(f, mult, pt.value)
        S, sizes = _nilpotent_chains(Nnil)
        Sinv = invert(S)
        if pt.is_infinite:
            p_parts.append(Sinv @ Binv)
        else:
            p_parts.append(Sinv @ Ainv)
        q_parts.append(S)
        blocks.extend(("eigen", pt, l) for l in sizes)
        off += mult
    P = Mat.block_diag(f, p_parts) @ P0
    Q = Q0 @ Mat.block_diag(f, q_parts)
    return blocks, P, Q


def _decompose(A: Mat, B: Mat):
    """Full recursion: returns (blocks, P, Q) with (PAQ, PBQ) equal to the
    canonical block diagonal in canonical order."""
    f = A.field
    m, n = A.rows, A.cols
    step = _extract_right_once(A, B)
    if step is not None:
        r, P0, Q0, Ares, Bres = step
        blocks, Pr, Qr = _decompose(Ares, Bres)
        P = Mat.block_diag(f, [Mat.identity(f, r - 1), Pr]) @ P0
        Q = Q0 @ Mat.block_diag(f, [Mat.identity(f, r), Qr])
        return [("right", r)] + blocks, P, Q
    stepT = _extract_right_once(A.transpose(), B.transpose())
    if stepT is not None:
        s, P0, Q0, Ares, Bres = stepT
        blocks, Pr, Qr = _decompose(Ares.transpose(), Bres.transpose())
        # transposing the transposed extraction: rows and columns swap roles
        P = Mat.block_diag(f, [Mat.identity(f, s), Pr]) @ Q0.transpose()
        Q = P0.transpose() @ Mat.block_diag(f, [Mat.identity(f, s - 1), Qr])
        return [("left", s)] + blocks, P, Q
    if m != n:
        raise InternalCheckFailed("singular-free pencil must be square")
    return _decompose_regular(A, B)


def kronecker_decompose(pencil: Pencil):
    """(KroneckerData, EquivWitness2) or raises NonSplitSpectrum.

    The witness is verified: reconstruct_pencil(data) == witness.apply(pencil),
    entrywise and exactly.
    """
    A, B = pencil.A, pencil.B
    f = pencil.field
    blocks, P, Q = _decompose(A, B)
    right = [r for kind, *rest in blocks if kind == "right" for r in [rest[0]]]
    left = [s for kind, *rest in blocks if kind == "left" for s in [rest[0]]]
    eigen: dict = {}
    for blk in blocks:
        if blk[0] == "eigen":
            eigen.setdefault(blk[1], []).append(blk[2])
    data = KroneckerData.make(f, right, left, eigen, A.rows, A.cols)
    witness = EquivWitness2(P, Q)
    target = reconstruct_pencil(data)
    got = witness.apply(pencil)
    if got.A != target.A or got.B != target.B:
        raise InternalCheckFailed("decomposition does not reproduce canonical form")
    return data, witness


def pencil_equiv(p1: Pencil, p2: Pencil):
    """Witness carrying p1 to p2, or None when not equivalent.

    Over a non-split spectrum: finite fields fall back to the exhaustive
    oracle; over Q the NonSplitSpectrum error propagates.
    """
    if p1.shape() != p2.shape():
        raise ShapeMismatch("pencils of different shapes")
    if p1.field is not p2.field:
        raise FieldMismatch("pencils over different fields")
    try:
        d1, w1 = kronecker_decompose(p1)
        d2, w2 = kronecker_decompose(p2)
    except NonSplitSpectrum:
        if not p1.field.is_finite:
            raise
        return _oracle_fallback(p1, p2)
    if d1 != d2:
        return None
    w = w1.then(w2.inverse())
    got = w.apply(p1)
    if got.A != p2.A or got.B != p2.B:
        raise InternalCheckFailed("composed pencil witness failed verification")
    return w


def _oracle_fallback(p1: Pencil, p2: Pencil):
    from . import oracle
    out = oracle.tuple_equiv((p1.A, p1.B), (p2.A, p2.B), allow_mixing=False)
    if out.kind == "found":
        P, Q, _ = out.witness
        w = EquivWitness2(P, Q)
        got = w.apply(p1)
        if got.A != p2.A or got.B != p2.B:
            raise InternalCheckFailed("oracle pencil witness failed verification")
        return w
    if out.kind == "certified_no":
        return None
    raise InternalCheckFailed("oracle fallback returned an undecided outcome")
