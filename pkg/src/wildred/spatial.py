"""Spatial matrices (three-index arrays), their invariants, and the
complete classification of m x n x 2 spatial matrices.

Equivalence acts by one invertible matrix per axis with (old, new)
indexing: a'_{i'j'k'} = sum a_{ijk} r_{ii'} s_{jj'} t_{kk'}.  Mixing the
two slices of an m x n x 2 matrix moves pencil eigenvalues by the
linear-fractional map lam -> (a + b lam)/(c + d lam); the canonical form
is the Kronecker data of the slice pencil with the eigenvalue
configuration replaced by a fixed representative of its orbit under
those maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (FieldMismatch, InternalCheckFailed, NonSplitSpectrum,
                     NotInvertible, ShapeMismatch, WildredError)
from .fields import FieldSpec
from .matrix import Mat, greedy_row_compression, invert, is_invertible, rank
from .pencil import (EquivWitness2, KroneckerData, Pencil, ProjPoint,
                     kronecker_decompose, reconstruct_pencil)


class SpatialMatrix:
    """m x n x q array over a field; entries stored row-major in (i, j, k)."""

    __slots__ = ("m", "n", "q", "field", "data")

    def __init__(self, m: int, n: int, q: int, field: FieldSpec, data):
        data = tuple(data)
        if len(data) != m * n * q:
            raise ShapeMismatch(f"{m}x{n}x{q} needs {m*n*q} entries, got {len(data)}")
        self.m, self.n, self.q = m, n, q
        self.field = field
        self.data = data

    @staticmethod
    def zeros(field: FieldSpec, m: int, n: int, q: int) -> "SpatialMatrix":
        return SpatialMatrix(m, n, q, field, [field.zero] * (m * n * q))

    @staticmethod
    def from_slices(field: FieldSpec, slices) -> "SpatialMatrix":
        """Build from axis-3 slices A_k (each m x n), k = 1..q."""
        slices = list(slices)
        q = len(slices)
        if q == 0:
            raise ShapeMismatch("need at least one slice to infer a shape")
        m, n = slices[0].rows, slices[0].cols
        data = []
        for i in range(m):
            for j in range(n):
                for A in slices:
                    if A.shape() != (m, n):
                        raise ShapeMismatch("slices of unequal shape")
                    data.append(A[i, j])
        return SpatialMatrix(m, n, q, field, data)

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self.data[(i * self.n + j) * self.q + k]

    def shape(self):
        return (self.m, self.n, self.q)

    def is_zero(self) -> bool:
        return not any(self.data)

    def key(self):
        return (self.m, self.n, self.q, self.data)

    def __eq__(self, other):
        return (isinstance(other, SpatialMatrix) and self.field is other.field
                and self.shape() == other.shape() and self.data == other.data)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SpatialMatrix({self.m}x{self.n}x{self.q} over {self.field})"


@dataclass(frozen=True)
class RankTriple:
    r1: int
    r2: int
    r3: int

    def as_tuple(self):
        return (self.r1, self.r2, self.r3)


@dataclass(frozen=True)
class SpatialWitness:
    """Invertible (R, S, T); transform_spatial maps source to target."""

    R: Mat
    S: Mat
    T: Mat

    def inverse(self) -> "SpatialWitness":
        return SpatialWitness(invert(self.R), invert(self.S), invert(self.T))

    def then(self, other: "SpatialWitness") -> "SpatialWitness":
        """Witness equal to applying self first, then other."""
        return SpatialWitness(self.R @ other.R, self.S @ other.S, self.T @ other.T)


def transform_spatial(A: SpatialMatrix, w: SpatialWitness) -> SpatialMatrix:
    """Apply the equivalence transformation with (old, new)-indexed R, S, T."""
    f = A.field
    m, n, q = A.shape()
    if w.R.shape() != (m, m) or w.S.shape() != (n, n) or w.T.shape() != (q, q):
        raise ShapeMismatch("witness sizes do not match the spatial matrix")
    for M in (w.R, w.S, w.T):
        if not is_invertible(M):
            raise NotInvertible("spatial witness component is singular")
    add, mul, zero = f.add, f.mul, f.zero
    # contract one axis at a time
    tmp1 = [zero] * (m * n * q)  # index (i', j, k)
    for i in range(m):
        for ip in range(m):
            r = w.R[i, ip]
            if not r:
                continue
            for j in range(n):
                for k in range(q):
                    src = (i * n + j) * q + k
                    dst = (ip * n + j) * q + k
                    tmp1[dst] = add(tmp1[dst], mul(A.data[src], r))
    tmp2 = [zero] * (m * n * q)  # index (i', j', k)
    for j in range(n):
        for jp in range(n):
            s = w.S[j, jp]
            if not s:
                continue
            for ip in range(m):
                for k in range(q):
                    src = (ip * n + j) * q + k
                    dst = (ip * n + jp) * q + k
                    tmp2[dst] = add(tmp2[dst], mul(tmp1[src], s))
    out = [zero] * (m * n * q)
    for k in range(q):
        for kp in range(q):
            t = w.T[k, kp]
            if not t:
                continue
            for ip in range(m):
                for jp in range(n):
                    src = (ip * n + jp) * q + k
                    dst = (ip * n + jp) * q + kp
                    out[dst] = add(out[dst], mul(tmp2[src], t))
    return SpatialMatrix(m, n, q, f, out)


def slice_tuple(A: SpatialMatrix, axis: int):
    """The slice sequences: axis 1 gives m matrices [a_{ijk}]_{jk} (n x q),
    axis 2 gives n matrices (m x q), axis 3 gives q matrices (m x n)."""
    f = A.field
    m, n, q = A.shape()
    if axis == 1:
        return [Mat(n, q, f, [A[i, j, k] for j in range(n) for k in range(q)])
                for i in range(m)]
    if axis == 2:
        return [Mat(m, q, f, [A[i, j, k] for i in range(m) for k in range(q)])
                for j in range(n)]
    if axis == 3:
        return [Mat(m, n, f, [A[i, j, k] for i in range(m) for j in range(n)])
                for k in range(q)]
    raise WildredError(f"axis must be 1, 2 or 3, got {axis}")


def rank_triple(A: SpatialMatrix) -> RankTriple:
    """Dimensions of the spans of the three slice systems."""
    ranks = []
    for axis in (1, 2, 3):
        slices = slice_tuple(A, axis)
        if not slices:
            ranks.append(0)
            continue
        flat = Mat.from_rows(A.field, [list(s.data) for s in slices]) \
            if slices[0].rows * slices[0].cols else Mat.zeros(A.field, len(slices), 0)
        ranks.append(rank(flat))
    return RankTriple(*ranks)


def direct_sum_spatial(A: SpatialMatrix, B: SpatialMatrix) -> SpatialMatrix:
    """Block-diagonal sum along all three axes; A in the low corner."""
    if A.field is not B.field:
        raise FieldMismatch("direct sum over different fields")
    f = A.field
    m, n, q = A.m + B.m, A.n + B.n, A.q + B.q
    out = [f.zero] * (m * n * q)
    for i in range(A.m):
        for j in range(A.n):
            for k in range(A.q):
                out[(i * n + j) * q + k] = A[i, j, k]
    for i in range(B.m):
        for j in range(B.n):
            for k in range(B.q):
                out[((A.m + i) * n + (A.n + j)) * q + (A.q + k)] = B[i, j, k]
    return SpatialMatrix(m, n, q, f, out)


def regular_part(A: SpatialMatrix):
    """(A', witness) with the witness carrying A to A' (+) O, where A' is
    the regular r1 x r2 x r3 corner and O is zero.

    Axis reductions run in order 1, 2, 3; each makes the leading slices
    of that axis linearly independent and zeroes the rest, preserving
    the zero pattern produced by the earlier axes.  Inputs already of
    shape A' (+) O are left untouched (identity witness).
    """
    f = A.field
    cur = A
    comps = []
    for axis in (1, 2, 3):
        slices = slice_tuple(cur, axis)
        width = slices[0].rows * slices[0].cols if slices else 0
        flat = Mat.from_rows(f, [list(s.data) for s in slices]) if slices and width \
            else Mat.zeros(f, len(slices), width)
        Z, _r = greedy_row_compression(flat)
        comp = Z.transpose()
        w = _axis_witness(f, cur.shape(), axis, comp)
        cur = transform_spatial(cur, w)
        comps.append(w)
    witness = comps[0].then(comps[1]).then(comps[2])
    r1, r2, r3 = rank_triple(A).as_tuple()
    reg = SpatialMatrix(r1, r2, r3, f,
                        [cur[i, j, k] for i in range(r1) for j in range(r2) for k in range(r3)])
    check = direct_sum_spatial(reg, SpatialMatrix.zeros(f, A.m - r1, A.n - r2, A.q - r3))
    if transform_spatial(A, witness) != check:
        raise InternalCheckFailed("regular part witness failed verification")
    return reg, witness


def _axis_witness(f: FieldSpec, shape, axis: int, comp: Mat) -> SpatialWitness:
    m, n, q = shape
    R, S, T = Mat.identity(f, m), Mat.identity(f, n), Mat.identity(f, q)
    if axis == 1:
        R = comp
    elif axis == 2:
        S = comp
    else:
        T = comp
    return SpatialWitness(R, S, T)


# -- Moebius machinery ----------------------------------------------------

@dataclass(frozen=True)
class MoebiusMap:
    """lam -> (a + b*lam) / (c + d*lam) with ad - bc != 0.

    Induced on pencil eigenvalues by mixing the two slices with
    T = [[c, a], [d, b]].  Projective conventions: inf -> b/d (or inf
    when d = 0); lam -> inf when c + d*lam = 0.
    """

    field: FieldSpec
    a: object
    b: object
    c: object
    d: object

    @staticmethod
    def make(field: FieldSpec, a, b, c, d) -> "MoebiusMap":
        a, b, c, d = (field.coerce(x) for x in (a, b, c, d))
        det = field.sub(field.mul(a, d), field.mul(b, c))
        if not det:
            raise NotInvertible("Moebius map needs ad - bc != 0")
        return MoebiusMap(field, a, b, c, d)

    @staticmethod
    def identity(field: FieldSpec) -> "MoebiusMap":
        return MoebiusMap.make(field, field.zero, field.one, field.one, field.zero)

    def matrix(self) -> Mat:
        """The slice-mixing matrix T = [[c, a], [d, b]]."""
        return Mat.from_rows(self.field, [[self.c, self.a], [self.d, self.b]])

    @staticmethod
    def from_matrix(T: Mat) -> "MoebiusMap":
        return MoebiusMap.make(T.field, T[0, 1], T[1, 1], T[0, 0], T[1, 0])

    def apply(self, pt: ProjPoint) -> ProjPoint:
        f = self.field
        if pt.is_infinite:
            if not self.d:
                return ProjPoint.infinity()
            return ProjPoint.finite(f, f.div(self.b, self.d))
        den = f.add(self.c, f.mul(self.d, pt.value))
        num = f.add(self.a, f.mul(self.b, pt.value))
        if not den:
            return ProjPoint.infinity()
        return ProjPoint.finite(f, f.div(num, den))

    def then(self, other: "MoebiusMap") -> "MoebiusMap":
        """Map equal to applying self first, then other (T-matrix product)."""
        return MoebiusMap.from_matrix(self.matrix() @ other.matrix())

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap.from_matrix(invert(self.matrix()))


def _hom_coords(field: FieldSpec, pt: ProjPoint):
    """Projective point as a homogeneous column (x : y); finite lam is
    (lam : 1), infinity is (1 : 0)."""
    if pt.is_infinite:
        return Mat.column(field, [field.one, field.zero])
    return Mat.column(field, [pt.value, field.one])


def _map_matrix_hom(T2: Mat) -> MoebiusMap:
    """MoebiusMap whose action on (lam : 1) is the 2x2 matrix T2 =
    [[b, a], [d, c]] acting on homogeneous coordinates."""
    f = T2.field
    return MoebiusMap.make(f, T2[0, 1], T2[0, 0], T2[1, 1], T2[1, 0])


def _triple_to_standard(field: FieldSpec, p1: ProjPoint, p2: ProjPoint, p3: ProjPoint) -> Mat:
    """Homogeneous 2x2 matrix sending p1, p2, p3 to 0, 1, inf."""
    q1, q2, q3 = (_hom_coords(field, p) for p in (p1, p2, p3))
    # solve q2 = delta*q1 + gamma*q3, then inverse of [gamma*q3 | delta*q1]
    sys = Mat.from_cols(field, [q1, q3])
    coeffs = invert(sys) @ q2
    delta, gamma = coeffs[0, 0], coeffs[1, 0]
    if not delta or not gamma:
        raise InternalCheckFailed("Moebius triple points are not distinct")
    Minv = Mat.from_cols(field, [q3.scale(gamma), q1.scale(delta)])
    # columns: image of (1:0) is gamma*q3 (-> p3), of (0:1) is delta*q1 (-> p1)
    return invert(Minv)


def moebius_through(field: FieldSpec, src, dst) -> MoebiusMap:
    """The unique map sending the ordered triple src to the triple dst."""
    M1 = _triple_to_standard(field, *src)
    M2 = _triple_to_standard(field, *dst)
    mm = _map_matrix_hom(invert(M2) @ M1)
    for s, d in zip(src, dst):
        if mm.apply(s) != d:
            raise InternalCheckFailed("three-point Moebius interpolation failed")
    return mm


def _point_order(field: FieldSpec):
    return lambda pt: pt.sort_key(field)


def _serialize_eigen(field: FieldSpec, eigen: dict) -> tuple:
    """Canonical, comparable serialization of an eigen configuration."""
    return tuple(sorted(((pt.sort_key(field), tuple(sorted(sizes)))
                         for pt, sizes in eigen.items()), key=lambda e: e[0]))


def moebius_match(E1: dict, E2: dict, field: FieldSpec):
    """A MoebiusMap carrying the configuration E1 (point -> size multiset)
    onto E2, or None.

    0 points: identity; 1 or 2: direct transitivity; 3 or more: ordered
    triples with compatible size multisets, solved through three points
    and verified globally.
    """
    E1 = {pt: tuple(sorted(sizes)) for pt, sizes in E1.items() if sizes}
    E2 = {pt: tuple(sorted(sizes)) for pt, sizes in E2.items() if sizes}
    if len(E1) != len(E2):
        return None
    if sorted(E1.values()) != sorted(E2.values()):
        return None
    k = len(E1)
    if k == 0:
        return MoebiusMap.identity(field)
    pts1 = sorted(E1, key=_point_order(field))
    pts2 = sorted(E2, key=_point_order(field))
    if k == 1:
        return _one_point_map(field, pts1[0], pts2[0])
    if k == 2:
        for cand in _two_point_maps(field, pts1, pts2, E1, E2):
            if _match_ok(cand, E1, E2):
                return cand
        return None
    base = pts1[:3]
    for w1 in pts2:
        if E2[w1] != E1[base[0]]:
            continue
        for w2 in pts2:
            if w2 == w1 or E2[w2] != E1[base[1]]:
                continue
            for w3 in pts2:
                if w3 in (w1, w2) or E2[w3] != E1[base[2]]:
                    continue
                cand = moebius_through(field, base, (w1, w2, w3))
                if _match_ok(cand, E1, E2):
                    return cand
    return None


def _match_ok(mm: MoebiusMap, E1: dict, E2: dict) -> bool:
    image = {mm.apply(pt): sizes for pt, sizes in E1.items()}
    return image == E2


def _one_point_map(field: FieldSpec, p: ProjPoint, t: ProjPoint) -> MoebiusMap:
    f = field
    if p.is_infinite and t.is_infinite:
        return MoebiusMap.identity(f)
    if p.is_infinite:
        return MoebiusMap.make(f, f.one, t.value, f.zero, f.one)  # inf -> t
    if t.is_infinite:
        return MoebiusMap.make(f, f.one, f.zero, f.neg(p.value), f.one)  # p -> inf
    return MoebiusMap.make(f, f.sub(t.value, p.value), f.one, f.one, f.zero)  # shift


def _two_point_maps(field: FieldSpec, pts1, pts2, E1, E2):
    """Candidate maps sending the 2-point configuration pts1 onto pts2,
    larger size-multiset first, with both assignments on ties."""
    o1 = sorted(pts1, key=lambda p: (E1[p], p.sort_key(field)), reverse=True)
    assignments = [sorted(pts2, key=lambda p: (E2[p], p.sort_key(field)), reverse=True)]
    if E2[assignments[0][0]] == E2[assignments[0][1]]:
        assignments.append(list(reversed(assignments[0])))
    for o2 in assignments:
        yield _pair_map(field, o1, o2)


def _pair_map(field: FieldSpec, src, dst) -> MoebiusMap:
    """Some map with src[0] -> dst[0] and src[1] -> dst[1]: the composite
    of the two standard (p, q) -> (0, inf) charts."""
    g1 = _pair_to_zero_inf(field, src[0], src[1])
    g2 = _pair_to_zero_inf(field, dst[0], dst[1])
    mm = g1.then(g2.inverse())
    if mm.apply(src[0]) != dst[0] or mm.apply(src[1]) != dst[1]:
        raise InternalCheckFailed("two-point Moebius construction failed")
    return mm


def _pair_to_zero_inf(field: FieldSpec, p: ProjPoint, q: ProjPoint) -> MoebiusMap:
    f = field
    if p.is_infinite:
        # inf -> 0, q -> inf: lam -> 1/(lam - q)
        return _map_matrix_hom(Mat.from_rows(f, [[f.zero, f.one], [f.one, f.neg(q.value)]]))
    if q.is_infinite:
        # lam -> lam - p
        return MoebiusMap.make(f, f.neg(p.value), f.one, f.one, f.zero)
    # lam -> (lam - p)/(lam - q)
    return _map_matrix_hom(Mat.from_rows(f, [[f.one, f.neg(p.value)], [f.one, f.neg(q.value)]]))


# -- classification of m x n x 2 ------------------------------------------

@dataclass(frozen=True)
class Spatial2Canon:
    """Mixing-invariant canonical data of an m x n x 2 spatial matrix."""

    right: tuple
    left: tuple
    eigen_canonical: tuple  # ((ProjPoint, sizes), ...) sorted by point
    m: int
    n: int
    field: FieldSpec

    def eigen_map(self) -> dict:
        return {pt: sizes for pt, sizes in self.eigen_canonical}

    def kronecker(self) -> KroneckerData:
        return KroneckerData.make(self.field, self.right, self.left,
                                  dict(self.eigen_canonical), self.m, self.n)

    def serialize(self) -> str:
        return self.kronecker().serialize()


def _canonical_eigen(field: FieldSpec, eigen: dict):
    """Fixed orbit representative of an eigen configuration and a map to it.

    0 points: empty; 1 point: moved to 0; 2 points: moved onto {0, 1}
    by descending size multiset (both assignments tried on ties, the
    lexicographically smaller serialization kept); 3 or more: every
    ordered triple of distinct points is sent to (0, 1, inf) and the
    lexicographically smallest serialization wins.
    """
    eigen = {pt: tuple(sorted(sizes)) for pt, sizes in eigen.items() if sizes}
    k = len(eigen)
    if k == 0:
        return {}, MoebiusMap.identity(field)
    pts = sorted(eigen, key=_point_order(field))
    zero_pt = ProjPoint.finite(field, field.zero)
    one_pt = ProjPoint.finite(field, field.one)
    if k == 1:
        mm = _one_point_map(field, pts[0], zero_pt)
        return {zero_pt: eigen[pts[0]]}, mm
    if k == 2:
        # larger size multiset goes to 0; on ties both assignments give
        # the same image map, the smaller serialization is kept anyway
        o1 = sorted(pts, key=lambda p: (eigen[p], p.sort_key(field)), reverse=True)
        best = None
        for dst in ((zero_pt, one_pt), (one_pt, zero_pt)) if eigen[o1[0]] == eigen[o1[1]] \
                else ((zero_pt, one_pt),):
            mm = _pair_map(field, o1, dst)
            image = {mm.apply(pt): sizes for pt, sizes in eigen.items()}
            key = _serialize_eigen(field, image)
            if best is None or key < best[0]:
                best = (key, image, mm)
        return best[1], best[2]
    best = None
    for t1 in pts:
        for t2 in pts:
            if t2 == t1:
                continue
            for t3 in pts:
                if t3 in (t1, t2):
                    continue
                mm = moebius_through(field, (t1, t2, t3),
                                     (zero_pt, one_pt, ProjPoint.infinity()))
                image = {mm.apply(pt): sizes for pt, sizes in eigen.items()}
                key = _serialize_eigen(field, image)
                if best is None or key < best[0]:
                    best = (key, image, mm)
    return best[1], best[2]


def canon_spatial2(A: SpatialMatrix):
    """(Spatial2Canon, SpatialWitness); the witness carries A to the
    reconstructed canonical form.  Raises NonSplitSpectrum like the
    pencil module."""
    if A.q != 2:
        raise ShapeMismatch("canon_spatial2 needs q = 2")
    f = A.field
    s1, s2 = slice_tuple(A, 3)
    data, w1 = kronecker_decompose(Pencil(s1, s2))
    eigen_canon, mm = _canonical_eigen(f, data.eigen_map())
    canon = Spatial2Canon(data.right, data.left,
                          tuple(sorted(eigen_canon.items(), key=lambda e: e[0].sort_key(f))),
                          A.m, A.n, f)
    # realize: pencil witness, then slice mixing, then a second pencil witness
    Tmix = mm.matrix()
    c1 = w1.apply(Pencil(s1, s2))
    mixedA = c1.A.scale(Tmix[0, 0]) + c1.B.scale(Tmix[1, 0])
    mixedB = c1.A.scale(Tmix[0, 1]) + c1.B.scale(Tmix[1, 1])
    data2, w2 = kronecker_decompose(Pencil(mixedA, mixedB))
    if data2 != canon.kronecker():
        raise InternalCheckFailed("Moebius-normalized pencil has unexpected data")
    witness = SpatialWitness((w2.P @ w1.P).transpose(), w1.Q @ w2.Q, Tmix)
    target = reconstruct_spatial2(canon)
    if transform_spatial(A, witness) != target:
        raise InternalCheckFailed("spatial canonical witness failed verification")
    return canon, witness


def reconstruct_spatial2(canon: Spatial2Canon) -> SpatialMatrix:
    p = reconstruct_pencil(canon.kronecker())
    return SpatialMatrix.from_slices(canon.field, [p.A, p.B])


def spatial2_equiv(A: SpatialMatrix, B: SpatialMatrix):
    """SpatialWitness carrying A to B, or None when not equivalent.

    NonSplitSpectrum over Q propagates; over a finite field the decision
    falls back to the mixing oracle (slice-mixing enumeration plus
    linearized equivalence), which is decisive at desk scale.
    """
    if A.shape() != B.shape():
        raise ShapeMismatch("spatial matrices of different shapes")
    if A.field is not B.field:
        raise FieldMismatch("spatial matrices over different fields")
    if A.q != 2:
        raise ShapeMismatch("spatial2_equiv needs q = 2")
    try:
        cA, wA = canon_spatial2(A)
        cB, wB = canon_spatial2(B)
    except NonSplitSpectrum:
        if not A.field.is_finite:
            raise
        return _spatial_oracle_fallback(A, B)
    if cA != cB:
        return None
    w = wA.then(wB.inverse())
    if transform_spatial(A, w) != B:
        raise InternalCheckFailed("composed spatial witness failed verification")
    return w


def _spatial_oracle_fallback(A: SpatialMatrix, B: SpatialMatrix):
    from . import oracle
    out = oracle.brute_force_spatial_equiv(A, B)
    if out.kind == "found":
        return out.witness
    if out.kind == "certified_no":
        return None
    raise InternalCheckFailed("oracle fallback returned an undecided outcome")
