"""The acceptance suite: one function per criterion, shared by the
`selftest` CLI verb and the pytest acceptance module.

All checks are exact (zero tolerance); randomness flows through fixed
splitmix seeds so every run is reproducible.  Each criterion carries
its wall-clock limit in seconds.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from . import modmat
from .errors import NonSplitSpectrum
from .fields import GF, QQ
from .matrix import Mat, invert
from .oracle import brute_force_spatial_equiv, gl_list, sim_pairs, tuple_equiv
from .pencil import (KroneckerData, Pencil, direct_sum_pencil, jordan_block,
                     kronecker_decompose)
from .reductions import (encode_poset_pair, encode_quiver_pair,
                         gadget_similarity_witness, simulation_step_matrix,
                         step_one_pair, StepOneLayout, tensor_embed,
                         tensor_transform, wild_gadget)
from .reps import (Poset, PosetRep, PosetWitness, Quiver, QuiverRep,
                   QuiverWitness, critical_poset, poset_is_wild, poset_iso,
                   quiver_is_tame, quiver_iso)
from .rng import SplitMix
from .spatial import (SpatialMatrix, SpatialWitness, canon_spatial2,
                      direct_sum_spatial, rank_triple, regular_part,
                      slice_tuple, spatial2_equiv, transform_spatial)


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    seconds: float
    limit: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (f"[{status}] criterion {self.number:2d} {self.name}: "
                f"{self.detail} ({self.seconds:.1f}s / limit {self.limit:.0f}s)")


def _pencil_canon_key(p: Pencil):
    try:
        data, _ = kronecker_decompose(p)
        return ("data", data.serialize())
    except NonSplitSpectrum as exc:
        return ("nonsplit", tuple(p.field.format(c) for c in exc.factor.coeffs))


def _rand_pencil(rng: SplitMix, field, m, n) -> Pencil:
    return Pencil(rng.matrix(field, m, n, bound=3), rng.matrix(field, m, n, bound=3))


def criterion_1() -> CriterionResult:
    """Pencil canon orbit invariance on random pencils over GF(5) and Q."""
    t0 = time.time()
    rng = SplitMix(101)
    checked = 0
    ok = True
    detail = ""
    for trial in range(200):
        field = GF(5) if trial % 2 == 0 else QQ
        m, n = rng.randrange(7), rng.randrange(8)
        p = _rand_pencil(rng, field, m, n)
        P = rng.invertible(field, m) if m else Mat.identity(field, 0)
        Q = rng.invertible(field, n) if n else Mat.identity(field, 0)
        moved = Pencil(P @ p.A @ Q, P @ p.B @ Q)
        if _pencil_canon_key(p) != _pencil_canon_key(moved):
            ok = False
            detail = f"invariance broken at trial {trial} ({m}x{n} over {field})"
            break
        checked += 1
    if ok:
        detail = f"{checked} random pencils invariant"
    return CriterionResult(1, "pencil canon orbit invariance", ok,
                           time.time() - t0, 60.0, detail)


def criterion_2() -> CriterionResult:
    """Canon partition of all 256 2x2 GF(2) pencils equals the orbit
    partition under GL(2,2) x GL(2,2)."""
    t0 = time.time()
    f = GF(2)
    mats = [Mat(2, 2, f, bits) for bits in itertools.product((0, 1), repeat=4)]
    pencils = [Pencil(a, b) for a in mats for b in mats]
    group = gl_list(2, 2)
    orbit = {}
    norbits = 0
    for p in pencils:
        k = (p.A.key(), p.B.key())
        if k in orbit:
            continue
        for P in group:
            for Q in group:
                orbit.setdefault(((P @ p.A @ Q).key(), (P @ p.B @ Q).key()), norbits)
        norbits += 1
    canon = {(p.A.key(), p.B.key()): _pencil_canon_key(p) for p in pencils}
    keys = list(canon)
    ok = all((canon[a] == canon[b]) == (orbit[a] == orbit[b])
             for a, b in itertools.combinations(keys, 2))
    classes = len(set(canon.values()))
    return CriterionResult(2, "pencil canon completeness (2x2 over GF(2))", ok,
                           time.time() - t0, 30.0,
                           f"{norbits} orbits vs {classes} canon classes, partitions "
                           + ("identical" if ok else "DIFFER"))


def _spatial_all(field, m, n, q):
    p = field.p
    for entries in itertools.product(range(p), repeat=m * n * q):
        yield SpatialMatrix(m, n, q, field, entries)


def _spatial_decision_key(sp: SpatialMatrix, nonsplit_classes: list):
    try:
        c, _ = canon_spatial2(sp)
        return ("c", c.right, c.left,
                tuple((pt.value, s) for pt, s in c.eigen_canonical))
    except NonSplitSpectrum:
        for i, rep in enumerate(nonsplit_classes):
            if spatial2_equiv(rep, sp) is not None:
                return ("ns", i)
        nonsplit_classes.append(sp)
        return ("ns", len(nonsplit_classes) - 1)


def criterion_3() -> CriterionResult:
    """Theorem on m x n x 2 classification at desk scale: full agreement
    with the exhaustive oracle over GF(2), 500 random GF(3) pairs, and
    the eigenvalue mixing law over GF(5)."""
    t0 = time.time()
    f2, f3, f5 = GF(2), GF(3), GF(5)
    problems = []
    # (a) all spatial matrices with m, n <= 2, q = 2 over GF(2)
    for m, n in ((1, 1), (1, 2), (2, 1), (2, 2)):
        spatials = list(_spatial_all(f2, m, n, 2))
        gm, gn, gq = gl_list(m, 2), gl_list(n, 2), gl_list(2, 2)
        orbit = {}
        norbits = 0
        for sp in spatials:
            if sp.key() in orbit:
                continue
            for R in gm:
                for S in gn:
                    for T in gq:
                        orbit.setdefault(transform_spatial(sp, SpatialWitness(R, S, T)).key(),
                                         norbits)
            norbits += 1
        nonsplit: list = []
        decision = {sp.key(): _spatial_decision_key(sp, nonsplit) for sp in spatials}
        agree = all((decision[a.key()] == decision[b.key()]) == (orbit[a.key()] == orbit[b.key()])
                    for a, b in itertools.combinations(spatials, 2))
        if not agree:
            problems.append(f"partition mismatch at {m}x{n}x2 over GF(2)")
    # direct double-decider sample over GF(2), including nonsplit inputs
    rng = SplitMix(303)
    all22 = list(_spatial_all(f2, 2, 2, 2))
    for _ in range(60):
        A = rng.choice(all22)
        B = rng.choice(all22)
        lhs = spatial2_equiv(A, B) is not None
        rhs = brute_force_spatial_equiv(A, B).is_found
        if lhs != rhs:
            problems.append(f"decider disagreement over GF(2): {A.data} vs {B.data}")
            break
    # (b) 500 random GF(3) pairs, both deciders
    for trial in range(500):
        A = SpatialMatrix(2, 2, 2, f3, [rng.randrange(3) for _ in range(8)])
        if trial % 2 == 0:
            w = SpatialWitness(rng.invertible(f3, 2), rng.invertible(f3, 2),
                               rng.invertible(f3, 2))
            B = transform_spatial(A, w)
        else:
            B = SpatialMatrix(2, 2, 2, f3, [rng.randrange(3) for _ in range(8)])
        lhs = spatial2_equiv(A, B) is not None
        out = brute_force_spatial_equiv(A, B)
        if out.kind == "unknown" or lhs != out.is_found:
            problems.append(f"GF(3) disagreement at trial {trial}")
            break
    # (c) mixing law: (I_l, J_l(lam)) mixed by T=[[c,a],[d,b]] has the same
    # canon as (I_l, J_l((a+b lam)/(c+d lam)))
    law = 0
    for l in (1, 2, 3):
        I = Mat.identity(f5, l)
        for a, b, c, d in itertools.product(range(5), repeat=4):
            if (a * d - b * c) % 5 == 0:
                continue
            T = Mat.from_rows(f5, [[c, a], [d, b]])
            for lam in range(5):
                if (c + d * lam) % 5 == 0:
                    continue
                sp = SpatialMatrix.from_slices(f5, [I, jordan_block(f5, l, lam)])
                mixed = transform_spatial(sp, SpatialWitness(I, I, T))
                mu = ((a + b * lam) * pow(c + d * lam, -1, 5)) % 5
                tgt = SpatialMatrix.from_slices(f5, [I, jordan_block(f5, l, mu)])
                if canon_spatial2(mixed)[0] != canon_spatial2(tgt)[0]:
                    problems.append(f"mixing law broken at l={l} abcd={(a,b,c,d)} lam={lam}")
                    break
                law += 1
            if problems:
                break
        if problems:
            break
    ok = not problems
    detail = problems[0] if problems else \
        f"GF(2) partitions identical, 60+500 paired decisions agree, {law} mixing cases"
    return CriterionResult(3, "m x n x 2 classification at desk scale", ok,
                           time.time() - t0, 300.0, detail)


QUIVER_21 = Quiver.make(3, [("a", 1, 1), ("b", 1, 2), ("g", 1, 3),
                            ("d", 1, 3), ("e", 2, 3), ("z", 3, 3)])


def _expected_pair_21(X: QuiverRep):
    """The flagship encoding built literally: M = diag(I, 2I, 3I, 4I),
    N = [[Aa,0,0,0],[Ab,0,0,0],[Ag,0,0,0],[Ad,Ae,I,Az]]."""
    f = X.field
    n1, n2, n3 = X.dims
    M = Mat.block_diag(f, [Mat.scalar_matrix(f, n1, 1), Mat.scalar_matrix(f, n2, 2),
                           Mat.scalar_matrix(f, n3, 3), Mat.scalar_matrix(f, n3, 4)])
    total = n1 + n2 + n3 + n3
    N = Mat.zeros(f, total, total)
    offs = [0, n1, n1 + n2, n1 + n2 + n3]
    N = N.set_block(offs[0], 0, X.mat("a"))
    N = N.set_block(offs[1], 0, X.mat("b"))
    N = N.set_block(offs[2], 0, X.mat("g"))
    N = N.set_block(offs[3], 0, X.mat("d"))
    N = N.set_block(offs[3], offs[1], X.mat("e"))
    N = N.set_block(offs[3], offs[2], Mat.identity(f, n3))
    N = N.set_block(offs[3], offs[3], X.mat("z"))
    return M, N


def _rand_quiver_rep(rng, field, dims) -> QuiverRep:
    mats = {}
    for aid, s, t in QUIVER_21.arrows:
        mats[aid] = rng.matrix(field, dims[t - 1], dims[s - 1])
    return QuiverRep.make(QUIVER_21, field, dims, mats)


def criterion_4() -> CriterionResult:
    """Quiver-to-pair reduction: bit-exact flagship layout and iff
    against the simultaneous-similarity oracle on 50 pairs over GF(7)."""
    t0 = time.time()
    f = GF(7)
    rng = SplitMix(404)
    problems = []
    # bit-exact reproduction for all dims <= 3
    for dims in itertools.product((1, 2, 3), repeat=3):
        X = _rand_quiver_rep(rng, f, dims)
        pair = encode_quiver_pair(X)
        M, N = _expected_pair_21(X)
        if pair.M != M or pair.N != N:
            problems.append(f"flagship layout differs at dims {dims}")
            break
    agreements = 0
    for trial in range(50):
        dims = (rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2))
        X = _rand_quiver_rep(rng, f, dims)
        if trial < 25:
            S = tuple(rng.invertible(f, d) for d in dims)
            Y = QuiverWitness(S).apply(X)
        else:
            Y = _rand_quiver_rep(rng, f, dims)
        a = quiver_iso(X, Y)
        b = sim_pairs(encode_quiver_pair(X).as_tuple(), encode_quiver_pair(Y).as_tuple())
        if a.kind == "unknown" or b.kind == "unknown" or a.is_found != b.is_found:
            problems.append(f"iff broken at trial {trial}: {a.kind} vs {b.kind}")
            break
        agreements += 1
    ok = not problems
    detail = problems[0] if problems else \
        f"27 layouts bit-exact, {agreements}/50 oracle agreements"
    return CriterionResult(4, "quiver containment iff", ok, time.time() - t0,
                           180.0, detail)


def _rand_poset_witness(rng, X: PosetRep) -> PosetWitness:
    f = X.field
    m = X.mat.rows
    n = sum(X.widths)
    R = rng.invertible(f, m) if m else Mat.identity(f, 0)
    C = Mat.zeros(f, n, n)
    starts = X.strip_starts()
    for i in range(1, X.poset.size + 1):
        C = C.set_block(starts[i - 1], starts[i - 1], rng.invertible(f, X.widths[i - 1]))
        for j in range(1, X.poset.size + 1):
            if X.poset.precedes(i, j):
                C = C.set_block(starts[i - 1], starts[j - 1],
                                rng.matrix(f, X.widths[i - 1], X.widths[j - 1]))
    return PosetWitness(R, C)


def criterion_5() -> CriterionResult:
    """Poset-to-pair reduction: displayed fixtures bit-exact and iff
    against the oracle on three posets over GF(7)."""
    t0 = time.time()
    f = GF(7)
    rng = SplitMix(505)
    problems = []
    # the t=8 simulation display: removing (3,7) with members {3,5,6}
    m8 = simulation_step_matrix(QQ, (1,) * 8, 3, 7, {3, 5, 6})
    exp8 = Mat.zeros(QQ, 8, 8)
    for row, col in enumerate((8, 6, 5, 3, 7, 4, 2, 1)):
        exp8 = exp8.set_block(row, col - 1, Mat.identity(QQ, 1))
    if m8 != exp8:
        problems.append("t=8 simulation matrix differs from the display")
    # the 12x12 layer display (r=1, t=3, unit blocks) and the chain encoding
    lay = StepOneLayout.make([(1, 1, 1)], (1, 1, 1))
    marks = {(1, i, j): Mat.from_rows(QQ, [[10 * i + j]])
             for i in range(1, 4) for j in range(1, 4)}
    pair12 = step_one_pair(QQ, lay, marks)
    expM1 = Mat.from_rows(QQ, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 1, 1, 0, 0, 0],
                               [0, 0, 0, 1, 0, 0], [0, 0, 0, 1, 1, 0], [0, 0, 0, 0, 1, 1]])
    expM2 = Mat.from_rows(QQ, [[2, 0, 0, 0, 0, 0], [0, 2, 0, 0, 0, 0], [0, 1, 2, 0, 0, 0],
                               [0, 0, 0, 2, 0, 0], [0, 0, 0, 1, 2, 0], [0, 0, 0, 0, 1, 2]])
    expN1 = Mat.from_rows(QQ, [[11, 12, 0, 13, 0, 0], [0, 0, 0, 0, 0, 0],
                               [21, 22, 0, 23, 0, 0], [0, 0, 0, 0, 0, 0],
                               [0, 0, 0, 0, 0, 0], [31, 32, 0, 33, 0, 0]])
    if (pair12.M.submatrix(0, 6, 0, 6) != expM1 or pair12.M.submatrix(6, 12, 6, 12) != expM2
            or pair12.N.submatrix(0, 6, 6, 12) != expN1
            or not pair12.N.submatrix(0, 12, 0, 6).is_zero()
            or not pair12.N.submatrix(6, 12, 6, 12).is_zero()):
        problems.append("12x12 layer instance differs from the display")
    chain3 = Poset.chain(3)
    Xc = PosetRep.make(chain3, QQ, (1, 1, 1), Mat.from_rows(QQ, [[11, 12, 13]]))
    pc = encode_poset_pair(Xc)
    expM = Mat.block_diag(QQ, [Mat.from_rows(QQ, [[1]]), expM2])
    expN = Mat.zeros(QQ, 7, 7)
    for col, val in ((1, 11), (2, 12), (4, 13)):
        expN = expN.set_block(0, col, Mat.from_rows(QQ, [[val]]))
    if pc.M != expM or pc.N != expN:
        problems.append("t=3 chain encoding differs from the display")
    # oracle iff on three posets
    posets = [Poset.chain(3), Poset.antichain(2), Poset.make(3, [(1, 3)])]
    agreements = 0
    for P in posets:
        widths = (1,) * P.size
        for trial in range(40):
            m = rng.randint(1, 2)
            X = PosetRep.make(P, f, widths, rng.matrix(f, m, sum(widths)))
            if trial % 2 == 0:
                Y = _rand_poset_witness(rng, X).apply(X)
            else:
                Y = PosetRep.make(P, f, widths, rng.matrix(f, m, sum(widths)))
            a = poset_iso(X, Y)
            b = sim_pairs(encode_poset_pair(X).as_tuple(), encode_poset_pair(Y).as_tuple())
            if a.kind == "unknown" or b.kind == "unknown" or a.is_found != b.is_found:
                problems.append(f"iff broken for {dict(P=P.relation)} trial {trial}: "
                                f"{a.kind} vs {b.kind}")
                break
            agreements += 1
        if problems:
            break
    ok = not problems
    detail = problems[0] if problems else \
        f"displays bit-exact, {agreements}/120 oracle agreements"
    return CriterionResult(5, "poset containment iff", ok, time.time() - t0,
                           300.0, detail)


def criterion_6() -> CriterionResult:
    """Wild gadget: equivalence of 15 x 15 x 3 gadgets over GF(2) matches
    scalar-pair equality on all 16 pairs; five 2x2 positives over GF(3)
    have constructed, verified witnesses."""
    t0 = time.time()
    f2, f3 = GF(2), GF(3)
    problems = []
    gadgets = {(x, y): wild_gadget(Mat.from_rows(f2, [[x]]), Mat.from_rows(f2, [[y]]))
               for x in range(2) for y in range(2)}
    for p1, g1 in gadgets.items():
        for p2, g2 in gadgets.items():
            out = brute_force_spatial_equiv(g1, g2)
            want = "found" if p1 == p2 else "certified_no"
            if out.kind != want:
                problems.append(f"gadget pair {p1} vs {p2}: {out.kind}, wanted {want}")
    rng = SplitMix(606)
    for trial in range(5):
        X, Y = rng.matrix(f3, 2, 2), rng.matrix(f3, 2, 2)
        S = rng.invertible(f3, 2)
        Xc, Yc = invert(S) @ X @ S, invert(S) @ Y @ S
        w = gadget_similarity_witness(S)
        if transform_spatial(wild_gadget(X, Y), w) != wild_gadget(Xc, Yc):
            problems.append(f"constructed witness fails at trial {trial}")
    ok = not problems
    detail = problems[0] if problems else \
        "16/16 scalar pairs decided correctly, 5 constructed witnesses verified"
    return CriterionResult(6, "wild gadget iff", ok, time.time() - t0, 600.0, detail)


def criterion_7() -> CriterionResult:
    """Zero padding is invisible to equivalence: padded matrices are
    equivalent iff their regular parts are (exhaustive oracle)."""
    t0 = time.time()
    rng = SplitMix(707)
    problems = []
    checked = 0
    for trial in range(100):
        if trial % 2 == 0:
            field, pad = GF(2), (1, 1, 1)
        else:
            field, pad = GF(3), (1, 1, 0)
        p = field.p
        base = (rng.randint(1, 2), rng.randint(1, 2), 2)
        A0 = SpatialMatrix(*base, field, [rng.randrange(p) for _ in range(base[0] * base[1] * 2)])
        if trial % 4 < 2:
            w = SpatialWitness(rng.invertible(field, base[0]), rng.invertible(field, base[1]),
                               rng.invertible(field, 2))
            B0 = transform_spatial(A0, w)
        else:
            B0 = SpatialMatrix(*base, field, [rng.randrange(p) for _ in range(base[0] * base[1] * 2)])
        zero = SpatialMatrix.zeros(field, *pad)
        A = direct_sum_spatial(A0, zero)
        B = direct_sum_spatial(B0, zero)
        whole = brute_force_spatial_equiv(A, B)
        regA, _ = regular_part(A)
        regB, _ = regular_part(B)
        if regA.shape() != regB.shape():
            reg_equiv = False
        else:
            out = brute_force_spatial_equiv(regA, regB)
            if out.kind == "unknown":
                problems.append(f"regular-part oracle undecided at trial {trial}")
                break
            reg_equiv = out.is_found
        if whole.kind == "unknown" or whole.is_found != reg_equiv:
            problems.append(f"regular-part law broken at trial {trial}")
            break
        checked += 1
    ok = not problems
    detail = problems[0] if problems else f"{checked} padded pairs agree with regular parts"
    return CriterionResult(7, "regular part law", ok, time.time() - t0, 120.0, detail)


def _np_cube(sp: SpatialMatrix) -> np.ndarray:
    return np.array([int(x) for x in sp.data], dtype=np.int64).reshape(sp.m, sp.n, sp.q)


def criterion_8() -> CriterionResult:
    """Cube embedding: tensor-action equivalence (exhaustive one-matrix
    action) coincides with spatial equivalence of the inputs."""
    t0 = time.time()
    f = GF(2)
    problems = []
    for shape in ((1, 1, 1), (1, 1, 2)):
        m, n, q = shape
        side = m + n + q
        inputs = list(_spatial_all(f, m, n, q))
        cubes = {sp.key(): _np_cube(tensor_embed(sp)) for sp in inputs}
        keys = [sp.key() for sp in inputs]
        byte_of = {k: cubes[k].tobytes() for k in keys}
        group = [modmat.to_np(M) for M in gl_list(side, 2)]
        inv_t = {}
        for C in group:
            Cm = Mat(side, side, f, [int(x) for x in C.reshape(-1)])
            inv_t[C.tobytes()] = modmat.to_np(invert(Cm.transpose()))
        spatial_eq = {}
        for a in keys:
            for b in keys:
                A = next(s for s in inputs if s.key() == a)
                B = next(s for s in inputs if s.key() == b)
                spatial_eq[(a, b)] = brute_force_spatial_equiv(A, B).is_found
        for p in range(4):
            reach = {k: set() for k in keys}
            for k in keys:
                cube = cubes[k]
                for C in group:
                    Cv = inv_t[C.tobytes()]
                    mats = [C if axis < p else Cv for axis in range(3)]
                    img = modmat.transform_cube(cube, mats[0], mats[1], mats[2], 2)
                    reach[k].add(img.tobytes())
            for a in keys:
                for b in keys:
                    tensor_hit = byte_of[b] in reach[a]
                    if tensor_hit != spatial_eq[(a, b)]:
                        problems.append(f"embedding iff broken at shape {shape}, p={p}")
                        break
                if problems:
                    break
            if problems:
                break
        if problems:
            break
    ok = not problems
    detail = problems[0] if problems else \
        "tensor action orbits match spatial equivalence for both shapes, all p"
    return CriterionResult(8, "cube embedding iff", ok, time.time() - t0, 300.0, detail)


def _affine_diagrams():
    """The tame list, three sizes per infinite family: cycles, forked
    paths, and the three exceptional branched trees."""
    out = []
    for n in (1, 2, 5):  # cycle on n vertices (loop when n = 1)
        edges = [(i, i % n + 1) for i in range(1, n + 1)]
        out.append((f"cycle{n}", n, edges))
    for path in (2, 4, 6):  # forks at both ends of a path
        v = path + 4
        edges = [(1, 3), (2, 3), (v - 2, v - 1), (v - 2, v)]
        edges += [(i, i + 1) for i in range(3, v - 2)]
        out.append((f"fork{path}", v, edges))
    e6 = ("e6", 7, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7)])
    e7 = ("e7", 8, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (4, 8)])
    e8 = ("e8", 9, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (6, 9)])
    out.extend([e6, e7, e8])
    return out


def criterion_9() -> CriterionResult:
    """Classification lists: the tame list is tame and one extra edge
    breaks it; the six critical posets are wild and no 4-element poset is."""
    t0 = time.time()
    rng = SplitMix(909)
    problems = []
    for name, v, edges in _affine_diagrams():
        oriented = [(f"a{k}", (s, t) if rng.randrange(2) else (t, s))
                    for k, (s, t) in enumerate(edges)]
        Q = Quiver.make(v, [(a, s, t) for a, (s, t) in oriented])
        if not quiver_is_tame(Q):
            problems.append(f"{name} misclassified as wild")
            continue
        extra_bad = True
        for s in range(1, v + 1):
            for t in range(s, v + 1):
                arrows = [(a, x, y) for a, (x, y) in oriented] + [("extra", s, t)]
                if quiver_is_tame(Quiver.make(v, arrows)):
                    extra_bad = False
                    problems.append(f"{name} + edge ({s},{t}) misclassified as tame")
                    break
            if not extra_bad:
                break
    if quiver_is_tame(Quiver.make(1, [("a", 1, 1), ("b", 1, 1)])):
        problems.append("two-loop vertex misclassified as tame")
    if quiver_is_tame(Quiver.make(6, [(f"a{i}", i, 6) for i in range(1, 6)])):
        problems.append("5-star misclassified as tame")
    names = ["(1,1,1,1,1)", "(1,1,1,2)", "(2,2,3)", "(1,3,4)", "(1,2,6)", "(N,5)"]
    for nm in names:
        if not poset_is_wild(critical_poset(nm)):
            problems.append(f"critical poset {nm} misclassified")
    pairs = [(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    count4 = 0
    for mask in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        closed = True
        for (i, j) in rel:
            for (k, l) in rel:
                if j == k and (i, l) not in rel:
                    closed = False
        if not closed:
            continue
        count4 += 1
        if poset_is_wild(Poset.make(4, rel)):
            problems.append(f"4-element poset {sorted(rel)} misclassified as wild")
            break
    ok = not problems
    detail = problems[0] if problems else \
        f"tame list + extra-edge breakage verified; 6 critical posets wild; " \
        f"{count4} four-element posets non-wild"
    return CriterionResult(9, "classification lists", ok, time.time() - t0, 60.0, detail)


def criterion_10() -> CriterionResult:
    """The two 3 x 3 x 2 counterexample fixtures are inequivalent by both
    deciders, while their 1 x 1 slice pairs are mixing-equivalent."""
    t0 = time.time()
    f = GF(2)
    A = SpatialMatrix.from_slices(f, [Mat.from_rows(f, [[1, 0, 0], [0, 0, 0], [0, 0, 1]]),
                                      Mat.from_rows(f, [[0, 0, 0], [0, 1, 0], [0, 0, 0]])])
    B = SpatialMatrix.from_slices(f, [Mat.from_rows(f, [[1, 0, 0], [0, 0, 0], [0, 0, 1]]),
                                      Mat.from_rows(f, [[0, 0, 0], [0, 1, 0], [0, 0, 1]])])
    problems = []
    if spatial2_equiv(A, B) is not None:
        problems.append("canonical decider calls the fixtures equivalent")
    if not brute_force_spatial_equiv(A, B).is_no:
        problems.append("oracle does not certify the fixtures inequivalent")
    one, zero = Mat.from_rows(f, [[1]]), Mat.from_rows(f, [[0]])
    out = tuple_equiv((one, zero), (one, one), allow_mixing=True)
    if not out.is_found:
        problems.append("slice pairs not mixing-equivalent")
    else:
        P, Q, T = out.witness
        mixed = [sum((so.scale(T[i, j]) for i, so in enumerate((one, zero))),
                     Mat.zeros(f, 1, 1)) for j in range(2)]
        if [P @ M @ Q for M in mixed] != [one, one]:
            problems.append("mixing witness does not verify")
    ok = not problems
    detail = problems[0] if problems else \
        "fixtures inequivalent both ways; slice pairs mixing-equivalent"
    return CriterionResult(10, "counterexample fixtures", ok, time.time() - t0,
                           10.0, detail)


ALL_CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)

QUICK_CRITERIA = (criterion_2, criterion_6, criterion_9, criterion_10)


def run_suite(level: str = "desk", emit=print) -> list:
    fns = ALL_CRITERIA if level == "desk" else QUICK_CRITERIA
    results = []
    for fn in fns:
        res = fn()
        results.append(res)
        if emit:
            emit(res.line())
    return results
