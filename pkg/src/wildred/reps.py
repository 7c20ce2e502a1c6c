"""Quiver and poset representations, isomorphism tests, and the
tame/wild classification lists.

A quiver representation assigns a space to each vertex and a matrix of
shape (target dim) x (source dim) to each arrow; isomorphism is a
per-vertex base change.  A poset representation is a striped block
matrix [A_1 | ... | A_t] under row transformations, column
transformations within strips, and left-to-right column additions along
the order.  Tameness of quivers is decided by positive semidefiniteness
of 2I - M for the underlying multigraph; wildness of posets by induced
containment of one of the six critical posets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (FieldMismatch, InternalCheckFailed, NotAChain,
                     ShapeMismatch, StructureMismatch, WildredError)
from .fields import QQ, FieldSpec
from .matrix import Mat, invert, is_invertible, rank
from .oracle import (DEFAULT_BOUND, DEFAULT_TRIALS, EquivProblem,
                     SearchOutcome, _layered_search, budget_from_env,
                     solve_intertwiner)
from .poly import charpoly
from .rng import SplitMix


# -- quivers ---------------------------------------------------------------

@dataclass(frozen=True)
class Quiver:
    """Directed graph; vertices 1..v, arrows (id, source, target).
    Loops and parallel arrows are allowed."""

    vertices: int
    arrows: tuple  # ((id, src, dst), ...)

    @staticmethod
    def make(vertices: int, arrows) -> "Quiver":
        arrows = tuple((str(a), int(s), int(t)) for a, s, t in arrows)
        for a, s, t in arrows:
            if not (1 <= s <= vertices and 1 <= t <= vertices):
                raise StructureMismatch(f"arrow {a}: endpoint out of range")
        ids = [a for a, _, _ in arrows]
        if len(set(ids)) != len(ids):
            raise StructureMismatch("duplicate arrow ids")
        return Quiver(vertices, arrows)

    def arrow_map(self) -> dict:
        return {a: (s, t) for a, s, t in self.arrows}


@dataclass(frozen=True)
class QuiverRep:
    quiver: Quiver
    dims: tuple
    mats: tuple  # Mat per arrow, in quiver.arrows order
    field: FieldSpec

    @staticmethod
    def make(quiver: Quiver, field: FieldSpec, dims, mats) -> "QuiverRep":
        dims = tuple(int(d) for d in dims)
        if len(dims) != quiver.vertices:
            raise StructureMismatch("dims length != vertex count")
        if isinstance(mats, dict):
            mats = [mats[a] for a, _, _ in quiver.arrows]
        mats = tuple(mats)
        if len(mats) != len(quiver.arrows):
            raise StructureMismatch("one matrix per arrow required")
        for M, (a, s, t) in zip(mats, quiver.arrows):
            if M.field is not field:
                raise FieldMismatch(f"arrow {a} over the wrong field")
            if M.shape() != (dims[t - 1], dims[s - 1]):
                raise ShapeMismatch(f"arrow {a}: expected {dims[t-1]}x{dims[s-1]}, got {M.shape()}")
        return QuiverRep(quiver, dims, mats, field)

    def mat(self, arrow_id: str) -> Mat:
        for M, (a, _, _) in zip(self.mats, self.quiver.arrows):
            if a == arrow_id:
                return M
        raise KeyError(arrow_id)


@dataclass(frozen=True)
class QuiverWitness:
    """Invertible S_v per vertex with S_t A S_s^-1 = A' for every arrow."""

    mats: tuple

    def apply(self, rep: QuiverRep) -> QuiverRep:
        new = []
        for M, (a, s, t) in zip(rep.mats, rep.quiver.arrows):
            new.append(self.mats[t - 1] @ M @ invert(self.mats[s - 1]))
        return QuiverRep.make(rep.quiver, rep.field, rep.dims, new)


# -- posets ----------------------------------------------------------------

@dataclass(frozen=True)
class Poset:
    """Strict partial order on 1..t, transitively closed, with
    i < j whenever i precedes j (constructors relabel to enforce it)."""

    size: int
    relation: frozenset  # pairs (i, j) with i strictly below j

    @staticmethod
    def make(size: int, pairs) -> "Poset":
        pairs = set((int(i), int(j)) for i, j in pairs)
        for i, j in pairs:
            if not (1 <= i <= size and 1 <= j <= size):
                raise StructureMismatch("relation element out of range")
            if i == j:
                raise StructureMismatch("strict order cannot be reflexive")
        closed = _transitive_closure(size, pairs)
        for i, j in closed:
            if (j, i) in closed:
                raise StructureMismatch(f"cycle through {i} and {j}")
        if all(i < j for i, j in closed):
            return Poset(size, frozenset(closed))
        relabel = _topological_relabel(size, closed)
        renamed = frozenset((relabel[i], relabel[j]) for i, j in closed)
        return Poset(size, renamed)

    @staticmethod
    def chain(size: int) -> "Poset":
        return Poset.make(size, [(i, i + 1) for i in range(1, size)])

    @staticmethod
    def antichain(size: int) -> "Poset":
        return Poset.make(size, [])

    def precedes(self, i: int, j: int) -> bool:
        return (i, j) in self.relation

    def is_chain(self) -> bool:
        return all(self.precedes(i, j) for i in range(1, self.size + 1)
                   for j in range(i + 1, self.size + 1))


def _transitive_closure(size: int, pairs: set) -> set:
    closed = set(pairs)
    changed = True
    while changed:
        changed = False
        for i, j in list(closed):
            for k in range(1, size + 1):
                if (j, k) in closed and (i, k) not in closed:
                    closed.add((i, k))
                    changed = True
    return closed


def _topological_relabel(size: int, closed: set) -> dict:
    preds = {v: sum(1 for i, j in closed if j == v) for v in range(1, size + 1)}
    order = []
    left = set(range(1, size + 1))
    while left:
        ready = sorted(v for v in left if all(i not in left for i, j in closed if j == v))
        v = ready[0]
        order.append(v)
        left.remove(v)
    del preds
    return {old: new + 1 for new, old in enumerate(order)}


@dataclass(frozen=True)
class PosetRep:
    poset: Poset
    widths: tuple
    mat: Mat
    field: FieldSpec

    @staticmethod
    def make(poset: Poset, field: FieldSpec, widths, mat: Mat) -> "PosetRep":
        widths = tuple(int(w) for w in widths)
        if len(widths) != poset.size:
            raise StructureMismatch("one width per poset element required")
        if mat.cols != sum(widths):
            raise ShapeMismatch(f"matrix width {mat.cols} != strip total {sum(widths)}")
        if mat.field is not field:
            raise FieldMismatch("representation over the wrong field")
        return PosetRep(poset, widths, mat, field)

    def strip_starts(self):
        starts = [0]
        for w in self.widths:
            starts.append(starts[-1] + w)
        return starts

    def strip(self, j: int) -> Mat:
        starts = self.strip_starts()
        return self.mat.submatrix(0, self.mat.rows, starts[j - 1], starts[j])


@dataclass(frozen=True)
class PosetWitness:
    """Invertible row transform R and admissible column transform C with
    R A C = A'.  C's block (i, j) vanishes unless i = j or i precedes j."""

    R: Mat
    C: Mat

    def apply(self, rep: PosetRep) -> PosetRep:
        return PosetRep.make(rep.poset, rep.field, rep.widths, self.R @ rep.mat @ self.C)


# -- direct sums -----------------------------------------------------------

def direct_sum_rep(X, Y):
    """Direct sum of two quiver or two poset representations."""
    if isinstance(X, QuiverRep) and isinstance(Y, QuiverRep):
        if X.quiver != Y.quiver:
            raise StructureMismatch("direct sum over different quivers")
        if X.field is not Y.field:
            raise FieldMismatch("direct sum over different fields")
        dims = tuple(a + b for a, b in zip(X.dims, Y.dims))
        mats = [Mat.block_diag(X.field, [A, B]) for A, B in zip(X.mats, Y.mats)]
        return QuiverRep.make(X.quiver, X.field, dims, mats)
    if isinstance(X, PosetRep) and isinstance(Y, PosetRep):
        if X.poset != Y.poset:
            raise StructureMismatch("direct sum over different posets")
        if X.field is not Y.field:
            raise FieldMismatch("direct sum over different fields")
        f = X.field
        widths = tuple(a + b for a, b in zip(X.widths, Y.widths))
        strips = []
        for j in range(1, X.poset.size + 1):
            strips.append(Mat.block_diag(f, [X.strip(j), Y.strip(j)]))
        mat = strips[0]
        for s in strips[1:]:
            mat = mat.hstack(s)
        return PosetRep.make(X.poset, f, widths, mat)
    raise StructureMismatch("direct_sum_rep needs two representations of one kind")


# -- isomorphism -----------------------------------------------------------

def quiver_iso(X: QuiverRep, Y: QuiverRep, budget=None, rng=None,
               trials=DEFAULT_TRIALS, bound=DEFAULT_BOUND) -> SearchOutcome:
    """Isomorphism search; Found carries a verified QuiverWitness.

    Solves the intertwiner system {S_t A = A' S_s for every arrow} and
    searches it for an all-invertible tuple.
    """
    if X.quiver != Y.quiver:
        raise StructureMismatch("representations of different quivers")
    if X.dims != Y.dims:
        raise StructureMismatch("dimension vectors differ")
    if X.field is not Y.field:
        raise FieldMismatch("representations over different fields")
    f = X.field
    budget = budget_from_env(budget)
    rng = rng or SplitMix(0)
    if X.mats == Y.mats:
        return SearchOutcome.found(QuiverWitness(tuple(Mat.identity(f, d) for d in X.dims)))
    names = [f"S{v}" for v in range(1, X.quiver.vertices + 1)]

    def hom_problem(A: QuiverRep, B: QuiverRep) -> EquivProblem:
        prob = EquivProblem(f, [(names[v], A.dims[v], A.dims[v])
                                for v in range(X.quiver.vertices)],
                            invertible=list(names))
        for MA, MB, (aid, s, t) in zip(A.mats, B.mats, X.quiver.arrows):
            st, ss = names[t - 1], names[s - 1]
            for r in range(MA.rows):
                for c in range(MA.cols):
                    terms = []
                    for k in range(A.dims[t - 1]):
                        if MA[k, c]:
                            terms.append((st, r, k, MA[k, c]))
                    for k in range(A.dims[s - 1]):
                        if MB[r, k]:
                            terms.append((ss, k, c, f.neg(MB[r, k])))
                    prob.add_equation(terms)
        return prob

    basis = solve_intertwiner(hom_problem(X, Y))
    end_x = len(solve_intertwiner(hom_problem(X, X)))
    end_y = len(solve_intertwiner(hom_problem(Y, Y)))
    out = _layered_search(f, basis, names, (end_x, end_y), rng, budget, trials, bound)
    if not out.is_found:
        return out
    mats = tuple(out.witness[nm] for nm in names)
    witness = QuiverWitness(mats)
    if witness.apply(X).mats != Y.mats:
        raise InternalCheckFailed("quiver witness failed verification")
    return SearchOutcome.found(witness)


def _pattern_blocks(poset: Poset):
    """Admissible (i, j) block positions of the column pattern algebra:
    the diagonal plus the order relation (transitively closed)."""
    out = [(i, i) for i in range(1, poset.size + 1)]
    out.extend(sorted(poset.relation))
    return out


def poset_iso(X: PosetRep, Y: PosetRep, budget=None, rng=None,
              trials=DEFAULT_TRIALS, bound=DEFAULT_BOUND) -> SearchOutcome:
    """Isomorphism search; Found carries a verified PosetWitness.

    Linearizes R A = A' D with D in the pattern algebra (closed under
    inversion since the order is transitive); C = D^-1.
    """
    if X.poset != Y.poset:
        raise StructureMismatch("representations of different posets")
    if X.widths != Y.widths or X.mat.rows != Y.mat.rows:
        raise StructureMismatch("strip widths or heights differ")
    if X.field is not Y.field:
        raise FieldMismatch("representations over different fields")
    f = X.field
    budget = budget_from_env(budget)
    rng = rng or SplitMix(0)
    m = X.mat.rows
    starts = X.strip_starts()
    n = starts[-1]
    if X.mat == Y.mat:
        return SearchOutcome.found(PosetWitness(Mat.identity(f, m), Mat.identity(f, n)))
    pattern = _pattern_blocks(X.poset)

    def hom_problem(A: PosetRep, B: PosetRep) -> EquivProblem:
        # unknowns: R (m x m) and one block D_ij per admissible position
        blocks = [("R", m, m)]
        for i, j in pattern:
            blocks.append((f"D{i}_{j}", X.widths[i - 1], X.widths[j - 1]))
        prob = EquivProblem(f, blocks, invertible=["R"] +
                            [f"D{i}_{i}" for i in range(1, X.poset.size + 1)])
        # R A = B D, entry (r, c) with c in strip j, local column cl
        for r in range(m):
            for j in range(1, X.poset.size + 1):
                for cl in range(X.widths[j - 1]):
                    c = starts[j - 1] + cl
                    terms = []
                    for k in range(m):
                        if A.mat[k, c]:
                            terms.append(("R", r, k, A.mat[k, c]))
                    for i, jj in pattern:
                        if jj != j:
                            continue
                        for k in range(X.widths[i - 1]):
                            v = B.mat[r, starts[i - 1] + k]
                            if v:
                                terms.append((f"D{i}_{j}", k, cl, f.neg(v)))
                    prob.add_equation(terms)
        return prob

    names = ["R"] + [f"D{i}_{i}" for i in range(1, X.poset.size + 1)]
    basis = solve_intertwiner(hom_problem(X, Y))
    end_x = len(solve_intertwiner(hom_problem(X, X)))
    end_y = len(solve_intertwiner(hom_problem(Y, Y)))
    out = _layered_search(f, basis, names, (end_x, end_y), rng, budget, trials, bound)
    if not out.is_found:
        return out
    elem = out.witness
    D = Mat.zeros(f, n, n)
    for i, j in pattern:
        D = D.set_block(starts[i - 1], starts[j - 1], elem[f"D{i}_{j}"])
    R = elem["R"]
    C = invert(D)
    witness = PosetWitness(R, C)
    if witness.apply(X).mat != Y.mat:
        raise InternalCheckFailed("poset witness failed verification")
    for i in range(1, X.poset.size + 1):
        for j in range(1, X.poset.size + 1):
            if i != j and not X.poset.precedes(i, j):
                blk = C.submatrix(starts[i - 1], starts[i], starts[j - 1], starts[j])
                if not blk.is_zero():
                    raise InternalCheckFailed("column transform leaves the pattern algebra")
    return SearchOutcome.found(witness)


def chain_poset_canon(X: PosetRep) -> PosetRep:
    """Staircase canonical form over a total order: strip k carries an
    identity block of size d_k = rank[A_1|..|A_k] - rank[A_1|..|A_{k-1}]
    in fresh rows below the previous identities."""
    if not X.poset.is_chain():
        raise NotAChain("chain_poset_canon needs a totally ordered poset")
    f = X.field
    m = X.mat.rows
    starts = X.strip_starts()
    d = []
    prev = 0
    for k in range(1, X.poset.size + 1):
        r = rank(X.mat.submatrix(0, m, 0, starts[k]))
        d.append(r - prev)
        prev = r
    out = Mat.zeros(f, m, starts[-1])
    row = 0
    for k, dk in enumerate(d, start=1):
        ident = Mat.identity(f, dk)
        out = out.set_block(row, starts[k - 1], ident)
        row += dk
    return PosetRep.make(X.poset, f, X.widths, out)


# -- classification lists ----------------------------------------------------

def quiver_is_tame(Q: Quiver) -> bool:
    """Tame iff every connected component of the underlying multigraph
    (loops count 2 on the diagonal) has 2I - M positive semidefinite;
    checked exactly through characteristic polynomial coefficient signs."""
    comps = _components(Q)
    for comp in comps:
        idx = {v: k for k, v in enumerate(comp)}
        nloc = len(comp)
        M = [[0] * nloc for _ in range(nloc)]
        for _, s, t in Q.arrows:
            if s in idx and t in idx:
                if s == t:
                    M[idx[s]][idx[s]] += 2
                else:
                    M[idx[s]][idx[t]] += 1
                    M[idx[t]][idx[s]] += 1
        K = Mat.from_rows(QQ, [[2 * (i == j) - M[i][j] for j in range(nloc)]
                               for i in range(nloc)])
        if not _psd_exact(K):
            return False
    return True


def _components(Q: Quiver):
    parent = list(range(Q.vertices + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, s, t in Q.arrows:
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[rs] = rt
    comps = {}
    for v in range(1, Q.vertices + 1):
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def _psd_exact(K: Mat) -> bool:
    """Symmetric rational matrix PSD iff det(xI - K) = x^n - a1 x^{n-1} +
    a2 x^{n-2} - ... with every a_i >= 0."""
    chi = charpoly(K)
    n = K.rows
    for i, coeff in enumerate(chi.coeffs):
        # coefficient of x^i is (-1)^(n-i) a_{n-i}
        a = coeff if (n - i) % 2 == 0 else -coeff
        if a < 0:
            return False
    return True


CRITICAL_POSETS = (
    ("(1,1,1,1,1)", 5, ()),
    ("(1,1,1,2)", 5, ((4, 5),)),
    ("(2,2,3)", 7, ((1, 2), (3, 4), (5, 6), (6, 7))),
    ("(1,3,4)", 8, ((2, 3), (3, 4), (5, 6), (6, 7), (7, 8))),
    ("(1,2,6)", 9, ((2, 3), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9))),
    ("(N,5)", 9, ((1, 2), (3, 4), (3, 2), (5, 6), (6, 7), (7, 8), (8, 9))),
)


def critical_poset(name: str) -> Poset:
    for nm, size, rel in CRITICAL_POSETS:
        if nm == name:
            return Poset.make(size, rel)
    raise WildredError(f"unknown critical poset {name!r}")


def poset_is_wild(P: Poset) -> bool:
    """Wild iff P contains an induced subposet isomorphic to one of the
    six critical posets; containment by backtracking over injections
    that preserve and reflect the order."""
    for nm, size, rel in CRITICAL_POSETS:
        crit = Poset.make(size, rel)
        if _contains_induced(P, crit):
            return True
    return False


def _contains_induced(P: Poset, C: Poset) -> bool:
    if C.size > P.size:
        return False
    assign = [0] * (C.size + 1)
    used = [False] * (P.size + 1)

    def compatible(a: int, x: int) -> bool:
        for b in range(1, C.size + 1):
            y = assign[b]
            if not y:
                continue
            if C.precedes(a, b) != P.precedes(x, y):
                return False
            if C.precedes(b, a) != P.precedes(y, x):
                return False
        return True

    def backtrack(a: int) -> bool:
        if a > C.size:
            return True
        for x in range(1, P.size + 1):
            if used[x] or not compatible(a, x):
                continue
            assign[a] = x
            used[x] = True
            if backtrack(a + 1):
                return True
            assign[a] = 0
            used[x] = False
        return False

    return backtrack(1)
