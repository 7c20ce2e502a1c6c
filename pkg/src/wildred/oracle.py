"""Ground-truth equivalence deciders.

Every equivalence question is linearized into an EquivProblem: named
unknown blocks, homogeneous linear constraints, and invertibility
requirements on some blocks.  The constraint kernel is the intertwiner
space; a positive answer is an element with the required blocks
invertible, re-verified against the original statement before return.

Certified negatives come from sound shortcuts only: zero or
dimension-mismatched solution spaces (composition with an isomorphism
is a linear bijection of hom spaces), a common kernel or cokernel
shared by every basis element of a required block (every combination is
then singular), rank filters, or full enumeration of the solution space
within budget.  Probabilistic search never certifies a negative.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import modmat
from .errors import (BudgetExceeded, FieldMismatch, InfiniteField,
                     InternalCheckFailed, ShapeMismatch, WildredError)
from .fields import FieldSpec
from .matrix import Mat, invert, is_invertible, kernel_basis, rank
from .rng import SplitMix

DEFAULT_BUDGET = 1 << 22
DEFAULT_TRIALS = 32
DEFAULT_BOUND = 100


def budget_from_env(budget=None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("WILDRED_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class SearchOutcome:
    kind: str  # "found" | "certified_no" | "unknown"
    witness: object = None
    trials: int = 0
    detail: str = ""

    @staticmethod
    def found(witness, detail=""):
        return SearchOutcome("found", witness, 0, detail)

    @staticmethod
    def certified_no(detail=""):
        return SearchOutcome("certified_no", None, 0, detail)

    @staticmethod
    def unknown(trials, detail=""):
        return SearchOutcome("unknown", None, trials, detail)

    @property
    def is_found(self):
        return self.kind == "found"

    @property
    def is_no(self):
        return self.kind == "certified_no"


@dataclass
class EquivProblem:
    """Unknown blocks + homogeneous linear constraints + invertibility.

    equations are sparse rows: lists of (block_name, row, col, coeff).
    invertibility requirements are block names, or ("diag", name, cuts)
    demanding invertible diagonal blocks at the given strip boundaries.
    """

    field: FieldSpec
    blocks: list  # [(name, rows, cols)]
    equations: list = dc_field(default_factory=list)
    invertible: list = dc_field(default_factory=list)

    def add_equation(self, terms):
        self.equations.append(list(terms))

    def _offsets(self):
        off, total = {}, 0
        for name, r, c in self.blocks:
            off[name] = total
            total += r * c
        return off, total

    def _shapes(self):
        return {name: (r, c) for name, r, c in self.blocks}

    def unknown_count(self) -> int:
        return sum(r * c for _, r, c in self.blocks)


def solve_intertwiner(problem: EquivProblem) -> list:
    """Deterministic basis of the solution space, as dicts name -> Mat."""
    f = problem.field
    off, total = problem._offsets()
    shapes = problem._shapes()
    if f.is_finite:
        M = np.zeros((len(problem.equations), total), dtype=np.int64)
        for i, eq in enumerate(problem.equations):
            for name, r, c, coeff in eq:
                j = off[name] + r * shapes[name][1] + c
                M[i, j] = (M[i, j] + int(coeff)) % f.p
        K = modmat.kernel_basis(M, f.p) if total else np.zeros((0, 0), dtype=np.int64)
        vecs = [K[:, t] for t in range(K.shape[1])]
    else:
        rows = []
        for eq in problem.equations:
            row = [f.zero] * total
            for name, r, c, coeff in eq:
                j = off[name] + r * shapes[name][1] + c
                row[j] = f.add(row[j], f.coerce(coeff))
            rows.append(row)
        M = Mat.from_rows(f, rows) if rows else Mat.zeros(f, 0, total)
        vecs = [[v[i, 0] for i in range(total)] for v in kernel_basis(M)]
    basis = []
    for vec in vecs:
        elem = {}
        for name, r, c in problem.blocks:
            o = off[name]
            elem[name] = Mat(r, c, f, [f.coerce(int(vec[o + t]) if f.is_finite else vec[o + t])
                                       for t in range(r * c)])
        basis.append(elem)
    return basis


def _requirement_ok(elem: dict, requirements) -> bool:
    for req in requirements:
        if isinstance(req, tuple) and req[0] == "diag":
            _, name, cuts = req
            M = elem[name]
            for a, b in zip(cuts, cuts[1:]):
                if not is_invertible(M.submatrix(a, b, a, b)):
                    return False
        else:
            if not is_invertible(elem[req]):
                return False
    return True


def _combine(field, basis, coeffs) -> dict:
    out = {}
    for name in basis[0]:
        shape = basis[0][name]
        acc = Mat.zeros(field, shape.rows, shape.cols)
        for c, elem in zip(coeffs, basis):
            if c:
                acc = acc + elem[name].scale(c)
        out[name] = acc
    return out


def _required_names(requirements):
    return [req[1] if isinstance(req, tuple) else req for req in requirements]


def common_kernel_blocked(field, basis, requirements) -> bool:
    """True when some required block has a shared kernel or cokernel
    across the whole basis, so every combination is singular."""
    for name in _required_names(requirements):
        mats = [elem[name] for elem in basis]
        n = mats[0].rows
        if n == 0:
            continue
        if field.is_finite:
            stack = np.vstack([modmat.to_np(M) for M in mats])
            if modmat.rank(stack, field.p) < n:
                return True
            stack_t = np.vstack([modmat.to_np(M).T for M in mats])
            if modmat.rank(stack_t, field.p) < n:
                return True
        else:
            stack = mats[0]
            stack_t = mats[0].transpose()
            for M in mats[1:]:
                stack = stack.vstack(M)
                stack_t = stack_t.vstack(M.transpose())
            if rank(stack) < n or rank(stack_t) < n:
                return True
    return False


def find_invertible(basis: list, requirements, mode=("exhaustive", None),
                    rng: SplitMix | None = None, field: FieldSpec | None = None) -> SearchOutcome:
    """Search the span of basis for an element whose required blocks are
    invertible.

    mode ("exhaustive", budget): full coordinate enumeration over a
    finite field; CertifiedNo when nothing qualifies; BudgetExceeded
    when |F|^dim is over budget.
    mode ("probabilistic", (trials, bound)): random sampling; Found or
    Unknown, never CertifiedNo.
    """
    if not basis:
        if field is None:
            raise WildredError("empty basis needs an explicit field")
        zero_elem = {}
        ok = _requirement_ok(zero_elem, requirements) if not requirements else False
        # dimension-zero space: the only element is zero
        return SearchOutcome.found({}) if ok else SearchOutcome.certified_no("zero space")
    f = field or next(iter(basis[0].values())).field
    dim = len(basis)
    kind, arg = mode
    if kind == "exhaustive":
        if not f.is_finite:
            raise InfiniteField("exhaustive search needs a finite field")
        budget = budget_from_env(arg)
        total = f.p ** dim
        if total > budget:
            raise BudgetExceeded(f"{f.p}^{dim} > {budget}")
        if common_kernel_blocked(f, basis, requirements):
            return SearchOutcome.certified_no("common kernel")
        for coeffs in itertools.product(range(f.p), repeat=dim):
            elem = _combine(f, basis, coeffs)
            if _requirement_ok(elem, requirements):
                return SearchOutcome.found(elem)
        return SearchOutcome.certified_no("exhausted solution space")
    if kind == "probabilistic":
        trials, bound = arg if arg else (DEFAULT_TRIALS, DEFAULT_BOUND)
        rng = rng or SplitMix(0)
        for t in range(trials):
            if f.is_finite:
                coeffs = [rng.randrange(f.p) for _ in range(dim)]
            else:
                coeffs = [f.coerce(rng.randint(-bound, bound)) for _ in range(dim)]
            elem = _combine(f, basis, coeffs)
            if _requirement_ok(elem, requirements):
                return SearchOutcome.found(elem, detail=f"trial {t}")
        return SearchOutcome.unknown(trials)
    raise WildredError(f"unknown search mode {kind!r}")


# -- hom spaces for matrix tuples ------------------------------------------

def _tuple_hom_problem(field, A_tuple, B_tuple) -> EquivProblem:
    """Unknowns (P, W) with P @ A_i == B_i @ W for every i."""
    m, n = A_tuple[0].rows, A_tuple[0].cols
    prob = EquivProblem(field, [("P", m, m), ("W", n, n)], invertible=["P", "W"])
    for A, B in zip(A_tuple, B_tuple):
        for r in range(m):
            for c in range(n):
                terms = []
                for t in range(m):
                    if A[t, c]:
                        terms.append(("P", r, t, A[t, c]))
                for t in range(n):
                    if B[r, t]:
                        terms.append(("W", t, c, field.neg(B[r, t])))
                prob.add_equation(terms)
    return prob


def _sim_hom_problem(field, A_tuple, B_tuple) -> EquivProblem:
    """Unknown S with A_i @ S == S @ B_i for every i (similarity)."""
    n = A_tuple[0].rows
    prob = EquivProblem(field, [("S", n, n)], invertible=["S"])
    for A, B in zip(A_tuple, B_tuple):
        for r in range(n):
            for c in range(n):
                terms = []
                for t in range(n):
                    if A[r, t]:
                        terms.append(("S", t, c, A[r, t]))
                for t in range(n):
                    if B[t, c]:
                        terms.append(("S", r, t, field.neg(B[t, c])))
                prob.add_equation(terms)
    return prob


def _layered_search(field, basis, requirements, end_dims, rng, budget, trials, bound) -> SearchOutcome:
    """Shared decision ladder for hom spaces.

    end_dims: dims of the two endomorphism spaces (certified necessary
    condition: an isomorphism makes both equal to dim of this space).
    """
    dim = len(basis)
    if dim == 0:
        # callers pre-handle the size-0 case; a zero element is singular
        return SearchOutcome.certified_no("zero hom space")
    for ed in end_dims:
        if ed is not None and ed != dim:
            return SearchOutcome.certified_no(f"hom dim {dim} != endo dim {ed}")
    if common_kernel_blocked(field, basis, requirements):
        return SearchOutcome.certified_no("common kernel")
    if field.is_finite:
        total = field.p ** dim
        if total <= budget:
            return find_invertible(basis, requirements, ("exhaustive", budget), rng, field)
    out = find_invertible(basis, requirements, ("probabilistic", (trials, bound)), rng, field)
    return out


def sim_pairs(A_pair, B_pair, budget=None, rng=None,
              trials=DEFAULT_TRIALS, bound=DEFAULT_BOUND) -> SearchOutcome:
    """Simultaneous similarity of pairs: S with S^-1 A_i S = B_i.

    Witness is the matrix S, re-verified before return.
    """
    A_pair, B_pair = tuple(A_pair), tuple(B_pair)
    field = A_pair[0].field
    n = A_pair[0].rows
    for M in (*A_pair, *B_pair):
        if M.field is not field:
            raise FieldMismatch("sim_pairs over mixed fields")
        if M.shape() != (n, n):
            raise ShapeMismatch("sim_pairs needs equal square matrices")
    budget = budget_from_env(budget)
    rng = rng or SplitMix(0)
    if A_pair == B_pair:
        return SearchOutcome.found(Mat.identity(field, n))
    if _word_rank_mismatch(A_pair, B_pair):
        return SearchOutcome.certified_no("conjugation-invariant rank differs")
    if _pencil_key(A_pair) != _pencil_key(B_pair):
        # simultaneous similarity is a pencil equivalence in particular
        return SearchOutcome.certified_no("pencil invariants differ")
    basis = solve_intertwiner(_sim_hom_problem(field, A_pair, B_pair))
    end_a = len(solve_intertwiner(_sim_hom_problem(field, A_pair, A_pair)))
    end_b = len(solve_intertwiner(_sim_hom_problem(field, B_pair, B_pair)))
    out = _layered_search(field, [{"S": e["S"]} for e in basis], ["S"],
                          (end_a, end_b), rng, budget, trials, bound)
    if not out.is_found:
        return out
    S = out.witness["S"]
    Sinv = invert(S)
    for A, B in zip(A_pair, B_pair):
        if Sinv @ A @ S != B:
            raise InternalCheckFailed("sim_pairs witness failed verification")
    return SearchOutcome.found(S)


def _pencil_key(pair):
    from .errors import NonSplitSpectrum
    from .pencil import Pencil, kronecker_decompose
    try:
        data, _ = kronecker_decompose(Pencil(pair[0], pair[1]))
        return ("data", data.serialize())
    except NonSplitSpectrum as exc:
        return ("nonsplit", tuple(exc.factor.coeffs))


def _word_rank_mismatch(A_pair, B_pair) -> bool:
    """Ranks of a fixed set of words in (M, N): similarity invariants."""
    (M, N), (Mp, Np) = A_pair, B_pair
    words = [
        lambda X, Y: X, lambda X, Y: Y,
        lambda X, Y: X + Y, lambda X, Y: X - Y,
        lambda X, Y: X @ Y, lambda X, Y: Y @ X,
        lambda X, Y: X @ Y - Y @ X,
        lambda X, Y: X @ X, lambda X, Y: Y @ Y,
    ]
    return any(rank(w(M, N)) != rank(w(Mp, Np)) for w in words)


def _mix_tuple(field, A_tuple, T: Mat):
    """(A_1, ..., A_q) T with columns of T as combination coefficients."""
    q = len(A_tuple)
    out = []
    for j in range(q):
        acc = Mat.zeros(field, A_tuple[0].rows, A_tuple[0].cols)
        for i in range(q):
            if T[i, j]:
                acc = acc + A_tuple[i].scale(T[i, j])
        out.append(acc)
    return tuple(out)


def tuple_equiv(A_tuple, B_tuple, allow_mixing: bool, budget=None, rng=None,
                trials=DEFAULT_TRIALS, bound=DEFAULT_BOUND) -> SearchOutcome:
    """Equivalence of q-tuples of m x n matrices.

    Without mixing: P A_i Q = B_i with P, Q invertible.  With mixing the
    tuple is first replaced by (A_1, ..., A_q) T for T in GL(q), finite
    fields only.  Found witness is (P, Q, T), verified exactly.
    """
    A_tuple, B_tuple = tuple(A_tuple), tuple(B_tuple)
    if len(A_tuple) != len(B_tuple):
        raise ShapeMismatch("tuples of different lengths")
    field = A_tuple[0].field if A_tuple else None
    q = len(A_tuple)
    if q == 0:
        raise ShapeMismatch("empty tuples have no ambient field")
    m, n = A_tuple[0].shape()
    for M in (*A_tuple, *B_tuple):
        if M.field is not field:
            raise FieldMismatch("tuple_equiv over mixed fields")
        if M.shape() != (m, n):
            raise ShapeMismatch("tuple matrices must share one shape")
    budget = budget_from_env(budget)
    rng = rng or SplitMix(0)
    if allow_mixing and not field.is_finite:
        raise InfiniteField("slice mixing enumeration needs a finite field")
    mixers = gl_enumerate(q, field.p, budget) if allow_mixing else iter([Mat.identity(field, q)])
    rank_b = [rank(B) for B in B_tuple]
    end_a = end_b = None  # lazy; shared across T since mixing preserves End
    undecided = False
    trials_done = 0
    for T in mixers:
        twisted = _mix_tuple(field, A_tuple, T)
        if any(rank(tw) != rb for tw, rb in zip(twisted, rank_b)):
            continue
        if twisted == B_tuple:
            w = (Mat.identity(field, m), Mat.identity(field, n), T)
            return SearchOutcome.found(w)
        basis = solve_intertwiner(_tuple_hom_problem(field, twisted, B_tuple))
        if not basis:
            if m == 0 and n == 0:
                return SearchOutcome.found((Mat.identity(field, 0), Mat.identity(field, 0), T))
            continue
        if end_a is None:
            end_a = len(solve_intertwiner(_tuple_hom_problem(field, A_tuple, A_tuple)))
            end_b = len(solve_intertwiner(_tuple_hom_problem(field, B_tuple, B_tuple)))
        out = _layered_search(field, basis, ["P", "W"], (end_a, end_b),
                              rng, budget, trials, bound)
        if out.is_found:
            P, W = out.witness["P"], out.witness["W"]
            Q = invert(W)
            for tw, B in zip(twisted, B_tuple):
                if P @ tw @ Q != B:
                    raise InternalCheckFailed("tuple_equiv witness failed verification")
            return SearchOutcome.found((P, Q, T))
        if out.kind == "unknown":
            undecided = True
            trials_done += out.trials
    if undecided:
        return SearchOutcome.unknown(trials_done)
    return SearchOutcome.certified_no("all mixings excluded")


def gl_enumerate(n: int, p: int, budget=None):
    """All invertible n x n matrices over GF(p), lexicographic by entry
    vector; raises BudgetExceeded when p^(n^2) is over budget."""
    budget = budget_from_env(budget)
    field = FieldSpec(p)
    if p ** (n * n) > budget:
        raise BudgetExceeded(f"{p}^{n*n} > {budget}")
    if n == 0:
        yield Mat.identity(field, 0)
        return
    for entries in itertools.product(range(p), repeat=n * n):
        arr = np.array(entries, dtype=np.int64).reshape(n, n)
        if modmat.is_invertible(arr, p):
            yield Mat(n, n, field, [field.coerce(int(x)) for x in entries])


_GL_CACHE: dict = {}


def gl_list(n: int, p: int, budget=None) -> list:
    key = (n, p)
    if key not in _GL_CACHE:
        _GL_CACHE[key] = list(gl_enumerate(n, p, budget))
    return _GL_CACHE[key]


def brute_force_spatial_equiv(A, B, budget=None, rng=None,
                              trials=DEFAULT_TRIALS) -> SearchOutcome:
    """Decisive spatial equivalence over a finite field: enumerate the
    slice-mixing matrix T, linearize (R, S) per mixing, decide by the
    layered certified search.  Found witness is a verified SpatialWitness.
    """
    from .spatial import SpatialWitness, slice_tuple, transform_spatial
    if A.shape() != B.shape():
        raise ShapeMismatch("spatial shapes differ")
    if A.field is not B.field:
        raise FieldMismatch("spatial fields differ")
    if not A.field.is_finite:
        raise InfiniteField("brute_force_spatial_equiv needs a finite field")
    if A.q == 0:
        f = A.field
        w = SpatialWitness(Mat.identity(f, A.m), Mat.identity(f, A.n), Mat.identity(f, 0))
        return SearchOutcome.found(w)
    out = tuple_equiv(slice_tuple(A, 3), slice_tuple(B, 3), allow_mixing=True,
                      budget=budget, rng=rng, trials=trials)
    if not out.is_found:
        return out
    P, Q, T = out.witness
    w = SpatialWitness(P.transpose(), Q, T)
    if transform_spatial(A, w) != B:
        raise InternalCheckFailed("spatial oracle witness failed verification")
    return SearchOutcome.found(w)
