"""Dense exact matrices over a FieldSpec.

Entries are stored row-major as an immutable tuple of raw field values
(Fraction over Q, int residue over GF(p)).  Zero-dimensional matrices
(0 x n, m x 0) are legal values.  Every operation is pure; values are
safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FieldMismatch, NonSquare, NotInvertible, ShapeMismatch
from .fields import FieldSpec, Scalar


class Mat:
    __slots__ = ("rows", "cols", "field", "data")

    def __init__(self, rows: int, cols: int, field: FieldSpec, data):
        if rows < 0 or cols < 0:
            raise ShapeMismatch("negative dimension")
        data = tuple(data)
        if len(data) != rows * cols:
            raise ShapeMismatch(f"{rows}x{cols} needs {rows*cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self.field = field
        self.data = data

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_rows(field: FieldSpec, rows: Sequence[Sequence]) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ShapeMismatch("ragged rows")
            flat.extend(field.coerce(x) for x in row)
        return Mat(r, c, field, flat)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Mat":
        z = field.zero
        return Mat(rows, cols, field, [z] * (rows * cols))

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Mat":
        z, o = field.zero, field.one
        return Mat(n, n, field, [o if i == j else z for i in range(n) for j in range(n)])

    @staticmethod
    def scalar_matrix(field: FieldSpec, n: int, c) -> "Mat":
        c = field.coerce(c)
        z = field.zero
        return Mat(n, n, field, [c if i == j else z for i in range(n) for j in range(n)])

    @staticmethod
    def column(field: FieldSpec, entries: Sequence) -> "Mat":
        return Mat(len(entries), 1, field, [field.coerce(x) for x in entries])

    @staticmethod
    def from_cols(field: FieldSpec, cols: Sequence["Mat"]) -> "Mat":
        """Assemble a matrix from column vectors (each n x 1)."""
        if not cols:
            return Mat(0, 0, field, [])
        n = cols[0].rows
        flat = []
        for i in range(n):
            for v in cols:
                if v.rows != n or v.cols != 1:
                    raise ShapeMismatch("column vectors must share height")
                flat.append(v.data[i])
        return Mat(n, len(cols), field, flat)

    # -- access ---------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i * self.cols + j]

    def scalar_at(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self[i, j])

    def row(self, i: int):
        return self.data[i * self.cols:(i + 1) * self.cols]

    def col_vec(self, j: int) -> "Mat":
        return Mat(self.rows, 1, self.field, [self.data[i * self.cols + j] for i in range(self.rows)])

    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def key(self):
        """Hashable identity key (shape + entries)."""
        return (self.rows, self.cols, self.data)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field is other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in self.row(i)) for i in range(self.rows))
        return f"Mat({self.rows}x{self.cols} over {self.field}: [{body}])"

    # -- arithmetic -----------------------------------------------------

    def _same_field(self, other: "Mat"):
        if self.field is not other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.shape() != other.shape():
            raise ShapeMismatch("add shape mismatch")
        add = self.field.add
        return Mat(self.rows, self.cols, self.field,
                   [add(a, b) for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.shape() != other.shape():
            raise ShapeMismatch("sub shape mismatch")
        sub = self.field.sub
        return Mat(self.rows, self.cols, self.field,
                   [sub(a, b) for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "Mat":
        neg = self.field.neg
        return Mat(self.rows, self.cols, self.field, [neg(a) for a in self.data])

    def scale(self, c) -> "Mat":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Mat(self.rows, self.cols, self.field, [mul(c, a) for a in self.data])

    def __matmul__(self, other: "Mat") -> "Mat":
        return self.mul(other)

    def mul(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.shape()} @ {other.shape()}")
        f = self.field
        m, k, n = self.rows, self.cols, other.cols
        out = [f.zero] * (m * n)
        for i in range(m):
            arow = self.data[i * k:(i + 1) * k]
            for t in range(k):
                a = arow[t]
                if not a:
                    continue
                brow = other.data[t * n:(t + 1) * n]
                base = i * n
                for j in range(n):
                    b = brow[j]
                    if b:
                        out[base + j] = f.add(out[base + j], f.mul(a, b))
        return Mat(m, n, f, out)

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, self.field,
                   [self.data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)])

    # -- block assembly ---------------------------------------------------

    def hstack(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.rows != other.rows:
            raise ShapeMismatch("hstack height mismatch")
        flat = []
        for i in range(self.rows):
            flat.extend(self.row(i))
            flat.extend(other.row(i))
        return Mat(self.rows, self.cols + other.cols, self.field, flat)

    def vstack(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.cols != other.cols:
            raise ShapeMismatch("vstack width mismatch")
        return Mat(self.rows + other.rows, self.cols, self.field, self.data + other.data)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Mat":
        flat = []
        for i in range(r0, r1):
            flat.extend(self.data[i * self.cols + c0: i * self.cols + c1])
        return Mat(r1 - r0, c1 - c0, self.field, flat)

    @staticmethod
    def block_diag(field: FieldSpec, blocks: Iterable["Mat"]) -> "Mat":
        blocks = list(blocks)
        m = sum(b.rows for b in blocks)
        n = sum(b.cols for b in blocks)
        out = Mat.zeros(field, m, n)
        data = list(out.data)
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                row = b.row(i)
                base = (r + i) * n + c
                data[base:base + b.cols] = row
            r += b.rows
            c += b.cols
        return Mat(m, n, field, data)

    @staticmethod
    def block(field: FieldSpec, grid: Sequence[Sequence["Mat"]]) -> "Mat":
        """Assemble from a 2-D grid of conformal blocks."""
        rows_of = [row[0].rows for row in grid]
        cols_of = [b.cols for b in grid[0]] if grid else []
        m, n = sum(rows_of), sum(cols_of)
        data = [field.zero] * (m * n)
        r = 0
        for bi, row in enumerate(grid):
            c = 0
            for bj, blk in enumerate(row):
                if blk.rows != rows_of[bi] or blk.cols != cols_of[bj]:
                    raise ShapeMismatch("non-conformal block grid")
                for i in range(blk.rows):
                    base = (r + i) * n + c
                    data[base:base + blk.cols] = blk.row(i)
                c += blk.cols
            r += rows_of[bi]
        return Mat(m, n, field, data)

    def set_block(self, r0: int, c0: int, blk: "Mat") -> "Mat":
        """Return a copy with blk written at (r0, c0)."""
        data = list(self.data)
        for i in range(blk.rows):
            base = (r0 + i) * self.cols + c0
            data[base:base + blk.cols] = blk.row(i)
        return Mat(self.rows, self.cols, self.field, data)


@dataclass(frozen=True)
class RrefResult:
    R: Mat
    pivots: tuple
    rank: int
    P: Mat  # invertible witness: P @ M == R


def rref(M: Mat) -> RrefResult:
    """Reduced row echelon form with an invertible row-operation witness.

    Deterministic pivoting: first nonzero entry in column order.  Over Q
    the elimination runs fraction-free on integer rows (same pivoting,
    same result; rows are rescaled by positive rationals only).
    """
    if M.field.p is None:
        return _rref_fraction_free(M)
    f = M.field
    m, n = M.rows, M.cols
    a = [list(M.row(i)) for i in range(m)]
    p = [list(Mat.identity(f, m).row(i)) for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if a[i][c]), None)
        if pr is None:
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
            p[r], p[pr] = p[pr], p[r]
        inv = f.inv(a[r][c])
        if inv != f.one:
            a[r] = [f.mul(inv, x) for x in a[r]]
            p[r] = [f.mul(inv, x) for x in p[r]]
        for i in range(m):
            if i != r and a[i][c]:
                t = a[i][c]
                arow, prow = a[r], p[r]
                a[i] = [f.sub(x, f.mul(t, y)) for x, y in zip(a[i], arow)]
                p[i] = [f.sub(x, f.mul(t, y)) for x, y in zip(p[i], prow)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    R = Mat(m, n, f, [x for row in a for x in row])
    P = Mat(m, m, f, [x for row in p for x in row])
    return RrefResult(R, tuple(pivots), len(pivots), P)


def _rref_fraction_free(M: Mat) -> RrefResult:
    """Integer Gauss-Jordan on the augmented matrix [D*M | D] (D clears
    row denominators), with a gcd pull per updated row; pivots are
    normalized to 1 only at the end, so no Fraction arithmetic happens
    inside the elimination."""
    from fractions import Fraction
    from math import gcd, lcm
    f = M.field
    m, n = M.rows, M.cols
    rows = []
    for i in range(m):
        den = lcm(*[x.denominator for x in M.row(i)]) if n else 1
        aug = [int(x * den) for x in M.row(i)] + [0] * m
        aug[n + i] = den
        rows.append(aug)
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if rows[i][c]), None)
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        b = rows[r][c]
        for i in range(m):
            if i == r or not rows[i][c]:
                continue
            a = rows[i][c]
            row = [b * x - a * y for x, y in zip(rows[i], rows[r])]
            g = 0
            for x in row:
                g = gcd(g, x)
                if g == 1:
                    break
            rows[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == m:
            break
    rdata, pdata = [], []
    for i in range(m):
        piv = rows[i][pivots[i]] if i < len(pivots) else 1
        rdata.extend(Fraction(x, piv) for x in rows[i][:n])
        pdata.extend(Fraction(x, piv) for x in rows[i][n:])
    R = Mat(m, n, f, rdata)
    P = Mat(m, m, f, pdata)
    return RrefResult(R, tuple(pivots), len(pivots), P)


def rank(M: Mat) -> int:
    return rref(M).rank


def invert(M: Mat) -> Mat:
    """Inverse of a square matrix; raises NonSquare / NotInvertible."""
    if M.rows != M.cols:
        raise NonSquare(f"{M.rows}x{M.cols}")
    res = rref(M)
    if res.rank < M.rows:
        raise NotInvertible(f"rank {res.rank} < {M.rows}")
    return res.P


def is_invertible(M: Mat) -> bool:
    return M.rows == M.cols and rref(M).rank == M.rows


def kernel_basis(M: Mat) -> list:
    """Deterministic basis of the right kernel {x : Mx = 0}.

    One basis column vector per rref free column, in increasing column
    order; the free coordinate is set to 1.
    """
    f = M.field
    res = rref(M)
    piv = set(res.pivots)
    free = [c for c in range(M.cols) if c not in piv]
    basis = []
    for fc in free:
        v = [f.zero] * M.cols
        v[fc] = f.one
        for r_i, pc in enumerate(res.pivots):
            v[pc] = f.neg(res.R[r_i, fc])
        basis.append(Mat(M.cols, 1, f, v))
    return basis


def solve_right(A: Mat, b: Mat):
    """One solution x of A x = b (b an A.rows x k matrix), or None."""
    f = A.field
    res = rref(A.hstack(b))
    n = A.cols
    for i in range(res.rank):
        if res.pivots[i] >= n:
            return None  # inconsistent system
    x = Mat.zeros(f, n, b.cols)
    data = list(x.data)
    for r_i, pc in enumerate(res.pivots):
        row = res.R.row(r_i)[n:]
        data[pc * b.cols:(pc + 1) * b.cols] = row
    return Mat(n, b.cols, f, data)


def col_span_basis(M: Mat) -> list:
    """Deterministic basis of the column span (original pivot columns)."""
    res = rref(M)
    return [M.col_vec(c) for c in res.pivots]


def complete_basis(field: FieldSpec, vecs: list, n: int) -> Mat:
    """Extend independent column vectors to an invertible n x n matrix.

    Greedy: append standard basis vectors in index order whenever they
    enlarge the span.  Raises if the given vectors are dependent.
    """
    cols = list(vecs)
    cur = Mat.from_cols(field, cols) if cols else Mat.zeros(field, n, 0)
    r = rank(cur)
    if r != len(cols):
        raise NotInvertible("vectors to complete are dependent")
    for j in range(n):
        if len(cols) == n:
            break
        e = Mat.zeros(field, n, 1).set_block(j, 0, Mat.from_rows(field, [[field.one]]))
        cand = cur.hstack(e)
        if rank(cand) > r:
            cols.append(e)
            cur = cand
            r += 1
    if len(cols) != n:
        raise NotInvertible("could not complete basis")
    return Mat.from_cols(field, cols)


def greedy_row_compression(M: Mat):
    """Invertible Z with Z @ M = [independent rows; zero rows].

    Rows are scanned top to bottom; each row already in the span of the
    earlier kept rows is zeroed by subtracting that combination, then
    kept rows are stably moved to the top.  If M already has the target
    shape (r independent rows followed by zeros) then Z is the identity.
    Returns (Z, r).
    """
    f = M.field
    m = M.rows
    kept = []          # row indices forming the basis
    coeffs = {}        # dependent row -> dict kept_index -> coefficient
    basis = Mat.zeros(f, 0, M.cols)
    for i in range(m):
        row_i = Mat(1, M.cols, f, M.row(i))
        if not any(row_i.data):
            coeffs[i] = {}
            continue
        sol = solve_right(basis.transpose(), row_i.transpose()) if kept else None
        if sol is not None:
            coeffs[i] = {kept[t]: sol[t, 0] for t in range(len(kept))}
        else:
            kept.append(i)
            basis = basis.vstack(row_i)
    r = len(kept)
    # elimination part: subtract combinations from dependent rows
    E = Mat.identity(f, m)
    data = list(E.data)
    for i, combo in coeffs.items():
        for k_idx, c in combo.items():
            data[i * m + k_idx] = f.neg(c)
    E = Mat(m, m, f, data)
    # stable permutation: kept rows first, zeroed rows after
    order = kept + [i for i in range(m) if i not in kept]
    if order == list(range(m)):
        return E, r
    P = Mat.zeros(f, m, m)
    pdata = list(P.data)
    for new_i, old_i in enumerate(order):
        pdata[new_i * m + old_i] = f.one
    P = Mat(m, m, f, pdata)
    return P @ E, r
