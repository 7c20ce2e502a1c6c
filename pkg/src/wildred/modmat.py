"""numpy-backed GF(p) linear algebra for the enumeration-heavy oracles.

Arrays are int64 residues; all arithmetic is integer and reduced mod p,
so the results are exact.  (p-1)^2 * dim stays far below 2^63 at desk
scale.  The pure-Python Mat layer remains the semantic reference; tests
cross-check the two.
"""

from __future__ import annotations

import numpy as np

from .fields import FieldSpec
from .matrix import Mat


def to_np(M: Mat) -> np.ndarray:
    assert M.field.is_finite
    return np.array(M.data, dtype=np.int64).reshape(M.rows, M.cols)


def from_np(arr: np.ndarray, field: FieldSpec) -> Mat:
    arr = np.asarray(arr, dtype=np.int64) % field.p
    r, c = arr.shape
    return Mat(r, c, field, [int(x) for x in arr.reshape(-1)])


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def _inv_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


_INV_CACHE: dict = {}


def inv_table(p: int) -> np.ndarray:
    t = _INV_CACHE.get(p)
    if t is None:
        t = _inv_table(p)
        _INV_CACHE[p] = t
    return t


def rref(a: np.ndarray, p: int):
    """(R, pivot columns) of a mod p; a is not modified."""
    R = (np.array(a, dtype=np.int64) % p).copy()
    m, n = R.shape
    inv = inv_table(p)
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        col = R[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        f = inv[R[r, c]]
        if f != 1:
            R[r] = (R[r] * f) % p
        mask = np.nonzero(R[:, c])[0]
        mask = mask[mask != r]
        if mask.size:
            R[mask] = (R[mask] - np.outer(R[mask, c], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns span {x : ax = 0 mod p}; deterministic (free cols ascending)."""
    R, pivots = rref(a, p)
    m, n = R.shape
    piv = set(pivots)
    free = [c for c in range(n) if c not in piv]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        out[fc, k] = 1
        for ri, pc in enumerate(pivots):
            out[pc, k] = (-R[ri, fc]) % p
    return out


def is_invertible(a: np.ndarray, p: int) -> bool:
    m, n = a.shape
    return m == n and rank(a, p) == n


def transform_cube(cube: np.ndarray, R: np.ndarray, S: np.ndarray, T: np.ndarray, p: int) -> np.ndarray:
    """Spatial transform a'_{i'j'k'} = sum a_{ijk} R_{ii'} S_{jj'} T_{kk'}.

    cube has shape (m, n, q); R, S, T are (m,m), (n,n), (q,q).
    """
    m, n, q = cube.shape
    out = np.tensordot(R.T % p, cube, axes=(1, 0)) % p
    out = np.tensordot(S.T % p, out.transpose(1, 0, 2), axes=(1, 0)).transpose(1, 0, 2) % p
    out = np.tensordot(T.T % p, out.transpose(2, 0, 1), axes=(1, 0)).transpose(1, 2, 0) % p
    return out
