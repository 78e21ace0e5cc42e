"""Exact linear algebra: dense elimination over F_q (numpy) and sparse elimination over K."""

from __future__ import annotations

import numpy as np

from .errors import TheoremViolation
from .poly import RatFunc


# -- dense over F_q

def _eliminate(F, A, rows, col, piv):
    """Clear column ``col`` in ``rows`` using the normalized pivot row ``piv``."""
    factors = A[rows, col]
    A[rows] = F.SUB_np[A[rows], F.MUL_np[factors[:, None], A[piv][None, :]]]


def _rref_prime(p, A):
    """In-place Gauss-Jordan over F_p on a small-int matrix."""
    m, n = A.shape
    inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        a = int(A[r, c])
        if a != 1:
            A[r, c:] = (A[r, c:] * inv[a]) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if len(hit):
            # the pivot row vanishes left of c, so only the trailing block changes
            A[hit, c:] = (A[hit, c:] + (p - col[hit])[:, None] * A[r, c:][None, :]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rref(F, A):
    """Reduced row echelon form of a matrix over F_q; returns (R, pivot_columns)."""
    if F.prime:
        return _rref_prime(F.p, np.array(A, dtype=np.uint8, copy=True))
    A = np.array(A, dtype=np.int64, copy=True)
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if len(nz) == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        inv = F.INV[int(A[r, c])]
        if inv != 1:
            A[r] = F.vscale(inv, A[r])
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if len(others):
            _eliminate(F, A, others, c, r)
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F, A):
    return len(rref(F, A)[1])


_CHUNK = 4096


def _vanishes(p, A, basis):
    """A @ basis.T == 0 mod p, row block by row block."""
    Bt = np.asarray(basis.T, dtype=np.float64)
    for lo in range(0, A.shape[0], _CHUNK):
        if (np.asarray(A[lo:lo + _CHUNK], dtype=np.float64) @ Bt).astype(np.int64).__mod__(p).any():
            return False
    return True


def _row_space(F, A, seed):
    """Rows spanning the same space as A, compressed by a random F_p combination.

    Kernels of the compressed matrix contain ker(A); the caller checks the
    result against A and falls back to A itself when they differ.
    """
    m, n = A.shape
    if not F.prime or m <= n + 48:
        return None
    rng = np.random.default_rng(seed)
    out = np.zeros((n + 32, n), dtype=np.int64)
    for lo in range(0, m, _CHUNK):
        block = np.asarray(A[lo:lo + _CHUNK], dtype=np.float64)
        R = rng.integers(0, F.p, size=(n + 32, block.shape[0])).astype(np.float64)
        out = (out + (R @ block).astype(np.int64)) % F.p
    return out


def _kernel_from_rref(R, pivots, n, F):
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            if R[i, f]:
                basis[k, pc] = F.NEG[int(R[i, f])]
    return basis, free


def kernel(F, A, seed=0):
    """Basis of {x : A x = 0}, one vector per free column, as rows of an array.

    The vector for free column f has x_f = 1 and vanishes on the other free
    columns, so its last nonzero coordinate is f.
    """
    A = np.asarray(A)
    n = A.shape[1]
    for attempt in range(2):
        small = _row_space(F, A, seed + attempt)
        if small is None:
            break
        R, pivots = rref(F, small)
        basis, free = _kernel_from_rref(R, pivots, n, F)
        if len(basis) == 0 or _vanishes(F.p, A, basis):
            return basis, free
    R, pivots = rref(F, A)
    return _kernel_from_rref(R, pivots, n, F)


# -- sparse over K

def solve_left_sparse(F, n, matrix):
    """Inverse of a sparse n x n matrix over K.

    ``matrix`` maps (i, j) to RatFunc.  Returns a list ``inv`` with
    ``inv[j] = {i: c}`` meaning row j of M^{-1}, so that y_j = Σ_i c x_i
    whenever x = M y.  Pivots are taken on the diagonal.
    """
    rows = [dict() for _ in range(n)]
    for (i, j), c in matrix.items():
        if c:
            rows[i][j] = c
    aug = [{i: RatFunc.const(F, 1)} for i in range(n)]
    # forward elimination (diagonal pivots)
    for k in range(n):
        pk = rows[k].get(k)
        if pk is None or not pk:
            raise TheoremViolation(f"zero diagonal pivot at {k}; transition matrix not ≡ ±1 mod D_1")
        inv = pk.inverse()
        rows[k] = {j: c * inv for j, c in rows[k].items()}
        aug[k] = {j: c * inv for j, c in aug[k].items()}
        for i in range(n):
            if i == k:
                continue
            f = rows[i].get(k)
            if f is None:
                continue
            _axpy(rows[i], rows[k], f)
            _axpy(aug[i], aug[k], f)
    return aug


def _axpy(target, src, f):
    """target -= f * src (sparse dicts of RatFunc)."""
    for j, c in src.items():
        v = target.get(j)
        v = -(f * c) if v is None else v - f * c
        if v:
            target[j] = v
        else:
            target.pop(j, None)
