"""Inverted-index embeddings: truncated SVD of an IDF (or PPMI) weighted matrix."""
from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp

from .embedding import EmbeddingMatrix
from .matrix import SparseMatrix

log = logging.getLogger(__name__)


def _orth(x: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(x)
    return q


def randomized_svd(a, k: int, oversample: int = 10, n_iter: int = 7, tol: float = 1e-10,
                   max_iter: int = 500, seed: int = 0):
    """Rank-``k`` SVD ``a ~ U diag(s) Vt`` by randomized subspace iteration.

    At least ``n_iter`` power iterations run; iteration then continues until
    the part of ``a V`` lying outside the current basis is below
    ``tol * s[0]`` (or ``max_iter`` is hit). Columns of ``U`` are
    sign-normalised so that their largest-magnitude entry is positive.
    """
    n, m = a.shape
    if not 1 <= k <= min(n, m):
        raise ValueError(f"rank {k} outside [1, {min(n, m)}]")
    width = min(k + oversample, n, m)
    rng = np.random.default_rng(seed)
    q = _orth(a @ rng.standard_normal((m, width)))
    for it in range(1, max_iter + 1):
        q = _orth(a @ _orth(a.T @ q))
        if it < n_iter:
            continue
        ub, s, vt = np.linalg.svd(np.asarray((a.T @ q).T), full_matrices=False)
        av = np.asarray(a @ vt[:k].T)
        residual = np.linalg.norm(av - q @ (q.T @ av), axis=0)
        if np.max(residual) <= tol * max(s[0], 1e-300):
            break
    else:
        log.warning("randomized SVD hit max_iter=%d before converging", max_iter)
    u = q @ ub[:, :k]
    s, vt = s[:k], vt[:k]
    flip = np.sign(u[np.argmax(np.abs(u), axis=0), np.arange(k)])
    flip[flip == 0] = 1.0
    return u * flip, s, vt * flip[:, None]


def train_inverted_index(m: SparseMatrix, dim: int = 500, seed: int = 1,
                         oversample: int = 10, n_iter: int = 7) -> EmbeddingMatrix:
    """Symmetric truncated SVD: words ``U sqrt(S)``, features ``V sqrt(S)``."""
    if m.nnz == 0:
        raise ValueError("matrix is empty")
    if dim > min(m.shape):
        raise ValueError(f"dim={dim} exceeds min(matrix shape)={min(m.shape)}")
    csr = sp.csr_matrix(m.csr, dtype=np.float64)
    u, s, vt = randomized_svd(csr, dim, oversample=oversample, n_iter=n_iter, seed=seed)
    root = np.sqrt(s)
    return EmbeddingMatrix(m.words, u * root, vt.T * root, singular_values=s)
