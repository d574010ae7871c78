"""SID-SGNS: negative-sampling factorization of the word x sentence-ID matrix."""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import _accel
from .embedding import EmbeddingMatrix, cosine  # noqa: F401  (re-exported)
from .matrix import SparseMatrix

log = logging.getLogger(__name__)

MODES = ("bilingual", "multilingual")


@dataclass(frozen=True)
class SgnsConfig:
    dim: int = 500
    epochs: int = 100
    negatives: int = 5
    alpha: float = 0.75
    learning_rate: float = 0.025
    min_lr_fraction: float = 1e-4
    seed: int = 1
    threads: int = 1

    def validate(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


class NegativeSampler:
    """Draws feature columns with probability proportional to ``count ** alpha``."""

    def __init__(self, col_counts: np.ndarray, alpha: float):
        weights = np.asarray(col_counts, dtype=np.float64) ** alpha
        weights[np.asarray(col_counts) <= 0] = 0.0
        if not np.any(weights > 0):
            raise ValueError("no column has positive mass")
        self.probs = weights / weights.sum()
        self._cum = np.cumsum(weights)
        self.support = int(np.count_nonzero(weights))

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        u = rng.random(size) * self._cum[-1]
        return np.searchsorted(self._cum, u, side="right").astype(np.int64)

    def draw_excluding(self, rng: np.random.Generator, positives: np.ndarray, k: int) -> np.ndarray:
        """``(len(positives), k)`` negatives, resampling any that hit their positive."""
        if self.support < 2:
            raise ValueError("need >= 2 columns with mass to draw distinct negatives")
        neg = self.draw(rng, (len(positives), k))
        clash = neg == positives[:, None]
        while clash.any():
            neg[clash] = self.draw(rng, int(clash.sum()))
            clash = neg == positives[:, None]
        return neg


# -- kernels ------------------------------------------------------------------
# One call = one epoch over the pre-shuffled positive pairs. The learning rate
# decays linearly with the global step index ``step0 + i``.


def _sgns_epoch_numpy(W, C, rows, cols, negs, lr0, min_frac, step0, total_steps):
    k = negs.shape[1]
    loss = 0.0
    for i in range(len(rows)):
        lr = lr0 * max(min_frac, 1.0 - (step0 + i) / total_steps)
        w = W[rows[i]]
        grad_w = np.zeros_like(w)
        for j in range(k + 1):
            if j == 0:
                c, label = cols[i], 1.0
            else:
                c, label = negs[i, j - 1], 0.0
            ctx = C[c]
            f = float(np.dot(w, ctx))
            if f >= 0:
                sig = 1.0 / (1.0 + math.exp(-f))
            else:
                e = math.exp(f)
                sig = e / (1.0 + e)
            x = -f if label > 0 else f
            loss += max(x, 0.0) + math.log1p(math.exp(-abs(x)))
            g = (label - sig) * lr
            grad_w += g * ctx
            ctx += g * w
        w += grad_w
    return loss


@_accel.njit
def _pair_step(W, C, r, pos, negs_row, lr, buf):
    d = W.shape[1]
    k = negs_row.shape[0]
    loss = 0.0
    for t in range(d):
        buf[t] = 0.0
    for j in range(k + 1):
        if j == 0:
            c = pos
            label = 1.0
        else:
            c = negs_row[j - 1]
            label = 0.0
        f = 0.0
        for t in range(d):
            f += W[r, t] * C[c, t]
        if f >= 0:
            sig = 1.0 / (1.0 + math.exp(-f))
        else:
            e = math.exp(f)
            sig = e / (1.0 + e)
        x = -f if label > 0 else f
        loss += max(x, 0.0) + math.log1p(math.exp(-abs(x)))
        g = (label - sig) * lr
        for t in range(d):
            buf[t] += g * C[c, t]
            C[c, t] += g * W[r, t]
    for t in range(d):
        W[r, t] += buf[t]
    return loss


@_accel.njit
def _sgns_epoch_numba(W, C, rows, cols, negs, lr0, min_frac, step0, total_steps):
    buf = np.empty(W.shape[1])
    loss = 0.0
    for i in range(len(rows)):
        lr = lr0 * max(min_frac, 1.0 - (step0 + i) / total_steps)
        loss += _pair_step(W, C, rows[i], cols[i], negs[i], lr, buf)
    return loss


@_accel.njit(parallel=True)
def _sgns_epoch_hogwild(W, C, rows, cols, negs, lr0, min_frac, step0, total_steps, n_workers):
    # unsynchronised updates to W and C; output depends on scheduling
    n = len(rows)
    chunk = (n + n_workers - 1) // n_workers
    losses = np.zeros(n_workers)
    for wkr in _accel.prange(n_workers):
        buf = np.empty(W.shape[1])
        lo = wkr * chunk
        hi = min(n, lo + chunk)
        acc = 0.0
        for i in range(lo, hi):
            lr = lr0 * max(min_frac, 1.0 - (step0 + i) / total_steps)
            acc += _pair_step(W, C, rows[i], cols[i], negs[i], lr, buf)
        losses[wkr] = acc
    return losses.sum()


def sgns_epoch(W, C, rows, cols, negs, lr0, min_frac, step0, total_steps, threads=1):
    """Run one epoch of SGD in place; returns the summed loss."""
    if _accel.USE_NUMBA:
        if threads > 1:
            return _sgns_epoch_hogwild(W, C, rows, cols, negs, lr0, min_frac,
                                       step0, total_steps, threads)
        return _sgns_epoch_numba(W, C, rows, cols, negs, lr0, min_frac, step0, total_steps)
    return _sgns_epoch_numpy(W, C, rows, cols, negs, lr0, min_frac, step0, total_steps)


def train_sid_sgns(m: SparseMatrix, config: SgnsConfig = SgnsConfig(),
                   mode: str = "bilingual",
                   callback: Callable[[int, float], None] | None = None) -> EmbeddingMatrix:
    """Train word vectors on the positive cells of an indicator matrix.

    Every positive (word, sentence) cell is one training pair per epoch,
    visited in a fresh random order, with ``negatives`` sentence IDs drawn
    from the smoothed column distribution. With ``threads == 1`` the result is
    a pure function of the matrix and config.
    """
    config.validate()
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if m.nnz == 0:
        raise ValueError("matrix has no positive cells")
    n_lang = len(m.languages)
    if mode == "bilingual" and n_lang != 2:
        raise ValueError(f"bilingual mode needs exactly 2 languages, matrix has {n_lang}")
    if mode == "multilingual" and n_lang < 2:
        raise ValueError(f"multilingual mode needs >= 2 languages, matrix has {n_lang}")

    threads = config.threads
    if threads > 1:
        threads = _accel.set_threads(threads)
        if threads == 1:
            log.warning("parallel SGNS unavailable; running single-threaded")

    coo = m.csr.tocoo()
    rows = coo.row.astype(np.int64)
    cols = coo.col.astype(np.int64)
    sampler = NegativeSampler(m.col_sums, config.alpha)

    rng = np.random.default_rng(config.seed)
    d = config.dim
    W = (rng.random((m.n_rows, d)) - 0.5) / d
    C = np.zeros((m.n_cols, d))
    total_steps = float(config.epochs * len(rows))
    losses = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(rows))
        r, c = rows[order], cols[order]
        negs = sampler.draw_excluding(rng, c, config.negatives)
        loss = sgns_epoch(W, C, r, c, negs, config.learning_rate, config.min_lr_fraction,
                          float(epoch * len(rows)), total_steps, threads)
        losses.append(loss / len(rows))
        if callback is not None:
            callback(epoch, losses[-1])
    if not (np.all(np.isfinite(W)) and np.all(np.isfinite(C))):
        raise FloatingPointError("SGNS diverged to non-finite values")
    log.info("sgns: %d pairs x %d epochs, final loss %.4f", len(rows), config.epochs, losses[-1])
    return EmbeddingMatrix(m.words, W, C, tuple(losses))
