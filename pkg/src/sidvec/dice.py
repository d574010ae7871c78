"""Dice aligner over sentence IDs and its dot-product form."""
from __future__ import annotations

import numpy as np

from .corpus import LangWord, OOVError
from .matrix import SparseMatrix


class CooccurrenceStats:
    """Aligned-sentence counts ``S(ws, wt)`` read off an indicator matrix.

    Pair counts are not tabulated up front; each query intersects the two
    words' sentence lists (or does one sparse product for a batch).
    """

    def __init__(self, indicator: SparseMatrix):
        if indicator.kind != "indicator":
            raise ValueError(f"expected an indicator matrix, got {indicator.kind!r}")
        self.matrix = indicator
        self.sentence_count = indicator.occupancy().astype(np.float64)

    def __contains__(self, word) -> bool:
        return word in self.matrix.row_index

    def _row(self, word: LangWord) -> int:
        try:
            return self.matrix.row_index[word]
        except KeyError:
            raise OOVError(word) from None

    def count(self, word: LangWord) -> int:
        """``S(w, *)``: number of sentences containing the word."""
        return int(self.sentence_count[self._row(word)])

    def pair_count(self, ws: LangWord, wt: LangWord) -> int:
        """``S(ws, wt)``: number of sentences containing both words."""
        csr = self.matrix.csr
        i, j = self._row(ws), self._row(wt)
        a = csr.indices[csr.indptr[i]:csr.indptr[i + 1]]
        b = csr.indices[csr.indptr[j]:csr.indptr[j + 1]]
        return len(np.intersect1d(a, b, assume_unique=True))

    def pair_counts(self, ws: LangWord, rows: np.ndarray) -> np.ndarray:
        """``S(ws, wt)`` for every matrix row index in ``rows``."""
        csr = self.matrix.csr
        i = self._row(ws)
        return np.asarray((csr[rows] @ csr[i].T).todense()).ravel()


def dice_similarity(ws: LangWord, wt: LangWord, stats: CooccurrenceStats,
                    classic: bool = False) -> float:
    """``2 S(ws,wt) / (S(ws,*) S(*,wt))``.

    ``classic=True`` uses the sum denominator ``S(ws,*) + S(*,wt)`` instead.
    """
    both = stats.pair_count(ws, wt)
    a, b = stats.count(ws), stats.count(wt)
    return 2.0 * both / (a + b if classic else a * b)


def dice_scores(ws: LangWord, rows: np.ndarray, stats: CooccurrenceStats,
                classic: bool = False) -> np.ndarray:
    """Vectorised :func:`dice_similarity` against many target rows."""
    both = stats.pair_counts(ws, rows)
    a = float(stats.count(ws))
    b = stats.sentence_count[rows]
    return 2.0 * both / (a + b if classic else a * b)


def dice_via_dot(ws: LangWord, wt: LangWord, l1_matrix: SparseMatrix) -> float:
    """Dot product of two L1-normalised sentence-ID rows (half the Dice score)."""
    if l1_matrix.kind != "l1":
        raise ValueError(f"expected an L1-normalised matrix, got {l1_matrix.kind!r}")
    try:
        ci, vi = l1_matrix.row(ws)
        cj, vj = l1_matrix.row(wt)
    except KeyError as exc:
        raise OOVError(exc.args[0]) from None
    _, ia, ib = np.intersect1d(ci, cj, assume_unique=True, return_indices=True)
    return float(np.dot(vi[ia], vj[ib]))
