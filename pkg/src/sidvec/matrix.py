"""Word x sentence-ID matrices and their association transforms."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import LangWord, ParallelCorpus, Vocabulary, encode

GRANULARITIES = ("sentence", "document")


@dataclass(frozen=True)
class SparseMatrix:
    """CSR word x feature matrix with the marginals of the raw matrix it came from.

    ``row_sums``, ``col_sums`` and ``total`` always describe the untransformed
    matrix (the ``#(w,*)``, ``#(*,f)``, ``#(*,*)`` of the association formulas),
    so a transformed matrix still knows its source statistics.
    """

    csr: sp.csr_matrix
    words: tuple[LangWord, ...]
    row_sums: np.ndarray
    col_sums: np.ndarray
    total: float
    kind: str = "indicator"
    columns: tuple[str, ...] | None = None
    row_index: dict[LangWord, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.csr.shape[0] != len(self.words):
            raise ValueError("row labels do not match matrix height")
        object.__setattr__(self, "row_index", {w: i for i, w in enumerate(self.words)})

    @property
    def shape(self) -> tuple[int, int]:
        return self.csr.shape

    @property
    def n_rows(self) -> int:
        return self.csr.shape[0]

    @property
    def n_cols(self) -> int:
        return self.csr.shape[1]

    @property
    def nnz(self) -> int:
        return self.csr.nnz

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(sorted({w.language for w in self.words}))

    def row(self, word: LangWord) -> tuple[np.ndarray, np.ndarray]:
        """Column indices and values of a word's row."""
        i = self.row_index[word]
        lo, hi = self.csr.indptr[i], self.csr.indptr[i + 1]
        return self.csr.indices[lo:hi], self.csr.data[lo:hi]

    def occupancy(self) -> np.ndarray:
        """Number of stored cells per row."""
        return np.diff(self.csr.indptr)

    def _with_data(self, csr: sp.csr_matrix, kind: str) -> "SparseMatrix":
        csr.eliminate_zeros()
        csr.sort_indices()
        return replace(self, csr=csr, kind=kind)


def _canonical(csr: sp.csr_matrix) -> sp.csr_matrix:
    csr = sp.csr_matrix(csr, dtype=np.float64)
    csr.sum_duplicates()
    csr.eliminate_zeros()
    csr.sort_indices()
    return csr


def build_indicator_matrix(corpus: ParallelCorpus, vocab: Vocabulary,
                           languages: Sequence[str] | None = None,
                           granularity: str = "sentence",
                           counts: bool = False) -> SparseMatrix:
    """Binary matrix: cell (w, s) is 1 iff word w occurs in sentence s.

    With ``granularity="document"`` the columns are the corpus's document
    keys (in order of first appearance). ``counts=True`` stores raw
    occurrence counts instead of indicators.
    """
    if languages is None:
        languages = corpus.languages
    languages = tuple(languages)
    if not languages:
        raise ValueError("empty language subset")
    unknown = set(languages) - set(corpus.languages)
    if unknown:
        raise ValueError(f"languages not in corpus: {sorted(unknown)}")
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")

    if granularity == "document":
        if corpus.doc_keys is None:
            raise ValueError("document granularity needs document keys")
        col_keys: dict[str, int] = {}
        col_of = np.array([col_keys.setdefault(k, len(col_keys)) for k in corpus.doc_keys],
                          dtype=np.int64)
        columns = tuple(col_keys)
        n_cols = len(columns)
    else:
        col_of = np.arange(len(corpus), dtype=np.int64)
        columns = None
        n_cols = len(corpus)

    keep = np.concatenate([vocab.indices_of(lang) for lang in sorted(languages)])
    keep.sort()
    row_of = np.full(len(vocab), -1, dtype=np.int64)
    row_of[keep] = np.arange(len(keep))

    rows, cols = [], []
    for lang in languages:
        for sid, ids in enumerate(encode(corpus, vocab, lang)):
            if ids is None or len(ids) == 0:
                continue
            rows.append(row_of[ids])
            cols.append(np.full(len(ids), col_of[sid], dtype=np.int64))
    if rows:
        r, c = np.concatenate(rows), np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    csr = _canonical(sp.coo_matrix((np.ones(len(r)), (r, c)), shape=(len(keep), n_cols)))
    if not counts:
        csr.data[:] = 1.0
    words = tuple(vocab.words[i] for i in keep)
    return SparseMatrix(
        csr=csr,
        words=words,
        row_sums=np.asarray(csr.sum(axis=1)).ravel(),
        col_sums=np.asarray(csr.sum(axis=0)).ravel(),
        total=float(csr.sum()),
        kind="counts" if counts else "indicator",
        columns=columns,
    )


def _check_rows(m: SparseMatrix) -> np.ndarray:
    occupied = m.occupancy()
    if np.any(occupied == 0):
        bad = m.words[int(np.flatnonzero(occupied == 0)[0])]
        raise ValueError(f"row for {bad} is empty")
    return occupied


def transform_l1(m: SparseMatrix) -> SparseMatrix:
    """Divide each row by its sum, so every row sums to one."""
    _check_rows(m)
    csr = m.csr.copy()
    sums = np.asarray(csr.sum(axis=1)).ravel()
    csr.data /= np.repeat(sums, np.diff(csr.indptr))
    return m._with_data(csr, "l1")


def transform_idf(m: SparseMatrix) -> SparseMatrix:
    """Weight each occupied cell by ``log(n_cols / I(w,*))``.

    ``I(w,*)`` is the number of occupied cells in the row; unoccupied cells
    stay zero, and a word present in every column ends up with an empty row.
    """
    occupied = _check_rows(m)
    csr = m.csr.copy()
    weight = np.log(m.n_cols / occupied.astype(np.float64))
    csr.data = np.repeat(weight, occupied)
    return m._with_data(csr, "idf")


def transform_pmi(m: SparseMatrix, positive: bool = False) -> SparseMatrix:
    """PMI on the occupied cells, ``log(#(w,f) #(*,*) / (#(w,*) #(*,f)))``.

    Unoccupied cells are implicit zeros; ``positive=True`` also drops the
    negative cells.
    """
    if m.total <= 0:
        raise ValueError("matrix total is zero")
    csr = m.csr.tocoo()
    row_m = m.row_sums[csr.row]
    col_m = m.col_sums[csr.col]
    if np.any(row_m <= 0) or np.any(col_m <= 0):
        raise ValueError("zero marginal under an occupied cell")
    vals = np.log(csr.data * m.total / (row_m * col_m))
    if positive:
        vals = np.where(vals > 0, vals, 0.0)
    out = sp.csr_matrix((vals, (csr.row, csr.col)), shape=m.shape)
    return m._with_data(out, "ppmi" if positive else "pmi")
