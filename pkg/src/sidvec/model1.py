"""IBM Model-1 trained with EM, used as a cross-lingual similarity function.

Training data is flattened once into a "link" array: for every target token
of every sentence pair, the ids of the (source word, target word) parameters
it could be generated by, one per source position (plus NULL). The E-step is
then a segmented reduction over that array, which is the hot loop.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from . import _accel
from .corpus import LangWord, OOVError, ParallelCorpus, Vocabulary

log = logging.getLogger(__name__)

NULL = "<null>"


@dataclass(frozen=True)
class TranslationTable:
    """``t(target | source)`` for co-occurring pairs, one row per source word.

    When ``has_null`` is set the last row is the NULL source word.
    """

    source: str
    target: str
    source_words: tuple[LangWord, ...]
    target_words: tuple[LangWord, ...]
    probs: sp.csr_matrix
    has_null: bool = True
    log_likelihoods: tuple[float, ...] = ()
    source_index: dict[LangWord, int] = field(init=False, repr=False, compare=False)
    target_index: dict[LangWord, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "source_index", {w: i for i, w in enumerate(self.source_words)})
        object.__setattr__(self, "target_index", {w: i for i, w in enumerate(self.target_words)})

    @property
    def direction(self) -> tuple[str, str]:
        return self.source, self.target

    @property
    def n_entries(self) -> int:
        return self.probs.nnz

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.probs.sum(axis=1)).ravel()

    def prob(self, ws: LangWord, wt: LangWord) -> float:
        try:
            i, j = self.source_index[ws], self.target_index[wt]
        except KeyError as exc:
            raise OOVError(exc.args[0]) from None
        return float(self.probs[i, j])

    def row(self, ws: LangWord) -> np.ndarray:
        """Dense ``t(. | ws)`` over ``target_words``."""
        try:
            i = self.source_index[ws]
        except KeyError:
            raise OOVError(ws) from None
        out = np.zeros(len(self.target_words))
        lo, hi = self.probs.indptr[i], self.probs.indptr[i + 1]
        out[self.probs.indices[lo:hi]] = self.probs.data[lo:hi]
        return out

    def entries(self):
        """Yield ``(source, target, prob)`` in row order; NULL source as ``None``."""
        coo = self.probs.tocoo()
        n_src = len(self.source_words)
        for i, j, p in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
            yield (self.source_words[i] if i < n_src else None), self.target_words[j], p


@dataclass
class _Links:
    links: np.ndarray       # parameter id per (target token, source position)
    group_ptr: np.ndarray   # segment offsets, one segment per target token
    pair_src: np.ndarray
    pair_tgt: np.ndarray
    n_src: int              # source rows including NULL


def _build_links(corpus: ParallelCorpus, vocab: Vocabulary, src: str, tgt: str,
                 use_null: bool) -> tuple[_Links, tuple[LangWord, ...], tuple[LangWord, ...]]:
    src_ids = vocab.indices_of(src)
    tgt_ids = vocab.indices_of(tgt)
    src_words = tuple(vocab.words[i] for i in src_ids)
    tgt_words = tuple(vocab.words[i] for i in tgt_ids)
    src_local = {w.surface: k for k, w in enumerate(src_words)}
    tgt_local = {w.surface: k for k, w in enumerate(tgt_words)}
    n_src = len(src_words) + int(use_null)
    n_tgt = len(tgt_words)
    null_id = len(src_words)

    keys, seg_lens = [], []
    for _, s_toks, t_toks in corpus.pairs(src, tgt):
        s = [src_local[x] for x in s_toks if x in src_local]
        t = [tgt_local[x] for x in t_toks if x in tgt_local]
        if use_null:
            s.append(null_id)
        if not s or not t:
            continue
        s_arr = np.asarray(s, dtype=np.int64)
        t_arr = np.asarray(t, dtype=np.int64)
        # order: target token major, source position minor
        keys.append((s_arr[None, :] * n_tgt + t_arr[:, None]).ravel())
        seg_lens.append(np.full(len(t_arr), len(s_arr), dtype=np.int64))
    if not keys:
        raise ValueError(f"no sentence pairs with both {src!r} and {tgt!r} present")
    uniq, inverse = np.unique(np.concatenate(keys), return_inverse=True)
    seg = np.concatenate(seg_lens)
    group_ptr = np.zeros(len(seg) + 1, dtype=np.int64)
    np.cumsum(seg, out=group_ptr[1:])
    links = _Links(inverse.astype(np.int64).ravel(), group_ptr,
                   uniq // n_tgt, uniq % n_tgt, n_src)
    return links, src_words, tgt_words


def _estep_numpy(t, links, group_ptr, counts):
    tv = t[links]
    seg = np.diff(group_ptr)
    denom = np.add.reduceat(tv, group_ptr[:-1])
    counts[:] = np.bincount(links, weights=tv / np.repeat(denom, seg), minlength=len(t))
    return float(np.sum(np.log(denom / seg)))


@_accel.njit
def _estep_numba(t, links, group_ptr, counts):
    counts[:] = 0.0
    ll = 0.0
    for g in range(len(group_ptr) - 1):
        lo = group_ptr[g]
        hi = group_ptr[g + 1]
        denom = 0.0
        for e in range(lo, hi):
            denom += t[links[e]]
        for e in range(lo, hi):
            p = links[e]
            counts[p] += t[p] / denom
        ll += math.log(denom / (hi - lo))
    return ll


def estep(t, links, group_ptr, counts):
    """Accumulate expected counts into ``counts``; return the log-likelihood under ``t``."""
    if _accel.USE_NUMBA:
        return _estep_numba(t, links, group_ptr, counts)
    return _estep_numpy(t, links, group_ptr, counts)


def _normalize(values, pair_src, n_src):
    totals = np.bincount(pair_src, weights=values, minlength=n_src)
    return values / totals[pair_src]


def train_model1(corpus: ParallelCorpus, vocab: Vocabulary, src_lang: str, tgt_lang: str,
                 iterations: int = 5, use_null: bool = True,
                 callback: Callable[[int, TranslationTable], None] | None = None,
                 ) -> TranslationTable:
    """Fit ``t(target | source)`` by EM over sentences where both languages are present.

    ``t`` starts uniform over each source word's co-occurring targets. The
    returned table carries the corpus log-likelihood before the first and
    after every iteration. ``callback(iteration, table)`` runs after each
    M-step.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    for lang in (src_lang, tgt_lang):
        if lang not in corpus.languages:
            raise ValueError(f"language {lang!r} not in corpus")
    data, src_words, tgt_words = _build_links(corpus, vocab, src_lang, tgt_lang, use_null)
    n_pairs = len(data.pair_src)
    shape = (data.n_src, len(tgt_words))

    def table(t, history):
        probs = sp.csr_matrix((t, (data.pair_src, data.pair_tgt)), shape=shape)
        return TranslationTable(src_lang, tgt_lang, src_words, tgt_words, probs,
                                use_null, tuple(history))

    t = _normalize(np.ones(n_pairs), data.pair_src, data.n_src)
    counts = np.zeros(n_pairs)
    history = []
    for it in range(1, iterations + 1):
        history.append(estep(t, data.links, data.group_ptr, counts))
        t = _normalize(counts, data.pair_src, data.n_src)
        log.debug("model1 %s->%s iter %d ll=%.6f", src_lang, tgt_lang, it, history[-1])
        if callback is not None:
            callback(it, table(t, history))
    history.append(estep(t, data.links, data.group_ptr, counts))
    return table(t, history)


def model1_similarity(ws: LangWord, wt: LangWord, table: TranslationTable) -> float:
    """``t(wt | ws)``; zero for pairs that never co-occurred."""
    if (ws.language, wt.language) != table.direction:
        raise ValueError(f"table is {table.source}->{table.target}, "
                         f"query is {ws.language}->{wt.language}")
    return table.prob(ws, wt)
