"""Word alignment (1-AER) and dictionary induction (P@1) over any similarity function."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import LangWord, OOVError, tokenize
from .dice import CooccurrenceStats, dice_scores
from .embedding import EmbeddingMatrix, cosine_scores
from .model1 import TranslationTable

log = logging.getLogger(__name__)

Link = tuple[int, int]


class Similarity:
    """Scores (source word, target word) pairs; higher means more similar.

    Subclasses map words to internal row ids with :meth:`lookup` and score a
    source word against many target ids at once with :meth:`score_ids`.
    """

    name = "similarity"

    def lookup(self, word: LangWord) -> int | None:
        raise NotImplementedError

    def score_ids(self, ws: LangWord, ids: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def covers(self, language: str) -> bool:
        raise NotImplementedError

    def __contains__(self, word) -> bool:
        return self.lookup(word) is not None

    def ids(self, words: Sequence[LangWord]) -> np.ndarray:
        """Internal ids for ``words``; -1 marks OOV."""
        return np.array([-1 if (i := self.lookup(w)) is None else i for w in words],
                        dtype=np.int64)

    def scores(self, ws: LangWord, candidates: Sequence[LangWord]) -> np.ndarray:
        """Scores against ``candidates``; OOV candidates get ``-inf``."""
        if ws not in self:
            raise OOVError(ws)
        ids = self.ids(candidates)
        out = np.full(len(ids), -np.inf)
        ok = ids >= 0
        if ok.any():
            out[ok] = self.score_ids(ws, ids[ok])
        return out

    def __call__(self, ws: LangWord, wt: LangWord) -> float:
        if wt not in self:
            raise OOVError(wt)
        return float(self.scores(ws, [wt])[0])


class EmbeddingSimilarity(Similarity):
    name = "cosine"

    def __init__(self, embedding: EmbeddingMatrix):
        self.embedding = embedding

    def lookup(self, word):
        return self.embedding.index.get(word)

    def covers(self, language):
        return language in self.embedding.languages

    def score_ids(self, ws, ids):
        return cosine_scores(self.embedding.vector(ws), self.embedding.word_vectors[ids])


class DiceSimilarity(Similarity):
    name = "dice"

    def __init__(self, stats: CooccurrenceStats, classic: bool = False):
        self.stats = stats
        self.classic = classic

    def lookup(self, word):
        return self.stats.matrix.row_index.get(word)

    def covers(self, language):
        return language in self.stats.matrix.languages

    def score_ids(self, ws, ids):
        return dice_scores(ws, ids, self.stats, classic=self.classic)


class Model1Similarity(Similarity):
    """``t(wt | ws)`` from a table trained in the query direction (NULL excluded)."""

    name = "model1"

    def __init__(self, table: TranslationTable):
        self.table = table
        # words without any table entry count as OOV, matching a reloaded dump
        probs = table.probs
        self._has_row = np.diff(probs.indptr) > 0
        self._has_col = np.bincount(probs.indices, minlength=probs.shape[1]) > 0

    def lookup(self, word):
        if word.language == self.table.source:
            i = self.table.source_index.get(word)
            return i if i is not None and self._has_row[i] else None
        if word.language == self.table.target:
            j = self.table.target_index.get(word)
            return j if j is not None and self._has_col[j] else None
        return None

    def covers(self, language):
        return language in self.table.direction

    def score_ids(self, ws, ids):
        if ws.language != self.table.source:
            raise ValueError(f"table is {self.table.source}->{self.table.target}; "
                             f"cannot score from {ws.language}")
        return self.table.row(ws)[ids]


# -- word alignment -----------------------------------------------------------


def greedy_align(src_tokens: Sequence[LangWord], tgt_tokens: Sequence[LangWord],
                 sim: Similarity) -> set[Link]:
    """Link every in-vocabulary source position to its most similar target position.

    Positions are 1-based. OOV source words stay unaligned; OOV target words
    are never chosen, so a sentence with no in-vocabulary target yields no
    links. Ties go to the lowest target position.
    """
    tgt_ids = sim.ids(tgt_tokens)
    known = np.flatnonzero(tgt_ids >= 0)
    links: set[Link] = set()
    if len(known) == 0:
        return links
    cache: dict[LangWord, int] = {}
    for i, ws in enumerate(src_tokens, start=1):
        if ws not in sim:
            continue
        if ws not in cache:
            scores = sim.score_ids(ws, tgt_ids[known])
            cache[ws] = int(known[int(np.argmax(scores))]) + 1
        links.add((i, cache[ws]))
    return links


@dataclass
class GoldAlignment:
    """Sure and possible links per sentence ID; sure links are always possible."""

    sure: dict[int, set[Link]] = field(default_factory=dict)
    possible: dict[int, set[Link]] = field(default_factory=dict)

    def __post_init__(self):
        for sid in set(self.sure) | set(self.possible):
            s = self.sure.setdefault(sid, set())
            self.possible.setdefault(sid, set()).update(s)

    @property
    def sentence_ids(self) -> list[int]:
        return sorted(self.sure)


def load_gold_alignment(path: str | Path, sentence_ids: Iterable[int] | None = None) -> GoldAlignment:
    """Read ``sentID srcPos tgtPos [S|P]`` lines (missing flag means S).

    ``sentence_ids`` registers sentences that have no gold links at all.
    """
    sure: dict[int, set[Link]] = {}
    possible: dict[int, set[Link]] = {}
    for sid in sentence_ids or ():
        sure.setdefault(sid, set())
        possible.setdefault(sid, set())
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) not in (3, 4):
                raise ValueError(f"{path}:{lineno}: expected 'sentID src tgt [S|P]'")
            sid, i, j = int(parts[0]), int(parts[1]), int(parts[2])
            flag = parts[3].upper() if len(parts) == 4 else "S"
            if flag not in ("S", "P"):
                raise ValueError(f"{path}:{lineno}: flag must be S or P, got {parts[3]!r}")
            if i < 1 or j < 1:
                raise ValueError(f"{path}:{lineno}: positions are 1-based")
            sure.setdefault(sid, set())
            possible.setdefault(sid, set()).add((i, j))
            if flag == "S":
                sure[sid].add((i, j))
    return GoldAlignment(sure, possible)


def compute_aer(predicted: Mapping[int, set[Link]], gold: GoldAlignment) -> tuple[float, float]:
    """Corpus-level AER ``1 - (|A&S| + |A&P|) / (|A| + |S|)``; returns ``(aer, 1 - aer)``."""
    if set(predicted) != set(gold.sure):
        missing = sorted(set(gold.sure) ^ set(predicted))[:5]
        raise ValueError(f"predicted and gold sentence IDs differ (e.g. {missing})")
    a_s = a_p = n_a = n_s = 0
    for sid, links in predicted.items():
        sure, possible = gold.sure[sid], gold.possible[sid]
        a_s += len(links & sure)
        a_p += len(links & possible)
        n_a += len(links)
        n_s += len(sure)
    aer = 0.0 if n_a + n_s == 0 else 1.0 - (a_s + a_p) / (n_a + n_s)
    return aer, 1.0 - aer


def read_sentences(path: str | Path, language: str) -> list[list[LangWord]]:
    """Pre-tokenized alignment sentences: lowercased and split on whitespace only,
    so token positions match the gold file."""
    with open(path, encoding="utf-8") as fh:
        return [[LangWord(language, t) for t in line.lower().split()]
                for line in fh.read().splitlines()]


def align_corpus(src_sents: Sequence[Sequence[LangWord]], tgt_sents: Sequence[Sequence[LangWord]],
                 sim: Similarity, first_id: int = 1) -> dict[int, set[Link]]:
    if len(src_sents) != len(tgt_sents):
        raise ValueError(f"{len(src_sents)} source vs {len(tgt_sents)} target sentences")
    return {first_id + k: greedy_align(s, t, sim)
            for k, (s, t) in enumerate(zip(src_sents, tgt_sents))}


# -- dictionary induction -----------------------------------------------------


@dataclass(frozen=True)
class BilingualDictionary:
    entries: tuple[tuple[LangWord, LangWord], ...]

    def __post_init__(self):
        if len(set(self.entries)) != len(self.entries):
            raise ValueError("duplicate dictionary pairs")

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[LangWord, LangWord]]) -> "BilingualDictionary":
        return cls(tuple(dict.fromkeys(pairs)))


def load_dictionary(path: str | Path, src: str, tgt: str) -> BilingualDictionary:
    """Read a ``source<TAB>target`` file, tokenized like the corpus.

    Entries where either side is not exactly one token are dropped.
    """
    pairs = []
    dropped = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n\r")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}: expected 'source<TAB>target', got {line!r}")
            s, t = tokenize(parts[0]), tokenize(parts[1])
            if len(s) != 1 or len(t) != 1:
                dropped += 1
                continue
            pairs.append((LangWord(src, s[0]), LangWord(tgt, t[0])))
    if dropped:
        log.info("%s: dropped %d multi-token entries", path, dropped)
    return BilingualDictionary.from_pairs(pairs)


def predict_translation(sim: Similarity, ws: LangWord, target_vocab: Sequence[LangWord],
                        target_ids: np.ndarray | None = None) -> LangWord:
    """Highest-scoring target word; ties go to the earliest entry of ``target_vocab``."""
    if target_ids is None:
        target_ids = sim.ids(target_vocab)
    known = np.flatnonzero(target_ids >= 0)
    if len(known) == 0:
        raise ValueError("no target candidate is in the model's vocabulary")
    scores = sim.score_ids(ws, target_ids[known])
    return target_vocab[int(known[int(np.argmax(scores))])]


def induce_p_at_1(sim: Similarity, dictionary: BilingualDictionary,
                  target_vocab: Sequence[LangWord], any_of: bool = False) -> tuple[float, float]:
    """Precision-at-1 of nearest-target prediction, plus source coverage.

    Each dictionary pair is one item (a word with two gold translations can
    score at most 1/2). Pairs with an OOV source are left out of P@1 and
    counted against coverage. ``any_of=True`` instead scores each source
    word once, as correct if the prediction is any of its translations.
    Returns ``(nan, 0.0)`` when no source word is covered.
    """
    if len(dictionary) == 0:
        raise ValueError("empty dictionary")
    if len(target_vocab) == 0:
        raise ValueError("empty target vocabulary")
    target_vocab = list(target_vocab)
    target_ids = sim.ids(target_vocab)
    predictions: dict[LangWord, LangWord] = {}
    covered = 0
    hits = 0
    gold_sets: dict[LangWord, set[LangWord]] = {}
    for ws, wt in dictionary.entries:
        if ws not in sim:
            continue
        covered += 1
        gold_sets.setdefault(ws, set()).add(wt)
        if ws not in predictions:
            predictions[ws] = predict_translation(sim, ws, target_vocab, target_ids)
        hits += predictions[ws] == wt
    coverage = covered / len(dictionary)
    if covered == 0:
        return float("nan"), 0.0
    if any_of:
        return sum(predictions[w] in g for w, g in gold_sets.items()) / len(gold_sets), coverage
    return hits / covered, coverage


def nearest_neighbors(sim: Similarity, ws: LangWord, candidates: Sequence[LangWord],
                      k: int = 10) -> list[tuple[LangWord, float]]:
    scores = sim.scores(ws, candidates)
    order = np.argsort(-scores, kind="stable")[:k]
    return [(candidates[i], float(scores[i])) for i in order if np.isfinite(scores[i])]


# -- results ------------------------------------------------------------------

RESULT_HEADER = ("benchmark", "src", "tgt", "method", "metric", "value")


def format_result(benchmark: str, src: str, tgt: str, method: str, metric: str,
                  value: float) -> str:
    return "\t".join((benchmark, src, tgt, method, metric, repr(float(value))))
