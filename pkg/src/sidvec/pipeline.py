"""Glue between corpora, trainers, artifacts and the two benchmarks."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import formats
from .corpus import LangWord, ParallelCorpus, Vocabulary
from .dice import CooccurrenceStats
from .embedding import EmbeddingMatrix
from .evaluation import (DiceSimilarity, EmbeddingSimilarity, Model1Similarity, Similarity,
                         align_corpus, compute_aer, induce_p_at_1, load_dictionary,
                         load_gold_alignment, read_sentences)
from .matrix import SparseMatrix, build_indicator_matrix, transform_idf, transform_pmi
from .model1 import TranslationTable, train_model1
from .sgns import SgnsConfig, train_sid_sgns
from .svd import train_inverted_index

log = logging.getLogger(__name__)

METHODS = ("dice", "model1", "sgns", "svd-idf", "svd-ppmi")
BILINGUAL_ONLY = ("dice", "model1")


@dataclass
class Params:
    dim: int = 500
    epochs: int = 100
    negatives: int = 5
    alpha: float = 0.75
    learning_rate: float = 0.025
    iterations: int = 5
    use_null: bool = True
    classic_dice: bool = False
    seed: int = 1
    threads: int = 1
    granularity: str = "sentence"

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Params":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def sgns_config(self) -> SgnsConfig:
        return SgnsConfig(dim=self.dim, epochs=self.epochs, negatives=self.negatives,
                          alpha=self.alpha, learning_rate=self.learning_rate,
                          seed=self.seed, threads=self.threads)


@dataclass
class Model:
    """A trained artifact of any method, plus what it was trained on."""

    method: str
    languages: tuple[str, ...]
    artifact: EmbeddingMatrix | TranslationTable | SparseMatrix
    params: Params = field(default_factory=Params)

    def similarity(self, src: str, tgt: str) -> Similarity:
        for lang in (src, tgt):
            if lang not in self.languages:
                raise ValueError(f"{self.method} model covers {','.join(self.languages)}, "
                                 f"not {lang!r}")
        if self.method == "model1":
            if self.artifact.direction != (src, tgt):
                raise ValueError(f"translation table is {self.artifact.source}->"
                                 f"{self.artifact.target}, not {src}->{tgt}")
            return Model1Similarity(self.artifact)
        if self.method == "dice":
            return DiceSimilarity(CooccurrenceStats(self.artifact), classic=self.params.classic_dice)
        return EmbeddingSimilarity(self.artifact)

    def target_vocabulary(self, tgt: str) -> list[LangWord]:
        if self.method == "model1":
            return list(self.artifact.target_words)
        return [w for w in self.artifact.words if w.language == tgt]


def check_method(method: str, mode: str, languages: Sequence[str] | None = None) -> None:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if mode not in ("bilingual", "multilingual"):
        raise ValueError(f"unknown mode {mode!r}")
    if method in BILINGUAL_ONLY and mode == "multilingual":
        raise ValueError(f"{method} is bilingual only; --mode multilingual is not supported")
    if languages is None:
        return
    if mode == "bilingual" and len(languages) != 2:
        raise ValueError(f"bilingual mode needs exactly 2 languages, got {len(languages)}")
    if len(languages) < 2:
        raise ValueError("need >= 2 languages")


def train(corpus: ParallelCorpus, vocab: Vocabulary, method: str, languages: Sequence[str],
          mode: str = "bilingual", params: Params | None = None) -> Model:
    """Train one method. For model1 the language order is the direction."""
    params = params or Params()
    languages = tuple(languages)
    check_method(method, mode, languages)
    if method == "model1":
        artifact = train_model1(corpus, vocab, languages[0], languages[1],
                                iterations=params.iterations, use_null=params.use_null)
        return Model(method, languages, artifact, params)
    m = build_indicator_matrix(corpus, vocab, languages, granularity=params.granularity)
    if method == "dice":
        artifact = m
    elif method == "sgns":
        artifact = train_sid_sgns(m, params.sgns_config(), mode=mode)
    elif method == "svd-idf":
        artifact = train_inverted_index(transform_idf(m), dim=params.dim, seed=params.seed)
    else:
        artifact = train_inverted_index(transform_pmi(m, positive=True), dim=params.dim,
                                        seed=params.seed)
    return Model(method, tuple(sorted(languages)), artifact, params)


def save(model: Model, out: str | Path, manifest: dict) -> list[Path]:
    """Write the artifact and its manifest; returns the paths written."""
    out = Path(out)
    written = [out]
    if model.method == "model1":
        formats.write_table(model.artifact, out)
    elif model.method == "dice":
        rows = formats.rows_path(out)
        formats.write_matrix(model.artifact, out, rows)
        written.append(rows)
    else:
        formats.write_embeddings(model.artifact, out)
    mpath = formats.manifest_path(out)
    formats.write_manifest(mpath, manifest)
    written.append(mpath)
    return written


def load(path: str | Path) -> tuple[Model, dict]:
    path = Path(path)
    mpath = formats.manifest_path(path)
    if not mpath.is_file():
        raise FileNotFoundError(f"no manifest next to {path} (expected {mpath})")
    manifest = formats.read_manifest(mpath)
    method = manifest["method"]
    languages = tuple(manifest["languages"])
    params = Params.from_dict(manifest.get("flags", {}))
    if method == "model1":
        artifact = formats.read_table(path, languages[0], languages[1])
    elif method == "dice":
        artifact = formats.read_matrix(path, formats.rows_path(path))
    elif method in METHODS:
        artifact = formats.read_embeddings(path)
    else:
        raise ValueError(f"{mpath}: unknown method {method!r}")
    return Model(method, languages, artifact, params), manifest


def evaluate_alignment(model: Model, src: str, tgt: str, gold_path, src_text, tgt_text) -> float:
    """1-AER of greedy decoding on a gold-aligned test set."""
    for p in (gold_path, src_text, tgt_text):
        if not Path(p).is_file():
            raise FileNotFoundError(f"missing gold file: {p}")
    sim = model.similarity(src, tgt)
    src_sents = read_sentences(src_text, src)
    tgt_sents = read_sentences(tgt_text, tgt)
    predicted = align_corpus(src_sents, tgt_sents, sim)
    gold = load_gold_alignment(gold_path, sentence_ids=predicted)
    extra = set(gold.sure) - set(predicted)
    if extra:
        raise ValueError(f"gold alignment has sentence IDs beyond the text files: "
                         f"{sorted(extra)[:5]}")
    return compute_aer(predicted, gold)[1]


def evaluate_dictionary(model: Model, src: str, tgt: str, dict_path,
                        any_of: bool = False) -> tuple[float, float]:
    if not Path(dict_path).is_file():
        raise FileNotFoundError(f"missing dictionary file: {dict_path}")
    sim = model.similarity(src, tgt)
    dictionary = load_dictionary(dict_path, src, tgt)
    return induce_p_at_1(sim, dictionary, model.target_vocabulary(tgt), any_of=any_of)
