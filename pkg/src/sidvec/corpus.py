"""Parallel corpus ingestion, tokenization and the shared vocabulary."""
from __future__ import annotations

import hashlib
import itertools
import logging
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

log = logging.getLogger(__name__)


class OOVError(KeyError):
    """A queried word is not in the model's vocabulary."""


class LangWord(NamedTuple):
    """A surface form tagged with its language; ``en:the`` != ``fr:the``."""

    language: str
    surface: str

    def __str__(self) -> str:
        return f"{self.language}:{self.surface}"

    @classmethod
    def parse(cls, text: str) -> "LangWord":
        lang, sep, surface = text.partition(":")
        if not sep or not lang or not surface:
            raise ValueError(f"expected 'lang:word', got {text!r}")
        return cls(lang, surface)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(line: str) -> list[str]:
    """Lowercase, split off runs of punctuation, then split on whitespace.

    >>> tokenize("In the beginning, God created")
    ['in', 'the', 'beginning', ',', 'god', 'created']
    >>> tokenize("don't stop!")
    ['don', "'", 't', 'stop', '!']
    """
    tokens = []
    for chunk in line.lower().split():
        for _, run in itertools.groupby(chunk, key=_is_punct):
            tokens.append("".join(run))
    return tokens


@dataclass(frozen=True)
class ParallelCorpus:
    """Sentences keyed by a shared ID ``0..S-1``.

    ``sentences[i]`` maps a language code to its token tuple; a missing key
    means the language has no translation of sentence ``i``. ``doc_keys``
    optionally groups sentence IDs into coarser documents.
    """

    languages: tuple[str, ...]
    sentences: tuple[dict[str, tuple[str, ...]], ...]
    doc_keys: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.doc_keys is not None and len(self.doc_keys) != len(self.sentences):
            raise ValueError(
                f"{len(self.doc_keys)} document keys for {len(self.sentences)} sentences")

    def __len__(self) -> int:
        return len(self.sentences)

    @classmethod
    def from_sentences(cls, rows: Sequence[Mapping[str, str | Sequence[str] | None]],
                       languages: Sequence[str] | None = None,
                       doc_keys: Sequence[str] | None = None) -> "ParallelCorpus":
        """Build a corpus from in-memory rows (raw strings are tokenized).

        ``None`` or a missing language marks the sentence as absent.
        """
        langs = tuple(sorted({lang for row in rows for lang in row})) if languages is None \
            else tuple(languages)
        sentences = []
        for row in rows:
            entry = {}
            for lang, value in row.items():
                if value is None:
                    continue
                if lang not in langs:
                    raise ValueError(f"unknown language {lang!r}")
                entry[lang] = tuple(tokenize(value)) if isinstance(value, str) else tuple(value)
            sentences.append(entry)
        return cls(langs, tuple(sentences), None if doc_keys is None else tuple(doc_keys))

    def pairs(self, src: str, tgt: str) -> Iterable[tuple[int, tuple[str, ...], tuple[str, ...]]]:
        """Yield ``(sentence_id, src_tokens, tgt_tokens)`` where both languages are present."""
        for sid, entry in enumerate(self.sentences):
            if src in entry and tgt in entry:
                yield sid, entry[src], entry[tgt]


def _read_lines(path: Path) -> list[str]:
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.rstrip("\r") for line in lines]


def load_parallel_corpus(files: Mapping[str, str | Path],
                         doc_keys: str | Path | None = None) -> ParallelCorpus:
    """Read one line-aligned text file per language.

    Line ``i`` of every file is sentence ID ``i``. Shorter files are padded
    with absent sentences and a blank line also marks the language absent.
    ``doc_keys`` names an optional file with one document key per sentence.
    """
    if len(files) < 2:
        raise ValueError(f"need >= 2 languages, got {len(files)}")
    raw = {}
    for lang, path in files.items():
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"corpus file for {lang!r} not found: {path}")
        raw[lang] = _read_lines(path)
    n_sent = max(len(lines) for lines in raw.values())
    languages = tuple(sorted(raw))
    sentences = []
    nonempty = 0
    for i in range(n_sent):
        entry = {}
        for lang in languages:
            lines = raw[lang]
            if i < len(lines) and lines[i].strip():
                entry[lang] = tuple(tokenize(lines[i]))
        nonempty += bool(entry)
        sentences.append(entry)
    if nonempty == 0:
        raise ValueError("corpus has no nonempty sentences")
    keys = None
    if doc_keys is not None:
        keys = [k.strip() for k in _read_lines(Path(doc_keys))]
        if len(keys) < n_sent:
            raise ValueError(f"document key file has {len(keys)} lines, corpus has {n_sent}")
        keys = tuple(keys[:n_sent])
    log.info("loaded %d sentences in %d languages", n_sent, len(languages))
    return ParallelCorpus(languages, tuple(sentences), keys)


def corpus_files(corpus_dir: str | Path) -> dict[str, Path]:
    """Map language code -> ``<lang>.txt`` for every such file in a directory."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus_dir}")
    return {p.stem: p for p in sorted(corpus_dir.glob("*.txt"))}


def load_corpus_dir(corpus_dir: str | Path, doc_keys: str | Path | None = None) -> ParallelCorpus:
    return load_parallel_corpus(corpus_files(corpus_dir), doc_keys=doc_keys)


def corpus_checksum(corpus_dir: str | Path) -> str:
    """SHA-256 over the corpus files (names and bytes, in sorted order)."""
    digest = hashlib.sha256()
    for lang, path in corpus_files(corpus_dir).items():
        digest.update(lang.encode("utf-8") + b"\0")
        digest.update(path.read_bytes())
        digest.update(b"\0")
    return digest.hexdigest()


@dataclass(frozen=True)
class Vocabulary:
    """Dense index over language-tagged words, sorted by (language, surface)."""

    words: tuple[LangWord, ...]
    occurrence_count: np.ndarray
    sentence_count: np.ndarray
    index: dict[LangWord, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word) -> bool:
        return word in self.index

    def __getitem__(self, word: LangWord) -> int:
        return self.index[word]

    def get(self, word: LangWord, default=None):
        return self.index.get(word, default)

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(sorted({w.language for w in self.words}))

    def indices_of(self, language: str) -> np.ndarray:
        """Vocabulary indices of one language's words, ascending."""
        return np.array([i for i, w in enumerate(self.words) if w.language == language],
                        dtype=np.int64)


def build_vocabulary(corpus: ParallelCorpus, min_count: int = 2) -> Vocabulary:
    """Keep every language-tagged word occurring at least ``min_count`` times."""
    if min_count < 1:
        raise ValueError("min_count must be positive")
    occurrences: Counter = Counter()
    sentence_hits: Counter = Counter()
    for entry in corpus.sentences:
        for lang, tokens in entry.items():
            occurrences.update(LangWord(lang, t) for t in tokens)
            sentence_hits.update({LangWord(lang, t) for t in tokens})
    words = tuple(sorted(w for w, c in occurrences.items() if c >= min_count))
    return Vocabulary(
        words,
        np.array([occurrences[w] for w in words], dtype=np.int64),
        np.array([sentence_hits[w] for w in words], dtype=np.int64),
    )


def encode(corpus: ParallelCorpus, vocab: Vocabulary, language: str) -> list[np.ndarray | None]:
    """Per sentence, the vocabulary indices of a language's in-vocabulary tokens.

    Absent sentences map to ``None``; OOV tokens are dropped.
    """
    out: list[np.ndarray | None] = []
    index = vocab.index
    for entry in corpus.sentences:
        tokens = entry.get(language)
        if tokens is None:
            out.append(None)
            continue
        ids = [index.get(LangWord(language, t), -1) for t in tokens]
        out.append(np.array([i for i in ids if i >= 0], dtype=np.int64))
    return out
