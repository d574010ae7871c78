"""Synthetic parallel corpora with a known translation lexicon."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .corpus import LangWord, ParallelCorpus


def permutation_corpus(languages: Sequence[str] = ("en", "fr"), n_words: int = 50,
                       n_sentences: int = 500, min_len: int = 3, max_len: int = 10,
                       deletion: float = 0.0, seed: int = 0,
                       ) -> tuple[ParallelCorpus, dict[str, np.ndarray]]:
    """Sentences over a shared concept lexicon, rendered per language by a bijection.

    Each sentence draws ``min_len..max_len`` concepts uniformly; language
    ``L`` writes concept ``i`` as ``w<perm_L[i]>``. With ``deletion > 0``
    every token is dropped independently per language with that probability.
    Returns the corpus and ``{language: perm}``.
    """
    rng = np.random.default_rng(seed)
    perms = {lang: rng.permutation(n_words) for lang in languages}
    rows = []
    for _ in range(n_sentences):
        length = int(rng.integers(min_len, max_len + 1))
        concepts = rng.integers(0, n_words, size=length)
        row = {}
        for lang in languages:
            keep = rng.random(length) >= deletion if deletion > 0 else np.ones(length, bool)
            row[lang] = [f"w{perms[lang][c]}" for c in concepts[keep]]
        rows.append(row)
    return ParallelCorpus.from_sentences(rows, languages=tuple(languages)), perms


def gold_dictionary(perms: dict[str, np.ndarray], src: str, tgt: str) -> list[tuple[LangWord, LangWord]]:
    """The true one-to-one lexicon between two languages of a permutation corpus."""
    return [(LangWord(src, f"w{perms[src][c]}"), LangWord(tgt, f"w{perms[tgt][c]}"))
            for c in range(len(perms[src]))]
