"""Dense word vectors shared by the SGNS and SVD trainers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import LangWord, OOVError


@dataclass(frozen=True)
class EmbeddingMatrix:
    words: tuple[LangWord, ...]
    word_vectors: np.ndarray
    feature_vectors: np.ndarray | None = None
    losses: tuple[float, ...] = ()
    singular_values: np.ndarray | None = None
    index: dict[LangWord, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.word_vectors.shape[0] != len(self.words):
            raise ValueError("one vector per word required")
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word) -> bool:
        return word in self.index

    @property
    def dim(self) -> int:
        return self.word_vectors.shape[1]

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(sorted({w.language for w in self.words}))

    def vector(self, word: LangWord) -> np.ndarray:
        try:
            return self.word_vectors[self.index[word]]
        except KeyError:
            raise OOVError(word) from None

    def rows_of(self, language: str) -> np.ndarray:
        return np.array([i for i, w in enumerate(self.words) if w.language == language],
                        dtype=np.int64)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("cosine of a zero vector is undefined")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def cosine_scores(u: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Cosine of ``u`` against every row of ``rows``; zero rows score -1."""
    nu = np.linalg.norm(u)
    if nu == 0:
        raise ValueError("cosine of a zero vector is undefined")
    norms = np.linalg.norm(rows, axis=1)
    out = np.full(len(rows), -1.0)
    ok = norms > 0
    out[ok] = rows[ok] @ u / (norms[ok] * nu)
    return np.clip(out, -1.0, 1.0)
