"""Plain-text artifact formats: embeddings, translation tables, sparse matrices."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .corpus import LangWord
from .embedding import EmbeddingMatrix
from .matrix import SparseMatrix
from .model1 import NULL, TranslationTable


def _num(x: float) -> str:
    # repr is the shortest string that round-trips a double
    return repr(float(x))


def write_embeddings(emb: EmbeddingMatrix, path: str | Path) -> None:
    """``|V| d`` header, then ``lang:surface v1 ... vd`` per word."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(emb)} {emb.dim}\n")
        for word, row in zip(emb.words, emb.word_vectors.tolist()):
            fh.write(str(word) + " " + " ".join(map(_num, row)) + "\n")


def read_embeddings(path: str | Path) -> EmbeddingMatrix:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        n, d = int(header[0]), int(header[1])
        words, vecs = [], np.empty((n, d))
        for i in range(n):
            parts = fh.readline().rstrip("\n").split(" ")
            if len(parts) != d + 1:
                raise ValueError(f"{path}: line {i + 2} has {len(parts) - 1} values, expected {d}")
            words.append(LangWord.parse(parts[0]))
            vecs[i] = [float(x) for x in parts[1:]]
    return EmbeddingMatrix(tuple(words), vecs)


def write_table(table: TranslationTable, path: str | Path) -> None:
    """``n_entries`` header, then sorted ``src_word tgt_word prob`` lines.

    Words are written as ``lang:surface``; the NULL source is ``<null>``.
    """
    lines = []
    for ws, wt, p in table.entries():
        lines.append((NULL if ws is None else str(ws), str(wt), _num(p)))
    lines.sort()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(lines)}\n")
        for src, tgt, p in lines:
            fh.write(f"{src} {tgt} {p}\n")


def read_table(path: str | Path, source: str, target: str) -> TranslationTable:
    """Load a table dump; every vocabulary word appearing in it gets a row/column."""
    with open(path, encoding="utf-8") as fh:
        n = int(fh.readline())
        rows = [fh.readline().rstrip("\n").split(" ") for _ in range(n)]
    has_null = any(r[0] == NULL for r in rows)
    src_words = sorted({LangWord.parse(r[0]) for r in rows if r[0] != NULL})
    tgt_words = sorted({LangWord.parse(r[1]) for r in rows})
    for w in src_words:
        if w.language != source:
            raise ValueError(f"{path}: source word {w} is not {source!r}")
    for w in tgt_words:
        if w.language != target:
            raise ValueError(f"{path}: target word {w} is not {target!r}")
    s_idx = {str(w): i for i, w in enumerate(src_words)}
    s_idx[NULL] = len(src_words)
    t_idx = {str(w): i for i, w in enumerate(tgt_words)}
    r = np.array([s_idx[x[0]] for x in rows], dtype=np.int64)
    c = np.array([t_idx[x[1]] for x in rows], dtype=np.int64)
    v = np.array([float(x[2]) for x in rows])
    shape = (len(src_words) + int(has_null), len(tgt_words))
    probs = sp.csr_matrix((v, (r, c)), shape=shape)
    probs.sort_indices()
    return TranslationTable(source, target, tuple(src_words), tuple(tgt_words), probs, has_null)


def write_matrix(m: SparseMatrix, path: str | Path, rows_path: str | Path | None = None) -> None:
    """``n_rows n_cols nnz`` header, then ``row col value`` per stored cell.

    Row labels (and raw marginals) go to ``rows_path`` when given, one
    ``lang:surface`` per line.
    """
    coo = m.csr.tocoo()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{m.n_rows} {m.n_cols} {m.nnz}\n")
        for i, j, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
            fh.write(f"{i} {j} {_num(v)}\n")
    if rows_path is not None:
        with open(rows_path, "w", encoding="utf-8", newline="\n") as fh:
            for w in m.words:
                fh.write(f"{w}\n")


def read_matrix(path: str | Path, rows_path: str | Path, kind: str = "indicator") -> SparseMatrix:
    with open(path, encoding="utf-8") as fh:
        n_rows, n_cols, nnz = (int(x) for x in fh.readline().split())
        cells = np.loadtxt(fh, ndmin=2) if nnz else np.zeros((0, 3))
    if len(cells) != nnz:
        raise ValueError(f"{path}: header says {nnz} cells, found {len(cells)}")
    with open(rows_path, encoding="utf-8") as fh:
        words = tuple(LangWord.parse(line.rstrip("\n")) for line in fh if line.strip())
    csr = sp.csr_matrix((cells[:, 2], (cells[:, 0].astype(np.int64), cells[:, 1].astype(np.int64))),
                        shape=(n_rows, n_cols))
    csr.sort_indices()
    return SparseMatrix(csr, words, np.asarray(csr.sum(axis=1)).ravel(),
                        np.asarray(csr.sum(axis=0)).ravel(), float(csr.sum()), kind)


def write_manifest(path: str | Path, manifest: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def manifest_path(artifact: str | Path) -> Path:
    artifact = Path(artifact)
    return artifact.with_name(artifact.name + ".manifest.json")


def rows_path(artifact: str | Path) -> Path:
    artifact = Path(artifact)
    return artifact.with_name(artifact.name + ".rows")
