import numpy as np
import pytest

from sidvec.corpus import LangWord, build_vocabulary
from sidvec.dice import CooccurrenceStats, dice_similarity
from sidvec.embedding import EmbeddingMatrix
from sidvec.formats import (manifest_path, read_embeddings, read_manifest, read_matrix, read_table,
                            rows_path, write_embeddings, write_manifest, write_matrix, write_table)
from sidvec.matrix import build_indicator_matrix
from sidvec.model1 import train_model1


def test_embeddings_round_trip_exact(tmp_path, rng):
    words = (LangWord("en", "a"), LangWord("fr", "b"), LangWord("fr", "c:d"))
    emb = EmbeddingMatrix(words, rng.standard_normal((3, 4)) * 1e-3)
    p = tmp_path / "emb.txt"
    write_embeddings(emb, p)
    back = read_embeddings(p)
    assert back.words == words
    np.testing.assert_array_equal(back.word_vectors, emb.word_vectors)
    assert p.read_text().splitlines()[0] == "3 4"


def test_embeddings_bad_row(tmp_path):
    p = tmp_path / "emb.txt"
    p.write_text("1 3\nen:a 1.0 2.0\n")
    with pytest.raises(ValueError):
        read_embeddings(p)


def test_table_round_trip(tmp_path, toy_corpus, toy_vocab):
    table = train_model1(toy_corpus, toy_vocab, "en", "fr", 5)
    p = tmp_path / "t.txt"
    write_table(table, p)
    back = read_table(p, "en", "fr")
    assert back.has_null == table.has_null
    assert sorted(back.entries(), key=str) == sorted(table.entries(), key=str)
    lines = p.read_text().splitlines()
    assert int(lines[0]) == len(lines) - 1 and lines[1:] == sorted(lines[1:])
    with pytest.raises(ValueError):
        read_table(p, "fr", "en")


def test_matrix_round_trip(tmp_path, toy_corpus, toy_vocab):
    m = build_indicator_matrix(toy_corpus, toy_vocab)
    p = tmp_path / "m.txt"
    write_matrix(m, p, rows_path(p))
    back = read_matrix(p, rows_path(p))
    assert back.words == m.words
    assert (back.csr != m.csr).nnz == 0
    np.testing.assert_array_equal(back.row_sums, m.row_sums)
    s1, s2 = CooccurrenceStats(m), CooccurrenceStats(back)
    a, b = LangWord("en", "house"), LangWord("fr", "maison")
    assert dice_similarity(a, b, s1) == dice_similarity(a, b, s2)


def test_manifest(tmp_path):
    p = manifest_path(tmp_path / "emb.txt")
    assert p.name == "emb.txt.manifest.json"
    write_manifest(p, {"b": 1, "a": [1, 2]})
    assert read_manifest(p) == {"a": [1, 2], "b": 1}
    assert p.read_text().index('"a"') < p.read_text().index('"b"')
