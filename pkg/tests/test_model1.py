import math
from collections import defaultdict

import numpy as np
import pytest

from sidvec import _accel, model1
from sidvec.corpus import LangWord, OOVError, ParallelCorpus, build_vocabulary
from sidvec.model1 import model1_similarity, train_model1
from sidvec.synthetic import gold_dictionary, permutation_corpus

from conftest import random_corpus


def oracle_model1(pairs, iterations, use_null=True):
    """Textbook dictionary-based Model-1 EM; returns t[(s, t)] and log-likelihoods."""
    NULL = None
    pairs = [(list(s) + ([NULL] if use_null else []), list(t)) for s, t in pairs]
    pairs = [(s, t) for s, t in pairs if s and t]
    cooc = defaultdict(set)
    for s, t in pairs:
        for ws in s:
            cooc[ws].update(t)
    prob = {(ws, wt): 1.0 / len(ts) for ws, ts in cooc.items() for wt in ts}

    def loglik():
        return sum(math.log(sum(prob[ws, wt] for ws in s) / len(s)) for s, t in pairs for wt in t)

    history = []
    for _ in range(iterations):
        history.append(loglik())
        counts = defaultdict(float)
        for s, t in pairs:
            for wt in t:
                z = sum(prob[ws, wt] for ws in s)
                for ws in s:
                    counts[ws, wt] += prob[ws, wt] / z
        totals = defaultdict(float)
        for (ws, wt), c in counts.items():
            totals[ws] += c
        prob = {k: c / totals[k[0]] for k, c in counts.items()}
    history.append(loglik())
    return prob, history


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    monkeypatch.setattr(_accel, "USE_NUMBA", request.param == "numba")
    return request.param


def test_single_pair(backend):
    corpus = ParallelCorpus.from_sentences([{"en": "a", "fr": "x"}])
    table = train_model1(corpus, build_vocabulary(corpus, 1), "en", "fr", 1)
    assert table.prob(LangWord("en", "a"), LangWord("fr", "x")) == 1.0


def test_classic_two_pair_instance(backend):
    corpus = ParallelCorpus.from_sentences([{"en": "a b", "fr": "x y"}, {"en": "a", "fr": "x"}])
    vocab = build_vocabulary(corpus, 1)
    a, b = LangWord("en", "a"), LangWord("en", "b")
    x, y = LangWord("fr", "x"), LangWord("fr", "y")
    table = train_model1(corpus, vocab, "en", "fr", 2000, use_null=False)
    assert table.prob(a, x) > 0.9999
    assert table.prob(b, y) > 0.999
    assert model1_similarity(a, x, table) == pytest.approx(1.0, abs=1e-4)
    # one hand-iterated step: uniform 1/2; c(x,a)=1/2+1, c(y,a)=1/2, c(x,b)=c(y,b)=1/2
    one = train_model1(corpus, vocab, "en", "fr", 1, use_null=False)
    assert one.prob(a, x) == pytest.approx(0.75)
    assert one.prob(b, y) == pytest.approx(0.5)


def test_matches_oracle(backend, rng):
    for trial in range(15):
        corpus = random_corpus(rng, n_sent=10)
        vocab = build_vocabulary(corpus, 1)
        if not list(corpus.pairs("en", "fr")) or not any(s and t for _, s, t in corpus.pairs("en", "fr")):
            continue
        use_null = bool(trial % 2)
        try:
            table = train_model1(corpus, vocab, "en", "fr", 6, use_null=use_null)
        except ValueError:
            continue
        expected, history = oracle_model1([(s, t) for _, s, t in corpus.pairs("en", "fr")], 6,
                                          use_null)
        got = {(None if ws is None else ws.surface, wt.surface): p for ws, wt, p in table.entries()}
        assert got.keys() == expected.keys()
        for k, p in expected.items():
            assert got[k] == pytest.approx(p, rel=1e-12, abs=1e-14)
        np.testing.assert_allclose(table.log_likelihoods, history, rtol=1e-12)


def test_em_invariants(backend):
    corpus, _ = permutation_corpus(n_sentences=300, seed=4, deletion=0.1)
    vocab = build_vocabulary(corpus)
    seen = []

    def check(it, table):
        sums = table.row_sums()
        np.testing.assert_allclose(sums[sums > 0], 1.0, atol=1e-9)
        assert np.all((table.probs.data >= 0) & (table.probs.data <= 1))
        seen.append(it)

    table = train_model1(corpus, vocab, "en", "fr", 8, callback=check)
    assert seen == list(range(1, 9))
    assert np.all(np.diff(table.log_likelihoods) >= -1e-9)


def test_support_only_cooccurring():
    corpus = ParallelCorpus.from_sentences([{"en": "a", "fr": "x"}, {"en": "b", "fr": "y"}])
    table = train_model1(corpus, build_vocabulary(corpus, 1), "en", "fr", 3)
    assert model1_similarity(LangWord("en", "a"), LangWord("fr", "y"), table) == 0.0
    with pytest.raises(OOVError):
        table.prob(LangWord("en", "zz"), LangWord("fr", "x"))
    with pytest.raises(ValueError):
        model1_similarity(LangWord("fr", "x"), LangWord("en", "a"), table)


def test_recovers_relabeling():
    corpus, perms = permutation_corpus(n_sentences=500, seed=2)
    table = train_model1(corpus, build_vocabulary(corpus), "en", "fr", 20)
    for ws, wt in gold_dictionary(perms, "en", "fr"):
        row = table.row(ws)
        assert table.target_words[int(np.argmax(row))] == wt


def test_errors():
    corpus = ParallelCorpus.from_sentences([{"en": "a"}, {"fr": "x"}])
    vocab = build_vocabulary(corpus, 1)
    with pytest.raises(ValueError, match="no sentence pairs"):
        train_model1(corpus, vocab, "en", "fr", 1)
    with pytest.raises(ValueError):
        train_model1(corpus, vocab, "en", "fr", 0)


def test_backends_agree(rng):
    corpus, _ = permutation_corpus(n_sentences=200, seed=9, deletion=0.2)
    vocab = build_vocabulary(corpus)
    data, _, _ = model1._build_links(corpus, vocab, "en", "fr", True)
    t = model1._normalize(rng.random(len(data.pair_src)) + 0.1, data.pair_src, data.n_src)
    c1, c2 = np.zeros_like(t), np.zeros_like(t)
    ll1 = model1._estep_numba(t, data.links, data.group_ptr, c1)
    ll2 = model1._estep_numpy(t, data.links, data.group_ptr, c2)
    assert ll1 == pytest.approx(ll2, rel=1e-12)
    np.testing.assert_allclose(c1, c2, rtol=1e-12)
