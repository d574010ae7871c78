from pathlib import Path

import numpy as np
import pytest

from sidvec.corpus import ParallelCorpus, build_vocabulary


def random_corpus(rng, n_sent=None, langs=("en", "fr"), n_words=6):
    """Small random parallel corpus; some sentences lack a language."""
    n_sent = n_sent or int(rng.integers(2, 9))
    rows = []
    for _ in range(n_sent):
        row = {}
        for lang in langs:
            if rng.random() < 0.15:
                continue
            length = int(rng.integers(0, 6))
            row[lang] = [f"t{int(x)}" for x in rng.integers(0, n_words, size=length)]
        rows.append(row)
    return ParallelCorpus.from_sentences(rows, languages=langs)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy_corpus():
    return ParallelCorpus.from_sentences([
        {"en": "the house is red", "fr": "la maison est rouge"},
        {"en": "the house", "fr": "la maison"},
        {"en": "a red car", "fr": "une voiture rouge"},
        {"en": "the car is red", "fr": "la voiture est rouge"},
    ])


@pytest.fixture
def toy_vocab(toy_corpus):
    return build_vocabulary(toy_corpus, min_count=1)


def write_workspace(root, languages=("en", "fr", "de"), n_sentences=300, n_test=20, seed=0):
    """Synthetic corpus dir, held-out aligned test texts, gold links and dictionaries.

    Test sentences use the same lexicon without deletion, so position ``i``
    in the source is gold-aligned to position ``i`` in the target.
    """
    from sidvec.synthetic import gold_dictionary, permutation_corpus

    root = Path(root)
    corpus, perms = permutation_corpus(languages, n_words=30, n_sentences=n_sentences, seed=seed)
    cdir = root / "corpus"
    cdir.mkdir(parents=True)
    for lang in languages:
        lines = [" ".join(s[lang]) for s in corpus.sentences]
        (cdir / f"{lang}.txt").write_text("\n".join(lines) + "\n")
    rng = np.random.default_rng(seed + 1)
    test = [rng.integers(0, 30, size=int(rng.integers(3, 9))) for _ in range(n_test)]
    for lang in languages:
        lines = [" ".join(f"w{perms[lang][c]}" for c in concepts) for concepts in test]
        (root / f"test.{lang}").write_text("\n".join(lines) + "\n")
    gold = [f"{k + 1} {i} {i} S" for k, concepts in enumerate(test)
            for i in range(1, len(concepts) + 1)]
    (root / "gold.txt").write_text("\n".join(gold) + "\n")
    for a in languages:
        for b in languages:
            if a != b:
                pairs = gold_dictionary(perms, a, b)
                (root / f"{a}-{b}.dict").write_text(
                    "".join(f"{x.surface}\t{y.surface}\n" for x, y in pairs))
    return root, perms


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance")
        for line in RESULTS:
            terminalreporter.write_line(line)
