import os
import subprocess
import sys

import numpy as np

SCRIPT = """
import sys, numpy as np
from sidvec import _accel
from sidvec.corpus import build_vocabulary
from sidvec.matrix import build_indicator_matrix
from sidvec.model1 import train_model1
from sidvec.sgns import SgnsConfig, train_sid_sgns
from sidvec.synthetic import permutation_corpus
corpus, _ = permutation_corpus(n_words=20, n_sentences=60, seed=4)
vocab = build_vocabulary(corpus)
emb = train_sid_sgns(build_indicator_matrix(corpus, vocab), SgnsConfig(dim=8, epochs=5))
table = train_model1(corpus, vocab, "en", "fr", 3)
np.savez(sys.argv[1], w=emb.word_vectors, t=table.probs.toarray(), jit=_accel.USE_NUMBA)
"""


def _run(tmp_path, flag):
    out = tmp_path / f"{flag or 'jit'}.npz"
    env = {**os.environ, "SIDVEC_DISABLE_JIT": flag}
    subprocess.run([sys.executable, "-c", SCRIPT, str(out)], env=env, check=True)
    return np.load(out)


def test_env_flag_selects_fallback_with_same_results(tmp_path):
    jit, plain = _run(tmp_path, ""), _run(tmp_path, "1")
    assert bool(jit["jit"]) and not bool(plain["jit"])
    np.testing.assert_allclose(plain["w"], jit["w"], rtol=0, atol=1e-10)
    np.testing.assert_allclose(plain["t"], jit["t"], rtol=0, atol=1e-12)
