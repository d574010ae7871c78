import numpy as np
import pytest
import scipy.sparse as sp

from sidvec.corpus import LangWord
from sidvec.matrix import SparseMatrix
from sidvec.svd import randomized_svd, train_inverted_index


def as_matrix(dense):
    dense = np.asarray(dense, dtype=float)
    csr = sp.csr_matrix(dense)
    words = tuple(LangWord("en", f"w{i}") for i in range(dense.shape[0]))
    return SparseMatrix(csr, words, dense.sum(1), dense.sum(0), float(dense.sum()), kind="idf")


def oracle(a, k):
    """Dense LAPACK SVD: singular values and the optimal rank-k error."""
    s = np.linalg.svd(np.asarray(a), compute_uv=False)
    return s, np.sqrt(np.sum(s[k:] ** 2))


def test_identity():
    n = 6
    emb = train_inverted_index(as_matrix(np.eye(n)), dim=n)
    np.testing.assert_allclose(emb.singular_values, 1.0)
    np.testing.assert_allclose(emb.word_vectors @ emb.word_vectors.T, np.eye(n), atol=1e-12)


def test_rank_one():
    rng = np.random.default_rng(0)
    u, v = rng.random(7), rng.random(9)
    a = np.outer(u, v)
    for d in (1, 3):
        emb = train_inverted_index(as_matrix(a), dim=d)
        s = emb.singular_values
        assert s[0] == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v))
        assert np.all(s[1:] < 1e-10 * s[0])
        recon = emb.word_vectors[:, :1] @ emb.feature_vectors[:, :1].T
        assert np.linalg.norm(recon - a) <= 1e-8 * np.linalg.norm(a)


def test_full_rank_sparse_reconstruction():
    a = sp.random(50, 80, density=0.3, random_state=np.random.RandomState(1)).toarray()
    emb = train_inverted_index(as_matrix(a), dim=50)
    recon = emb.word_vectors @ emb.feature_vectors.T
    assert np.linalg.norm(recon - a) / np.linalg.norm(a) <= 1e-6


@pytest.mark.parametrize("shape, k", [((30, 40), 5), ((120, 200), 20), ((200, 200), 60),
                                      ((200, 150), 150), ((200, 200), 3)])
def test_matches_dense_oracle(shape, k):
    rng = np.random.default_rng(k)
    a = rng.standard_normal(shape)
    s_ref, opt = oracle(a, k)
    u, s, vt = randomized_svd(a, k, seed=k)
    np.testing.assert_allclose(s, s_ref[:k], rtol=1e-6)
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    err = np.linalg.norm(a - (u * s) @ vt)
    assert err - opt <= 1e-6 * max(opt, np.linalg.norm(a))
    np.testing.assert_allclose(u.T @ u, np.eye(k), atol=1e-10)


def test_symmetric_weighting():
    rng = np.random.default_rng(5)
    a = rng.random((40, 60)) * (rng.random((40, 60)) < 0.2)
    emb = train_inverted_index(as_matrix(a), dim=10)
    u, s, _ = np.linalg.svd(a)
    gram = emb.word_vectors @ emb.word_vectors.T
    np.testing.assert_allclose(gram, (u[:, :10] * s[:10]) @ u[:, :10].T, atol=1e-8)


def test_deterministic_signs():
    rng = np.random.default_rng(6)
    a = rng.random((20, 30))
    e1 = train_inverted_index(as_matrix(a), dim=4, seed=1)
    e2 = train_inverted_index(as_matrix(a), dim=4, seed=2)
    np.testing.assert_allclose(e1.word_vectors, e2.word_vectors, atol=1e-8)


def test_errors():
    with pytest.raises(ValueError, match="exceeds"):
        train_inverted_index(as_matrix(np.eye(3)), dim=4)
    with pytest.raises(ValueError, match="empty"):
        train_inverted_index(as_matrix(np.zeros((3, 3))), dim=2)
