"""Time the numba kernels against their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--sentences 2000] [--pairs 20000] [--repeat 3]

Both paths run on identical inputs; the script reports the best wall time of
each and the largest absolute difference between their outputs.
"""
import argparse
import time

import numpy as np

from sidvec import _accel
from sidvec.corpus import build_vocabulary
from sidvec.model1 import _build_links, _estep_numba, _estep_numpy
from sidvec.sgns import _sgns_epoch_numba, _sgns_epoch_numpy
from sidvec.synthetic import permutation_corpus


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def bench_estep(n_sentences, repeat):
    corpus, _ = permutation_corpus(("en", "fr"), n_words=500, n_sentences=n_sentences, seed=0)
    links, _, _ = _build_links(corpus, build_vocabulary(corpus), "en", "fr", True)
    rng = np.random.default_rng(0)
    t = rng.random(len(links.pair_src))
    args = (t, links.links, links.group_ptr)
    c_jit, c_np = np.empty_like(t), np.empty_like(t)
    _estep_numba(*args, c_jit)  # compile outside the timing
    t_jit, ll_jit = best_of(lambda: _estep_numba(*args, c_jit), repeat)
    t_np, ll_np = best_of(lambda: _estep_numpy(*args, c_np), repeat)
    diff = max(abs(ll_jit - ll_np), float(np.max(np.abs(c_jit - c_np))))
    return f"model1 E-step ({len(links.links)} links)", t_jit, t_np, diff


def bench_sgns(n_pairs, repeat, dim=100, n_rows=2000, n_cols=5000, k=5):
    rng = np.random.default_rng(0)
    rows = rng.integers(0, n_rows, n_pairs)
    cols = rng.integers(0, n_cols, n_pairs)
    negs = rng.integers(0, n_cols, (n_pairs, k))
    w0 = (rng.random((n_rows, dim)) - 0.5) / dim
    c0 = (rng.random((n_cols, dim)) - 0.5) / dim

    def run(kernel):
        w, c = w0.copy(), c0.copy()
        loss = kernel(w, c, rows, cols, negs, 0.025, 1e-4, 0, n_pairs)
        return loss, w

    run(_sgns_epoch_numba)
    t_jit, (l_jit, w_jit) = best_of(lambda: run(_sgns_epoch_numba), repeat)
    t_np, (l_np, w_np) = best_of(lambda: run(_sgns_epoch_numpy), repeat)
    diff = max(abs(l_jit - l_np) / max(abs(l_np), 1.0), float(np.max(np.abs(w_jit - w_np))))
    return f"SGNS epoch ({n_pairs} pairs, d={dim})", t_jit, t_np, diff


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sentences", type=int, default=2000)
    p.add_argument("--pairs", type=int, default=20000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if not _accel.HAS_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':<38}{'numba s':>10}{'numpy s':>10}{'speedup':>9}{'max diff':>11}")
    for name, t_jit, t_np, diff in (bench_estep(args.sentences, args.repeat),
                                    bench_sgns(args.pairs, args.repeat)):
        print(f"{name:<38}{t_jit:>10.4f}{t_np:>10.4f}{t_np / t_jit:>8.1f}x{diff:>11.1e}")


if __name__ == "__main__":
    main()
