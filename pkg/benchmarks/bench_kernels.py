"""Compare the compiled and pure numpy kernels on simulation-sized inputs.

    python benchmarks/bench_kernels.py [--n 200000] [--repeat 5]

Prints the best-of-``repeat`` wall time per kernel and backend, and the
speed-up of the compiled version.  Both backends must agree on every
output; a mismatch aborts the run.
"""

import argparse
import time

import numpy as np

from sgraph import _kernels
from sgraph.degree_set import parse_degree_set
from sgraph.sim.graph import configuration_multigraph
from sgraph.sim.sampling import sample_degree_sequence


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--lam", type=float, default=4.0)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _kernels.compiled is None:
        raise SystemExit("compiled kernels are not available; build with "
                         "`pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(args.seed)
    S = parse_degree_set("ge:0")
    G = configuration_multigraph(sample_degree_sequence(S, args.lam, args.n, rng), rng)
    masks = _kernels.compiled.enumerate_s_masks(6, np.ones(6, np.uint8))
    allowed = np.array([1, 0, 1, 0, 1, 0, 1], np.uint8)

    cases = [
        ("component_labels", lambda m: m.component_labels(G.n, G.u, G.v)),
        ("kcore_mask k=3", lambda m: m.kcore_mask(G.n, G.u, G.v, 3)),
        ("enumerate_s_masks n=7", lambda m: m.enumerate_s_masks(7, allowed)),
        ("mask_statistics n=6", lambda m: m.mask_statistics(6, masks)),
    ]
    print(f"graph: n={G.n} edges={G.edges}   repeat={args.repeat}")
    print(f"{'kernel':24s} {'cython [s]':>12s} {'python [s]':>12s} {'speed-up':>9s}")
    for name, call in cases:
        tc, oc = best_time(lambda: call(_kernels.compiled), args.repeat)
        tp, op = best_time(lambda: call(_kernels.python), args.repeat)
        if not _same(oc, op):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:24s} {tc:12.4f} {tp:12.4f} {tp / tc:9.1f}")


if __name__ == "__main__":
    main()
