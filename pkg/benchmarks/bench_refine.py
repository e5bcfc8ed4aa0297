"""Compare the compiled and pure-Python partition refinement kernels.

    python benchmarks/bench_refine.py [--repeat 3]

Each row times ``partition`` on one LTS for both backends and checks that
they return the same partition.
"""

import argparse
import random
import time

from isoltest import bisim, soc
from isoltest.lts import TAU, Lts, visible
from isoltest.scenarios import ctg_for, extended_tp, generation_model


def random_lts(n, labels, density, seed, tau=False):
    rng = random.Random(seed)
    labs = [visible(f"a{k}") for k in range(labels)] + ([TAU] if tau else [])
    edges = [(s, rng.choice(labs), rng.randrange(n)) for s in range(n) for _ in range(density)]
    return Lts(n, 0, edges)


def cases():
    eight = soc.build_soc_lts(soc.eight_source_params())
    yield "8-source SoC", eight, "strong"
    yield "8-source SoC, ids dropped, Config hidden", bisim.collapse_tau_cycles(soc.relabel_for_comparison(eight))[0], "branching"
    yield "extended-scenario CTG", ctg_for(extended_tp(), generation_model()).lts, "strong"
    yield "random 20k states", random_lts(20_000, 6, 3, 1), "strong"
    yield "random 5k states with tau", bisim.collapse_tau_cycles(random_lts(5_000, 4, 2, 2, tau=True))[0], "branching"


def canonical(block):
    """Renumber blocks by first occurrence so equal partitions compare equal."""
    seen = {}
    return [seen.setdefault(b, len(seen)) for b in block]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if bisim.BACKEND != "compiled":
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'case':44} {'states':>7} {'trans':>7} {'relation':>9} {'python s':>9} {'compiled s':>10} {'speedup':>8}")
    for name, l, rel in cases():
        tp, bp = best_of(lambda: bisim.partition(l, rel, backend="python"), args.repeat)
        tc, bc = best_of(lambda: bisim.partition(l, rel, backend="compiled"), args.repeat)
        if canonical(bp) != canonical(bc):
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:44} {l.n_states:7d} {l.n_transitions:7d} {rel:>9} {tp:9.3f} {tc:10.3f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
