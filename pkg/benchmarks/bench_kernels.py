"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--size N]
"""
import argparse
import random
import timeit
from array import array

from eulerlink import _core_py
from eulerlink.invariants import Mode
from eulerlink.simplicial import random_complex

try:
    from eulerlink import _core
except ImportError:
    _core = None


def kernel_inputs(size, seed):
    rng = random.Random(seed)
    K = random_complex(rng, max_simplices=size, max_dim=4, n_vertices=max(8, size // 40))
    ptr, idx = K.face_table()
    vals = array("q", (rng.randint(-9, 9) for _ in range(len(K))))
    return K, ptr, idx, vals


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _core is None:
        raise SystemExit("compiled module not built; run `pip install -e . --no-build-isolation` first")

    K, ptr, idx, vals = kernel_inputs(args.size, args.seed)
    print(f"complex: {len(K)} simplices, dim {K.dim}, {len(idx)} face incidences")

    rng = random.Random(args.seed)
    U, N = Mode.EXTENDED.universe, Mode.EXTENDED.n_mask
    masks = [rng.getrandbits(43) & rng.getrandbits(43) & U for _ in range(40)]

    def table_kernel(name):
        def call(mod):
            out = array("q", bytes(8 * len(vals)))
            getattr(mod, name)(ptr, idx, K.dims, vals, out)
            return out
        return call

    cases = {
        "coface_sums": table_kernel("coface_sums"),
        "link_sums": table_kernel("link_sums"),
        "odd_subsets": lambda mod: mod.odd_subsets(masks, U, N, 1 << 16),
    }
    print(f"{'kernel':<14}{'compiled':>12}{'pure':>12}{'speedup':>10}")
    for name, call in cases.items():
        assert call(_core) == call(_core_py), name
        fast = bench(lambda: call(_core), args.repeat)
        slow = bench(lambda: call(_core_py), args.repeat)
        print(f"{name:<14}{fast * 1e3:>10.2f}ms{slow * 1e3:>10.2f}ms{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
