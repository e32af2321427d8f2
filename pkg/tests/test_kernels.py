import os
import random
import subprocess
import sys
from array import array
from itertools import combinations

import pytest

from eulerlink import _core_py, _kernels
from eulerlink.invariants import Mode
from eulerlink.simplicial import random_complex


def _run(mod, name, K, vals):
    ptr, idx = K.face_table()
    out = array("q", bytes(8 * len(vals)))
    getattr(mod, name)(ptr, idx, K.dims, array("q", vals), out)
    return list(out)


@pytest.mark.parametrize("name", ["coface_sums", "link_sums"])
def test_compiled_matches_pure(name):
    rng = random.Random(2)
    for _ in range(20):
        K = random_complex(rng, max_simplices=150, max_dim=4)
        vals = [rng.randint(-9, 9) for _ in range(len(K))]
        assert _run(_kernels, name, K, vals) == _run(_core_py, name, K, vals)


def _odd_subsets_brute(masks, universe, nbits):
    bits = [i for i in range(universe.bit_length()) if universe >> i & 1]
    out = []
    for k in range(1, len(bits) + 1):
        for sel in combinations(bits, k):
            s = sum(1 << b for b in sel)
            if s & nbits and sum(1 for m in masks if m & s == s) % 2:
                out.append(s)
    return sorted(out)


def test_odd_subsets_against_brute_force():
    rng = random.Random(4)
    universe, nbits = 0x3FF, 0x3F8
    for _ in range(40):
        masks = [rng.randrange(universe + 1) for _ in range(rng.randint(0, 6))]
        want = _odd_subsets_brute(masks, universe, nbits)
        for impl in (_kernels, _core_py):
            count, listed = impl.odd_subsets(masks, universe, nbits, 1 << 20)
            assert count == len(want) and listed == want


def test_odd_subsets_cap():
    count, listed = _kernels.odd_subsets([Mode.EXTENDED.universe], Mode.EXTENDED.universe,
                                         Mode.EXTENDED.n_mask, 1000)
    assert len(listed) == 1000
    assert count == 2 ** 43 - 2 ** 3


def test_fallback_selected_by_environment():
    code = "from eulerlink import _kernels; print(_kernels.COMPILED)"
    env = dict(os.environ, EULERLINK_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
