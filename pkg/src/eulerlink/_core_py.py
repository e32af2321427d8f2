"""Pure-Python versions of the hot loops (used when the extension is unavailable)."""
from __future__ import annotations


def coface_sums(ptr, idx, dims, values, out):
    """``out[f] += (-1)^(dim t - dim f) * values[t]`` for every face f of every t."""
    for t in range(len(values)):
        v = values[t]
        if v == 0:
            continue
        dt = dims[t]
        for j in range(ptr[t], ptr[t + 1]):
            f = idx[j]
            if (dt - dims[f]) & 1:
                out[f] -= v
            else:
                out[f] += v


def link_sums(ptr, idx, dims, values, out):
    """``out[s] += 2 [dim s odd] values[s] + sum over proper cofaces t of (-1)^(dim t + 1) values[t]``."""
    for t in range(len(values)):
        v = values[t]
        if v == 0:
            continue
        w = v if dims[t] & 1 else -v
        for j in range(ptr[t], ptr[t + 1]):
            out[idx[j]] += w
        out[t] += v


def _cancel(masks, free):
    odd = {}
    for m in masks:
        m &= free
        odd[m] = not odd.get(m, False)
    return sorted(m for m, o in odd.items() if o)


def odd_subsets(masks, universe, nbits, cap):
    """Sets S within ``universe`` meeting ``nbits`` with an odd number of masks containing S.

    Returns ``(count, listed)``; ``listed`` holds at most ``cap`` masks.
    """
    found: list[int] = []
    total = 0

    def leaf(m, s0, has_n):
        nonlocal total
        k = bin(m).count("1")
        n = 1 << k
        if not has_n:
            n -= 1 << bin(m & ~nbits).count("1")
        total += n
        if len(found) >= cap:
            return
        t = 0
        while True:
            if has_n or t & nbits:
                found.append(s0 | t)
                if len(found) >= cap:
                    return
            t = (t - m) & m
            if t == 0:
                return

    def walk(ms, s0, free, has_n):
        ms = _cancel(ms, free)
        if not ms:
            return
        if len(ms) == 1:
            leaf(ms[0], s0, has_n)
            return
        union = 0
        inter = free
        for m in ms:
            union |= m
            inter &= m
        split = union & ~inter
        b = split & -split
        rest = free & ~b
        walk(ms, s0, rest, has_n)
        walk([m for m in ms if m & b], s0 | b, rest, has_n or bool(b & nbits))

    walk(list(masks), 0, universe, False)
    return total, sorted(found)
