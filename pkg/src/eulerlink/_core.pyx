# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops in :mod:`eulerlink._core_py`."""
from libc.stdint cimport int64_t, uint64_t, int8_t
from libc.stdlib cimport malloc, free, qsort


def coface_sums(const int64_t[:] ptr, const int64_t[:] idx, const int8_t[:] dims,
                const int64_t[:] values, int64_t[:] out):
    cdef Py_ssize_t t, j, f, n = values.shape[0]
    cdef int64_t v
    cdef int dt
    for t in range(n):
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


def link_sums(const int64_t[:] ptr, const int64_t[:] idx, const int8_t[:] dims,
              const int64_t[:] values, int64_t[:] out):
    cdef Py_ssize_t t, j, n = values.shape[0]
    cdef int64_t v, w
    for t in range(n):
        v = values[t]
        if v == 0:
            continue
        w = v if dims[t] & 1 else -v
        for j in range(ptr[t], ptr[t + 1]):
            out[idx[j]] += w
        out[t] += v


cdef int _cmp(const void* a, const void* b) noexcept nogil:
    cdef uint64_t x = (<uint64_t*>a)[0]
    cdef uint64_t y = (<uint64_t*>b)[0]
    return (x > y) - (x < y)


cdef int _popcount(uint64_t x) noexcept nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef struct Walk:
    uint64_t nbits
    Py_ssize_t cap
    Py_ssize_t nfound
    uint64_t* found
    uint64_t total


cdef void _leaf(uint64_t m, uint64_t s0, bint has_n, Walk* w) noexcept nogil:
    cdef uint64_t t = 0
    w.total += (<uint64_t>1) << _popcount(m)
    if not has_n:
        w.total -= (<uint64_t>1) << _popcount(m & ~w.nbits)
    if w.nfound >= w.cap:
        return
    while True:
        if has_n or (t & w.nbits):
            w.found[w.nfound] = s0 | t
            w.nfound += 1
            if w.nfound >= w.cap:
                return
        t = (t - m) & m
        if t == 0:
            return


cdef int _walk(uint64_t* ms, Py_ssize_t n, uint64_t s0, uint64_t freeb, bint has_n,
               Walk* w) noexcept nogil:
    cdef uint64_t* buf = <uint64_t*>malloc(n * sizeof(uint64_t) + 8)
    cdef Py_ssize_t i, k = 0, run
    cdef uint64_t union_ = 0, inter = freeb, b, rest
    if buf == NULL:
        return -1
    for i in range(n):
        buf[i] = ms[i] & freeb
    qsort(buf, n, sizeof(uint64_t), _cmp)
    i = 0
    while i < n:
        run = 1
        while i + run < n and buf[i + run] == buf[i]:
            run += 1
        if run & 1:
            buf[k] = buf[i]
            k += 1
        i += run
    if k == 0:
        free(buf)
        return 0
    if k == 1:
        _leaf(buf[0], s0, has_n, w)
        free(buf)
        return 0
    for i in range(k):
        union_ |= buf[i]
        inter &= buf[i]
    b = union_ & ~inter
    b = b & (~b + 1)
    rest = freeb & ~b
    if _walk(buf, k, s0, rest, has_n, w) < 0:
        free(buf)
        return -1
    n = 0
    for i in range(k):
        if buf[i] & b:
            buf[n] = buf[i]
            n += 1
    i = _walk(buf, n, s0 | b, rest, has_n or (b & w.nbits) != 0, w)
    free(buf)
    return i


def odd_subsets(masks, uint64_t universe, uint64_t nbits, Py_ssize_t cap):
    cdef Py_ssize_t n = len(masks), i
    cdef uint64_t* ms = <uint64_t*>malloc(n * sizeof(uint64_t) + 8)
    cdef Walk w
    w.nbits = nbits
    w.cap = cap
    w.nfound = 0
    w.total = 0
    w.found = <uint64_t*>malloc(cap * sizeof(uint64_t) + 8)
    if ms == NULL or w.found == NULL:
        free(ms)
        free(w.found)
        raise MemoryError
    for i in range(n):
        ms[i] = masks[i]
    with nogil:
        i = _walk(ms, n, 0, universe, False, &w)
    free(ms)
    if i < 0:
        free(w.found)
        raise MemoryError
    out = sorted([w.found[i] for i in range(w.nfound)])
    free(w.found)
    return w.total, out
