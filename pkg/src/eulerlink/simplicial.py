"""Finite abstract simplicial complexes and the constructions built on them.

A :class:`Complex` stores every simplex as a sorted tuple of integer vertex
ids, ordered by dimension and then lexicographically.  Complexes are
immutable; constructors return fresh complexes together with the vertex
maps needed to locate the inputs inside the result.
"""
from __future__ import annotations

import random
from array import array
from itertools import chain, combinations
from typing import Iterable, Mapping, Sequence

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Raised for malformed complexes and illegal identifications."""


def _closure(maximal: Iterable[Sequence[int]]) -> set[Simplex]:
    seen: set[Simplex] = set()
    for raw in maximal:
        s = tuple(sorted(raw))
        if len(s) == 0:
            raise ComplexError("empty simplex")
        if len(set(s)) != len(s):
            raise ComplexError(f"repeated vertex in simplex {list(raw)}")
        if s in seen:
            continue
        if len(s) == 1:
            seen.add(s)
            continue
        for k in range(1, len(s) + 1):
            seen.update(combinations(s, k))
    return seen


class Complex:
    """An immutable finite abstract simplicial complex.

    :param simplices: downward closed collection of simplices.  Callers
        normally go through :func:`build_complex` instead.
    :param labels: optional vertex labels (metadata only).
    """

    __slots__ = ("simplices", "index", "dims", "vertices", "dim", "labels", "name",
                 "_faces", "_cofaces", "_vpos")

    def __init__(self, simplices: Iterable[Simplex], labels: Mapping[int, str] | None = None,
                 name: str = ""):
        simp = sorted(set(simplices))
        simp.sort(key=len)
        self.simplices: tuple[Simplex, ...] = tuple(simp)
        self.index: dict[Simplex, int] = {s: i for i, s in enumerate(simp)}
        self.dims = array("b", [len(s) - 1 for s in simp])
        self.vertices: tuple[int, ...] = tuple(s[0] for s in simp if len(s) == 1)
        self.dim = (len(simp[-1]) - 1) if simp else -1
        self.labels = dict(labels) if labels else {}
        self.name = name
        self._faces = None
        self._cofaces = None
        self._vpos = None

    def __len__(self) -> int:
        return len(self.simplices)

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.index

    def __iter__(self):
        return iter(self.simplices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Complex) and self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash(self.simplices)

    def __repr__(self) -> str:
        return f"Complex(dim={self.dim}, f={self.f_vector()})"

    @classmethod
    def empty(cls) -> "Complex":
        return cls(())

    def is_empty(self) -> bool:
        return not self.simplices

    def f_vector(self) -> list[int]:
        f = [0] * (self.dim + 1)
        for d in self.dims:
            f[d] += 1
        return f

    def n_vertices(self) -> int:
        return len(self.vertices)

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        return [s for s in self.simplices if len(s) == k + 1]

    def maximal_simplices(self) -> list[Simplex]:
        cof = self.cofaces()
        return [s for i, s in enumerate(self.simplices) if len(cof[i]) == 1]

    def locate(self, s: Sequence[int]) -> int:
        key = tuple(sorted(s))
        try:
            return self.index[key]
        except KeyError:
            raise ComplexError(f"simplex {list(key)} not in complex") from None

    def vertex_position(self, v: int) -> int:
        """Row of vertex ``v`` among the 0-simplices."""
        if self._vpos is None:
            self._vpos = {v: i for i, v in enumerate(self.vertices)}
        return self._vpos[v]

    def face_table(self) -> tuple[array, array]:
        """CSR table listing every nonempty face of each simplex (itself included)."""
        if self._faces is None:
            get = self.index.__getitem__
            ptr = array("q", [0])
            idx = array("q")
            for s in self.simplices:
                idx.extend(map(get, chain.from_iterable(combinations(s, k) for k in range(1, len(s) + 1))))
                ptr.append(len(idx))
            self._faces = (ptr, idx)
        return self._faces

    def cofaces(self) -> list[list[int]]:
        """For each simplex, the indices of all simplices containing it."""
        if self._cofaces is None:
            ptr, idx = self.face_table()
            out: list[list[int]] = [[] for _ in self.simplices]
            for t in range(len(self.simplices)):
                for j in range(ptr[t], ptr[t + 1]):
                    out[idx[j]].append(t)
            self._cofaces = out
        return self._cofaces

    def subcomplex(self, keep: Iterable[Simplex]) -> "Complex":
        """Downward closure of ``keep`` inside this complex."""
        keep = list(keep)
        for s in keep:
            self.locate(s)
        return Complex(_closure(keep), self.labels, self.name) if keep else Complex.empty()


def build_complex(maximal: Sequence[Sequence[int]], labels: Mapping[int, str] | None = None,
                  name: str = "") -> Complex:
    """Downward closure of a list of simplices given by their vertices."""
    if len(maximal) == 0:
        raise ComplexError("empty simplex list")
    return Complex(_closure(maximal), labels, name)


def euler_characteristic(K: Complex) -> int:
    return sum(1 if d % 2 == 0 else -1 for d in K.dims)


def combinatorial_link(K: Complex, sigma: Sequence[int]) -> tuple[Complex, list[int]]:
    """Lk(sigma), relabelled onto 0..n-1, with the map back to ``K``'s vertex ids."""
    i = K.locate(sigma)
    s = set(K.simplices[i])
    faces = []
    for j in K.cofaces()[i]:
        t = K.simplices[j]
        if len(t) > len(s):
            faces.append(tuple(v for v in t if v not in s))
    verts = sorted({v for f in faces for v in f})
    pos = {v: n for n, v in enumerate(verts)}
    return Complex(tuple(pos[v] for v in f) for f in faces), verts


def geometric_link(K: Complex, sigma: Sequence[int]) -> Complex:
    """Link of a point in the open simplex ``sigma``: Lk suspended dim(sigma) times."""
    L, _ = combinatorial_link(K, sigma)
    for _ in range(len(sigma) - 1):
        L, _ = suspension(L)
    return L


def _dense(K: Complex) -> tuple[list[Simplex], dict[int, int]]:
    pos = {v: n for n, v in enumerate(K.vertices)}
    return [tuple(pos[v] for v in s) for s in K.simplices], pos


def disjoint_union(A: Complex, B: Complex) -> tuple[Complex, dict[int, int], dict[int, int]]:
    sa, pa = _dense(A)
    sb, pb = _dense(B)
    n = len(pa)
    out = sa + [tuple(v + n for v in s) for s in sb]
    return Complex(out), pa, {v: p + n for v, p in pb.items()}


def wedge(A: Complex, pA: int, B: Complex, pB: int) -> tuple[Complex, dict[int, int], dict[int, int]]:
    """Identify vertex ``pA`` of ``A`` with vertex ``pB`` of ``B``."""
    A.locate((pA,))
    B.locate((pB,))
    sa, pa = _dense(A)
    n = len(pa)
    mb: dict[int, int] = {}
    nxt = n
    for v in B.vertices:
        if v == pB:
            mb[v] = pa[pA]
        else:
            mb[v] = nxt
            nxt += 1
    out = sa + [tuple(sorted(mb[v] for v in s)) for s in B.simplices]
    return Complex(out), pa, mb


def cone(K: Complex) -> tuple[Complex, int]:
    """Cone over ``K``; returns the complex and the apex id."""
    apex = (max(K.vertices) + 1) if K.vertices else 0
    out = list(K.simplices) + [(apex,)] + [s + (apex,) for s in K.simplices]
    return Complex(out), apex


def suspension(K: Complex) -> tuple[Complex, tuple[int, int]]:
    """Unreduced suspension; the suspension of the empty complex is two points."""
    a = (max(K.vertices) + 1) if K.vertices else 0
    b = a + 1
    out = list(K.simplices) + [(a,), (b,)]
    for s in K.simplices:
        out.append(s + (a,))
        out.append(s + (b,))
    return Complex(out), (a, b)


def join(A: Complex, B: Complex) -> tuple[Complex, dict[int, int], dict[int, int]]:
    sa, pa = _dense(A)
    sb, pb = _dense(B)
    n = len(pa)
    sb = [tuple(v + n for v in s) for s in sb]
    out = sa + sb + [x + y for x in sa for y in sb]
    return Complex(out), pa, {v: p + n for v, p in pb.items()}


def _staircases(p: int, q: int) -> list[list[tuple[int, int]]]:
    """Monotone lattice paths from (0,0) to (p,q)."""
    paths = []

    def walk(i, j, acc):
        if i == p and j == q:
            paths.append(acc)
            return
        if i < p:
            walk(i + 1, j, acc + [(i + 1, j)])
        if j < q:
            walk(i, j + 1, acc + [(i, j + 1)])

    walk(0, 0, [(0, 0)])
    return paths


def product(A: Complex, B: Complex) -> tuple[Complex, dict[tuple[int, int], int]]:
    """Staircase triangulation of |A| x |B| using the vertex orders.

    Returns the complex and the map ``(a, b) -> vertex id``.
    """
    if A.is_empty() or B.is_empty():
        raise ComplexError("product needs nonempty factors")
    nb = len(B.vertices)
    pa = {v: n for n, v in enumerate(A.vertices)}
    pb = {v: n for n, v in enumerate(B.vertices)}
    vid = {(a, b): pa[a] * nb + pb[b] for a in A.vertices for b in B.vertices}
    tops = []
    cache: dict[tuple[int, int], list] = {}
    for s in A.maximal_simplices():
        for t in B.maximal_simplices():
            key = (len(s) - 1, len(t) - 1)
            if key not in cache:
                cache[key] = _staircases(*key)
            for path in cache[key]:
                tops.append([vid[(s[i], t[j])] for i, j in path])
    return Complex(_closure(tops)), vid


def glue(A: Complex, vmap: Mapping[int, int]) -> Complex:
    """Identify vertices of ``A`` by ``vmap`` (vertices not in the map are kept).

    Raises :class:`ComplexError` when a simplex would collapse; callers must
    subdivide first.
    """
    out = set()
    for s in A.simplices:
        img = tuple(sorted({vmap.get(v, v) for v in s}))
        if len(img) != len(s):
            raise ComplexError(f"identification collapses simplex {list(s)}")
        out.add(img)
    return Complex(out)


def barycentric_subdivision(K: Complex) -> tuple[Complex, list[int]]:
    """Barycentric subdivision plus carrier map (new simplex index -> old simplex index).

    New vertex ``i`` is the barycentre of old simplex ``K.simplices[i]``.
    """
    ptr, idx = K.face_table()
    # faces precede cofaces in the simplex order, so a chain listed as
    # increasing indices is increasing under inclusion and ends at its carrier
    chains: list[tuple[int, ...]] = []
    by_top: list[list[tuple[int, ...]]] = []
    for t in range(len(K)):
        sub = [(t,)]
        for j in range(ptr[t], ptr[t + 1]):
            f = idx[j]
            if f != t:
                sub.extend(c + (t,) for c in by_top[f])
        by_top.append(sub)
        chains.extend(sub)
    S = Complex(chains)
    carrier = [0] * len(S)
    for c in chains:
        carrier[S.index[c]] = c[-1]
    return S, carrier


def random_complex(rng: random.Random, max_simplices: int = 300, max_dim: int = 4,
                   n_vertices: int | None = None) -> Complex:
    """Closure of random simplices, grown while the closure stays within ``max_simplices``."""
    n = n_vertices or rng.randint(max_dim + 1, max_dim + 6)
    seen: set[Simplex] = set()
    for _ in range(4 * n):
        k = rng.randint(1, max_dim + 1)
        s = tuple(sorted(rng.sample(range(n), k)))
        new = _closure([s]) - seen
        if len(seen) + len(new) > max_simplices:
            continue
        seen |= new
    if not seen:
        seen.add((0,))
    return Complex(seen)
