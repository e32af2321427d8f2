"""Independence witnesses: a 3-complex with exactly one chosen invariant odd.

The construction runs in three stages.

1. A decorated graph ``(L1, alpha, beta, gamma, delta, eps)`` is assembled
   from elementary blocks so that the chosen product is the only odd vertex
   sum.
2. Discs and bubbles are attached along the graph to get a surface ``Y``
   with a function ``phi`` whose half-link vanishes and whose derived
   functions match the decorations.
3. Every simplex of ``Y`` is thickened so that ``co_half_link(1)`` of the
   result agrees with ``phi``.

The result is checked with :mod:`eulerlink.invariants` before it is
returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .confun import ConstructibleFunction, co_half_link, constant, half_link, is_euler, link_op
from .invariants import (AK_NAMES, S2, S4, S5, CharIndex, Mode, Product, _p, ak_numbers, base_profile,
                         euler_conditions, is_ak_index, nonzero_char_numbers)
from .polyops import phi4, phi5
from .simplicial import Complex, build_complex, wedge

KEYS = ("phi", "beta", "gamma", "delta", "eps")
_POS = {k: i for i, k in enumerate(KEYS)}
Values = tuple[int, int, int, int, int]
ZERO: Values = (0, 0, 0, 0, 0)


class WitnessError(RuntimeError):
    """A construction stage produced something that fails its own checks."""


# ------------------------------------------------------------ vertex expressions

@dataclass(frozen=True)
class VExpr:
    index: int
    product: Product
    plain: bool  # value of a single function rather than a co-half-link

    @property
    def name(self) -> str:
        body = "*".join(("alpha" if b == "phi" else b) + ("" if k == 1 else str(k)) for b, k in self.product)
        return body if self.plain else f"ohl({body})"


def _vexprs() -> list[VExpr]:
    prods: list[tuple[Product, bool]] = [(_p(k), True) for k in ("phi", "beta", "gamma")]
    prods += [(p, False) for p in S2]
    prods += [(_p(s), False) for s in ("phi2", "beta2", "gamma2", "phi3", "beta3", "gamma3")]
    prods += [(p, False) for p in S4 + S5]
    return [VExpr(i, p, plain) for i, (p, plain) in enumerate(prods)]


V_EXPRS: list[VExpr] = _vexprs()
N_V = len(V_EXPRS)
V_BY_NAME = {v.name: v for v in V_EXPRS}
V_GROUPS = {1: range(0, 3), 2: range(3, 7), 3: range(7, 13), 4: range(13, 31), 5: range(31, 45)}
V2 = frozenset(V_GROUPS[2])

# index bit -> V position; the two alpha-only expressions in V3 carry no bit
_BIT_TO_V = list(range(7)) + [8, 9, 11, 12] + list(range(13, 45))
_V_TO_BIT = {v: b for b, v in enumerate(_BIT_TO_V)}


def v_of_bits(mask: int) -> frozenset[int]:
    return frozenset(_BIT_TO_V[b] for b in range(43) if mask >> b & 1)


def bits_of_v(vs: Iterable[int]) -> int:
    out = 0
    for v in vs:
        if v in _V_TO_BIT:
            out |= 1 << _V_TO_BIT[v]
    return out


def _sub(x, k: int):
    if k == 1:
        return x
    if k == 2:
        return x * x - x
    return x * x * x - x


def _eval(prod: Product, vals: Sequence) -> object:
    acc = 1
    for b, k in prod:
        acc = acc * _sub(vals[_POS[b]], k)
    return acc


# ------------------------------------------------------------ decorated graphs

@dataclass(frozen=True)
class Arc:
    u: int
    v: int
    values: Values


class DecoratedCurve:
    """A graph whose arcs are separate 1-strata, each carrying five integers.

    Vertex values are forced by the vanishing of ``co_half_link``: each is
    half the sum of the values on the incident arc ends.
    """

    __slots__ = ("n", "arcs", "p0", "blocks", "_ends")

    def __init__(self, n: int, arcs: Sequence[Arc], p0: int = 0, blocks: Sequence[str] = ()):
        self.n = n
        self.arcs = tuple(arcs)
        self.p0 = p0
        self.blocks = tuple(blocks)
        ends: list[list[Values]] = [[] for _ in range(n)]
        for a in self.arcs:
            ends[a.u].append(a.values)
            ends[a.v].append(a.values)
        self._ends = ends

    @classmethod
    def point(cls) -> "DecoratedCurve":
        return cls(1, (), 0)

    def __repr__(self) -> str:
        return f"DecoratedCurve(vertices={self.n}, arcs={len(self.arcs)})"

    def vertex_values(self, p: int) -> tuple:
        out = []
        for i in range(5):
            s = sum(e[i] for e in self._ends[p])
            out.append(s // 2 if s % 2 == 0 else Fraction(s, 2))
        return tuple(out)

    def expressions(self, p: int) -> list:
        """All 45 vertex expressions at ``p``, exactly."""
        x = self.vertex_values(p)
        ends = self._ends[p]
        out = []
        for ve in V_EXPRS:
            if ve.plain:
                out.append(x[_POS[ve.product[0][0]]])
            else:
                val = _eval(ve.product, x) - Fraction(sum(_eval(ve.product, e) for e in ends), 2)
                out.append(val.numerator if val.denominator == 1 else val)
        return out

    def odd_set(self, p: int) -> frozenset[int]:
        ex = self.expressions(p)
        if any(not isinstance(v, int) for v in ex):
            raise WitnessError(f"non-integer vertex expression at {p}")
        return frozenset(i for i, v in enumerate(ex) if v % 2)

    def check(self) -> None:
        """Integrality at vertices, euler conditions and even delta, eps."""
        for p in range(self.n):
            x = self.vertex_values(p)
            if any(not isinstance(v, int) for v in x):
                raise WitnessError(f"vertex {p}: half-sum of arc values is not an integer")
            if len(self._ends[p]) % 2:
                raise WitnessError(f"vertex {p} has odd degree")
            for prod in (_p("phi", "beta"), _p("phi", "gamma"), _p("beta", "gamma"), _p("phi", "beta", "gamma")):
                if sum(_eval(prod, e) for e in self._ends[p]) % 2:
                    raise WitnessError(f"vertex {p}: {prod} is not euler")
        for a in self.arcs:
            if a.values[3] % 2 or a.values[4] % 2:
                raise WitnessError("delta and eps must be even")

    def realize(self) -> "RealizedCurve":
        """A simplicial graph: loops become triangles, repeated arcs get a midpoint."""
        edges: list[tuple[int, int]] = []
        values: dict[tuple[int, ...], Values] = {}
        arc_edges: list[list[tuple[int, int]]] = []
        nxt = self.n
        seen: set[tuple[int, int]] = set()
        for a in self.arcs:
            if a.u == a.v:
                path = [a.u, nxt, nxt + 1, a.u]
                nxt += 2
            else:
                key = (min(a.u, a.v), max(a.u, a.v))
                if key in seen:
                    path = [a.u, nxt, a.v]
                    nxt += 1
                else:
                    seen.add(key)
                    path = [a.u, a.v]
            mine = []
            for s, t in zip(path, path[1:]):
                e = (min(s, t), max(s, t))
                edges.append(e)
                values[e] = a.values
                mine.append(e)
            for w in path[1:-1]:
                values[(w,)] = a.values
            arc_edges.append(mine)
        for p in range(self.n):
            if self._ends[p]:
                values[(p,)] = self.vertex_values(p)
        isolated = [(p,) for p in range(self.n) if not self._ends[p]]
        K = build_complex(edges + isolated) if edges or isolated else Complex.empty()
        for s in isolated:
            values[s] = ZERO
        return RealizedCurve(K, values, arc_edges, list(range(self.n)))


@dataclass
class RealizedCurve:
    complex: Complex
    values: dict[tuple[int, ...], Values]
    arc_edges: list[list[tuple[int, int]]]
    branch_vertices: list[int]

    def function(self, key: str) -> ConstructibleFunction:
        i = _POS[key]
        return ConstructibleFunction._raw(self.complex, [self.values[s][i] for s in self.complex.simplices])


def _relabel(arcs: Iterable[Arc], f) -> list[Arc]:
    return [Arc(f(a.u), f(a.v), a.values) for a in arcs]


def wedge_decorated(A: DecoratedCurve, B: DecoratedCurve) -> DecoratedCurve:
    """Identify the distinguished vertices; the result keeps ``A``'s."""
    def f(v):
        if v == B.p0:
            return A.p0
        return A.n + v - (1 if v > B.p0 else 0)

    return DecoratedCurve(A.n + B.n - 1, list(A.arcs) + _relabel(B.arcs, f), A.p0, A.blocks + B.blocks)


def disjoint_union_decorated(A: DecoratedCurve, B: DecoratedCurve) -> DecoratedCurve:
    return DecoratedCurve(A.n + B.n, list(A.arcs) + _relabel(B.arcs, lambda v: v + A.n), A.p0,
                          A.blocks + B.blocks)


# ------------------------------------------------------------ elementary blocks

@dataclass(frozen=True)
class BlockKind:
    name: str
    arcs: tuple[Values, ...]
    loops: bool = False
    target: int | None = None  # V position made odd, None for the beta-only examples


def _unit(key: str, c: int = 1) -> list[int]:
    v = [0] * 5
    v[_POS[key]] = c
    return v


def _add(*vs) -> Values:
    return tuple(sum(x) for x in zip(*vs))


def _block_for(ve: VExpr) -> BlockKind:
    plain = [b for b, k in ve.product if k == 1 and b in ("phi", "beta", "gamma")]
    sub = [(b, k) for b, k in ve.product if k > 1]
    extra = [b for b, _ in ve.product if b in ("delta", "eps")]
    base = _add(*[_unit(b) for b in plain]) if plain else ZERO
    if extra:
        w = _unit(extra[0], 2)
        arcs = (tuple(w), _add(base, w), base, ZERO)
        return BlockKind(ve.name, arcs, False, ve.index)
    if sub:
        z, k = sub[0]
        if k == 2:
            arcs = (_add(base, _unit(z)), _add(base, _unit(z, -1)))
        else:
            arcs = (_add(base, _unit(z, 2)), base)
        return BlockKind(ve.name, arcs, False, ve.index)
    if ve.plain:
        return BlockKind(ve.name, (base, base), False, ve.index)
    arcs = tuple(tuple(_unit(b)) for b in plain) + (base,)
    return BlockKind(ve.name, arcs, True, ve.index)


def _beta_block(name: str, a: int, b: int) -> BlockKind:
    return BlockKind(name, (tuple(_unit("beta", a)), tuple(_unit("beta", b))))


BLOCKS: dict[str, BlockKind] = {"A": _beta_block("A", 1, 1), "B": _beta_block("B", 1, -1),
                                "C": _beta_block("C", 2, 0)}
BLOCKS.update({ve.name: _block_for(ve) for ve in V_EXPRS})
V_BLOCKS: list[BlockKind] = [BLOCKS[ve.name] for ve in V_EXPRS]


def elementary_block(kind: BlockKind | str | int) -> DecoratedCurve:
    """Two vertices joined by the block's arcs, or one vertex with loops.

    The distinguished vertex is the last one.
    """
    if isinstance(kind, int):
        kind = V_BLOCKS[kind]
    elif isinstance(kind, str):
        try:
            kind = BLOCKS[kind]
        except KeyError:
            raise KeyError(f"unknown block {kind!r}") from None
    if kind.loops:
        return DecoratedCurve(1, [Arc(0, 0, a) for a in kind.arcs], 0, (kind.name,))
    return DecoratedCurve(2, [Arc(0, 1, a) for a in kind.arcs], 1, (kind.name,))


# ------------------------------------------------------------ assembling L1

def _fix_v2(L: DecoratedCurve, want: frozenset[int]) -> DecoratedCurve:
    """Wedge V2 blocks at the distinguished vertex until its V2 parities match ``want``.

    The block for the last V2 expression also flips earlier ones, so the
    latest mismatch is corrected first and the parities are recomputed.
    """
    while True:
        diff = (L.odd_set(L.p0) ^ want) & V2
        if not diff:
            return L
        L = wedge_decorated(L, elementary_block(max(diff)))


@lru_cache(maxsize=None)
def _single(u: int) -> DecoratedCurve:
    """Block for ``u`` with every other odd expression at its vertices cancelled."""
    L = elementary_block(u)
    home = L.p0
    # wedging appends vertices, so the block's own vertices keep their ids
    for q in range(L.n):
        extra = L.odd_set(q) - {u}
        if not extra:
            continue
        if max(extra) > u:
            raise WitnessError(f"block {V_EXPRS[u].name} has a later expression odd")
        L = DecoratedCurve(L.n, L.arcs, q, L.blocks)
        L = _fix_v2(wedge_decorated(L, build_L1(extra)), frozenset({u}) & V2)
        if L.odd_set(q) != {u}:
            raise WitnessError(f"could not isolate {V_EXPRS[u].name} at a block vertex")
    return DecoratedCurve(L.n, L.arcs, home, L.blocks)


@lru_cache(maxsize=None)
def _build(U: frozenset[int]) -> DecoratedCurve:
    if not U:
        return DecoratedCurve.point()
    u = max(U)
    L = _single(u)
    rest = U - {u}
    if rest:
        L = _fix_v2(wedge_decorated(L, _build(rest)), U & V2)
    got = L.odd_set(L.p0)
    if got != U:
        raise WitnessError(f"assembly for {sorted(U)} gave {sorted(got)} at the distinguished vertex")
    return L


def build_L1(U: Iterable[int]) -> DecoratedCurve:
    """Decorated graph whose distinguished vertex has exactly the expressions ``U`` odd.

    Every other vertex has at most one odd expression, never one from V2.
    """
    return _build(frozenset(U))


def counted(mask: int) -> bool:
    """Masks that index a tracked invariant: novel ones and the four depth-2 ones."""
    idx = CharIndex(Mode.EXTENDED, mask)
    return idx.novel or is_ak_index(idx)


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


@lru_cache(maxsize=None)
def cancelling_pieces(mask: int) -> frozenset[int]:
    """Masks whose graphs, united, leave only ``mask`` odd.

    A graph built for ``F`` makes every counted divisor of ``F`` odd, so the
    divisors of ``mask`` are cancelled recursively; multiplicities are kept
    mod 2.
    """
    out = {mask}
    for d in _submasks(mask):
        if d != mask and d & ~0b111 and counted(d):
            out ^= cancelling_pieces(d)
    return frozenset(out)


def build_L1_for_index(idx: CharIndex) -> DecoratedCurve:
    pieces = sorted(cancelling_pieces(idx.mask))
    L: DecoratedCurve | None = None
    for m in pieces:
        P = build_L1(v_of_bits(m))
        L = P if L is None else disjoint_union_decorated(L, P)
    return L


def curve_vertex_masks(L: DecoratedCurve) -> list[int]:
    return [bits_of_v(L.odd_set(p)) for p in range(L.n)]


# ------------------------------------------------------------ surfaces

CLASS_DISCS = {(1, 0, 0): (1, 1), (0, 1, 0): (1, 3), (1, 1, 1): (2, 0)}
DELTA_DISCS = (4,)
EPS_DISCS = (5, 4, 1, 1, 1)
RECIPES = {"phi": (1, 1, 1, 1, 2), "beta": (1, 3), "gamma": (1, 1, 1, 2, 3)}


def class_discs(cls: tuple[int, int, int]) -> tuple[int, ...]:
    """Disc values realising an (alpha, beta, gamma) parity class."""
    a, b, c = cls
    out: list[int] = []
    for take, key in ((a ^ c, (1, 0, 0)), (b ^ c, (0, 1, 0)), (c, (1, 1, 1))):
        if take:
            out.extend(CLASS_DISCS[key])
    return tuple(out)


def stratum_values(cells: Sequence[int]) -> Values:
    """(alpha, beta, gamma, delta, eps) on a 1-stratum bordered by 2-cells with these values."""
    s = sum(cells)
    if s % 2:
        raise WitnessError("odd sum of adjacent 2-cell values")
    a = s // 2
    half = lambda xs: Fraction(sum(xs), 2)
    b = (a * a - a) - half(l * l - l for l in cells)
    g = (a ** 3 - a) - half(l ** 3 - l for l in cells)
    d = phi4(a) - half(phi4(l) for l in cells)
    e = phi5(a) - half(phi5(l) for l in cells)
    out = (a, b, g, d, e)
    if any(Fraction(x).denominator != 1 for x in out):
        raise WitnessError("non-integer stratum values")
    return tuple(int(x) for x in out)


@dataclass
class DecoratedSurface:
    complex: Complex
    phi: ConstructibleFunction
    targets: dict[tuple[int, int], Values]
    cells: dict[tuple[int, int], list[int]]
    graph_vertices: list[int]
    vertex_targets: dict[int, tuple]
    log: dict = field(default_factory=dict)

    def stratum_values(self, e: tuple[int, int]) -> Values:
        return stratum_values(self.cells[e])

    def half_link_phi(self) -> ConstructibleFunction:
        return half_link(self.phi)


class _SurfaceBuilder:
    def __init__(self, graph: RealizedCurve):
        self.graph = graph
        self.next = (max(graph.complex.vertices) + 1) if len(graph.complex) else 0
        self.tops: list[tuple[int, ...]] = list(graph.complex.simplices)
        self.phi: dict[tuple[int, ...], int] = {}
        self.cells: dict[tuple[int, int], list[int]] = {e: [] for e in graph.complex.simplices_of_dim(1)}

    def fresh(self, k: int = 1) -> list[int]:
        out = list(range(self.next, self.next + k))
        self.next += k
        return out

    def disc(self, cycle: Sequence[int], l: int) -> None:
        (apex,) = self.fresh()
        self.phi[(apex,)] = l
        n = len(cycle)
        for i in range(n):
            u, v = cycle[i], cycle[(i + 1) % n]
            tri = tuple(sorted((u, v, apex)))
            self.tops.append(tri)
            self.phi[tri] = l
            self.phi[tuple(sorted((u, apex)))] = l
            self.cells[(min(u, v), max(u, v))].append(l)

    def bubble(self, e: tuple[int, int], l: int) -> None:
        u, v = e
        c, d = self.fresh(2)
        for s in ((u, v, c), (u, v, d), (u, c, d), (v, c, d)):
            self.tops.append(tuple(sorted(s)))
        for s in ((c,), (d,), (u, c), (u, d), (v, c), (v, d), (c, d),
                  (u, v, c), (u, v, d), (u, c, d), (v, c, d)):
            self.phi[tuple(sorted(s))] = l
        self.cells[e].extend((l, l))


def _simple_cycles(edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    """Split an even-degree edge set into edge-disjoint simple cycles."""
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    if any(len(n) % 2 for n in adj.values()):
        raise WitnessError("parity level set is not a cycle mod 2")
    cycles = []
    for start in sorted(adj):
        while adj[start]:
            # walk a trail; whenever it revisits a vertex, cut off the loop just closed
            path, where = [start], {start: 0}
            while adj[path[-1]]:
                u = path[-1]
                v = min(adj[u])
                adj[u].discard(v)
                adj[v].discard(u)
                if v in where:
                    i = where[v]
                    cycles.append(path[i:])
                    for w in path[i + 1:]:
                        del where[w]
                    del path[i + 1:]
                else:
                    where[v] = len(path)
                    path.append(v)
    return cycles


def fill_cycles(L1: DecoratedCurve | RealizedCurve) -> DecoratedSurface:
    """Attach cone discs along the parity level sets of the graph's functions."""
    graph = L1.realize() if isinstance(L1, DecoratedCurve) else L1
    b = _SurfaceBuilder(graph)
    edges = graph.complex.simplices_of_dim(1)
    by_class: dict[tuple[int, int, int], list] = {}
    delta_edges, eps_edges = [], []
    for e in edges:
        x = graph.values[e]
        cls = (x[0] % 2, x[1] % 2, x[2] % 2)
        if cls != (0, 0, 0):
            by_class.setdefault(cls, []).append(e)
        if x[3] % 4:
            delta_edges.append(e)
        if x[4] % 4:
            eps_edges.append(e)
    n_discs = 0
    plan = [(class_discs(c), es) for c, es in sorted(by_class.items())]
    plan += [(DELTA_DISCS, delta_edges), (EPS_DISCS, eps_edges)]
    for ls, es in plan:
        for cyc in _simple_cycles(es):
            for l in ls:
                b.disc(cyc, l)
                n_discs += 1
    return _finish_surface(b, {"discs": n_discs})


def _finish_surface(b: _SurfaceBuilder, log: dict) -> DecoratedSurface:
    graph = b.graph
    phi = dict(b.phi)
    for e, ls in b.cells.items():
        s = sum(ls)
        if s % 2:
            raise WitnessError(f"edge {e}: adjacent 2-cell values have odd sum")
        phi[e] = s // 2
    for s in graph.complex.simplices_of_dim(0):
        phi.setdefault(s, graph.values[s][0])
    K = Complex(_closure_all(b.tops))
    vals = [phi.get(s, 0) for s in K.simplices]
    targets = {e: graph.values[e] for e in b.cells}
    vt = {s[0]: graph.values[s] for s in graph.complex.simplices_of_dim(0)}
    return DecoratedSurface(K, ConstructibleFunction._raw(K, vals), targets,
                            {e: list(ls) for e, ls in b.cells.items()}, sorted(vt), vt, log)


def _closure_all(tops: Iterable[tuple[int, ...]]) -> set[tuple[int, ...]]:
    out: set[tuple[int, ...]] = set()
    for s in tops:
        s = tuple(sorted(s))
        if s in out:
            continue
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return out


def _mod4_gap(cells: Sequence[int], target: Values) -> tuple[int, int, int]:
    cur = stratum_values(cells)
    gap = tuple((target[i] - cur[i]) % 4 for i in range(3))
    if any(g % 2 for g in gap):
        raise WitnessError(f"mod-2 mismatch: target {target[:3]}, current {cur[:3]}")
    return gap


@lru_cache(maxsize=None)
def cheapest_bubbles(state: tuple[int, int, int], gap: tuple[int, int, int]) -> tuple[int, ...]:
    """Bubble values shifting (alpha, beta, gamma) mod 4 by ``gap`` at the least thickening cost.

    Only ``l mod 4`` matters to the shift, so each class is represented by
    the value in -3..-1 whose triangles thicken with the fewest circles.
    """
    import heapq
    start = tuple(x % 4 for x in state)
    goal = tuple((s + g) % 4 for s, g in zip(start, gap))
    heap = [(0, (), start)]
    seen = set()
    while heap:
        cost, ls, cur = heapq.heappop(heap)
        if cur == goal:
            return ls
        if cur in seen:
            continue
        seen.add(cur)
        a, b, c = cur
        for l in (-3, -2, -1):
            nxt = ((a + l) % 4, (b + 2 * a * l) % 4, (c + 3 * a * l * (a + l)) % 4)
            heapq.heappush(heap, (cost + thicken_multiplicity(2, l), ls + (l,), nxt))
    raise WitnessError(f"no bubble combination reaches {goal} from {start}")


def adjust_mod4(Y: DecoratedSurface, recipes: bool = False) -> DecoratedSurface:
    """Bubble every graph edge to its targets mod 4, fix vertex parities, make the integral even.

    With ``recipes`` the fixed bubble recipes are applied in the order alpha,
    beta, gamma; otherwise the cheapest bubble set is searched per edge.
    """
    tops = list(Y.complex.simplices)
    phi = {s: v for s, v in zip(Y.complex.simplices, Y.phi.values)}
    cells = {e: list(ls) for e, ls in Y.cells.items()}
    nxt = max(Y.complex.vertices) + 1 if len(Y.complex) else 0
    bubbles = 0

    def bubble(e, l):
        nonlocal nxt, bubbles
        u, v = e
        c, d = nxt, nxt + 1
        nxt += 2
        for s in ((u, v, c), (u, v, d), (u, c, d), (v, c, d)):
            tops.append(tuple(sorted(s)))
        for s in ((c,), (d,), (u, c), (u, d), (v, c), (v, d), (c, d),
                  (u, v, c), (u, v, d), (u, c, d), (v, c, d)):
            phi[tuple(sorted(s))] = l
        cells[e].extend((l, l))
        bubbles += 1

    for e in sorted(cells):
        if recipes:
            for i, key in enumerate(("phi", "beta", "gamma")):
                if _mod4_gap(cells[e], Y.targets[e])[i]:
                    for l in RECIPES[key]:
                        bubble(e, l)
        else:
            gap = _mod4_gap(cells[e], Y.targets[e])
            if any(gap):
                for l in cheapest_bubbles(stratum_values(cells[e])[:3], gap):
                    bubble(e, l)
        if any(_mod4_gap(cells[e], Y.targets[e])):
            raise WitnessError(f"edge {e}: bubbles did not reach the mod-4 targets")
        phi[e] = sum(cells[e]) // 2
    for p, x in Y.vertex_targets.items():
        phi[(p,)] = x[0]
    K = Complex(_closure_all(tops))
    F = ConstructibleFunction._raw(K, [phi.get(s, 0) for s in K.simplices])
    targets, vt = dict(Y.targets), dict(Y.vertex_targets)
    sphere = False
    if _integral(F) % 2:
        # a 2-sphere with phi = 1 wedged at the newest vertex flips the integral
        apex = K.vertices[-1]
        S = build_complex(list(combinations(range(4), 3)))
        K2, ma, _ = wedge(K, apex, S, 0)
        inv = {v: k for k, v in ma.items()}
        vals = []
        for s in K2.simplices:
            if all(v in inv for v in s):
                vals.append(phi.get(tuple(sorted(inv[v] for v in s)), 0))
            else:
                vals.append(1)
        K, F, sphere = K2, ConstructibleFunction._raw(K2, vals), True
        relabel = lambda e: tuple(sorted(ma[v] for v in e))
        cells = {relabel(e): ls for e, ls in cells.items()}
        targets = {relabel(e): t for e, t in targets.items()}
        vt = {ma[p]: x for p, x in vt.items()}
    log = dict(Y.log, bubbles=bubbles, sphere=sphere)
    return DecoratedSurface(K, F, targets, cells, sorted(vt), vt, log)


def _integral(F: ConstructibleFunction) -> int:
    dims = F.complex.dims
    return sum(v if dims[i] % 2 == 0 else -v for i, v in enumerate(F.values))


# ------------------------------------------------------------ thickening

def thicken_multiplicity(dim: int, value: int) -> int:
    """Smallest positive m in the congruence class attached to a simplex of this dimension."""
    if dim == 0:
        return 1 if value % 2 == 0 else 2
    if dim == 1:
        return (value - 1) % 4 + 1
    if dim == 2:
        return (-value) % 8 + 1
    raise ValueError("only simplices of dimension at most 2 are thickened")


@dataclass
class Thickening:
    complex: Complex
    carrier: dict[tuple[int, ...], tuple[int, ...]]  # simplices lying in Y -> the Y simplex containing them
    multiplicities: dict[tuple[int, ...], int]


def thicken(Y: Complex, phi: ConstructibleFunction, strict: bool = True) -> Thickening:
    """Attach circles, suspended points and joined wedges of circles along each simplex.

    The congruences of :func:`thickening_congruences` need ``link_op(phi) == 0``,
    which ``strict`` enforces; the construction itself runs without it.
    """
    if Y.dim > 2:
        raise ValueError("the surface must have dimension at most 2")
    if strict and any(link_op(phi).values):
        raise ValueError("the half-link of phi must vanish")
    nxt = max(Y.vertices) + 1
    tops: list[tuple[int, ...]] = []
    carrier: dict[tuple[int, ...], tuple[int, ...]] = {}
    mult: dict[tuple[int, ...], int] = {}
    for s, val in zip(Y.simplices, phi.values):
        if val != int(val):
            raise ValueError("phi must be integer-valued")
        m = thicken_multiplicity(len(s) - 1, int(val))
        mult[s] = m
        if len(s) == 1:
            (p,) = s
            carrier[s] = s
            for _ in range(m):
                x, y = nxt, nxt + 1
                nxt += 2
                tops += [(p, x), (p, y), (x, y)]
        elif len(s) == 2:
            carrier[s] = s
            tops.append(s)
            u, v = s
            for _ in range(m - 1):
                c = nxt
                nxt += 1
                tops += [(u, c), (v, c)]
        else:
            x0 = nxt
            nxt += 1
            ring = []
            for _ in range(m):
                a, b = nxt, nxt + 1
                nxt += 2
                ring += [(x0, a), (x0, b), (a, b)]
            for e in combinations(s, 2):
                for r in ring:
                    tops.append(tuple(sorted(e + r)))
                carrier[tuple(sorted(e + (x0,)))] = s
            for v in s:
                carrier[(min(v, x0), max(v, x0))] = s
            carrier[(x0,)] = s
    K = Complex(_closure_all(tops))
    for s in list(carrier):
        if s not in K.index:
            raise WitnessError(f"carrier entry {s} missing from the thickening")
    return Thickening(K, carrier, mult)


def thickening_congruences(T: Thickening, phi: ConstructibleFunction) -> dict[str, bool]:
    """Check supp co_half_link(1) lies in Y and agrees with phi mod 8, 4, 2 by stratum dimension."""
    K = T.complex
    omega = co_half_link(constant(K, 1))
    Y = phi.complex
    mods = {0: 2, 1: 4, 2: 8}
    support_ok = True
    cong = {0: True, 1: True, 2: True}
    for i, s in enumerate(K.simplices):
        w = omega.values[i]
        if s not in T.carrier:
            if w:
                support_ok = False
            continue
        y = T.carrier[s]
        d = len(y) - 1
        target = phi.values[Y.index[y]]
        if isinstance(w, Fraction) or (w - target) % mods[d]:
            cong[d] = False
    return {"euler": is_euler(constant(K, 1)), "support_in_Y": support_ok,
            "mod2_vertices": cong[0], "mod4_edges": cong[1], "mod8_triangles": cong[2]}


# ------------------------------------------------------------ end to end

CHI = "chi"


def chi_witness() -> Complex:
    """Two boundaries of 4-simplices sharing a vertex."""
    S3 = build_complex(list(combinations(range(5), 4)))
    W, _, _ = wedge(S3, 0, S3, 0)
    return W


@dataclass
class Witness:
    complex: Complex
    index: CharIndex | None
    provenance: dict
    verification: dict


def _verify(L: Complex, mask: int | None) -> dict:
    prof = base_profile(L, Mode.EXTENDED)
    cond = euler_conditions(prof)
    if not all(cond.values()) or not prof.integral:
        raise WitnessError(f"witness fails the euler conditions: {cond}")
    par = ak_numbers(prof)
    nz = nonzero_char_numbers(prof, Mode.EXTENDED)
    battery = sorted(i.mask for i in nz.battery())
    ak_odd = [k for k in AK_NAMES if par[k]]
    expected = [] if mask is None else [mask]
    if battery != expected:
        raise WitnessError(f"battery {[hex(m) for m in battery]} differs from {[hex(m) for m in expected]}")
    if mask is None:
        if par["chi"] != 1 or ak_odd:
            raise WitnessError("euler characteristic witness has the wrong parities")
    else:
        if par["chi"]:
            raise WitnessError("witness has odd euler characteristic")
        want_ak = [AK_NAMES[b - 3] for b in range(3, 7) if mask == 1 << b]
        if ak_odd != want_ak:
            raise WitnessError(f"depth-2 parities {ak_odd} differ from {want_ak}")
    if prof.half_link_phi_zero:
        for k in ("delta", "eps"):
            if any(co_half_link(prof.functions[k]).values):
                raise WitnessError(f"co_half_link({k}) is not identically zero")
    return {"euler": cond, "parities": par, "battery": [hex(m) for m in battery], "odd_masks": len(nz.odd_masks)}


@dataclass
class Pipeline:
    curve: DecoratedCurve
    discs: DecoratedSurface
    surface: DecoratedSurface
    thickening: Thickening


def run_pipeline(idx: CharIndex) -> Pipeline:
    L1 = build_L1_for_index(idx)
    L1.check()
    Y1 = fill_cycles(L1)
    Y2 = adjust_mod4(Y1)
    if any(link_op(Y2.phi).values):
        raise WitnessError("half-link of phi does not vanish on the surface")
    if _integral(Y2.phi) % 2:
        raise WitnessError("integral of phi is odd")
    T = thicken(Y2.complex, Y2.phi)
    return Pipeline(L1, Y1, Y2, T)


def generate_witness(idx: CharIndex | str) -> Witness:
    """Compact 3-complex whose only odd tracked invariant is ``idx`` (or chi)."""
    if isinstance(idx, str):
        if idx.lower() != CHI:
            idx = CharIndex.parse(idx)
        else:
            L = chi_witness()
            return Witness(L, None, {"construction": "wedge of two 3-spheres"}, _verify(L, None))
    if not counted(idx.mask):
        raise ValueError(f"{idx.to_string()} is not among the counted invariants")
    ext = CharIndex(Mode.EXTENDED, idx.mask)
    P = run_pipeline(ext)
    L = P.thickening.complex
    hist: dict[str, dict[str, int]] = {}
    for s, m in sorted(P.thickening.multiplicities.items()):
        row = hist.setdefault(str(len(s) - 1), {})
        row[str(m)] = row.get(str(m), 0) + 1
    hist = {d: dict(sorted(row.items(), key=lambda kv: int(kv[0]))) for d, row in hist.items()}
    prov = {"stages": ["decorated graph", "discs", "bubbles", "thickening", "verification"],
            "blocks": list(P.curve.blocks), "pieces": [hex(m) for m in sorted(cancelling_pieces(idx.mask))],
            "graph_vertices": P.curve.n, "graph_arcs": len(P.curve.arcs), **P.surface.log,
            "surface_f_vector": P.surface.complex.f_vector(), "multiplicities": hist,
            "f_vector": L.f_vector()}
    return Witness(L, idx, prov, _verify(L, idx.mask))
