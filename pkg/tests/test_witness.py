from dataclasses import replace

import pytest

from eulerlink.confun import co_half_link, constant, from_mapping, link_op
from eulerlink.invariants import CharIndex, Mode, enumerate_odd_subsets
from eulerlink.simplicial import build_complex
from eulerlink.witness import (RECIPES, V_EXPRS, Arc, DecoratedCurve, WitnessError, _integral, adjust_mod4,
                               build_L1, build_L1_for_index, cancelling_pieces, cheapest_bubbles, counted,
                               curve_vertex_masks, elementary_block, fill_cycles, generate_witness,
                               stratum_values, thicken, thickening_congruences, wedge_decorated)

from conftest import witness

NAMES = [v.name for v in V_EXPRS]
TRIPLE = [NAMES.index(n) for n in ("beta", "ohl(beta2)", "ohl(beta3)")]


def circle(values):
    return DecoratedCurve(2, [Arc(0, 1, values), Arc(0, 1, values)])


def triple(L):
    ex = L.expressions(L.p0)
    return tuple(ex[i] for i in TRIPLE)


def shift(state, l):
    a, b, c = state
    return a + l, b + 2 * a * l, c + 3 * a * l * (a + l)


@pytest.mark.parametrize("kind, want", [("A", (1, 0, 0)), ("B", (0, -1, 0)), ("C", (1, -1, -3))])
def test_block_triples(kind, want):
    assert triple(elementary_block(kind)) == want


def test_wedge_adds_triples_mod_two():
    L = wedge_decorated(elementary_block("A"), elementary_block("B"))
    assert tuple(x % 2 for x in triple(L)) == (1, 1, 0)


def test_wedge_with_trivial_circle_changes_nothing():
    A = elementary_block("A")
    L = wedge_decorated(A, circle((0, 0, 0, 0, 0)))
    assert L.expressions(L.p0) == A.expressions(A.p0)


def test_alpha_beta_wedge_cross_term():
    L = wedge_decorated(elementary_block("alpha"), elementary_block("beta"))
    assert L.expressions(L.p0)[NAMES.index("ohl(alpha*beta)")] == 1


@pytest.mark.parametrize("name", ["ohl(alpha*delta)", "ohl(alpha*beta*delta)", "ohl(alpha*beta*gamma*delta)"])
def test_delta_blocks_isolate_their_expression(name):
    L = elementary_block(name)
    ex = L.expressions(L.p0)
    i = NAMES.index(name)
    assert ex[i] == 1 and not any(ex[i + 1:])


def test_build_single_beta():
    L = build_L1([1])
    assert (L.n, len(L.arcs), L.blocks) == (2, 2, ("beta",))
    assert [sorted(L.odd_set(p)) for p in range(L.n)] == [[1], [1]]


def test_build_beta_and_ohl_beta2():
    L = build_L1([1, 8])
    L.check()
    assert (L.n, len(L.arcs), L.p0) == (3, 4, 1)
    assert [sorted(L.odd_set(p)) for p in range(L.n)] == [[8], [1, 8], [1]]


def test_build_alpha_delta():
    L = build_L1([31])
    assert (L.n, len(L.arcs), L.p0) == (4, 8, 1)
    assert [sorted(L.odd_set(p)) for p in range(L.n)] == [[31], [31], [0], [0]]


@pytest.mark.parametrize("U", [[1, 2], [3], [0, 8], [7, 9], [2, 31]])
def test_build_distinguished_vertex(U):
    L = build_L1(U)
    L.check()
    assert L.odd_set(L.p0) == set(U)
    for p in range(L.n):
        if p != L.p0:
            assert len(L.odd_set(p)) <= 1


def test_counted():
    assert counted(0x8) and counted(0x82)
    assert not counted(0x80) and not counted(1 << 20)


@pytest.mark.parametrize("mask", [0x82, 0xB, 0x28B, 1 << 40 | 0x7])
def test_cancelling_pieces_leave_only_the_mask(mask):
    pieces = cancelling_pieces(mask)
    assert mask in pieces
    d = mask
    while d:
        if d & ~0b111 and counted(d):
            covering = sum(1 for p in pieces if p & d == d)
            assert covering % 2 == (d == mask)
        d = (d - 1) & mask


def test_single_divisor_needs_no_cancelling():
    assert cancelling_pieces(0x82) == {0x82}


@pytest.mark.parametrize("mask", [0x8, 0x82, 0xB, 0x281, 1 << 31 | 1])
def test_index_graph_has_one_odd_counted_number(mask):
    L = build_L1_for_index(CharIndex(Mode.EXTENDED, mask))
    L.check()
    _, listed = enumerate_odd_subsets(curve_vertex_masks(L), Mode.EXTENDED)
    assert [m for m in listed if counted(m)] == [mask]


def test_fill_alpha_circle():
    Y = fill_cycles(circle((1, 0, 0, 0, 0)))
    assert Y.log["discs"] == 2
    assert all(ls == [1, 1] for ls in Y.cells.values())
    assert not any(link_op(Y.phi).values)


def test_fill_beta_circle_uses_one_and_three():
    Y = fill_cycles(circle((0, 1, 0, 0, 0)))
    assert all(ls == [1, 3] for ls in Y.cells.values())
    a, b, g, d, _ = stratum_values([1, 3])
    assert (a % 2, b % 2, g % 2, d % 4) == (0, 1, 0, 0)


def test_fill_delta_circle():
    Y = fill_cycles(circle((0, 0, 0, 2, 0)))
    assert all(ls == [4] for ls in Y.cells.values())
    assert stratum_values([4])[3] % 4 == 2


def test_stratum_values_reject_odd_sum():
    with pytest.raises(WitnessError):
        stratum_values([1])


@pytest.mark.parametrize("key, want", [("phi", (2, 0, 0)), ("beta", (0, 2, 0)), ("gamma", (0, 0, 2))])
def test_bubble_recipes(key, want):
    state = (0, 0, 0)
    for l in RECIPES[key]:
        state = shift(state, l)
    assert tuple(x % 4 for x in state) == want


@pytest.mark.parametrize("start", [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)])
@pytest.mark.parametrize("gap", [(2, 0, 0), (0, 2, 0), (0, 0, 2), (2, 2, 2)])
def test_cheapest_bubbles_reach_the_gap(start, gap):
    state = start
    for l in cheapest_bubbles(start, gap):
        state = shift(state, l)
    assert tuple((s - t) % 4 for s, t in zip(state, start)) == gap


@pytest.mark.parametrize("recipes", [False, True])
def test_adjust_reaches_targets(recipes):
    Y = adjust_mod4(fill_cycles(circle((0, 1, 0, 0, 0))), recipes=recipes)
    for e, target in Y.targets.items():
        got = Y.stratum_values(e)
        assert all((got[i] - target[i]) % 4 == 0 for i in range(3))
    assert not any(link_op(Y.phi).values)
    assert _integral(Y.phi) % 2 == 0


def test_sphere_flips_odd_integral():
    Y = fill_cycles(circle((1, 0, 0, 0, 0)))
    p = Y.graph_vertices[0]
    # raising one vertex value by one makes the integral odd
    Y = replace(Y, vertex_targets={**Y.vertex_targets, p: (2,) + tuple(Y.vertex_targets[p][1:])})
    Z = adjust_mod4(Y)
    assert Z.log["sphere"]
    assert _integral(Z.phi) % 2 == 0
    assert [Z.stratum_values(e) for e in sorted(Z.cells)] == [Y.stratum_values(e) for e in sorted(Y.cells)]


def test_thicken_triangle():
    T = build_complex([[0, 1, 2]])
    f = from_mapping(T, {(0, 1, 2): 1})
    with pytest.raises(ValueError):
        thicken(T, f)
    Th = thicken(T, f, strict=False)
    omega = co_half_link(constant(Th.complex))
    inner = [omega[s] for s, y in Th.carrier.items() if y == (0, 1, 2)]
    assert inner and all(v == -7 for v in inner)
    assert Th.multiplicities[(0, 1, 2)] == 8
    assert thickening_congruences(Th, f)["mod8_triangles"]


def test_thicken_point():
    P = build_complex([[0]])
    f = constant(P, 1)
    Th = thicken(P, f)
    omega = co_half_link(constant(Th.complex))
    assert {omega[s] for s in Th.carrier} == {-1}
    assert all(thickening_congruences(Th, f).values())


def test_chi_witness():
    W = witness("chi")
    assert W.index is None
    assert W.verification["parities"]["chi"] == 1
    assert W.verification["battery"] == []


def test_block_witness():
    W = witness("base:82")
    assert W.complex.dim == 3
    assert W.verification["battery"] == ["0x82"]
    assert W.provenance["pieces"] == ["0x82"]
    assert W.provenance["f_vector"] == W.complex.f_vector()


def test_uncounted_index_refused():
    with pytest.raises(ValueError):
        generate_witness(CharIndex(Mode.EXTENDED, 0x80))
