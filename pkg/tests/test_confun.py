import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eulerlink.confun import (ConstructibleFunction, FunctionError, add, apply_polynomial, closed_basis_coefficients,
                              co_half_link, constant, dyadic, euler_integral, from_mapping, half_link, in_2I,
                              in_ideal_I, indicator, is_euler, is_even_valued, is_integer_valued, link_op,
                              link_op_geometric, mul, pullback, random_function, restrict_to_skeleton, scale,
                              support, support_dim)
from eulerlink.polyops import phi4
from eulerlink.simplicial import barycentric_subdivision, build_complex, random_complex

from conftest import sphere, two_spheres

CIRCLE = build_complex([[0, 1], [1, 2], [0, 2]])
EDGE = build_complex([[0, 1]])


def test_dyadic_rejects_non_dyadic():
    assert dyadic("5/2") == Fraction(5, 2)
    assert dyadic(Fraction(4, 2)) == 2 and type(dyadic(Fraction(4, 2))) is int
    with pytest.raises(FunctionError):
        dyadic(Fraction(1, 3))
    with pytest.raises(FunctionError):
        dyadic(0.5)


def test_ring_operations():
    K = sphere(2)
    one = constant(K)
    assert add(one, one) == constant(K, 2)
    assert scale(Fraction(1, 2), one) == constant(K, Fraction(1, 2))
    A = indicator(K, [(0, 1, 2)])
    B = indicator(K, [(0, 1, 3)])
    assert mul(A, B) == indicator(K, [(0, 1)])


def test_mismatched_complexes():
    with pytest.raises(FunctionError):
        constant(CIRCLE) + constant(EDGE)


def test_link_on_circle_is_two():
    assert link_op(constant(CIRCLE)) == constant(CIRCLE, 2)


def test_link_on_closed_edge():
    L = link_op(constant(EDGE))
    assert L[(0,)] == 1 and L[(1,)] == 1 and L[(0, 1)] == 2


def test_link_on_two_sphere_vanishes():
    assert not any(link_op(constant(sphere(2))).values)
    assert not any(half_link(constant(sphere(2))).values)


def test_co_half_link_on_two_three_spheres():
    W = two_spheres()
    omega = co_half_link(constant(W))
    # the wedge point has link S2 + S2, so half its euler characteristic is 2
    assert omega[(0,)] == -1
    assert all(v == 0 for s, v in zip(W.simplices, omega.values) if s != (0,))


def test_integrals():
    K = sphere(2)
    assert euler_integral(constant(K)) == 2
    f = from_mapping(K, {(0,): 3, (0, 1): Fraction(1, 2)})
    assert euler_integral(link_op(f)) == 0
    assert euler_integral(co_half_link(f)) == euler_integral(f)


def test_predicates():
    assert is_euler(constant(CIRCLE))
    assert not is_euler(constant(EDGE))
    assert is_euler(constant(two_spheres()))
    f = from_mapping(EDGE, {(0,): Fraction(1, 2)})
    assert not is_integer_valued(f)
    assert is_even_valued(constant(EDGE, 2))
    assert support(f) == [(0,)]
    assert support_dim(f) == 0
    assert support_dim(constant(EDGE, 0)) == -1
    with pytest.raises(FunctionError):
        is_euler(f)


def test_ideal():
    K = sphere(2)
    assert in_ideal_I(indicator(K, [(0,)]))
    assert not in_ideal_I(indicator(K, [(0, 1)]))
    assert in_ideal_I(scale(2, indicator(K, [(0, 1), (1, 2)])))
    assert in_2I(scale(2, indicator(K, [(0,)])))
    assert not in_2I(indicator(K, [(0,)]))


def test_polynomials_and_restriction():
    T = build_complex([[0, 1, 2]])
    assert apply_polynomial([0, -1, 1], constant(T, 3)) == constant(T, 6)
    assert apply_polynomial(phi4, constant(T, 2)) == constant(T, 0)
    r = restrict_to_skeleton(constant(T), 1)
    assert r[(0, 1, 2)] == 0 and r[(0, 1)] == 1 and r[(2,)] == 1


def test_closed_basis_coefficients_reconstruct():
    rng = random.Random(3)
    K = random_complex(rng, max_simplices=60, max_dim=3)
    f = random_function(K, rng)
    c = closed_basis_coefficients(f)
    rebuilt = constant(K, 0)
    for s, x in zip(K.simplices, c):
        if x:
            rebuilt = rebuilt + scale(x, indicator(K, [s]))
    assert rebuilt == f


def test_link_commutes_with_subdivision():
    rng = random.Random(5)
    for _ in range(5):
        K = random_complex(rng, max_simplices=40, max_dim=3)
        f = random_function(K, rng)
        S, carrier = barycentric_subdivision(K)
        assert link_op(pullback(f, S, carrier)) == pullback(link_op(f), S, carrier)


@st.composite
def complex_and_function(draw):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = random.Random(seed)
    K = random_complex(rng, max_simplices=draw(st.integers(1, 80)), max_dim=draw(st.integers(0, 4)))
    return K, random_function(K, rng)


@settings(max_examples=60, deadline=None)
@given(complex_and_function())
def test_projection_identities(data):
    K, f = data
    H, O = half_link(f), co_half_link(f)
    assert link_op(link_op(f)) == scale(2, link_op(f))
    assert H + O == f
    assert half_link(H) == H and co_half_link(O) == O
    assert not any(half_link(O).values) and not any(co_half_link(H).values)


@settings(max_examples=40, deadline=None)
@given(complex_and_function())
def test_closed_form_matches_geometric_link(data):
    K, f = data
    assert link_op(f) == link_op_geometric(f)


def test_support_drops_one_dimension():
    rng = random.Random(9)
    for _ in range(100):
        K = random_complex(rng, max_simplices=100, max_dim=rng.randint(0, 4))
        f = random_function(K, rng)
        d = support_dim(f)
        if d >= 0 and d % 2 == 0:
            assert support_dim(half_link(f)) <= d - 1
        if d >= 0 and d % 2 == 1:
            assert support_dim(co_half_link(f)) <= d - 1


def test_constructor_validates_length():
    with pytest.raises(FunctionError):
        ConstructibleFunction(EDGE, [1, 2])
