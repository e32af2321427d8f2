from fractions import Fraction

import pytest

from eulerlink.confun import constant
from eulerlink.polyops import (P4, MultiPolynomial, PolynomialError, RationalPolynomial, binomial_decompose,
                               binomial_poly, from_binomial, in_8A, in_script_P, in_script_P_multi,
                               in_script_P_recursive, mod8_generators, mod8_reduce, parity_table,
                               standard_operators)
from eulerlink.simplicial import build_complex

t = RationalPolynomial.t()
HALF = Fraction(1, 2)
QUARTIC = (t * t * t * t - t * t) * HALF


def test_parse_and_format():
    P = RationalPolynomial.parse("0,0,-1/2,0,1/2")
    assert P == QUARTIC
    assert P.format() == "0,0,-1/2,0,1/2"
    with pytest.raises(PolynomialError):
        RationalPolynomial.parse("1,x")


def test_binomial_decompose():
    assert binomial_decompose(t * t) == [0, 1, 2]
    assert binomial_decompose(P4()) == [0, 0, 0, 0, 12]
    with pytest.raises(PolynomialError):
        binomial_decompose(t * HALF)


def test_from_binomial_inverts():
    P = RationalPolynomial([3, Fraction(-5, 2), 0, Fraction(7, 6), 1])
    assert from_binomial(binomial_decompose(P * 6)) == P * 6


def test_membership():
    assert in_script_P(QUARTIC)
    assert not in_script_P(binomial_poly(2))
    assert in_script_P(RationalPolynomial([4, -7, 0, 3, 0, 0, 1]))
    assert not in_script_P(t * Fraction(1, 3))


def test_recursive_membership():
    assert in_script_P_recursive(QUARTIC)
    assert not in_script_P_recursive(binomial_poly(2))
    assert in_script_P_recursive(t * t * t - t)


def test_multivariate_membership():
    f2 = binomial_poly(2)
    assert in_script_P_multi(MultiPolynomial({(1, 1): 1}))
    assert not in_script_P_multi(MultiPolynomial.from_univariate([f2, f2]))
    assert in_script_P_multi(MultiPolynomial.from_univariate([f2, f2]) * 4)
    assert not in_script_P_multi(MultiPolynomial.from_univariate([f2, f2]) * 2)


def test_quartic_mod8_identity():
    # half(t^4 - t^2) = P4 + 3 t (t - 1)^2
    assert QUARTIC == P4() + (t * (t - 1) * (t - 1)) * 3
    coords, residual = mod8_reduce(QUARTIC)
    assert coords == [0, 0, 2, 3, 1, 0]
    assert in_8A(residual)
    g = mod8_generators()
    assert sum((gi * c for gi, c in zip(g, coords)), RationalPolynomial()) + residual == QUARTIC


def test_mod8_reduce_simple_cases():
    assert mod8_reduce(t)[0] == [0, 1, 0, 0, 0, 0]
    coords, residual = mod8_reduce(binomial_poly(5) * 8)
    assert coords == [0] * 6
    assert residual == binomial_poly(5) * 8
    with pytest.raises(PolynomialError):
        mod8_reduce(binomial_poly(2))


def test_parity_table():
    assert parity_table() == [
        (0, 0, 0, 0),
        (1, 1, 0, 0),
        (1, 0, 0, 0),
        (0, 0, 1, 0),
        (0, 0, 1, 1),
    ]


@pytest.mark.parametrize("value, expected", [(2, (2, 2, 6, 0, 0)), (1, (1, 0, 0, 0, 0)), (5, (5, 20, 120, 60, 60))])
def test_standard_operators(value, expected):
    K = build_complex([[0, 1]])
    ops = standard_operators(constant(K, value))
    got = tuple(ops[k].values[0] for k in ("phi", "phi2", "phi3", "phi4", "phi5"))
    assert got == expected
