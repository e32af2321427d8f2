"""Rational polynomial operators and the ring of operators preserving constructibility.

Membership is decided in the binomial basis ``f_p(t) = t(t-1)...(t-p+1)/p!``:
a polynomial belongs when every coordinate ``n_p`` is an integer divisible
by ``2**(p // 2)``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Mapping, Sequence

from .confun import ConstructibleFunction, FunctionError, is_integer_valued


class PolynomialError(ValueError):
    """Raised when a polynomial is not integer-valued or not in the ring."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalPolynomial:
    """Univariate polynomial with exact rational coefficients, low degree first."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable = ()):
        c = [_frac(x) for x in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self.coefficients: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def parse(cls, text: str) -> "RationalPolynomial":
        """Parse ``"c0,c1/2,..."``."""
        parts = [p.strip() for p in text.split(",")]
        try:
            return cls(Fraction(p) for p in parts if p)
        except (ValueError, ZeroDivisionError) as exc:
            raise PolynomialError(f"bad coefficient list {text!r}: {exc}") from None

    @classmethod
    def t(cls) -> "RationalPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc

    def __repr__(self) -> str:
        return f"RationalPolynomial({self.format()})"

    def format(self) -> str:
        return ",".join(str(c) for c in self.coefficients) or "0"

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPolynomial):
            return self.coefficients == other.coefficients
        if isinstance(other, (int, Fraction)):
            return self.coefficients == RationalPolynomial((other,)).coefficients
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def _coerce(self, other) -> "RationalPolynomial":
        return other if isinstance(other, RationalPolynomial) else RationalPolynomial((other,))

    def __add__(self, other):
        a, b = self.coefficients, self._coerce(other).coefficients
        n = max(len(a), len(b))
        return RationalPolynomial((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                                  for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        a, b = self.coefficients, self._coerce(other).coefficients
        if not a or not b:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def shift(self, h: int = 1) -> "RationalPolynomial":
        """``P(t + h)``."""
        out = RationalPolynomial()
        base = RationalPolynomial((h, 1))
        power = RationalPolynomial((1,))
        for c in self.coefficients:
            out = out + power * c
            power = power * base
        return out

    def difference(self) -> "RationalPolynomial":
        """Forward difference ``P(t+1) - P(t)``."""
        return self.shift(1) - self


def binomial_poly(p: int) -> RationalPolynomial:
    """f_p(t) = t(t-1)...(t-p+1)/p!"""
    out = RationalPolynomial((1,))
    for i in range(p):
        out = out * RationalPolynomial((Fraction(-i, i + 1), Fraction(1, i + 1)))
    return out


def forward_differences(values: Sequence[Fraction]) -> list[Fraction]:
    """[(Delta^p g)(0) for p] from samples g(0), g(1), ..."""
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return out


def binomial_decompose(P: RationalPolynomial) -> list[int]:
    """Integer coordinates ``n_p`` with ``P = sum n_p f_p``."""
    n = forward_differences([P(t) for t in range(P.degree + 1)])
    if any(x.denominator != 1 for x in n):
        raise PolynomialError(f"{P.format()} is not integer-valued on the integers")
    return [int(x) for x in n]


def from_binomial(n: Sequence[int]) -> RationalPolynomial:
    out = RationalPolynomial()
    for p, c in enumerate(n):
        if c:
            out = out + binomial_poly(p) * c
    return out


def in_script_P(P: RationalPolynomial) -> bool:
    try:
        n = binomial_decompose(P)
    except PolynomialError:
        return False
    return all(c % (1 << (p // 2)) == 0 for p, c in enumerate(n))


@lru_cache(maxsize=65536)
def _recursive(coeffs: tuple[Fraction, ...]) -> bool:
    P = RationalPolynomial(coeffs)
    if P.degree <= 0:
        return P(0).denominator == 1
    if any(P(t).denominator != 1 for t in range(P.degree + 1)):
        return False
    D = P.difference()
    if not _recursive(D.coefficients):
        return False
    return _recursive((D.difference() * Fraction(1, 2)).coefficients)


def in_script_P_recursive(P: RationalPolynomial) -> bool:
    """Membership by the difference recursion: P, Delta P and Delta^2 P / 2."""
    return _recursive(P.coefficients)


class MultiPolynomial:
    """Sparse multivariate polynomial: exponent tuple -> rational coefficient."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Mapping[tuple[int, ...], object], nvars: int | None = None):
        clean = {tuple(e): _frac(c) for e, c in terms.items() if c}
        if nvars is None:
            nvars = len(next(iter(clean))) if clean else 1
        if any(len(e) != nvars for e in clean):
            raise PolynomialError("inconsistent number of variables")
        self.terms = clean
        self.nvars = nvars

    @classmethod
    def from_univariate(cls, factors: Sequence[RationalPolynomial]) -> "MultiPolynomial":
        """Product of univariate polynomials in separate variables."""
        terms: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
        for P in factors:
            nxt: dict[tuple[int, ...], Fraction] = {}
            for e, c in terms.items():
                for k, a in enumerate(P.coefficients):
                    if a:
                        key = e + (k,)
                        nxt[key] = nxt.get(key, 0) + c * a
            terms = nxt
        return cls(terms, len(factors))

    def __mul__(self, c):
        return MultiPolynomial({e: v * _frac(c) for e, v in self.terms.items()}, self.nvars)

    __rmul__ = __mul__

    def degrees(self) -> tuple[int, ...]:
        return tuple(max((e[i] for e in self.terms), default=0) for i in range(self.nvars))

    def __call__(self, point: Sequence[int]) -> Fraction:
        acc = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term *= Fraction(x) ** k
            acc += term
        return acc


def multi_binomial_decompose(P: MultiPolynomial) -> dict[tuple[int, ...], int]:
    """Coordinates in the basis prod f_{p_i}(t_i), by differences along each axis."""
    degs = P.degrees()
    grid = {pt: P(pt) for pt in cartesian(*(range(d + 1) for d in degs))}
    for axis, d in enumerate(degs):
        for rest in cartesian(*(range(degs[i] + 1) for i in range(len(degs)) if i != axis)):
            line = []
            for k in range(d + 1):
                pt = list(rest)
                pt.insert(axis, k)
                line.append(tuple(pt))
            diffs = forward_differences([grid[q] for q in line])
            for q, v in zip(line, diffs):
                grid[q] = v
    if any(v.denominator != 1 for v in grid.values()):
        raise PolynomialError("polynomial is not integer-valued on the integer lattice")
    return {p: int(v) for p, v in grid.items() if v}


def in_script_P_multi(P: MultiPolynomial) -> bool:
    try:
        n = multi_binomial_decompose(P)
    except PolynomialError:
        return False
    return all(c % (1 << sum(x // 2 for x in p)) == 0 for p, c in n.items())


def P4() -> RationalPolynomial:
    """t(t-1)(t-2)(t-3)/2"""
    return binomial_poly(4) * 12


def P5() -> RationalPolynomial:
    return P4() * RationalPolynomial((-4, 1))


def mod8_generators() -> list[RationalPolynomial]:
    t = RationalPolynomial.t()
    return [RationalPolynomial((1,)), t, t * t - t, t * t * t - t, P4(), P5()]


def mod8_reduce(P: RationalPolynomial) -> tuple[list[int], RationalPolynomial]:
    """Coordinates over :func:`mod8_generators` and the residual, which lies in 8A.

    Coordinates are normalised to 0..7, 0..7, 0..3, 0..3, 0..1, 0..1; these are
    the ranges in which they are determined modulo 8A.
    """
    if not in_script_P(P):
        raise PolynomialError(f"{P.format()} is not in the operator ring")
    n = binomial_decompose(P) + [0] * 6
    x0 = n[0] % 8
    x1 = n[1] % 8
    x3 = (3 * (n[3] // 2)) % 4
    x2 = ((n[2] - 6 * x3) // 2) % 4
    x4 = (n[4] // 4) % 2
    x5 = (n[5] // 4) % 2
    coords = [x0, x1, x2, x3, x4, x5]
    residual = P
    for c, g in zip(coords, mod8_generators()):
        residual = residual - g * c
    assert all(c % 8 == 0 for c in binomial_decompose(residual)), "residual outside 8A"
    return coords, residual


def in_8A(P: RationalPolynomial) -> bool:
    try:
        return all(c % 8 == 0 for c in binomial_decompose(P))
    except PolynomialError:
        return False


def parity_table(ts: Iterable[int] = range(1, 6)) -> list[tuple[int, int, int, int]]:
    """Parities of the per-disc contributions to (beta, gamma, delta/2, eps/2).

    These are P2/2, P3/2, P4/4, P5/4 with P2 = t^2 - t, P3 = t^3 - t.
    """
    p4, p5 = P4(), P5()
    rows = []
    for t in ts:
        vals = (Fraction(t * t - t, 2), Fraction(t ** 3 - t, 2), p4(t) / 4, p5(t) / 4)
        rows.append(tuple(int(v) % 2 for v in vals))
    return rows


def phi4(x: int) -> int:
    return x * (x - 1) * (x - 2) * (x - 3) // 2


def phi5(x: int) -> int:
    return phi4(x) * (x - 4)


def standard_operators(phi: ConstructibleFunction) -> dict[str, ConstructibleFunction]:
    """phi, phi2 = phi^2 - phi, phi3 = phi^3 - phi, phi4, phi5 applied pointwise."""
    if not is_integer_valued(phi):
        raise FunctionError("standard operators need an integer-valued function")
    K = phi.complex
    v = phi.values
    out = {
        "phi": phi,
        "phi2": ConstructibleFunction._raw(K, [x * x - x for x in v]),
        "phi3": ConstructibleFunction._raw(K, [x ** 3 - x for x in v]),
        "phi4": ConstructibleFunction._raw(K, [phi4(x) for x in v]),
        "phi5": ConstructibleFunction._raw(K, [phi5(x) for x in v]),
    }
    for key, mod in (("phi2", 2), ("phi3", 2), ("phi4", 4), ("phi5", 4)):
        assert all(x % mod == 0 for x in out[key].values), key
    return out
