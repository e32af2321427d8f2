"""Exact constructible functions on a simplicial complex.

A function is one exact dyadic value per open simplex.  Values are stored
as ``int`` when integral and as :class:`fractions.Fraction` otherwise; every
denominator is a power of two.
"""
from __future__ import annotations

from array import array
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Callable, Iterable, Sequence, Union

from . import _core_py, _kernels
from .simplicial import Complex, Simplex, build_complex, combinatorial_link, join

Value = Union[int, Fraction]

_KERNEL_LIMIT = 1 << 62


class FunctionError(ValueError):
    """Raised for mismatched complexes and non-dyadic or non-integer input."""


def dyadic(x) -> Value:
    """Coerce to an exact dyadic value (``int`` when integral)."""
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        x = Fraction(x)
    if not isinstance(x, Rational):
        raise FunctionError(f"not an exact rational: {x!r}")
    x = Fraction(x)
    d = x.denominator
    if d & (d - 1):
        raise FunctionError(f"denominator of {x} is not a power of two")
    return x.numerator if d == 1 else x


def two_adic_exponent(x: Value) -> int:
    """``e`` with ``x = n / 2**e`` in lowest terms."""
    if isinstance(x, int):
        return 0
    return x.denominator.bit_length() - 1


def _norm(x: Value) -> Value:
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _all_int(vals) -> bool:
    return set(map(type, vals)) <= {int}


def _norm_all(vals: list) -> list[Value]:
    if _all_int(vals):
        return vals
    return [_norm(v) for v in vals]


class ConstructibleFunction:
    """Exact values on the open simplices of a fixed complex."""

    __slots__ = ("complex", "values")

    def __init__(self, K: Complex, values: Sequence):
        if len(values) != len(K):
            raise FunctionError(f"expected {len(K)} values, got {len(values)}")
        self.complex = K
        self.values: list[Value] = [dyadic(v) for v in values]

    @classmethod
    def _raw(cls, K: Complex, values: list[Value]) -> "ConstructibleFunction":
        obj = cls.__new__(cls)
        obj.complex = K
        obj.values = values
        return obj

    def __repr__(self) -> str:
        nz = sum(1 for v in self.values if v)
        return f"ConstructibleFunction(|K|={len(self.complex)}, nonzero={nz})"

    def __getitem__(self, s: Sequence[int]) -> Value:
        return self.values[self.complex.locate(s)]

    def __eq__(self, other) -> bool:
        if isinstance(other, ConstructibleFunction):
            return self.complex == other.complex and self.values == other.values
        return NotImplemented

    def __hash__(self):
        return hash((self.complex, tuple(self.values)))

    def _other(self, g) -> list[Value]:
        if isinstance(g, ConstructibleFunction):
            if g.complex is not self.complex and g.complex != self.complex:
                raise FunctionError("functions live on different complexes")
            return g.values
        c = dyadic(g)
        return [c] * len(self.values)

    def __add__(self, g):
        return self._raw(self.complex, _norm_all([a + b for a, b in zip(self.values, self._other(g))]))

    __radd__ = __add__

    def __sub__(self, g):
        return self._raw(self.complex, _norm_all([a - b for a, b in zip(self.values, self._other(g))]))

    def __rsub__(self, g):
        return self._raw(self.complex, _norm_all([b - a for a, b in zip(self.values, self._other(g))]))

    def __mul__(self, g):
        return self._raw(self.complex, _norm_all([a * b for a, b in zip(self.values, self._other(g))]))

    __rmul__ = __mul__

    def __neg__(self):
        return self._raw(self.complex, [-a for a in self.values])

    def __pow__(self, k: int):
        return self._raw(self.complex, _norm_all([a ** k for a in self.values]))

    def map(self, fn: Callable[[Value], Value]) -> "ConstructibleFunction":
        return ConstructibleFunction(self.complex, [fn(v) for v in self.values])

    def at_vertices(self) -> list[Value]:
        return [self.values[i] for i, d in enumerate(self.complex.dims) if d == 0]


def add(f: ConstructibleFunction, g: ConstructibleFunction) -> ConstructibleFunction:
    return f + g


def sub(f: ConstructibleFunction, g: ConstructibleFunction) -> ConstructibleFunction:
    return f - g


def mul(f: ConstructibleFunction, g: ConstructibleFunction) -> ConstructibleFunction:
    return f * g


def scale(c, f: ConstructibleFunction) -> ConstructibleFunction:
    return f * dyadic(c)


def constant(K: Complex, c=1) -> ConstructibleFunction:
    return ConstructibleFunction._raw(K, [dyadic(c)] * len(K))


def indicator(K: Complex, simplices: Iterable[Sequence[int]]) -> ConstructibleFunction:
    """Indicator of the closed subcomplex generated by ``simplices``."""
    vals: list[Value] = [0] * len(K)
    ptr, idx = K.face_table()
    for s in simplices:
        t = K.locate(s)
        for j in range(ptr[t], ptr[t + 1]):
            vals[idx[j]] = 1
    return ConstructibleFunction._raw(K, vals)


def from_mapping(K: Complex, table: dict) -> ConstructibleFunction:
    """Function with the given values on listed simplices and zero elsewhere."""
    vals: list[Value] = [0] * len(K)
    for s, v in table.items():
        vals[K.locate(s)] = dyadic(v)
    return ConstructibleFunction._raw(K, vals)


def _run_kernel(name: str, K: Complex, vals: list[int]) -> list[int]:
    ptr, idx = K.face_table()
    bound = max(max(vals, default=0), -min(vals, default=0))
    # each output is a signed sum of at most 2 len(K) inputs
    if bound * 2 * max(len(K), 1) < _KERNEL_LIMIT:
        out = array("q", bytes(8 * len(vals)))
        getattr(_kernels, name)(ptr, idx, K.dims, array("q", vals), out)
        return out.tolist()
    out = [0] * len(vals)
    getattr(_core_py, name)(ptr, idx, K.dims, vals, out)
    return out


def _coface_sums(K: Complex, vals: list[int]) -> list[int]:
    return _run_kernel("coface_sums", K, vals)


def closed_basis_coefficients(f: ConstructibleFunction) -> list[Value]:
    """``c_s = sum over cofaces t of s of (-1)^(dim t - dim s) f(t)``.

    These are the coefficients of f in the basis of closed-simplex indicators.
    """
    e = max((two_adic_exponent(v) for v in f.values), default=0)
    scaled = [int(v * (1 << e)) for v in f.values]
    c = _coface_sums(f.complex, scaled)
    if e == 0:
        return c
    den = 1 << e
    return [_norm(Fraction(x, den)) for x in c]


def _scaled_link(f: ConstructibleFunction) -> tuple[list[int], int]:
    """``(2**e * Lambda f, e)`` computed in integers."""
    e = 0 if is_integer_valued(f) else max(two_adic_exponent(v) for v in f.values)
    vals = f.values if e == 0 else [int(v * (1 << e)) for v in f.values]
    return _run_kernel("link_sums", f.complex, vals), e


def _unscale(vals: list[int], e: int) -> list[Value]:
    if e == 0:
        return vals
    den = 1 << e
    return [v >> e if v & (den - 1) == 0 else Fraction(v, den) for v in vals]


def link_op(f: ConstructibleFunction) -> ConstructibleFunction:
    """Lambda f: the euler integral of f over the link of each point."""
    vals, e = _scaled_link(f)
    return ConstructibleFunction._raw(f.complex, _unscale(vals, e))


def link_op_geometric(f: ConstructibleFunction) -> ConstructibleFunction:
    """Lambda f by brute force: build the link of a point of each open simplex
    as the join of a small sphere with Lk(sigma) and integrate f over it."""
    K = f.complex
    out: list[Value] = []
    for i, sigma in enumerate(K.simplices):
        d = len(sigma) - 1
        sphere = build_complex(list(combinations(range(d + 1), d))) if d else Complex.empty()
        lk, back = combinatorial_link(K, sigma)
        J, _, in_lk = join(sphere, lk)
        from_lk = {w: back[v] for v, w in in_lk.items()}
        acc = 0
        for t, dim in zip(J.simplices, J.dims):
            part = tuple(from_lk[w] for w in t if w in from_lk)
            v = f[sigma + part] if part else f.values[i]
            acc += v if dim % 2 == 0 else -v
        out.append(_norm(acc) if type(acc) is Fraction else acc)
    return ConstructibleFunction._raw(K, out)


def half_link(f: ConstructibleFunction) -> ConstructibleFunction:
    vals, e = _scaled_link(f)
    return ConstructibleFunction._raw(f.complex, _unscale(vals, e + 1))


def co_half_link(f: ConstructibleFunction) -> ConstructibleFunction:
    return f - half_link(f)


def euler_integral(f: ConstructibleFunction) -> Value:
    dims = f.complex.dims
    return _norm(sum((v if dims[i] % 2 == 0 else -v) for i, v in enumerate(f.values) if v))


def is_integer_valued(f: ConstructibleFunction) -> bool:
    return _all_int(f.values)


def is_even_valued(f: ConstructibleFunction) -> bool:
    return _all_int(f.values) and not any(map((1).__and__, f.values))


def _need_int(f: ConstructibleFunction, what: str) -> None:
    if not is_integer_valued(f):
        raise FunctionError(f"{what} needs an integer-valued function")


def is_euler(f: ConstructibleFunction) -> bool:
    _need_int(f, "is_euler")
    return is_even_valued(link_op(f))


def support(f: ConstructibleFunction) -> list[Simplex]:
    K = f.complex
    return [K.simplices[i] for i, v in enumerate(f.values) if v]


def support_dim(f: ConstructibleFunction) -> int:
    dims = f.complex.dims
    return max((dims[i] for i, v in enumerate(f.values) if v), default=-1)


def in_ideal_I(f: ConstructibleFunction) -> bool:
    """dim supp(f mod 2^k) < k for 0 <= k <= dim K + 1."""
    _need_int(f, "in_ideal_I")
    dims = f.complex.dims
    for k in range(0, f.complex.dim + 2):
        m = (1 << k) - 1
        top = max((dims[i] for i, v in enumerate(f.values) if v & m), default=-1)
        if top >= k:
            return False
    return True


def in_2I(f: ConstructibleFunction) -> bool:
    _need_int(f, "in_2I")
    if not is_even_valued(f):
        return False
    return in_ideal_I(ConstructibleFunction._raw(f.complex, [v // 2 for v in f.values]))


def restrict_to_skeleton(f: ConstructibleFunction, k: int) -> ConstructibleFunction:
    dims = f.complex.dims
    return ConstructibleFunction._raw(f.complex, [v if dims[i] <= k else 0 for i, v in enumerate(f.values)])


def apply_polynomial(P, f: ConstructibleFunction) -> ConstructibleFunction:
    """Apply ``P`` pointwise; ``P`` is a callable or a low-to-high coefficient list."""
    if callable(P):
        fn = P
    else:
        coeffs = [Fraction(c) for c in P]

        def fn(t):
            acc = Fraction(0)
            for c in reversed(coeffs):
                acc = acc * t + c
            return acc

    if not is_integer_valued(f):
        poly_coeffs = getattr(P, "coefficients", None if callable(P) else P)
        if poly_coeffs is None or any(Fraction(c).denominator != 1 for c in poly_coeffs):
            raise FunctionError("non-integer coefficients need an integer-valued function")
    return ConstructibleFunction(f.complex, [fn(v) for v in f.values])


def pullback(f: ConstructibleFunction, K: Complex, carrier: Sequence[int]) -> ConstructibleFunction:
    """``f o carrier`` on a subdivision ``K`` of ``f.complex``."""
    return ConstructibleFunction._raw(K, [f.values[c] for c in carrier])


def random_function(K: Complex, rng, bound: int = 4, denominators: Sequence[int] = (1, 2, 4)) -> ConstructibleFunction:
    """Dyadic values ``n / d`` with ``|n| <= bound`` and ``d`` drawn from ``denominators``."""
    return ConstructibleFunction._raw(
        K, [dyadic(Fraction(rng.randint(-bound, bound), rng.choice(denominators))) for _ in range(len(K))])
