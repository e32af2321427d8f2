"""Local obstructions for links of dimension at most 3.

For a link ``L`` put ``phi = co_half_link(1_L)`` and ``beta``, ``gamma``,
``delta``, ``eps`` the half-links of ``phi2, phi3, phi4, phi5``.  At every
vertex we evaluate 43 quantities: ``phi, beta, gamma`` and ``co_half_link(psi)``
for the 40 products ``psi`` in :data:`S_PRIME`.  A characteristic number is
the parity of the vertex sum of a product of selected quantities; it is
odd iff an odd number of vertices have every selected quantity odd, so the
per-vertex odd-bit masks determine all of them.

Bit ``i`` of a :class:`CharIndex` mask selects quantity ``i``.  BASE mode uses
bits 0-28 and EXTENDED mode bits 0-42.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from . import _kernels
from .confun import (ConstructibleFunction, co_half_link, constant, euler_integral, half_link,
                     is_euler, is_integer_valued)
from .polyops import phi4, phi5
from .simplicial import Complex, ComplexError, euler_characteristic, geometric_link

Factor = tuple[str, int]
Product = tuple[Factor, ...]


def _p(*parts: str) -> Product:
    out = []
    for s in parts:
        if s[-1] in "23":
            out.append((s[:-1], int(s[-1])))
        else:
            out.append((s, 1))
    return tuple(out)


S2: list[Product] = [_p("phi", "beta"), _p("phi", "gamma"), _p("beta", "gamma"),
                     _p("phi", "beta", "gamma")]
S3: list[Product] = [_p("beta2"), _p("gamma2"), _p("beta3"), _p("gamma3")]
S4: list[Product] = [
    _p("phi", "beta2"), _p("phi", "gamma2"), _p("beta", "phi2"), _p("beta", "gamma2"),
    _p("gamma", "phi2"), _p("gamma", "beta2"), _p("phi", "beta3"), _p("phi", "gamma3"),
    _p("beta", "phi3"), _p("beta", "gamma3"), _p("gamma", "phi3"), _p("gamma", "beta3"),
    _p("phi", "beta", "gamma2"), _p("phi", "gamma", "beta2"), _p("beta", "gamma", "phi2"),
    _p("phi", "beta", "gamma3"), _p("phi", "gamma", "beta3"), _p("beta", "gamma", "phi3"),
]
S5: list[Product] = [
    _p("phi", "delta"), _p("beta", "delta"), _p("gamma", "delta"),
    _p("phi", "eps"), _p("beta", "eps"), _p("gamma", "eps"),
    _p("phi", "beta", "delta"), _p("phi", "gamma", "delta"), _p("beta", "gamma", "delta"),
    _p("phi", "beta", "eps"), _p("phi", "gamma", "eps"), _p("beta", "gamma", "eps"),
    _p("phi", "beta", "gamma", "delta"), _p("phi", "beta", "gamma", "eps"),
]
S_PRIME: list[Product] = S2 + S3 + S4 + S5

QUANTITIES: list[Product] = [_p("phi"), _p("beta"), _p("gamma")] + S_PRIME
N_QUANTITIES = len(QUANTITIES)


def product_name(psi: Product) -> str:
    return "*".join(b if k == 1 else f"{b}{k}" for b, k in psi)


QUANTITY_NAMES: list[str] = ["phi", "beta", "gamma"] + [f"ohl({product_name(p)})" for p in S_PRIME]


class Mode(Enum):
    BASE = "base"
    EXTENDED = "extended"

    @property
    def nbits(self) -> int:
        return 29 if self is Mode.BASE else 43

    @property
    def universe(self) -> int:
        return (1 << self.nbits) - 1

    @property
    def n_mask(self) -> int:
        return self.universe & ~0b111


M_BITS = 0b111


class IndexError_(ValueError):
    """Raised for malformed characteristic-number indices."""


@dataclass(frozen=True, order=True)
class CharIndex:
    """Selects the factors of one characteristic number."""

    mode: Mode = field(compare=False)
    mask: int

    def __post_init__(self):
        if self.mask & ~self.mode.universe:
            raise IndexError_(f"mask {self.mask:#x} has bits outside {self.mode.value} mode")
        if not self.mask & self.mode.n_mask:
            raise IndexError_("index needs at least one co-half-link factor")

    @property
    def m_bits(self) -> int:
        return self.mask & M_BITS

    @property
    def n_bits(self) -> int:
        return self.mask & ~M_BITS

    @property
    def novel(self) -> bool:
        return not (self.m_bits == 0 and bin(self.n_bits).count("1") == 1)

    def bits(self) -> list[int]:
        return [i for i in range(self.mode.nbits) if self.mask >> i & 1]

    def factors(self) -> list[str]:
        return [QUANTITY_NAMES[i] for i in self.bits()]

    def to_string(self) -> str:
        return f"{self.mode.value}:{self.mask:x}"

    @classmethod
    def parse(cls, text: str) -> "CharIndex":
        try:
            tag, hexmask = text.strip().split(":")
            mode = Mode(tag.lower())
            mask = int(hexmask, 16)
        except ValueError:
            raise IndexError_(f"bad index {text!r}; expected base:HEX or extended:HEX") from None
        return cls(mode, mask)

    @classmethod
    def from_names(cls, mode: Mode, names: Iterable[str]) -> "CharIndex":
        mask = 0
        for n in names:
            mask |= 1 << QUANTITY_NAMES.index(n)
        return cls(mode, mask)

    def __str__(self) -> str:
        return self.to_string()


def is_ak_index(idx: CharIndex) -> bool:
    """Single S2 factor and no m-part: the sum equals a depth-2 euler integral."""
    return idx.m_bits == 0 and idx.n_bits in (1 << 3, 1 << 4, 1 << 5, 1 << 6)


def generator_counts(mode: Mode) -> dict[str, int]:
    s = len(S2) + len(S3) + len(S4) + (len(S5) if mode is Mode.EXTENDED else 0)
    novel = 2 ** 3 * (2 ** s - 1) - s
    return {"s_prime": s, "novel": novel, "total": novel + 4 + 1,
            "S2": len(S2), "S3": len(S3), "S4": len(S4), "S5": len(S5)}


def count_novel_indices(mode: Mode) -> int:
    """Count valid novel masks directly from the index rules."""
    s = mode.nbits - 3
    valid = 2 ** 3 * (2 ** s - 1)
    return valid - s


# ---------------------------------------------------------------- evaluation

def _sub(x, k: int):
    if k == 1:
        return x
    if k == 2:
        return x * x - x
    return x * x * x - x


def product_values(base: dict[str, list], psi: Product) -> list:
    """Pointwise value of ``psi`` from simplexwise base functions."""
    cols = [base[b] for b, _ in psi]
    ks = [k for _, k in psi]
    out = []
    for vals in zip(*cols):
        acc = 1
        for x, k in zip(vals, ks):
            if not x:
                acc = 0
                break
            acc = acc * _sub(x, k)
        out.append(acc)
    return out


def sparse_product(base: dict[str, list], support: dict[str, list[int]], psi: Product) -> dict[int, object]:
    """Nonzero values of ``psi``, visiting only where its sparsest factor is nonzero."""
    rows = min((support[b] for b, _ in psi), key=len)
    out = {}
    for i in rows:
        acc = 1
        for b, k in psi:
            x = base[b][i]
            if not x:
                acc = 0
                break
            acc = acc * _sub(x, k)
        if acc:
            out[i] = acc
    return out


def vertex_co_half_link(K: Complex, values) -> list:
    """``co_half_link`` of a function, evaluated only at the vertices of ``K``.

    ``values`` is a full list or a sparse ``{simplex index: value}`` map.
    """
    items = values.items() if isinstance(values, dict) else enumerate(values)
    nv = len(K.vertices)
    acc = [0] * nv
    own = [0] * nv
    for t, v in items:
        if not v:
            continue
        s = K.simplices[t]
        if len(s) == 1:
            own[t] = v
            continue
        sign = 1 if len(s) % 2 else -1
        for p in s:
            acc[K.vertex_position(p)] += sign * v
    out = []
    for o, a in zip(own, acc):
        if type(o) is int and type(a) is int and a % 2 == 0:
            out.append(o + a // 2)
        else:
            x = o + Fraction(a) / 2
            out.append(x.numerator if x.denominator == 1 else x)
    return out


@dataclass
class BaseProfile:
    """Functions and per-vertex quantities of a link."""

    complex: Complex
    mode: Mode
    phi: ConstructibleFunction
    functions: dict[str, ConstructibleFunction]
    quantities: list[list]
    integral: bool
    half_link_phi_zero: bool
    beta_agrees: bool
    notes: list[str] = field(default_factory=list)
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def masks(self) -> list[int]:
        """Per-vertex mask of odd quantities (restricted to the mode's bits)."""
        if not self.integral:
            raise ValueError("quantities are not integer-valued; parities undefined")
        nb = self.mode.nbits
        out = []
        for row in self.quantities:
            m = 0
            for i in range(nb):
                if row[i] % 2:
                    m |= 1 << i
            out.append(m)
        return out

    def odd_masks(self) -> list[int]:
        """Masks with odd multiplicity and a nonzero co-half-link part (exact compressed form)."""
        odd: dict[int, bool] = {}
        nm = self.mode.n_mask
        for m in self.masks():
            if m & nm:
                odd[m] = not odd.get(m, False)
        return sorted(m for m, o in odd.items() if o)


def base_profile(L: Complex, mode: Mode = Mode.EXTENDED) -> BaseProfile:
    if L.dim > 3:
        raise ComplexError(f"link dimension {L.dim} exceeds 3")
    one = constant(L, 1)
    phi = co_half_link(one)
    notes: list[str] = []
    if not is_integer_valued(phi):
        notes.append("1_L is not euler: phi is not integer-valued")
        return BaseProfile(L, mode, phi, {}, [], False, False, False, notes)
    v = phi.values
    lam_phi = half_link(phi)
    hl_zero = not any(lam_phi.values)
    phi2 = ConstructibleFunction._raw(L, [x * x - x for x in v])
    beta = half_link(phi2)
    beta_sq = half_link(phi * phi)
    agrees = beta == beta_sq
    if hl_zero and not agrees:
        raise AssertionError("half_link(phi^2) and half_link(phi2) differ although half_link(phi) = 0")
    if not hl_zero:
        notes.append("half_link(phi) != 0; beta taken as half_link(phi^2 - phi)")
    gamma = half_link(ConstructibleFunction._raw(L, [x ** 3 - x for x in v]))
    delta = half_link(ConstructibleFunction._raw(L, [phi4(x) for x in v]))
    eps = half_link(ConstructibleFunction._raw(L, [phi5(x) for x in v]))
    funcs = {"phi": phi, "beta": beta, "gamma": gamma, "delta": delta, "eps": eps,
             "beta_sq": beta_sq, "half_link_phi": lam_phi}
    base = {k: funcs[k].values for k in ("phi", "beta", "gamma", "delta", "eps")}
    support = {k: [i for i, x in enumerate(v) if x] for k, v in base.items()}
    integral = all(is_integer_valued(funcs[k]) for k in ("beta", "gamma", "delta", "eps"))
    if not integral:
        notes.append("a base function is not integer-valued")
    nv = len(L.vertices)
    cols = [[base[n][i] for i in range(nv)] for n in ("phi", "beta", "gamma")]
    for psi in S_PRIME:
        cols.append(vertex_co_half_link(L, sparse_product(base, support, psi)))
    quantities = [list(row) for row in zip(*cols)]
    if any(not isinstance(x, int) for row in quantities for x in row):
        integral = False
        notes.append("a vertex quantity is not an integer")
    return BaseProfile(L, mode, phi, funcs, quantities, integral, hl_zero, agrees, notes)


EULER_NAMES = ["1_L", "phi*beta", "phi*gamma", "beta*gamma", "phi*beta*gamma"]


def _as_profile(L, mode: Mode = Mode.EXTENDED) -> BaseProfile:
    return L if isinstance(L, BaseProfile) else base_profile(L, mode)


def euler_conditions(L) -> dict[str, bool]:
    prof = _as_profile(L)
    if "euler" in prof.cache:
        return dict(prof.cache["euler"])
    out = {n: False for n in EULER_NAMES}
    out["1_L"] = is_euler(constant(prof.complex, 1))
    if not out["1_L"] or not prof.functions:
        return out
    f = prof.functions
    prods = [f["phi"] * f["beta"], f["phi"] * f["gamma"], f["beta"] * f["gamma"],
             f["phi"] * f["beta"] * f["gamma"]]
    for name, g in zip(EULER_NAMES[1:], prods):
        out[name] = is_integer_valued(g) and is_euler(g)
    prof.cache["euler"] = dict(out)
    return out


AK_NAMES = ["phi*beta", "phi*gamma", "beta*gamma", "phi*beta*gamma"]


def ak_numbers(L) -> dict[str, int]:
    """Parities of chi(L), the four depth-2 integrals, and of the integral of phi."""
    prof = _as_profile(L)
    cond = euler_conditions(prof)
    if not all(cond.values()):
        bad = [k for k, v in cond.items() if not v]
        raise ValueError(f"euler conditions fail: {bad}")
    f = prof.functions
    prods = [f["phi"] * f["beta"], f["phi"] * f["gamma"], f["beta"] * f["gamma"],
             f["phi"] * f["beta"] * f["gamma"]]
    out = {"chi": euler_characteristic(prof.complex) % 2}
    for name, g in zip(AK_NAMES, prods):
        out[name] = int(euler_integral(g)) % 2
    out["phi"] = int(euler_integral(f["phi"])) % 2
    return out


def char_number(L, idx: CharIndex) -> int:
    prof = _as_profile(L, idx.mode)
    if not prof.integral:
        raise ValueError("quantities are not integer-valued")
    bits = idx.bits()
    total = 0
    for row in prof.quantities:
        total += all(row[i] % 2 for i in bits)
    return total % 2


def char_number_direct(L, idx: CharIndex) -> int:
    """Euler integral of the full product function, evaluated with confun operators."""
    prof = _as_profile(L, idx.mode)
    K = prof.complex
    f = prof.functions
    base = {k: f[k].values for k in ("phi", "beta", "gamma", "delta", "eps")}
    acc = constant(K, 1)
    for i in idx.bits():
        if i < 3:
            acc = acc * f[("phi", "beta", "gamma")[i]]
        else:
            psi = ConstructibleFunction._raw(K, product_values(base, S_PRIME[i - 3]))
            acc = acc * co_half_link(psi)
    return int(euler_integral(acc)) % 2


@dataclass
class NonzeroSet:
    mode: Mode
    count: int
    listed: list[int]
    cap: int
    odd_masks: list[int]

    @property
    def truncated(self) -> bool:
        return self.count > len(self.listed)

    def indices(self) -> list[CharIndex]:
        return [CharIndex(self.mode, m) for m in self.listed]

    def novel(self) -> list[CharIndex]:
        return [i for i in self.indices() if i.novel]

    def battery(self) -> list[CharIndex]:
        """Nonzero indices that are counted invariants: novel ones and depth-2 ones."""
        return [i for i in self.indices() if i.novel or is_ak_index(i)]


DEFAULT_CAP = 1 << 20


def enumerate_odd_subsets(masks: Sequence[int], mode: Mode, cap: int = DEFAULT_CAP) -> tuple[int, list[int]]:
    return _kernels.odd_subsets(list(masks), mode.universe, mode.n_mask, cap)


def nonzero_char_numbers(L, mode: Mode = Mode.EXTENDED, cap: int = DEFAULT_CAP) -> NonzeroSet:
    prof = _as_profile(L, mode)
    if prof.mode is not mode:
        prof = BaseProfile(**{**prof.__dict__, "mode": mode})
    odd = prof.odd_masks()
    count, listed = enumerate_odd_subsets(odd, mode, cap)
    return NonzeroSet(mode, count, listed, cap, odd)


@dataclass
class LinkReport:
    euler: dict[str, bool]
    integral: bool
    parities: dict[str, int] | None
    nonzero: dict[str, NonzeroSet]
    notes: list[str]

    @property
    def passes(self) -> bool:
        if not all(self.euler.values()) or not self.integral or self.parities is None:
            return False
        if any(self.parities[k] for k in ["chi"] + AK_NAMES):
            return False
        return all(ns.count == 0 for ns in self.nonzero.values())


def link_report(L: Complex, modes: Sequence[Mode] = (Mode.BASE, Mode.EXTENDED),
                cap: int = DEFAULT_CAP) -> LinkReport:
    prof = base_profile(L, Mode.EXTENDED)
    cond = euler_conditions(prof)
    notes = list(prof.notes)
    if not all(cond.values()) or not prof.integral:
        return LinkReport(cond, prof.integral, None, {}, notes)
    par = ak_numbers(prof)
    nz = {m.value: nonzero_char_numbers(prof, m, cap) for m in modes}
    return LinkReport(cond, True, par, nz, notes)


@dataclass
class SpaceReport:
    dim: int
    passes: bool
    euler: dict[str, bool] | None = None
    failures: list[dict] = field(default_factory=list)
    checked: int = 0


def check_space(X: Complex, cap: int = DEFAULT_CAP) -> SpaceReport:
    """Euler conditions for dim <= 3, the full link battery at every simplex for dim 4."""
    if X.dim > 4:
        raise ComplexError(f"dimension {X.dim} exceeds 4")
    if X.dim <= 3:
        cond = euler_conditions(base_profile(X))
        return SpaceReport(X.dim, all(cond.values()), cond, [], 1)
    fails = []
    for s in X.simplices:
        rep = link_report(geometric_link(X, s), cap=cap)
        if not rep.passes:
            entry = {"simplex": list(s), "euler": rep.euler, "parities": rep.parities,
                     "nonzero": {k: [i.to_string() for i in v.indices()] for k, v in rep.nonzero.items()}}
            fails.append(entry)
    return SpaceReport(X.dim, not fails, None, fails, len(X))
