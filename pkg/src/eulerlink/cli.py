"""Command line front end: complex files, checks, characteristic numbers, witnesses.

Complex files are JSON documents::

    {
      "format": "eulerlink-complex/1",
      "name": "two 3-spheres",
      "labels": {"0": "p"},
      "simplices": [
        [0, 1, 2, 3],
        ...
      ],
      "function": [[[0, 1], "5/2"], ...],
      "metadata": {...}
    }

``simplices`` lists generating simplices (closed downward on load);
``labels``, ``function`` and ``metadata`` are optional.  Function values are
exact strings with power-of-two denominators.

Characteristic-number indices are written ``base:HEX`` or ``extended:HEX``;
bit ``i`` of the mask selects quantity ``i`` of
:data:`eulerlink.invariants.QUANTITY_NAMES` (bits 0-2 are phi, beta, gamma).

Exit codes: 0 success / pass, 1 obstruction found, 2 input error,
3 internal verification failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .confun import (ConstructibleFunction, FunctionError, co_half_link, dyadic, euler_integral, half_link,
                     link_op, link_op_geometric, random_function, support_dim)
from .invariants import (AK_NAMES, DEFAULT_CAP, CharIndex, IndexError_, Mode, char_number, check_space,
                         generator_counts, link_report, nonzero_char_numbers)
from .polyops import (PolynomialError, RationalPolynomial, binomial_decompose, in_script_P,
                      in_script_P_recursive, mod8_reduce)
from .simplicial import Complex, ComplexError, build_complex, product, random_complex
from .witness import WitnessError, generate_witness

FORMAT = "eulerlink-complex/1"

EXIT_OK, EXIT_OBSTRUCTION, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3


class InputError(ValueError):
    """Malformed input file or argument."""


@dataclass
class ComplexFile:
    name: str
    simplices: list[list[int]]
    labels: dict[int, str] = field(default_factory=dict)
    function: dict[tuple[int, ...], object] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def complex(self) -> Complex:
        return build_complex(self.simplices, self.labels, self.name)

    def constructible_function(self) -> ConstructibleFunction | None:
        if not self.function:
            return None
        K = self.complex()
        vals = [0] * len(K)
        for s, v in self.function.items():
            vals[K.locate(s)] = v
        return ConstructibleFunction._raw(K, vals)

    def canonical(self) -> "ComplexFile":
        """Maximal simplices only, in complex order; zero function values dropped."""
        K = self.complex()
        fn = {s: v for s, v in sorted(self.function.items(), key=lambda kv: K.locate(kv[0])) if v}
        return ComplexFile(self.name, [list(s) for s in K.maximal_simplices()], dict(sorted(self.labels.items())),
                           fn, self.metadata)

    @classmethod
    def from_complex(cls, K: Complex, name: str = "", function: ConstructibleFunction | None = None,
                     metadata: dict | None = None) -> "ComplexFile":
        fn = {} if function is None else {s: v for s, v in zip(K.simplices, function.values) if v}
        return cls(name or K.name, [list(s) for s in K.maximal_simplices()], dict(K.labels), fn, metadata or {})


def _where(path: str, key: str, i: int | None = None) -> str:
    return f"{path}: field {key!r}" + ("" if i is None else f" entry {i}")


def parse_complex(text: str, path: str = "<input>") -> ComplexFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise InputError(f"{_where(path, 'format')}: unknown format {fmt!r}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise InputError(f"{_where(path, 'name')}: expected a string")
    simp = doc.get("simplices")
    if not isinstance(simp, list) or not simp:
        raise InputError(f"{_where(path, 'simplices')}: expected a nonempty list of vertex lists")
    for i, s in enumerate(simp):
        if not isinstance(s, list) or not s or not all(type(v) is int and v >= 0 for v in s):
            raise InputError(f"{_where(path, 'simplices', i)}: expected a nonempty list of vertex ids >= 0")
        if len(set(s)) != len(s):
            raise InputError(f"{_where(path, 'simplices', i)}: repeated vertex in {s}")
    labels_raw = doc.get("labels", {})
    if not isinstance(labels_raw, dict):
        raise InputError(f"{_where(path, 'labels')}: expected an object")
    try:
        labels = {int(k): str(v) for k, v in labels_raw.items()}
    except ValueError:
        raise InputError(f"{_where(path, 'labels')}: keys must be vertex ids") from None
    fn_raw = doc.get("function", [])
    if not isinstance(fn_raw, list):
        raise InputError(f"{_where(path, 'function')}: expected a list of [simplex, value] pairs")
    vertices = {v for s in simp for v in s}
    closure = {tuple(sorted(s)) for s in simp}
    function: dict[tuple[int, ...], object] = {}
    for i, entry in enumerate(fn_raw):
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)
                and isinstance(entry[1], (str, int))):
            raise InputError(f"{_where(path, 'function', i)}: expected [[v0, ...], \"value\"]")
        s = tuple(sorted(entry[0]))
        if not s or not set(s) <= vertices or not any(set(s) <= set(t) for t in closure):
            raise InputError(f"{_where(path, 'function', i)}: simplex {list(s)} is not in the complex")
        try:
            function[s] = dyadic(Fraction(entry[1]) if isinstance(entry[1], str) else entry[1])
        except (ValueError, ZeroDivisionError, FunctionError) as exc:
            raise InputError(f"{_where(path, 'function', i)}: {exc}") from None
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise InputError(f"{_where(path, 'metadata')}: expected an object")
    return ComplexFile(name, [list(s) for s in simp], labels, function, meta)


def serialize_complex(cf: ComplexFile) -> str:
    """Canonical text: one simplex per line so witness files diff cleanly."""
    cf = cf.canonical()
    lines = ["{", f'  "format": {json.dumps(FORMAT)},', f'  "name": {json.dumps(cf.name)},']
    if cf.labels:
        lines.append(f'  "labels": {json.dumps({str(k): v for k, v in cf.labels.items()})},')
    lines.append('  "simplices": [')
    lines.append(",\n".join("    " + json.dumps(s) for s in cf.simplices))
    lines.append("  ]" + ("," if cf.function or cf.metadata else ""))
    if cf.function:
        lines.append('  "function": [')
        lines.append(",\n".join(f"    [{json.dumps(list(s))}, {json.dumps(str(v))}]" for s, v in cf.function.items()))
        lines.append("  ]" + ("," if cf.metadata else ""))
    if cf.metadata:
        lines.append(f'  "metadata": {json.dumps(cf.metadata, sort_keys=True)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_complex(path: str) -> ComplexFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return parse_complex(text, path)


def _index(text: str) -> CharIndex:
    try:
        return CharIndex.parse(text)
    except IndexError_ as exc:
        raise InputError(str(exc)) from None


def _nonzero_doc(ns) -> dict:
    return {"count": ns.count, "truncated": ns.truncated, "cap": ns.cap,
            "indices": [i.to_string() for i in ns.indices()],
            "counted": [i.to_string() for i in ns.battery()],
            "odd_vertex_masks": [f"{m:x}" for m in ns.odd_masks]}


def _complex_doc(K: Complex, cf: ComplexFile) -> dict:
    return {"name": cf.name, "dim": K.dim, "f_vector": K.f_vector()}


# ------------------------------------------------------------------ commands

def cmd_check(args) -> tuple[dict, int]:
    cf = load_complex(args.file)
    K = cf.complex()
    if K.dim > 4:
        raise InputError(f"{args.file}: dimension {K.dim} exceeds 4")
    mode = Mode(args.mode)
    report: dict = {"complex": _complex_doc(K, cf), "mode": mode.value}
    failures: list[str] = []
    if K.dim <= 3:
        rep = link_report(K, modes=(mode,), cap=args.cap)
        report["euler"] = rep.euler
        report["integral"] = rep.integral
        failures += [f"euler:{k}" for k, ok in rep.euler.items() if not ok]
        if not rep.integral and all(rep.euler.values()):
            failures.append("integrality")
        if rep.parities is not None:
            report["parities"] = rep.parities
            failures += [f"parity:{k}" for k in ["chi"] + AK_NAMES if rep.parities[k]]
        if rep.nonzero:
            ns = rep.nonzero[mode.value]
            report["nonzero"] = _nonzero_doc(ns)
            failures += [f"charnum:{i.to_string()}" for i in ns.indices()]
            if ns.truncated:
                failures.append(f"charnum:truncated at {ns.cap} of {ns.count}")
        report["notes"] = rep.notes
        passes = rep.passes
    else:
        sp = check_space(K, cap=args.cap)
        report["simplices_checked"] = sp.checked
        report["failing_simplices"] = sp.failures
        failures += [f"link:{s['simplex']}" for s in sp.failures]
        passes = sp.passes
    report["failures"] = failures
    report["verdict"] = "pass" if passes else "obstruction"
    return report, EXIT_OK if passes else EXIT_OBSTRUCTION


def cmd_charnum(args) -> tuple[dict, int]:
    cf = load_complex(args.file)
    K = cf.complex()
    if K.dim > 3:
        raise InputError(f"{args.file}: characteristic numbers need a complex of dimension <= 3")
    idx = _index(args.index)
    report = {"complex": _complex_doc(K, cf), "index": idx.to_string(), "factors": idx.factors()}
    try:
        report["value"] = char_number(K, idx)
    except ValueError as exc:
        report["value"] = None
        report["reason"] = str(exc)
        return report, EXIT_OBSTRUCTION
    return report, EXIT_OK


def cmd_charnums(args) -> tuple[dict, int]:
    cf = load_complex(args.file)
    K = cf.complex()
    if K.dim > 3:
        raise InputError(f"{args.file}: characteristic numbers need a complex of dimension <= 3")
    mode = Mode(args.mode)
    report = {"complex": _complex_doc(K, cf), "mode": mode.value}
    try:
        ns = nonzero_char_numbers(K, mode, args.cap)
    except ValueError as exc:
        report["reason"] = str(exc)
        return report, EXIT_OBSTRUCTION
    report["nonzero"] = _nonzero_doc(ns)
    if ns.truncated:
        report["notice"] = f"listing truncated at {ns.cap} of {ns.count} nonzero indices"
    return report, EXIT_OK


def cmd_witness(args) -> tuple[dict, int]:
    target = args.index.strip()
    if target.lower() != "chi":
        target = _index(target)
    try:
        W = generate_witness(target)
    except WitnessError as exc:
        return {"index": str(target), "error": str(exc)}, EXIT_VERIFY
    except ValueError as exc:
        raise InputError(str(exc)) from None
    index = "chi" if W.index is None else W.index.to_string()
    meta = {"index": index, "provenance": W.provenance, "verification": W.verification}
    cf = ComplexFile.from_complex(W.complex, name=f"witness {index}", metadata=meta)
    report = {"index": index, "f_vector": W.complex.f_vector(), "provenance": W.provenance,
              "verification": W.verification}
    if args.output:
        Path(args.output).write_text(serialize_complex(cf))
        report["output"] = args.output
    return report, EXIT_OK


def cmd_poly(args) -> tuple[dict, int]:
    try:
        P = RationalPolynomial.parse(args.coeffs)
    except PolynomialError as exc:
        raise InputError(str(exc)) from None
    report: dict = {"polynomial": P.format(), "action": args.action}
    if args.action == "check":
        fast, slow = in_script_P(P), in_script_P_recursive(P)
        if fast != slow:
            report["error"] = "binomial and recursive membership tests disagree"
            return report, EXIT_VERIFY
        report["in_ring"] = fast
        return report, EXIT_OK
    try:
        n = binomial_decompose(P)
        if args.action == "decompose":
            report["binomial_coordinates"] = n
            report["required_divisors"] = [1 << (p // 2) for p in range(len(n))]
            report["in_ring"] = in_script_P(P)
        else:
            coords, residual = mod8_reduce(P)
            report["generators"] = ["1", "t", "t^2-t", "t^3-t", "P4", "P5"]
            report["coordinates"] = coords
            report["residual"] = residual.format()
            report["residual_binomial_coordinates"] = binomial_decompose(residual)
    except PolynomialError as exc:
        raise InputError(str(exc)) from None
    return report, EXIT_OK


# ------------------------------------------------------------------ self test

def _operator_suite(rng: random.Random, size: int) -> list[str]:
    bad = []
    for trial in range(size):
        K = random_complex(rng, max_simplices=300, max_dim=rng.randint(0, 4))
        f = random_function(K, rng)
        L, H, O = link_op(f), half_link(f), co_half_link(f)
        checks = {
            "LL=2L": link_op(L) == L * 2,
            "H+O=I": H + O == f,
            "HH=H": half_link(H) == H,
            "OO=O": co_half_link(O) == O,
            "HO=0": not any(half_link(O).values),
            "OH=0": not any(co_half_link(H).values),
            "int H=0": euler_integral(H) == 0,
            "int O=int": euler_integral(O) == euler_integral(f),
        }
        bad += [f"{name} (trial {trial})" for name, ok in checks.items() if not ok]
    return bad


def _oracle_suite(rng: random.Random, size: int) -> list[str]:
    bad = []
    for trial in range(size):
        K = random_complex(rng, max_simplices=200, max_dim=rng.randint(0, 4))
        f = random_function(K, rng)
        if link_op(f) != link_op_geometric(f):
            bad.append(f"closed form differs from geometric link (trial {trial})")
    return bad


def _support_suite(rng: random.Random, size: int) -> list[str]:
    bad = []
    for trial in range(size):
        K = random_complex(rng, max_simplices=300, max_dim=rng.randint(0, 4))
        f = random_function(K, rng)
        d = support_dim(f)
        if d >= 0 and d % 2 == 0 and support_dim(half_link(f)) > d - 1:
            bad.append(f"half_link support (trial {trial})")
        if d >= 0 and d % 2 == 1 and support_dim(co_half_link(f)) > d - 1:
            bad.append(f"co_half_link support (trial {trial})")
    return bad


def slice_check(K: Complex, f: ConstructibleFunction) -> bool:
    """Lift ``f`` to K x [-1, 1] and compare on the middle slice."""
    interval = build_complex([(0, 1), (1, 2)])
    P, vid = product(K, interval)
    owner = {w: a for (a, _), w in vid.items()}
    lift = ConstructibleFunction._raw(P, [f[tuple(sorted({owner[w] for w in s}))] for s in P.simplices])
    hl, chl = half_link(lift), co_half_link(lift)
    H, O = half_link(f), co_half_link(f)
    for i, s in enumerate(K.simplices):
        j = P.locate([vid[(a, 1)] for a in s])
        if hl.values[j] != O.values[i] or chl.values[j] != H.values[i]:
            return False
    return True


def _slice_suite(rng: random.Random, size: int) -> list[str]:
    bad = []
    for trial in range(size):
        K = random_complex(rng, max_simplices=60, max_dim=rng.randint(0, 3))
        if not slice_check(K, random_function(K, rng)):
            bad.append(f"slice identity (trial {trial})")
    return bad


def _poly_suite(rng: random.Random, size: int) -> list[str]:
    bad = []
    for trial in range(size):
        deg = rng.randint(0, 8)
        P = RationalPolynomial(Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4, 8))) for _ in range(deg + 1))
        if in_script_P(P) != in_script_P_recursive(P):
            bad.append(f"membership tests disagree on {P.format()}")
    return bad


def _count_suite() -> list[str]:
    bad = []
    for mode, total in ((Mode.BASE, 2 ** 29 - 29), (Mode.EXTENDED, 2 ** 43 - 43)):
        if generator_counts(mode)["total"] != total:
            bad.append(f"{mode.value} invariant count")
    return bad


def cmd_selftest(args) -> tuple[dict, int]:
    rng = random.Random(args.seed)
    n = args.size
    suites = {
        "operator identities": lambda: _operator_suite(rng, n),
        "link oracle": lambda: _oracle_suite(rng, max(1, n // 5)),
        "support": lambda: _support_suite(rng, n),
        "slice": lambda: _slice_suite(rng, max(1, n // 10)),
        "polynomial membership": lambda: _poly_suite(rng, 20 * n),
        "invariant counts": _count_suite,
    }
    results = {}
    for name, run in suites.items():
        bad = run()
        results[name] = {"passed": not bad, "failures": bad[:20]}
    ok = all(r["passed"] for r in results.values())
    return {"size": n, "seed": args.seed, "suites": results, "verdict": "pass" if ok else "fail"}, \
        EXIT_OK if ok else EXIT_VERIFY


# ------------------------------------------------------------------ entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eulerlink", description="Local obstructions to algebraicity of polyhedra.")
    ap.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="euler conditions and characteristic numbers of a complex")
    p.add_argument("file")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.EXTENDED.value)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum nonzero indices listed")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("charnum", help="one characteristic number")
    p.add_argument("file")
    p.add_argument("--index", required=True, help="base:HEX or extended:HEX")
    p.set_defaults(run=cmd_charnum)

    p = sub.add_parser("charnums", help="all nonzero characteristic numbers")
    p.add_argument("file")
    p.add_argument("--nonzero", action="store_true", required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.EXTENDED.value)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(run=cmd_charnums)

    p = sub.add_parser("witness", help="build a verified witness complex")
    p.add_argument("--index", required=True, help="base:HEX, extended:HEX or chi")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_witness)

    p = sub.add_parser("poly", help="polynomial operator ring")
    p.add_argument("action", choices=["check", "decompose", "mod8"])
    p.add_argument("coeffs", help='coefficients low degree first, e.g. "0,0,-1/2,0,1/2"')
    p.set_defaults(run=cmd_poly)

    p = sub.add_parser("selftest", help="run the property suites on random corpora")
    p.add_argument("--size", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        report, code = args.run(args)
    except (InputError, ComplexError) as exc:
        print(f"eulerlink: {exc}", file=sys.stderr)
        return EXIT_INPUT
    body = {"command": argv, **report}
    if args.timing:
        body["seconds"] = round(time.perf_counter() - start, 3)
    print(json.dumps(body, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
