"""``tfp`` command-line front end.

Exit status: 0 success, 1 failed verdict or computation, 2 usage or parse
error. Polynomials are printed one per line, sorted by multidegree, then by
leading monomial under the relevant term order, then by text.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .groebner import (
    NO_LIMITS, ComputeLimits, LimitExceeded, buchberger, is_groebner, standard_monomial_table,
)
from .models import (
    FiniteGroup, RootedTree, SimplicialComplex, chain_generators, group_based_map,
    group_ideal_via_tfp, hidden_map, hierarchical_map, model_ideal_via_tfp,
    segre_flattening_minors, segre_map, segre_via_tfp,
)
from .oracle import PolynomialMap, contract, kernel
from .poly import (
    MultiGrading, ParseError, Polynomial, PolyError, RingSpec, TermOrder, multidegree,
    parse_polynomial, variables_in,
)
from .tfp import (
    NoPositivityCertificate, TfpSpec, hadamard_hilbert, lift, phi_B, quad_B, tfp_generators,
    tfp_weight, validate_spec,
)
from .verify import ConfigError, run_suite

log = logging.getLogger("toricfp")


class UsageError(Exception):
    pass


# -- spec files ------------------------------------------------------------

SECTIONS = ("grading", "sizes", "ideal I", "ideal J", "weights", "map")


@dataclass
class SpecFile:
    A: List[List[int]] = field(default_factory=list)
    s: Optional[List[int]] = None
    t: Optional[List[int]] = None
    I: List[str] = field(default_factory=list)
    J: List[str] = field(default_factory=list)
    w1: Optional[List[int]] = None
    w2: Optional[List[int]] = None
    map: List[Tuple[str, str]] = field(default_factory=list)


def _int_list(text: str, where: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"{where}: expected integers, got {text!r}") from None


def _key_value(line: str, keys: Sequence[str], where: str) -> Tuple[str, str]:
    if ":" not in line:
        raise ParseError(f"{where}: expected 'key: value'")
    k, v = line.split(":", 1)
    k = k.strip()
    if k not in keys:
        raise ParseError(f"{where}: unknown key {k!r}")
    return k, v


def parse_spec_text(text: str, name: str = "<spec>") -> SpecFile:
    out = SpecFile()
    section = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{name}:{n}"
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(f"{where}: unterminated section header")
            section = " ".join(line[1:-1].split())
            if section not in SECTIONS:
                raise ParseError(f"{where}: unknown section [{section}]")
            continue
        if section is None:
            raise ParseError(f"{where}: content before the first section")
        if section == "grading":
            out.A.append(_int_list(line, where))
        elif section == "sizes":
            k, v = _key_value(line, ("s", "t"), where)
            setattr(out, k, _int_list(v, where))
        elif section == "weights":
            k, v = _key_value(line, ("w1", "w2"), where)
            setattr(out, k, _int_list(v, where))
        elif section == "ideal I":
            out.I.append(line)
        elif section == "ideal J":
            out.J.append(line)
        else:
            if "=" not in line:
                raise ParseError(f"{where}: expected 'var = polynomial'")
            lhs, rhs = line.split("=", 1)
            out.map.append((lhs.strip(), rhs.strip()))
    return out


def read_spec(path: str) -> SpecFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spec_text(text, path)


def spec_of(sf: SpecFile) -> TfpSpec:
    if not sf.A:
        raise ParseError("spec has no [grading] rows")
    if sf.s is None or sf.t is None:
        raise ParseError("spec needs s: and t: in [sizes]")
    return validate_spec(sf.A, sf.s, sf.t)


def ideals_of(sf: SpecFile, spec: TfpSpec) -> Tuple[List[Polynomial], List[Polynomial]]:
    I = [parse_polynomial(p, spec.x_ring) for p in sf.I]
    J = [parse_polynomial(p, spec.y_ring) for p in sf.J]
    return I, J


def map_of(sf: SpecFile) -> PolynomialMap:
    if not sf.map:
        raise ParseError("spec has no [map] lines")
    source = RingSpec(lhs for lhs, _ in sf.map)
    seen: Dict[str, None] = {}
    for _, rhs in sf.map:
        for v in variables_in(rhs):
            seen.setdefault(v, None)
    target = RingSpec(sorted(seen, key=_natural))
    return PolynomialMap(source, target, tuple(parse_polynomial(rhs, target) for _, rhs in sf.map))


def _natural(name: str):
    tag, _, rest = name.partition("_")
    return (tag, tuple(int(x) for x in rest.split("_")) if rest else ())


# -- output ----------------------------------------------------------------

def sort_polys(polys: Sequence[Polynomial], order: TermOrder,
               grading: Optional[MultiGrading] = None) -> List[Polynomial]:
    def key(p):
        deg = multidegree(p, grading) if grading is not None else (p.degree(),)
        return (deg, order.key(p.leading(order)[0]), p.to_str(order))
    return sorted((p for p in polys if p), key=key)


def emit(polys: Sequence[Polynomial], order: TermOrder, out,
         grading: Optional[MultiGrading] = None):
    for p in sort_polys(polys, order, grading):
        print(p.to_str(order), file=out)


def limits_from_env() -> ComputeLimits:
    text = os.environ.get("TFP_LIMITS", "").strip()
    if not text:
        return NO_LIMITS
    try:
        return ComputeLimits.parse(text)
    except ValueError:
        raise UsageError(f"bad TFP_LIMITS {text!r}; expected maxdeg,maxsize,maxred") from None


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _facets(text: str) -> SimplicialComplex:
    """``"12,23"`` or ``"1-2,2-3"`` (dashes needed for vertices above 9)."""
    fs = []
    for block in text.split(","):
        block = block.strip()
        if not block:
            continue
        parts = block.split("-") if "-" in block else list(block)
        try:
            fs.append([int(x) for x in parts])
        except ValueError:
            raise UsageError(f"bad facet {block!r}") from None
    return SimplicialComplex(fs)


def _weights(sf: SpecFile, spec: TfpSpec) -> Tuple[TermOrder, TermOrder]:
    """Component term orders: the given weights refined by grevlex, or
    plain grevlex when a weight is absent."""
    out = []
    for label, w, ring in (("w1", sf.w1, spec.x_ring), ("w2", sf.w2, spec.y_ring)):
        if w is not None and len(w) != len(ring):
            raise ParseError(f"{label} needs {len(ring)} entries")
        out.append(TermOrder([w] if w is not None else [], "grevlex"))
    return out[0], out[1]


# -- commands --------------------------------------------------------------

def cmd_validate(args, out) -> int:
    sf = read_spec(args.spec)
    spec = spec_of(sf)
    print(f"r: {spec.r}", file=out)
    print("s: " + ",".join(map(str, spec.s)), file=out)
    print("t: " + ",".join(map(str, spec.t)), file=out)
    print("omega: " + ",".join(str(w) for w in spec.omega), file=out)
    print(f"grading: {'INDEPENDENT' if spec.independent else 'DEPENDENT'}", file=out)
    I, J = ideals_of(sf, spec)
    for label, polys, grading in (("I", I, spec.x_grading), ("J", J, spec.y_grading)):
        for p in polys:
            if p:
                multidegree(p, grading)
        if polys:
            print(f"ideal {label}: {len(polys)} homogeneous generators", file=out)
    return 0


def _spec_from_flags(args) -> TfpSpec:
    if args.spec:
        return spec_of(read_spec(args.spec))
    if args.r is None or args.s is None or args.t is None:
        raise UsageError("give --spec or all of --r, --s, --t")
    s, t = _ints(args.s), _ints(args.t)
    if len(s) == 1 and args.r > 1:
        s = s * args.r
    if len(t) == 1 and args.r > 1:
        t = t * args.r
    A = [[int(a == b) for b in range(args.r)] for a in range(args.r)]
    return validate_spec(A, s, t)


def cmd_quad(args, out) -> int:
    spec = _spec_from_flags(args)
    emit(quad_B(spec), tfp_weight(None, None, spec), out, spec.z_grading)
    return 0


def cmd_lift(args, out) -> int:
    sf = read_spec(args.spec)
    spec = spec_of(sf)
    I, J = ideals_of(sf, spec)
    polys = [q for f in I + J if f for q in lift(f, spec)]
    w1, w2 = _weights(sf, spec)
    emit(polys, tfp_weight(w1, w2, spec), out, spec.z_grading)
    return 0


def cmd_product(args, out) -> int:
    sf = read_spec(args.spec)
    spec = spec_of(sf)
    I, J = ideals_of(sf, spec)
    w1, w2 = _weights(sf, spec)
    order = tfp_weight(w1, w2, spec)
    gens = tfp_generators(I, J, spec)
    emit(gens, order, out, spec.z_grading)
    if args.check_groebner:
        ok = is_groebner(gens, order)
        print(f"groebner: {'PASS' if ok else 'FAIL'}", file=sys.stderr)
        return 0 if ok else 1
    return 0


def cmd_oracle(args, out, limits) -> int:
    sf = read_spec(args.spec)
    if sf.map:
        phi = map_of(sf)
        gb = kernel(phi, limits)
        emit(gb.generators, gb.order, out)
        return 0
    spec = spec_of(sf)
    I, J = ideals_of(sf, spec)
    xy = spec.xy_ring
    gb = contract(phi_B(spec), [p.embed(xy) for p in I + J], limits)
    emit(gb.generators, gb.order, out, spec.z_grading)
    return 0


def cmd_hilbert(args, out, limits) -> int:
    sf = read_spec(args.spec)
    spec = spec_of(sf)
    I, J = ideals_of(sf, spec)
    order = TermOrder()
    whole = standard_monomial_table(buchberger(tfp_generators(I, J, spec), order, limits),
                                    spec.z_grading, args.bound, spec.z_ring)
    h1 = standard_monomial_table(buchberger(I, order, limits), spec.x_grading, args.bound,
                                 spec.x_ring)
    h2 = standard_monomial_table(buchberger(J, order, limits), spec.y_grading, args.bound,
                                 spec.y_ring)
    had = hadamard_hilbert(h1, h2)
    for u in sorted(set(whole) | set(had), key=lambda u: (sum(u), u)):
        print(f"{','.join(map(str, u))}: {whole.get(u, 0)} {had.get(u, 0)}", file=out)
    ok = whole == had
    print(f"hadamard: {'MATCH' if ok else 'MISMATCH'}", file=out)
    return 0 if ok else 1


def cmd_verify(args, out, limits) -> int:
    report = run_suite(args.suite, limits, args.case or None)
    text = report.to_text(timings=not args.no_timings)
    out.write(text)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    if args.jsonl:
        Path(args.jsonl).write_text(report.to_jsonl(timings=not args.no_timings), encoding="utf-8")
    return 0 if report.ok else 1


def cmd_model(args, out, limits) -> int:
    kind = args.model
    grevlex = TermOrder()
    if kind == "chain":
        d = _ints(args.d)
        if len(d) % 2 == 0 or len(d) < 3:
            raise UsageError("chain needs an odd number (at least 3) of sizes")
        emit(chain_generators((len(d) - 1) // 2, d), grevlex, out)
        return 0
    if kind == "segre":
        d = _ints(args.d)
        if args.via == "minors":
            emit(segre_flattening_minors(d), grevlex, out)
        elif args.via == "oracle":
            gb = kernel(segre_map(d), limits)
            emit(gb.generators, gb.order, out)
        else:
            mi = segre_via_tfp(d, limits)
            emit(mi.generators, mi.order, out)
        return 0
    if kind == "phylo":
        G = FiniteGroup.cyclic(args.group)
        T = RootedTree.parse(args.tree)
        if args.via == "oracle":
            gb = kernel(group_based_map(G, T), limits)
            emit(gb.generators, gb.order, out)
        else:
            mi = group_ideal_via_tfp(G, T, limits)
            emit(mi.generators, mi.order, out)
        return 0
    delta = _facets(args.facets)
    d = _ints(args.d)
    H = _ints(args.hidden) if kind == "hidden" else []
    if kind == "hidden" and not H:
        raise UsageError("hidden needs --hidden")
    if args.via == "oracle":
        phi = hidden_map(delta, d, H) if H else hierarchical_map(delta, d)
        gb = kernel(phi, limits)
        emit(gb.generators, gb.order, out)
    else:
        mi = model_ideal_via_tfp(delta, d, H, limits)
        emit(mi.generators, mi.order, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tfp", description="Toric fiber products of multigraded ideals.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    p.add_argument("-o", "--output", help="write results here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a spec file and report its grading")
    v.add_argument("--spec", required=True)

    q = sub.add_parser("quad", help="print the quadrics of the product map")
    q.add_argument("--spec")
    q.add_argument("--r", type=int)
    q.add_argument("--s", help="sizes, comma separated (one value repeats)")
    q.add_argument("--t", help="sizes, comma separated (one value repeats)")

    l = sub.add_parser("lift", help="print the lifts of the ideal generators in a spec")
    l.add_argument("--spec", required=True)

    pr = sub.add_parser("product", help="print generators of the toric fiber product")
    pr.add_argument("--spec", required=True)
    pr.add_argument("--check-groebner", action="store_true",
                    help="also test the Groebner property under the product order")

    o = sub.add_parser("oracle", help="kernel of a [map], or contraction of I + J by elimination")
    o.add_argument("--spec", required=True)

    h = sub.add_parser("hilbert", help="compare standard-monomial counts with the Hadamard product")
    h.add_argument("--spec", required=True)
    h.add_argument("--bound", type=int, default=4)

    ve = sub.add_parser("verify", help="run a correctness suite")
    ve.add_argument("--suite", help="suite YAML (default: the shipped suite)")
    ve.add_argument("--case", action="append", help="run only this case (repeatable)")
    ve.add_argument("--report", help="also write the text report here")
    ve.add_argument("--jsonl", help="write a line-delimited JSON report here")
    ve.add_argument("--no-timings", action="store_true", help="omit timings from reports")

    m = sub.add_parser("model", help="generators of model ideals")
    msub = m.add_subparsers(dest="model", required=True)
    for name in ("hierarchical", "hidden"):
        mm = msub.add_parser(name)
        mm.add_argument("--facets", required=True, help='e.g. "12,23" or "1-2,2-3"')
        mm.add_argument("--d", required=True)
        if name == "hidden":
            mm.add_argument("--hidden", required=True)
        mm.add_argument("--via", choices=("tfp", "oracle"), default="tfp")
    mc = msub.add_parser("chain")
    mc.add_argument("--d", required=True)
    ms = msub.add_parser("segre")
    ms.add_argument("--d", required=True)
    ms.add_argument("--via", choices=("tfp", "oracle", "minors"), default="tfp")
    mp = msub.add_parser("phylo")
    mp.add_argument("--group", type=int, default=2, help="order of the cyclic group")
    mp.add_argument("--tree", required=True, help='child:parent pairs, e.g. "1:u,2:u,u:v,3:v,v:4"')
    mp.add_argument("--via", choices=("tfp", "oracle"), default="tfp")
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    out = sys.stdout
    handle = None
    try:
        limits = limits_from_env()
        if args.output:
            handle = open(args.output, "w", encoding="utf-8")
            out = handle
        cmd = args.command
        if cmd == "validate":
            return cmd_validate(args, out)
        if cmd == "quad":
            return cmd_quad(args, out)
        if cmd == "lift":
            return cmd_lift(args, out)
        if cmd == "product":
            return cmd_product(args, out)
        if cmd == "oracle":
            return cmd_oracle(args, out, limits)
        if cmd == "hilbert":
            return cmd_hilbert(args, out, limits)
        if cmd == "verify":
            return cmd_verify(args, out, limits)
        return cmd_model(args, out, limits)
    except (UsageError, ParseError, ConfigError) as exc:
        print(f"tfp: error: {exc}", file=sys.stderr)
        return 2
    except LimitExceeded as exc:
        print(f"tfp: limit exceeded: {exc.what}", file=sys.stderr)
        return 1
    except (PolyError, NoPositivityCertificate) as exc:
        print(f"tfp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"tfp: error: {exc}", file=sys.stderr)
        return 2
    finally:
        if handle is not None:
            handle.close()


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
