"""Correctness suite: constructions checked against the elimination oracle.

A case names a recipe (what to build) and the checks to run on it. Every
check yields ``pass``, ``fail`` (with a witness that replays standalone) or
``skipped``; a failing check never stops the suite.
"""
from __future__ import annotations

import json
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import yaml

from .groebner import (
    NO_LIMITS, ComputeLimits, GroebnerBasis, LimitExceeded, buchberger, groebner_witness,
    ideal_difference, ideal_subset, initial_forms, refine, standard_monomial_table,
)
from .models import (
    FiniteGroup, ModelIdeal, RootedTree, SimplicialComplex, chain, chain_generators,
    group_based_map, group_ideal_via_tfp, hidden_map, hierarchical_map, model_ideal_via_tfp,
    segre_flattening_minors, segre_map, segre_via_tfp,
)
from .oracle import PolynomialMap, contract, kernel
from .poly import Polynomial, PolyError, RingSpec, TermOrder, var_name
from .tfp import (
    DependentGrading, TfpSpec, contract_principal_monomial, hadamard_hilbert, lift,
    lift_monomial_factor, lift_pairs, phi_B, quad_B, stage1_weight, tfp_generators, tfp_weight,
    validate_spec,
)

log = logging.getLogger(__name__)

CHECKS = ("ideal-equality", "pseudo-groebner", "groebner", "hilbert-hadamard", "squarefree",
          "membership")
PROPERTY_CHECKS = ("ideal-equality", "pseudo-groebner", "groebner", "containment", "splitting",
                   "lift-identity")

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


class ConfigError(ValueError):
    pass


@dataclass
class CaseSpec:
    name: str
    recipe: Dict
    checks: Tuple[str, ...] = CHECKS
    limits: ComputeLimits = NO_LIMITS


@dataclass
class CheckResult:
    check: str
    verdict: str
    seconds: float = 0.0
    witness: Optional[str] = None
    detail: str = ""


@dataclass
class Report:
    name: str
    results: List[CheckResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(r.verdict == FAIL for r in self.results)


@dataclass
class SuiteReport:
    cases: List[Report] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(c.failed for c in self.cases)

    def to_text(self, timings: bool = True) -> str:
        lines = []
        for c in self.cases:
            for n in c.notes:
                lines.append(f"{c.name}: note: {n}")
            for r in c.results:
                t = f" ({r.seconds:.2f}s)" if timings else ""
                line = f"{c.name}: {r.check}: {r.verdict.upper()}{t}"
                if r.detail:
                    line += f" - {r.detail}"
                if r.witness:
                    line += f" witness: {r.witness}"
                lines.append(line)
        fails = sum(r.verdict == FAIL for c in self.cases for r in c.results)
        skips = sum(r.verdict == SKIPPED for c in self.cases for r in c.results)
        lines.append(f"suite: {'PASS' if self.ok else 'FAIL'} "
                     f"({len(self.cases)} cases, {fails} failed, {skips} skipped)")
        return "\n".join(lines) + "\n"

    def to_jsonl(self, timings: bool = True) -> str:
        out = []
        for c in self.cases:
            for r in c.results:
                rec = {"case": c.name, "check": r.check, "verdict": r.verdict,
                       "witness": r.witness, "detail": r.detail}
                if timings:
                    rec["seconds"] = round(r.seconds, 4)
                out.append(json.dumps(rec, sort_keys=True))
            if c.notes:
                out.append(json.dumps({"case": c.name, "notes": c.notes}, sort_keys=True))
        return "\n".join(out) + ("\n" if out else "")


# -- pseudo-Groebner check -------------------------------------------------

def check_pseudo_groebner(gset: Sequence[Polynomial], oracle_gb: GroebnerBasis, stage1,
                          limits: ComputeLimits = NO_LIMITS) -> CheckResult:
    """Do the ``stage1``-initial forms of ``gset`` generate the initial ideal
    of the oracle ideal? The oracle side is first turned into a Groebner
    basis for an order refining ``stage1``, whose initial forms generate it."""
    t0 = time.perf_counter()
    gset = [g for g in gset if g]
    ring = gset[0].ring if gset else oracle_gb.ring
    if ring is None:
        return CheckResult("pseudo-groebner", PASS, 0.0, detail="both ideals are zero")
    order = refine(stage1, len(ring), "grevlex")
    try:
        full = oracle_gb if oracle_gb.order == order else buchberger(oracle_gb.generators, order,
                                                                     limits)
        diff = ideal_difference(initial_forms(gset, stage1),
                                initial_forms(full.generators, stage1), order, limits)
    except LimitExceeded as exc:
        return CheckResult("pseudo-groebner", SKIPPED, time.perf_counter() - t0,
                           detail=f"limit exceeded: {exc.what}")
    dt = time.perf_counter() - t0
    if diff is None:
        return CheckResult("pseudo-groebner", PASS, dt)
    side, w = diff
    what = ("initial form outside the oracle initial ideal" if side == "A"
            else "oracle initial form not generated")
    return CheckResult("pseudo-groebner", FAIL, dt, str(w), what)


# -- constructions ---------------------------------------------------------

@dataclass
class Construction:
    """What a recipe builds, plus what its checks compare against."""

    generators: List[Polynomial]
    order: TermOrder
    ring: RingSpec
    parametrization: Optional[PolynomialMap] = None
    oracle: Optional[Callable[[], GroebnerBasis]] = None
    references: Dict[str, List[Polynomial]] = field(default_factory=dict)
    stage1: Optional[list] = None
    model: Optional[ModelIdeal] = None
    notes: List[str] = field(default_factory=list)
    skip: Dict[str, str] = field(default_factory=dict)


def _ints(v) -> List[int]:
    if isinstance(v, str):
        return [int(x) for x in v.replace(" ", "").split(",") if x]
    if isinstance(v, int):
        return [v]
    return [int(x) for x in v]


def _identity(r: int) -> List[List[int]]:
    return [[int(a == b) for b in range(r)] for a in range(r)]


def _model_stage1(mi: ModelIdeal) -> Optional[list]:
    """Pulled-back component orders (without the Quad_B correction) on the
    full ring, for glued model ideals."""
    if mi.split is None:
        return None
    ps = mi.split
    a, b = mi.parts
    stack = stage1_weight(ps.x_order(a.order), ps.y_order(b.order), ps.spec)
    inv = {v: k for k, v in ps.z_names.items()}
    zi = ps.spec.z_ring.index
    return [tuple(w[zi[inv[n]]] for n in ps.full_ring.names) for w in stack]


def _from_model(mi: ModelIdeal, phi: PolynomialMap, limits, with_oracle=True) -> Construction:
    return Construction(mi.generators, mi.order, mi.ring, phi,
                        (lambda: kernel(phi, limits)) if with_oracle else None,
                        stage1=_model_stage1(mi), model=mi)


def build(recipe: Dict, limits: ComputeLimits = NO_LIMITS) -> Construction:
    kind = recipe.get("kind")
    if kind == "quad":
        r = int(recipe["r"])
        spec = validate_spec(recipe.get("A", _identity(r)), _ints(recipe["s"]), _ints(recipe["t"]))
        phi = phi_B(spec)
        return Construction(quad_B(spec), tfp_weight(None, None, spec), spec.z_ring, phi,
                            lambda: kernel(phi, limits), stage1=[])
    if kind == "segre":
        d = _ints(recipe["d"])
        c = _from_model(segre_via_tfp(d, limits), segre_map(d), limits)
        c.references["flattening minors"] = segre_flattening_minors(d)
        return c
    if kind == "hierarchical":
        delta = SimplicialComplex(recipe["facets"])
        d = _ints(recipe["d"])
        return _from_model(model_ideal_via_tfp(delta, d, (), limits), hierarchical_map(delta, d),
                           limits)
    if kind == "hidden":
        delta = SimplicialComplex(recipe["facets"])
        d, H = _ints(recipe["d"]), _ints(recipe["hidden"])
        return _from_model(model_ideal_via_tfp(delta, d, H, limits), hidden_map(delta, d, H),
                           limits, recipe.get("oracle", True))
    if kind == "chain":
        n, d = int(recipe["n"]), _ints(recipe["d"])
        H = list(range(2, 2 * n + 1, 2))
        c = _from_model(model_ideal_via_tfp(chain(n), d, H, limits), hidden_map(chain(n), d, H),
                        limits, bool(recipe.get("oracle", False)))
        c.references["chain minors"] = chain_generators(n, d)
        if c.oracle is None:
            c.skip["pseudo-groebner"] = "oracle elimination not requested"
        return c
    if kind == "phylo":
        G = FiniteGroup.cyclic(int(recipe.get("group", 2)))
        T = RootedTree.parse(recipe["tree"])
        return _from_model(group_ideal_via_tfp(G, T, limits), group_based_map(G, T), limits)
    if kind == "three_cycle":
        return _three_cycle(_ints(recipe.get("d", [2, 2, 2])), limits)
    raise ConfigError(f"unknown recipe kind {kind!r}")


def three_cycle_spec(d: Sequence[int]) -> Tuple[TfpSpec, List[Tuple[int, int]]]:
    """Grading ``e_{i1} + e_{i2}`` on classes ``(i1, i2)``, with ``s`` counting
    ``i3`` and ``t = 1``."""
    d1, d2, d3 = d
    classes = [(a, b) for a in range(1, d1 + 1) for b in range(1, d2 + 1)]
    A = [[int(a == row) for a, _ in classes] for row in range(1, d1 + 1)]
    A += [[int(b == row) for _, b in classes] for row in range(1, d2 + 1)]
    return validate_spec(A, [d3] * len(classes), [1] * len(classes)), classes


def _three_cycle(d, limits) -> Construction:
    spec, classes = three_cycle_spec(d)
    delta = SimplicialComplex([[1, 2], [1, 3], [2, 3]])
    phi = hierarchical_map(delta, d)
    notes = []
    skip = {}
    if spec.independent:
        raise ConfigError("three-cycle grading unexpectedly independent")
    notes.append("grading: DEPENDENT")
    # the factor ideal: kernel of q_{i1 i2 i3} -> b_{i1 i3} c_{i2 i3}
    psi = hierarchical_map(SimplicialComplex([[1, 3], [2, 3]]), d)
    cls = {c: i for i, c in enumerate(classes, start=1)}
    rename = {var_name("p", (a, b, k)): var_name("x", (cls[a, b], k))
              for a, b in classes for k in range(1, d[2] + 1)}
    I = [g.rename(rename, spec.x_ring) for g in kernel(psi, limits).generators]
    try:
        tfp_generators(I, [], spec)
        notes.append("construction accepted a dependent grading")
    except DependentGrading:
        skip["*"] = "dependent grading refused by the construction"
    gb = kernel(phi, limits)
    notes.append(f"oracle kernel: {len(gb)} generators, degrees "
                 f"{sorted({g.degree() for g in gb.generators})}")
    return Construction(list(gb.generators), gb.order, phi.source, phi, None, notes=notes, skip=skip)


# -- checks ----------------------------------------------------------------

def _timed(name: str, fn: Callable[[], CheckResult]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        res = fn()
    except LimitExceeded as exc:
        res = CheckResult(name, SKIPPED, detail=f"limit exceeded: {exc.what}")
    res.seconds = time.perf_counter() - t0
    return res


def _check_ideal_equality(c: Construction, oracle_gb, limits) -> CheckResult:
    refs = []
    if oracle_gb is not None:
        refs.append(("oracle", oracle_gb.generators))
    refs += list(c.references.items())
    if not refs:
        return CheckResult("ideal-equality", SKIPPED, detail="nothing to compare against")
    for label, ref in refs:
        diff = ideal_difference(c.generators, ref, TermOrder(), limits)
        if diff is not None:
            side, w = diff
            what = (f"generator outside the {label} ideal" if side == "A"
                    else f"{label} generator not generated")
            return CheckResult("ideal-equality", FAIL, witness=str(w), detail=what)
    return CheckResult("ideal-equality", PASS, detail="vs " + ", ".join(l for l, _ in refs))


def _check_groebner(c: Construction) -> CheckResult:
    w = groebner_witness(c.generators, c.order)
    if w is None:
        return CheckResult("groebner", PASS)
    return CheckResult("groebner", FAIL, witness=w.to_str(c.order),
                       detail="S-polynomial with nonzero remainder")


def _check_squarefree(c: Construction, limits) -> CheckResult:
    gb = buchberger(c.generators, c.order, limits)
    for m in gb.leading_monomials():
        if any(e > 1 for e in m):
            mono = Polynomial(c.ring, {m: Fraction(1)}, _trusted=True)
            return CheckResult("squarefree", FAIL, witness=str(mono),
                               detail="initial ideal has a non-squarefree generator")
    return CheckResult("squarefree", PASS, detail=f"{len(gb)} leading monomials")


def _check_membership(c: Construction) -> CheckResult:
    if c.parametrization is None:
        return CheckResult("membership", SKIPPED, detail="no parametrization")
    for g in c.generators:
        if c.parametrization.apply(g):
            return CheckResult("membership", FAIL, witness=str(g),
                               detail="generator does not vanish on the parametrization")
    return CheckResult("membership", PASS, detail=f"{len(c.generators)} generators vanish")


def hilbert_tables(mi: ModelIdeal, bound: int, limits: ComputeLimits = NO_LIMITS):
    """Standard-monomial counts of the glued ideal and the Hadamard product
    of its two parts, all graded by the top-level split."""
    ps = mi.split
    a, b = mi.parts
    spec = ps.spec
    inv = {v: k for k, v in ps.z_names.items()}
    zgens = [g.rename(inv, spec.z_ring) for g in mi.generators]
    order = TermOrder()
    whole = standard_monomial_table(buchberger(zgens, order, limits), spec.z_grading, bound,
                                    spec.z_ring)
    left = buchberger([ps.to_x(f) for f in a.generators], order, limits)
    right = buchberger([ps.to_y(g) for g in b.generators], order, limits)
    h1 = standard_monomial_table(left, spec.x_grading, bound, spec.x_ring)
    h2 = standard_monomial_table(right, spec.y_grading, bound, spec.y_ring)
    return whole, hadamard_hilbert(h1, h2)


def _check_hilbert(c: Construction, bound: int, limits) -> CheckResult:
    if c.model is None or c.model.split is None:
        return CheckResult("hilbert-hadamard", SKIPPED, detail="not a glued construction")
    whole, had = hilbert_tables(c.model, bound, limits)
    for u in sorted(set(whole) | set(had)):
        if whole.get(u, 0) != had.get(u, 0):
            return CheckResult("hilbert-hadamard", FAIL, witness=str(u),
                               detail=f"count {whole.get(u, 0)} vs product {had.get(u, 0)}")
    return CheckResult("hilbert-hadamard", PASS, detail=f"{len(whole)} degrees up to {bound}")


def check_case(case: CaseSpec) -> Report:
    """Build the recipe and run the requested checks in the fixed order."""
    rep = Report(case.name)
    if case.recipe.get("kind") == "random":
        return _random_case(case)
    try:
        c = build(case.recipe, case.limits)
    except LimitExceeded as exc:
        rep.results.append(CheckResult("build", SKIPPED, detail=f"limit exceeded: {exc.what}"))
        return rep
    except (PolyError, KeyError, TypeError, ValueError) as exc:
        rep.results.append(CheckResult("build", FAIL, detail=f"{type(exc).__name__}: {exc}"))
        return rep
    rep.notes += c.notes
    drop = case.recipe.get("drop")
    if drop is not None:
        removed = c.generators.pop(int(drop))
        rep.notes.append(f"dropped generator {int(drop)}: {removed}")
    oracle_gb = None
    needs_oracle = {"ideal-equality", "pseudo-groebner"} & set(case.checks)
    for name in CHECKS:
        if name not in case.checks:
            continue
        why = c.skip.get(name) or c.skip.get("*")
        if why:
            rep.results.append(CheckResult(name, SKIPPED, detail=why))
            continue
        if needs_oracle and oracle_gb is None and c.oracle is not None:
            try:
                oracle_gb = c.oracle()
            except LimitExceeded as exc:
                rep.notes.append(f"oracle skipped: limit exceeded ({exc.what})")
                c.oracle = None
        if name == "ideal-equality":
            res = _timed(name, lambda: _check_ideal_equality(c, oracle_gb, case.limits))
        elif name == "pseudo-groebner":
            if oracle_gb is None:
                res = CheckResult(name, SKIPPED, detail="no oracle basis")
            else:
                res = check_pseudo_groebner(c.generators, oracle_gb, c.stage1 or [], case.limits)
        elif name == "groebner":
            res = _timed(name, lambda: _check_groebner(c))
        elif name == "hilbert-hadamard":
            bound = int(case.recipe.get("hilbert_bound", 4))
            res = _timed(name, lambda: _check_hilbert(c, bound, case.limits))
        elif name == "squarefree":
            res = _timed(name, lambda: _check_squarefree(c, case.limits))
        else:
            res = _timed(name, lambda: _check_membership(c))
        rep.results.append(res)
    return rep


# -- random instances -------------------------------------------------------

@dataclass
class RandomInstance:
    seed: int
    spec: TfpSpec
    F: List[Polynomial]
    G: List[Polynomial]
    w1: Tuple[int, ...]
    w2: Tuple[int, ...]
    monomials: List[Polynomial]


def _random_homogeneous(rng: random.Random, ring: RingSpec, spec: TfpSpec, side: str,
                        max_degree: int) -> Optional[Polynomial]:
    sizes = spec.s if side == "x" else spec.t
    deg = rng.randint(1, max_degree)
    slots = sorted(rng.randint(1, spec.r) for _ in range(deg))
    monos = set()
    for _ in range(rng.randint(2, 3)):
        e = [0] * len(ring)
        for i in slots:
            e[ring.index[var_name(side, (i, rng.randint(1, sizes[i - 1])))]] += 1
        monos.add(tuple(e))
    if len(monos) < 2:
        return None
    coeffs = [1, -1, 2, -2, 3]
    terms = {m: Fraction(rng.choice(coeffs)) for m in sorted(monos)}
    return Polynomial(ring, terms)


def random_instance(seed: int, max_degree: int = 3) -> RandomInstance:
    """Small random input: unit-vector grading columns, sizes at most 3,
    one or two homogeneous binomials/trinomials per side."""
    rng = random.Random(seed)
    r = rng.randint(1, 2)
    dim = r + rng.randint(0, 1)
    cols = rng.sample(range(dim), r)
    A = [[int(cols[i] == row) for i in range(r)] for row in range(dim)]
    s = [rng.randint(1, 3) for _ in range(r)]
    t = [rng.randint(1, 3) for _ in range(r)]
    spec = validate_spec(A, s, t)

    def side_polys(ring, tag, count):
        out = []
        for _ in range(count):
            p = _random_homogeneous(rng, ring, spec, tag, max_degree)
            if p is not None:
                out.append(p)
        return out

    F = side_polys(spec.x_ring, "x", rng.randint(1, 2))
    G = side_polys(spec.y_ring, "y", rng.randint(0, 2))
    w1 = tuple(rng.randint(0, 3) for _ in spec.x_ring.names)
    w2 = tuple(rng.randint(0, 3) for _ in spec.y_ring.names)
    xy = spec.xy_ring
    monomials = []
    for _ in range(rng.randint(1, 3)):
        e = tuple(rng.choice((0, 0, 0, 1)) for _ in xy.names)
        if any(e):
            monomials.append(Polynomial(xy, {e: Fraction(1)}))
    if not monomials:
        monomials.append(xy.gens()[0])
    return RandomInstance(seed, spec, F, G, w1, w2, monomials)


def _embed_xy(polys, spec):
    return [p.embed(spec.xy_ring) for p in polys]


def property_checks(inst: RandomInstance, limits: ComputeLimits = NO_LIMITS,
                    checks: Sequence[str] = PROPERTY_CHECKS) -> List[CheckResult]:
    """Run the product-theorem properties on one random instance."""
    spec = inst.spec
    phi = phi_B(spec)
    zord = TermOrder()
    out: List[CheckResult] = []
    oracle = None

    def get_oracle():
        nonlocal oracle
        if oracle is None:
            oracle = contract(phi, _embed_xy(inst.F + inst.G, spec), limits)
        return oracle

    o1 = refine(inst.w1, len(spec.x_ring))
    o2 = refine(inst.w2, len(spec.y_ring))
    F1 = buchberger(inst.F, o1, limits).generators if inst.F else []
    G1 = buchberger(inst.G, o2, limits).generators if inst.G else []

    def eq():
        gens = tfp_generators(inst.F, inst.G, spec)
        diff = ideal_difference(gens, get_oracle().generators, zord, limits)
        if diff:
            return CheckResult("ideal-equality", FAIL, witness=str(diff[1]),
                               detail=f"side {diff[0]}")
        return CheckResult("ideal-equality", PASS)

    def pseudo():
        gens = tfp_generators(F1, G1, spec)
        return check_pseudo_groebner(gens, get_oracle(), stage1_weight(inst.w1, inst.w2, spec),
                                     limits)

    def gb():
        order = tfp_weight(o1, o2, spec)
        w = groebner_witness(tfp_generators(F1, G1, spec), order)
        if w is not None:
            return CheckResult("groebner", FAIL, witness=w.to_str(order))
        return CheckResult("groebner", PASS)

    def containment():
        w = inst.w1 + inst.w2
        wz = stage1_weight(inst.w1, inst.w2, spec)
        lhs_gb = buchberger(get_oracle().generators, refine(wz, len(spec.z_ring)), limits)
        lhs = initial_forms(lhs_gb.generators, wz)
        I = _embed_xy(inst.F + inst.G, spec)
        in_I = initial_forms(buchberger(I, refine(w, len(spec.xy_ring)), limits).generators, w)
        rhs = contract(phi, in_I, limits)
        bad = ideal_subset(lhs, rhs.generators, zord, limits)
        if bad is not None:
            return CheckResult("containment", FAIL, witness=str(bad))
        return CheckResult("containment", PASS)

    def splitting():
        whole = contract(phi, inst.monomials, limits)
        summed = []
        for m in inst.monomials:
            summed += contract(phi, [m], limits).generators
        diff = ideal_difference(whole.generators, summed, zord, limits)
        if diff:
            return CheckResult("splitting", FAIL, witness=str(diff[1]), detail=f"side {diff[0]}")
        # pure monomials also have a closed form
        nx = len(spec.x_ring)
        for m in inst.monomials:
            (e, _), = m.terms.items()
            if any(e[:nx]) and any(e[nx:]):
                continue
            diff = ideal_difference(contract_principal_monomial(m, spec),
                                    contract(phi, [m], limits).generators, zord, limits)
            if diff:
                return CheckResult("splitting", FAIL, witness=str(diff[1]),
                                   detail=f"principal monomial {m}")
        return CheckResult("splitting", PASS)

    def lift_identity():
        for f in inst.F + inst.G:
            fe = f.embed(spec.xy_ring)
            for k, fk in lift_pairs(f, spec):
                if phi.apply(fk) != lift_monomial_factor(f, k, spec) * fe:
                    return CheckResult("lift-identity", FAIL, witness=str(fk), detail=f"k={k}")
        return CheckResult("lift-identity", PASS)

    table = {"ideal-equality": eq, "pseudo-groebner": pseudo, "groebner": gb,
             "containment": containment, "splitting": splitting, "lift-identity": lift_identity}
    for name in PROPERTY_CHECKS:
        if name in checks:
            res = _timed(name, table[name])
            res.check = name
            out.append(res)
    return out


def _random_case(case: CaseSpec) -> Report:
    rep = Report(case.name)
    seed0 = int(case.recipe.get("seed", 0))
    count = int(case.recipe.get("count", 100))
    checks = tuple(case.recipe.get("properties", PROPERTY_CHECKS))
    rep.notes.append(f"seeds {seed0}..{seed0 + count - 1}")
    tallies: Dict[str, List[CheckResult]] = {n: [] for n in checks}
    for seed in range(seed0, seed0 + count):
        inst = random_instance(seed, int(case.recipe.get("max_degree", 3)))
        for res in property_checks(inst, case.limits, checks):
            if res.verdict == FAIL:
                res.detail = f"seed {seed}: {res.detail}".rstrip(": ")
            tallies[res.check].append(res)
    for name, results in tallies.items():
        fails = [r for r in results if r.verdict == FAIL]
        skips = sum(r.verdict == SKIPPED for r in results)
        secs = sum(r.seconds for r in results)
        if fails:
            rep.results.append(CheckResult(name, FAIL, secs, fails[0].witness,
                                           f"{len(fails)} of {len(results)} failed; first {fails[0].detail}"))
        elif results and skips == len(results):
            rep.results.append(CheckResult(name, SKIPPED, secs, detail="all instances hit limits"))
        else:
            rep.results.append(CheckResult(name, PASS, secs,
                                           detail=f"{len(results) - skips} instances"
                                           + (f", {skips} skipped" if skips else "")))
    return rep


# -- suites -----------------------------------------------------------------

def parse_case(entry: Dict, default_limits: ComputeLimits = NO_LIMITS) -> CaseSpec:
    if not isinstance(entry, dict) or "name" not in entry or "recipe" not in entry:
        raise ConfigError(f"case needs a name and a recipe: {entry!r}")
    checks = entry.get("checks", list(CHECKS))
    if isinstance(checks, str):
        checks = [c.strip() for c in checks.split(",")]
    known = set(CHECKS) | set(PROPERTY_CHECKS)
    bad = [c for c in checks if c not in known]
    if bad:
        raise ConfigError(f"unknown checks {bad} in case {entry['name']!r}")
    limits = default_limits
    if "limits" in entry:
        limits = ComputeLimits.parse(str(entry["limits"]))
    return CaseSpec(str(entry["name"]), dict(entry["recipe"]), tuple(checks), limits)


def load_suite(path, default_limits: ComputeLimits = NO_LIMITS) -> List[CaseSpec]:
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read suite {path}: {exc}") from None
    if data is None:
        return []
    if not isinstance(data, dict) or not isinstance(data.get("cases", []), list):
        raise ConfigError("suite file must be a mapping with a 'cases' list")
    cases = [parse_case(e, default_limits) for e in data.get("cases") or []]
    names = [c.name for c in cases]
    if len(set(names)) != len(names):
        raise ConfigError("case names must be unique")
    return cases


def default_suite_path() -> Path:
    return Path(str(resources.files("toricfp") / "data" / "default_suite.yaml"))


def run_suite(path=None, default_limits: ComputeLimits = NO_LIMITS,
              only: Optional[Sequence[str]] = None) -> SuiteReport:
    """Run every case of the suite file (the shipped suite by default),
    reports ordered by case name."""
    cases = load_suite(path or default_suite_path(), default_limits)
    if only:
        cases = [c for c in cases if c.name in only]
    reports = []
    for case in sorted(cases, key=lambda c: c.name):
        log.info("case %s", case.name)
        reports.append(check_case(case))
    return SuiteReport(reports)
