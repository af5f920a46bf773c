"""Buchberger's algorithm with the Gebauer-Moeller pair update, static
Groebner-basis checks, initial forms, ideal comparison and standard
monomial counting.

The engine works on primitive integer polynomials (content removed, leading
coefficient positive) and only converts to monic rational polynomials at the
boundary.
"""
from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from operator import add, sub
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import (
    Monomial, MultiGrading, Polynomial, PolyError, RingMismatch, TermOrder, monomial_divides,
)

log = logging.getLogger(__name__)


class LimitExceeded(RuntimeError):
    """Raised when a computation crosses a :class:`ComputeLimits` bound.

    ``partial`` holds the (non-reduced) basis reached so far."""

    def __init__(self, what: str, partial: Sequence[Polynomial] = (), stats: Optional[dict] = None):
        super().__init__(what)
        self.what = what
        self.partial = list(partial)
        self.stats = dict(stats or {})


class MissingCertificate(PolyError):
    pass


@dataclass(frozen=True)
class ComputeLimits:
    max_degree: Optional[int] = None
    max_basis_size: Optional[int] = None
    max_pair_reductions: Optional[int] = None

    def __post_init__(self):
        for name in ("max_degree", "max_basis_size", "max_pair_reductions"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def parse(cls, text: str) -> "ComputeLimits":
        """``"maxdeg,maxsize,maxred"``; empty fields mean no bound."""
        parts = [p.strip() for p in text.split(",")]
        parts += [""] * (3 - len(parts))
        if len(parts) != 3:
            raise ValueError(f"bad limits {text!r}")
        vals = [int(p) if p else None for p in parts]
        return cls(*vals)


NO_LIMITS = ComputeLimits()


@dataclass
class GroebnerBasis:
    generators: List[Polynomial]
    order: TermOrder
    reduced: bool = True
    stats: Dict[str, int] = field(default_factory=dict, compare=False)
    ring_hint: Optional[object] = field(default=None, compare=False)

    @property
    def ring(self):
        return self.generators[0].ring if self.generators else self.ring_hint

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading(self.order)[0] for g in self.generators]

    def is_unit(self) -> bool:
        return any(sum(m) == 0 for m in self.leading_monomials())

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


# -- internal integer polynomials -----------------------------------------

def _mask(m: Monomial) -> int:
    b = 0
    for i, e in enumerate(m):
        if e:
            b |= 1 << i
    return b


class _IPoly:
    __slots__ = ("lm", "lc", "tail", "mask", "deg", "terms", "sugar")

    def __init__(self, terms: Dict[Monomial, int], key):
        lm = max(terms, key=key)
        self.terms = terms
        self.lm = lm
        self.lc = terms[lm]
        self.tail = [(m, c) for m, c in terms.items() if m != lm]
        self.mask = _mask(lm)
        self.deg = sum(lm)
        self.sugar = max(sum(m) for m in terms)


def _primitive(terms: Dict[Monomial, int], key) -> Dict[Monomial, int]:
    g = reduce(gcd, terms.values())
    lm = max(terms, key=key)
    if terms[lm] < 0:
        g = -g
    if g != 1:
        terms = {m: c // g for m, c in terms.items()}
    return terms


def _to_int(f: Polynomial) -> Dict[Monomial, int]:
    den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in f.terms.values()), 1)
    return {m: int(c * den) for m, c in f.terms.items()}


class _Reducer:
    """Normal forms against a growing list of integer polynomials."""

    def __init__(self, key):
        self.key = key
        self.basis: List[_IPoly] = []
        self._mcache: Dict[Monomial, int] = {}

    def mask(self, m):
        b = self._mcache.get(m)
        if b is None:
            b = self._mcache[m] = _mask(m)
        return b

    def divisor(self, m: Monomial, mm: int) -> Optional[_IPoly]:
        for g in self.basis:
            if g.mask & ~mm == 0:
                lm = g.lm
                for a, b in zip(lm, m):
                    if a > b:
                        break
                else:
                    return g
        return None

    def nf(self, f: Dict[Monomial, int], full: bool = True,
           rem: Optional[Dict[Monomial, int]] = None) -> Dict[Monomial, int]:
        """Remainder of ``f`` (primitive). Entries preseeded in ``rem`` are
        carried through unreduced and scaled along with the remainder."""
        key = self.key
        f = dict(f)
        rem = dict(rem) if rem else {}
        while f:
            m = max(f, key=key)
            c = f.pop(m)
            g = self.divisor(m, self.mask(m))
            if g is None:
                rem[m] = c
                if not full:
                    rem.update(f)
                    break
                continue
            q = tuple(map(sub, m, g.lm))
            a = g.lc
            if a != 1:
                d = gcd(c, a)
                sf = a // d
                c //= d
                if sf != 1:
                    for k in f:
                        f[k] *= sf
                    for k in rem:
                        rem[k] *= sf
            for gm, gc in g.tail:
                t = tuple(map(add, gm, q))
                v = f.get(t, 0) - c * gc
                if v:
                    f[t] = v
                else:
                    del f[t]
        if rem:
            rem = _primitive(rem, key)
        return rem


def _spoly(f: _IPoly, g: _IPoly) -> Dict[Monomial, int]:
    lcm = tuple(map(max, f.lm, g.lm))
    qf = tuple(map(sub, lcm, f.lm))
    qg = tuple(map(sub, lcm, g.lm))
    a, b = g.lc, f.lc
    d = gcd(a, b)
    a //= d
    b //= d
    out: Dict[Monomial, int] = {}
    for m, c in f.tail:
        t = tuple(map(add, m, qf))
        out[t] = out.get(t, 0) + a * c
    for m, c in g.tail:
        t = tuple(map(add, m, qg))
        v = out.get(t, 0) - b * c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return {m: c for m, c in out.items() if c}


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _check_ring(polys: Sequence[Polynomial]):
    rings = {p.ring for p in polys}
    if len(rings) > 1:
        raise RingMismatch("generators live in different rings")


def _export(ip: Dict[Monomial, int], ring, key) -> Polynomial:
    lm = max(ip, key=key)
    lc = ip[lm]
    return Polynomial(ring, {m: Fraction(c, lc) for m, c in ip.items()}, _trusted=True)


def _reduce_tail(p: _IPoly, red: _Reducer) -> Dict[Monomial, int]:
    """Fully reduce the tail of ``p`` keeping its leading term in place."""
    return red.nf(dict(p.tail), rem={p.lm: p.lc})


def buchberger(gens: Sequence[Polynomial], order: TermOrder,
               limits: ComputeLimits = NO_LIMITS, degree_bound: Optional[int] = None,
               ) -> GroebnerBasis:
    """Reduced Groebner basis of ``<gens>``.

    Pairs are taken by smallest sugar (the lcm degree, for homogeneous
    input), then smallest lcm in ``order``. With
    ``degree_bound`` set, pairs whose lcm has larger total degree are
    dropped; for homogeneous input the result is then a Groebner basis up
    to that degree (enough to decide membership of polynomials of degree at
    most ``degree_bound``). ``limits`` violations raise :class:`LimitExceeded`.
    """
    hint = gens[0].ring if gens else None
    gens = [g for g in gens if g]
    _check_ring(gens)
    if not gens:
        return GroebnerBasis([], order, True, {"pairs": 0, "reductions": 0}, ring_hint=hint)
    ring = gens[0].ring
    key = order.key
    red = _Reducer(key)
    allp: List[_IPoly] = []      # every polynomial ever added, by index
    active: List[int] = []       # indices of the current minimal basis
    # (sugar, lcm key): the sugar strategy with ties broken by the order;
    # sugar is the plain degree for homogeneous input
    heap: List[tuple] = []
    live: Dict[Tuple[int, int], Monomial] = {}
    live_mask: Dict[Tuple[int, int], int] = {}
    stats = {"pairs": 0, "reductions": 0, "zero": 0, "criteria": 0}

    def partial():
        return [_export(allp[i].terms, ring, key) for i in active]

    def add_poly(terms, sugar=0):
        h = _IPoly(terms, key)
        h.sugar = max(h.sugar, sugar)
        hi = len(allp)
        allp.append(h)
        if limits.max_basis_size is not None and len(active) + 1 > limits.max_basis_size:
            raise LimitExceeded("max_basis_size", partial(), stats)
        # Gebauer-Moeller update
        cand = []
        for gi in active:
            l = _lcm(allp[gi].lm, h.lm)
            cand.append((gi, l, _mask(l), _coprime(allp[gi].lm, h.lm)))
        kept = []
        for n, (gi, l, lm_, cop) in enumerate(cand):
            if not cop:
                covered = any(cm & ~lm_ == 0 and monomial_divides(c, l)
                              for _, c, cm, _ in itertools.chain(cand[n + 1:], kept))
                if covered:
                    continue
            kept.append((gi, l, lm_, cop))
        new_pairs = [(gi, l) for gi, l, _, cop in kept if not cop]
        stats["criteria"] += len(cand) - len(new_pairs)
        # drop old pairs whose lcm is strictly divisible via h
        hm = h.mask
        for (i, j), l in list(live.items()):
            if hm & ~live_mask[(i, j)] == 0 and monomial_divides(h.lm, l):
                l1 = _lcm(allp[i].lm, h.lm)
                l2 = _lcm(allp[j].lm, h.lm)
                if l1 != l and l2 != l:
                    del live[(i, j)]
                    del live_mask[(i, j)]
                    stats["criteria"] += 1
        for gi, l in new_pairs:
            d = sum(l)
            if degree_bound is not None and d > degree_bound:
                continue
            live[(gi, hi)] = l
            live_mask[(gi, hi)] = _mask(l)
            g = allp[gi]
            sug = max(g.sugar + d - g.deg, h.sugar + d - h.deg)
            heapq.heappush(heap, ((sug, key(l)), d, gi, hi))
        active[:] = [gi for gi in active if not monomial_divides(h.lm, allp[gi].lm)]
        active.append(hi)
        red.basis = [allp[i] for i in active]

    for g in gens:
        r = red.nf(_primitive(_to_int(g), key))
        if r:
            add_poly(r)

    while heap:
        (sug, _), d, i, j = heapq.heappop(heap)
        if (i, j) not in live:
            continue
        del live[(i, j)]
        del live_mask[(i, j)]
        if limits.max_degree is not None and d > limits.max_degree:
            raise LimitExceeded("max_degree", partial(), stats)
        stats["pairs"] += 1
        stats["reductions"] += 1
        if limits.max_pair_reductions is not None and stats["reductions"] > limits.max_pair_reductions:
            raise LimitExceeded("max_pair_reductions", partial(), stats)
        s = _spoly(allp[i], allp[j])
        if not s:
            stats["zero"] += 1
            continue
        r = red.nf(s)
        if r:
            add_poly(r, sug)
        else:
            stats["zero"] += 1

    reduced = [_reduce_tail(allp[i], _sub_reducer(allp, active, i, key)) for i in active]
    out = sorted((_export(t, ring, key) for t in reduced), key=lambda p: key(p.leading(order)[0]))
    log.debug("buchberger: %d generators, stats %s", len(out), stats)
    return GroebnerBasis(out, order, True, stats)


def _sub_reducer(allp, active, skip, key) -> _Reducer:
    r = _Reducer(key)
    r.basis = [allp[i] for i in active if i != skip]
    return r


def reduce_basis(polys: Sequence[Polynomial], order: TermOrder) -> GroebnerBasis:
    """Reduced basis of a set already known to be a Groebner basis."""
    hint = polys[0].ring if polys else None
    polys = [p for p in polys if p]
    if not polys:
        return GroebnerBasis([], order, ring_hint=hint)
    ring = polys[0].ring
    key = order.key
    ips = []
    seen = set()
    for p in polys:
        t = _primitive(_to_int(p), key)
        ips.append(_IPoly(t, key))
    # minimalize: drop elements whose leading monomial is divisible by another's
    keep = []
    for n, p in enumerate(ips):
        dominated = False
        for m, q in enumerate(ips):
            if m == n:
                continue
            if monomial_divides(q.lm, p.lm) and (q.lm != p.lm or m < n):
                dominated = True
                break
        if not dominated and p.lm not in seen:
            seen.add(p.lm)
            keep.append(p)
    out = []
    for n, p in enumerate(keep):
        r = _Reducer(key)
        r.basis = keep[:n] + keep[n + 1:]
        out.append(_reduce_tail(p, r))
    gens = sorted((_export(t, ring, key) for t in out), key=lambda p: key(p.leading(order)[0]))
    return GroebnerBasis(gens, order, True)


def is_groebner(G: Sequence[Polynomial], order: TermOrder) -> bool:
    return groebner_witness(G, order) is None


def groebner_witness(G: Sequence[Polynomial], order: TermOrder) -> Optional[Polynomial]:
    """``None`` if ``G`` is a Groebner basis, otherwise a nonzero S-polynomial
    remainder.

    Pairs are visited by lcm degree; a pair is skipped when its leading
    monomials are coprime, or when some third element's leading monomial
    divides the lcm and both connecting pairs were already settled.
    """
    G = [g for g in G if g]
    _check_ring(G)
    if not G:
        return None
    ring = G[0].ring
    key = order.key
    ips = [_IPoly(_primitive(_to_int(g), key), key) for g in G]
    red = _Reducer(key)
    red.basis = ips
    n = len(ips)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            l = _lcm(ips[i].lm, ips[j].lm)
            pairs.append((sum(l), i, j, l))
    pairs.sort(key=lambda p: (p[0], p[1], p[2]))
    done = set()
    lms = [p.lm for p in ips]
    for d, i, j, l in pairs:
        if _coprime(lms[i], lms[j]):
            done.add((i, j))
            continue
        chain = False
        for k in range(n):
            if k == i or k == j:
                continue
            if monomial_divides(lms[k], l):
                a = (i, k) if i < k else (k, i)
                b = (j, k) if j < k else (k, j)
                if a in done and b in done:
                    chain = True
                    break
        if not chain:
            s = _spoly(ips[i], ips[j])
            if s:
                r = red.nf(s)
                if r:
                    return _export(r, ring, key)
        done.add((i, j))
    return None


# -- weights and initial forms --------------------------------------------

def _stack_weights(stack: Sequence[Sequence], m: Monomial) -> tuple:
    return tuple(sum(Fraction(a) * b for a, b in zip(w, m)) for w in stack)


def normalize_stack(w) -> List[Tuple[Fraction, ...]]:
    """Accept one weight vector or a sequence of them."""
    if w is None:
        return []
    w = list(w)
    if not w:
        return []
    if isinstance(w[0], (int, Fraction)):
        return [tuple(Fraction(x) for x in w)]
    return [tuple(Fraction(x) for x in v) for v in w]


def initial_form(f: Polynomial, w) -> Polynomial:
    stack = normalize_stack(w)
    if not f:
        return f
    ws = {m: _stack_weights(stack, m) for m in f.terms}
    top = max(ws.values())
    return Polynomial(f.ring, {m: c for m, c in f.terms.items() if ws[m] == top}, _trusted=True)


def initial_forms(G: Sequence[Polynomial], w) -> List[Polynomial]:
    return [initial_form(g, w) for g in G]


def refine(w, n: int, tie_break: str = "grevlex") -> TermOrder:
    """Term order comparing by the weight stack ``w`` first."""
    return TermOrder(normalize_stack(w), tie_break)


# -- ideal comparisons ------------------------------------------------------

def _homogeneous(polys: Iterable[Polynomial]) -> bool:
    return all(p.is_homogeneous() for p in polys)


def reduces_to_zero(f: Polynomial, gb: GroebnerBasis) -> bool:
    if not f:
        return True
    if not gb.generators:
        return False
    key = gb.order.key
    red = _Reducer(key)
    red.basis = [_IPoly(_primitive(_to_int(g), key), key) for g in gb.generators]
    return not red.nf(_to_int(f))


def membership_reducer(gb: GroebnerBasis):
    """Callable testing ``f in <gb>`` with a shared reducer."""
    key = gb.order.key
    red = _Reducer(key)
    red.basis = [_IPoly(_primitive(_to_int(g), key), key) for g in gb.generators]

    def member(f: Polynomial) -> bool:
        return not f or (bool(red.basis) and not red.nf(_to_int(f)))
    return member


def ideal_contains(A_gb: GroebnerBasis, B: Sequence[Polynomial]) -> Optional[Polynomial]:
    """First element of ``B`` not in ``<A_gb>``, or ``None``."""
    member = membership_reducer(A_gb)
    for b in B:
        if not member(b):
            return b
    return None


def ideal_difference(A: Sequence[Polynomial], B: Sequence[Polynomial], order: TermOrder,
                     limits: ComputeLimits = NO_LIMITS
                     ) -> Optional[Tuple[str, Polynomial]]:
    """``None`` when ``<A> == <B>``; else ``("A", f)`` for an ``f`` in ``A``
    outside ``<B>`` (or ``("B", f)`` symmetrically).

    For homogeneous input both bases are truncated at the largest generator
    degree, which is all membership of the generators needs.
    """
    A = [a for a in A if a]
    B = [b for b in B if b]
    if not A and not B:
        return None
    bound = None
    if _homogeneous(A) and _homogeneous(B):
        bound = max(p.degree() for p in A + B)
    ga = buchberger(A, order, limits, degree_bound=bound)
    w = ideal_contains(ga, B)
    if w is not None:
        return ("B", w)
    gb = buchberger(B, order, limits, degree_bound=bound)
    w = ideal_contains(gb, A)
    if w is not None:
        return ("A", w)
    return None


def ideal_equal(A: Sequence[Polynomial], B: Sequence[Polynomial], order: TermOrder,
                limits: ComputeLimits = NO_LIMITS) -> bool:
    return ideal_difference(A, B, order, limits) is None


def ideal_subset(A: Sequence[Polynomial], B: Sequence[Polynomial], order: TermOrder,
                 limits: ComputeLimits = NO_LIMITS) -> Optional[Polynomial]:
    """``None`` if ``<A>`` is inside ``<B>``, else a witness from ``A``."""
    A = [a for a in A if a]
    B = [b for b in B if b]
    if not A:
        return None
    bound = None
    if _homogeneous(A) and _homogeneous(B):
        bound = max(p.degree() for p in A + B)
    gb = buchberger(B, order, limits, degree_bound=bound)
    return ideal_contains(gb, A)


# -- Hilbert functions ------------------------------------------------------

def standard_monomial_table(G: GroebnerBasis, grading: MultiGrading, bound: int,
                            ring=None) -> Dict[Tuple[int, ...], int]:
    """Count standard monomials per multidegree ``u`` with ``omega . u <= bound``.

    Degrees with no standard monomial are omitted. ``ring`` is needed when
    ``G`` is empty (the zero ideal).
    """
    if grading.omega is None:
        raise MissingCertificate("standard monomial counts need an omega certificate")
    ring = ring or G.ring
    if ring is None:
        raise ValueError("ring required for the zero ideal")
    n = len(ring)
    if len(grading.degrees) != n:
        raise RingMismatch("grading does not match ring")
    lms = G.leading_monomials() if G.generators else []
    lmasks = [(_mask(l), l) for l in lms]

    def standard(m, mm):
        for b, l in lmasks:
            if b & ~mm == 0 and monomial_divides(l, m):
                return False
        return True

    table: Dict[Tuple[int, ...], int] = {}
    zero = (0,) * n
    if not standard(zero, 0):
        return table
    degs = grading.degrees
    d0 = (0,) * grading.dim
    table[d0] = 1
    # layer: (monomial, last variable index, multidegree)
    layer = [(zero, 0, d0)]
    for _ in range(bound):
        nxt = []
        for m, last, u in layer:
            for v in range(last, n):
                e = list(m)
                e[v] += 1
                e = tuple(e)
                if standard(e, _mask(e)):
                    du = tuple(map(add, u, degs[v]))
                    nxt.append((e, v, du))
                    table[du] = table.get(du, 0) + 1
        layer = nxt
    return table
