"""Kernels and contractions of polynomial maps by elimination.

This is the ground truth every construction is checked against, so it uses
nothing but the graph ideal ``<v - image(v)>`` and a block elimination order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .groebner import NO_LIMITS, ComputeLimits, GroebnerBasis, buchberger
from .poly import Monomial, Polynomial, PolyError, RingMismatch, RingSpec, TermOrder


class NotMonomialMap(PolyError):
    pass


@dataclass(frozen=True)
class PolynomialMap:
    """Ring map sending the i-th source variable to ``images[i]``."""

    source: RingSpec
    target: RingSpec
    images: Tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.images) != len(self.source):
            raise PolyError("one image per source variable required")
        for im in self.images:
            if im.ring != self.target:
                raise RingMismatch("image outside the target ring")

    @classmethod
    def from_dict(cls, source: RingSpec, target: RingSpec, images: Dict[str, Polynomial]):
        return cls(source, target, tuple(images[n] for n in source.names))

    @property
    def monomial_flag(self) -> bool:
        return all(len(im) == 1 and next(iter(im.terms.values())) == 1 for im in self.images)

    def exponent_columns(self) -> List[Monomial]:
        if not self.monomial_flag:
            raise NotMonomialMap("map has a non-monomial image")
        return [next(iter(im.terms)) for im in self.images]

    def image_of(self, name: str) -> Polynomial:
        return self.images[self.source.index[name]]

    def apply(self, f: Polynomial) -> Polynomial:
        if f.ring != self.source:
            raise RingMismatch("polynomial is not in the source ring")
        if self.monomial_flag:
            cols = self.exponent_columns()
            n = len(self.target)
            out: Dict[Monomial, Fraction] = {}
            for m, c in f.terms.items():
                e = [0] * n
                for v, k in enumerate(m):
                    if k:
                        for t, x in enumerate(cols[v]):
                            if x:
                                e[t] += k * x
                e = tuple(e)
                out[e] = out.get(e, 0) + c
            return Polynomial(self.target, out)
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(v, k):
            key = (v, k)
            if key not in powers:
                powers[key] = self.images[v] ** k
            return powers[key]

        total = self.target.zero()
        for m, c in f.terms.items():
            t = self.target.one() * c
            for v, k in enumerate(m):
                if k:
                    t = t * power(v, k)
            total = total + t
        return total


def _joint(phi: PolynomialMap) -> RingSpec:
    clash = set(phi.source.names) & set(phi.target.names)
    if clash:
        raise PolyError(f"source and target share variables: {sorted(clash)[:3]}")
    return phi.target + phi.source


def elimination_order(n_eliminate: int, n_keep: int) -> TermOrder:
    """Block order: total degree in the first ``n_eliminate`` variables, then grevlex."""
    w = (1,) * n_eliminate + (0,) * n_keep
    return TermOrder([w], "grevlex")


def contract(phi: PolynomialMap, ideal: Sequence[Polynomial] = (),
             limits: ComputeLimits = NO_LIMITS) -> GroebnerBasis:
    """Reduced Groebner basis (grevlex on the source) of the preimage of
    ``<ideal>`` under ``phi``."""
    joint = _joint(phi)
    nt, ns = len(phi.target), len(phi.source)
    gens = []
    for g in ideal:
        if g.ring != phi.target:
            raise RingMismatch("ideal generators must live in the target ring")
        if g:
            gens.append(g.embed(joint))
    for name, im in zip(phi.source.names, phi.images):
        gens.append(joint.var(name) - im.embed(joint))
    order = elimination_order(nt, ns)
    gb = buchberger(gens, order, limits)
    kept = []
    for g in gb.generators:
        if all(not any(m[:nt]) for m in g.terms):
            kept.append(Polynomial(phi.source, {m[nt:]: c for m, c in g.terms.items()}, _trusted=True))
    src_order = TermOrder((), "grevlex")
    kept.sort(key=lambda p: src_order.key(p.leading(src_order)[0]))
    return GroebnerBasis(kept, src_order, True, dict(gb.stats), ring_hint=phi.source)


def kernel(phi: PolynomialMap, limits: ComputeLimits = NO_LIMITS) -> GroebnerBasis:
    return contract(phi, (), limits)


def pullback_weight(w: Sequence, phi: PolynomialMap) -> Tuple[Fraction, ...]:
    """Weight of each source variable = ``w``-weight of its image monomial."""
    cols = phi.exponent_columns()
    if len(w) != len(phi.target):
        raise RingMismatch("weight length does not match target ring")
    wf = [Fraction(x) for x in w]
    return tuple(sum((a * b for a, b in zip(wf, col)), Fraction(0)) for col in cols)


def pullback_stack(stack: Sequence[Sequence], phi: PolynomialMap) -> List[Tuple[Fraction, ...]]:
    return [pullback_weight(w, phi) for w in stack]
