"""Toric fiber products of multigraded ideals.

Given ``I`` in ``K[x^i_j]`` and ``J`` in ``K[y^i_k]``, both graded by the
columns ``a^1..a^r`` of an integer matrix, the product lives in
``K[z^i_jk]`` and is the preimage of ``I + J`` under ``z^i_jk -> x^i_j y^i_k``.
When the columns are linearly independent it is generated by lifts of
generators of ``I`` and ``J`` plus the quadrics ``Quad_B``.

Variables are named ``x_i_j``, ``y_i_k`` and ``z_i_j_k`` (all 1-based).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .oracle import PolynomialMap, pullback_stack
from .poly import (
    Monomial, MultiGrading, Polynomial, PolyError, RingMismatch, RingSpec, TermOrder,
    multidegree, split_var, var_name,
)


class NoPositivityCertificate(PolyError):
    pass


class DependentGrading(PolyError):
    pass


class UpperMultisetMismatch(AssertionError):
    """Terms of a homogeneous polynomial disagree on upper indices.

    Only possible for a dependent grading; signals a bug otherwise."""


class MixedMonomial(PolyError):
    pass


class UnitMonomial(PolyError):
    pass


@dataclass(frozen=True)
class TfpSpec:
    """Index sizes and grading of a toric fiber product.

    ``A`` is given by rows (``d x r``); ``columns[i-1]`` is ``a^i``.
    """

    r: int
    s: Tuple[int, ...]
    t: Tuple[int, ...]
    A: Tuple[Tuple[int, ...], ...]
    omega: Tuple[Fraction, ...]
    independent: bool

    @cached_property
    def columns(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(row[i] for row in self.A) for i in range(self.r))

    @cached_property
    def x_ring(self) -> RingSpec:
        return RingSpec(var_name("x", (i, j)) for i in range(1, self.r + 1)
                        for j in range(1, self.s[i - 1] + 1))

    @cached_property
    def y_ring(self) -> RingSpec:
        return RingSpec(var_name("y", (i, k)) for i in range(1, self.r + 1)
                        for k in range(1, self.t[i - 1] + 1))

    @cached_property
    def xy_ring(self) -> RingSpec:
        return self.x_ring + self.y_ring

    @cached_property
    def z_ring(self) -> RingSpec:
        return RingSpec(var_name("z", ijk) for ijk in self.z_indices)

    @cached_property
    def z_indices(self) -> Tuple[Tuple[int, int, int], ...]:
        return tuple((i, j, k) for i in range(1, self.r + 1)
                     for j in range(1, self.s[i - 1] + 1)
                     for k in range(1, self.t[i - 1] + 1))

    def _grading(self, ring: RingSpec) -> MultiGrading:
        cols = self.columns
        return MultiGrading(tuple(cols[split_var(n)[1][0] - 1] for n in ring.names), self.omega)

    @cached_property
    def x_grading(self) -> MultiGrading:
        return self._grading(self.x_ring)

    @cached_property
    def y_grading(self) -> MultiGrading:
        return self._grading(self.y_ring)

    @cached_property
    def z_grading(self) -> MultiGrading:
        return self._grading(self.z_ring)

    def z(self, i: int, j: int, k: int) -> Polynomial:
        return self.z_ring.var(var_name("z", (i, j, k)))

    def require_independent(self):
        if not self.independent:
            raise DependentGrading("grading columns are linearly dependent")


def validate_spec(A: Sequence[Sequence[int]], s: Sequence[int], t: Sequence[int]) -> TfpSpec:
    """Check shapes, solve for ``omega`` with ``omega . a^i = 1`` and record
    whether the columns are independent."""
    from sympy import Matrix, Rational

    A = tuple(tuple(int(x) for x in row) for row in A)
    s, t = tuple(int(x) for x in s), tuple(int(x) for x in t)
    if not A or not A[0]:
        raise PolyError("grading matrix is empty")
    r = len(A[0])
    if any(len(row) != r for row in A):
        raise PolyError("grading rows have different lengths")
    if len(s) != r or len(t) != r:
        raise PolyError(f"need {r} entries in s and t, got {len(s)} and {len(t)}")
    if min(s + t) < 1:
        raise PolyError("sizes must be positive")
    M = Matrix(A)
    try:
        sol, params = M.T.gauss_jordan_solve(Matrix([1] * r))
    except ValueError:
        raise NoPositivityCertificate("no omega with omega . a^i = 1 for all i") from None
    sol = sol.subs({p: 0 for p in params})
    omega = tuple(Fraction(int(Rational(x).p), int(Rational(x).q)) for x in sol)
    return TfpSpec(r, s, t, A, omega, M.rank() == r)


def phi_B(spec: TfpSpec) -> PolynomialMap:
    xy = spec.xy_ring
    ims = tuple(xy.var(var_name("x", (i, j))) * xy.var(var_name("y", (i, k)))
                for i, j, k in spec.z_indices)
    return PolynomialMap(spec.z_ring, xy, ims)


def quad_B(spec: TfpSpec) -> List[Polynomial]:
    """``z_{j1k2} z_{j2k1} - z_{j1k1} z_{j2k2}`` for ``j1<j2``, ``k1<k2``."""
    out = []
    z = spec.z
    for i in range(1, spec.r + 1):
        for j1, j2 in itertools.combinations(range(1, spec.s[i - 1] + 1), 2):
            for k1, k2 in itertools.combinations(range(1, spec.t[i - 1] + 1), 2):
                out.append(z(i, j1, k2) * z(i, j2, k1) - z(i, j1, k1) * z(i, j2, k2))
    return out


# -- lifting ---------------------------------------------------------------

@dataclass(frozen=True)
class Tableau:
    """``f`` as slots ``i_1 <= ... <= i_d`` with one lower-index row per term."""

    slots: Tuple[int, ...]
    rows: Tuple[Tuple[Fraction, Tuple[int, ...]], ...]


def _side(f: Polynomial, spec: TfpSpec) -> str:
    if f.ring == spec.x_ring:
        return "x"
    if f.ring == spec.y_ring:
        return "y"
    raise RingMismatch("polynomial is neither in the x-ring nor the y-ring")


def canonical_slots(f: Polynomial, spec: TfpSpec, descending: bool = False) -> Tableau:
    """Align the terms of ``f`` on common slots.

    Slots sort by upper index; inside a block of equal upper index the
    lower indices are ascending (descending with ``descending=True``, an
    alternative alignment that must generate the same ideal modulo Quad_B).
    """
    spec.require_independent()
    grading = spec.x_grading if _side(f, spec) == "x" else spec.y_grading
    multidegree(f, grading)
    names = f.ring.names
    idx = [split_var(n)[1] for n in names]
    slots = None
    rows = []
    for m, c in sorted(f.terms.items(), reverse=True):
        pairs = []
        for v, e in enumerate(m):
            pairs.extend([idx[v]] * e)
        pairs.sort(key=(lambda p: (p[0], -p[1])) if descending else None)
        upper = tuple(p[0] for p in pairs)
        if slots is None:
            slots = upper
        elif upper != slots:
            raise UpperMultisetMismatch(f"terms of {f} have different upper indices")
        rows.append((c, tuple(p[1] for p in pairs)))
    return Tableau(slots or (), tuple(rows))


def lift_pairs(f: Polynomial, spec: TfpSpec, descending: bool = False
               ) -> List[Tuple[Tuple[int, ...], Polynomial]]:
    """``(k, f_k)`` for every decoration ``k``, duplicates kept."""
    side = _side(f, spec)
    tab = canonical_slots(f, spec, descending)
    other = spec.t if side == "x" else spec.s
    z = spec.z_ring
    out = []
    for ks in itertools.product(*(range(1, other[i - 1] + 1) for i in tab.slots)):
        terms: Dict[Monomial, Fraction] = {}
        for c, lowers in tab.rows:
            e = [0] * len(z)
            for i, j, k in zip(tab.slots, lowers, ks):
                if side == "y":
                    j, k = k, j
                e[z.index[var_name("z", (i, j, k))]] += 1
            e = tuple(e)
            terms[e] = terms.get(e, 0) + c
        out.append((ks, Polynomial(z, terms)))
    return out


def lift(f: Polynomial, spec: TfpSpec, descending: bool = False) -> List[Polynomial]:
    """All ``f_k`` obtained by decorating the slots of ``f`` with indices from
    the other factor, without repeats. The side is read from the ring of ``f``."""
    return _dedup(p for _, p in lift_pairs(f, spec, descending))


def lift_monomial_factor(f: Polynomial, k: Sequence[int], spec: TfpSpec) -> Polynomial:
    """The monomial ``phi_B(f_k) / f``: product of the opposite-side
    variables labelled by the slots of ``f`` and the chosen ``k``."""
    side = _side(f, spec)
    tab = canonical_slots(f, spec)
    xy = spec.xy_ring
    out = xy.one()
    tag = "y" if side == "x" else "x"
    for i, kk in zip(tab.slots, k):
        out = out * xy.var(var_name(tag, (i, kk)))
    return out


def _dedup(polys: Iterable[Polynomial]) -> List[Polynomial]:
    seen = set()
    out = []
    for p in polys:
        if p and p not in seen:
            seen.add(p)
            out.append(p)
    return out


def tfp_generators(F: Sequence[Polynomial], G: Sequence[Polynomial],
                   spec: TfpSpec) -> List[Polynomial]:
    """``Lift(F) + Lift(G) + Quad_B``, duplicates removed."""
    spec.require_independent()
    for f in F:
        if f.ring != spec.x_ring:
            raise RingMismatch("F must live in the x-ring")
    for g in G:
        if g.ring != spec.y_ring:
            raise RingMismatch("G must live in the y-ring")
    lifted = [p for f in F if f for p in lift(f, spec)]
    lifted += [p for g in G if g for p in lift(g, spec)]
    return _dedup(lifted + quad_B(spec))


def contract_principal_monomial(m: Polynomial, spec: TfpSpec) -> List[Polynomial]:
    """Generators of the preimage of ``<m>`` for a monomial ``m`` in x or y."""
    if not m.is_monomial():
        raise PolyError("expected a single monomial")
    if m.ring == spec.xy_ring:
        (e, _), = m.terms.items()
        nx = len(spec.x_ring)
        if any(e[:nx]) and any(e[nx:]):
            raise MixedMonomial("monomial involves both x and y variables")
        if any(e[nx:]):
            m = Polynomial(spec.y_ring, {e[nx:]: Fraction(1)})
        else:
            m = Polynomial(spec.x_ring, {e[:nx]: Fraction(1)})
    elif m.ring not in (spec.x_ring, spec.y_ring):
        raise RingMismatch("monomial must live in the x-, y- or xy-ring")
    if m.degree() == 0:
        raise UnitMonomial("the unit monomial generates the whole ring")
    m = m.monic(TermOrder())
    return _dedup(lift(m, spec) + quad_B(spec))


# -- orders ----------------------------------------------------------------

Weight = Union[TermOrder, Sequence, None]


def _as_stack(w: Weight, n: int) -> List[Tuple[Fraction, ...]]:
    if w is None:
        return []
    if isinstance(w, TermOrder):
        return w.weight_stack(n)
    w = list(w)
    if not w:
        return []
    if isinstance(w[0], (int, Fraction)):
        w = [w]
    out = [tuple(Fraction(x) for x in v) for v in w]
    for v in out:
        if len(v) != n:
            raise RingMismatch("weight length does not match ring")
    return out


def pullback_stages(w1: Weight, w2: Weight, spec: TfpSpec) -> List[Tuple[Fraction, ...]]:
    """``phi_B^*`` of the stage-wise pairs ``(w1_l, w2_l)``; the shorter
    stack is padded with zero stages."""
    nx, ny = len(spec.x_ring), len(spec.y_ring)
    a, b = _as_stack(w1, nx), _as_stack(w2, ny)
    zx, zy = (Fraction(0),) * nx, (Fraction(0),) * ny
    joint = [(u or zx) + (v or zy) for u, v in itertools.zip_longest(a, b)]
    return pullback_stack(joint, phi_B(spec))


def quad_weight(spec: TfpSpec) -> Tuple[int, ...]:
    """A weight under which every Quad_B binomial's first term leads:
    ``C - j*k`` on ``z^i_jk``, shifted by ``C`` to stay nonnegative."""
    c = max(j * k for _, j, k in spec.z_indices)
    return tuple(c - j * k for _, j, k in spec.z_indices)


def quad_perm(spec: TfpSpec) -> List[int]:
    """Variables sorted from largest to smallest in the lex order making
    Quad_B a Groebner basis: larger ``i``, then larger ``j``, then smaller ``k``."""
    ids = spec.z_indices
    return sorted(range(len(ids)), key=lambda v: (ids[v][0], ids[v][1], -ids[v][2]), reverse=True)


def tfp_weight(w1: Weight, w2: Weight, spec: TfpSpec) -> TermOrder:
    """Term order on the z-ring: pulled-back ``(w1, w2)`` stages, then the
    Quad_B weight as the infinitesimal correction, then a lex tie-break."""
    stages = pullback_stages(w1, w2, spec) + [quad_weight(spec)]
    return TermOrder(stages, "perm", quad_perm(spec))


def stage1_weight(w1: Weight, w2: Weight, spec: TfpSpec) -> List[Tuple[Fraction, ...]]:
    """The weight part of the order, before the Quad_B correction."""
    return pullback_stages(w1, w2, spec)


# -- Hilbert functions -----------------------------------------------------

def hadamard_hilbert(h1: Dict[Tuple[int, ...], int],
                     h2: Dict[Tuple[int, ...], int]) -> Dict[Tuple[int, ...], int]:
    """Pointwise product of two degree-count tables (absent degrees count 0)."""
    dims = {len(u) for u in itertools.chain(h1, h2)}
    if len(dims) > 1:
        raise PolyError("tables are graded by different groups")
    return {u: h1[u] * h2[u] for u in sorted(h1) if u in h2 and h1[u] * h2[u]}
