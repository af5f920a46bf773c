"""Model families that decompose as toric fiber products.

Hierarchical and hidden-variable models are given by a simplicial complex on
integer vertices and a size per vertex; group-based models by a finite group
and a rooted tree. Model coordinates are ``p_...`` (hierarchical), ``q_...``
(hidden or group-based), parameters ``a<f>_...`` per facet ``f`` or
``a_<edge>_<h>`` per tree edge.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .groebner import NO_LIMITS, ComputeLimits
from .oracle import PolynomialMap, kernel
from .poly import MultiGrading, Polynomial, PolyError, RingSpec, TermOrder, var_name
from .tfp import TfpSpec, tfp_generators, tfp_weight, validate_spec


class DimensionMismatch(PolyError):
    pass


class InvalidSplit(PolyError):
    pass


class BadSize(PolyError):
    pass


class NonIntervalDescendants(PolyError):
    pass


class NoInteriorEdge(PolyError):
    pass


# -- simplicial complexes --------------------------------------------------

@dataclass(frozen=True)
class SimplicialComplex:
    """Facets over integer vertices; the vertex set is the union of facets."""

    facets: Tuple[Tuple[int, ...], ...]

    def __init__(self, facets):
        fs = sorted({tuple(sorted(set(f))) for f in facets}, key=lambda f: (f[0] if f else 0, f))
        if not fs or any(not f for f in fs):
            raise PolyError("a complex needs at least one nonempty facet")
        for a, b in itertools.permutations(fs, 2):
            if set(a) <= set(b):
                raise PolyError(f"facet {a} lies inside facet {b}")
        object.__setattr__(self, "facets", tuple(fs))

    @cached_property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(set().union(*self.facets)))

    def __len__(self):
        return len(self.facets)

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, f)) + "}" for f in self.facets) + "}"


@dataclass(frozen=True)
class ModelDims:
    """State-space size per vertex, each at least 2."""

    sizes: Tuple[Tuple[int, int], ...]

    def __init__(self, d: Union["ModelDims", Sequence[int], Mapping[int, int]]):
        if isinstance(d, ModelDims):
            items = d.sizes
        elif isinstance(d, Mapping):
            items = tuple(sorted(d.items()))
        else:
            items = tuple((v, int(x)) for v, x in enumerate(d, start=1))
        for v, x in items:
            if x < 2:
                raise DimensionMismatch(f"vertex {v} has size {x} < 2")
        object.__setattr__(self, "sizes", tuple(items))

    def __getitem__(self, v: int) -> int:
        return dict(self.sizes)[v]

    def restrict(self, vs: Sequence[int]) -> "ModelDims":
        d = dict(self.sizes)
        return ModelDims({v: d[v] for v in vs})

    def states(self, vs: Sequence[int]) -> List[Tuple[int, ...]]:
        """All index tuples on ``vs`` (1-based), lexicographically."""
        d = dict(self.sizes)
        return list(itertools.product(*(range(1, d[v] + 1) for v in vs)))

    def check(self, delta: SimplicialComplex):
        have = {v for v, _ in self.sizes}
        if set(delta.vertices) != have:
            raise DimensionMismatch(
                f"sizes given for vertices {sorted(have)}, complex has {list(delta.vertices)}")


def _parameter_ring(delta: SimplicialComplex, d: ModelDims) -> RingSpec:
    names = []
    for f, F in enumerate(delta.facets, start=1):
        names += [var_name(f"a{f}", idx) for idx in d.states(F)]
    return RingSpec(names)


def _parameter_image(delta: SimplicialComplex, ring: RingSpec, full: Dict[int, int]) -> Tuple[int, ...]:
    e = [0] * len(ring)
    for f, F in enumerate(delta.facets, start=1):
        e[ring.index[var_name(f"a{f}", [full[v] for v in F])]] += 1
    return tuple(e)


def hierarchical_map(delta: SimplicialComplex, d) -> PolynomialMap:
    """``p_i -> prod over facets F of a^F_{i_F}``."""
    d = ModelDims(d)
    d.check(delta)
    V = delta.vertices
    target = _parameter_ring(delta, d)
    states = d.states(V)
    source = RingSpec(var_name("p", i) for i in states)
    one = Fraction(1)
    ims = tuple(Polynomial(target, {_parameter_image(delta, target, dict(zip(V, i))): one})
                for i in states)
    return PolynomialMap(source, target, ims)


def hidden_map(delta: SimplicialComplex, d, H: Sequence[int]) -> PolynomialMap:
    """``q_{i_O} -> sum over hidden states j_H of the image of p_{i_O j_H}``."""
    d = ModelDims(d)
    d.check(delta)
    H = tuple(sorted(set(H)))
    if not set(H) <= set(delta.vertices):
        raise DimensionMismatch("hidden vertices outside the complex")
    O = tuple(v for v in delta.vertices if v not in H)
    if not O:
        raise DimensionMismatch("every vertex is hidden")
    target = _parameter_ring(delta, d)
    one = Fraction(1)
    source_states = d.states(O)
    hidden_states = d.states(H)
    ims = []
    for i in source_states:
        terms = {}
        for j in hidden_states:
            full = dict(zip(O, i))
            full.update(zip(H, j))
            terms[_parameter_image(delta, target, full)] = one
        ims.append(Polynomial(target, terms))
    source = RingSpec(var_name("q", i) for i in source_states)
    return PolynomialMap(source, target, tuple(ims))


def model_map(delta: SimplicialComplex, d, H: Sequence[int] = ()) -> PolynomialMap:
    return hidden_map(delta, d, H) if H else hierarchical_map(delta, d)


def reducible_split(delta: SimplicialComplex
                    ) -> List[Tuple[SimplicialComplex, SimplicialComplex, Tuple[int, ...]]]:
    """Every ``(D1, D2, S)`` with ``D1 u D2 = delta``, ``D1 n D2 = 2^S`` and both
    parts proper.

    Parts are built from facets of ``delta`` (a facet may sit in both).
    Each unordered split is listed once, with the first facet in ``D1``;
    the list is sorted by ``(|S|, S, facets of D1)``.
    """
    fs = delta.facets
    m = len(fs)
    out = []
    for mask1 in range(1, 1 << m):
        if not mask1 & 1:
            continue
        P = [i for i in range(m) if mask1 >> i & 1]
        if len(P) == m:
            continue
        rest = [i for i in range(m) if i not in P]
        for extra in range(1 << len(P)):
            Q = sorted(rest + [P[i] for i in range(len(P)) if extra >> i & 1])
            if len(Q) == m:
                continue
            meets = {tuple(sorted(set(fs[a]) & set(fs[b]))) for a in P for b in Q}
            top = [s for s in meets if not any(set(s) < set(t) for t in meets)]
            if len(top) != 1:
                continue
            out.append(((len(top[0]), top[0], tuple(P), tuple(Q)),
                        SimplicialComplex(fs[a] for a in P),
                        SimplicialComplex(fs[b] for b in Q), top[0]))
    out.sort(key=lambda x: x[0])
    return [(a, b, S) for _, a, b, S in out]


# -- gluing component ideals ----------------------------------------------

def transport_order(order: TermOrder, src: RingSpec, dst: RingSpec,
                    rename: Mapping[str, str]) -> TermOrder:
    """``order`` carried along a variable bijection ``src -> dst``."""
    stack = order.weight_stack(len(src))
    inv = {v: k for k, v in rename.items()}
    pos = [src.index[inv[m]] for m in dst.names]
    return TermOrder([tuple(w[p] for p in pos) for w in stack], "lex")


@dataclass
class ProductSplit:
    """A model ring identified with the z-ring of a toric fiber product.

    ``x_names``/``y_names`` send the left/right component coordinates to the
    x/y variables; ``z_names`` sends each z variable to a full coordinate.
    """

    spec: TfpSpec
    left: PolynomialMap
    right: PolynomialMap
    full: PolynomialMap
    x_names: Dict[str, str]
    y_names: Dict[str, str]
    z_names: Dict[str, str]

    @property
    def full_ring(self) -> RingSpec:
        return self.full.source

    def to_x(self, f: Polynomial) -> Polynomial:
        return f.rename(self.x_names, self.spec.x_ring)

    def to_y(self, g: Polynomial) -> Polynomial:
        return g.rename(self.y_names, self.spec.y_ring)

    def from_z(self, h: Polynomial) -> Polynomial:
        return h.rename(self.z_names, self.full_ring)

    def glue(self, F: Sequence[Polynomial], G: Sequence[Polynomial]) -> List[Polynomial]:
        gens = tfp_generators([self.to_x(f) for f in F], [self.to_y(g) for g in G], self.spec)
        return [self.from_z(h) for h in gens]

    def x_order(self, o1: TermOrder) -> TermOrder:
        return transport_order(o1, self.left.source, self.spec.x_ring, self.x_names)

    def y_order(self, o2: TermOrder) -> TermOrder:
        return transport_order(o2, self.right.source, self.spec.y_ring, self.y_names)

    def glue_order(self, o1: TermOrder, o2: TermOrder) -> TermOrder:
        """The product order on the full ring from component orders."""
        oz = tfp_weight(self.x_order(o1), self.y_order(o2), self.spec)
        return transport_order(oz, self.spec.z_ring, self.full_ring, self.z_names)

    @cached_property
    def full_grading(self) -> MultiGrading:
        zg = self.spec.z_grading
        back = {v: k for k, v in self.z_names.items()}
        zi = self.spec.z_ring.index
        return MultiGrading(tuple(zg.degrees[zi[back[n]]] for n in self.full_ring.names), zg.omega)


def _identity(r: int) -> List[List[int]]:
    return [[int(a == b) for b in range(r)] for a in range(r)]


def tfp_of_reducible(delta: SimplicialComplex, d, split, H: Sequence[int] = ()) -> ProductSplit:
    """Present the (hidden) model of ``delta`` as the toric fiber product of
    the models of the two parts, graded by the states of the separator."""
    d = ModelDims(d)
    d.check(delta)
    D1, D2, S = split
    H = tuple(sorted(H))
    if set(S) & set(H):
        raise InvalidSplit("separator meets the hidden vertices")
    if set(D1.facets) | set(D2.facets) != set(delta.facets):
        raise InvalidSplit("parts do not cover the complex")
    meets = {tuple(sorted(set(a) & set(b))) for a in D1.facets for b in D2.facets}
    if max(meets, key=len) != tuple(S) or any(not set(m) <= set(S) for m in meets):
        raise InvalidSplit(f"parts do not meet in the simplex on {S}")
    O = [v for v in delta.vertices if v not in H]
    O1 = [v for v in D1.vertices if v not in H]
    O2 = [v for v in D2.vertices if v not in H]
    R1 = [v for v in O1 if v not in S]
    R2 = [v for v in O2 if v not in S]
    left = model_map(D1, d.restrict(D1.vertices), [h for h in H if h in D1.vertices])
    right = model_map(D2, d.restrict(D2.vertices), [h for h in H if h in D2.vertices])
    full = model_map(delta, d, H)
    tag = "q" if H else "p"
    cls = {u: i for i, u in enumerate(d.states(S), start=1)}
    j_of = {u: j for j, u in enumerate(d.states(R1), start=1)}
    k_of = {u: k for k, u in enumerate(d.states(R2), start=1)}
    r = len(cls)
    spec = validate_spec(_identity(r), [len(j_of)] * r, [len(k_of)] * r)

    def pick(state, vs, sub):
        return tuple(state[vs.index(v)] for v in sub)

    ltag = "q" if any(h in D1.vertices for h in H) else "p"
    rtag = "q" if any(h in D2.vertices for h in H) else "p"
    x_names = {var_name(ltag, u): var_name("x", (cls[pick(u, O1, S)], j_of[pick(u, O1, R1)]))
               for u in d.states(O1)}
    y_names = {var_name(rtag, u): var_name("y", (cls[pick(u, O2, S)], k_of[pick(u, O2, R2)]))
               for u in d.states(O2)}
    z_names = {var_name("z", (cls[pick(u, O, S)], j_of[pick(u, O, R1)], k_of[pick(u, O, R2)])):
               var_name(tag, u) for u in d.states(O)}
    return ProductSplit(spec, left, right, full, x_names, y_names, z_names)


@dataclass
class ModelIdeal:
    """Generators of a model ideal with an order they were built for, and
    the top-level split with its two parts when the ideal was glued."""

    generators: List[Polynomial]
    order: TermOrder
    ring: RingSpec
    split: Optional[ProductSplit] = None
    parts: Optional[Tuple["ModelIdeal", "ModelIdeal"]] = None


def _oracle_leaf(phi: PolynomialMap, limits: ComputeLimits) -> ModelIdeal:
    gb = kernel(phi, limits)
    return ModelIdeal(list(gb.generators), gb.order, phi.source)


def model_ideal_via_tfp(delta: SimplicialComplex, d, H: Sequence[int] = (),
                        limits: ComputeLimits = NO_LIMITS,
                        leaf: Optional[Callable[[PolynomialMap], ModelIdeal]] = None) -> ModelIdeal:
    """Generators of the (hidden) model ideal, gluing along the first split
    whose separator avoids ``H``; irreducible pieces go to ``leaf`` (the
    elimination oracle by default), single facets give the zero ideal."""
    d = ModelDims(d)
    if leaf is None:
        leaf = lambda phi: _oracle_leaf(phi, limits)
    if len(delta) == 1:
        phi = model_map(delta, d, H)
        return ModelIdeal([], TermOrder(), phi.source)
    for split in reducible_split(delta):
        if set(split[2]) & set(H):
            continue
        ps = tfp_of_reducible(delta, d, split, H)
        D1, D2, _ = split
        a = model_ideal_via_tfp(D1, d.restrict(D1.vertices), [h for h in H if h in D1.vertices],
                                limits, leaf)
        b = model_ideal_via_tfp(D2, d.restrict(D2.vertices), [h for h in H if h in D2.vertices],
                                limits, leaf)
        return ModelIdeal(ps.glue(a.generators, b.generators),
                          ps.glue_order(a.order, b.order), ps.full_ring, ps, (a, b))
    return leaf(model_map(delta, d, H))


# -- Segre products and minors ---------------------------------------------

def points(n: int) -> SimplicialComplex:
    return SimplicialComplex([[v] for v in range(1, n + 1)])


def segre_map(d) -> PolynomialMap:
    """``p_i -> a1_{i_1} a2_{i_2} ...``: the Segre embedding."""
    return hierarchical_map(points(len(ModelDims(d).sizes)), d)


def segre_via_tfp(d, limits: ComputeLimits = NO_LIMITS) -> ModelIdeal:
    return model_ideal_via_tfp(points(len(ModelDims(d).sizes)), d, (), limits)


def _det(M: List[List[Polynomial]]) -> Polynomial:
    if len(M) == 1:
        return M[0][0]
    total = None
    for c in range(len(M)):
        sub = [row[:c] + row[c + 1:] for row in M[1:]]
        term = M[0][c] * _det(sub)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total


def minors(M: Sequence[Sequence[Polynomial]], k: int) -> List[Polynomial]:
    """All ``k x k`` minors, rows subsets outermost, lexicographic."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if k < 1 or k > min(rows, cols):
        raise BadSize(f"no {k}x{k} minors in a {rows}x{cols} matrix")
    return [_det([[M[i][j] for j in cs] for i in rs])
            for rs in itertools.combinations(range(rows), k)
            for cs in itertools.combinations(range(cols), k)]


def _dedup_normalized(polys) -> List[Polynomial]:
    seen = set()
    out = []
    for p in polys:
        if not p:
            continue
        key = p.normalized()
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def flattening(d: ModelDims, rows: Sequence[int], ring: RingSpec, tag: str = "p"
               ) -> List[List[Polynomial]]:
    """The generic tensor on ``ring`` as a matrix with rows indexed by the
    vertices ``rows`` and columns by the rest."""
    V = [v for v, _ in d.sizes]
    cols = [v for v in V if v not in rows]
    out = []
    for r in d.states(rows):
        line = []
        for c in d.states(cols):
            full = dict(zip(rows, r))
            full.update(zip(cols, c))
            line.append(ring.var(var_name(tag, [full[v] for v in V])))
        out.append(line)
    return out


def segre_flattening_minors(d) -> List[Polynomial]:
    """2x2 minors of every flattening of the generic tensor, deduplicated."""
    d = ModelDims(d)
    V = [v for v, _ in d.sizes]
    ring = RingSpec(var_name("p", i) for i in d.states(V))
    out = []
    for size in range(1, len(V)):
        for rows in itertools.combinations(V, size):
            if V[0] not in rows:
                continue
            out += minors(flattening(d, rows, ring), 2)
    return _dedup_normalized(out)


def chain(n: int) -> SimplicialComplex:
    return SimplicialComplex([[v, v + 1] for v in range(1, 2 * n + 1)])


def chain_generators(n: int, d) -> List[Polynomial]:
    """Minors of the flattenings ``X_j`` and slices ``Y_{j,i}`` for the chain
    of length ``2n`` with every even vertex hidden."""
    d = ModelDims(d)
    if len(d.sizes) != 2 * n + 1:
        raise DimensionMismatch(f"need {2 * n + 1} sizes for a chain with n={n}")
    odd = list(range(1, 2 * n + 2, 2))
    od = d.restrict(odd)
    ring = RingSpec(var_name("q", i) for i in od.states(odd))
    out = []
    for j in range(1, n + 1):
        h = d[2 * j]
        if h < min(d[2 * j - 1], d[2 * j + 1]):
            X = flattening(od, [v for v in odd if v < 2 * j], ring, "q")
            if h + 1 <= min(len(X), len(X[0])):
                out += minors(X, h + 1)
    for j in range(1, n):
        mid = 2 * j + 1
        rows = [v for v in odd if v < mid]
        cols = [v for v in odd if v > mid]
        for i in range(1, d[mid] + 1):
            Y = []
            for r in od.states(rows):
                line = []
                for c in od.states(cols):
                    line.append(ring.var(var_name("q", r + (i,) + c)))
                Y.append(line)
            if min(len(Y), len(Y[0])) >= 2:
                out += minors(Y, 2)
    return out


# -- group-based models on trees -------------------------------------------

@dataclass(frozen=True)
class FiniteGroup:
    """Elements ``0..n-1`` of a group given by its composition table."""

    labels: Tuple[str, ...]
    table: Tuple[Tuple[int, ...], ...]
    identity: int

    def __post_init__(self):
        n = len(self.labels)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise PolyError("composition table has the wrong shape")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise PolyError("composition table leaves the group")
        e = self.identity
        if any(self.table[e][a] != a or self.table[a][e] != a for a in range(n)):
            raise PolyError("identity element is not neutral")
        for a in range(n):
            if not any(self.table[a][b] == e for b in range(n)):
                raise PolyError(f"element {self.labels[a]} has no inverse")
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise PolyError("composition is not associative")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise PolyError("group order must be positive")
        return cls(tuple(str(g) for g in range(n)),
                   tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), 0)

    def __len__(self):
        return len(self.labels)

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def total(self, gs: Sequence[int]) -> int:
        """Left-to-right composition; the identity for an empty sequence."""
        acc = self.identity
        for g in gs:
            acc = self.table[acc][g]
        return acc

    @property
    def abelian(self) -> bool:
        n = len(self)
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))


Node = Union[int, str]


@dataclass(frozen=True)
class RootedTree:
    """Tree with integer leaves ``1..n+1`` rooted at leaf ``n+1``.

    ``parent`` maps every node except the root to its parent; internal nodes
    are strings. Edges are named by their child node.
    """

    parent: Tuple[Tuple[Node, Node], ...]

    def __init__(self, parent: Union[Mapping[Node, Node], Sequence[Tuple[Node, Node]]]):
        items = parent.items() if isinstance(parent, Mapping) else parent
        pm: Dict[Node, Node] = {}
        for c, p in items:
            if c in pm:
                raise PolyError(f"node {c} has two parents")
            pm[c] = p
        object.__setattr__(self, "parent", tuple(sorted(pm.items(), key=lambda cp: str(cp[0]))))
        self._validate()

    @classmethod
    def parse(cls, text: str) -> "RootedTree":
        """``"1:u,2:u,u:4"``: child:parent pairs; integers are leaves."""
        def node(tok):
            tok = tok.strip()
            if not tok:
                raise PolyError("empty node name")
            return int(tok) if tok.isdigit() else tok
        pairs = []
        for item in text.split(","):
            if ":" not in item:
                raise PolyError(f"bad edge {item!r}; expected child:parent")
            c, p = item.split(":", 1)
            pairs.append((node(c), node(p)))
        return cls(pairs)

    @cached_property
    def _pm(self) -> Dict[Node, Node]:
        return dict(self.parent)

    @cached_property
    def children(self) -> Dict[Node, List[Node]]:
        ch: Dict[Node, List[Node]] = {}
        for c, p in self.parent:
            ch.setdefault(p, []).append(c)
        return ch

    @cached_property
    def leaves(self) -> Tuple[int, ...]:
        nodes = set(self._pm) | set(self._pm.values())
        return tuple(sorted(v for v in nodes if isinstance(v, int)))

    @property
    def n(self) -> int:
        return len(self.leaves) - 1

    @property
    def root(self) -> int:
        return self.leaves[-1]

    def _validate(self):
        nodes = set(self._pm) | set(self._pm.values())
        ints = sorted(v for v in nodes if isinstance(v, int))
        if ints != list(range(1, len(ints) + 1)) or len(ints) < 2:
            raise PolyError("leaves must be labelled 1..n+1")
        root = ints[-1]
        if root in self._pm:
            raise PolyError(f"root leaf {root} must not have a parent")
        for v in nodes:
            seen = set()
            u = v
            while u != root:
                if u not in self._pm:
                    raise PolyError(f"node {v} is disconnected from the root")
                if u in seen:
                    raise PolyError("parent map has a cycle")
                seen.add(u)
                u = self._pm[u]
        for v in nodes:
            deg = len(self.children.get(v, ())) + (v != root)
            if isinstance(v, int) and deg != 1:
                raise PolyError(f"leaf {v} has degree {deg}")
            if isinstance(v, str) and deg < 2:
                raise PolyError(f"internal node {v} has degree {deg}")
        for e in self.edges:
            de = self.descendants(e)
            if de != tuple(range(de[0], de[-1] + 1)):
                raise NonIntervalDescendants(f"edge above {e} has descendants {de}")

    @cached_property
    def edges(self) -> Tuple[Node, ...]:
        """Edges by child node: pendant edges ``1..n``, then the root edge,
        then interior edges by (first descendant, -size)."""
        pend = sorted(c for c in self._pm if isinstance(c, int))
        top = [c for c, p in self._pm.items() if p == self.root]
        inner = [c for c in self._pm if isinstance(c, str) and c not in top]
        inner.sort(key=lambda c: (self.descendants(c)[0], -len(self.descendants(c)), c))
        return tuple(pend + top + inner)

    @cached_property
    def edge_number(self) -> Dict[Node, int]:
        return {c: i for i, c in enumerate(self.edges, start=1)}

    def descendants(self, child: Node) -> Tuple[int, ...]:
        if isinstance(child, int):
            return (child,)
        out = []
        for c in self.children.get(child, ()):
            out += self.descendants(c)
        return tuple(sorted(out))

    def interior_edges(self) -> List[Node]:
        return [c for c in self.edges
                if isinstance(c, str) and isinstance(self._pm[c], str)]

    def __str__(self):
        return ",".join(f"{c}:{p}" for c, p in self.parent)


def group_based_map(G: FiniteGroup, T: RootedTree) -> PolynomialMap:
    """``q_g -> prod over edges e of a_{e, g_e}`` (indices 1-based)."""
    n = T.n
    m = len(G)
    edges = T.edges
    target = RingSpec(var_name("a", (T.edge_number[e], h + 1)) for e in edges for h in range(m))
    des = [T.descendants(e) for e in edges]
    states = list(itertools.product(range(m), repeat=n))
    one = Fraction(1)
    ims = []
    for g in states:
        e_vec = [0] * len(target)
        for num, de in enumerate(des, start=1):
            h = G.total([g[i - 1] for i in de])
            e_vec[target.index[var_name("a", (num, h + 1))]] += 1
        ims.append(Polynomial(target, {tuple(e_vec): one}))
    source = RingSpec(var_name("q", [x + 1 for x in g]) for g in states)
    return PolynomialMap(source, target, tuple(ims))


def _subtree(T: RootedTree, top: Node) -> Dict[Node, Node]:
    out = {}
    stack = [top]
    while stack:
        v = stack.pop()
        for c in T.children.get(v, ()):
            out[c] = v
            stack.append(c)
    return out


def tree_split(T: RootedTree, e: Optional[Node] = None, G: Optional[FiniteGroup] = None
               ) -> Tuple[RootedTree, RootedTree, "TreeSplit"]:
    """Cut ``T`` along the interior edge above node ``e`` (default: the first).

    ``T-`` is everything below ``e``, rooted at its tail with leaves relabelled
    ``1..k`` and root ``k+1``. ``T+`` keeps the original root; the head of
    ``e`` becomes a leaf at the position of the first leaf it replaces.
    """
    interior = T.interior_edges()
    if not interior:
        raise NoInteriorEdge("tree has no interior edge")
    if e is None:
        e = interior[0]
    if e not in interior:
        raise NoInteriorEdge(f"edge above {e!r} is not interior")
    de = T.descendants(e)
    lo, hi = de[0], de[-1]
    k = len(de)
    n = T.n
    tail = T._pm[e]
    # lower tree
    low = {e: tail}
    low.update(_subtree(T, e))
    lrel = {l: l - lo + 1 for l in de}
    lrel[tail] = k + 1
    minus = {}
    for c, p in low.items():
        c2 = lrel.get(c, c) if isinstance(c, int) else c
        p2 = lrel.get(p, p) if (isinstance(p, int) or p == tail) else p
        if c == e:
            p2 = k + 1
        minus[c2] = p2
    # upper tree: drop everything under e, e's head becomes a leaf
    below = set(_subtree(T, e))
    urel = {}
    pos = 1
    for l in range(1, n + 1):
        if l == lo:
            urel[e] = pos
            pos += 1
        if lo <= l <= hi:
            continue
        urel[l] = pos
        pos += 1
    urel[T.root] = pos
    plus = {}
    for c, p in T.parent:
        if c in below:
            continue
        c2 = urel[c] if (isinstance(c, int) or c == e) else c
        p2 = urel[p] if isinstance(p, int) else p
        plus[c2] = p2
    Tp, Tm = RootedTree(plus), RootedTree(minus)
    split = TreeSplit(T, Tp, Tm, e, lo, hi, G) if G is not None else None
    return Tp, Tm, split


@dataclass
class TreeSplit:
    """Identification of the full group-based ring with a fiber product of
    the rings of the two halves, graded by ``g_e``."""

    tree: RootedTree
    plus: RootedTree
    minus: RootedTree
    edge: Node
    lo: int
    hi: int
    group: FiniteGroup

    @cached_property
    def product(self) -> ProductSplit:
        G, T = self.group, self.tree
        m = len(G)
        n = T.n
        lo, hi = self.lo, self.hi
        k = hi - lo + 1
        upper = [l for l in range(1, n + 1) if not lo <= l <= hi]
        j_of = {u: j for j, u in enumerate(itertools.product(range(m), repeat=n - k), start=1)}
        lows = list(itertools.product(range(m), repeat=k))
        k_of: Dict[Tuple[int, ...], int] = {}
        count = [0] * m
        for u in lows:
            h = G.total(u)
            count[h] += 1
            k_of[u] = count[h]
        spec = validate_spec(_identity(m), [len(j_of)] * m, count)

        def qname(g):
            return var_name("q", [x + 1 for x in g])

        x_names, y_names, z_names = {}, {}, {}
        for gp in itertools.product(range(m), repeat=n - k + 1):
            h = gp[lo - 1]
            rest = gp[:lo - 1] + gp[lo:]
            x_names[qname(gp)] = var_name("x", (h + 1, j_of[rest]))
        for u in lows:
            y_names[qname(u)] = var_name("y", (G.total(u) + 1, k_of[u]))
        for g in itertools.product(range(m), repeat=n):
            u = g[lo - 1:hi]
            rest = tuple(g[l - 1] for l in upper)
            z_names[var_name("z", (G.total(u) + 1, j_of[rest], k_of[u]))] = qname(g)
        return ProductSplit(spec, group_based_map(G, self.plus), group_based_map(G, self.minus),
                            group_based_map(G, T), x_names, y_names, z_names)


def group_ideal_via_tfp(G: FiniteGroup, T: RootedTree, limits: ComputeLimits = NO_LIMITS,
                        leaf: Optional[Callable[[PolynomialMap], ModelIdeal]] = None) -> ModelIdeal:
    """Generators of the group-based ideal, cutting interior edges until
    only stars remain; stars go to ``leaf`` (the elimination oracle)."""
    if leaf is None:
        leaf = lambda phi: _oracle_leaf(phi, limits)
    if not T.interior_edges():
        return leaf(group_based_map(G, T))
    Tp, Tm, split = tree_split(T, None, G)
    a = group_ideal_via_tfp(G, Tp, limits, leaf)
    b = group_ideal_via_tfp(G, Tm, limits, leaf)
    ps = split.product
    return ModelIdeal(ps.glue(a.generators, b.generators), ps.glue_order(a.order, b.order),
                      ps.full_ring, ps, (a, b))
