"""Exact sparse polynomials over Q, rings of indexed variables, gradings and
term orders.

Monomials are dense exponent tuples; a :class:`Polynomial` is a map from
monomial to nonzero :class:`~fractions.Fraction` tied to a :class:`RingSpec`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from operator import add, sub
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    pass


class RingMismatch(PolyError):
    pass


class Inhomogeneous(PolyError):
    pass


class ZeroPolynomial(PolyError):
    pass


_VAR_RE = re.compile(r"^([A-Za-z][A-Za-z0-9]*)((?:_\d+)+)$")


def split_var(name: str) -> Tuple[str, Tuple[int, ...]]:
    """``"z_1_2_3"`` -> ``("z", (1, 2, 3))``."""
    m = _VAR_RE.match(name)
    if not m:
        raise ParseError(f"bad variable name {name!r}")
    return m.group(1), tuple(int(p) for p in m.group(2)[1:].split("_"))


def var_name(tag: str, idx: Iterable[int]) -> str:
    return tag + "".join(f"_{i}" for i in idx)


class RingSpec:
    """An ordered list of named variables; position 0 is the first variable."""

    __slots__ = ("names", "index", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        index = {}
        arity: Dict[str, int] = {}
        for pos, n in enumerate(names):
            if n in index:
                raise PolyError(f"duplicate variable {n}")
            tag, idx = split_var(n)
            if arity.setdefault(tag, len(idx)) != len(idx):
                raise PolyError(f"tag {tag!r} used with index tuples of different arity")
            index[n] = pos
        self.names = names
        self.index = index
        self._hash = hash(names)

    @classmethod
    def from_indices(cls, tag: str, indices: Iterable[Sequence[int]]) -> "RingSpec":
        return cls(var_name(tag, i) for i in indices)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, RingSpec) and self.names == other.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if len(self.names) > 6:
            return f"RingSpec({self.names[0]}, ..., {self.names[-1]}; n={len(self.names)})"
        return f"RingSpec{self.names}"

    def __add__(self, other: "RingSpec") -> "RingSpec":
        return RingSpec(self.names + other.names)

    def var(self, name: str) -> "Polynomial":
        e = [0] * len(self.names)
        e[self.index[name]] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> List["Polynomial"]:
        return [self.var(n) for n in self.names]

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * len(self.names): Fraction(1)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def monomial(self, exps: Dict[str, int], coeff=1) -> "Polynomial":
        e = [0] * len(self.names)
        for n, k in exps.items():
            e[self.index[n]] += k
        return Polynomial(self, {tuple(e): Fraction(coeff)})


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Dict[Monomial, Fraction], _trusted=False):
        self.ring = ring
        if _trusted:
            self.terms = terms
        else:
            n = len(ring)
            clean = {}
            for m, c in terms.items():
                if len(m) != n:
                    raise RingMismatch("monomial length does not match ring")
                if c:
                    clean[tuple(m)] = _frac(c)
            self.terms = clean
        self._hash = None

    # -- basic protocol ----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        # graded, then lex by ring order, descending
        for m in sorted(self.terms, key=lambda m: (sum(m), m), reverse=True):
            yield m, self.terms[m]

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self._const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return self.to_str()

    def to_str(self, order: Optional["TermOrder"] = None) -> str:
        if order is None:
            items = list(self)
        else:
            items = sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)
        return format_terms(items, self.ring)

    # -- arithmetic --------------------------------------------------------
    def _const(self, c) -> "Polynomial":
        return Polynomial(self.ring, {(0,) * len(self.ring): _frac(c)})

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self._const(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Polynomial(self.ring, t, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            c0 = _frac(other)
            return Polynomial(self.ring, {m: c * c0 for m, c in self.terms.items()}, _trusted=True)
        other = self._coerce(other)
        t: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(map(add, m1, m2))
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return Polynomial(self.ring, t, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_monomial(self, mono: Monomial, coeff=1) -> "Polynomial":
        c0 = _frac(coeff)
        return Polynomial(
            self.ring, {tuple(map(add, m, mono)): c * c0 for m, c in self.terms.items()}, _trusted=True
        )

    # -- inspection --------------------------------------------------------
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self]

    def variables(self) -> List[str]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return [self.ring.names[i] for i in sorted(used)]

    def leading(self, order: "TermOrder") -> Tuple[Monomial, Fraction]:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order: "TermOrder") -> "Polynomial":
        _, c = self.leading(order)
        return self * (1 / c)

    def normalized(self) -> "Polynomial":
        """Primitive integer form with positive leading coefficient (ring order)."""
        if not self.terms:
            return self
        den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in self.terms.values()), 1)
        nums = [int(c * den) for c in self.terms.values()]
        g = reduce(gcd, nums)
        lead = next(iter(self))[1]
        if lead < 0:
            g = -g
        return self * Fraction(den, g)

    # -- ring changes ------------------------------------------------------
    def rename(self, mapping: Dict[str, str], target: RingSpec) -> "Polynomial":
        """Send each variable name through ``mapping`` (identity if absent) into ``target``."""
        pos = []
        for n in self.ring.names:
            tn = mapping.get(n, n)
            if tn not in target.index:
                pos.append(None)
            else:
                pos.append(target.index[tn])
        out = {}
        tlen = len(target)
        for m, c in self.terms.items():
            e = [0] * tlen
            for i, k in enumerate(m):
                if k:
                    if pos[i] is None:
                        raise RingMismatch(f"variable {self.ring.names[i]} has no image in target ring")
                    e[pos[i]] += k
            e = tuple(e)
            out[e] = out.get(e, 0) + c
        return Polynomial(target, out)

    def embed(self, target: RingSpec) -> "Polynomial":
        return self.rename({}, target)


def format_terms(items: Sequence[Tuple[Monomial, Fraction]], ring: RingSpec) -> str:
    if not items:
        return "0"
    parts = []
    for n, (m, c) in enumerate(items):
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(ring.names[i])
            elif e:
                factors.append(f"{ring.names[i]}^{e}")
        neg = c < 0
        a = -c if neg else c
        coeff = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        if factors:
            body = "*".join(factors) if a == 1 else coeff + "*" + "*".join(factors)
        else:
            body = coeff
        if n == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# -- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*(?:_\d+)+)|([-+*/^]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        if m.group(1) is not None:
            out.append(("num", m.group(1)))
        elif m.group(2) is not None:
            out.append(("var", m.group(2)))
        else:
            out.append(("op", m.group(3)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_polynomial(text: str, ring: RingSpec) -> Polynomial:
    """Parse ``text`` (e.g. ``"2*x_1_1^2 - 1/3*x_1_2"``) into a polynomial over ``ring``."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial")
    n = len(ring)
    terms: Dict[Monomial, Fraction] = {}
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    sign = 1
    kind, val = peek()
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i += 1
    while True:
        coeff = Fraction(sign)
        exps = [0] * n
        seen_factor = False
        while True:
            kind, val = peek()
            if kind == "num":
                i += 1
                num = int(val)
                if peek() == ("op", "/"):
                    i += 1
                    k2, v2 = peek()
                    if k2 != "num":
                        raise ParseError("expected denominator after '/'")
                    i += 1
                    if int(v2) == 0:
                        raise ParseError("zero denominator")
                    coeff *= Fraction(num, int(v2))
                else:
                    coeff *= num
            elif kind == "var":
                i += 1
                if val not in ring.index:
                    raise ParseError(f"unknown variable {val!r}")
                e = 1
                if peek() == ("op", "^"):
                    i += 1
                    k2, v2 = peek()
                    if k2 != "num":
                        raise ParseError(f"malformed exponent after {val}")
                    i += 1
                    e = int(v2)
                exps[ring.index[val]] += e
            else:
                raise ParseError(f"expected coefficient or variable, got {val!r}")
            seen_factor = True
            if peek() == ("op", "*"):
                i += 1
                continue
            break
        if not seen_factor:
            raise ParseError("empty term")
        m = tuple(exps)
        v = terms.get(m, 0) + coeff
        if v:
            terms[m] = v
        else:
            terms.pop(m, None)
        kind, val = peek()
        if kind is None:
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            if peek()[0] is None:
                raise ParseError("dangling sign")
            continue
        raise ParseError(f"unexpected token {val!r}")
    return Polynomial(ring, terms, _trusted=True)


def variables_in(text: str) -> List[str]:
    """Variable names appearing in ``text``, in order of first appearance."""
    seen = {}
    for kind, val in _tokenize(text):
        if kind == "var":
            seen.setdefault(val, None)
    return list(seen)


# -- gradings --------------------------------------------------------------

@dataclass(frozen=True)
class MultiGrading:
    """A degree vector in Z^d per ring variable, with optional certificate
    ``omega`` satisfying ``omega . deg(v) == 1`` for every variable."""

    degrees: Tuple[Tuple[int, ...], ...]
    omega: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self):
        if not self.degrees:
            return
        d = len(self.degrees[0])
        for v in self.degrees:
            if len(v) != d or not all(isinstance(x, int) for x in v):
                raise PolyError("degree vectors must be integral and of equal length")
        if self.omega is not None:
            if len(self.omega) != d:
                raise PolyError("omega has wrong length")
            for v in self.degrees:
                if sum(Fraction(w) * x for w, x in zip(self.omega, v)) != 1:
                    raise PolyError(f"omega certificate fails on degree {v}")

    @property
    def dim(self) -> int:
        return len(self.degrees[0]) if self.degrees else 0

    def of_monomial(self, m: Monomial) -> Tuple[int, ...]:
        out = [0] * self.dim
        for e, v in zip(m, self.degrees):
            if e:
                for k, x in enumerate(v):
                    out[k] += e * x
        return tuple(out)


def multidegree(f: Polynomial, grading: MultiGrading) -> Tuple[int, ...]:
    """Common degree vector of every term of ``f``."""
    if not f.terms:
        raise ZeroPolynomial("multidegree of the zero polynomial")
    if len(grading.degrees) != len(f.ring):
        raise RingMismatch("grading does not match ring size")
    degs = {grading.of_monomial(m) for m in f.terms}
    if len(degs) != 1:
        raise Inhomogeneous(f"terms of {f} have degrees {sorted(degs)}")
    return degs.pop()


# -- term orders -----------------------------------------------------------

LT, EQ, GT = -1, 0, 1


def _int_stage(w: Sequence) -> Tuple[int, ...]:
    fr = [Fraction(x) for x in w]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    return tuple(int(x * den) for x in fr)


class TermOrder:
    """Weight stack compared stage by stage, then a total tie-break.

    ``tie_break`` is ``"lex"`` (first ring variable most significant),
    ``"grevlex"`` or ``"perm"`` (lex with the variable positions listed in
    ``perm``, most significant first). Rational weights are rescaled per
    stage to integers, which preserves every comparison.
    """

    __slots__ = ("weights", "tie_break", "perm", "_stages", "_cache")

    def __init__(self, weights: Sequence[Sequence] = (), tie_break: str = "grevlex",
                 perm: Optional[Sequence[int]] = None):
        if tie_break not in ("lex", "grevlex", "perm"):
            raise ValueError(f"unknown tie-break {tie_break!r}")
        if (tie_break == "perm") != (perm is not None):
            raise ValueError("perm must be given exactly when tie_break='perm'")
        self.weights = tuple(tuple(Fraction(x) for x in w) for w in weights)
        self.tie_break = tie_break
        self.perm = tuple(perm) if perm is not None else None
        if self.perm is not None and sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm is not a permutation")
        self._stages = [_int_stage(w) for w in self.weights]
        self._cache: Dict[Monomial, tuple] = {}

    def __eq__(self, other):
        return (isinstance(other, TermOrder) and self.weights == other.weights
                and self.tie_break == other.tie_break and self.perm == other.perm)

    def __hash__(self):
        return hash((self.weights, self.tie_break, self.perm))

    def __repr__(self):
        return f"TermOrder(stages={len(self.weights)}, tie_break={self.tie_break!r})"

    def key(self, m: Monomial) -> tuple:
        try:
            return self._cache[m]
        except KeyError:
            pass
        k = tuple(sum(a * b for a, b in zip(w, m)) for w in self._stages)
        if self.tie_break == "lex":
            k = k + m
        elif self.tie_break == "grevlex":
            k = k + (sum(m),) + tuple(-e for e in reversed(m))
        else:
            k = k + tuple(m[p] for p in self.perm)
        self._cache[m] = k
        return k

    def weight_stack(self, n: int, tie_break: bool = True) -> List[Tuple[Fraction, ...]]:
        """The order as a pure list of weight vectors over ``n`` variables."""
        out = [w for w in self.weights]
        for w in out:
            if len(w) != n:
                raise RingMismatch("weight vector length does not match ring")
        if not tie_break:
            return out
        unit = lambda i, s=1: tuple(Fraction(s if j == i else 0) for j in range(n))
        if self.tie_break == "lex":
            out += [unit(i) for i in range(n)]
        elif self.tie_break == "grevlex":
            out.append(tuple(Fraction(1) for _ in range(n)))
            out += [unit(i, -1) for i in reversed(range(n))]
        else:
            if len(self.perm) != n:
                raise RingMismatch("perm length does not match ring")
            out += [unit(p) for p in self.perm]
        return out



def compare_monomials(order: TermOrder, a: Monomial, b: Monomial) -> int:
    if len(a) != len(b):
        raise RingMismatch("monomials from different rings")
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return EQ if ka == kb else (GT if ka > kb else LT)


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def divide(f: Polynomial, G: Sequence[Polynomial], order: TermOrder
           ) -> Tuple[List[Polynomial], Polynomial]:
    """Multivariate division: returns quotients ``q`` and remainder ``r`` with
    ``f == sum(q_i * G_i) + r``. Always divides by the earliest eligible
    element of ``G``."""
    for g in G:
        if g.ring != f.ring:
            raise RingMismatch("divisor from another ring")
        if not g:
            raise ZeroPolynomial("division by zero polynomial")
    leads = [g.leading(order) for g in G]
    quot: List[Dict[Monomial, Fraction]] = [dict() for _ in G]
    rest = dict(f.terms)
    rem: Dict[Monomial, Fraction] = {}
    key = order.key
    while rest:
        m = max(rest, key=key)
        c = rest.pop(m)
        for idx, (lm, lc) in enumerate(leads):
            if monomial_divides(lm, m):
                q = tuple(map(sub, m, lm))
                fac = c / lc
                quot[idx][q] = quot[idx].get(q, 0) + fac
                for gm, gc in G[idx].terms.items():
                    if gm == lm:
                        continue
                    mm = tuple(map(add, gm, q))
                    v = rest.get(mm, 0) - fac * gc
                    if v:
                        rest[mm] = v
                    else:
                        rest.pop(mm, None)
                break
        else:
            rem[m] = c
    return ([Polynomial(f.ring, q) for q in quot], Polynomial(f.ring, rem, _trusted=True))


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: TermOrder) -> Polynomial:
    return divide(f, G, order)[1]
