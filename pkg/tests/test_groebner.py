import random
from fractions import Fraction
import re

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from toricfp.groebner import (
    ComputeLimits, LimitExceeded, MissingCertificate, buchberger, groebner_witness,
    ideal_difference, ideal_equal, ideal_subset, initial_forms, is_groebner, reduce_basis,
    standard_monomial_table,
)
from toricfp.poly import MultiGrading, Polynomial, RingSpec, TermOrder, parse_polynomial

R = RingSpec(["x_1", "x_2", "x_3"])
_ALIAS = {"x": "x_1", "y": "x_2", "z": "x_3"}
LEX = TermOrder((), "lex")
GREVLEX = TermOrder((), "grevlex")


def P(*texts, ring=R):
    """Parse with ``x, y, z`` standing for ``x_1, x_2, x_3``."""
    return [parse_polynomial(re.sub(r"\b[xyz]\b", lambda m: _ALIAS[m.group()], t), ring)
            for t in texts]


def _sympy_gb(polys, order_name):
    gens = sympy.symbols(" ".join(R.names))
    exprs = [sympy.sympify(p.to_str().replace("^", "**")) for p in polys]
    G = sympy.groebner(exprs, *gens, order=order_name)
    return sorted(str(sympy.expand(g / sympy.Poly(g, *gens).LC(order=order_name)))
                  for g in G.exprs)


def _monic_strings(gb):
    out = []
    for g in gb.generators:
        lc = g.leading(gb.order)[1]
        out.append(str(sympy.expand(sympy.sympify((g * (1 / lc)).to_str().replace("^", "**")))))
    return sorted(out)


def test_twisted_cubic_lex_matches_sympy():
    F = P("x^2 - y", "x^3 - z")
    gb = buchberger(F, LEX)
    assert _monic_strings(gb) == _sympy_gb(F, "lex")
    assert is_groebner(gb.generators, LEX)


def test_non_basis_detected():
    F = P("x^2 - y", "x^3 - z")
    assert not is_groebner(F, LEX)
    w = groebner_witness(F, LEX)
    assert w is not None and w


def test_unit_ideal():
    gb = buchberger(P("x*y - 1", "x"), GREVLEX)
    assert gb.is_unit() and len(gb) == 1


def test_zero_ideal_keeps_ring():
    gb = buchberger(P("0"), GREVLEX)
    assert len(gb) == 0 and gb.ring is R


def test_reduced_basis_is_unique_under_generator_shuffle():
    F = P("x*y - z^2", "y^2 - x*z", "x^2*z - y*z^2 + x", "x^3 - y")
    ref = buchberger(F, GREVLEX).generators
    rng = random.Random(3)
    for _ in range(4):
        rng.shuffle(F)
        assert buchberger(F, GREVLEX).generators == ref
    assert reduce_basis(ref, GREVLEX).generators == ref


def test_limits_raise_with_partial_basis():
    F = P("x^3 - y*z^2", "y^3 - x^2*z", "z^3 - x*y^2")
    with pytest.raises(LimitExceeded) as err:
        buchberger(F, LEX, ComputeLimits(max_basis_size=4))
    assert len(err.value.partial) >= 3
    assert ComputeLimits.parse("4,,9") == ComputeLimits(4, None, 9)
    with pytest.raises(ValueError):
        ComputeLimits(max_degree=0)


def test_initial_forms_and_ideal_checks():
    f, = P("x^2 - y*z + x")
    assert initial_forms([f], [(1, 1, 1)]) == P("x^2 - y*z")
    assert ideal_equal(P("x - y", "y - z"), P("x - z", "x - y"), GREVLEX)
    diff = ideal_difference(P("x - y"), P("x - y", "z"), GREVLEX)
    assert diff == ("B", P("z")[0])
    assert ideal_subset(P("x^2 - y^2"), P("x - y"), GREVLEX) is None
    assert ideal_subset(P("x"), P("x - y"), GREVLEX) == P("x")[0]


def test_standard_monomials_of_quadric():
    gb = buchberger(P("x*z - y^2"), GREVLEX)
    g = MultiGrading(((1,), (1,), (1,)), (1,))
    table = standard_monomial_table(gb, g, 4)
    assert table == {(0,): 1, (1,): 3, (2,): 5, (3,): 7, (4,): 9}
    empty = buchberger(P("0"), GREVLEX)
    assert standard_monomial_table(empty, g, 2) == {(0,): 1, (1,): 3, (2,): 6}
    with pytest.raises(MissingCertificate):
        standard_monomial_table(gb, MultiGrading(((1,), (1,), (1,))), 2)


def test_standard_monomials_zero_for_unit_ideal():
    gb = buchberger(P("1"), GREVLEX)
    assert standard_monomial_table(gb, MultiGrading(((1,),) * 3, (1,)), 3) == {}


terms = st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def _poly(ts):
    terms_ = {}
    for c, *e in ts:
        terms_[tuple(e)] = terms_.get(tuple(e), 0) + c
    return Polynomial(R, {e: Fraction(c) for e, c in terms_.items() if c})


polys = st.lists(terms, min_size=1, max_size=3).map(_poly)


@settings(max_examples=40, deadline=None)
@given(st.lists(polys, min_size=1, max_size=3), st.sampled_from(["lex", "grevlex"]))
def test_random_bases_agree_with_sympy(F, name):
    if not any(F):
        return
    gb = buchberger(F, TermOrder((), name))
    assert is_groebner(gb.generators, gb.order)
    assert _monic_strings(gb) == _sympy_gb([f for f in F if f], name)
