from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricfp.poly import (
    EQ, GT, LT, Inhomogeneous, MultiGrading, ParseError, PolyError, Polynomial, RingMismatch,
    RingSpec, TermOrder, ZeroPolynomial, compare_monomials, divide, multidegree, normal_form,
    parse_polynomial, split_var,
)
from toricfp.tfp import quad_perm, validate_spec

Z = RingSpec(["z_1_1_1", "z_1_1_2", "z_1_2_1", "z_1_2_2"])
XY = RingSpec(["x_1", "x_2", "x_3"])


def test_parse_binomial():
    f = parse_polynomial("z_1_1_1*z_1_2_2 - z_1_1_2*z_1_2_1", Z)
    assert len(f) == 2
    assert sorted(f.terms.values()) == [-1, 1]


def test_parse_zero_and_rationals():
    assert not parse_polynomial("0", Z)
    f = parse_polynomial("2*x_1^2 - 1/3*x_2", XY)
    assert f.terms == {(2, 0, 0): Fraction(2), (0, 1, 0): Fraction(-1, 3)}


@pytest.mark.parametrize("text", ["x_9", "x_1^", "1/0*x_1", "x_1 +", "x_1 ** 2", "y"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_polynomial(text, XY)


def test_parse_collects_terms():
    f = parse_polynomial("x_1*x_2 + x_2*x_1 - 2*x_1*x_2 + 3", XY)
    assert f == XY.one() * 3


def test_ring_invariants():
    with pytest.raises(PolyError):
        RingSpec(["x_1", "x_1"])
    with pytest.raises(PolyError):
        RingSpec(["x_1", "x_1_2"])
    assert split_var("z_1_2_3") == ("z", (1, 2, 3))


def test_prop_order_picks_underlined_term():
    spec = validate_spec([[1]], [2], [2])
    order = TermOrder((), "perm", quad_perm(spec))
    a = parse_polynomial("z_1_1_2*z_1_2_1", spec.z_ring).monomials()[0]
    b = parse_polynomial("z_1_1_1*z_1_2_2", spec.z_ring).monomials()[0]
    assert compare_monomials(order, a, b) == GT
    assert compare_monomials(order, a, a) == EQ


def test_weight_then_lex():
    order = TermOrder([(1, 1, 1)], "lex")
    assert compare_monomials(order, (2, 0, 0), (1, 1, 0)) == GT
    assert compare_monomials(order, (0, 0, 1), (1, 0, 0)) == LT
    with pytest.raises(RingMismatch):
        compare_monomials(order, (1, 0), (1, 0, 0))


def test_multidegree():
    ring = RingSpec(["q_1_2_3", "q_1_1_1"])
    g = MultiGrading(((0, 0, 1), (1, 0, 0)), (1, 1, 1))
    assert multidegree(ring.var("q_1_2_3"), g) == (0, 0, 1)
    assert multidegree(ring.one() * 5, g) == (0, 0, 0)
    with pytest.raises(Inhomogeneous):
        multidegree(parse_polynomial("q_1_1_1 + q_1_1_1^2", ring), g)
    with pytest.raises(ZeroPolynomial):
        multidegree(ring.zero(), g)


def test_grading_certificate_checked():
    with pytest.raises(PolyError):
        MultiGrading(((1, 0), (0, 1)), (1, 2))


def test_normal_form_examples():
    spec = validate_spec([[1]], [2], [2])
    order = TermOrder((), "perm", quad_perm(spec))
    g = parse_polynomial("z_1_1_2*z_1_2_1 - z_1_1_1*z_1_2_2", spec.z_ring)
    assert not normal_form(g, [g], order)
    assert normal_form(g, [], order) == g
    lead = parse_polynomial("z_1_1_2*z_1_2_1", spec.z_ring)
    assert normal_form(lead, [g], order) == parse_polynomial("z_1_1_1*z_1_2_2", spec.z_ring)


def test_to_str_round_trip():
    f = parse_polynomial("-1/2*x_1^3*x_2 + 7 - x_3", XY)
    assert parse_polynomial(str(f), XY) == f


# -- properties -------------------------------------------------------------

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(*(st.integers(0, 2) for _ in range(3)))
polys = st.dictionaries(monos, coeffs, max_size=4).map(lambda d: Polynomial(XY, d))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_distributive(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert all(isinstance(c, Fraction) and c for c in (f * g).terms.values())


@settings(max_examples=60, deadline=None)
@given(polys)
def test_string_round_trip(f):
    assert parse_polynomial(f.to_str(), XY) == f


orders = st.sampled_from([
    TermOrder((), "lex"), TermOrder((), "grevlex"), TermOrder([(2, 0, 1)], "grevlex"),
    TermOrder([(1, 1, 0), (0, 0, 3)], "perm", [2, 0, 1]),
])


@settings(max_examples=100, deadline=None)
@given(orders, monos, monos, monos)
def test_order_axioms(order, a, b, c):
    ab, ba = compare_monomials(order, a, b), compare_monomials(order, b, a)
    assert ab == -ba
    assert (ab == EQ) == (a == b)
    mul = lambda m, n: tuple(x + y for x, y in zip(m, n))
    assert compare_monomials(order, mul(a, c), mul(b, c)) == ab
    if ab == LT and compare_monomials(order, b, c) == LT:
        assert compare_monomials(order, a, c) == LT


@settings(max_examples=60, deadline=None)
@given(polys, st.lists(polys.filter(bool), max_size=3), orders)
def test_division_reexpands(f, G, order):
    qs, r = divide(f, G, order)
    total = r
    for q, g in zip(qs, G):
        total = total + q * g
    assert total == f
    lms = [g.leading(order)[0] for g in G]
    for m in r.terms:
        assert not any(all(x <= y for x, y in zip(l, m)) for l in lms)


@settings(max_examples=60, deadline=None)
@given(monos, monos)
def test_multidegree_additive(a, b):
    g = MultiGrading(((1, 0), (0, 1), (1, 0)), (1, 1))
    m = lambda e: Polynomial(XY, {e: Fraction(1)})
    assert multidegree(m(a) * m(b), g) == tuple(
        x + y for x, y in zip(multidegree(m(a), g), multidegree(m(b), g)))
