import itertools
from math import comb

import pytest
import sympy

from toricfp.groebner import ideal_equal, is_groebner
from toricfp.models import (
    BadSize, DimensionMismatch, FiniteGroup, InvalidSplit, NoInteriorEdge,
    NonIntervalDescendants, RootedTree, SimplicialComplex, chain, chain_generators,
    flattening, group_based_map, group_ideal_via_tfp, hidden_map, hierarchical_map, minors,
    model_ideal_via_tfp, ModelDims, reducible_split, segre_flattening_minors, segre_map,
    segre_via_tfp, tfp_of_reducible, tree_split,
)
from toricfp.oracle import kernel
from toricfp.poly import PolyError, RingSpec, TermOrder, multidegree, parse_polynomial
from toricfp.tfp import quad_B

GREVLEX = TermOrder((), "grevlex")
PATH4 = SimplicialComplex([[1, 2], [2, 3], [3, 4]])
CYCLE3 = SimplicialComplex([[1, 2], [1, 3], [2, 3]])


# -- complexes and maps -----------------------------------------------------

def test_complex_invariants():
    with pytest.raises(PolyError):
        SimplicialComplex([[1, 2], [1]])
    with pytest.raises(PolyError):
        SimplicialComplex([])
    with pytest.raises(DimensionMismatch):
        ModelDims([2, 1])
    with pytest.raises(DimensionMismatch):
        hierarchical_map(PATH4, (2, 2, 2))


def test_path_map_images():
    phi = hierarchical_map(PATH4, (2, 2, 2, 2))
    images = dict(zip(phi.source.names, map(str, phi.images)))
    for i in itertools.product((1, 2), repeat=4):
        a, b, c, d = i
        name = "p_" + "_".join(map(str, i))
        assert images[name] == f"a1_{a}_{b}*a2_{b}_{c}*a3_{c}_{d}"


def test_single_facet_has_zero_kernel():
    assert len(kernel(hierarchical_map(SimplicialComplex([[1, 2]]), (2, 3)))) == 0


def test_cycle_map_is_the_dependent_example():
    phi = hierarchical_map(CYCLE3, (2, 2, 2))
    images = dict(zip(phi.source.names, map(str, phi.images)))
    assert images["p_1_2_2"] == "a1_1_2*a2_1_2*a3_2_2"
    assert len(phi.source) == 8 and len(phi.target) == 12


def test_splits():
    splits = reducible_split(PATH4)
    assert {S for _, _, S in splits} >= {(2,), (3,)}
    for D1, D2, S in splits:
        assert set(D1.facets) | set(D2.facets) == set(PATH4.facets)
    assert reducible_split(CYCLE3) == []
    assert reducible_split(SimplicialComplex([[1, 2, 3]])) == []


def test_tfp_of_small_path():
    delta = SimplicialComplex([[1, 2], [2, 3]])
    split = next(sp for sp in reducible_split(delta) if sp[2] == (2,))
    ps = tfp_of_reducible(delta, (2, 2, 2), split)
    assert ps.spec.r == 2 and ps.spec.s == (2, 2) and ps.spec.t == (2, 2)
    gens = ps.glue([], [])
    assert len(gens) == 2 and gens == [ps.from_z(q) for q in quad_B(ps.spec)]
    assert ideal_equal(gens, kernel(hierarchical_map(delta, (2, 2, 2))).generators, GREVLEX)
    for g in gens:
        multidegree(g, ps.full_grading)


def test_invalid_split_rejected():
    delta = SimplicialComplex([[1, 2], [2, 3]])
    bogus = (SimplicialComplex([[1, 2]]), SimplicialComplex([[1, 2]]), (1, 2))
    with pytest.raises(InvalidSplit):
        tfp_of_reducible(delta, (2, 2, 2), bogus)
    split = reducible_split(delta)[0]
    with pytest.raises(InvalidSplit):
        tfp_of_reducible(delta, (2, 2, 2), split, H=split[2])


def test_path_split_components():
    split = next(sp for sp in reducible_split(PATH4) if sp[2] == (3,))
    D1, D2, _ = split
    assert D1.facets == ((1, 2), (2, 3)) and D2.facets == ((3, 4),)
    ps = tfp_of_reducible(PATH4, (2, 2, 2, 2), split)
    assert ps.spec.r == 2


def test_split_along_whole_facet_is_valid():
    delta = SimplicialComplex([[1, 2], [2, 3], [3, 4]])
    overlap = next(sp for sp in reducible_split(delta) if sp[2] == (2, 3))
    ps = tfp_of_reducible(delta, (2, 2, 2, 2), overlap)
    assert ps.spec.r == 4


@pytest.mark.parametrize("d", [(2, 2, 2, 2), (2, 3, 2, 2)])
def test_path_ideal_glues_to_kernel(d):
    glued = model_ideal_via_tfp(PATH4, d)
    oracle = kernel(hierarchical_map(PATH4, d))
    assert ideal_equal(glued.generators, oracle.generators, GREVLEX)
    assert is_groebner(glued.generators, glued.order)


# -- hidden variables and chains ---------------------------------------------

def test_hidden_map_example():
    phi = hidden_map(chain(1), (3, 2, 3), (2,))
    images = dict(zip(phi.source.names, map(str, phi.images)))
    assert images["q_2_3"] == "a1_2_1*a2_1_3 + a1_2_2*a2_2_3"


def test_no_hidden_vertices_is_plain_model():
    a = hidden_map(PATH4, (2, 2, 2, 2), ())
    b = hierarchical_map(PATH4, (2, 2, 2, 2))
    assert [str(x) for x in a.images] == [str(x) for x in b.images]


def test_partially_hidden_chain_map_shape():
    phi = hidden_map(chain(2), (3, 2, 3, 2, 3), (2, 4))
    assert len(phi.source) == 27 and len(phi.target) == 4 * 6
    assert all(len(im) == 4 for im in phi.images)


def test_chain_generator_lists():
    det, = chain_generators(1, (3, 2, 3))
    assert len(det) == 6
    assert chain_generators(1, (2, 2, 2)) == []
    gens = chain_generators(2, (3, 2, 3, 2, 3))
    assert len(gens) == 84 + 84 + 27
    with pytest.raises(DimensionMismatch):
        chain_generators(2, (3, 2, 3))


def test_chain_generators_vanish_on_parametrization():
    d = (3, 2, 3, 2, 3)
    phi = hidden_map(chain(2), d, (2, 4))
    for g in chain_generators(2, d)[::7]:
        assert not phi.apply(g)


def test_hidden_glue_matches_oracle():
    delta = SimplicialComplex([[1, 2], [2, 3], [3, 4]])
    d = (3, 2, 2, 2)
    glued = model_ideal_via_tfp(delta, d, (2,))
    oracle = kernel(hidden_map(delta, d, (2,)))
    assert ideal_equal(glued.generators, oracle.generators, GREVLEX)


# -- minors and Segre products -------------------------------------------------

def test_minors_basics():
    ring = RingSpec(["m_1", "m_2", "m_3", "m_4"])
    M = [[ring.var("m_1"), ring.var("m_2")], [ring.var("m_3"), ring.var("m_4")]]
    assert minors(M, 1) == [ring.var(f"m_{i}") for i in range(1, 5)]
    assert minors(M, 2) == [parse_polynomial("m_1*m_4 - m_2*m_3", ring)]
    with pytest.raises(BadSize):
        minors(M, 3)


def test_three_by_nine_minor_count():
    d = ModelDims({1: 3, 3: 3, 5: 3})
    ring = RingSpec(f"q_{a}_{b}_{c}" for a, b, c in d.states([1, 3, 5]))
    X = flattening(d, [1], ring, "q")
    assert (len(X), len(X[0])) == (3, 9)
    assert len(minors(X, 3)) == comb(9, 3) == 84


def test_segre_minors():
    assert len(segre_flattening_minors((2, 2))) == 1
    for d in [(2, 2), (2, 2, 2)]:
        assert ideal_equal(segre_flattening_minors(d), kernel(segre_map(d)).generators, GREVLEX)
        assert ideal_equal(segre_via_tfp(d).generators, segre_flattening_minors(d), GREVLEX)


def test_four_factor_segre_includes_square_flattening():
    d = ModelDims((2, 2, 2, 2))
    gens = {g.normalized() for g in segre_flattening_minors(d)}
    ring = RingSpec(f"p_{'_'.join(map(str, i))}" for i in d.states([1, 2, 3, 4]))
    square = minors(flattening(d, [1, 2], ring), 2)
    assert all(m.normalized() in gens for m in square if m)


# -- groups and trees ---------------------------------------------------------

CLAW = RootedTree.parse("1:u,2:u,u:3")
CATERPILLAR = RootedTree.parse("1:u,2:u,u:v,3:v,v:4")


def _s3():
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(idx[tuple(a[b[x]] for x in range(3))] for b in perms) for a in perms)
    return FiniteGroup(tuple(map(str, perms)), table, idx[(0, 1, 2)])


def test_group_validation():
    z3 = FiniteGroup.cyclic(3)
    assert z3.total([1, 2, 2]) == 2 and z3.abelian
    assert not _s3().abelian
    with pytest.raises(PolyError):
        FiniteGroup(("a", "b"), ((0, 1), (1, 1)), 0)
    with pytest.raises(PolyError):
        FiniteGroup(("a", "b"), ((0, 1), (0, 1)), 0)


def test_tree_validation():
    with pytest.raises(NonIntervalDescendants):
        RootedTree.parse("1:u,3:u,u:v,2:v,v:4")
    with pytest.raises(PolyError):
        RootedTree.parse("1:u,2:u,u:v")
    with pytest.raises(PolyError):
        RootedTree.parse("1:u,2:u,u:3,w:x")
    with pytest.raises(PolyError):
        RootedTree.parse("1:u,2:u,u:w,w:u,3:w")
    assert CATERPILLAR.edge_number == {1: 1, 2: 2, 3: 3, "v": 4, "u": 5}
    assert CATERPILLAR.interior_edges() == ["u"]


def test_claw_map():
    phi = group_based_map(FiniteGroup.cyclic(2), CLAW)
    images = dict(zip(phi.source.names, map(str, phi.images)))
    assert images == {"q_1_1": "a_1_1*a_2_1*a_3_1", "q_1_2": "a_1_1*a_2_2*a_3_2",
                      "q_2_1": "a_1_2*a_2_1*a_3_2", "q_2_2": "a_1_2*a_2_2*a_3_1"}
    # the four exponent vectors are independent, so nothing is killed
    assert sympy.Matrix(phi.exponent_columns()).rank() == 4
    assert len(kernel(phi)) == 0


def test_trivial_group_kernel():
    phi = group_based_map(FiniteGroup.cyclic(1), CATERPILLAR)
    assert len(phi.source) == 1 and len(kernel(phi)) == 0


def test_caterpillar_splits_into_claws():
    Tp, Tm, split = tree_split(CATERPILLAR, G=FiniteGroup.cyclic(2))
    assert str(Tp) == "1:v,2:v,v:3" and str(Tm) == "1:u,2:u,u:3"
    assert not Tp.interior_edges() and not Tm.interior_edges()
    with pytest.raises(NoInteriorEdge):
        tree_split(CLAW)


def test_group_ideal_glues_to_kernel():
    G = FiniteGroup.cyclic(2)
    glued = group_ideal_via_tfp(G, CATERPILLAR)
    oracle = kernel(group_based_map(G, CATERPILLAR))
    assert ideal_equal(glued.generators, oracle.generators, GREVLEX)


def test_two_cuts_stay_in_kernel():
    G = FiniteGroup.cyclic(2)
    tree = RootedTree.parse("1:u,2:u,u:w,3:v,4:v,v:w,w:5")
    glued = group_ideal_via_tfp(G, tree)
    phi = group_based_map(G, tree)
    assert glued.generators and all(not phi.apply(g) for g in glued.generators)


def test_grading_class_follows_cut_edge():
    G = FiniteGroup.cyclic(3)
    ps = tree_split(CATERPILLAR, G=G)[2].product
    for name in ps.full_ring.names:
        g = [int(x) - 1 for x in name.split("_")[1:]]
        deg = multidegree(ps.full_ring.var(name), ps.full_grading)
        assert deg.index(1) == G.total(g[:2])


def test_nonabelian_split_is_structurally_sound():
    # experimental: no reference values exist, only structure is checked
    G = _s3()
    split = tree_split(CATERPILLAR, G=G)[2]
    ps = split.product
    assert sorted(ps.z_names.values()) == sorted(ps.full_ring.names)
    phi = ps.full
    for q in quad_B(ps.spec)[::50]:
        assert not phi.apply(ps.from_z(q))
