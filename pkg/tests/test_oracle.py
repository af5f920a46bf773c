import itertools
import random
from fractions import Fraction

import pytest
from sympy.combinatorics import Permutation

from toricfp.groebner import ideal_equal, ideal_subset, initial_forms, buchberger
from toricfp.models import chain, chain_generators, hidden_map
from toricfp.oracle import (
    NotMonomialMap, PolynomialMap, contract, kernel, pullback_stack, pullback_weight,
)
from toricfp.poly import PolyError, Polynomial, RingSpec, TermOrder, parse_polynomial
from toricfp.tfp import contract_principal_monomial, phi_B, tfp_generators, validate_spec

GREVLEX = TermOrder((), "grevlex")


def _det3(ring, tag):
    total = ring.zero()
    for p in itertools.permutations(range(3)):
        term = ring.one() * Permutation(list(p)).signature()
        for i in range(3):
            term = term * ring.var(f"{tag}_{i + 1}_{p[i] + 1}")
        total = total + term
    return total


def test_segre_kernel_is_the_minor():
    spec = validate_spec([[1]], [2], [2])
    K = kernel(phi_B(spec))
    expected = parse_polynomial("z_1_1_1*z_1_2_2 - z_1_1_2*z_1_2_1", spec.z_ring)
    assert len(K) == 1
    assert K.generators[0] in (expected, -expected)


def test_hidden_three_state_chain_kernel_is_determinant():
    K = kernel(hidden_map(chain(1), (3, 2, 3), (2,)))
    det, = chain_generators(1, (3, 2, 3))
    assert len(K) == 1
    assert ideal_equal(K.generators, [det], GREVLEX)


def test_free_map_has_zero_kernel():
    src, tgt = RingSpec(["x_1", "x_2"]), RingSpec(["t_1", "t_2"])
    phi = PolynomialMap(src, tgt, (tgt.var("t_1"), tgt.var("t_2")))
    K = kernel(phi)
    assert len(K) == 0 and K.ring is src


def test_contract_of_zero_is_kernel():
    spec = validate_spec([[1, 0], [0, 1]], [2, 2], [2, 1])
    phi = phi_B(spec)
    assert contract(phi, [spec.xy_ring.zero()]).generators == kernel(phi).generators


def test_contract_rejects_name_clash_and_foreign_ring():
    ring = RingSpec(["x_1"])
    with pytest.raises(PolyError):
        kernel(PolynomialMap(ring, ring, (ring.var("x_1"),)))
    spec = validate_spec([[1]], [2], [2])
    with pytest.raises(PolyError):
        contract(phi_B(spec), [spec.z_ring.var("z_1_1_1")])


def test_contract_recovers_determinant_product():
    spec = validate_spec([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [3, 3, 3], [3, 3, 3])
    xy = spec.xy_ring
    f, g = _det3(xy, "x"), _det3(xy, "y")
    K = contract(phi_B(spec), [f, g])
    F = [_det3(spec.x_ring, "x")]
    G = [_det3(spec.y_ring, "y")]
    gens = tfp_generators(F, G, spec)
    assert len(gens) == 81
    assert ideal_equal(K.generators, gens, GREVLEX)


@pytest.mark.parametrize("seed", range(4))
def test_contract_principal_monomial_matches_oracle(seed):
    rng = random.Random(seed)
    spec = validate_spec([[1, 0], [0, 1]], [rng.randint(1, 3), 2], [2, rng.randint(1, 3)])
    side = rng.choice(["x", "y"])
    ring = spec.x_ring if side == "x" else spec.y_ring
    exps = tuple(rng.randint(0, 1) for _ in ring.names)
    if not any(exps):
        exps = (1,) + exps[1:]
    m = Polynomial(ring, {exps: Fraction(1)})
    K = contract(phi_B(spec), [m.embed(spec.xy_ring)])
    assert ideal_equal(K.generators, contract_principal_monomial(m, spec), GREVLEX)


def test_pullback_examples():
    spec = validate_spec([[1]], [2], [3])
    phi = phi_B(spec)
    assert pullback_weight([0] * len(spec.xy_ring), phi) == (0,) * len(spec.z_ring)
    unit = [1 if n == "x_1_1" else 0 for n in spec.xy_ring.names]
    w = pullback_weight(unit, phi)
    for name, wt in zip(spec.z_ring.names, w):
        assert wt == (1 if name.startswith("z_1_1_") else 0)
    with pytest.raises(NotMonomialMap):
        pullback_weight([1] * 12, hidden_map(chain(1), (3, 2, 3), (2,)))


@pytest.mark.parametrize("seed", range(5))
def test_pullback_commutes_with_image_weight(seed):
    rng = random.Random(seed)
    spec = validate_spec([[1, 0], [0, 1]], [2, 3], [3, 1])
    phi = phi_B(spec)
    w = [rng.randint(-3, 3) for _ in spec.xy_ring.names]
    pw = pullback_weight(w, phi)
    for _ in range(10):
        a = tuple(rng.randint(0, 2) for _ in spec.z_ring.names)
        image = phi.apply(Polynomial(spec.z_ring, {a: Fraction(1)}))
        (b, _), = image.terms.items()
        assert sum(x * y for x, y in zip(pw, a)) == sum(x * y for x, y in zip(w, b))
    assert pullback_stack([w, w], phi) == [pw, pw]


def test_kernel_generators_vanish():
    phi = hidden_map(chain(1), (3, 2, 3), (2,))
    for g in kernel(phi).generators:
        assert not phi.apply(g)


# -- containment and splitting on small monomial ideals ---------------------

def _random_monomials(rng, ring, count):
    out = []
    for _ in range(count):
        e = [0] * len(ring)
        for v in rng.sample(range(len(ring)), rng.randint(1, 2)):
            e[v] += 1
        out.append(Polynomial(ring, {tuple(e): Fraction(1)}))
    return out


@pytest.mark.parametrize("seed", range(3))
def test_contraction_contains_kernel_and_splits(seed):
    rng = random.Random(seed)
    spec = validate_spec([[1, 0], [0, 1]], [2, 2], [2, 1])
    phi = phi_B(spec)
    ms = _random_monomials(rng, spec.xy_ring, 2)
    whole = contract(phi, ms)
    assert ideal_subset(kernel(phi).generators, whole.generators, GREVLEX) is None
    summed = [g for m in ms for g in contract(phi, [m]).generators]
    assert ideal_equal(whole.generators, summed, GREVLEX)


@pytest.mark.parametrize("seed", range(3))
def test_initial_of_contraction_inside_contraction_of_initial(seed):
    rng = random.Random(seed)
    spec = validate_spec([[1]], [2], [2])
    phi = phi_B(spec)
    xy = spec.xy_ring
    w = [rng.randint(0, 2) for _ in xy.names]
    I = [xy.var("x_1_1") * xy.var("y_1_2") - xy.var("x_1_2") * xy.var("y_1_1")
         + xy.var("x_1_1") * xy.var("y_1_1")]
    K = contract(phi, I)
    order = TermOrder([pullback_weight(w, phi)], "grevlex")
    lhs = initial_forms(buchberger(K.generators, order).generators, [pullback_weight(w, phi)])
    in_I = initial_forms(buchberger(I, TermOrder([w], "grevlex")).generators, [w])
    rhs = contract(phi, in_I)
    assert ideal_subset(lhs, rhs.generators, GREVLEX) is None
