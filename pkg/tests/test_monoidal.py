import numpy as np
import pytest

from wstar.algebra import element, make_algebra, op_norm, random_element
from wstar.monoidal import (
    associator,
    braiding,
    braiding_involution_residual,
    braiding_naturality_residual,
    canonical_realization,
    equivalence_check,
    flipped_realization,
    hexagon_residuals,
    pentagon_residual,
    triangle_residual,
    unit_object,
    unitors,
)
from wstar.morphisms import compose, random_hom, verify_hom
from wstar.tensor import mediator, ranges_commute, tensor_algebra, tensor_elements


OBJECTS = {
    "O": [],
    "C": [1],
    "M2": [2],
    "D2": [1, 1],
    "A21": [2, 1],
    "M3": [3],
}


def test_associator_is_strict_and_unital():
    A, B, C = make_algebra([2, 1]), make_algebra([2]), make_algebra([1, 1])
    alpha = associator(A, B, C)
    assert alpha.unital
    assert np.array_equal(alpha.matrix, np.eye(alpha.source.dim))
    rng = np.random.default_rng(2)
    for _ in range(100):
        z = random_element(alpha.source, rng)
        assert op_norm(alpha(z)) == pytest.approx(op_norm(z))


def test_associator_on_simple_tensors():
    A, B, C = make_algebra([2]), make_algebra([2]), make_algebra([2])
    rng = np.random.default_rng(5)
    x, y, z = (random_element(a, rng) for a in (A, B, C))
    xy = tensor_elements(x, y)
    left = tensor_elements(xy, z)
    right = tensor_elements(x, tensor_elements(y, z))
    alpha = associator(A, B, C)
    assert op_norm(alpha(left) - right) <= 1e-13


def test_pentagon_fixed_tuple():
    objs = [make_algebra([2]), make_algebra([1]), make_algebra([2]), make_algebra([1])]
    assert pentagon_residual(*objs) == 0.0


def test_unitors():
    A = make_algebra([2, 1])
    lam, rho = unitors(A)
    assert lam.unital and rho.unital
    one = unit_object()
    x = random_element(A, 3)
    c = element(one, [[[2.0 - 1.0j]]])
    ts = tensor_algebra(A, one)
    assert op_norm(rho(ts.simple_tensor(x, one.unit)) - x) <= 1e-13
    ts2 = tensor_algebra(one, A)
    assert op_norm(lam(ts2.simple_tensor(c, x)) - (2.0 - 1.0j) * x) <= 1e-13
    assert triangle_residual(A, make_algebra([2])) <= 1e-15
    rng = np.random.default_rng(4)
    for _ in range(20):
        z = random_element(ts2.total, rng)
        assert abs(op_norm(lam(z)) - op_norm(z)) <= 1e-12


def test_braiding_swaps_simple_tensors():
    A, B = make_algebra([2, 1]), make_algebra([2])
    sigma = braiding(A, B)
    assert sigma.verified and sigma.unital
    ts_ab, ts_ba = tensor_algebra(A, B), tensor_algebra(B, A)
    rng = np.random.default_rng(9)
    for _ in range(10):
        x, y = random_element(A, rng), random_element(B, rng)
        got = sigma(ts_ab.simple_tensor(x, y))
        assert op_norm(got - ts_ba.simple_tensor(y, x)) <= 1e-12


def test_braiding_on_diagonals_transposes_the_grid():
    X, Y = make_algebra([1, 1]), make_algebra([1, 1, 1])
    sigma = braiding(X, Y)
    ts = tensor_algebra(X, Y)
    f = element(X, [[[1.0]], [[2.0]]])
    g = element(Y, [[[3.0]], [[4.0]], [[5.0]]])
    swapped = sigma(ts.simple_tensor(f, g))
    grid = np.array([b[0, 0] for b in swapped.blocks]).reshape(3, 2)
    assert np.allclose(grid, np.outer([3.0, 4.0, 5.0], [1.0, 2.0]))


def test_braiding_involution_and_hexagons():
    A, B, C = make_algebra([2]), make_algebra([1, 1]), make_algebra([2])
    assert braiding_involution_residual(A, B) <= 1e-12
    assert hexagon_residuals(A, B, C) <= 1e-12


def test_braiding_naturality():
    rng = np.random.default_rng(13)
    A, B = make_algebra([2, 1]), make_algebra([2])
    C, D = make_algebra([3, 2]), make_algebra([4])
    for _ in range(5):
        f, g = random_hom(A, C, rng), random_hom(B, D, rng)
        assert braiding_naturality_residual(f, g) <= 1e-10


def test_equivalence_on_scalars_is_identity():
    C = make_algebra([1])
    can = canonical_realization(C, C)
    flip = flipped_realization(C, C)
    f = mediator(can.w1, can.w2, through=flip.structure)
    assert f.matrix.shape == (1, 1)
    assert f.matrix[0, 0] == pytest.approx(1.0)
    assert equivalence_check(C, C).status == "pass"


def test_equivalence_m2_m3_is_a_permutation():
    A, B = make_algebra([2]), make_algebra([3])
    can = canonical_realization(A, B)
    flip = flipped_realization(A, B)
    f = mediator(can.w1, can.w2, through=flip.structure)
    h = mediator(flip.w1, flip.w2, through=can.structure)
    # the 36-dimensional shuffle: a permutation matrix with f h = id exactly
    assert f.matrix.shape == (36, 36)
    assert np.array_equal(np.abs(f.matrix), f.matrix.real)
    assert np.array_equal(np.sort(np.abs(f.matrix).sum(axis=0)), np.ones(36))
    assert np.max(np.abs(compose(f, h).matrix - np.eye(36))) == 0.0
    assert np.max(np.abs(compose(h, f).matrix - np.eye(36))) == 0.0
    assert f.unital and h.unital


def test_equivalence_block_bijection():
    A, B = make_algebra([2, 1]), make_algebra([2])
    flip = flipped_realization(A, B)
    assert flip.total.sizes == (4, 2)  # (j, i)-ordered block sizes
    rep = equivalence_check(A, B)
    assert rep.status == "pass"
    assert rep.max_error <= 1e-12


@pytest.mark.parametrize("a", list(OBJECTS))
@pytest.mark.parametrize("b", list(OBJECTS))
def test_equivalence_over_object_set(a, b):
    rep = equivalence_check(make_algebra(OBJECTS[a]), make_algebra(OBJECTS[b]))
    assert rep.status == "pass", rep.witness


def test_flipped_realization_satisfies_the_universal_property():
    A, B = make_algebra([2]), make_algebra([2, 1])
    flip = flipped_realization(A, B)
    assert verify_hom(flip.w1, 1e-10).status == "pass"
    assert verify_hom(flip.w2, 1e-10).status == "pass"
    assert flip.w1.unital and flip.w2.unital
    assert ranges_commute(flip.w1, flip.w2).status == "pass"
    # mediating an arbitrary commuting pair through the flipped layout
    from wstar.tensor import random_commuting_pair

    rng = np.random.default_rng(3)
    for _ in range(5):
        t1, t2 = random_commuting_pair(A, B, rng)
        med = mediator(t1, t2, through=flip.structure)
        assert med.verified
