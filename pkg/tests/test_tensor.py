import numpy as np
import pytest

from wstar.algebra import (
    element,
    make_algebra,
    op_norm,
    random_element,
    to_coords,
)
from wstar.errors import NotVerified, RangesDoNotCommute
from wstar.morphisms import (
    compose,
    identity_hom,
    random_hom,
    star_hom,
    verify_hom,
    zero_hom,
)
from wstar.category import product
from wstar.tensor import (
    commutative_tensor_check,
    max_norm_lower_bound,
    mediator,
    min_norm,
    random_commuting_pair,
    ranges_commute,
    tensor_algebra,
    tensor_elements,
    tensor_homs,
)


def test_tensor_algebra_block_sizes():
    ts = tensor_algebra(make_algebra([2, 1]), make_algebra([3]))
    assert ts.total.sizes == (6, 3)
    # the scalars are a unit: sizes are preserved
    A = make_algebra([2, 2, 1])
    assert tensor_algebra(A, make_algebra([1])).total.sizes == A.sizes
    assert tensor_algebra(make_algebra([]), A).total.sizes == ()
    assert tensor_algebra(A, make_algebra([])).total.sizes == ()


def test_embeddings_are_unital_commuting_homs():
    ts = tensor_algebra(make_algebra([2, 1]), make_algebra([2]))
    for w in (ts.w1, ts.w2):
        assert verify_hom(w, 1e-10).status == "pass"
        assert w.unital
    assert ranges_commute(ts.w1, ts.w2).status == "pass"


def test_simple_tensor_examples():
    A, B = make_algebra([2]), make_algebra([1])
    ts = tensor_algebra(A, B)
    unit = ts.simple_tensor(A.unit, B.unit)
    assert op_norm(unit - ts.total.unit) == 0.0
    x = element(A, [np.diag([1.0, 2.0])])
    y = element(B, [[[3.0]]])
    z = ts.simple_tensor(x, y)
    assert np.allclose(z.blocks[0], np.diag([3.0, 6.0]))
    assert op_norm(z) == pytest.approx(6.0)


def test_tensor_elements_bilinear():
    A, B = make_algebra([2, 1]), make_algebra([2])
    rng = np.random.default_rng(3)
    for _ in range(20):
        x, x2 = random_element(A, rng), random_element(A, rng)
        y = random_element(B, rng)
        lhs = tensor_elements(x + x2, y)
        rhs = tensor_elements(x, y) + tensor_elements(x2, y)
        assert op_norm(lhs - rhs) <= 1e-12
        lhs = tensor_elements(x, 2.5 * y)
        assert op_norm(lhs - 2.5 * tensor_elements(x, y)) <= 1e-12


def test_tensor_homs_identity_zero_and_functoriality():
    A, B = make_algebra([2]), make_algebra([2, 1])
    idt = tensor_homs(identity_hom(A), identity_hom(B))
    assert np.array_equal(idt.matrix, np.eye(A.dim * B.dim))
    z = tensor_homs(identity_hom(A), zero_hom(B, B))
    ts = tensor_algebra(A, B)
    x = random_element(ts.total, 1)
    assert op_norm(z(x)) <= 1e-12 or not z.matrix.any()

    rng = np.random.default_rng(6)
    C, D = make_algebra([3]), make_algebra([2, 2])
    E, F = make_algebra([4, 3]), make_algebra([3, 2])
    for _ in range(10):
        f1, g1 = random_hom(A, C, rng), random_hom(B, D, rng)
        f2, g2 = random_hom(C, E, rng), random_hom(D, F, rng)
        lhs = tensor_homs(compose(f2, f1), compose(g2, g1))
        rhs = compose(tensor_homs(f2, g2), tensor_homs(f1, g1))
        assert np.max(np.abs(lhs.matrix - rhs.matrix)) <= 1e-10
        assert verify_hom(lhs, 1e-10).status == "pass"
    with pytest.raises(NotVerified):
        tensor_homs(star_hom(A, A, np.eye(A.dim)), identity_hom(B))


def test_tensor_homs_agree_on_simple_tensors():
    rng = np.random.default_rng(14)
    A, B = make_algebra([2, 1]), make_algebra([2])
    C, D = make_algebra([3]), make_algebra([2, 2])
    f, g = random_hom(A, C, rng), random_hom(B, D, rng)
    fg = tensor_homs(f, g)
    for _ in range(10):
        x, y = random_element(A, rng), random_element(B, rng)
        lhs = fg(tensor_elements(x, y))
        rhs = tensor_elements(f(x), g(y))
        assert op_norm(lhs - rhs) <= 1e-10


def test_ranges_commute_witness():
    A = make_algebra([2])
    rep = ranges_commute(identity_hom(A), identity_hom(A))
    assert rep.status == "fail"
    # [e_11, e_12] is the first failing basis pair
    assert "(0, 1)" in rep.witness
    # corner embeddings into disjoint blocks commute (products vanish)
    prod = product([make_algebra([2]), make_algebra([3])])
    t1 = compose(prod.injections[0], identity_hom(make_algebra([2])))
    t2 = compose(prod.injections[1], random_hom(make_algebra([3]), make_algebra([3]), 3))
    assert ranges_commute(t1, t2).status == "pass"


def test_mediator_faithful_pair_is_identity():
    ts = tensor_algebra(make_algebra([2]), make_algebra([3]))
    med = mediator(ts.w1, ts.w2)
    assert med.verified
    assert np.max(np.abs(med.matrix - np.eye(36))) <= 1e-12


def test_mediator_scalar_unitor():
    C = make_algebra([1])
    med = mediator(identity_hom(C), identity_hom(C))
    assert med.matrix.shape == (1, 1)
    assert med.matrix[0, 0] == pytest.approx(1.0)


def test_mediator_orthogonal_corners_vanish():
    # ranges multiply to zero, so every simple tensor image vanishes
    A, B = make_algebra([2]), make_algebra([1, 1])
    prod = product([make_algebra([2]), make_algebra([2, 1])])
    t1 = compose(prod.injections[0], random_hom(A, make_algebra([2]), 1))
    t2 = compose(prod.injections[1], random_hom(B, make_algebra([2, 1]), 2))
    med = mediator(t1, t2)
    assert med.verified
    assert np.max(np.abs(med.matrix)) <= 1e-12


def test_mediator_requires_commuting_ranges():
    A = make_algebra([2])
    with pytest.raises(RangesDoNotCommute):
        mediator(identity_hom(A), identity_hom(A))


def test_mediator_weak_and_strict_triangles():
    from wstar.algebra import left_mul_matrix, right_mul_matrix

    rng = np.random.default_rng(21)
    A, B = make_algebra([2, 1]), make_algebra([2])
    ts = tensor_algebra(A, B)
    for k in range(25):
        t1, t2 = random_commuting_pair(A, B, rng)
        med = mediator(t1, t2)
        assert med.verified
        lhs = med.matrix @ ts.w1.matrix
        weak = right_mul_matrix(t2(t2.source.unit)) @ t1.matrix
        assert np.max(np.abs(lhs - weak)) <= 1e-10
        if t2.unital:
            assert np.max(np.abs(lhs - t1.matrix)) <= 1e-10
        lhs2 = med.matrix @ ts.w2.matrix
        weak2 = left_mul_matrix(t1(t1.source.unit)) @ t2.matrix
        assert np.max(np.abs(lhs2 - weak2)) <= 1e-10
        again = mediator(t1, t2, enumeration="reversed")
        assert np.max(np.abs(med.matrix - again.matrix)) <= 1e-12


def test_min_norm_cross_law_and_frozen_eigensolve():
    rng = np.random.default_rng(2)
    A, B = make_algebra([2]), make_algebra([3])
    ts = tensor_algebra(A, B)
    for _ in range(100):
        x, y = random_element(A, rng), random_element(B, rng)
        lhs = min_norm(ts.simple_tensor(x, y))
        rhs = op_norm(x) * op_norm(y)
        assert lhs == pytest.approx(rhs, rel=1e-9)
    # z = a (x) 1 + 1 (x) a with a = diag(1,-1): spectrum {2, 0, 0, -2}
    M2 = make_algebra([2])
    ts2 = tensor_algebra(M2, M2)
    a = element(M2, [np.diag([1.0, -1.0])])
    z = ts2.simple_tensor(a, M2.unit) + ts2.simple_tensor(M2.unit, a)
    dense = np.kron(np.diag([1.0, -1.0]), np.eye(2)) + np.kron(
        np.eye(2), np.diag([1.0, -1.0])
    )
    oracle = np.sort(np.linalg.eigvalsh(dense))
    assert np.allclose(oracle, [-2.0, 0.0, 0.0, 2.0])
    assert min_norm(z) == pytest.approx(2.0, abs=1e-12)
    assert min_norm(ts2.total.unit) == pytest.approx(1.0)


def test_min_norm_cstar_identity_on_tensor_algebra():
    rng = np.random.default_rng(4)
    ts = tensor_algebra(make_algebra([2, 1]), make_algebra([2]))
    for _ in range(100):
        z = random_element(ts.total, rng)
        assert min_norm(z.adjoint() * z) == pytest.approx(
            min_norm(z) ** 2, rel=1e-9
        )


def test_max_norm_lower_bound_nuclearity():
    rng = np.random.default_rng(10)
    A, B = make_algebra([2]), make_algebra([3])
    ts = tensor_algebra(A, B)
    pairs = [random_commuting_pair(A, B, rng) for _ in range(20)]
    for _ in range(5):
        z = random_element(ts.total, rng)
        mn = min_norm(z)
        without = max_norm_lower_bound(z, pairs)
        assert without <= mn + 1e-9
        with_faithful = max_norm_lower_bound(z, pairs + [(ts.w1, ts.w2)])
        assert with_faithful == pytest.approx(mn, abs=1e-9)
    assert max_norm_lower_bound(
        random_element(ts.total, rng),
        [(zero_hom(A, ts.total), zero_hom(B, ts.total))],
    ) == pytest.approx(0.0)
    with pytest.raises(RangesDoNotCommute):
        max_norm_lower_bound(
            random_element(tensor_algebra(A, A).total, rng),
            [(identity_hom(A), identity_hom(A))],
        )


def test_commutative_tensor_examples():
    # f = (1, 2), g = (3, -1): the grid max is |2 * 3| = 6
    X, Y = make_algebra([1, 1]), make_algebra([1, 1])
    ts = tensor_algebra(X, Y)
    f = element(X, [[[1.0]], [[2.0]]])
    g = element(Y, [[[3.0]], [[-1.0]]])
    assert min_norm(ts.simple_tensor(f, g)) == pytest.approx(6.0)
    ones = element(X, [[[1.0]], [[1.0]]])
    assert min_norm(ts.simple_tensor(ones, g)) == pytest.approx(3.0)
    rep = commutative_tensor_check(3, 4, trials=100, seed=11, tol=1e-12)
    assert rep.status == "pass"


def test_random_commuting_pair_contract():
    rng = np.random.default_rng(19)
    A, B = make_algebra([2, 1]), make_algebra([1, 1])
    for _ in range(30):
        t1, t2 = random_commuting_pair(A, B, rng)
        assert t1.verified and t2.verified
        assert t1.target.structure == t2.target.structure
        assert ranges_commute(t1, t2).status == "pass"
