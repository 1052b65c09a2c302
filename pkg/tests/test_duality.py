import numpy as np
import pytest

from wstar.algebra import (
    element,
    functional,
    make_algebra,
    op_norm,
    pair,
    random_element,
    random_functional,
    to_coords,
    tr_norm,
)
from wstar.duality import (
    IdealSummand,
    annihilator,
    double_dual_check,
    ideal_summand_from_subspace,
    partial_evaluate,
    partial_evaluate_left,
    predual_tensor_check,
    quotient_by_ideal,
    span_of_elements,
    subspace_dual_isometry,
    subspace_from_vectors,
)
from wstar.errors import NotAnIdealSummand
from wstar.morphisms import verify_hom
from wstar.tensor import tensor_algebra, tensor_elements, tensor_functionals


def test_annihilator_dimension_examples():
    A = make_algebra([2, 1])
    whole = span_of_elements([random_element(A, s) for s in range(10)])
    assert whole.dim == 5
    assert annihilator(A, whole).dim == 0
    nothing = subspace_from_vectors(A.dim, [])
    assert annihilator(A, nothing).dim == 5
    m2_summand = IdealSummand(A, (0,)).subspace()
    assert m2_summand.dim == 4
    assert annihilator(A, m2_summand).dim == 1


def test_annihilator_complements_dimensions_exactly():
    rng = np.random.default_rng(3)
    A = make_algebra([2, 2, 1])
    for k in range(A.dim + 1):
        Y = span_of_elements(
            [random_element(A, rng) for _ in range(k)] or [A.zero]
        )
        perp = annihilator(A, Y)
        assert Y.dim + perp.dim == A.dim
        # and the annihilator actually annihilates
        for col in range(perp.dim):
            from wstar.algebra import functional_from_coords

            b = functional_from_coords(A, perp.basis[:, col])
            for col2 in range(Y.dim):
                from wstar.algebra import from_coords

                y = from_coords(A, Y.basis[:, col2])
                assert abs(pair(b, y)) < 1e-10


def test_ideal_summand_recognition():
    A = make_algebra([2, 1])
    M = ideal_summand_from_subspace(A, IdealSummand(A, (0,)).subspace())
    assert M.blocks == (0,)
    skew = subspace_from_vectors(
        A.dim, [to_coords(random_element(A, 7))]
    )
    with pytest.raises(NotAnIdealSummand):
        ideal_summand_from_subspace(A, skew)
    with pytest.raises(NotAnIdealSummand):
        subspace_dual_isometry(skew)


def test_quotient_by_ideal_closes_in_the_category():
    A = make_algebra([2, 2, 1])
    quotient, qmap = quotient_by_ideal(IdealSummand(A, (1,)))
    assert quotient.sizes == (2, 1)
    assert verify_hom(qmap).status == "pass"
    assert qmap.unital


def test_quotient_norm_surviving_block():
    A = make_algebra([2, 1])
    quotient, qmap = quotient_by_ideal(IdealSummand(A, (0,)))
    x = element(A, [np.diag([9.0, 9.0]), [[2.0]]])
    assert op_norm(qmap(x)) == pytest.approx(2.0)


def test_subspace_dual_isometry_all_and_random():
    A = make_algebra([2, 1])
    # quotient by everything: both sides zero-dimensional
    rep = subspace_dual_isometry(IdealSummand(A, (0, 1)), trials=10, seed=1)
    assert rep.status == "pass"
    rep = subspace_dual_isometry(IdealSummand(A, (0,)), trials=50, seed=2)
    assert rep.status == "pass"
    B = make_algebra([2, 2, 1])
    rep = subspace_dual_isometry(IdealSummand(B, (1,)), trials=50, seed=3, tol=1e-9)
    assert rep.status == "pass"
    assert rep.max_error <= 1e-9


def test_double_dual_examples():
    A = make_algebra([2, 1])
    from wstar.algebra import norming_functional

    nf = norming_functional(A.unit)
    assert abs(pair(nf, A.unit)) == pytest.approx(1.0)
    assert not any(b.any() for b in norming_functional(A.zero).blocks)
    rep = double_dual_check(A, trials=100, seed=5)
    assert rep.status == "pass"


def test_partial_evaluate_simple_tensor_factorizes():
    A, B = make_algebra([2, 1]), make_algebra([2])
    ts = tensor_algebra(A, B)
    rng = np.random.default_rng(8)
    for _ in range(10):
        b1, b2 = random_functional(A, rng), random_functional(B, rng)
        x = random_element(A, rng)
        phi = tensor_functionals(b1, b2)
        got = partial_evaluate(ts, phi, x)
        scalarized = pair(b1, x)
        for blk, want in zip(got.blocks, b2.blocks):
            assert np.allclose(blk, scalarized * want, atol=1e-12)
    zero = partial_evaluate(ts, tensor_functionals(b1, b2), A.zero)
    assert not any(b.any() for b in zero.blocks)


def test_partial_evaluate_is_the_pairing_slice():
    A, B = make_algebra([2]), make_algebra([2, 1])
    ts = tensor_algebra(A, B)
    rng = np.random.default_rng(12)
    for _ in range(100):
        phi = random_functional(ts.total, rng)
        x, y = random_element(A, rng), random_element(B, rng)
        lhs = pair(partial_evaluate(ts, phi, x), y)
        rhs = pair(phi, ts.simple_tensor(x, y))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))
        lhs2 = pair(partial_evaluate_left(ts, phi, y), x)
        assert abs(lhs2 - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_partial_evaluate_bilinear():
    A, B = make_algebra([2]), make_algebra([2])
    ts = tensor_algebra(A, B)
    rng = np.random.default_rng(18)
    for _ in range(50):
        phi = random_functional(ts.total, rng)
        psi = random_functional(ts.total, rng)
        x, x2 = random_element(A, rng), random_element(A, rng)
        lhs = partial_evaluate(ts, phi, x + x2)
        rhs = partial_evaluate(ts, phi, x) + partial_evaluate(ts, phi, x2)
        assert max(np.max(np.abs(a - b)) for a, b in zip(lhs.blocks, rhs.blocks)) <= 1e-12
        lhs2 = partial_evaluate(ts, phi + psi, x)
        rhs2 = partial_evaluate(ts, phi, x) + partial_evaluate(ts, psi, x)
        assert max(np.max(np.abs(a - b)) for a, b in zip(lhs2.blocks, rhs2.blocks)) <= 1e-12


def test_kronecker_singular_values_multiply():
    # the oracle behind both norm cross laws
    rng = np.random.default_rng(4)
    for _ in range(25):
        x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        y = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        sk = np.linalg.svd(np.kron(x, y), compute_uv=False)
        sx = np.linalg.svd(x, compute_uv=False)
        sy = np.linalg.svd(y, compute_uv=False)
        products = np.sort(np.outer(sx, sy).ravel())[::-1]
        assert np.allclose(sk, products, rtol=1e-9)


def test_predual_tensor_trace_norm_examples():
    A = make_algebra([2])
    B = make_algebra([1])
    # normalized traces are states: their tensor has trace norm one
    tau_a = functional(A, [np.eye(2) / 2.0])
    tau_b = functional(B, [[[1.0]]])
    assert tr_norm(tensor_functionals(tau_a, tau_b)) == pytest.approx(1.0)
    b1 = functional(A, [np.diag([1.0, -2.0])])
    b2 = functional(B, [[[3.0]]])
    assert tr_norm(tensor_functionals(b1, b2)) == pytest.approx(9.0)


def test_predual_tensor_check_random():
    A, B = make_algebra([2, 1]), make_algebra([2])
    rep = predual_tensor_check(A, B, trials=200, seed=6, tol=1e-9)
    assert rep.status == "pass"
    ts = tensor_algebra(A, B)
    assert ts.total.dim == A.dim * B.dim
    rng = np.random.default_rng(7)
    for _ in range(50):
        b1, b2 = random_functional(A, rng), random_functional(B, rng)
        a1, a2 = random_element(A, rng), random_element(B, rng)
        lhs = pair(tensor_functionals(b1, b2), tensor_elements(a1, a2))
        rhs = pair(b1, a1) * pair(b2, a2)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))
        assert tr_norm(tensor_functionals(b1, b2)) == pytest.approx(
            tr_norm(b1) * tr_norm(b2), rel=1e-9
        )
