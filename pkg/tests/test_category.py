import numpy as np
import pytest

from wstar.algebra import element, make_algebra, op_norm, random_element
from wstar.category import (
    orthogonal_sum_mediator,
    product,
    product_mediator,
    unique_from_zero,
    unique_to_zero,
    zero_morphism,
    zero_object,
)
from wstar.errors import RangesNotOrthogonal
from wstar.morphisms import (
    compose,
    identity_hom,
    random_hom,
    star_hom,
    verify_hom,
    zero_hom,
)


def test_product_structure_and_sup_norm():
    A, B = make_algebra([2]), make_algebra([1])
    prod = product([A, B])
    assert prod.product.sizes == (2, 1)
    # sup-norm law: the product norm is the max over factors
    x, y = random_element(A, 1), random_element(B, 2)
    both = element(prod.product, list(x.blocks) + list(y.blocks))
    assert op_norm(both) == pytest.approx(max(op_norm(x), op_norm(y)))
    assert product([]).product.sizes == ()


def test_projection_injection_algebra():
    algebras = [make_algebra([2, 1]), make_algebra([3]), make_algebra([1, 1])]
    prod = product(algebras)
    total = np.zeros((prod.product.dim, prod.product.dim), dtype=complex)
    for i, s in enumerate(prod.injections):
        assert verify_hom(s).status == "pass"
        for j, p in enumerate(prod.projections):
            got = p.matrix @ s.matrix
            want = np.eye(s.source.dim) if i == j else np.zeros_like(got)
            assert np.array_equal(got, want)
        total += s.matrix @ prod.projections[i].matrix
    assert np.array_equal(total, np.eye(prod.product.dim))
    for p in prod.projections:
        assert verify_hom(p).status == "pass"
        assert p.unital


def test_product_mediator_diagonal_and_zero():
    A = make_algebra([2])
    prod = product([A, A])
    diag = product_mediator(prod, [identity_hom(A), identity_hom(A)])
    x = random_element(A, 3)
    img = diag(x)
    assert np.allclose(img.blocks[0], x.blocks[0])
    assert np.allclose(img.blocks[1], x.blocks[0])
    zero = product_mediator(prod, [zero_hom(A, A), zero_hom(A, A)])
    assert not zero.matrix.any()


def test_product_mediator_uniqueness_via_injections():
    rng = np.random.default_rng(5)
    B = make_algebra([2, 1])
    factors = [make_algebra([3]), make_algebra([2, 2])]
    prod = product(factors)
    maps = [random_hom(B, a, rng) for a in factors]
    u = product_mediator(prod, maps)
    assert verify_hom(u).status == "pass"
    for p, ui in zip(prod.projections, maps):
        assert np.max(np.abs(p.matrix @ u.matrix - ui.matrix)) < 1e-12
    # sum s_i p_i = id forces any solution to equal sum s_i u_i
    forced = sum(s.matrix @ ui.matrix for s, ui in zip(prod.injections, maps))
    assert np.max(np.abs(u.matrix - forced)) < 1e-12


def test_orthogonal_sum_diagonal_example():
    C = make_algebra([1])
    B = make_algebra([2])
    u1 = star_hom(C, B, np.array([[1.0], [0], [0], [0]]), verified=True)
    u2 = star_hom(C, B, np.array([[0.0], [0], [0], [1]]), verified=True)
    prod = product([C, C])
    u = orthogonal_sum_mediator(prod, [u1, u2])
    assert u.verified
    pairp = element(prod.product, [[[2.0]], [[5.0]]])
    assert np.allclose(u(pairp).blocks[0], np.diag([2.0, 5.0]))


def test_orthogonal_sum_rejects_overlapping_ranges():
    A = make_algebra([2])
    prod = product([A, A])
    with pytest.raises(RangesNotOrthogonal) as err:
        orthogonal_sum_mediator(prod, [identity_hom(A), identity_hom(A)])
    assert err.value.witness is not None
    assert err.value.magnitude > 0.5


def test_orthogonal_sum_from_corner_constructions():
    rng = np.random.default_rng(9)
    factors = [make_algebra([2]), make_algebra([1, 1]), make_algebra([2, 1])]
    prod_src = product(factors)
    targets = [make_algebra([3]), make_algebra([2, 1]), make_algebra([3, 2])]
    prod_tgt = product(targets)
    for _ in range(10):
        maps = [
            compose(prod_tgt.injections[i], random_hom(factors[i], targets[i], rng))
            for i in range(3)
        ]
        u = orthogonal_sum_mediator(prod_src, maps, 1e-10)
        assert u.verified
        for s, ui in zip(prod_src.injections, maps):
            assert np.max(np.abs(u.matrix @ s.matrix - ui.matrix)) < 1e-10


def test_zero_object_morphisms():
    O = zero_object()
    A, B = make_algebra([2]), make_algebra([3])
    z = zero_morphism(A, B)
    assert not z.matrix.any()
    assert not z.unital
    assert zero_morphism(A, O).unital  # the unit of O is its zero
    assert unique_to_zero(O).matrix.shape == (0, 0)
    assert unique_from_zero(A).matrix.shape == (A.dim, 0)
    assert compose(unique_from_zero(B), unique_to_zero(A)).matrix.shape == (
        B.dim,
        A.dim,
    )
