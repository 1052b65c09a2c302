"""Category structure at desk scale: finite products with projections and
injections, the orthogonal-sum universal property, and the zero object.

The product of finitely many multi-matrix algebras is the algebra whose
block list is the concatenation of the factors'; its norm is the maximum
of the factor norms.  Projections p_i and injections s_i are coordinate
selections satisfying p_i s_j = delta_ij and sum_i s_i p_i = id, which is
what makes both mediators below unique.

A family u_i : A_i -> B with u_i(x) u_j(y) = 0 for i != j extends uniquely
to the product by u((a_i)) = sum_i u_i(a_i); orthogonality is exactly what
makes that sum multiplicative, so a deliberate violation is detectable as
a verification failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import WStarAlgebra, make_algebra
from .errors import ObjectMismatch, RangesNotOrthogonal
from .morphisms import StarHom, compose, star_hom, zero_hom


@dataclass(frozen=True, eq=False)
class ProductStructure:
    factors: tuple[WStarAlgebra, ...]
    product: WStarAlgebra
    projections: tuple[StarHom, ...]
    injections: tuple[StarHom, ...]


def product(algebras) -> ProductStructure:
    """Concatenate block lists; build verified projections and injections.

    The empty product is the zero algebra O (the terminal object).
    """
    factors = tuple(algebras)
    sizes = []
    for a in factors:
        sizes.extend(a.sizes)
    prod = make_algebra(sizes)
    projections, injections = [], []
    offset = 0
    for a in factors:
        sel = np.zeros((a.dim, prod.dim), dtype=complex)
        sel[:, offset : offset + a.dim] = np.eye(a.dim)
        projections.append(star_hom(prod, a, sel, verified=True))
        injections.append(star_hom(a, prod, sel.T.copy(), verified=True))
        offset += a.dim
    return ProductStructure(factors, prod, tuple(projections), tuple(injections))


def product_mediator(prod: ProductStructure, maps) -> StarHom:
    """The unique u : B -> prod with p_i u = u_i, namely b -> (u_i(b))."""
    maps = tuple(maps)
    if len(maps) != len(prod.factors):
        raise ObjectMismatch(
            f"{len(maps)} maps for {len(prod.factors)} factors"
        )
    if maps:
        src = maps[0].source
        for u in maps:
            if u.source.structure != src.structure:
                raise ObjectMismatch("mediator maps must share their source")
    else:
        src = make_algebra([])
    for u, a in zip(maps, prod.factors):
        if u.target.structure != a.structure:
            raise ObjectMismatch(
                f"map into {u.target.sizes} paired with factor {a.sizes}"
            )
    if maps:
        M = np.vstack([u.matrix for u in maps])
    else:
        M = np.zeros((0, src.dim), dtype=complex)
    return star_hom(src, prod.product, M, verified=all(u.verified for u in maps))


def _target_block_images(f: StarHom):
    """Per target block j, images of all source basis units, stacked
    as (dim source, m_j, m_j)."""
    out = []
    for m, roff in zip(f.target.sizes, f.target.structure.offsets):
        sub = f.matrix[roff : roff + m * m, :]
        out.append(np.ascontiguousarray(sub.T).reshape(f.source.dim, m, m))
    return out


def orthogonal_sum_mediator(prod: ProductStructure, maps, tol: float = 1e-10) -> StarHom:
    """Extend an orthogonal family u_i : A_i -> B to prod A_i -> B.

    Raises RangesNotOrthogonal (with the witnessing basis pair and the
    violation magnitude) when some u_i(e_p) u_j(e_q), i != j, has Frobenius
    norm above tol.
    """
    maps = tuple(maps)
    if len(maps) != len(prod.factors):
        raise ObjectMismatch(f"{len(maps)} maps for {len(prod.factors)} factors")
    for u, a in zip(maps, prod.factors):
        if u.source.structure != a.structure:
            raise ObjectMismatch(
                f"map from {u.source.sizes} paired with factor {a.sizes}"
            )
    if maps:
        tgt = maps[0].target
        for u in maps:
            if u.target.structure != tgt.structure:
                raise ObjectMismatch("orthogonal family must share its target")
    else:
        tgt = make_algebra([])

    from .morphisms import _pair_product_defects

    images = [_target_block_images(u) for u in maps]
    for i in range(len(maps)):
        for j in range(len(maps)):
            if i == j or maps[i].source.dim == 0 or maps[j].source.dim == 0:
                continue
            sq = np.zeros((maps[i].source.dim, maps[j].source.dim))
            for jb in range(len(tgt.sizes)):
                sq += _pair_product_defects(images[i][jb], images[j][jb])
            worst = float(np.sqrt(max(sq.max(), 0.0)))
            if worst > tol:
                p, q = np.unravel_index(np.argmax(sq), sq.shape)
                raise RangesNotOrthogonal(
                    f"ranges of maps {i} and {j} overlap: "
                    f"|u_{i}(e_{p}) u_{j}(e_{q})| = {worst:.3e}",
                    witness=(i, j, int(p), int(q)),
                    magnitude=worst,
                )

    if maps:
        M = np.hstack([u.matrix for u in maps])
    else:
        M = np.zeros((tgt.dim, 0), dtype=complex)
    med = star_hom(prod.product, tgt, M, verified=False)
    return med.verify(tol)


def zero_object() -> WStarAlgebra:
    """O = {0}: terminal and initial, hence a zero object."""
    return make_algebra([])


def unique_to_zero(algebra: WStarAlgebra) -> StarHom:
    """Hom(A, O) is a singleton."""
    return zero_hom(algebra, zero_object())


def unique_from_zero(algebra: WStarAlgebra) -> StarHom:
    """Hom(O, B) is a singleton."""
    return zero_hom(zero_object(), algebra)


def zero_morphism(source: WStarAlgebra, target: WStarAlgebra) -> StarHom:
    """The zero morphism A -> O -> B."""
    return compose(unique_from_zero(target), unique_to_zero(source))
