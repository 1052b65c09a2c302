"""Symmetric monoidal structure and the executable equivalence theorem.

The unit object is the scalar algebra [1].  Under the lexicographic block
encoding the nested Kronecker product is strictly associative, so the
associator and both unitors are identity coordinate maps between equal
block structures; the braiding swaps tensor factors and is realized per
block pair by a commutation permutation plus a block reindex.  Coherence
(pentagon, triangle, hexagons, symmetry) is verified numerically on
concrete object tuples rather than proven symbolically.

Two genuinely different realizations of the tensor product are kept: the
canonical (i, j)-ordered Kronecker layout and a flipped (j, i)-ordered one.
Each satisfies the commuting-embedding universal property, so each
mediates through the other; `equivalence_check` builds both mediators,
checks they are unital, mutually inverse and unique, which is the
categorical statement that any two universal tensor products agree up to
a unique normal unital *-isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import WStarAlgebra, make_algebra, op_norm, random_element, _rng
from .errors import ObjectMismatch
from .morphisms import StarHom, compose, identity_hom, star_hom
from .reports import CheckReport, make_report
from .tensor import (
    TensorStructure,
    _build_structure,
    mediator,
    tensor_algebra,
    tensor_homs,
)


def unit_object() -> WStarAlgebra:
    return make_algebra([1])


@dataclass(frozen=True, eq=False)
class TensorRealization:
    """A tensor-product realization tagged by its layout."""

    structure: TensorStructure
    tag: str  # "canonical" | "flipped"

    @property
    def total(self) -> WStarAlgebra:
        return self.structure.total

    @property
    def w1(self) -> StarHom:
        return self.structure.w1

    @property
    def w2(self) -> StarHom:
        return self.structure.w2


def canonical_realization(A: WStarAlgebra, B: WStarAlgebra) -> TensorRealization:
    return TensorRealization(_build_structure(A, B, flip=False), "canonical")


def flipped_realization(A: WStarAlgebra, B: WStarAlgebra) -> TensorRealization:
    return TensorRealization(_build_structure(A, B, flip=True), "flipped")


# ---------------------------------------------------------------------------
# Coherence data
# ---------------------------------------------------------------------------

def associator(A: WStarAlgebra, B: WStarAlgebra, C: WStarAlgebra) -> StarHom:
    """(A (x) B) (x) C -> A (x) (B (x) C); the identity coordinate map,
    since nested Kronecker blocks agree strictly."""
    ts_ab = tensor_algebra(A, B)
    left = tensor_algebra(ts_ab.total, C).total
    ts_bc = tensor_algebra(B, C)
    right = tensor_algebra(A, ts_bc.total).total
    if left.sizes != right.sizes:
        raise ObjectMismatch(
            f"associator endpoints disagree: {left.sizes} vs {right.sizes}"
        )
    return star_hom(left, right, np.eye(left.dim, dtype=complex), verified=True)


def unitors(A: WStarAlgebra) -> tuple[StarHom, StarHom]:
    """(lambda: C (x) A -> A, rho: A (x) C -> A), identity coordinates."""
    one = unit_object()
    lam_src = tensor_algebra(one, A).total
    rho_src = tensor_algebra(A, one).total
    lam = star_hom(lam_src, A, np.eye(A.dim, dtype=complex), verified=True)
    rho = star_hom(rho_src, A, np.eye(A.dim, dtype=complex), verified=True)
    return lam, rho


@lru_cache(maxsize=256)
def braiding(A: WStarAlgebra, B: WStarAlgebra) -> StarHom:
    """x (x) y -> y (x) x, mediated through A (x) B by the embeddings of
    B (x) A taken in swapped roles."""
    ts_ab = tensor_algebra(A, B)
    ts_ba = tensor_algebra(B, A)
    return mediator(ts_ba.w2, ts_ba.w1, through=ts_ab)


def pentagon_residual(A, B, C, D) -> float:
    """Largest matrix deviation between the two associator composites on
    ((A (x) B) (x) C) (x) D."""
    a_abc = associator(A, B, C)
    ab = tensor_algebra(A, B).total
    bc = tensor_algebra(B, C).total
    cd = tensor_algebra(C, D).total
    left = compose(
        tensor_homs(identity_hom(A), associator(B, C, D)),
        compose(
            associator(A, bc, D),
            tensor_homs(a_abc, identity_hom(D)),
        ),
    )
    right = compose(associator(A, B, cd), associator(ab, C, D))
    return float(np.max(np.abs(left.matrix - right.matrix))) if left.matrix.size else 0.0


def triangle_residual(A, B) -> float:
    one = unit_object()
    lam_b, _ = unitors(B)
    _, rho_a = unitors(A)
    alpha = associator(A, one, B)
    left = compose(tensor_homs(identity_hom(A), lam_b), alpha)
    right = tensor_homs(rho_a, identity_hom(B))
    return float(np.max(np.abs(left.matrix - right.matrix))) if left.matrix.size else 0.0


def hexagon_residuals(A, B, C) -> float:
    """Both hexagon identities, with strict associators left implicit."""
    bc = tensor_algebra(B, C).total
    ab = tensor_algebra(A, B).total
    lhs1 = braiding(A, bc)
    rhs1 = compose(
        tensor_homs(identity_hom(B), braiding(A, C)),
        tensor_homs(braiding(A, B), identity_hom(C)),
    )
    r1 = (
        float(np.max(np.abs(lhs1.matrix - rhs1.matrix)))
        if lhs1.matrix.size
        else 0.0
    )
    lhs2 = braiding(ab, C)
    rhs2 = compose(
        tensor_homs(braiding(A, C), identity_hom(B)),
        tensor_homs(identity_hom(A), braiding(B, C)),
    )
    r2 = (
        float(np.max(np.abs(lhs2.matrix - rhs2.matrix)))
        if lhs2.matrix.size
        else 0.0
    )
    return max(r1, r2)


def braiding_involution_residual(A, B) -> float:
    round_trip = compose(braiding(B, A), braiding(A, B))
    d = round_trip.source.dim
    if d == 0:
        return 0.0
    return float(np.max(np.abs(round_trip.matrix - np.eye(d))))


def braiding_naturality_residual(f: StarHom, g: StarHom) -> float:
    """sigma_{C,D} (f (x) g) = (g (x) f) sigma_{A,B}."""
    left = compose(braiding(f.target, g.target), tensor_homs(f, g))
    right = compose(tensor_homs(g, f), braiding(f.source, g.source))
    return (
        float(np.max(np.abs(left.matrix - right.matrix)))
        if left.matrix.size
        else 0.0
    )


def unitor_isometry_residual(A, trials=20, seed=0) -> float:
    """Unitors and associators preserve norms (they are unital
    *-isomorphisms); sampled directly."""
    one = unit_object()
    lam, rho = unitors(A)
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        z = random_element(lam.source, rng)
        worst = max(worst, abs(op_norm(lam(z)) - op_norm(z)))
        z = random_element(rho.source, rng)
        worst = max(worst, abs(op_norm(rho(z)) - op_norm(z)))
    if not (lam.unital and rho.unital):
        worst = max(worst, 1.0)
    return worst


# ---------------------------------------------------------------------------
# The equivalence theorem
# ---------------------------------------------------------------------------

def equivalence_check(A: WStarAlgebra, B: WStarAlgebra, tol: float = 1e-12) -> CheckReport:
    """Both realizations mediate through each other; the mediators are
    unital, mutually inverse, and unique.

    The canonical layout plays the analytically constructed tensor
    product, the flipped layout the universal-property one; the check is
    the content of their equivalence.
    """
    can = canonical_realization(A, B)
    flip = flipped_realization(A, B)
    f = mediator(can.w1, can.w2, through=flip.structure)
    h = mediator(flip.w1, flip.w2, through=can.structure)

    worst, witness = 0.0, None

    def consider(val, note):
        nonlocal worst, witness
        if val > worst:
            worst, witness = float(val), note

    if not f.verified:
        consider(1.0, "f failed verification")
    if not h.verified:
        consider(1.0, "h failed verification")
    if not f.unital:
        consider(1.0, "f is not unital")
    if not h.unital:
        consider(1.0, "h is not unital")

    d = can.total.dim
    fh = compose(f, h)
    hf = compose(h, f)
    if d:
        consider(np.max(np.abs(fh.matrix - np.eye(d))), "f h differs from identity")
        consider(np.max(np.abs(hf.matrix - np.eye(d))), "h f differs from identity")

    for name, got, want in (
        ("f w1 triangle", compose(f, flip.w1), can.w1),
        ("f w2 triangle", compose(f, flip.w2), can.w2),
        ("h w1 triangle", compose(h, can.w1), flip.w1),
        ("h w2 triangle", compose(h, can.w2), flip.w2),
    ):
        if got.matrix.size:
            consider(np.max(np.abs(got.matrix - want.matrix)), name)

    f_again = mediator(can.w1, can.w2, through=flip.structure, enumeration="reversed")
    if f.matrix.size:
        consider(np.max(np.abs(f.matrix - f_again.matrix)), "mediator uniqueness")

    return make_report(
        "equivalence", worst, tol, 0, witness if worst > tol else None
    )
