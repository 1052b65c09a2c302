"""Banach-space duality at finite dimension: annihilators, the two
subspace/quotient dual isometries on ideal summands, the double-dual
embedding, partial evaluation of tensor functionals, and the predual
tensor identity.

The weak-* closed two-sided ideals of a multi-matrix algebra are exactly
the block sub-sums, and on those the quotient and subspace norms are
computable in closed form: the quotient norm of x + M is the largest block
norm outside the ideal's block set, and the dual norm of a functional
restricted to the ideal is its trace norm inside the block set.  That is
what makes both isometric identities

    dual(M) = dual(X) / annih(M),    dual(X/M) = annih(M)

checkable exactly here rather than via convex programming.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    RANK_TOL,
    AlgebraElement,
    Functional,
    WStarAlgebra,
    _rng,
    block_transpose_perm,
    from_coords,
    functional_from_coords,
    make_algebra,
    norming_functional,
    op_norm,
    pair,
    random_element,
    random_functional,
    to_coords,
    tr_norm,
    tr_norm_maximizer,
)
from .errors import NotAnIdealSummand, StructureMismatch
from .morphisms import StarHom, star_hom
from .reports import CheckReport, make_report
from .tensor import TensorStructure


@dataclass(frozen=True, eq=False)
class LinearSubspace:
    """A subspace given by an orthonormalized spanning matrix of
    coordinate column vectors."""

    ambient_dim: int
    basis: np.ndarray  # shape (ambient_dim, rank)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def subspace_from_vectors(ambient_dim: int, vectors) -> LinearSubspace:
    """Orthonormalize a spanning family, truncating numerical rank."""
    if not len(vectors):
        return LinearSubspace(ambient_dim, np.zeros((ambient_dim, 0), dtype=complex))
    raw = np.column_stack([np.asarray(v, dtype=complex).ravel() for v in vectors])
    if raw.shape[0] != ambient_dim:
        raise StructureMismatch(
            f"vectors of length {raw.shape[0]} in ambient dimension {ambient_dim}"
        )
    u, s, _ = np.linalg.svd(raw, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > RANK_TOL * s[0]))
    return LinearSubspace(ambient_dim, u[:, :rank])


def span_of_elements(elements) -> LinearSubspace:
    """Subspace of an algebra spanned by the given elements."""
    elements = list(elements)
    d = elements[0].algebra.dim
    return subspace_from_vectors(d, [to_coords(x) for x in elements])


def annihilator(algebra: WStarAlgebra, Y: LinearSubspace) -> LinearSubspace:
    """All functionals b with pair(b, y) = 0 for every y in Y.

    With the bilinear trace pairing this is the plain (unconjugated) null
    space of Y against the block-transpose permutation, so dimensions are
    exactly complementary: dim Y + dim annih(Y) = dim of the algebra.
    """
    if Y.ambient_dim != algebra.dim:
        raise StructureMismatch("subspace does not live in this algebra")
    d = algebra.dim
    if Y.dim == 0:
        return LinearSubspace(d, np.eye(d, dtype=complex))
    perm = block_transpose_perm(algebra.structure)
    constraints = Y.basis[perm, :].T  # rows: b -> pair(b, y_k)
    _, s, vh = np.linalg.svd(constraints)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s.size and s[0] > 0 else 0
    return LinearSubspace(d, vh[rank:].conj().T)


# ---------------------------------------------------------------------------
# Ideal summands and the two isometric identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IdealSummand:
    """A two-sided ideal given as a sub-sum of blocks."""

    parent: WStarAlgebra
    blocks: tuple[int, ...]

    def __post_init__(self):
        k = len(self.parent.sizes)
        for i in self.blocks:
            if not 0 <= i < k:
                raise NotAnIdealSummand(f"block index {i} out of range")

    def subspace(self) -> LinearSubspace:
        cols = []
        d = self.parent.dim
        for i in self.blocks:
            n = self.parent.sizes[i]
            off = self.parent.structure.offsets[i]
            for p in range(off, off + n * n):
                e = np.zeros(d, dtype=complex)
                e[p] = 1.0
                cols.append(e)
        return subspace_from_vectors(d, cols)


def ideal_summand_from_subspace(algebra: WStarAlgebra, Y: LinearSubspace) -> IdealSummand:
    """Recognize a subspace as a block sub-sum, or refuse.

    Raises NotAnIdealSummand when some block is neither fully inside nor
    fully orthogonal to the subspace (such a subspace is not a weak-*
    closed two-sided ideal of a multi-matrix algebra).
    """
    if Y.ambient_dim != algebra.dim:
        raise StructureMismatch("subspace does not live in this algebra")
    Q = Y.basis @ Y.basis.conj().T
    inside = []
    total = 0
    for i, (n, off) in enumerate(zip(algebra.sizes, algebra.structure.offsets)):
        sub = Q[off : off + n * n, off : off + n * n]
        residual_in = np.linalg.norm(sub - np.eye(n * n))
        residual_out = np.linalg.norm(Q[:, off : off + n * n])
        if residual_in <= 1e-9:
            inside.append(i)
            total += n * n
        elif residual_out > 1e-9:
            raise NotAnIdealSummand(
                f"block {i} is only partially contained in the subspace"
            )
    if total != Y.dim:
        raise NotAnIdealSummand(
            "subspace mixes coordinates across blocks"
        )
    return IdealSummand(algebra, tuple(inside))


def quotient_by_ideal(M: IdealSummand) -> tuple[WStarAlgebra, StarHom]:
    """X/M as the multi-matrix algebra on the complementary blocks,
    with the verified quotient *-homomorphism."""
    A = M.parent
    keep = [i for i in range(len(A.sizes)) if i not in set(M.blocks)]
    quotient = make_algebra([A.sizes[i] for i in keep])
    sel = np.zeros((quotient.dim, A.dim), dtype=complex)
    row = 0
    for i in keep:
        n = A.sizes[i]
        off = A.structure.offsets[i]
        sel[row : row + n * n, off : off + n * n] = np.eye(n * n)
        row += n * n
    return quotient, star_hom(A, quotient, sel, verified=True)


def _restrict(x_blocks, sizes, keep: set, inside: bool):
    out = []
    for i, blk in enumerate(x_blocks):
        if (i in keep) == inside:
            out.append(blk)
        else:
            out.append(np.zeros_like(blk))
    return tuple(out)


def subspace_dual_isometry(
    M: IdealSummand,
    trials: int = 50,
    seed=0,
    tol: float = 1e-9,
) -> CheckReport:
    """Verify both annihilator duality identities isometrically on an
    ideal summand.

    Checked per random probe: the quotient norm of x + M is the largest
    block norm off the ideal and is attained; the dual norm of a
    functional on M equals the trace norm inside the ideal and matches
    the quotient norm of its class modulo annih(M); the dual of X/M is
    annih(M) with matching norms; and all dimension identities are exact.
    """
    if not isinstance(M, IdealSummand):
        raise NotAnIdealSummand(
            "subspace_dual_isometry needs an IdealSummand; recognize a "
            "subspace first with ideal_summand_from_subspace"
        )
    A = M.parent
    S = set(M.blocks)
    rng = _rng(seed)
    d = A.dim
    worst, witness = 0.0, None

    def consider(val, note):
        nonlocal worst, witness
        if val > worst:
            worst, witness = val, note

    sub = M.subspace()
    perp = annihilator(A, sub)
    dim_m = sum(A.sizes[i] ** 2 for i in S)
    if sub.dim != dim_m or perp.dim != d - dim_m:
        return make_report(
            "annihilator_duality", 1.0, tol, _as_seed(seed),
            f"dimension identity failed: dim M = {sub.dim}, dim perp = {perp.dim}",
        )

    quotient, qmap = quotient_by_ideal(M)

    for t in range(trials):
        x = random_element(A, rng)
        qn = op_norm(qmap(x)) if quotient.dim else 0.0
        # attained: subtract the part inside the ideal
        m_star = AlgebraElement(A, _restrict(x.blocks, A.sizes, S, inside=True))
        consider(abs(op_norm(x - m_star) - qn), f"quotient norm, trial {t}")
        # sampled members never beat the attained infimum
        m = random_element(A, rng)
        m = AlgebraElement(A, _restrict(m.blocks, A.sizes, S, inside=True))
        consider(max(0.0, qn - op_norm(x - m)), f"quotient infimum, trial {t}")

        phi = random_functional(A, rng)
        inside_tn = sum(
            float(np.sum(np.linalg.svd(phi.blocks[i], compute_uv=False)))
            for i in S
        )
        # dual of M with the restricted pairing: attained on the ideal
        maximizer = tr_norm_maximizer(phi)
        m_att = AlgebraElement(
            A, _restrict(maximizer.blocks, A.sizes, S, inside=True)
        )
        consider(
            abs(abs(pair(phi, m_att)) - inside_tn), f"dual of M attained, trial {t}"
        )
        # quotient norm of phi modulo annih(M): attained by matching off S
        psi_star = Functional(A, _restrict(phi.blocks, A.sizes, S, inside=False))
        consider(
            abs(tr_norm(phi - psi_star) - inside_tn),
            f"dual quotient attained, trial {t}",
        )
        psi = random_functional(A, rng)
        psi = Functional(A, _restrict(psi.blocks, A.sizes, S, inside=False))
        consider(
            max(0.0, inside_tn - tr_norm(phi - psi)),
            f"dual quotient infimum, trial {t}",
        )
        # dual of X/M realized as annih(M): trace norm off S
        beta = Functional(A, _restrict(phi.blocks, A.sizes, S, inside=False))
        off_tn = tr_norm(beta)
        if quotient.dim:
            beta_q = functional_from_coords(
                quotient, _project_off(beta, A, S)
            )
            att = tr_norm_maximizer(beta_q)
            consider(
                abs(abs(pair(beta_q, att)) - off_tn),
                f"dual of quotient attained, trial {t}",
            )
        elif off_tn > 0:
            consider(off_tn, f"functional off an everything ideal, trial {t}")

    return make_report(
        "annihilator_duality", worst, tol, _as_seed(seed),
        witness if worst > tol else None,
    )


def _project_off(beta: Functional, A: WStarAlgebra, S: set) -> np.ndarray:
    parts = []
    for i, blk in enumerate(beta.blocks):
        if i not in S:
            parts.append(blk.ravel())
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


def _as_seed(seed) -> int:
    return seed if isinstance(seed, (int, np.integer)) else 0


# ---------------------------------------------------------------------------
# Double dual
# ---------------------------------------------------------------------------

def double_dual_check(
    A: WStarAlgebra, trials: int = 100, seed=0, tol: float = 1e-9
) -> CheckReport:
    """The canonical embedding into the double dual is isometric and onto.

    (j(x))(phi) := pair(phi, x) holds by construction here; the content is
    the norm identity: the polar-decomposition functional attains
    |pair(phi, x)| = op_norm(x) at trace norm one, and no functional in
    the unit trace-norm ball exceeds it.  Dimensions agree, so j is a
    bijection.
    """
    rng = _rng(seed)
    worst, witness = 0.0, None
    for t in range(trials):
        x = random_element(A, rng)
        nx = op_norm(x)
        nf = norming_functional(x)
        resid = abs(abs(pair(nf, x)) - nx)
        if resid > worst:
            worst, witness = resid, f"attaining functional, trial {t}"
        phi = random_functional(A, rng)
        tn = tr_norm(phi)
        if tn > 0:
            excess = max(0.0, abs(pair(phi, x)) - nx * tn)
            if excess > worst:
                worst, witness = excess, f"norm bound, trial {t}"
    return make_report(
        "double_dual", worst, tol, _as_seed(seed),
        witness if worst > tol else None,
    )


# ---------------------------------------------------------------------------
# Predual of the tensor product
# ---------------------------------------------------------------------------

def partial_evaluate(ts: TensorStructure, phi: Functional, x: AlgebraElement) -> Functional:
    """The functional b -> pair(phi, x (x) b) on the right factor.

    This is how membership of phi in the predual of the tensor product is
    stated; at finite dimension membership is automatic, so the operator
    itself is the useful object.
    """
    if ts.flip:
        raise StructureMismatch("partial evaluation expects the canonical layout")
    if phi.algebra.structure != ts.total.structure:
        raise StructureMismatch("functional does not live on the tensor algebra")
    if x.algebra.structure != ts.left.structure:
        raise StructureMismatch("element does not live in the left factor")
    B = ts.right
    out = [np.zeros((m, m), dtype=complex) for m in B.sizes]
    kB = len(B.sizes)
    for i, n in enumerate(ts.left.sizes):
        for j, m in enumerate(B.sizes):
            blk = phi.blocks[i * kB + j].reshape(n, m, n, m)
            out[j] += np.einsum("acbd,ba->cd", blk, x.blocks[i])
    return Functional(B, tuple(out))


def partial_evaluate_left(ts: TensorStructure, phi: Functional, y: AlgebraElement) -> Functional:
    """The symmetric variant: a -> pair(phi, a (x) y) on the left factor."""
    if ts.flip:
        raise StructureMismatch("partial evaluation expects the canonical layout")
    if phi.algebra.structure != ts.total.structure:
        raise StructureMismatch("functional does not live on the tensor algebra")
    if y.algebra.structure != ts.right.structure:
        raise StructureMismatch("element does not live in the right factor")
    A = ts.left
    out = [np.zeros((n, n), dtype=complex) for n in A.sizes]
    kB = len(ts.right.sizes)
    for i, n in enumerate(A.sizes):
        for j, m in enumerate(ts.right.sizes):
            blk = phi.blocks[i * kB + j].reshape(n, m, n, m)
            out[i] += np.einsum("acbd,dc->ab", blk, y.blocks[j])
    return Functional(A, tuple(out))


def predual_tensor_check(
    A: WStarAlgebra,
    B: WStarAlgebra,
    trials: int = 200,
    seed=0,
    tol: float = 1e-9,
    factorization_tol: float = 1e-12,
) -> CheckReport:
    """The predual of the tensor product is the tensor product of preduals.

    Verified as three finite-dimensional identities: the pairing
    factorizes on simple tensors, the trace norm is a cross norm on simple
    tensor functionals (Kronecker singular values are products), and the
    dimensions multiply.  Factorization defects are rescaled by
    tol / factorization_tol so a single threshold governs the report.
    """
    from .tensor import tensor_algebra, tensor_elements, tensor_functionals

    ts = tensor_algebra(A, B)
    rng = _rng(seed)
    worst, witness = 0.0, None
    if ts.total.dim != A.dim * B.dim:
        return make_report(
            "predual_tensor", 1.0, tol, _as_seed(seed), "dimension identity failed"
        )
    scale = tol / factorization_tol
    for t in range(trials):
        b1, b2 = random_functional(A, rng), random_functional(B, rng)
        a1, a2 = random_element(A, rng), random_element(B, rng)
        bb = tensor_functionals(b1, b2)
        lhs = pair(bb, tensor_elements(a1, a2))
        rhs = pair(b1, a1) * pair(b2, a2)
        fact = abs(lhs - rhs) / max(abs(rhs), 1.0)
        if fact * scale > worst:
            worst, witness = fact * scale, f"pairing factorization, trial {t}"
        t1, t2 = tr_norm(b1), tr_norm(b2)
        cross = abs(tr_norm(bb) - t1 * t2) / max(t1 * t2, 1.0)
        if cross > worst:
            worst, witness = cross, f"trace-norm cross law, trial {t}"
    return make_report(
        "predual_tensor", worst, tol, _as_seed(seed),
        witness if worst > tol else None,
    )
