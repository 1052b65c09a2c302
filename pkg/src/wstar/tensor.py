"""Tensor products of multi-matrix algebras and the universal property
mediator.

At finite dimension the algebraic tensor product is already the W*-tensor
product: the algebra with one block of size n_i * m_j per block pair,
ordered lexicographically in (i, j), with the simple tensor x (x) y landing
on Kronecker products block-wise.  The left and right unital embeddings
w1(a) = a (x) 1 and w2(b) = 1 (x) b have commuting ranges, and for any pair
t1 : A -> M, t2 : B -> M with commuting ranges there is exactly one
*-homomorphism t with t(a (x) b) = t1(a) t2(b); simple tensors of basis
units span, which is where uniqueness comes from.

The spatial (min) C*-norm is the operator norm of the block representation,
which is faithful here.  The max C*-norm is exposed only as a lower-bound
estimator over supplied commuting pairs: the supremum over all pairs is not
enumerable, and finite-dimensional nuclearity pins the true value to the
min norm anyway, which is exactly what the estimator exhibits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import (
    AlgebraElement,
    Functional,
    WStarAlgebra,
    _rng,
    from_coords,
    haar_unitary,
    make_algebra,
    op_norm,
    to_coords,
)
from .category import product, product_mediator
from .errors import (
    NotVerified,
    ObjectMismatch,
    RangesDoNotCommute,
    StructureMismatch,
)
from .morphisms import (
    MultiplicityData,
    StarHom,
    apply,
    compose,
    from_multiplicity,
    identity_hom,
    star_hom,
    zero_hom,
)
from .reports import CheckReport, make_report


@dataclass(frozen=True, eq=False)
class TensorStructure:
    """A realization of A (x) B with its two unital embeddings.

    pair_perm maps the flat simple-tensor index p * dim(B) + q of basis
    units e_p (x) e_q to the coordinate of the corresponding matrix unit of
    the total algebra (the simple tensor of basis units is again a basis
    unit).  flip=False is the canonical lexicographic layout; flip=True
    orders block pairs (j, i)-major and represents x (x) y as kron(y_j, x_i),
    giving a second, genuinely different realization of the same universal
    property.
    """

    left: WStarAlgebra
    right: WStarAlgebra
    total: WStarAlgebra
    w1: StarHom
    w2: StarHom
    pair_perm: np.ndarray
    flip: bool = False

    def simple_tensor(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        """Embed x (x) y into this realization's total algebra."""
        if x.algebra.structure != self.left.structure:
            raise StructureMismatch("left factor does not match")
        if y.algebra.structure != self.right.structure:
            raise StructureMismatch("right factor does not match")
        if self.flip:
            blocks = tuple(
                np.kron(yb, xb) for yb in y.blocks for xb in x.blocks
            )
        else:
            blocks = tuple(
                np.kron(xb, yb) for xb in x.blocks for yb in y.blocks
            )
        return AlgebraElement(self.total, blocks)


@lru_cache(maxsize=256)
def _build_structure(A: WStarAlgebra, B: WStarAlgebra, flip: bool) -> TensorStructure:
    kA, kB = len(A.sizes), len(B.sizes)
    if flip:
        sizes = [m * n for m in B.sizes for n in A.sizes]
    else:
        sizes = [n * m for n in A.sizes for m in B.sizes]
    total = make_algebra(sizes)

    perm = np.empty(A.dim * B.dim, dtype=np.intp)
    for i, (n, aoff) in enumerate(zip(A.sizes, A.structure.offsets)):
        for j, (m, boff) in enumerate(zip(B.sizes, B.structure.offsets)):
            t = (j * kA + i) if flip else (i * kB + j)
            toff = total.structure.offsets[t]
            w = n * m
            for a in range(n):
                for b in range(n):
                    p = aoff + a * n + b
                    for c in range(m):
                        for d in range(m):
                            q = boff + c * m + d
                            if flip:
                                row, col = c * n + a, d * n + b
                            else:
                                row, col = a * m + c, b * m + d
                            perm[p * B.dim + q] = toff + row * w + col

    def embedding(src, fixed_other, on_left):
        M = np.zeros((total.dim, src.dim), dtype=complex)
        for p in range(src.dim):
            v = np.zeros(src.dim, dtype=complex)
            v[p] = 1.0
            e = from_coords(src, v)
            if on_left:
                img = _simple_blocks(e, fixed_other, flip)
            else:
                img = _simple_blocks(fixed_other, e, flip)
            M[:, p] = np.concatenate([blk.ravel() for blk in img]) if img else np.zeros(0)
        return star_hom(src, total, M, verified=True)

    w1 = embedding(A, B.unit, on_left=True)
    w2 = embedding(B, A.unit, on_left=False)
    perm.flags.writeable = False
    return TensorStructure(A, B, total, w1, w2, perm, flip)


def _simple_blocks(x, y, flip):
    if flip:
        return [np.kron(yb, xb) for yb in y.blocks for xb in x.blocks]
    return [np.kron(xb, yb) for xb in x.blocks for yb in y.blocks]


def tensor_algebra(A: WStarAlgebra, B: WStarAlgebra) -> TensorStructure:
    """Canonical realization; the zero algebra O absorbs the product."""
    return _build_structure(A, B, flip=False)


def tensor_elements(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """x (x) y in the canonical layout: block (i, j) = kron(x_i, y_j)."""
    sizes = [xb.shape[0] * yb.shape[0] for xb in x.blocks for yb in y.blocks]
    total = make_algebra(sizes)
    return AlgebraElement(total, tuple(_simple_blocks(x, y, flip=False)))


def tensor_functionals(b1: Functional, b2: Functional) -> Functional:
    """Functional with pair(b1 (x) b2, x (x) y) = pair(b1, x) pair(b2, y)."""
    sizes = [p.shape[0] * q.shape[0] for p in b1.blocks for q in b2.blocks]
    total = make_algebra(sizes)
    blocks = tuple(np.kron(p, q) for p in b1.blocks for q in b2.blocks)
    return Functional(total, blocks)


def tensor_homs(f: StarHom, g: StarHom) -> StarHom:
    """The unique hom with (f (x) g)(x (x) y) = f(x) (x) g(y).

    On basis units the coordinate matrix is a Kronecker product reindexed
    by the source and target simple-tensor permutations.
    """
    if not (f.verified and g.verified):
        raise NotVerified("tensor_homs requires verified factors")
    ts_src = tensor_algebra(f.source, g.source)
    ts_tgt = tensor_algebra(f.target, g.target)
    M = np.zeros((ts_tgt.total.dim, ts_src.total.dim), dtype=complex)
    if M.size:
        M[np.ix_(ts_tgt.pair_perm, ts_src.pair_perm)] = np.kron(f.matrix, g.matrix)
    return star_hom(ts_src.total, ts_tgt.total, M, verified=True)


# ---------------------------------------------------------------------------
# Commuting ranges and the mediator
# ---------------------------------------------------------------------------

def _stacked_images(f: StarHom):
    """Per target block, all basis images stacked as (dim source, m, m)."""
    out = []
    for m, roff in zip(f.target.sizes, f.target.structure.offsets):
        sub = f.matrix[roff : roff + m * m, :]
        out.append(np.ascontiguousarray(sub.T).reshape(f.source.dim, m, m))
    return out


def ranges_commute(t1: StarHom, t2: StarHom, tol: float = 1e-10) -> CheckReport:
    """Largest Frobenius norm of [t1(e_p), t2(e_q)] over basis pairs."""
    if t1.target.structure != t2.target.structure:
        raise ObjectMismatch("commutation check needs a shared target")
    X, Y = _stacked_images(t1), _stacked_images(t2)
    dA, dB = t1.source.dim, t2.source.dim
    sq = np.zeros((dA, dB))
    for xb, yb in zip(X, Y):
        comm = np.einsum("pab,qbc->pqac", xb, yb) - np.einsum(
            "qab,pbc->pqac", yb, xb
        )
        sq += np.einsum("pqac,pqac->pq", comm, comm.conj()).real
    if sq.size:
        worst = float(np.sqrt(max(sq.max(), 0.0)))
        witness = None
        if worst > tol:
            bad = np.argwhere(sq > tol * tol)
            p, q = bad[0]
            witness = f"commutator of basis units ({int(p)}, {int(q)})"
    else:
        worst, witness = 0.0, None
    return make_report("ranges_commute", worst, tol, 0, witness)


def _product_columns(t1: StarHom, t2: StarHom) -> np.ndarray:
    """Matrix whose column p * dB + q holds coords of t1(e_p) t2(e_q)."""
    X, Y = _stacked_images(t1), _stacked_images(t2)
    dA, dB = t1.source.dim, t2.source.dim
    tgt = t1.target
    out = np.zeros((tgt.dim, dA * dB), dtype=complex)
    for (m, roff), xb, yb in zip(
        zip(tgt.sizes, tgt.structure.offsets), X, Y
    ):
        prod = np.einsum("pab,qbc->pqac", xb, yb)
        out[roff : roff + m * m, :] = prod.reshape(dA * dB, m * m).T
    return out


def mediator(
    t1: StarHom,
    t2: StarHom,
    tol: float = 1e-10,
    through: TensorStructure | None = None,
    enumeration: str = "forward",
) -> StarHom:
    """The unique t with t(a (x) b) = t1(a) t2(b), through a realization.

    Requires verified maps into a shared target with commuting ranges.
    The defining values on simple tensors of basis units span the source,
    so the coordinate matrix is the unique solution of a square linear
    system; `enumeration` picks the order in which that system is written
    down (the solution does not depend on it).
    """
    if not (t1.verified and t2.verified):
        raise NotVerified("mediator requires verified maps")
    if t1.target.structure != t2.target.structure:
        raise ObjectMismatch("mediator needs a shared target")
    report = ranges_commute(t1, t2, tol)
    if report.status != "pass":
        raise RangesDoNotCommute(
            f"ranges do not commute: {report.witness} "
            f"has commutator norm {report.max_error:.3e}",
            witness=report.witness,
            magnitude=report.max_error,
        )
    if through is None:
        through = tensor_algebra(t1.source, t2.source)
    if (
        through.left.structure != t1.source.structure
        or through.right.structure != t2.source.structure
    ):
        raise ObjectMismatch("realization factors do not match the maps")

    dpair = t1.source.dim * t2.source.dim
    if through.total.dim != dpair:
        raise ObjectMismatch("realization dimension mismatch")
    if dpair == 0:
        M = np.zeros((t1.target.dim, 0), dtype=complex)
        return star_hom(through.total, t1.target, M, verified=True)

    span = _product_columns(through.w1, through.w2)
    values = _product_columns(t1, t2)
    if enumeration == "reversed":
        span = span[:, ::-1]
        values = values[:, ::-1]
    # solve M . span = values
    M = np.linalg.solve(span.T, values.T).T
    med = star_hom(through.total, t1.target, M, verified=False)
    return med.verify(tol)


# ---------------------------------------------------------------------------
# C*-norms
# ---------------------------------------------------------------------------

def min_norm(z: AlgebraElement) -> float:
    """Spatial C*-norm: the block representation is faithful, so this is
    the operator norm."""
    return op_norm(z)


def max_norm_lower_bound(z: AlgebraElement, pairs, tol: float = 1e-10) -> float:
    """sup over the supplied commuting pairs of |mediator(s1, s2)(z)|.

    Every mediator is a contraction, so the bound never exceeds min_norm;
    including the faithful pair (the realization's own embeddings) attains
    it, which is finite-dimensional nuclearity made executable.
    """
    best = 0.0
    for idx, (s1, s2) in enumerate(pairs):
        check = ranges_commute(s1, s2, tol)
        if check.status != "pass":
            raise RangesDoNotCommute(
                f"pair {idx} has non-commuting ranges "
                f"({check.witness}, norm {check.max_error:.3e})",
                witness=(idx, check.witness),
                magnitude=check.max_error,
            )
        med = mediator(s1, s2, tol)
        best = max(best, op_norm(apply(med, z)))
    return best


def commutative_tensor_check(
    x_size: int, y_size: int, trials: int = 100, seed=0, tol: float = 1e-12
) -> CheckReport:
    """C(X) (x) C(Y) = C(X x Y) for finite spaces, as a norm identity.

    For diagonal algebras of sizes p and q the tensor algebra is diagonal
    of size p*q and the min norm of sum_k f_k (x) g_k is the maximum of
    |sum_k f_k(x) g_k(y)| over the p x q grid.
    """
    X, Y = make_algebra([1] * x_size), make_algebra([1] * y_size)
    ts = tensor_algebra(X, Y)
    rng = _rng(seed)
    worst, witness = 0.0, None
    if ts.total.sizes != (1,) * (x_size * y_size):
        return make_report(
            "commutative", 1.0, tol, _seed_int(seed),
            f"tensor blocks {ts.total.sizes} are not scalar",
        )
    for t in range(trials):
        terms = 1 + int(rng.integers(3))
        fs = [rng.standard_normal(x_size) + 1j * rng.standard_normal(x_size) for _ in range(terms)]
        gs = [rng.standard_normal(y_size) + 1j * rng.standard_normal(y_size) for _ in range(terms)]
        grid = np.zeros((x_size, y_size), dtype=complex)
        z = ts.total.zero
        for fv, gv in zip(fs, gs):
            grid += np.outer(fv, gv)
            f_el = AlgebraElement(X, tuple(np.array([[c]]) for c in fv))
            g_el = AlgebraElement(Y, tuple(np.array([[c]]) for c in gv))
            z = z + ts.simple_tensor(f_el, g_el)
        gmax = float(np.max(np.abs(grid))) if grid.size else 0.0
        resid = abs(min_norm(z) - gmax) / max(gmax, 1.0)
        if resid > worst:
            worst, witness = resid, f"trial {t}"
    return make_report(
        "commutative", worst, tol, _seed_int(seed),
        witness if worst > tol else None,
    )


def _seed_int(seed) -> int:
    return seed if isinstance(seed, (int, np.integer)) else 0


# ---------------------------------------------------------------------------
# Random commuting pairs (corner / tensor-split constructions)
# ---------------------------------------------------------------------------

def _random_fattening(A: WStarAlgebra, rng):
    """A block-diagonal embedding of A into a slightly larger algebra:
    1 or 2 copies of each block plus occasional zero padding.  Padding
    makes the embedding non-unital."""
    if not A.sizes:
        return A, identity_hom(A)
    copies = [1 + int(rng.integers(2)) for _ in A.sizes]
    pads = [int(rng.integers(2)) for _ in A.sizes]
    sizes = [n * r + p for n, r, p in zip(A.sizes, copies, pads)]
    C = make_algebra(sizes)
    counts = tuple(
        tuple(copies[i] if i == j else 0 for i in range(len(A.sizes)))
        for j in range(len(A.sizes))
    )
    unitaries = tuple(haar_unitary(m, rng) for m in C.sizes)
    f = from_multiplicity(A, C, MultiplicityData(counts, unitaries))
    return C, f


def random_commuting_pair(A: WStarAlgebra, B: WStarAlgebra, seed):
    """A pair t1 : A -> M, t2 : B -> M with commuting ranges.

    Draws one of three shapes: a tensor split (through embeddings into
    C (x) D), disjoint corners of a product (ranges multiply to zero), or a
    mixture with both a tensor component and private corner components.
    """
    rng = _rng(seed)
    pattern = int(rng.integers(3))
    C, f = _random_fattening(A, rng)
    D, g = _random_fattening(B, rng)
    ts = tensor_algebra(C, D)
    t1 = compose(ts.w1, f)
    t2 = compose(ts.w2, g)
    if pattern == 0:
        return t1, t2
    E1, h1 = _random_fattening(A, rng)
    E2, h2 = _random_fattening(B, rng)
    if pattern == 1:
        prod = product([E1, E2])
        return (
            compose(prod.injections[0], h1),
            compose(prod.injections[1], h2),
        )
    prod = product([ts.total, E1, E2])
    u1 = product_mediator(prod, [t1, h1, zero_hom(A, E2)])
    u2 = product_mediator(prod, [t2, zero_hom(B, E1), h2])
    return u1, u2
