"""Normal (not necessarily unital) *-homomorphisms between multi-matrix
algebras.

A morphism is stored as a dense complex matrix acting on the shared
matrix-unit coordinates, together with a verification flag.  At finite
dimension every linear map is automatically weak-* continuous, so normality
is a recorded fact of the category rather than something to test.

Every *-homomorphism between multi-matrix algebras is unitarily equivalent
to a canonical multiplicity form: target block j receives c[j][i] diagonal
copies of source block i (copies ordered by ascending i, zero padding
last), conjugated by one unitary per target block.  `from_multiplicity`
realizes that normal form and `canonical_form` recovers the integer counts
from the ranks of the images of minimal projections.

Verification checks multiplicativity and *-preservation on the full
matrix-unit basis; residuals are Frobenius norms of basis-pair defects,
which dominate the corresponding operator norms.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .algebra import (
    AlgebraElement,
    WStarAlgebra,
    _rng,
    from_coords,
    haar_unitary,
    numerical_rank,
    op_norm,
    to_coords,
)
from .errors import (
    MultiplicityOverflow,
    NotVerified,
    ObjectMismatch,
    StructureMismatch,
)
from .reports import CheckReport, make_report

UNITAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StarHom:
    """Linear map between algebras on matrix-unit coordinates."""

    source: WStarAlgebra
    target: WStarAlgebra
    matrix: np.ndarray  # shape (dim target, dim source)
    verified: bool
    unital: bool

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        return apply(self, x)

    def __matmul__(self, other: StarHom) -> StarHom:
        return compose(self, other)

    def verify(self, tol: float = 1e-10) -> StarHom:
        """Return a copy flagged by the outcome of `verify_hom`."""
        report = verify_hom(self, tol)
        return replace(self, verified=report.status == "pass")

    def __repr__(self):
        return (
            f"StarHom({list(self.source.sizes)} -> {list(self.target.sizes)}, "
            f"verified={self.verified}, unital={self.unital})"
        )


def star_hom(source, target, matrix, verified=False) -> StarHom:
    """Wrap a coordinate matrix; unitality is computed, not declared."""
    matrix = np.array(matrix, dtype=complex)
    if matrix.shape != (target.dim, source.dim):
        raise StructureMismatch(
            f"map shape {matrix.shape} does not match "
            f"({target.dim}, {source.dim})"
        )
    matrix.flags.writeable = False
    image_of_unit = matrix @ to_coords(source.unit)
    unital = (
        op_norm(from_coords(target, image_of_unit) - target.unit) <= UNITAL_TOL
    )
    return StarHom(source, target, matrix, verified, unital)


def identity_hom(algebra: WStarAlgebra) -> StarHom:
    return star_hom(algebra, algebra, np.eye(algebra.dim, dtype=complex), verified=True)


def zero_hom(source: WStarAlgebra, target: WStarAlgebra) -> StarHom:
    """The zero *-homomorphism (factors through the zero algebra O)."""
    return star_hom(
        source, target, np.zeros((target.dim, source.dim), dtype=complex),
        verified=True,
    )


def apply(f: StarHom, x: AlgebraElement) -> AlgebraElement:
    if x.algebra.structure != f.source.structure:
        raise StructureMismatch(
            f"element over {x.algebra.sizes} fed to hom from {f.source.sizes}"
        )
    return from_coords(f.target, f.matrix @ to_coords(x))


def compose(g: StarHom, f: StarHom) -> StarHom:
    """g after f; the verified flag is the conjunction."""
    if f.target.structure != g.source.structure:
        raise ObjectMismatch(
            f"cannot compose {g.source.sizes} <- {f.target.sizes} outputs"
        )
    return star_hom(
        f.source, g.target, g.matrix @ f.matrix,
        verified=f.verified and g.verified,
    )


def is_unital(f: StarHom, tol: float = UNITAL_TOL) -> bool:
    """f(1) = 1 within tol (degenerately true into the zero algebra)."""
    return op_norm(apply(f, f.source.unit) - f.target.unit) <= tol


# ---------------------------------------------------------------------------
# Verification on the matrix-unit basis
# ---------------------------------------------------------------------------

def _image_tensors(f: StarHom):
    """G[(j, i)][x, y, a, b] = entry (x,y) of target block j of f(e^(i)_ab)."""
    tensors = {}
    src, tgt = f.source, f.target
    for j, (m, roff) in enumerate(zip(tgt.sizes, tgt.structure.offsets)):
        for i, (n, coff) in enumerate(zip(src.sizes, src.structure.offsets)):
            sub = f.matrix[roff : roff + m * m, coff : coff + n * n]
            tensors[(j, i)] = sub.reshape(m, m, n, n)
    return tensors


_CHUNK_ENTRIES = 4_000_000  # complex entries per transient product tensor


def _pair_product_defects(stack_p, stack_q):
    """Squared Frobenius norms of X_p Y_q over all index pairs.

    stack_p: (P, m, m), stack_q: (Q, m, m).  Products are materialized
    (one flat GEMM per chunk), never reconstructed from Gram traces, so
    values far below sqrt(eps) of the operand scale remain exact.
    """
    P, Q = stack_p.shape[0], stack_q.shape[0]
    m = stack_p.shape[1]
    out = np.zeros((P, Q))
    if P == 0 or Q == 0 or m == 0:
        return out
    if not (stack_p.any() and stack_q.any()):
        return out
    y_cat = np.ascontiguousarray(stack_q.transpose(1, 0, 2)).reshape(m, Q * m)
    chunk = max(1, _CHUNK_ENTRIES // max(1, Q * m * m))
    for start in range(0, P, chunk):
        stop = min(P, start + chunk)
        x_cat = stack_p[start:stop].reshape((stop - start) * m, m)
        prod = x_cat @ y_cat
        sq = (prod.real**2 + prod.imag**2).reshape(stop - start, m, Q, m)
        out[start:stop] = sq.sum(axis=(1, 3))
    return out


def verify_hom(f: StarHom, tol: float = 1e-10) -> CheckReport:
    """Check f(e_p e_q) = f(e_p) f(e_q) and f(e_p*) = f(e_p)* on the basis.

    max_error is the largest Frobenius defect over basis pairs.  Failure is
    a report outcome, never an exception.
    """
    src, tgt = f.source, f.target
    kS, kT = len(src.sizes), len(tgt.sizes)
    tensors = _image_tensors(f)

    # Basis images stacked flat per (target block, source block):
    # stacks[(j, i)][a * n + b] = target-block-j component of f(e^(i)_ab).
    stacks = {}
    for (j, i), G in tensors.items():
        m, n = tgt.sizes[j], src.sizes[i]
        stacks[(j, i)] = np.ascontiguousarray(
            G.transpose(2, 3, 0, 1).reshape(n * n, m, m)
        )

    max_err, witness = 0.0, None

    def consider(err, note):
        nonlocal max_err, witness
        if err > max_err:
            max_err, witness = err, note

    # Within one source block: f(e_ab) f(e_cd) = delta_bc f(e_ad).
    # Unmatched pairs (b != c) expect zero, so their defect is the raw
    # product norm; the n^3 matched pairs are overwritten with the exact
    # chained-unit defect.
    for i, n in enumerate(src.sizes):
        acc = np.zeros((n * n, n * n))
        aa, bb, dd = np.meshgrid(
            np.arange(n), np.arange(n), np.arange(n), indexing="ij"
        )
        pidx = (aa * n + bb).ravel()
        qidx = (bb * n + dd).ravel()
        ridx = (aa * n + dd).ravel()
        for j in range(kT):
            Gm = stacks[(j, i)]
            sq = _pair_product_defects(Gm, Gm)
            defect = Gm[pidx] @ Gm[qidx] - Gm[ridx]
            sq[pidx, qidx] = (defect.real**2 + defect.imag**2).sum(axis=(1, 2))
            acc += sq
        if acc.size:
            worst = float(np.sqrt(max(acc.max(), 0.0)))
            p, q = np.unravel_index(np.argmax(acc), acc.shape)
            consider(
                worst,
                f"product defect at block {i}, units "
                f"({p // n},{p % n})({q // n},{q % n})",
            )

    # Across source blocks every product vanishes.
    for i1 in range(kS):
        for i2 in range(kS):
            if i1 == i2:
                continue
            n1, n2 = src.sizes[i1], src.sizes[i2]
            sq = np.zeros((n1 * n1, n2 * n2))
            for j in range(kT):
                sq += _pair_product_defects(stacks[(j, i1)], stacks[(j, i2)])
            if sq.size:
                worst = float(np.sqrt(max(sq.max(), 0.0)))
                consider(worst, f"nonzero product across blocks {i1},{i2}")

    # Star preservation: f(e_ba) = f(e_ab)^*.
    for i, n in enumerate(src.sizes):
        acc = np.zeros((n, n))
        for j in range(kT):
            G = tensors[(j, i)]
            defect = G.transpose(0, 1, 3, 2) - G.transpose(1, 0, 2, 3).conj()
            acc += np.einsum("xyab,xyab->ab", defect, defect.conj()).real
        if acc.size:
            worst = float(np.sqrt(max(acc.max(), 0.0)))
            a, b = np.unravel_index(np.argmax(acc), acc.shape)
            consider(worst, f"star defect at block {i}, unit ({a},{b})")

    report = make_report(
        "verify_hom", max_err, tol, 0,
        witness if max_err > tol else None,
    )
    return report


# ---------------------------------------------------------------------------
# Multiplicity normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MultiplicityData:
    """Integer copy counts c[j][i] plus one unitary per target block.

    unitaries=None means the identity conjugation everywhere (and is what
    `canonical_form` returns, counts being the unitary-invariant part).
    """

    counts: tuple[tuple[int, ...], ...]
    unitaries: tuple[np.ndarray, ...] | None = None

    def count_matrix(self) -> np.ndarray:
        rows = len(self.counts)
        cols = len(self.counts[0]) if rows else 0
        return np.array(self.counts, dtype=int).reshape(rows, cols)


def multiplicity_is_unital(A: WStarAlgebra, B: WStarAlgebra, data: MultiplicityData) -> bool:
    """Copies fill every target block exactly."""
    for j, m in enumerate(B.sizes):
        used = sum(c * n for c, n in zip(data.counts[j], A.sizes))
        if used != m:
            return False
    return True


def from_multiplicity(A: WStarAlgebra, B: WStarAlgebra, data: MultiplicityData) -> StarHom:
    """Build the *-homomorphism with the given multiplicity normal form.

    Target block j of the image of a is
        W_j ( a_0 copied c[j][0] times + a_1 copied c[j][1] times + ... + 0 pad ) W_j^*
    with copies ordered by ascending source block and padding last.
    """
    counts = data.counts
    if len(counts) != len(B.sizes) or any(len(row) != len(A.sizes) for row in counts):
        raise StructureMismatch(
            f"count matrix shape does not match ({len(B.sizes)}, {len(A.sizes)})"
        )
    for j, m in enumerate(B.sizes):
        if any(c < 0 for c in counts[j]):
            raise MultiplicityOverflow(f"negative count in target block {j}")
        used = sum(c * n for c, n in zip(counts[j], A.sizes))
        if used > m:
            raise MultiplicityOverflow(
                f"target block {j} holds {m} rows, counts need {used}"
            )
    unitaries = data.unitaries
    if unitaries is None:
        unitaries = tuple(np.eye(m, dtype=complex) for m in B.sizes)
    if len(unitaries) != len(B.sizes) or any(
        w.shape != (m, m) for w, m in zip(unitaries, B.sizes)
    ):
        raise StructureMismatch("unitary shapes do not match target blocks")

    M = np.zeros((B.dim, A.dim), dtype=complex)
    for i, (n, coff) in enumerate(zip(A.sizes, A.structure.offsets)):
        for j, (m, roff) in enumerate(zip(B.sizes, B.structure.offsets)):
            c = counts[j][i]
            if c == 0:
                continue
            base = sum(counts[j][ii] * A.sizes[ii] for ii in range(i))
            W = unitaries[j]
            for a in range(n):
                for b in range(n):
                    blk = np.zeros((m, m), dtype=complex)
                    for t in range(c):
                        o = base + t * n
                        blk[o + a, o + b] = 1.0
                    img = W @ blk @ W.conj().T
                    M[roff : roff + m * m, coff + a * n + b] += img.ravel()
    return star_hom(A, B, M, verified=True)


def canonical_form(f: StarHom) -> MultiplicityData:
    """Recover counts: c[j][i] = rank of target block j of f(e^(i)_11)."""
    if not f.verified:
        raise NotVerified("canonical_form requires a verified homomorphism")
    src, tgt = f.source, f.target
    rows = []
    images = []
    for i, (n, coff) in enumerate(zip(src.sizes, src.structure.offsets)):
        v = np.zeros(src.dim, dtype=complex)
        v[coff] = 1.0  # minimal projection e^(i)_11
        images.append(f.matrix @ v)
    for j, (m, roff) in enumerate(zip(tgt.sizes, tgt.structure.offsets)):
        row = []
        for i in range(len(src.sizes)):
            blk = images[i][roff : roff + m * m].reshape(m, m)
            row.append(numerical_rank(blk))
        rows.append(tuple(row))
    return MultiplicityData(counts=tuple(rows), unitaries=None)


# ---------------------------------------------------------------------------
# Random morphisms
# ---------------------------------------------------------------------------

def _admissible_counts(sizes, capacity):
    """All count tuples c >= 0 with sum c_i * sizes_i <= capacity."""
    if not sizes:
        yield ()
        return
    n, rest = sizes[0], sizes[1:]
    for c in range(capacity // n + 1):
        for tail in _admissible_counts(rest, capacity - c * n):
            yield (c,) + tail


def random_multiplicity(A: WStarAlgebra, B: WStarAlgebra, seed) -> MultiplicityData:
    """Uniform admissible counts per target block, Haar unitaries."""
    rng = _rng(seed)
    counts = []
    for m in B.sizes:
        options = list(_admissible_counts(A.sizes, m))
        counts.append(options[int(rng.integers(len(options)))])
    unitaries = tuple(haar_unitary(m, rng) for m in B.sizes)
    return MultiplicityData(counts=tuple(counts), unitaries=unitaries)


def random_hom(A: WStarAlgebra, B: WStarAlgebra, seed) -> StarHom:
    return from_multiplicity(A, B, random_multiplicity(A, B, seed))
