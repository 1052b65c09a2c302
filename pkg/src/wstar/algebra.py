"""Finite-dimensional W*-algebras as direct sums of complex matrix blocks.

A finite-dimensional W*-algebra is, up to isomorphism, a direct sum
``M_{n_1}(C) + ... + M_{n_k}(C)``.  Elements are tuples of square complex
blocks.  The algebra norm is the largest block spectral norm (the sup over
the family), and the predual is realized on the same block shape through
the bilinear trace pairing

    pair(b, a) = sum_i tr(b_i a_i)

with the trace-class norm (sum of all block singular values).  With this
pairing the dual of the element sup-norm is exactly the block trace-norm
sum, and the double dual identifies with the algebra literally, so the
Banach-space predual machinery is exact rather than asymptotic here.

Coordinates use the matrix-unit basis ordered block-major, then row-major
within each block.  Every module in this package shares that convention.

The empty block list encodes the degenerate algebra O = {0}; its unit is
its zero element and all norms vanish on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NonPositiveBlockSize, StructureMismatch

# Singular values below RANK_TOL times the largest one are treated as zero
# whenever a rank decision is needed.
RANK_TOL = 1e-10


def _rng(seed) -> np.random.Generator:
    """Accept an int seed or a Generator; state is always explicit."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class BlockStructure:
    """Ordered list of matrix block sizes; the empty tuple is O = {0}."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        for n in self.sizes:
            if n <= 0:
                raise NonPositiveBlockSize(f"block size {n} is not >= 1")

    @cached_property
    def dim(self) -> int:
        return int(sum(n * n for n in self.sizes))

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """Coordinate offset of each block in the flat matrix-unit basis."""
        off, acc = [], 0
        for n in self.sizes:
            off.append(acc)
            acc += n * n
        return tuple(off)

    @property
    def block_count(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True, eq=False)
class WStarAlgebra:
    """A finite-dimensional W*-algebra with its multiplicative unit."""

    structure: BlockStructure

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.structure.sizes

    @property
    def dim(self) -> int:
        return self.structure.dim

    @cached_property
    def unit(self) -> AlgebraElement:
        """Identity in each block; the zero element when the algebra is O."""
        return AlgebraElement(
            self, tuple(np.eye(n, dtype=complex) for n in self.sizes)
        )

    @cached_property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(
            self, tuple(np.zeros((n, n), dtype=complex) for n in self.sizes)
        )

    def __eq__(self, other):
        return (
            isinstance(other, WStarAlgebra) and self.structure == other.structure
        )

    def __hash__(self):
        return hash(self.structure)

    def __repr__(self):
        return f"WStarAlgebra{list(self.sizes)}"


def make_algebra(sizes) -> WStarAlgebra:
    """Build the multi-matrix algebra with the given block sizes.

    The empty list yields the degenerate zero algebra O.
    """
    return WStarAlgebra(BlockStructure(tuple(int(n) for n in sizes)))


def _freeze_blocks(algebra, blocks):
    sizes = algebra.sizes
    if len(blocks) != len(sizes):
        raise StructureMismatch(
            f"expected {len(sizes)} blocks, got {len(blocks)}"
        )
    out = []
    for n, blk in zip(sizes, blocks):
        arr = np.array(blk, dtype=complex)
        if arr.shape != (n, n):
            raise StructureMismatch(
                f"block of shape {arr.shape} does not match size {n}"
            )
        arr.flags.writeable = False
        out.append(arr)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A tuple of square complex blocks matching the parent structure."""

    algebra: WStarAlgebra
    blocks: tuple[np.ndarray, ...]

    def adjoint(self) -> AlgebraElement:
        return AlgebraElement(
            self.algebra, tuple(b.conj().T for b in self.blocks)
        )

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1.0, other))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __neg__(self):
        return scale(-1.0, self)

    def __repr__(self):
        return f"AlgebraElement(sizes={list(self.algebra.sizes)})"


@dataclass(frozen=True, eq=False)
class Functional:
    """Predual element; pairs with elements by the block trace pairing."""

    algebra: WStarAlgebra
    blocks: tuple[np.ndarray, ...]

    def __add__(self, other):
        _check_same(self, other)
        return Functional(
            self.algebra,
            tuple(a + b for a, b in zip(self.blocks, other.blocks)),
        )

    def __rmul__(self, c):
        return Functional(self.algebra, tuple(complex(c) * b for b in self.blocks))

    def __sub__(self, other):
        return self + (-1.0) * other

    def __repr__(self):
        return f"Functional(sizes={list(self.algebra.sizes)})"


def element(algebra: WStarAlgebra, blocks) -> AlgebraElement:
    """Wrap raw block matrices as an element, validating shapes."""
    return AlgebraElement(algebra, _freeze_blocks(algebra, blocks))


def functional(algebra: WStarAlgebra, blocks) -> Functional:
    """Wrap raw block matrices as a predual functional."""
    return Functional(algebra, _freeze_blocks(algebra, blocks))


def _check_same(x, y):
    if x.algebra.structure != y.algebra.structure:
        raise StructureMismatch(
            f"structures {x.algebra.sizes} and {y.algebra.sizes} differ"
        )


# ---------------------------------------------------------------------------
# Block-wise *-algebra arithmetic
# ---------------------------------------------------------------------------

def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _check_same(x, y)
    return AlgebraElement(
        x.algebra, tuple(a @ b for a, b in zip(x.blocks, y.blocks))
    )


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _check_same(x, y)
    return AlgebraElement(
        x.algebra, tuple(a + b for a, b in zip(x.blocks, y.blocks))
    )


def scale(c, x: AlgebraElement) -> AlgebraElement:
    c = complex(c)
    return AlgebraElement(x.algebra, tuple(c * b for b in x.blocks))


def adjoint(x: AlgebraElement) -> AlgebraElement:
    return x.adjoint()


# ---------------------------------------------------------------------------
# Coordinates (matrix-unit basis, block-major then row-major)
# ---------------------------------------------------------------------------

def to_coords(x) -> np.ndarray:
    """Flatten an element or functional into the shared coordinate basis."""
    if not x.blocks:
        return np.zeros(0, dtype=complex)
    return np.concatenate([b.ravel() for b in x.blocks])


def from_coords(algebra: WStarAlgebra, v) -> AlgebraElement:
    return AlgebraElement(algebra, _split_coords(algebra, v))


def functional_from_coords(algebra: WStarAlgebra, v) -> Functional:
    return Functional(algebra, _split_coords(algebra, v))


def _split_coords(algebra, v):
    v = np.asarray(v, dtype=complex).ravel()
    if v.size != algebra.dim:
        raise StructureMismatch(
            f"coordinate length {v.size} does not match dimension {algebra.dim}"
        )
    blocks = []
    for n, off in zip(algebra.sizes, algebra.structure.offsets):
        blocks.append(v[off : off + n * n].reshape(n, n))
    return tuple(blocks)


def basis_element(algebra: WStarAlgebra, index: int) -> AlgebraElement:
    """The matrix unit with coordinate `index`."""
    v = np.zeros(algebra.dim, dtype=complex)
    v[index] = 1.0
    return from_coords(algebra, v)


def coord_location(algebra: WStarAlgebra, index: int) -> tuple[int, int, int]:
    """Resolve a flat coordinate into (block, row, col)."""
    for i, (n, off) in enumerate(zip(algebra.sizes, algebra.structure.offsets)):
        if index < off + n * n:
            r, c = divmod(index - off, n)
            return i, r, c
    raise IndexError(index)


def block_transpose_perm(structure: BlockStructure) -> np.ndarray:
    """Index permutation realizing the block-wise transpose on coordinates.

    The bilinear pairing satisfies pair(b, a) = coords(b) . coords(a)[perm].
    """
    perm = np.empty(structure.dim, dtype=np.intp)
    for n, off in zip(structure.sizes, structure.offsets):
        idx = np.arange(n * n).reshape(n, n).T.ravel()
        perm[off : off + n * n] = off + idx
    return perm


# ---------------------------------------------------------------------------
# Norms, pairing, attaining elements
# ---------------------------------------------------------------------------

def op_norm(x: AlgebraElement) -> float:
    """Largest singular value over all blocks; 0 on the zero algebra."""
    best = 0.0
    for b in x.blocks:
        s = np.linalg.svd(b, compute_uv=False)
        if s.size:
            best = max(best, float(s[0]))
    return best


def tr_norm(b: Functional) -> float:
    """Sum of all block singular values (the dual norm of op_norm)."""
    total = 0.0
    for blk in b.blocks:
        total += float(np.sum(np.linalg.svd(blk, compute_uv=False)))
    return total


def pair(b: Functional, a: AlgebraElement) -> complex:
    """Bilinear block-trace pairing sum_i tr(b_i a_i), no conjugation."""
    _check_same(b, a)
    total = 0.0 + 0.0j
    for bb, aa in zip(b.blocks, a.blocks):
        total += np.einsum("rc,cr->", bb, aa)
    return complex(total)


def tr_norm_maximizer(b: Functional) -> AlgebraElement:
    """Contraction with |pair(b, .)| = tr_norm(b) and op_norm <= 1.

    Per block, b = U S V^H gives the attaining element V U^H.
    """
    blocks = []
    for blk in b.blocks:
        u, _, vh = np.linalg.svd(blk)
        blocks.append(vh.conj().T @ u.conj().T)
    return AlgebraElement(b.algebra, tuple(blocks))


def norming_functional(x: AlgebraElement) -> Functional:
    """Rank-one functional with tr_norm 1 attaining |pair(., x)| = op_norm(x).

    Built from the polar data of the block carrying the largest singular
    value; the zero functional for x = 0 or the zero algebra.
    """
    best, data = 0.0, None
    for i, blk in enumerate(x.blocks):
        u, s, vh = np.linalg.svd(blk)
        if s.size and s[0] > best:
            best = float(s[0])
            data = (i, u[:, 0], vh[0, :].conj())
    blocks = [np.zeros((n, n), dtype=complex) for n in x.algebra.sizes]
    if data is not None:
        i, u1, v1 = data
        blocks[i] = np.outer(v1, u1.conj())
    return Functional(x.algebra, tuple(blocks))


def left_mul_matrix(a: AlgebraElement) -> np.ndarray:
    """Coordinate matrix of x -> a x (block-wise kron(a_i, I))."""
    d = a.algebra.dim
    out = np.zeros((d, d), dtype=complex)
    for blk, n, off in zip(a.blocks, a.algebra.sizes, a.algebra.structure.offsets):
        out[off : off + n * n, off : off + n * n] = np.kron(blk, np.eye(n))
    return out


def right_mul_matrix(a: AlgebraElement) -> np.ndarray:
    """Coordinate matrix of x -> x a (block-wise kron(I, a_i^T))."""
    d = a.algebra.dim
    out = np.zeros((d, d), dtype=complex)
    for blk, n, off in zip(a.blocks, a.algebra.sizes, a.algebra.structure.offsets):
        out[off : off + n * n, off : off + n * n] = np.kron(np.eye(n), blk.T)
    return out


# ---------------------------------------------------------------------------
# Deterministic random generators (explicit, splittable PRNG state)
# ---------------------------------------------------------------------------

def _gaussian_block(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def random_element(algebra: WStarAlgebra, seed) -> AlgebraElement:
    """Standard complex Gaussian entries in each block."""
    rng = _rng(seed)
    return AlgebraElement(
        algebra, tuple(_gaussian_block(rng, n) for n in algebra.sizes)
    )


def random_selfadjoint(algebra: WStarAlgebra, seed) -> AlgebraElement:
    rng = _rng(seed)
    blocks = []
    for n in algebra.sizes:
        g = _gaussian_block(rng, n)
        blocks.append((g + g.conj().T) / 2.0)
    return AlgebraElement(algebra, tuple(blocks))


def haar_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with the
    R diagonal phase fixed."""
    q, r = np.linalg.qr(_gaussian_block(rng, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_unitary(algebra: WStarAlgebra, seed) -> AlgebraElement:
    """Exactly unitary blocks, Haar-distributed per block."""
    rng = _rng(seed)
    return AlgebraElement(
        algebra, tuple(haar_unitary(n, rng) for n in algebra.sizes)
    )


def random_functional(algebra: WStarAlgebra, seed) -> Functional:
    rng = _rng(seed)
    return Functional(
        algebra, tuple(_gaussian_block(rng, n) for n in algebra.sizes)
    )


def numerical_rank(matrix: np.ndarray) -> int:
    """Rank with singular values below RANK_TOL * s_max treated as zero."""
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > RANK_TOL * s[0]))
