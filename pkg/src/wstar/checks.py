"""Named verification suites behind the `check` directive.

Each suite draws its randomness from an explicit seed, evaluates one batch
of property checks, and folds the outcome into a single CheckReport whose
status is pass exactly when max_error <= tol.  Where a suite combines
residual classes with different natural bounds (for example a 1e-12
uniqueness clause inside a 1e-10 suite), the tighter clause is rescaled by
tol over its own bound so that the single threshold still governs.

Boolean expectations (an exception that should have been raised, an exact
integer identity) map to a representative magnitude well above any
tolerance when violated.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .algebra import (
    _rng,
    make_algebra,
    op_norm,
    random_element,
    right_mul_matrix,
    left_mul_matrix,
)
from .category import (
    orthogonal_sum_mediator,
    product,
    product_mediator,
)
from .duality import (
    IdealSummand,
    annihilator,
    double_dual_check,
    predual_tensor_check,
    span_of_elements,
    subspace_dual_isometry,
)
from .errors import RangesNotOrthogonal, ScriptTypeError
from .monoidal import (
    braiding_involution_residual,
    braiding_naturality_residual,
    equivalence_check,
    hexagon_residuals,
    pentagon_residual,
    triangle_residual,
    unitor_isometry_residual,
)
from .morphisms import (
    canonical_form,
    compose,
    from_multiplicity,
    random_hom,
    random_multiplicity,
    star_hom,
    verify_hom,
)
from .reports import CheckReport, make_report
from .tensor import (
    _random_fattening,
    commutative_tensor_check,
    max_norm_lower_bound,
    mediator,
    min_norm,
    random_commuting_pair,
    tensor_algebra,
)

BOOL_DEFECT = 1.0  # magnitude recorded when a yes/no expectation fails
UNIQUENESS_TOL = 1e-12

_TINY = np.finfo(float).tiny


def _rel(lhs, rhs):
    return abs(lhs - rhs) / max(abs(rhs), _TINY)


class _Tracker:
    def __init__(self):
        self.worst = 0.0
        self.note = None

    def add(self, value, note):
        value = float(value)
        if value > self.worst:
            self.worst, self.note = value, note


def check_cross_norm(args, trials, seed, tol):
    A, B = args
    ts = tensor_algebra(A, B)
    rng = _rng(seed)
    t = _Tracker()
    for k in range(trials):
        x, y = random_element(A, rng), random_element(B, rng)
        lhs = op_norm(ts.simple_tensor(x, y))
        rhs = op_norm(x) * op_norm(y)
        t.add(_rel(lhs, rhs), f"simple tensor {k}")
    return make_report("cross_norm", t.worst, tol, seed,
                       t.note if t.worst > tol else None)


def check_cstar_identity(args, trials, seed, tol):
    A, B = args
    ts = tensor_algebra(A, B)
    rng = _rng(seed)
    t = _Tracker()
    for k in range(trials):
        z = random_element(ts.total, rng)
        nz = min_norm(z)
        t.add(_rel(min_norm(z.adjoint() * z), nz * nz), f"element {k}")
    return make_report("cstar_identity", t.worst, tol, seed,
                       t.note if t.worst > tol else None)


def check_max_norm_bound(args, trials, seed, tol):
    A, B = args
    ts = tensor_algebra(A, B)
    rng = _rng(seed)
    pairs = [random_commuting_pair(A, B, rng) for _ in range(trials)]
    t = _Tracker()
    for k in range(5):
        z = random_element(ts.total, rng)
        mn = min_norm(z)
        without = max_norm_lower_bound(z, pairs)
        t.add(max(0.0, without - mn) / max(mn, _TINY),
              f"bound exceeded min norm, element {k}")
        with_faithful = max_norm_lower_bound(z, pairs + [(ts.w1, ts.w2)])
        t.add(_rel(with_faithful, mn), f"faithful pair equality, element {k}")
    return make_report("max_norm_bound", t.worst, tol, seed,
                       t.note if t.worst > tol else None)


def check_mediator_universal(args, trials, seed, tol):
    A, B = args
    ts = tensor_algebra(A, B)
    rng = _rng(seed)
    t = _Tracker()
    nonunital = 0
    for k in range(trials):
        t1, t2 = random_commuting_pair(A, B, rng)
        med = mediator(t1, t2, tol)
        t.add(verify_hom(med, tol).max_error, f"mediator verification, pair {k}")
        # weak triangles hold for every pair
        lhs1 = med.matrix @ ts.w1.matrix
        rhs1 = right_mul_matrix(t2(t2.source.unit)) @ t1.matrix
        t.add(_max_abs(lhs1 - rhs1), f"weak left triangle, pair {k}")
        lhs2 = med.matrix @ ts.w2.matrix
        rhs2 = left_mul_matrix(t1(t1.source.unit)) @ t2.matrix
        t.add(_max_abs(lhs2 - rhs2), f"weak right triangle, pair {k}")
        # strict triangles only under unitality of the partner
        if t2.unital:
            t.add(_max_abs(lhs1 - t1.matrix), f"strict left triangle, pair {k}")
        else:
            nonunital += 1
        if t1.unital:
            t.add(_max_abs(lhs2 - t2.matrix), f"strict right triangle, pair {k}")
        again = mediator(t1, t2, tol, enumeration="reversed")
        t.add(
            _max_abs(med.matrix - again.matrix) * (tol / UNIQUENESS_TOL),
            f"uniqueness, pair {k}",
        )
    witness = t.note if t.worst > tol else (
        f"strict triangle deferred to the weak identity for {nonunital}/{trials} "
        f"non-unital partners" if nonunital else None
    )
    return make_report("mediator_universal", t.worst, tol, seed, witness)


def _max_abs(matrix):
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def check_product_universal(args, trials, seed, tol):
    B, *factors = args
    prod = product(factors)
    rng = _rng(seed)
    t = _Tracker()
    # projection/injection algebra is exact on these integer matrices
    total = np.zeros((prod.product.dim, prod.product.dim), dtype=complex)
    for i, s in enumerate(prod.injections):
        for j, p in enumerate(prod.projections):
            pij = p.matrix @ s.matrix
            want = np.eye(s.source.dim) if i == j else np.zeros_like(pij)
            t.add(_max_abs(pij - want), f"p_{j} s_{i}")
        total += s.matrix @ prod.projections[i].matrix
    if prod.product.dim:
        t.add(_max_abs(total - np.eye(prod.product.dim)), "sum s_i p_i")
    for k in range(trials):
        maps = [random_hom(B, a, rng) for a in factors]
        u = product_mediator(prod, maps)
        t.add(verify_hom(u, tol).max_error, f"mediator verification, trial {k}")
        for i, (p, ui) in enumerate(zip(prod.projections, maps)):
            t.add(_max_abs(p.matrix @ u.matrix - ui.matrix),
                  f"triangle p_{i} u = u_{i}, trial {k}")
        # uniqueness: sum s_i u_i is forced by the spanning identity
        forced = sum(s.matrix @ ui.matrix for s, ui in zip(prod.injections, maps))
        t.add(_max_abs(u.matrix - forced), f"uniqueness, trial {k}")
    return make_report("product_universal", t.worst, tol, seed,
                       t.note if t.worst > tol else None)


def check_orthogonal_sum(args, trials, seed, tol):
    factors = list(args)
    rng = _rng(seed)
    t = _Tracker()
    prod_src = product(factors)
    for k in range(trials):
        targets, embeds = [], []
        for a in factors:
            C, f = _random_fattening(a, rng)
            targets.append(C)
            embeds.append(f)
        prod_tgt = product(targets)
        maps = [
            compose(prod_tgt.injections[i], embeds[i]) for i in range(len(factors))
        ]
        u = orthogonal_sum_mediator(prod_src, maps, tol)
        if not u.verified:
            t.add(BOOL_DEFECT, f"mediator failed verification, trial {k}")
        for i, (s, ui) in enumerate(zip(prod_src.injections, maps)):
            t.add(_max_abs(u.matrix @ s.matrix - ui.matrix),
                  f"triangle u s_{i} = u_{i}, trial {k}")
    # an injected orthogonality violation of 1e-6 must be caught
    if len(factors) >= 2 and factors[1].dim and product(factors[:1]).product.dim:
        targets = []
        embeds = []
        for a in factors:
            C, f = _random_fattening(a, rng)
            targets.append(C)
            embeds.append(f)
        prod_tgt = product(targets)
        maps = [
            compose(prod_tgt.injections[i], embeds[i]) for i in range(len(factors))
        ]
        bad = np.array(maps[1].matrix)
        bad[0, 0] += 1e-6  # row 0 lies in the first map's corner
        maps_bad = list(maps)
        maps_bad[1] = star_hom(maps[1].source, maps[1].target, bad, verified=True)
        try:
            orthogonal_sum_mediator(prod_src, maps_bad, tol)
            t.add(1e-6, "violation of 1e-6 not detected")
        except RangesNotOrthogonal:
            # forcing the sum through anyway must fail verification
            forced = star_hom(
                prod_src.product,
                maps[0].target,
                np.hstack([m.matrix for m in maps_bad]),
            )
            if verify_hom(forced, tol).status == "pass":
                t.add(1e-6, "forced non-orthogonal sum passed verification")
    return make_report("orthogonal_sum", t.worst, tol, seed,
                       t.note if t.worst > tol else None)


def check_annihilator_duality(args, trials, seed, tol):
    (A,) = args
    rng = _rng(seed)
    t = _Tracker()
    k = len(A.sizes)
    for mask in range(2**k):
        blocks = tuple(i for i in range(k) if mask & (1 << i))
        rep = subspace_dual_isometry(
            IdealSummand(A, blocks), trials=trials, seed=rng, tol=tol
        )
        t.add(rep.max_error, f"ideal summand {blocks}: {rep.witness}")
    for j in range(trials):
        count = int(rng.integers(A.dim + 1)) if A.dim else 0
        if count == 0:
            continue
        Y = span_of_elements([random_element(A, rng) for _ in range(count)])
        perp = annihilator(A, Y)
        if Y.dim + perp.dim != A.dim:
            t.add(BOOL_DEFECT, f"dimension identity failed on subspace {j}")
    rep = double_dual_check(A, trials=trials, seed=rng, tol=tol)
    t.add(rep.max_error, f"double dual: {rep.witness}")
    return make_report("annihilator_duality", t.worst, tol, seed,
                       t.note if t.worst > tol else None)


def check_predual_tensor(args, trials, seed, tol):
    A, B = args
    rep = predual_tensor_check(A, B, trials=trials, seed=seed, tol=tol)
    return replace(rep, seed=_seed_of(seed))


_COHERENCE_POOL = ([1], [2], [1, 1], [2, 1], [3])
_COHERENCE_DIM_CAP = 256


def _coherence_tuple_residual(A, B, C, D, rng):
    worst = max(
        pentagon_residual(A, B, C, D),
        triangle_residual(A, B),
        triangle_residual(C, D),
        hexagon_residuals(A, B, C),
        braiding_involution_residual(A, B),
        braiding_involution_residual(C, D),
        unitor_isometry_residual(A, trials=5, seed=rng),
    )
    CA, f = _random_fattening(A, rng)
    CB, g = _random_fattening(B, rng)
    worst = max(worst, braiding_naturality_residual(f, g))
    return worst


def check_coherence(args, trials, seed, tol):
    A, B, C, D = args
    rng = _rng(seed)
    t = _Tracker()
    t.add(_coherence_tuple_residual(A, B, C, D, rng), "fixed object tuple")
    for k in range(trials):
        dims, objs = 1, []
        while len(objs) < 4:
            sizes = _COHERENCE_POOL[int(rng.integers(len(_COHERENCE_POOL)))]
            alg = make_algebra(sizes)
            if dims * alg.dim > _COHERENCE_DIM_CAP:
                alg = make_algebra([1])
            dims *= alg.dim
            objs.append(alg)
        t.add(
            _coherence_tuple_residual(*objs, rng),
            f"random tuple {k}: {[list(o.sizes) for o in objs]}",
        )
    return make_report("coherence", t.worst, tol, seed,
                       t.note if t.worst > tol else None)


def check_equivalence(args, trials, seed, tol):
    A, B = args
    rep = equivalence_check(A, B, tol)
    return replace(rep, seed=_seed_of(seed))


def check_multiplicity(args, trials, seed, tol):
    A, B, C = args
    rng = _rng(seed)
    t = _Tracker()
    for k in range(trials):
        data = random_multiplicity(A, B, rng)
        f = from_multiplicity(A, B, data)
        if canonical_form(f).counts != data.counts:
            t.add(BOOL_DEFECT, f"round trip failed, trial {k}")
        g = random_hom(B, C, rng)
        cf = canonical_form(f).count_matrix()
        cg = canonical_form(g).count_matrix()
        if not np.array_equal(canonical_form(compose(g, f)).count_matrix(), cg @ cf):
            t.add(BOOL_DEFECT, f"functoriality failed, trial {k}")
    return make_report("multiplicity", t.worst, tol, seed,
                       t.note if t.worst > tol else None)


def check_commutative(args, trials, seed, tol):
    p, q = args
    rep = commutative_tensor_check(p, q, trials=trials, seed=seed, tol=tol)
    return replace(rep, seed=_seed_of(seed))


def _seed_of(seed):
    return seed if isinstance(seed, (int, np.integer)) else 0


# suite name -> (handler, argument kinds, min args, max args, default tol)
# kinds: "algebra" or "int"; the last kind repeats up to max.
REGISTRY = {
    "cross_norm": (check_cross_norm, "algebra", 2, 2, 1e-9),
    "cstar_identity": (check_cstar_identity, "algebra", 2, 2, 1e-9),
    "max_norm_bound": (check_max_norm_bound, "algebra", 2, 2, 1e-9),
    "mediator_universal": (check_mediator_universal, "algebra", 2, 2, 1e-10),
    "product_universal": (check_product_universal, "algebra", 2, 6, 1e-10),
    "orthogonal_sum": (check_orthogonal_sum, "algebra", 1, 6, 1e-10),
    "annihilator_duality": (check_annihilator_duality, "algebra", 1, 1, 1e-9),
    "predual_tensor": (check_predual_tensor, "algebra", 2, 2, 1e-9),
    "coherence": (check_coherence, "algebra", 4, 4, 1e-12),
    "equivalence": (check_equivalence, "algebra", 2, 2, 1e-12),
    "multiplicity": (check_multiplicity, "algebra", 3, 3, 1e-12),
    "commutative": (check_commutative, "int", 2, 2, 1e-12),
}

DEFAULT_TRIALS = 50


def run_check(suite, args, trials, seed, tol) -> CheckReport:
    handler, kind, lo, hi, default_tol = REGISTRY[suite]
    if trials is None:
        trials = DEFAULT_TRIALS
    if tol is None:
        tol = default_tol
    if not lo <= len(args) <= hi:
        raise ScriptTypeError(
            f"suite {suite} takes between {lo} and {hi} arguments, got {len(args)}"
        )
    return handler(tuple(args), trials, seed, tol)
