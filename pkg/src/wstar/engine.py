"""Script execution: declarations build an environment, check directives
dispatch to the suite registry, reports accumulate in order.

Seeding: a check directive carries its own seed.  When a root seed is
supplied (CLI --seed), per-check seeds are derived deterministically from
the root seed and the check's position in the script, so one knob
reseeds the whole run reproducibly.

Exit codes: 0 when every check passes, 1 when any check fails or errors,
2 for script-level failures (parse errors, bad declarations), which are
raised to the caller as script errors rather than returned.
"""

from __future__ import annotations

import numpy as np

from .algebra import element, make_algebra, op_norm
from .category import product
from .checks import run_check
from .errors import ScriptError, ScriptTypeError, WStarError
from .morphisms import MultiplicityData, from_multiplicity
from .reports import CheckReport, emit_report, error_report
from .script import (
    AlgebraDecl,
    CheckDecl,
    ElemDecl,
    HomDecl,
    MediatorDecl,
    ProductDecl,
    ReportDecl,
    Script,
    TensorDecl,
    parse,
)
from .tensor import mediator, tensor_algebra

DEFAULT_CHECK_SEED = 0


def _derive_seed(root_seed: int, index: int) -> int:
    return int(np.random.SeedSequence((root_seed, index)).generate_state(1)[0])


def _as_algebra(obj):
    if hasattr(obj, "total"):
        return obj.total
    if hasattr(obj, "product"):
        return obj.product
    return obj


def run(script: Script, root_seed=None, allow_report_files=True):
    """Execute a parsed script; returns (reports, exit_code).

    Script-level failures raise (callers map them to exit code 2); failures
    inside a check become status=error reports and execution continues.
    """
    env = {}
    reports: list[CheckReport] = []
    check_index = 0
    for stmt in script.statements:
        try:
            if isinstance(stmt, AlgebraDecl):
                env[stmt.name] = make_algebra(stmt.sizes)
            elif isinstance(stmt, ElemDecl):
                env[stmt.name] = element(env[stmt.algebra], stmt.blocks)
            elif isinstance(stmt, HomDecl):
                A, B = env[stmt.source], env[stmt.target]
                unitaries = None
                if stmt.unitary is not None:
                    u = env[stmt.unitary]
                    defect = op_norm(u.adjoint() * u - B.unit)
                    if defect > 1e-9:
                        raise ScriptTypeError(
                            f"unitary element {stmt.unitary!r} is not unitary "
                            f"(defect {defect:.2e})",
                            stmt.line,
                        )
                    unitaries = u.blocks
                env[stmt.name] = from_multiplicity(
                    A, B, MultiplicityData(stmt.counts, unitaries)
                )
            elif isinstance(stmt, TensorDecl):
                env[stmt.name] = tensor_algebra(
                    _as_algebra(env[stmt.left]), _as_algebra(env[stmt.right])
                )
            elif isinstance(stmt, ProductDecl):
                env[stmt.name] = product(
                    [_as_algebra(env[f]) for f in stmt.factors]
                )
            elif isinstance(stmt, MediatorDecl):
                env[stmt.name] = mediator(env[stmt.first], env[stmt.second])
            elif isinstance(stmt, CheckDecl):
                if root_seed is not None:
                    seed = _derive_seed(root_seed, check_index)
                elif stmt.seed is not None:
                    seed = stmt.seed
                else:
                    seed = DEFAULT_CHECK_SEED
                args = tuple(
                    a if isinstance(a, int) else _as_algebra(env[a])
                    for a in stmt.args
                )
                try:
                    reports.append(
                        run_check(stmt.suite, args, stmt.trials, seed, stmt.tol)
                    )
                except WStarError as exc:
                    reports.append(
                        error_report(
                            stmt.suite,
                            stmt.tol if stmt.tol is not None else 0.0,
                            seed,
                            f"{type(exc).__name__}: {exc}",
                        )
                    )
                check_index += 1
            elif isinstance(stmt, ReportDecl):
                if allow_report_files:
                    emit_report(reports, stmt.path)
        except ScriptError:
            raise
        except WStarError as exc:
            if isinstance(stmt, CheckDecl):
                raise
            raise ScriptError(
                f"{type(exc).__name__}: {exc}", getattr(stmt, "line", None)
            ) from exc
    exit_code = 0 if all(r.status == "pass" for r in reports) else 1
    return reports, exit_code


def run_text(text: str, root_seed=None, allow_report_files=True):
    return run(parse(text), root_seed, allow_report_files)


# ---------------------------------------------------------------------------
# Built-in acceptance suite
# ---------------------------------------------------------------------------

def _equivalence_lines():
    objects = ["O", "C1", "M2", "D2", "A21", "M3"]
    lines = []
    seed = 601
    for i, a in enumerate(objects):
        for b in objects[i:]:
            lines.append(f"check equivalence {a} {b} seed={seed} tol=1e-12")
            seed += 1
    return "\n".join(lines)


def _pairwise_lines(suite, objects, trials, seed0, tol):
    lines = []
    seed = seed0
    for i, a in enumerate(objects):
        for b in objects[i:]:
            lines.append(
                f"check {suite} {a} {b} trials={trials} seed={seed} tol={tol}"
            )
            seed += 1
    return "\n".join(lines)


BUILTIN_SUITE = f"""
# wstar built-in acceptance suite
algebra O = []
algebra C1 = [1]
algebra M2 = [2]
algebra M3 = [3]
algebra D2 = [1,1]
algebra A21 = [2,1]
algebra A221 = [2,2,1]
algebra B32 = [3,2]
algebra B43 = [4,3]

# 1. cross-norm law on simple tensors (500 draws over object pairs)
{_pairwise_lines("cross_norm", ["M2", "M3", "A21", "D2"], 50, 101, "1e-9")}

# 2. C*-norm law on tensor algebra elements (500 draws)
{_pairwise_lines("cstar_identity", ["M2", "M3", "A21", "D2"], 50, 201, "1e-9")}

# 3. nuclearity: max-norm lower bounds collapse onto the min norm
check max_norm_bound M2 M3 trials=20 seed=301 tol=1e-9
check max_norm_bound A21 M2 trials=20 seed=302 tol=1e-9

# 4. universal property of the tensor product
check mediator_universal M2 M3 trials=25 seed=401 tol=1e-10
check mediator_universal A21 D2 trials=25 seed=402 tol=1e-10

# 5. orthogonal-sum universality with violation detection
check orthogonal_sum M2 M3 trials=10 seed=501 tol=1e-10
check orthogonal_sum A21 D2 M2 trials=10 seed=502 tol=1e-10

# 6. equivalence of the two tensor realizations, all object pairs
{_equivalence_lines()}

# 7. annihilator duality on ideal summands
check annihilator_duality A21 trials=50 seed=701 tol=1e-9
check annihilator_duality A221 trials=50 seed=702 tol=1e-9

# 8. predual tensor identity
check predual_tensor M2 M3 trials=100 seed=801 tol=1e-9
check predual_tensor A21 M2 trials=100 seed=802 tol=1e-9

# 9. commutative algebras: grid max equals min norm
check commutative 2 2 trials=50 seed=901 tol=1e-12
check commutative 4 3 trials=50 seed=902 tol=1e-12
check commutative 5 5 trials=50 seed=903 tol=1e-12

# 10. monoidal coherence on the fixed tuple plus random tuples
check coherence M2 C1 M2 C1 trials=10 seed=1001 tol=1e-12

# 11. multiplicity calculus: round trip and functoriality
check multiplicity A21 B32 B43 trials=100 seed=1101 tol=1e-12

# 12. product universality
check product_universal M2 A21 M3 trials=20 seed=1201 tol=1e-10
"""


def builtin_suite_script() -> Script:
    return parse(BUILTIN_SUITE)
