"""Structured verification reports and their JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import IoError

# Reports whose underlying expectation is boolean (an error was not raised,
# an integer identity failed) use this magnitude so that status and the
# "pass iff max_error <= tol" invariant stay consistent.
ERROR_MAGNITUDE = 9.9e99


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verification run.

    status is "pass" exactly when max_error <= tol; "error" marks a run
    that raised instead of completing, with max_error forced above tol.
    """

    name: str
    status: str
    max_error: float
    tol: float
    seed: int
    witness: str | None = None


def make_report(name, max_error, tol, seed, witness=None) -> CheckReport:
    max_error = float(max_error)
    status = "pass" if max_error <= tol else "fail"
    return CheckReport(name, status, max_error, float(tol), int(seed), witness)


def error_report(name, tol, seed, witness) -> CheckReport:
    return CheckReport(name, "error", ERROR_MAGNITUDE, float(tol), int(seed), witness)


def report_to_dict(report: CheckReport) -> dict:
    # Key order is part of the wire format.
    return {
        "name": report.name,
        "status": report.status,
        "max_error": report.max_error,
        "tol": report.tol,
        "seed": report.seed,
        "witness": report.witness,
    }


def render_reports(reports) -> str:
    """Canonical JSON text; identical inputs yield identical bytes."""
    return json.dumps([report_to_dict(r) for r in reports], indent=2) + "\n"


def emit_report(reports, path) -> None:
    """Write the JSON report array to a file."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_reports(reports))
    except OSError as exc:
        raise IoError(f"cannot write report to {path}: {exc}") from exc
