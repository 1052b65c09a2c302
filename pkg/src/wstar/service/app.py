"""FastAPI wrapper around the script engine.

The service never writes report files on behalf of a client; `report json`
statements are skipped server-side and clients persist the returned
reports themselves.
"""

from __future__ import annotations

from fastapi import FastAPI

from .. import __version__
from ..engine import builtin_suite_script, run
from ..errors import ScriptError, WStarError
from ..script import parse, pretty_print
from .schemas import (
    CheckReportModel,
    HealthResponse,
    ParseRequest,
    ParseResponse,
    RunRequest,
    RunResponse,
    SuiteRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(title="wstar verification service", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", service="wstar", version=__version__)

    @app.post("/parse", response_model=ParseResponse)
    def parse_script(req: ParseRequest):
        try:
            script = parse(req.text)
        except ScriptError as exc:
            return ParseResponse(
                ok=False, error=str(exc), line=exc.line, column=exc.column
            )
        except WStarError as exc:
            return ParseResponse(
                ok=False, error=str(exc),
                line=getattr(exc, "line", None),
                column=getattr(exc, "column", None),
            )
        return ParseResponse(
            ok=True, statements=len(script.statements), pretty=pretty_print(script)
        )

    @app.post("/run", response_model=RunResponse)
    def run_script(req: RunRequest):
        try:
            script = parse(req.text)
            reports, exit_code = run(
                script, root_seed=req.seed, allow_report_files=False
            )
        except WStarError as exc:
            return RunResponse(reports=[], exit_code=2, error=str(exc))
        return RunResponse(
            reports=[CheckReportModel.from_report(r) for r in reports],
            exit_code=exit_code,
        )

    @app.post("/suite", response_model=RunResponse)
    def run_suite(req: SuiteRequest):
        reports, exit_code = run(
            builtin_suite_script(), root_seed=req.seed, allow_report_files=False
        )
        return RunResponse(
            reports=[CheckReportModel.from_report(r) for r in reports],
            exit_code=exit_code,
        )

    return app


app = create_app()
