"""Request/response models for the verification service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel

from ..reports import CheckReport


class CheckReportModel(BaseModel):
    name: str
    status: Literal["pass", "fail", "error"]
    max_error: float
    tol: float
    seed: int
    witness: Optional[str] = None

    @classmethod
    def from_report(cls, report: CheckReport) -> "CheckReportModel":
        return cls(
            name=report.name,
            status=report.status,
            max_error=report.max_error,
            tol=report.tol,
            seed=report.seed,
            witness=report.witness,
        )


class ParseRequest(BaseModel):
    text: str


class ParseResponse(BaseModel):
    ok: bool
    statements: int = 0
    pretty: str = ""
    error: Optional[str] = None
    line: Optional[int] = None
    column: Optional[int] = None


class RunRequest(BaseModel):
    text: str
    seed: Optional[int] = None


class RunResponse(BaseModel):
    reports: list[CheckReportModel] = []
    exit_code: int
    error: Optional[str] = None


class SuiteRequest(BaseModel):
    seed: int = 42


class HealthResponse(BaseModel):
    status: str
    service: str
    version: str
