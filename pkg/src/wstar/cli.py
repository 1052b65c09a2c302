"""Thin command-line client for the verification engine.

By default commands execute in-process through the same handlers the HTTP
service exposes; `--server URL` routes them to a running service instead.
Exit codes: 0 all checks pass, 1 some check failed, 2 script error.
"""

from __future__ import annotations

import argparse
import sys

from .engine import builtin_suite_script, run
from .errors import WStarError
from .reports import CheckReport, emit_report, render_reports
from .script import parse, pretty_print


def _print_summary(reports, stream):
    for r in reports:
        line = f"{r.name}: {r.status} (max_error={r.max_error:.3e}, tol={r.tol:.1e}, seed={r.seed})"
        if r.witness:
            line += f" -- {r.witness}"
        print(line, file=stream)


def _reports_from_response(payload):
    return [
        CheckReport(
            name=r["name"],
            status=r["status"],
            max_error=r["max_error"],
            tol=r["tol"],
            seed=r["seed"],
            witness=r.get("witness"),
        )
        for r in payload.get("reports", [])
    ]


def _remote(server, endpoint, body):
    import httpx

    resp = httpx.post(server.rstrip("/") + endpoint, json=body, timeout=600.0)
    resp.raise_for_status()
    return resp.json()


def _cmd_run(args):
    try:
        text = open(args.file, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.server:
        payload = _remote(args.server, "/run", {"text": text, "seed": args.seed})
        if payload["exit_code"] == 2:
            print(f"error: {payload.get('error')}", file=sys.stderr)
            return 2
        reports = _reports_from_response(payload)
        code = payload["exit_code"]
    else:
        try:
            script = parse(text)
            reports, code = run(script, root_seed=args.seed)
        except WStarError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    _print_summary(reports, sys.stdout)
    if args.report:
        emit_report(reports, args.report)
    return code


def _cmd_suite(args):
    if not args.all:
        print("error: suite requires --all", file=sys.stderr)
        return 2
    if args.server:
        payload = _remote(args.server, "/suite", {"seed": args.seed})
        reports = _reports_from_response(payload)
        code = payload["exit_code"]
    else:
        reports, code = run(builtin_suite_script(), root_seed=args.seed)
    _print_summary(reports, sys.stderr)
    sys.stdout.write(render_reports(reports))
    if args.report:
        emit_report(reports, args.report)
    return code


def _cmd_parse(args):
    try:
        text = open(args.file, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.server:
        payload = _remote(args.server, "/parse", {"text": text})
        if not payload["ok"]:
            print(f"error: {payload['error']}", file=sys.stderr)
            return 2
        print(f"ok: {payload['statements']} statements")
        return 0
    try:
        script = parse(text)
    except WStarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"ok: {len(script.statements)} statements")
    if args.pretty:
        sys.stdout.write(pretty_print(script))
    return 0


def _cmd_serve(args):
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="wstar",
        description="verification engine for finite-dimensional W*-algebra "
        "tensor products",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a .wstar script")
    p_run.add_argument("file")
    p_run.add_argument("--seed", type=int, default=None,
                       help="root seed overriding per-check seeds")
    p_run.add_argument("--report", default=None, help="write JSON report here")
    p_run.add_argument("--server", default=None, help="run via a remote service")
    p_run.set_defaults(func=_cmd_run)

    p_suite = sub.add_parser("suite", help="run the built-in acceptance suite")
    p_suite.add_argument("--all", action="store_true",
                         help="run every built-in check")
    p_suite.add_argument("--seed", type=int, default=42)
    p_suite.add_argument("--report", default=None)
    p_suite.add_argument("--server", default=None)
    p_suite.set_defaults(func=_cmd_suite)

    p_parse = sub.add_parser("parse", help="syntax-check a script")
    p_parse.add_argument("file")
    p_parse.add_argument("--pretty", action="store_true",
                         help="print the canonical rendering")
    p_parse.add_argument("--server", default=None)
    p_parse.set_defaults(func=_cmd_parse)

    p_serve = sub.add_parser("serve", help="start the HTTP verification service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
