"""CLI entry point for Picard-Fuchs audits."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pf_audit.engine import AuditEngine
from pf_audit.exceptions import PfAuditError, ValidationError
from pf_audit.models import COMMANDS, DEFAULT_DIGITS, GridSpec, RunConfig
from pf_audit.periods import DEFAULT_TERMS
from pf_audit.store import RunStore

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="Pretty-print JSON output.")
    common.add_argument(
        "--log-level", choices=LOG_LEVELS, default="WARNING", help="Logging level on stderr."
    )
    common.add_argument("--db", help="SQLite run store to record or list runs.")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="pf-audit",
        description="Picard-Fuchs audit CLI - exact operators, certificates and numeric checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name, parents=[common], help=f"Run the {name} audit.")
        cmd.add_argument("family", help="Path to a family file.")
        cmd.add_argument(
            "--max-order", type=int, help="Order bound (default: cohomology dimension)."
        )
        cmd.add_argument(
            "--terms", type=int, default=DEFAULT_TERMS, help="Series truncation N."
        )
        cmd.add_argument("--chart", type=int, help="Affine chart index (default: n).")
        cmd.add_argument(
            "--digits", type=int, default=DEFAULT_DIGITS, help="Numeric working precision."
        )
        cmd.add_argument("--grid", help="Sampling grid 'start:stop:count' with exact endpoints.")
        cmd.add_argument(
            "--chain", action="append", default=[], help="Chain to check (repeatable)."
        )
        cmd.add_argument("--output", help="Also write the JSON output to this path.")
        cmd.add_argument(
            "--compare-paper-operator",
            dest="compare_operator",
            help="Reference operator file to compare against.",
        )
    runs = sub.add_parser("runs", parents=[common], help="List or fetch stored runs.")
    runs.add_argument("--limit", type=int, default=50, help="Number of runs to list.")
    runs.add_argument("--run-id", help="Fetch one stored run in full.")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        family_path=args.family,
        max_order=args.max_order,
        terms=args.terms,
        chart=args.chart,
        digits=args.digits,
        grid=None if args.grid is None else GridSpec.parse(args.grid),
        output_path=args.output,
        compare_operator_path=args.compare_operator,
        chains=tuple(args.chain),
    )


def _dump(payload: Any, pretty: bool) -> str:
    return json.dumps(payload, indent=2 if pretty else None)


def _write_output(path: Path, text: str) -> None:
    try:
        path.write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"Cannot write output file {path}: {exc}") from exc


def _list_runs(args: argparse.Namespace) -> Any:
    if not args.db:
        raise ValidationError("The runs command needs --db.")
    store = RunStore(Path(args.db))
    try:
        if args.run_id:
            run = store.get_run(args.run_id)
            if run is None:
                raise ValidationError(f"No stored run with id '{args.run_id}'.")
            return run
        return {"runs": store.list_runs(args.limit)}
    finally:
        store.close()


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=args.log_level, format=LOG_FORMAT)

    try:
        if args.command == "runs":
            print(_dump(_list_runs(args), args.pretty))
            return 0
        config = _config_from_args(args)
        result = AuditEngine().run(config).to_dict()
        text = _dump(result, args.pretty)
        if config.output_path:
            _write_output(Path(config.output_path), text)
        if args.db:
            store = RunStore(Path(args.db))
            try:
                store.save(result)
            finally:
                store.close()
        print(text)
        return 0
    except PfAuditError as exc:
        print(json.dumps({"error": str(exc), "exit_code": exc.exit_code}))
        return exc.exit_code
    except Exception as exc:
        logger.exception("internal_error command=%s", args.command)
        print(json.dumps({"error": f"Internal error: {exc}", "exit_code": 1}))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
