"""Tests for the CLI entry point (cli.py)."""

from __future__ import annotations

import contextlib
import io
import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from pf_audit.cli import main
from pf_audit.engine import AuditEngine
from support import FAMILIES_DIR

PROJECT_ROOT = Path(__file__).resolve().parent.parent
SRC_DIR = PROJECT_ROOT / "src"

CONE_FAMILY = """\
name: cone
variables: x0, x1, x2
parameter: t
polynomial: x0^3 + x1^3 + t*x0^2*x1
"""


def _run_cli(*args: str) -> subprocess.CompletedProcess[str]:
    """Run the CLI as a subprocess so we capture exit codes and stdout."""
    env = os.environ.copy()
    env["PYTHONPATH"] = str(SRC_DIR)
    return subprocess.run(
        [sys.executable, "-m", "pf_audit.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=str(PROJECT_ROOT),
    )


class CLITests(unittest.TestCase):
    """Test the CLI end-to-end via subprocess."""

    # ── Happy path ──

    def test_compute_legendre_succeeds(self) -> None:
        result = _run_cli("compute", "families/legendre.fam")
        self.assertEqual(result.returncode, 0, result.stdout)
        data = json.loads(result.stdout)
        self.assertIn("document", data)
        self.assertIn("run_metadata", data)
        self.assertEqual(data["document"]["operator"]["theta_form"]["order"], 2)

    def test_series_hesse_pencil_succeeds(self) -> None:
        result = _run_cli("series", "families/dwork_cubic.fam", "--terms", "10")
        self.assertEqual(result.returncode, 0, result.stdout)
        self.assertEqual(json.loads(result.stdout)["document"]["series_annihilation"]["shift"], -1)

    def test_numeric_small_grid_succeeds(self) -> None:
        result = _run_cli(
            "numeric", "families/legendre.fam", "--grid", "1/2:1/2:1", "--chain", "empty"
        )
        self.assertEqual(result.returncode, 0, result.stdout)
        self.assertTrue(json.loads(result.stdout)["document"]["all_passed"])

    def test_pretty_flag_produces_indented_json(self) -> None:
        result = _run_cli("compute", "families/fermat_cubic.fam", "--pretty")
        self.assertEqual(result.returncode, 0)
        self.assertTrue(result.stdout.startswith("{\n"))

    def test_output_file_matches_stdout(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "run.json"
            result = _run_cli("verify", "families/legendre.fam", "--output", str(out))
            self.assertEqual(result.returncode, 0)
            self.assertEqual(out.read_text(encoding="utf-8").strip(), result.stdout.strip())

    def test_db_records_and_lists_runs(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            db = str(Path(tmp) / "runs.db")
            first = _run_cli("compute", "families/legendre.fam", "--db", db)
            self.assertEqual(first.returncode, 0)
            run_id = json.loads(first.stdout)["run_metadata"]["run_id"]

            listing = _run_cli("runs", "--db", db)
            self.assertEqual(listing.returncode, 0)
            runs = json.loads(listing.stdout)["runs"]
            self.assertEqual([r["run_id"] for r in runs], [run_id])
            self.assertEqual(runs[0]["family_name"], "legendre")

            fetched = _run_cli("runs", "--db", db, "--run-id", run_id)
            self.assertEqual(json.loads(fetched.stdout)["run_metadata"]["run_id"], run_id)

    # ── Error paths ──

    def test_missing_family_returns_exit_2(self) -> None:
        result = _run_cli("compute", "families/nonexistent.fam")
        self.assertEqual(result.returncode, 2)
        data = json.loads(result.stdout)
        self.assertEqual(data["exit_code"], 2)
        self.assertIn("error", data)

    def test_bad_grid_returns_exit_2(self) -> None:
        result = _run_cli("numeric", "families/legendre.fam", "--grid", "0.5")
        self.assertEqual(result.returncode, 2)

    def test_singular_family_returns_exit_3(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "cone.fam"
            path.write_text(CONE_FAMILY, encoding="utf-8")
            result = _run_cli("compute", str(path))
        self.assertEqual(result.returncode, 3)

    def test_order_bound_returns_exit_4(self) -> None:
        result = _run_cli("compute", "families/legendre.fam", "--max-order", "1")
        self.assertEqual(result.returncode, 4)

    def test_runs_without_db_returns_exit_2(self) -> None:
        result = _run_cli("runs")
        self.assertEqual(result.returncode, 2)

    def test_unknown_run_id_returns_exit_2(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            result = _run_cli("runs", "--db", str(Path(tmp) / "runs.db"), "--run-id", "nope")
        self.assertEqual(result.returncode, 2)

    def test_no_args_prints_usage(self) -> None:
        result = _run_cli()
        self.assertNotEqual(result.returncode, 0)
        self.assertIn("compute", result.stderr)


class InternalErrorTests(unittest.TestCase):
    def test_unexpected_failure_reports_exit_1_as_json(self) -> None:
        failure = RuntimeError("exploded mid-run")
        out = io.StringIO()
        with (
            mock.patch.object(AuditEngine, "run", side_effect=failure),
            contextlib.redirect_stdout(out),
            self.assertLogs("pf_audit.cli", level="ERROR"),
        ):
            code = main(["compute", str(FAMILIES_DIR / "legendre.fam")])
        self.assertEqual(code, 1)
        data = json.loads(out.getvalue())
        self.assertEqual(data["exit_code"], 1)
        self.assertIn("exploded mid-run", data["error"])


if __name__ == "__main__":
    unittest.main()
