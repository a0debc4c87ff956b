"""SQLite run store.

Keeps the full JSON of each run document so past runs can be listed and
replayed from their embedded configuration.
"""

from __future__ import annotations

import json
import sqlite3
from pathlib import Path
from typing import Any

DEFAULT_DB_PATH = Path("pf_audit_runs.db")


class RunStore:
    """Thin wrapper around a SQLite database of run documents."""

    def __init__(self, db_path: Path = DEFAULT_DB_PATH) -> None:
        self._db_path = db_path
        self._conn = sqlite3.connect(str(db_path))
        self._conn.row_factory = sqlite3.Row
        self._ensure_schema()

    # ── public API ──

    def save(self, run: dict[str, Any]) -> str:
        """Persist a run document and return its run_id."""
        document = run["document"]
        metadata = run["run_metadata"]
        run_id: str = metadata["run_id"]
        family = document.get("family") or {}
        self._conn.execute(
            """
            INSERT INTO runs (run_id, command, family_name, generated_at_utc,
                              engine_version, payload)
            VALUES (?, ?, ?, ?, ?, ?)
            """,
            (
                run_id,
                metadata["command"],
                family.get("name", ""),
                metadata["generated_at_utc"],
                metadata["engine_version"],
                json.dumps(run),
            ),
        )
        self._conn.commit()
        return run_id

    def list_runs(self, limit: int = 50) -> list[dict[str, Any]]:
        """Most recent runs first, summary columns only."""
        cursor = self._conn.execute(
            """
            SELECT run_id, command, family_name, generated_at_utc, engine_version
            FROM runs ORDER BY rowid DESC LIMIT ?
            """,
            (limit,),
        )
        return [dict(row) for row in cursor.fetchall()]

    def get_run(self, run_id: str) -> dict[str, Any] | None:
        cursor = self._conn.execute("SELECT payload FROM runs WHERE run_id = ?", (run_id,))
        row = cursor.fetchone()
        if row is None:
            return None
        result: dict[str, Any] = json.loads(row["payload"])
        return result

    def close(self) -> None:
        self._conn.close()

    # ── private ──

    def _ensure_schema(self) -> None:
        self._conn.execute(
            """
            CREATE TABLE IF NOT EXISTS runs (
                run_id           TEXT PRIMARY KEY,
                command          TEXT NOT NULL,
                family_name      TEXT NOT NULL,
                generated_at_utc TEXT NOT NULL,
                engine_version   TEXT NOT NULL,
                payload          TEXT NOT NULL
            )
            """
        )
        self._conn.commit()
