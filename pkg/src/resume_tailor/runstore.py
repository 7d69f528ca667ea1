"""Persistence for runs and source documents.

A data directory holds everything the CLI and service need between
processes:

    {root}/
      runs.sqlite3            index of runs (one row per run)
      runs/{run_id}/result.json
      runs/{run_id}/trace.jsonl
      runs/{run_id}/render.{txt,html,markdown}
      documents/{doc_id}.json  raw source documents as submitted
      vault/                   embedding store (managed by Vault)

sqlite carries only the queryable summary columns; the full result object
lives in result.json so the schema never chases the result shape.
"""

from __future__ import annotations

import json
import logging
import sqlite3
import threading
from datetime import datetime, timezone
from pathlib import Path

from resume_tailor.errors import StoreCorrupt, UnknownRun
from resume_tailor.pipeline import RunResult

logger = logging.getLogger(__name__)

_SCHEMA = """
CREATE TABLE IF NOT EXISTS runs (
    run_id TEXT PRIMARY KEY,
    created_at TEXT NOT NULL,
    jd_id TEXT NOT NULL,
    inputs_digest TEXT NOT NULL,
    config_json TEXT NOT NULL,
    retrieval_enabled INTEGER NOT NULL,
    overall REAL,
    best REAL,
    verdict TEXT,
    pass_count INTEGER NOT NULL,
    approved INTEGER NOT NULL DEFAULT 0,
    approved_at TEXT
);
"""

RENDER_EXTENSIONS = {"txt": "txt", "html": "html", "markdown": "md"}


class RunStore:
    """sqlite-indexed run archive rooted at a data directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "runs").mkdir(exist_ok=True)
        (self.root / "documents").mkdir(exist_ok=True)
        self._lock = threading.Lock()
        self._conn = sqlite3.connect(str(self.root / "runs.sqlite3"), check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        with self._lock:
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    # -- runs ------------------------------------------------------------

    def save(self, result: RunResult) -> None:
        data = result.to_dict()
        run_dir = self.root / "runs" / result.run_id
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "result.json").write_text(json.dumps(data, indent=2) + "\n")
        with (run_dir / "trace.jsonl").open("w") as fh:
            for event in data["trace"]:
                fh.write(json.dumps(event) + "\n")
        for fmt, rendered in data["renders"].items():
            ext = RENDER_EXTENSIONS.get(fmt, fmt)
            (run_dir / f"render.{ext}").write_text(rendered)
        report = data.get("report") or {}
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO runs (run_id, created_at, jd_id, inputs_digest,"
                " config_json, retrieval_enabled, overall, best, verdict, pass_count,"
                " approved, approved_at)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, 0, NULL)",
                (
                    result.run_id,
                    result.created_at,
                    result.jd_id,
                    result.inputs_digest,
                    json.dumps(data["config"]),
                    1 if result.config.retrieval_enabled else 0,
                    report.get("overall"),
                    report.get("best"),
                    report.get("verdict"),
                    data["pass_count"],
                ),
            )
            self._conn.commit()

    def _row(self, run_id: str) -> sqlite3.Row:
        with self._lock:
            row = self._conn.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,)).fetchone()
        if row is None:
            raise UnknownRun(run_id)
        return row

    def exists(self, run_id: str) -> bool:
        with self._lock:
            row = self._conn.execute(
                "SELECT 1 FROM runs WHERE run_id = ?", (run_id,)
            ).fetchone()
        return row is not None

    def get(self, run_id: str) -> dict:
        """Full result payload for a run (raises UnknownRun)."""
        self._row(run_id)
        path = self.root / "runs" / run_id / "result.json"
        if not path.exists():
            raise StoreCorrupt(f"run {run_id} indexed but result.json missing at {path}")
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise StoreCorrupt(f"run {run_id} result.json unreadable: {exc}") from exc

    def summary(self, run_id: str) -> dict:
        return self._summary_from_row(self._row(run_id))

    @staticmethod
    def _summary_from_row(row: sqlite3.Row) -> dict:
        return {
            "run_id": row["run_id"],
            "created_at": row["created_at"],
            "jd_id": row["jd_id"],
            "inputs_digest": row["inputs_digest"],
            "retrieval_enabled": bool(row["retrieval_enabled"]),
            "overall": row["overall"],
            "best": row["best"],
            "verdict": row["verdict"],
            "pass_count": row["pass_count"],
            "approved": bool(row["approved"]),
            "approved_at": row["approved_at"],
        }

    def list(self, limit: int = 100) -> list[dict]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT * FROM runs ORDER BY created_at DESC, run_id DESC LIMIT ?", (limit,)
            ).fetchall()
        return [self._summary_from_row(row) for row in rows]

    def trace(self, run_id: str) -> list[dict]:
        self._row(run_id)
        path = self.root / "runs" / run_id / "trace.jsonl"
        if not path.exists():
            raise StoreCorrupt(f"run {run_id} trace.jsonl missing")
        events = []
        for lineno, line in enumerate(path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                events.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise StoreCorrupt(f"run {run_id} trace line {lineno} unreadable: {exc}") from exc
        return events

    def render(self, run_id: str, format: str) -> str:
        data = self.get(run_id)
        renders = data.get("renders") or {}
        if format not in renders:
            raise ValueError(f"run {run_id} has no {format!r} render")
        return renders[format]

    def mark_approved(self, run_id: str) -> str:
        """Flag a run approved; returns the timestamp used. Idempotent."""
        self._row(run_id)
        stamp = datetime.now(timezone.utc).isoformat()
        with self._lock:
            self._conn.execute(
                "UPDATE runs SET approved = 1, approved_at = COALESCE(approved_at, ?)"
                " WHERE run_id = ?",
                (stamp, run_id),
            )
            self._conn.commit()
        return self._row(run_id)["approved_at"]

    # -- documents ---------------------------------------------------------

    def save_document(self, doc: dict) -> None:
        path = self.root / "documents" / f"{doc['doc_id']}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")

    def get_document(self, doc_id: str) -> dict | None:
        path = self.root / "documents" / f"{doc_id}.json"
        if not path.exists():
            return None
        return json.loads(path.read_text())

    def list_documents(self) -> list[dict]:
        docs = []
        for path in sorted((self.root / "documents").glob("*.json")):
            try:
                docs.append(json.loads(path.read_text()))
            except json.JSONDecodeError as exc:
                raise StoreCorrupt(f"document {path.name} unreadable: {exc}") from exc
        return docs
