"""Shared fixtures: the synthetic corpus and pre-seeded engines."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from resume_tailor.engine import Engine
from resume_tailor.ingest import DocFormat, DocKind
from resume_tailor.pipeline import RunConfig

FIXTURES = Path(__file__).parent / "fixtures"

# One line per acceptance criterion, echoed after the run so the verdicts
# survive output capture. test_acceptance.py appends to this.
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)

VAULT_DOCS = [
    ("hist-2023", DocKind.RESUME_HISTORY, "History 2023", DocFormat.MARKDOWN, "vault/history_2023.md"),
    ("hist-2021", DocKind.RESUME_HISTORY, "History 2021", DocFormat.MARKDOWN, "vault/history_2021.md"),
    ("career", DocKind.CAREER_RECORD, "Career records", DocFormat.CSV, "vault/career_records.csv"),
]


def read_fixture(rel: str) -> str:
    return (FIXTURES / rel).read_text(encoding="utf-8")


def seed_vault(engine: Engine) -> None:
    for doc_id, kind, title, fmt, rel in VAULT_DOCS:
        engine.index_document(
            doc_id=doc_id, kind=kind, title=title, format=fmt, raw=read_fixture(rel)
        )


@pytest.fixture(scope="session")
def base_resume() -> str:
    return read_fixture("resume_base.md")


@pytest.fixture(scope="session")
def canonical_jd() -> str:
    return read_fixture("jd/aligned_data_analyst.txt")


@pytest.fixture(scope="session")
def jd_groups() -> dict[str, list[str]]:
    return json.loads(read_fixture("groups.json"))


@pytest.fixture
def empty_engine(tmp_path) -> Engine:
    return Engine(data_dir=tmp_path / "data", config=RunConfig(seed=42))


@pytest.fixture
def engine(empty_engine) -> Engine:
    seed_vault(empty_engine)
    return empty_engine
