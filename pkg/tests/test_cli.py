"""CLI surface: command output and the exit-code contract
(0 ok, 1 usage, 2 input, 3 pipeline, 4 store)."""

from __future__ import annotations

import json

import pytest

from conftest import FIXTURES
from resume_tailor.cli import EXIT_INPUT, EXIT_OK, EXIT_PIPELINE, EXIT_STORE, EXIT_USAGE, main

RESUME = str(FIXTURES / "resume_base.md")
JD = str(FIXTURES / "jd" / "aligned_data_analyst.txt")
HISTORY = str(FIXTURES / "vault" / "history_2023.md")
CAREER_CSV = str(FIXTURES / "vault" / "career_records.csv")


@pytest.fixture
def data_dir(tmp_path):
    return str(tmp_path / "data")


def invoke(capsys, data_dir, *args):
    code = main(["--data-dir", data_dir, *args])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def index_history(capsys, data_dir):
    return invoke(
        capsys, data_dir,
        "vault", "index", "--file", HISTORY, "--doc-id", "hist-2023",
        "--kind", "resume_history", "--format", "markdown",
    )


def tailor_run(capsys, data_dir, *extra):
    code, out, err = invoke(
        capsys, data_dir, "run", "--resume", RESUME, "--jd", JD, *extra
    )
    assert code == EXIT_OK, err
    summary = json.loads(out.splitlines()[0])
    return summary, out


class TestVaultCommands:
    def test_index_and_list(self, capsys, data_dir):
        code, out, err = index_history(capsys, data_dir)
        assert code == EXIT_OK
        indexed = json.loads(out)
        assert indexed["collection"] == "resume_history"

        code, out, _ = invoke(
            capsys, data_dir, "vault", "list", "--collection", "resume_history"
        )
        assert code == EXIT_OK
        assert len(out.splitlines()) == indexed["chunks"]
        assert "hist-2023" in out

    def test_list_as_json(self, capsys, data_dir):
        index_history(capsys, data_dir)
        code, out, _ = invoke(
            capsys, data_dir, "vault", "list", "--collection", "resume_history", "--as-json"
        )
        assert code == EXIT_OK
        chunks = [json.loads(line) for line in out.splitlines()]
        assert all("chunk_id" in c for c in chunks)

    def test_delete(self, capsys, data_dir):
        index_history(capsys, data_dir)
        code, out, _ = invoke(capsys, data_dir, "vault", "delete", "hist-2023")
        assert code == EXIT_OK
        assert json.loads(out)["deleted"] is True

    def test_data_dirs_are_isolated(self, capsys, tmp_path):
        first = str(tmp_path / "a")
        second = str(tmp_path / "b")
        index_history(capsys, first)
        _, out, _ = invoke(capsys, second, "vault", "list", "--collection", "resume_history")
        assert out == ""


class TestRunCommands:
    def test_run_prints_summary(self, capsys, data_dir):
        index_history(capsys, data_dir)
        summary, _ = tailor_run(capsys, data_dir)
        assert summary["retrieval_enabled"] is True
        assert summary["verdict"] in ("Strong", "Competitive", "Partial")

    def test_no_retrieval_flag(self, capsys, data_dir):
        summary, _ = tailor_run(capsys, data_dir, "--no-retrieval")
        assert summary["retrieval_enabled"] is False

    def test_show_appends_render(self, capsys, data_dir):
        _, out = tailor_run(capsys, data_dir, "--no-retrieval", "--show", "txt")
        assert "EXPERIENCE" in out

    def test_runs_list_and_show(self, capsys, data_dir):
        summary, _ = tailor_run(capsys, data_dir, "--no-retrieval")
        code, out, _ = invoke(capsys, data_dir, "runs", "list")
        assert code == EXIT_OK
        assert summary["run_id"] in out
        assert "baseline" in out

        code, out, _ = invoke(capsys, data_dir, "runs", "show", summary["run_id"])
        assert code == EXIT_OK
        assert json.loads(out)["run_id"] == summary["run_id"]

    def test_trace_with_validation(self, capsys, data_dir):
        summary, _ = tailor_run(capsys, data_dir, "--no-retrieval")
        code, out, _ = invoke(
            capsys, data_dir, "runs", "trace", summary["run_id"], "--validate"
        )
        assert code == EXIT_OK
        lines = out.splitlines()
        assert len(lines) == 13  # 12 events + validation summary
        assert json.loads(lines[-1])["validation"]["events"] == 12

    def test_render_writes_raw_text(self, capsys, data_dir):
        summary, _ = tailor_run(capsys, data_dir, "--no-retrieval")
        code, out, _ = invoke(
            capsys, data_dir, "render", summary["run_id"], "--format", "html"
        )
        assert code == EXIT_OK
        assert out.startswith('<article class="resume">')

    def test_approve(self, capsys, data_dir):
        index_history(capsys, data_dir)
        summary, _ = tailor_run(capsys, data_dir)
        code, out, _ = invoke(capsys, data_dir, "approve", summary["run_id"])
        assert code == EXIT_OK
        assert json.loads(out)["chunks_indexed"] >= 1

    def test_compare(self, capsys, data_dir):
        index_history(capsys, data_dir)
        code, out, _ = invoke(
            capsys, data_dir, "experiment", "compare", "--resume", RESUME, "--jd", JD
        )
        assert code == EXIT_OK
        assert "| Profile | Baseline | With Vault | Delta |" in out
        payload = json.loads(out.splitlines()[-1])
        assert "delta" in payload


class TestExitCodes:
    def test_unknown_command_is_usage(self, capsys, data_dir):
        code, _, _ = invoke(capsys, data_dir, "frobnicate")
        assert code == EXIT_USAGE

    def test_missing_required_option_is_usage(self, capsys, data_dir):
        code, _, _ = invoke(capsys, data_dir, "run", "--resume", RESUME)
        assert code == EXIT_USAGE

    def test_bad_choice_is_usage(self, capsys, data_dir):
        code, _, _ = invoke(
            capsys, data_dir, "vault", "list", "--collection", "secrets"
        )
        assert code == EXIT_USAGE

    def test_missing_file_is_input_error(self, capsys, data_dir):
        code, _, err = invoke(
            capsys, data_dir, "run", "--resume", "/nonexistent.md", "--jd", JD
        )
        assert code == EXIT_INPUT
        assert "input error" in err

    def test_malformed_csv_is_input_error(self, capsys, data_dir, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("employer,title\nAcme,Analyst\n")
        code, _, err = invoke(
            capsys, data_dir,
            "vault", "index", "--file", str(bad), "--doc-id", "bad",
            "--kind", "career_record", "--format", "csv",
        )
        assert code == EXIT_INPUT

    def test_invalid_config_value_is_input_error(self, capsys, data_dir):
        code, _, _ = invoke(
            capsys, data_dir, "run", "--resume", RESUME, "--jd", JD, "--alpha", "2.0"
        )
        assert code == EXIT_INPUT

    def test_empty_resume_is_pipeline_error(self, capsys, data_dir, tmp_path):
        empty = tmp_path / "empty.md"
        empty.write_text("")
        code, _, err = invoke(
            capsys, data_dir, "run", "--resume", str(empty), "--jd", JD
        )
        assert code == EXIT_PIPELINE
        assert "pipeline error" in err

    def test_unknown_run_is_store_error(self, capsys, data_dir):
        for args in (["runs", "show", "zzz"], ["render", "zzz"], ["approve", "zzz"]):
            code, _, err = invoke(capsys, data_dir, *args)
            assert code == EXIT_STORE
            assert "store error" in err

    def test_unknown_chunk_is_store_error(self, capsys, data_dir):
        code, _, _ = invoke(capsys, data_dir, "vault", "delete", "missing/chunk")
        assert code == EXIT_STORE
