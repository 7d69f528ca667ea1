"""REST surface: route contracts and domain-error to status-code mapping."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from conftest import read_fixture
from resume_tailor.service import create_app


@pytest.fixture
def client(engine) -> TestClient:
    app = create_app(engine)
    return TestClient(app)


@pytest.fixture
def run_id(client, base_resume, canonical_jd) -> str:
    response = client.post(
        "/runs", json={"resume_text": base_resume, "jd_text": canonical_jd}
    )
    assert response.status_code == 201
    return response.json()["run_id"]


class TestVaultRoutes:
    def test_index_document_created(self, client):
        response = client.post(
            "/vault/documents",
            json={
                "doc_id": "extra-hist",
                "kind": "resume_history",
                "title": "Extra",
                "format": "markdown",
                "raw": read_fixture("vault/history_2021.md"),
            },
        )
        assert response.status_code == 201
        body = response.json()
        assert body["collection"] == "resume_history"
        assert body["chunks"] > 0

    def test_bad_kind_is_rejected(self, client):
        response = client.post(
            "/vault/documents",
            json={
                "doc_id": "x",
                "kind": "target_resume",
                "title": "t",
                "format": "markdown",
                "raw": "## Summary\nHello.",
            },
        )
        assert response.status_code == 400

    def test_malformed_csv_is_client_error(self, client):
        response = client.post(
            "/vault/documents",
            json={
                "doc_id": "bad-csv",
                "kind": "career_record",
                "title": "Bad",
                "format": "csv",
                "raw": "employer,title\nAcme,Analyst\n",
            },
        )
        assert response.status_code == 400

    def test_list_chunks(self, client):
        response = client.get("/vault/chunks", params={"collection": "resume_history"})
        assert response.status_code == 200
        body = response.json()
        assert body["collection"] == "resume_history"
        assert len(body["chunks"]) > 0
        first = body["chunks"][0]
        assert {"chunk_id", "doc_id", "level", "text", "employer"} <= set(first)

    def test_list_chunks_unknown_collection(self, client):
        response = client.get("/vault/chunks", params={"collection": "secrets"})
        assert response.status_code == 400

    def test_list_chunks_requires_collection(self, client):
        assert client.get("/vault/chunks").status_code == 422

    def test_delete_chunk_with_slash_in_id(self, client):
        chunks = client.get(
            "/vault/chunks", params={"collection": "resume_history"}
        ).json()["chunks"]
        chunk_id = next(c["chunk_id"] for c in chunks if "/" in c["chunk_id"])
        response = client.delete(f"/vault/chunks/{chunk_id}")
        assert response.status_code == 200
        assert response.json()["deleted"] is True

    def test_delete_unknown_chunk(self, client):
        assert client.delete("/vault/chunks/no/such/chunk").status_code == 404


class TestRunRoutes:
    def test_create_run_returns_summary(self, client, base_resume, canonical_jd):
        response = client.post(
            "/runs", json={"resume_text": base_resume, "jd_text": canonical_jd}
        )
        assert response.status_code == 201
        body = response.json()
        assert body["retrieval_enabled"] is True
        assert body["verdict"] in ("Strong", "Competitive", "Partial")
        assert body["approved"] is False

    def test_config_overrides_apply(self, client, base_resume, canonical_jd):
        response = client.post(
            "/runs",
            json={
                "resume_text": base_resume,
                "jd_text": canonical_jd,
                "config": {"retrieval_enabled": False},
            },
        )
        assert response.status_code == 201
        assert response.json()["retrieval_enabled"] is False

    def test_unknown_config_key_rejected(self, client, base_resume, canonical_jd):
        response = client.post(
            "/runs",
            json={
                "resume_text": base_resume,
                "jd_text": canonical_jd,
                "config": {"verbosity": 2},
            },
        )
        assert response.status_code == 400

    def test_invalid_config_value_rejected(self, client, base_resume, canonical_jd):
        response = client.post(
            "/runs",
            json={
                "resume_text": base_resume,
                "jd_text": canonical_jd,
                "config": {"alpha": 2.0},
            },
        )
        assert response.status_code == 400

    def test_empty_resume_is_pipeline_failure(self, client, canonical_jd):
        response = client.post(
            "/runs", json={"resume_text": "", "jd_text": canonical_jd}
        )
        assert response.status_code == 500
        assert "node 1" in response.json()["detail"]

    def test_list_runs(self, client, run_id):
        response = client.get("/runs")
        assert response.status_code == 200
        assert [r["run_id"] for r in response.json()["runs"]] == [run_id]

    def test_get_run_full_payload(self, client, run_id):
        response = client.get(f"/runs/{run_id}")
        assert response.status_code == 200
        body = response.json()
        assert body["run_id"] == run_id
        assert body["report"]["overall"] > 0
        assert set(body["renders"]) == {"txt", "html", "markdown"}

    def test_get_unknown_run(self, client):
        assert client.get("/runs/zzz").status_code == 404


class TestTraceRoute:
    def test_events_returned(self, client, run_id):
        response = client.get(f"/runs/{run_id}/trace")
        assert response.status_code == 200
        body = response.json()
        assert body["run_id"] == run_id
        assert len(body["events"]) == 12
        assert "validation" not in body

    def test_validation_on_demand(self, client, run_id):
        response = client.get(f"/runs/{run_id}/trace", params={"validate": "true"})
        validation = response.json()["validation"]
        assert validation["valid"] is True
        assert validation["events"] == 12
        assert validation["rewrite_loops"] == 0

    def test_unknown_run(self, client):
        assert client.get("/runs/zzz/trace").status_code == 404


class TestRenderRoute:
    def test_txt_default(self, client, run_id):
        response = client.get(f"/runs/{run_id}/render")
        assert response.status_code == 200
        assert response.headers["content-type"] == "text/plain; charset=utf-8"
        assert "EXPERIENCE" in response.text

    def test_html_media_type(self, client, run_id):
        response = client.get(f"/runs/{run_id}/render", params={"format": "html"})
        assert response.headers["content-type"] == "text/html; charset=utf-8"
        assert response.text.startswith('<article class="resume">')

    def test_markdown_media_type(self, client, run_id):
        response = client.get(f"/runs/{run_id}/render", params={"format": "markdown"})
        assert response.headers["content-type"] == "text/markdown; charset=utf-8"

    def test_unknown_format(self, client, run_id):
        assert client.get(f"/runs/{run_id}/render", params={"format": "pdf"}).status_code == 400

    def test_unknown_run(self, client):
        assert client.get("/runs/zzz/render").status_code == 404


class TestApproveRoute:
    def test_approve_and_vault_growth(self, client, run_id):
        before = client.get(
            "/vault/chunks", params={"collection": "generated_content"}
        ).json()["chunks"]
        assert before == []
        response = client.post(f"/runs/{run_id}/approve")
        assert response.status_code == 200
        body = response.json()
        assert body["run_id"] == run_id
        assert body["chunks_indexed"] >= 1
        after = client.get(
            "/vault/chunks", params={"collection": "generated_content"}
        ).json()["chunks"]
        assert len(after) == body["chunks_indexed"]
        assert {c["source_run_id"] for c in after} == {run_id}

    def test_approve_unknown_run(self, client):
        assert client.post("/runs/zzz/approve").status_code == 404


class TestCompareRoute:
    def test_compare_payload(self, client, base_resume, canonical_jd):
        response = client.post(
            "/experiments/compare",
            json={"resume_text": base_resume, "jd_text": canonical_jd},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["delta"]["delta"] == pytest.approx(
            body["delta"]["vault_overall"] - body["delta"]["baseline_overall"], abs=1e-9
        )
        both = client.get("/runs").json()["runs"]
        assert {r["run_id"] for r in both} == {
            body["baseline_run_id"],
            body["vault_run_id"],
        }

    def test_bad_config_rejected(self, client, base_resume, canonical_jd):
        response = client.post(
            "/experiments/compare",
            json={
                "resume_text": base_resume,
                "jd_text": canonical_jd,
                "config": {"k": 0},
            },
        )
        assert response.status_code == 400
