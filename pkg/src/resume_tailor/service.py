"""HTTP surface over the engine.

Every route is a thin translation layer: parse/validate the request, call
the same Engine method the CLI uses, map domain errors to status codes.
No tailoring logic lives here.
"""

from __future__ import annotations

import logging

from fastapi import FastAPI, HTTPException, Query, Response
from pydantic import BaseModel, Field

from resume_tailor.engine import Engine
from resume_tailor.errors import (
    CorruptStore,
    DimensionMismatch,
    DuplicateWithinBatch,
    EmptyDocument,
    EmptyJd,
    GatewayError,
    NodeFailure,
    RowError,
    SchemaMismatch,
    StoreCorrupt,
    UnknownChunk,
    UnknownRun,
    VersionMismatch,
)
from resume_tailor.pipeline import RunConfig, replay_trace
from resume_tailor.vault import COLLECTIONS

logger = logging.getLogger(__name__)

_BAD_REQUEST = (
    EmptyDocument,
    SchemaMismatch,
    RowError,
    EmptyJd,
    DuplicateWithinBatch,
    ValueError,
)
_NOT_FOUND = (UnknownRun, UnknownChunk)
_SERVER_SIDE = (CorruptStore, StoreCorrupt, VersionMismatch, DimensionMismatch)


class DocumentIn(BaseModel):
    doc_id: str = Field(min_length=1)
    kind: str
    title: str = ""
    format: str
    raw: str
    dated: str | None = None


class RunIn(BaseModel):
    resume_text: str
    jd_text: str
    resume_format: str = "markdown"
    config: dict = Field(default_factory=dict)


class CompareIn(RunIn):
    pass


def _config_from(overrides: dict, base: RunConfig) -> RunConfig:
    if not overrides:
        return base
    try:
        return RunConfig.from_dict({**base.to_dict(), **overrides})
    except (TypeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def create_app(engine: Engine | None = None, **engine_kwargs) -> FastAPI:
    app = FastAPI(title="resume-tailor", version="0.1.0")
    app.state.engine = engine or Engine(**engine_kwargs)

    def eng() -> Engine:
        return app.state.engine

    def guard(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except HTTPException:
            raise
        except _NOT_FOUND as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except _BAD_REQUEST as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except NodeFailure as exc:
            raise HTTPException(
                status_code=500, detail=f"pipeline failed at node {exc.node_id}: {exc.cause}"
            ) from exc
        except (GatewayError,) as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        except _SERVER_SIDE as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc

    # -- vault ---------------------------------------------------------------

    @app.post("/vault/documents", status_code=201)
    def index_document(body: DocumentIn):
        return guard(
            eng().index_document,
            doc_id=body.doc_id,
            kind=body.kind,
            title=body.title,
            format=body.format,
            raw=body.raw,
            dated=body.dated,
        )

    @app.get("/vault/chunks")
    def list_chunks(collection: str = Query(...)):
        if collection not in COLLECTIONS:
            raise HTTPException(status_code=400, detail=f"unknown collection {collection!r}")
        return {"collection": collection, "chunks": guard(eng().list_chunks, collection)}

    @app.delete("/vault/chunks/{chunk_id:path}")
    def delete_chunk(chunk_id: str):
        return guard(eng().delete_chunk, chunk_id)

    # -- runs ------------------------------------------------------------------

    @app.post("/runs", status_code=201)
    def create_run(body: RunIn):
        config = _config_from(body.config, eng().config)

        def do():
            result = eng().run(
                resume_text=body.resume_text,
                jd_text=body.jd_text,
                config=config,
                resume_format=body.resume_format,
            )
            return eng().run_summary(result.run_id)

        return guard(do)

    @app.get("/runs")
    def list_runs(limit: int = 100):
        return {"runs": guard(eng().list_runs, limit)}

    @app.get("/runs/{run_id}")
    def get_run(run_id: str):
        return guard(eng().get_run, run_id)

    @app.get("/runs/{run_id}/trace")
    def get_trace(run_id: str, validate: bool = False):
        events = guard(eng().trace, run_id)
        payload = {"run_id": run_id, "events": events}
        if validate:
            try:
                payload["validation"] = replay_trace(events)
            except ValueError as exc:
                payload["validation"] = {"valid": False, "error": str(exc)}
            else:
                payload["validation"]["valid"] = True
        return payload

    @app.get("/runs/{run_id}/render")
    def get_render(run_id: str, format: str = Query("txt")):
        try:
            rendered = eng().render(run_id, format)
        except UnknownRun as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        media = {
            "txt": "text/plain; charset=utf-8",
            "html": "text/html; charset=utf-8",
            "markdown": "text/markdown; charset=utf-8",
        }.get(format, "text/plain; charset=utf-8")
        return Response(content=rendered, media_type=media)

    @app.post("/runs/{run_id}/approve")
    def approve_run(run_id: str):
        return guard(eng().approve, run_id)

    # -- experiments --------------------------------------------------------------

    @app.post("/experiments/compare")
    def compare(body: CompareIn):
        config = _config_from(body.config, eng().config)
        return guard(
            eng().compare,
            resume_text=body.resume_text,
            jd_text=body.jd_text,
            config=config,
            resume_format=body.resume_format,
        )

    return app
