"""Application facade.

Both the CLI and the HTTP service are thin wrappers over this class, so the
two surfaces cannot drift apart: every operation — indexing documents,
running the pipeline, approving content back into the vault, comparing
retrieval on/off — lives here exactly once.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path

from resume_tailor import ats as ats_mod
from resume_tailor.drafting import Provenance
from resume_tailor.errors import UnknownRun
from resume_tailor.gateway import GatewayConfig, make_gateway
from resume_tailor.ingest import (
    Chunk,
    ChunkLevel,
    DocFormat,
    DocKind,
    SectionKind,
    SourceDocument,
    ingest_document,
)
from resume_tailor.pipeline import RunConfig, RunInputs, RunResult, run_pipeline
from resume_tailor.runstore import RunStore
from resume_tailor.vault import Vault

logger = logging.getLogger(__name__)

DATA_DIR_ENV = "TAILOR_DATA_DIR"
DEFAULT_DATA_DIR = "tailor_data"

COLLECTION_BY_KIND = {
    DocKind.RESUME_HISTORY: "resume_history",
    DocKind.CAREER_RECORD: "career_records",
    DocKind.GENERATED: "generated_content",
}


def resolve_data_dir(data_dir: str | Path | None = None) -> Path:
    if data_dir is not None:
        return Path(data_dir)
    return Path(os.environ.get(DATA_DIR_ENV, DEFAULT_DATA_DIR))


class Engine:
    """One engine = one data directory + one gateway."""

    def __init__(
        self,
        data_dir: str | Path | None = None,
        config: RunConfig | None = None,
        gateway=None,
    ):
        self.data_dir = resolve_data_dir(data_dir)
        self.config = config or RunConfig()
        if gateway is None:
            gateway_config = GatewayConfig.from_profile(
                self.config.gateway_profile, seed=self.config.seed
            )
            gateway = make_gateway(gateway_config)
        self.gateway = gateway
        self.vault = Vault.load(self.data_dir / "vault", gateway)
        self.store = RunStore(self.data_dir)

    def close(self) -> None:
        self.store.close()

    # -- vault -----------------------------------------------------------

    def index_document(
        self,
        *,
        doc_id: str,
        kind: str | DocKind,
        title: str,
        format: str | DocFormat,
        raw: str,
        dated: str | None = None,
    ) -> dict:
        """Parse, chunk, embed, and store one source document."""
        kind = DocKind(kind)
        format = DocFormat(format)
        if kind not in COLLECTION_BY_KIND:
            raise ValueError(f"documents of kind {kind.value!r} cannot be indexed")
        doc = SourceDocument(
            doc_id=doc_id, kind=kind, title=title, format=format, raw=raw, dated=dated
        )
        _, chunks = ingest_document(doc)
        collection = COLLECTION_BY_KIND[kind]
        count = self.vault.index_chunks(collection, chunks, dated=dated)
        self.vault.persist()
        self.store.save_document(
            {
                "doc_id": doc_id,
                "kind": kind.value,
                "title": title,
                "format": format.value,
                "raw": raw,
                "dated": dated,
                "chunks": count,
                "collection": collection,
            }
        )
        logger.info("indexed %s (%d chunks) into %s", doc_id, count, collection)
        return {"doc_id": doc_id, "collection": collection, "chunks": count}

    def list_chunks(self, collection: str) -> list[dict]:
        records = self.vault.list_records(collection)
        return [
            {
                "chunk_id": r.chunk_id,
                "doc_id": r.doc_id,
                "section_kind": r.section_kind,
                "level": r.level,
                "parent_id": r.parent_id,
                "employer": r.employer,
                "text": r.text,
                "metadata": r.metadata,
                "dated": r.dated,
                "source_run_id": r.source_run_id,
            }
            for r in records
        ]

    def delete_chunk(self, chunk_id: str) -> dict:
        collection = self.vault.delete(chunk_id)
        self.vault.persist()
        return {"chunk_id": chunk_id, "collection": collection, "deleted": True}

    def vault_counts(self) -> dict[str, int]:
        return self.vault.counts()

    # -- runs ------------------------------------------------------------

    def run(
        self,
        *,
        resume_text: str,
        jd_text: str,
        config: RunConfig | None = None,
        resume_format: str | DocFormat = DocFormat.MARKDOWN,
    ) -> RunResult:
        config = config or self.config
        inputs = RunInputs(
            resume_text=resume_text,
            jd_text=jd_text,
            resume_format=DocFormat(resume_format),
        )
        result = run_pipeline(inputs, config, self.gateway, self.vault)
        self.store.save(result)
        return result

    def list_runs(self, limit: int = 100) -> list[dict]:
        return self.store.list(limit)

    def get_run(self, run_id: str) -> dict:
        return self.store.get(run_id)

    def run_summary(self, run_id: str) -> dict:
        return self.store.summary(run_id)

    def trace(self, run_id: str) -> list[dict]:
        return self.store.trace(run_id)

    def render(self, run_id: str, format: str) -> str:
        return self.store.render(run_id, format)

    # -- approval ----------------------------------------------------------

    def approve(self, run_id: str) -> dict:
        """Store a run's generated content into the vault for future reuse.

        The summary and every vault-provenance entry bullet become
        generated_content chunks tagged with the source run id. Raises
        UnknownRun for ids the store has never seen.
        """
        if not self.store.exists(run_id):
            raise UnknownRun(run_id)
        data = self.store.get(run_id)
        draft = data.get("draft") or {}
        chunks: list[Chunk] = []
        summary = (draft.get("summary") or "").strip()
        if summary:
            chunks.append(
                Chunk(
                    chunk_id=f"run:{run_id}/summary",
                    doc_id=f"run:{run_id}",
                    section_kind=SectionKind.SUMMARY,
                    level=ChunkLevel.SECTION,
                    parent_id=None,
                    text=summary,
                )
            )
        for entry_idx, entry in enumerate(draft.get("entries", [])):
            for bullet_idx, bullet in enumerate(entry.get("bullets", [])):
                provenance = Provenance(bullet["provenance"])
                if not provenance.is_vault:
                    continue
                chunks.append(
                    Chunk(
                        chunk_id=f"run:{run_id}/e{entry_idx}/b{bullet_idx}",
                        doc_id=f"run:{run_id}",
                        section_kind=SectionKind.EXPERIENCE,
                        level=ChunkLevel.BULLET,
                        parent_id=None,
                        text=bullet["text"],
                        employer=entry.get("employer"),
                        metadata={"source_chunk_id": bullet.get("source_chunk_id") or ""},
                    )
                )
        approved_at = self.store.mark_approved(run_id)
        count = 0
        if chunks:
            count = self.vault.index_chunks(
                "generated_content", chunks, dated=approved_at, source_run_id=run_id
            )
            self.vault.persist()
        return {"run_id": run_id, "approved_at": approved_at, "chunks_indexed": count}

    # -- experiments ---------------------------------------------------------

    def compare(
        self,
        *,
        resume_text: str,
        jd_text: str,
        config: RunConfig | None = None,
        resume_format: str | DocFormat = DocFormat.MARKDOWN,
    ) -> dict:
        """Run the same inputs with retrieval off and on; report the delta."""
        base_config = config or self.config
        baseline_config = RunConfig.from_dict(
            {**base_config.to_dict(), "retrieval_enabled": False}
        )
        vault_config = RunConfig.from_dict(
            {**base_config.to_dict(), "retrieval_enabled": True}
        )
        baseline = self.run(
            resume_text=resume_text,
            jd_text=jd_text,
            config=baseline_config,
            resume_format=resume_format,
        )
        with_vault = self.run(
            resume_text=resume_text,
            jd_text=jd_text,
            config=vault_config,
            resume_format=resume_format,
        )
        delta = ats_mod.compare_reports(baseline.state.report, with_vault.state.report)
        return {
            "baseline_run_id": baseline.run_id,
            "vault_run_id": with_vault.run_id,
            "delta": delta.to_dict(),
            "markdown": delta.markdown(),
        }
