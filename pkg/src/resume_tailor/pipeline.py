"""Deterministic tailoring pipeline.

Twelve nodes run in fixed order; the only branch is the review gate, which
can send execution back to the rewrite node exactly once per allowed extra
pass. Every node execution appends one trace event, so a clean run yields
12 events and a run that triggered one rewrite loop yields 18 (nodes 6-11
execute twice). Traces are replayable: `replay_trace` re-walks the recorded
transitions against the declared edges and rejects anything the graph could
not have produced.

Node order:
  1 ingest_resume    parse + chunk the base resume
  2 analyze_jd       extract JD elements (model-assisted, deterministic net)
  3 retrieve_vault   per-element vault queries (skipped when disabled)
  4 score_confidence hybrid semantic/lexical scoring and thresholding
  5 fallback         three-tier coverage for unmatched elements
  6 rewrite          retained snippets -> tailored bullets
  7 summarize        summary composition
  8 assemble         merge into a draft
  9 guardrails       evidence screening (fail-closed)
 10 polish           dedupe / ordering / ASCII normalization
 11 holistic_review  reviewer verdict (fail-open)
 12 score_and_render ATS report + renders
"""

from __future__ import annotations

import hashlib
import logging
import time
import uuid
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone

from resume_tailor import ats as ats_mod
from resume_tailor import drafting
from resume_tailor.errors import NodeFailure, TailorError
from resume_tailor.ingest import Chunk, ChunkLevel, DocFormat, ResumeDoc, parse_resume_text, chunkize, DocKind
from resume_tailor.jd import JdAnalysis, llm_extract, load_lexicon
from resume_tailor.matching import ScoredSnippet, score_snippet
from resume_tailor.textnorm import fold

logger = logging.getLogger(__name__)

REWRITE_NODE = 6
REVIEW_NODE = 11
FINAL_NODE = 12

NODE_NAMES = {
    1: "ingest_resume",
    2: "analyze_jd",
    3: "retrieve_vault",
    4: "score_confidence",
    5: "fallback",
    6: "rewrite",
    7: "summarize",
    8: "assemble",
    9: "guardrails",
    10: "polish",
    11: "holistic_review",
    12: "score_and_render",
}


@dataclass
class RunConfig:
    alpha: float = 0.6
    tau: float = 0.75
    tau_fallback: float = 0.60
    retrieval_enabled: bool = True
    k: int = 8
    max_extra_review_passes: int = 1
    seed: int = 42
    gateway_profile: str = "mock"
    render_formats: tuple[str, ...] = ("txt", "html", "markdown")

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be within [0, 1]")
        if not 0.0 <= self.tau_fallback <= self.tau <= 1.0:
            raise ValueError("need 0 <= tau_fallback <= tau <= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_extra_review_passes < 0:
            raise ValueError("max_extra_review_passes must be >= 0")
        self.render_formats = tuple(self.render_formats)
        unknown = [f for f in self.render_formats if f not in drafting.RENDERERS]
        if unknown:
            raise ValueError(f"unknown render format {unknown[0]!r}")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["render_formats"] = list(self.render_formats)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config field {sorted(unknown)[0]!r}")
        return cls(**data)


@dataclass
class RunInputs:
    resume_text: str
    jd_text: str
    resume_format: DocFormat = DocFormat.MARKDOWN

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.resume_text.encode())
        h.update(b"\x00")
        h.update(self.jd_text.encode())
        return h.hexdigest()[:12]


@dataclass
class TraceEvent:
    seq: int
    node_id: int
    name: str
    status: str
    duration_ms: float
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "node_id": self.node_id,
            "name": self.name,
            "status": self.status,
            "duration_ms": self.duration_ms,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TraceEvent":
        return cls(
            seq=data["seq"],
            node_id=data["node_id"],
            name=data["name"],
            status=data["status"],
            duration_ms=data["duration_ms"],
            detail=data.get("detail", {}),
        )


@dataclass
class RunState:
    config: RunConfig
    inputs: RunInputs
    base_doc: ResumeDoc | None = None
    base_chunks: list[Chunk] = field(default_factory=list)
    jd: JdAnalysis | None = None
    retrieved: list = field(default_factory=list)  # list[VaultHit]
    scored: list[ScoredSnippet] = field(default_factory=list)
    kept: list[ScoredSnippet] = field(default_factory=list)
    dropped: list[ScoredSnippet] = field(default_factory=list)
    fallback_items: list = field(default_factory=list)
    rewritten: list = field(default_factory=list)
    summary: str = ""
    draft: drafting.Draft | None = None
    findings: list = field(default_factory=list)
    verdict: drafting.ReviewVerdict | None = None
    pass_count: int = 0
    vault_reads: int = 0
    report: ats_mod.AtsReport | None = None
    renders: dict = field(default_factory=dict)
    trace: list[TraceEvent] = field(default_factory=list)


@dataclass
class RunResult:
    run_id: str
    created_at: str
    config: RunConfig
    inputs_digest: str
    jd_id: str
    state: RunState

    def to_dict(self) -> dict:
        report = self.state.report
        return {
            "run_id": self.run_id,
            "created_at": self.created_at,
            "config": self.config.to_dict(),
            "inputs_digest": self.inputs_digest,
            "jd_id": self.jd_id,
            "pass_count": self.state.pass_count,
            "vault_reads": self.state.vault_reads,
            "report": report.to_dict() if report else None,
            "verdict": self.state.verdict.to_dict() if self.state.verdict else None,
            "findings": [f.to_dict() for f in self.state.findings],
            "fallback_items": [i.to_dict() for i in self.state.fallback_items],
            "draft": self.state.draft.to_dict() if self.state.draft else None,
            "trace": [e.to_dict() for e in self.state.trace],
            "renders": dict(self.state.renders),
        }


# --- node implementations ------------------------------------------------------


def _node_ingest_resume(state: RunState, ctx) -> dict:
    doc = parse_resume_text(state.inputs.resume_text, state.inputs.resume_format)
    doc_id = f"resume-{state.inputs.digest()}"
    doc.source = doc_id
    state.base_doc = doc
    state.base_chunks = chunkize(doc, doc_id, DocKind.TARGET_RESUME)
    return {
        "doc_id": doc_id,
        "sections": len(doc.sections),
        "chunks": len(state.base_chunks),
    }


def _node_analyze_jd(state: RunState, ctx) -> dict:
    state.jd = llm_extract(state.inputs.jd_text, ctx.gateway)
    by_cat: dict[str, int] = {}
    for element in state.jd.elements:
        by_cat[element.category.value] = by_cat.get(element.category.value, 0) + 1
    return {"jd_id": state.jd.jd_id, "elements": len(state.jd.elements), "by_category": by_cat}


def _node_retrieve_vault(state: RunState, ctx) -> dict:
    if not state.config.retrieval_enabled:
        state.retrieved = []
        return {"skipped": True, "queries": 0, "unique_chunks": 0}
    best: dict[str, object] = {}
    matched: dict[str, list[str]] = {}
    queries = 0
    for element in state.jd.elements:
        hits = ctx.vault.query(text=element.text, k=state.config.k)
        queries += 1
        state.vault_reads += 1
        for hit in hits:
            if hit.record.level not in (ChunkLevel.ENTRY.value, ChunkLevel.BULLET.value):
                continue
            cid = hit.record.chunk_id
            matched.setdefault(cid, []).append(element.element_id)
            prior = best.get(cid)
            if prior is None or hit.cosine > prior.cosine:
                best[cid] = hit
    state.retrieved = [
        (best[cid], sorted(set(matched[cid]))) for cid in sorted(best, key=lambda c: c)
    ]
    return {"skipped": False, "queries": queries, "unique_chunks": len(state.retrieved)}


def _node_score_confidence(state: RunState, ctx) -> dict:
    scored: list[ScoredSnippet] = []
    for hit, matched_ids in state.retrieved:
        snippet = score_snippet(
            chunk_id=hit.record.chunk_id,
            text=hit.record.text,
            best_cosine=hit.cosine,
            matched_elements=matched_ids,
            all_elements=state.jd.elements,
            alpha=state.config.alpha,
            tau=state.config.tau,
        )
        snippet.collection = hit.collection
        scored.append(snippet)
    state.scored = scored
    state.kept = [s for s in scored if s.passes]
    state.dropped = [s for s in scored if not s.passes]
    return {"scored": len(scored), "kept": len(state.kept), "dropped": len(state.dropped)}


def _node_fallback(state: RunState, ctx) -> dict:
    uncovered = drafting.uncovered_elements(state.jd, state.kept)
    state.fallback_items = drafting.fallback_for(
        uncovered,
        state.dropped,
        ctx.gateway,
        tau=state.config.tau,
        tau_fallback=state.config.tau_fallback,
    )
    # string keys so the persisted trace equals the in-memory one
    tiers: dict[str, int] = {}
    for item in state.fallback_items:
        tiers[str(item.tier)] = tiers.get(str(item.tier), 0) + 1
    return {"uncovered": len(uncovered), "items": len(state.fallback_items), "tiers": tiers}


def _node_rewrite(state: RunState, ctx) -> dict:
    employers = {}
    for hit, _ in state.retrieved:
        if hit.record.employer:
            employers[hit.record.chunk_id] = hit.record.employer
    state.rewritten = drafting.rewrite_snippets(
        state.kept, state.jd, ctx.gateway, employers=employers
    )
    return {"bullets": len(state.rewritten), "pass": state.pass_count + 1}


def _node_summarize(state: RunState, ctx) -> dict:
    state.summary = drafting.write_summary(state.jd, state.kept, state.base_doc, ctx.gateway)
    return {"length": len(state.summary)}


def _node_assemble(state: RunState, ctx) -> dict:
    state.draft = drafting.assemble(
        state.base_doc, state.summary, state.rewritten, state.fallback_items
    )
    return {
        "entries": len(state.draft.entries),
        "highlights": len(state.draft.highlights),
    }


def _node_guardrails(state: RunState, ctx) -> dict:
    allowlist = [e.employer for e in state.base_doc.experience_entries()]
    sources: dict[str, list[str]] = {}
    for chunk in state.base_chunks:
        if chunk.employer:
            sources.setdefault(fold(chunk.employer), []).append(chunk.text)
    for hit, _ in state.retrieved:
        record = hit.record
        if record.employer:
            if record.employer not in allowlist:
                allowlist.append(record.employer)
            sources.setdefault(fold(record.employer), []).append(record.text)
    state.draft, state.findings = drafting.guardrails_check(
        state.draft,
        allowlist=allowlist,
        sources_by_employer=sources,
        term_safelist=load_lexicon(),
        element_texts={e.element_id: e.text for e in state.jd.elements},
    )
    by_code: dict[str, int] = {}
    for finding in state.findings:
        by_code[finding.code] = by_code.get(finding.code, 0) + 1
    return {"findings": len(state.findings), "by_code": by_code}


def _node_polish(state: RunState, ctx) -> dict:
    state.draft = drafting.polish(state.draft)
    return {
        "entries": len(state.draft.entries),
        "bullets": sum(len(e.bullets) for e in state.draft.entries),
    }


def _node_holistic_review(state: RunState, ctx) -> dict:
    state.verdict = drafting.holistic_review(state.draft, state.jd, ctx.gateway)
    state.pass_count += 1
    return {
        "status": state.verdict.status,
        "pass": state.pass_count,
        "failed_open": state.verdict.failed_open,
    }


def _node_score_and_render(state: RunState, ctx) -> dict:
    state.report = ats_mod.ats_report(
        state.jd, state.base_chunks, state.draft, ctx.gateway, alpha=state.config.alpha
    )
    state.renders = {
        fmt: drafting.render(state.draft, fmt, state.findings)
        for fmt in state.config.render_formats
    }
    return {
        "overall": round(state.report.overall, 2),
        "best": round(state.report.best, 2),
        "verdict": state.report.verdict,
    }


NODE_FUNCS = {
    1: _node_ingest_resume,
    2: _node_analyze_jd,
    3: _node_retrieve_vault,
    4: _node_score_confidence,
    5: _node_fallback,
    6: _node_rewrite,
    7: _node_summarize,
    8: _node_assemble,
    9: _node_guardrails,
    10: _node_polish,
    11: _node_holistic_review,
    12: _node_score_and_render,
}


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    condition: str | None = None


def build_graph() -> list[Edge]:
    """Declared edges: a linear chain plus the single conditional edge from
    the review gate back to rewrite."""
    edges = [Edge(i, i + 1) for i in range(1, 12) if i != REVIEW_NODE]
    edges.append(Edge(REVIEW_NODE, FINAL_NODE))
    edges.append(Edge(REVIEW_NODE, REWRITE_NODE, condition="needs_rewrite"))
    return edges


@dataclass
class PipelineContext:
    gateway: object
    vault: object


def run_pipeline(
    inputs: RunInputs,
    config: RunConfig,
    gateway,
    vault,
) -> RunResult:
    """Execute the full graph and return a RunResult with trace attached.

    Node exceptions are recorded as an error trace event and re-raised as
    NodeFailure so callers can map them to exit codes / HTTP statuses.
    """
    state = RunState(config=config, inputs=inputs)
    ctx = PipelineContext(gateway=gateway, vault=vault)
    seq = 0
    node_id = 1
    while True:
        seq += 1
        started = time.perf_counter()
        try:
            detail = NODE_FUNCS[node_id](state, ctx)
            status = "skipped" if detail.get("skipped") else "ok"
        except Exception as exc:
            duration = (time.perf_counter() - started) * 1000.0
            state.trace.append(
                TraceEvent(
                    seq=seq,
                    node_id=node_id,
                    name=NODE_NAMES[node_id],
                    status="error",
                    duration_ms=duration,
                    detail={"error": f"{type(exc).__name__}: {exc}"},
                )
            )
            if isinstance(exc, NodeFailure):
                raise
            raise NodeFailure(node_id, exc) from exc
        duration = (time.perf_counter() - started) * 1000.0
        state.trace.append(
            TraceEvent(
                seq=seq,
                node_id=node_id,
                name=NODE_NAMES[node_id],
                status=status,
                duration_ms=duration,
                detail=detail,
            )
        )
        if node_id == REVIEW_NODE:
            if (
                state.verdict is not None
                and state.verdict.needs_rewrite
                and state.pass_count <= config.max_extra_review_passes
            ):
                logger.info("review verdict requests rewrite; re-entering node %d", REWRITE_NODE)
                node_id = REWRITE_NODE
                continue
            node_id = FINAL_NODE
            continue
        if node_id == FINAL_NODE:
            break
        node_id += 1

    return RunResult(
        run_id=uuid.uuid4().hex[:12],
        created_at=datetime.now(timezone.utc).isoformat(),
        config=config,
        inputs_digest=inputs.digest(),
        jd_id=state.jd.jd_id if state.jd else "",
        state=state,
    )


def replay_trace(events: list[TraceEvent] | list[dict], *, max_extra_review_passes: int = 1) -> dict:
    """Validate a recorded trace against the graph topology.

    Checks: contiguous 1-based seq, start at node 1, every transition is a
    declared edge, the rewrite loop is taken at most the allowed number of
    times, and a completed trace ends at the final node. Returns a summary
    dict; raises ValueError on any violation.
    """
    if events and isinstance(events[0], dict):
        events = [TraceEvent.from_dict(e) for e in events]
    if not events:
        raise ValueError("trace is empty")
    edges = {(e.source, e.target) for e in build_graph()}
    loops = 0
    for idx, event in enumerate(events):
        if event.seq != idx + 1:
            raise ValueError(f"trace seq {event.seq} at position {idx} is not contiguous")
        if NODE_NAMES.get(event.node_id) != event.name:
            raise ValueError(f"node {event.node_id} named {event.name!r} is unknown")
        if idx == 0:
            if event.node_id != 1:
                raise ValueError(f"trace starts at node {event.node_id}, expected 1")
            continue
        source = events[idx - 1].node_id
        target = event.node_id
        if (source, target) not in edges:
            raise ValueError(f"transition {source} -> {target} is not a declared edge")
        if source == REVIEW_NODE and target == REWRITE_NODE:
            loops += 1
            if loops > max_extra_review_passes:
                raise ValueError(f"rewrite loop taken {loops} times, max {max_extra_review_passes}")
    last = events[-1]
    if last.status != "error" and last.node_id != FINAL_NODE:
        raise ValueError(f"completed trace must end at node {FINAL_NODE}, got {last.node_id}")
    return {"events": len(events), "rewrite_loops": loops, "final_node": last.node_id}
