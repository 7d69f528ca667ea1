"""ATS-style alignment scoring and run comparison.

A draft is scored against the JD's extracted elements through five weighting
profiles that mimic how screening systems weigh skills, responsibilities,
and qualifications differently. Per-category coverage is the mean (over that
category's elements) of the best hybrid confidence any eligible text reaches
for the element, scaled to 0..100.

Eligible texts are the base resume's section/entry/bullet chunks (the
document-level chunk is too coarse to count as evidence) plus final-draft
entry bullets with vault provenance. Fallback items never score — coverage
bought with a hedged highlight would defeat the point of measuring it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from resume_tailor.drafting import Draft
from resume_tailor.errors import ConditionMismatch
from resume_tailor.ingest import Chunk, ChunkLevel
from resume_tailor.jd import ElementCategory, JdAnalysis
from resume_tailor.matching import (
    DEFAULT_ALPHA,
    hybrid_confidence,
    partial_ratio,
    semantic_score,
)

logger = logging.getLogger(__name__)

VERDICT_STRONG = 75.0
VERDICT_COMPETITIVE = 56.0


@dataclass(frozen=True)
class ScoreProfile:
    name: str
    skills: float
    responsibilities: float
    qualifications: float

    def weight(self, category: ElementCategory) -> float:
        return {
            ElementCategory.SKILL: self.skills,
            ElementCategory.RESPONSIBILITY: self.responsibilities,
            ElementCategory.QUALIFICATION: self.qualifications,
        }[category]


PROFILES = (
    ScoreProfile("Skills-Heavy", 0.50, 0.30, 0.20),
    ScoreProfile("Role-Aligned", 0.40, 0.40, 0.20),
    ScoreProfile("Responsibilities-First", 0.30, 0.50, 0.20),
    ScoreProfile("Qualifications-Heavy", 0.25, 0.25, 0.50),
    ScoreProfile("Balanced", 0.33, 0.34, 0.33),
)


@dataclass
class ElementScore:
    element_id: str
    category: ElementCategory
    confidence: float
    best_source: str | None

    def to_dict(self) -> dict:
        return {
            "element_id": self.element_id,
            "category": self.category.value,
            "confidence": self.confidence,
            "best_source": self.best_source,
        }


@dataclass
class AtsReport:
    coverage: dict[str, float]
    profile_scores: dict[str, float]
    overall: float
    best: float
    best_profile: str
    verdict: str
    element_scores: list[ElementScore] = field(default_factory=list)
    eligible_count: int = 0
    jd_id: str = ""

    def to_dict(self) -> dict:
        return {
            "coverage": dict(self.coverage),
            "profile_scores": dict(self.profile_scores),
            "overall": self.overall,
            "best": self.best,
            "best_profile": self.best_profile,
            "verdict": self.verdict,
            "element_scores": [e.to_dict() for e in self.element_scores],
            "eligible_count": self.eligible_count,
            "jd_id": self.jd_id,
        }


def verdict_for(overall: float) -> str:
    if overall >= VERDICT_STRONG:
        return "Strong"
    if overall >= VERDICT_COMPETITIVE:
        return "Competitive"
    return "Partial"


def eligible_texts(base_chunks: list[Chunk], draft: Draft | None) -> list[tuple[str, str]]:
    """(id, text) pairs allowed to earn coverage.

    Base chunks below document level always count. From the draft, only
    entry bullets whose provenance traces to the vault count — base bullets
    already appear as chunks, and fallback items are excluded by design.
    """
    pairs = [
        (chunk.chunk_id, chunk.text)
        for chunk in base_chunks
        if chunk.level != ChunkLevel.DOCUMENT
    ]
    if draft is not None:
        for entry_idx, entry in enumerate(draft.entries):
            for bullet_idx, bullet in enumerate(entry.bullets):
                if bullet.provenance.is_vault:
                    pairs.append((f"draft/e{entry_idx}/b{bullet_idx}", bullet.text))
    return pairs


def coverage(
    jd: JdAnalysis,
    eligible: list[tuple[str, str]],
    gateway,
    *,
    alpha: float = DEFAULT_ALPHA,
) -> tuple[dict[str, float], list[ElementScore]]:
    """Per-category coverage (0..100) plus the per-element best matches.

    Confidence for an (element, text) pair hybridizes the embedding cosine
    with the pair's partial ratio under the same alpha as retrieval. Only
    categories that actually have elements appear in the coverage dict.
    """
    element_scores: list[ElementScore] = []
    if jd.elements and eligible:
        texts = [text for _, text in eligible]
        vectors = gateway.embed([e.text for e in jd.elements] + texts)
        element_vecs = vectors[: len(jd.elements)]
        text_vecs = vectors[len(jd.elements):]
        for element, evec in zip(jd.elements, element_vecs):
            best_conf, best_source = 0.0, None
            for (source_id, text), tvec in zip(eligible, text_vecs):
                cosine = float(np.dot(evec, tvec))
                semantic = semantic_score(cosine)
                lexical = partial_ratio(element.text, text) / 100.0
                conf = hybrid_confidence(semantic, lexical, alpha)
                if conf > best_conf or (conf == best_conf and best_source is None):
                    best_conf, best_source = conf, source_id
            element_scores.append(
                ElementScore(element.element_id, element.category, best_conf, best_source)
            )
    else:
        element_scores = [
            ElementScore(e.element_id, e.category, 0.0, None) for e in jd.elements
        ]

    cov: dict[str, float] = {}
    for category in ElementCategory:
        scores = [s.confidence for s in element_scores if s.category == category]
        if scores:
            cov[category.value] = 100.0 * sum(scores) / len(scores)
    return cov, element_scores


def profile_score(cov: dict[str, float], profile: ScoreProfile) -> float:
    """Weighted coverage under one profile; weights of categories absent
    from the JD are redistributed proportionally across those present."""
    present = [c for c in ElementCategory if c.value in cov]
    if not present:
        return 0.0
    total_weight = sum(profile.weight(c) for c in present)
    if total_weight == 0.0:
        return 0.0
    return sum(profile.weight(c) / total_weight * cov[c.value] for c in present)


def ats_report(
    jd: JdAnalysis,
    base_chunks: list[Chunk],
    draft: Draft | None,
    gateway,
    *,
    alpha: float = DEFAULT_ALPHA,
) -> AtsReport:
    eligible = eligible_texts(base_chunks, draft)
    cov, element_scores = coverage(jd, eligible, gateway, alpha=alpha)
    profile_scores = {p.name: profile_score(cov, p) for p in PROFILES}
    overall = sum(profile_scores.values()) / len(profile_scores)
    best_profile = max(PROFILES, key=lambda p: (profile_scores[p.name], p.name)).name
    return AtsReport(
        coverage=cov,
        profile_scores=profile_scores,
        overall=overall,
        best=profile_scores[best_profile],
        best_profile=best_profile,
        verdict=verdict_for(overall),
        element_scores=element_scores,
        eligible_count=len(eligible),
        jd_id=jd.jd_id,
    )


@dataclass
class DeltaReport:
    baseline_overall: float
    vault_overall: float
    delta: float
    baseline_verdict: str
    vault_verdict: str
    per_profile: dict[str, tuple[float, float, float]]
    jd_id: str = ""
    group: str = ""

    def to_dict(self) -> dict:
        return {
            "baseline_overall": self.baseline_overall,
            "vault_overall": self.vault_overall,
            "delta": self.delta,
            "baseline_verdict": self.baseline_verdict,
            "vault_verdict": self.vault_verdict,
            "per_profile": {
                name: {"baseline": b, "vault": v, "delta": d}
                for name, (b, v, d) in self.per_profile.items()
            },
            "jd_id": self.jd_id,
            "group": self.group,
        }

    def markdown(self) -> str:
        lines = [
            "| Profile | Baseline | With Vault | Delta |",
            "| --- | ---: | ---: | ---: |",
        ]
        for name, (baseline, vault, delta) in self.per_profile.items():
            lines.append(f"| {name} | {baseline:.1f} | {vault:.1f} | {delta:+.1f} |")
        lines.append(
            f"| **Overall** | {self.baseline_overall:.1f} | {self.vault_overall:.1f} "
            f"| {self.delta:+.1f} |"
        )
        lines.append("")
        lines.append(
            f"Verdict: {self.baseline_verdict} -> {self.vault_verdict} "
            f"({self.delta:+.1f} overall)"
        )
        return "\n".join(lines) + "\n"


def compare_reports(
    baseline: AtsReport, vault: AtsReport, group: str = ""
) -> DeltaReport:
    """Pair two reports for the same posting into a per-profile delta.

    Refuses to pair reports whose JD ids disagree — a baseline for one
    posting against a vault run for another would produce a meaningless
    delta.
    """
    if baseline.jd_id and vault.jd_id and baseline.jd_id != vault.jd_id:
        raise ConditionMismatch(
            f"cannot compare reports for different postings: "
            f"{baseline.jd_id!r} vs {vault.jd_id!r}"
        )
    per_profile = {}
    for profile in PROFILES:
        b = baseline.profile_scores[profile.name]
        v = vault.profile_scores[profile.name]
        per_profile[profile.name] = (b, v, v - b)
    return DeltaReport(
        baseline_overall=baseline.overall,
        vault_overall=vault.overall,
        delta=vault.overall - baseline.overall,
        baseline_verdict=baseline.verdict,
        vault_verdict=vault.verdict,
        per_profile=per_profile,
        jd_id=baseline.jd_id or vault.jd_id,
        group=group,
    )
