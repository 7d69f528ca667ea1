"""Draft construction and generation-quality controls.

Everything between retrieval and rendering lives here: turning retrieved
snippets into entry bullets, composing the summary, covering unmatched JD
elements through the three-tier fallback ladder, merging into a draft,
screening that draft (employer allowlist, metric support, formatting),
polish (dedupe / ordering / ASCII normalization), the holistic review
round-trip, and the final renderers.

Safety posture: the screening step is fail-closed (content that cannot be
traced to evidence is cut), while holistic review fails open (a broken
reviewer cannot block an otherwise valid draft — it only flags it).
"""

from __future__ import annotations

import html as html_lib
import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum

from resume_tailor.errors import GatewayError
from resume_tailor.gateway import ChatRequest
from resume_tailor.ingest import ExperienceEntry, ResumeDoc, Section, SectionKind
from resume_tailor.jd import ElementCategory, JdAnalysis, JdElement
from resume_tailor.matching import ScoredSnippet, partial_ratio
from resume_tailor.textnorm import ascii_normalize, fold

logger = logging.getLogger(__name__)

DEDUPE_RATIO = 90.0
EMPLOYER_MATCH_RATIO = 90.0

FALLBACK_TEMPLATES = {
    ElementCategory.SKILL: "Skills aligned with this role include: {text}.",
    ElementCategory.RESPONSIBILITY: "Prepared to take ownership of: {text}.",
    ElementCategory.QUALIFICATION: "Meets or is actively developing toward: {text}.",
}


class Provenance(str, Enum):
    BASE = "base"
    VAULT_RESUME = "vault_resume_history"
    VAULT_CAREER = "vault_career_records"
    VAULT_GENERATED = "vault_generated_content"
    FALLBACK_VAULT = "fallback_vault"
    FALLBACK_LLM = "fallback_llm"
    FALLBACK_TEMPLATE = "fallback_template"

    @property
    def is_vault(self) -> bool:
        return self.value.startswith("vault_")

    @property
    def is_fallback(self) -> bool:
        return self.value.startswith("fallback_")


PROVENANCE_BY_COLLECTION = {
    "resume_history": Provenance.VAULT_RESUME,
    "career_records": Provenance.VAULT_CAREER,
    "generated_content": Provenance.VAULT_GENERATED,
}


@dataclass
class DraftBullet:
    text: str
    provenance: Provenance = Provenance.BASE
    confidence: float | None = None
    source_chunk_id: str | None = None
    source_employer: str | None = None
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "provenance": self.provenance.value,
            "confidence": self.confidence,
            "source_chunk_id": self.source_chunk_id,
            "flags": list(self.flags),
        }


@dataclass
class DraftEntry:
    employer: str
    title: str
    date_range: str
    bullets: list[DraftBullet] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "employer": self.employer,
            "title": self.title,
            "date_range": self.date_range,
            "bullets": [b.to_dict() for b in self.bullets],
        }


@dataclass
class FallbackItem:
    element_id: str
    category: ElementCategory
    text: str
    tier: int
    provenance: Provenance
    confidence: float | None = None
    source_chunk_id: str | None = None

    def to_dict(self) -> dict:
        return {
            "element_id": self.element_id,
            "category": self.category.value,
            "text": self.text,
            "tier": self.tier,
            "provenance": self.provenance.value,
            "confidence": self.confidence,
            "source_chunk_id": self.source_chunk_id,
        }


@dataclass
class GuardrailFinding:
    code: str
    message: str
    location: str
    action: str

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "message": self.message,
            "location": self.location,
            "action": self.action,
        }


@dataclass
class ReviewVerdict:
    status: str
    issues: list[str] = field(default_factory=list)
    failed_open: bool = False

    @property
    def needs_rewrite(self) -> bool:
        return self.status == "needs_rewrite"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "issues": list(self.issues),
            "failed_open": self.failed_open,
        }


@dataclass
class Draft:
    summary: str = ""
    entries: list[DraftEntry] = field(default_factory=list)
    highlights: list[FallbackItem] = field(default_factory=list)
    static_sections: list[Section] = field(default_factory=list)
    section_order: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "summary": self.summary,
            "entries": [e.to_dict() for e in self.entries],
            "highlights": [h.to_dict() for h in self.highlights],
            "static_sections": [
                {"kind": s.kind.value, "heading": s.heading, "lines": list(s.lines)}
                for s in self.static_sections
            ],
            "section_order": [list(pair) for pair in self.section_order],
        }

    def vault_bullets(self) -> list[DraftBullet]:
        return [b for e in self.entries for b in e.bullets if b.provenance.is_vault]


# --- rewrite + summary --------------------------------------------------------


def rewrite_snippets(
    kept: list[ScoredSnippet],
    jd: JdAnalysis,
    gateway,
    *,
    employers: dict[str, str],
) -> list[DraftBullet]:
    """Rewrite each retained snippet into a single tailored bullet.

    The model is asked to rephrase only — the payload is the snippet text and
    the constraint block forbids new employers, tools, or numbers. With chat
    disabled, snippets pass through verbatim; a gateway failure also falls
    back to the original text (the screen downstream still applies either way).
    """
    bullets: list[DraftBullet] = []
    for snippet in kept:
        text = snippet.text
        if gateway.chat_enabled:
            request = ChatRequest.for_schema(
                "rewrite",
                payload=snippet.text,
                instructions=(
                    f"Target role: {jd.role_title}. "
                    f"Matched elements: {', '.join(snippet.matched_elements)}."
                ),
                forbidden=["new employers", "new tools", "new numbers"],
            )
            try:
                text = gateway.chat(request).text.strip() or snippet.text
            except GatewayError:
                logger.warning("rewrite failed for %s; keeping original text", snippet.chunk_id)
                text = snippet.text
        provenance = PROVENANCE_BY_COLLECTION.get(snippet.collection, Provenance.VAULT_RESUME)
        bullets.append(
            DraftBullet(
                text=text,
                provenance=provenance,
                confidence=snippet.score.confidence,
                source_chunk_id=snippet.chunk_id,
                source_employer=employers.get(snippet.chunk_id),
            )
        )
    return bullets


def compose_summary(jd: JdAnalysis, kept: list[ScoredSnippet], base_doc: ResumeDoc) -> str:
    """Deterministic seed text for the summary node.

    Phrased to survive its own guardrails: the role title leads the sentence
    (never preceded by "for", which the org screen watches), employers appear
    only after "at", and no bare digits are introduced.
    """
    employers = []
    for entry in base_doc.experience_entries():
        if entry.employer not in employers:
            employers.append(entry.employer)
    skills = [e.text for e in jd.elements if e.category == ElementCategory.SKILL][:4]
    first = f"{jd.role_title} candidate" if jd.role_title else "Experienced candidate"
    if employers:
        first += " with experience at " + ", ".join(employers[:3])
    sentences = [first + "."]
    if skills:
        sentences.append("Core strengths include " + ", ".join(skills) + ".")
    if kept:
        sentences.append("Recent achievements from prior roles align with this posting.")
    return " ".join(sentences)


def write_summary(jd: JdAnalysis, kept: list[ScoredSnippet], base_doc: ResumeDoc, gateway) -> str:
    seed = compose_summary(jd, kept, base_doc)
    if not gateway.chat_enabled:
        return seed
    request = ChatRequest.for_schema(
        "summary",
        payload=seed,
        instructions=f"Target role: {jd.role_title}.",
        forbidden=["employers not present in the payload", "invented metrics"],
    )
    try:
        return gateway.chat(request).text.strip() or seed
    except GatewayError:
        logger.warning("summary generation failed; using composed seed text")
        return seed


# --- fallback ladder -----------------------------------------------------------


def uncovered_elements(jd: JdAnalysis, kept: list[ScoredSnippet]) -> list[JdElement]:
    covered: set[str] = set()
    for snippet in kept:
        covered.update(snippet.matched_elements)
    return [e for e in jd.elements if e.element_id not in covered]


def fallback_for(
    elements: list[JdElement],
    dropped: list[ScoredSnippet],
    gateway,
    *,
    tau: float,
    tau_fallback: float,
) -> list[FallbackItem]:
    """Produce exactly one coverage item per uncovered element.

    Tier 1 reuses the best already-scored snippet whose confidence landed in
    [tau_fallback, tau) for that element — no new retrieval happens here.
    Tier 2 asks the chat model for a cautious one-liner; tier 3 is a fixed
    template. Each tier is tried in order and the first success wins.
    """
    items: list[FallbackItem] = []
    for element in elements:
        candidates = [
            s
            for s in dropped
            if element.element_id in s.matched_elements
            and tau_fallback <= s.score.confidence < tau
        ]
        if candidates:
            best = max(candidates, key=lambda s: (s.score.confidence, s.chunk_id))
            items.append(
                FallbackItem(
                    element_id=element.element_id,
                    category=element.category,
                    text=best.text,
                    tier=1,
                    provenance=Provenance.FALLBACK_VAULT,
                    confidence=best.score.confidence,
                    source_chunk_id=best.chunk_id,
                )
            )
            continue
        template_text = FALLBACK_TEMPLATES[element.category].format(text=element.text)
        if gateway.chat_enabled:
            request = ChatRequest.for_schema(
                "fallback",
                payload=template_text,
                instructions=f"Uncovered {element.category.value}: {element.text}",
                forbidden=["claiming direct experience", "employers", "metrics"],
            )
            try:
                text = gateway.chat(request).text.strip() or template_text
                items.append(
                    FallbackItem(
                        element_id=element.element_id,
                        category=element.category,
                        text=text,
                        tier=2,
                        provenance=Provenance.FALLBACK_LLM,
                    )
                )
                continue
            except GatewayError:
                logger.warning("tier-2 fallback failed for %s; using template", element.element_id)
        items.append(
            FallbackItem(
                element_id=element.element_id,
                category=element.category,
                text=template_text,
                tier=3,
                provenance=Provenance.FALLBACK_TEMPLATE,
            )
        )
    return items


# --- assembly -------------------------------------------------------------------


def _match_entry(entries: list[DraftEntry], employer: str | None) -> DraftEntry | None:
    if not employer:
        return None
    best: DraftEntry | None = None
    best_ratio = 0.0
    for entry in entries:
        ratio = partial_ratio(employer, entry.employer)
        if ratio >= EMPLOYER_MATCH_RATIO and ratio > best_ratio:
            best, best_ratio = entry, ratio
    return best


def assemble(
    base_doc: ResumeDoc,
    summary: str,
    rewritten: list[DraftBullet],
    fallback_items: list[FallbackItem],
) -> Draft:
    """Merge base resume, rewritten vault bullets, and fallback items.

    Vault bullets join the experience entry whose employer fuzzy-matches
    their source chunk's employer; those with no matching entry — and every
    fallback item, regardless of tier — go to the highlights list, which is
    never rendered inside an experience entry.
    """
    draft = Draft(summary=summary)
    for section in base_doc.sections:
        draft.section_order.append((section.kind.value, section.heading))
        if section.kind == SectionKind.EXPERIENCE:
            for entry in section.entries:
                draft.entries.append(
                    DraftEntry(
                        employer=entry.employer,
                        title=entry.title,
                        date_range=entry.date_range,
                        bullets=[DraftBullet(text=b) for b in entry.bullets],
                    )
                )
        elif section.kind != SectionKind.SUMMARY:
            draft.static_sections.append(
                Section(kind=section.kind, heading=section.heading, lines=list(section.lines))
            )
    if not any(kind == SectionKind.SUMMARY.value for kind, _ in draft.section_order):
        draft.section_order.insert(0, (SectionKind.SUMMARY.value, "Summary"))

    for bullet in rewritten:
        if not bullet.provenance.is_vault:
            raise ValueError(f"non-vault bullet {bullet.source_chunk_id} offered to entries")
        target = _match_entry(draft.entries, bullet.source_employer)
        if target is not None:
            target.bullets.append(bullet)
        else:
            draft.highlights.append(
                FallbackItem(
                    element_id="",
                    category=ElementCategory.RESPONSIBILITY,
                    text=bullet.text,
                    tier=0,
                    provenance=bullet.provenance,
                    confidence=bullet.confidence,
                    source_chunk_id=bullet.source_chunk_id,
                )
            )
    draft.highlights.extend(fallback_items)
    return draft


# --- guardrails -----------------------------------------------------------------

_ORG_SUFFIXES = ("Inc", "Corp", "LLC", "Ltd")
# The preposition matches case-insensitively but the org token itself must
# be TitleCase, hence the inline flag group.
_PRECEDED_ORG_RE = re.compile(
    r"\b(?i:at|for|with|joined)\s+(?P<org>[A-Z][\w&.'-]*(?:\s+[A-Z][\w&.'-]*)*)"
)
_SUFFIX_ORG_RE = re.compile(
    r"(?P<org>(?:[A-Z][\w&.'-]*\s+)*(?:" + "|".join(_ORG_SUFFIXES) + r")\.?)(?=\s|$|[,.;:])"
)
_METRIC_RE = re.compile(
    r"(?<![\w.])(?:\$\s?\d[\d,]*(?:\.\d+)?|\d[\d,]*(?:\.\d+)?\s?%|\d[\d,]*(?:\.\d+)?)(?!\w)"
)
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_CLAUSE_SPLIT_RE = re.compile(r"(?<=[.;,])\s+")


def _org_candidates(text: str) -> list[str]:
    candidates = []
    for match in _PRECEDED_ORG_RE.finditer(text):
        org = match.group("org").rstrip(".,;:")
        words = org.split()
        # Single all-caps tokens are acronyms (SQL, AWS), and lone words after
        # the loose prepositions for/with are usually tools, not employers.
        if len(words) == 1:
            if words[0].isupper():
                continue
            lead = match.group(0).split()[0].lower()
            if lead in ("for", "with"):
                continue
        candidates.append(org)
    for match in _SUFFIX_ORG_RE.finditer(text):
        org = match.group("org").rstrip(".,;:")
        if len(org.split()) > 1:
            candidates.append(org)
    return candidates


def _employer_allowed(candidate: str, allowlist: list[str]) -> bool:
    return any(partial_ratio(candidate, employer) >= EMPLOYER_MATCH_RATIO for employer in allowlist)


def _metric_tokens(text: str) -> set[str]:
    return {m.group(0).replace(",", "").replace(" ", "") for m in _METRIC_RE.finditer(text)}


def guardrails_check(
    draft: Draft,
    *,
    allowlist: list[str],
    sources_by_employer: dict[str, list[str]],
    term_safelist: list[str] | tuple[str, ...] = (),
    element_texts: dict[str, str] | None = None,
) -> tuple[Draft, list[GuardrailFinding]]:
    """Screen the draft against its evidence. Fail-closed.

    Employer names (or org-like tokens) that don't fuzzy-match the allowlist
    remove the whole bullet / summary sentence; numeric, percent, or currency
    tokens with no support in same-employer source texts remove the clause
    and flag the bullet. Highlights get the same org screen; their metric
    pool additionally admits the JD element they cover (a hedged template
    quoting "3+ years SQL" sources that number from the posting itself), and
    verbatim vault items are their own evidence. TitleCase tool names are
    exempted from the org screen via term_safelist. Formatting findings flag
    unmappable non-ASCII and empty sections without changing text (polish
    handles normalization).
    """
    findings: list[GuardrailFinding] = []
    org_allowed = list(allowlist) + list(term_safelist)
    element_texts = element_texts or {}
    all_sources = [text for texts in sources_by_employer.values() for text in texts]
    source_metrics_all = set()
    for text in all_sources:
        source_metrics_all |= _metric_tokens(text)

    # summary: drop sentences naming unknown orgs, then clauses with
    # unsupported metrics (summary evidence pool = every source text).
    kept_sentences = []
    for sentence in _SENTENCE_SPLIT_RE.split(draft.summary):
        if not sentence.strip():
            continue
        bad_org = next(
            (c for c in _org_candidates(sentence) if not _employer_allowed(c, org_allowed)), None
        )
        if bad_org is not None:
            findings.append(
                GuardrailFinding(
                    code="fabricated_employer",
                    message=f"summary names unknown organization {bad_org!r}",
                    location="summary",
                    action="removed_sentence",
                )
            )
            continue
        unsupported = _metric_tokens(sentence) - source_metrics_all
        if unsupported:
            findings.append(
                GuardrailFinding(
                    code="unsupported_metric",
                    message=f"summary metric(s) {sorted(unsupported)} lack source support",
                    location="summary",
                    action="removed_sentence",
                )
            )
            continue
        kept_sentences.append(sentence.strip())
    draft.summary = " ".join(kept_sentences)

    surviving_entries = []
    for entry_idx, entry in enumerate(draft.entries):
        location_entry = f"entries[{entry_idx}]"
        if not _employer_allowed(entry.employer, allowlist):
            findings.append(
                GuardrailFinding(
                    code="fabricated_employer",
                    message=f"entry employer {entry.employer!r} is not in the evidence allowlist",
                    location=location_entry,
                    action="removed_entry",
                )
            )
            continue
        entry_sources = sources_by_employer.get(fold(entry.employer), [])
        entry_metrics = set()
        for text in entry_sources:
            entry_metrics |= _metric_tokens(text)
        kept_bullets = []
        for bullet_idx, bullet in enumerate(entry.bullets):
            location = f"{location_entry}.bullets[{bullet_idx}]"
            bad_org = next(
                (c for c in _org_candidates(bullet.text) if not _employer_allowed(c, org_allowed)),
                None,
            )
            if bad_org is not None:
                findings.append(
                    GuardrailFinding(
                        code="fabricated_employer",
                        message=f"bullet names unknown organization {bad_org!r}",
                        location=location,
                        action="removed_bullet",
                    )
                )
                continue
            unsupported = _metric_tokens(bullet.text) - entry_metrics
            if unsupported:
                clauses = _CLAUSE_SPLIT_RE.split(bullet.text)
                kept_clauses = [c for c in clauses if not (_metric_tokens(c) - entry_metrics)]
                new_text = " ".join(kept_clauses).strip().strip(",;").strip()
                findings.append(
                    GuardrailFinding(
                        code="unsupported_metric",
                        message=f"metric(s) {sorted(unsupported)} lack same-employer support",
                        location=location,
                        action="removed_clause" if new_text else "removed_bullet",
                    )
                )
                if not new_text:
                    continue
                bullet.text = new_text
                bullet.flags.append("unsupported_metric")
            kept_bullets.append(bullet)
        entry.bullets = kept_bullets
        surviving_entries.append(entry)
    draft.entries = surviving_entries

    # highlights: same org screen; metric pool = all sources + the covered
    # JD element's own text; verbatim vault items are their own evidence.
    kept_items = []
    for item_idx, item in enumerate(draft.highlights):
        location = f"highlights[{item_idx}]"
        allowed_metrics = source_metrics_all | _metric_tokens(
            element_texts.get(item.element_id, "")
        )
        check_metrics = item.source_chunk_id is None
        kept_parts = []
        for sentence in _SENTENCE_SPLIT_RE.split(item.text):
            if not sentence.strip():
                continue
            bad_org = next(
                (c for c in _org_candidates(sentence) if not _employer_allowed(c, org_allowed)),
                None,
            )
            if bad_org is not None:
                findings.append(
                    GuardrailFinding(
                        code="fabricated_employer",
                        message=f"highlight names unknown organization {bad_org!r}",
                        location=location,
                        action="removed_sentence",
                    )
                )
                continue
            if check_metrics:
                unsupported = _metric_tokens(sentence) - allowed_metrics
                if unsupported:
                    findings.append(
                        GuardrailFinding(
                            code="unsupported_metric",
                            message=f"highlight metric(s) {sorted(unsupported)} lack support",
                            location=location,
                            action="removed_sentence",
                        )
                    )
                    continue
            kept_parts.append(sentence.strip())
        if kept_parts:
            item.text = " ".join(kept_parts)
            kept_items.append(item)
    draft.highlights = kept_items

    for text, location in _draft_texts(draft):
        _, unmapped = ascii_normalize(text)
        if unmapped:
            findings.append(
                GuardrailFinding(
                    code="formatting",
                    message=f"{unmapped} non-ASCII character(s) have no ASCII mapping",
                    location=location,
                    action="flagged",
                )
            )
    for entry_idx, entry in enumerate(draft.entries):
        if not entry.bullets:
            findings.append(
                GuardrailFinding(
                    code="formatting",
                    message=f"entry {entry.employer!r} has no bullets left",
                    location=f"entries[{entry_idx}]",
                    action="flagged",
                )
            )
    for section in draft.static_sections:
        if not section.lines:
            findings.append(
                GuardrailFinding(
                    code="formatting",
                    message=f"section {section.heading!r} is empty",
                    location=f"section:{section.heading}",
                    action="flagged",
                )
            )
    return draft, findings


def _draft_texts(draft: Draft):
    yield draft.summary, "summary"
    for entry_idx, entry in enumerate(draft.entries):
        for bullet_idx, bullet in enumerate(entry.bullets):
            yield bullet.text, f"entries[{entry_idx}].bullets[{bullet_idx}]"
    for item_idx, item in enumerate(draft.highlights):
        yield item.text, f"highlights[{item_idx}]"
    for section in draft.static_sections:
        for line in section.lines:
            yield line, f"section:{section.heading}"


# --- polish ---------------------------------------------------------------------


def polish(draft: Draft) -> Draft:
    """Dedupe near-identical bullets, order by confidence, normalize to ASCII.

    Within an entry, a bullet whose text partial-ratios >= 90 against an
    earlier bullet is dropped (earlier wins). Ordering key is (-confidence,
    original index) with non-retrieved bullets pinned at confidence 1.0, so
    base bullets keep their order ahead of retrieved ones.
    """
    for entry in draft.entries:
        survivors: list[DraftBullet] = []
        for bullet in entry.bullets:
            if any(partial_ratio(bullet.text, prior.text) >= DEDUPE_RATIO for prior in survivors):
                continue
            survivors.append(bullet)
        decorated = list(enumerate(survivors))
        decorated.sort(
            key=lambda pair: (
                -(pair[1].confidence if pair[1].confidence is not None else 1.0),
                pair[0],
            )
        )
        entry.bullets = [b for _, b in decorated]
        entry.employer = ascii_normalize(entry.employer)[0]
        entry.title = ascii_normalize(entry.title)[0]
        entry.date_range = ascii_normalize(entry.date_range)[0]
        for bullet in entry.bullets:
            bullet.text = ascii_normalize(bullet.text)[0]
    draft.summary = ascii_normalize(draft.summary)[0]
    for item in draft.highlights:
        item.text = ascii_normalize(item.text)[0]
    for section in draft.static_sections:
        section.lines = [ascii_normalize(line)[0] for line in section.lines]
        section.heading = ascii_normalize(section.heading)[0]
    return draft


# --- holistic review --------------------------------------------------------------


def holistic_review(draft: Draft, jd: JdAnalysis, gateway) -> ReviewVerdict:
    """Ask the reviewer for an ok / needs_rewrite verdict. Fails open."""
    digest = {
        "role": jd.role_title,
        "summary": draft.summary,
        "entries": [
            {"employer": e.employer, "bullets": [b.text for b in e.bullets]}
            for e in draft.entries
        ],
        "highlights": [h.text for h in draft.highlights],
    }
    request = ChatRequest.for_schema(
        "review",
        payload=json.dumps(digest, sort_keys=True),
        instructions="Return JSON: {\"status\": \"ok\"|\"needs_rewrite\", \"issues\": [...]}",
        forbidden=[],
    )
    try:
        raw = gateway.chat(request).text
    except GatewayError as exc:
        logger.warning("holistic review unavailable (%s); failing open", exc)
        return ReviewVerdict(status="ok", issues=["review_unavailable"], failed_open=True)
    try:
        obj = json.loads(raw)
        status = obj["status"]
        if status not in ("ok", "needs_rewrite"):
            raise ValueError(f"bad status {status!r}")
        issues = [str(i) for i in obj.get("issues", [])]
    except (ValueError, KeyError, TypeError) as exc:
        logger.warning("review response unparseable (%s); failing open", exc)
        return ReviewVerdict(status="ok", issues=["review_unparseable"], failed_open=True)
    return ReviewVerdict(status=status, issues=issues)


# --- rendering --------------------------------------------------------------------


def _section_heading(draft: Draft, kind: str, fallback: str) -> str:
    for k, heading in draft.section_order:
        if k == kind and heading:
            return heading
    return fallback


def render_txt(draft: Draft) -> str:
    lines: list[str] = []
    if draft.summary:
        lines += [_section_heading(draft, "summary", "Summary").upper(), draft.summary, ""]
    for section in draft.static_sections:
        if section.kind == SectionKind.SKILLS:
            lines += [section.heading.upper() or "SKILLS"]
            lines += [f"  - {line}" for line in section.lines]
            lines.append("")
    if draft.entries:
        lines.append(_section_heading(draft, "experience", "Experience").upper())
        for entry in draft.entries:
            header = entry.employer
            if entry.title:
                header += f" - {entry.title}"
            if entry.date_range:
                header += f" ({entry.date_range})"
            lines.append(header)
            lines += [f"  - {bullet.text}" for bullet in entry.bullets]
            lines.append("")
    for section in draft.static_sections:
        if section.kind == SectionKind.SKILLS:
            continue
        lines.append((section.heading or section.kind.value).upper())
        lines += [f"  - {line}" for line in section.lines]
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def render_html(draft: Draft) -> str:
    esc = html_lib.escape
    parts: list[str] = ['<article class="resume">']
    if draft.summary:
        parts.append(f"<section><h2>{esc(_section_heading(draft, 'summary', 'Summary'))}</h2>")
        parts.append(f"<p>{esc(draft.summary)}</p></section>")
    for section in draft.static_sections:
        if section.kind != SectionKind.SKILLS:
            continue
        parts.append(f"<section><h2>{esc(section.heading or 'Skills')}</h2><ul>")
        parts += [f"<li>{esc(line)}</li>" for line in section.lines]
        parts.append("</ul></section>")
    if draft.entries:
        parts.append(
            f"<section><h2>{esc(_section_heading(draft, 'experience', 'Experience'))}</h2>"
        )
        for entry in draft.entries:
            title = f" — {esc(entry.title)}" if entry.title else ""
            dates = f" <span class=\"dates\">({esc(entry.date_range)})</span>" if entry.date_range else ""
            parts.append(f"<h3>{esc(entry.employer)}{title}{dates}</h3><ul>")
            parts += [f"<li>{esc(bullet.text)}</li>" for bullet in entry.bullets]
            parts.append("</ul>")
        parts.append("</section>")
    for section in draft.static_sections:
        if section.kind == SectionKind.SKILLS:
            continue
        parts.append(f"<section><h2>{esc(section.heading or section.kind.value)}</h2><ul>")
        parts += [f"<li>{esc(line)}</li>" for line in section.lines]
        parts.append("</ul></section>")
    parts.append("</article>")
    return "\n".join(parts) + "\n"


_TIER_LABELS = {0: "vault (no matching entry)", 1: "vault evidence", 2: "generated", 3: "template"}


def render_markdown_bundle(draft: Draft, findings: list[GuardrailFinding] | None = None) -> str:
    """Review bundle: the resume plus a labeled appendix of highlights and
    screening findings. The only format that shows fallback content."""
    lines: list[str] = []
    if draft.summary:
        lines += [f"## {_section_heading(draft, 'summary', 'Summary')}", "", draft.summary, ""]
    for section in draft.static_sections:
        if section.kind != SectionKind.SKILLS:
            continue
        lines += [f"## {section.heading or 'Skills'}", ""]
        lines += [f"- {line}" for line in section.lines]
        lines.append("")
    if draft.entries:
        lines += [f"## {_section_heading(draft, 'experience', 'Experience')}", ""]
        for entry in draft.entries:
            if entry.title:
                lines.append(f"### {entry.employer} — {entry.title} ({entry.date_range})")
            else:
                lines.append(f"### {entry.employer}")
            for bullet in entry.bullets:
                suffix = ""
                if bullet.provenance.is_vault and bullet.confidence is not None:
                    suffix = f" *(vault, confidence {bullet.confidence:.2f})*"
                lines.append(f"- {bullet.text}{suffix}")
            lines.append("")
    for section in draft.static_sections:
        if section.kind == SectionKind.SKILLS:
            continue
        lines += [f"## {section.heading or section.kind.value.title()}", ""]
        lines += [f"- {line}" for line in section.lines]
        lines.append("")
    if draft.highlights:
        lines += ["## Tailored Highlights (review only — not rendered in final output)", ""]
        for item in draft.highlights:
            label = _TIER_LABELS.get(item.tier, f"tier {item.tier}")
            conf = f", confidence {item.confidence:.2f}" if item.confidence is not None else ""
            lines.append(f"- [{label}{conf}] {item.text}")
        lines.append("")
    if findings:
        # Codes and locations only — messages can quote the very strings the
        # screen removed, which must not reappear in any rendered output.
        lines += ["## Screening Findings", ""]
        for finding in findings:
            lines.append(f"- **{finding.code}** at `{finding.location}` ({finding.action})")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


RENDERERS = {
    "txt": render_txt,
    "html": render_html,
    "markdown": render_markdown_bundle,
}


def render(draft: Draft, format: str, findings: list[GuardrailFinding] | None = None) -> str:
    if format == "markdown":
        return render_markdown_bundle(draft, findings)
    try:
        renderer = RENDERERS[format]
    except KeyError:
        raise ValueError(f"unknown render format {format!r}") from None
    return renderer(draft)
