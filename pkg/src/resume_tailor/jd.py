"""Job-description analysis: deterministic extraction of typed elements.

Extraction is rule-based so the whole suite is reproducible without a
model: lines group under the nearest preceding recognized header, bullets
under a responsibilities-style header become responsibility elements,
bullets under a requirements-style header become qualification elements,
and every skill-lexicon term found anywhere (case-insensitive, word
boundaries) yields one deduplicated skill element. An optional
model-assisted mode (:func:`llm_extract`) is validated against the raw text
and falls back to the rules on any gateway failure.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING

from resume_tailor.errors import EmptyJd, GatewayError
from resume_tailor.textnorm import fold

if TYPE_CHECKING:
    from resume_tailor.gateway import Gateway


class ElementCategory(str, Enum):
    SKILL = "skill"
    RESPONSIBILITY = "responsibility"
    QUALIFICATION = "qualification"


@dataclass(frozen=True)
class JdElement:
    element_id: str
    category: ElementCategory
    text: str
    source_line: int


@dataclass
class JdAnalysis:
    jd_id: str
    role_title: str | None
    elements: list[JdElement]
    raw_hash: str

    def by_category(self, category: ElementCategory) -> list[JdElement]:
        return [e for e in self.elements if e.category == category]


_RESP_HEADERS = {"responsibilities", "what you'll do", "the role", "duties"}
_QUAL_HEADERS = {
    "requirements",
    "qualifications",
    "what you bring",
    "minimum qualifications",
    "preferred qualifications",
}

_BULLET_RE = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s+(.*\S)\s*$")


def _header_kind(line: str) -> ElementCategory | None:
    stripped = fold(line.lstrip("#").rstrip().rstrip(":"))
    if stripped in _RESP_HEADERS:
        return ElementCategory.RESPONSIBILITY
    if stripped in _QUAL_HEADERS:
        return ElementCategory.QUALIFICATION
    return None


def load_lexicon(path: str | Path | None = None) -> list[str]:
    """Read a skill lexicon: one term per line, '#' comments, UTF-8."""
    if path is None:
        text = resources.files("resume_tailor.data").joinpath("skill_lexicon.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    terms = []
    for line in text.splitlines():
        term = line.strip()
        if term and not term.startswith("#"):
            terms.append(term)
    return terms


def _term_pattern(term: str) -> re.Pattern[str]:
    # \b misbehaves next to non-word characters ("C++", ".NET"); use
    # alphanumeric lookarounds instead.
    return re.compile(
        r"(?<![A-Za-z0-9])" + re.escape(term) + r"(?![A-Za-z0-9])", re.IGNORECASE
    )


def extract_elements(jd_text: str, skill_lexicon: list[str] | None = None) -> JdAnalysis:
    """Extract typed elements from JD text with the deterministic rules."""
    if not jd_text.strip():
        raise EmptyJd("job description is empty")
    lexicon = skill_lexicon if skill_lexicon is not None else load_lexicon()

    role_title: str | None = None
    current: ElementCategory | None = None
    # (category, text, source_line) for bullets, in reading order
    bullets: list[tuple[ElementCategory, str, int]] = []
    open_bullet = -1

    for lineno, raw_line in enumerate(jd_text.splitlines(), start=1):
        line = raw_line.rstrip()
        if not line.strip():
            open_bullet = -1
            continue
        if role_title is None:
            role_title = line.strip()
        header = _header_kind(line)
        if header is not None:
            current = header
            open_bullet = -1
            continue
        m = _BULLET_RE.match(line)
        if m:
            category = current if current is not None else ElementCategory.RESPONSIBILITY
            bullets.append((category, m.group(1), lineno))
            open_bullet = len(bullets) - 1
        elif open_bullet >= 0:
            # wrapped bullet line: join onto the open bullet
            cat, text, src = bullets[open_bullet]
            bullets[open_bullet] = (cat, text + " " + line.strip(), src)

    # skill elements: one per lexicon term present, ordered by first occurrence
    skills: list[tuple[str, int, int]] = []  # (term, position, source_line)
    for term in lexicon:
        m = _term_pattern(term).search(jd_text)
        if m:
            source_line = jd_text.count("\n", 0, m.start()) + 1
            skills.append((term, m.start(), source_line))
    skills.sort(key=lambda item: (item[1], item[0]))

    elements: list[JdElement] = []
    for category, text, lineno in bullets:
        elements.append(
            JdElement(f"e{len(elements):03d}", category, text, lineno)
        )
    for term, _, lineno in skills:
        elements.append(
            JdElement(f"e{len(elements):03d}", ElementCategory.SKILL, term, lineno)
        )

    raw_hash = hashlib.sha256(jd_text.encode("utf-8")).hexdigest()
    return JdAnalysis(
        jd_id=raw_hash[:12],
        role_title=role_title,
        elements=elements,
        raw_hash=raw_hash,
    )


def llm_extract(jd_text: str, gateway: Gateway, skill_lexicon: list[str] | None = None) -> JdAnalysis:
    """Model-assisted extraction, validated against the raw JD text.

    Elements whose text does not occur in the JD (after folding and ASCII
    normalization) are dropped. Any gateway failure, including an
    unparseable response, falls back to :func:`extract_elements`.
    """
    from resume_tailor.gateway import ChatRequest  # local import avoids a cycle
    from resume_tailor.textnorm import ascii_normalize

    if not jd_text.strip():
        raise EmptyJd("job description is empty")
    request = ChatRequest.for_schema(
        "jd_extract",
        payload=jd_text,
        instructions=(
            "Extract job-description elements as a JSON array of objects "
            'with keys "category" (skill|responsibility|qualification) and '
            '"text". Copy text verbatim from the posting; do not invent.'
        ),
    )
    try:
        response = gateway.chat(request)
        parsed = json.loads(response.text)
        if not isinstance(parsed, list):
            raise ValueError("expected a JSON array")
    except (GatewayError, ValueError):
        return extract_elements(jd_text, skill_lexicon)

    normalized_jd = fold(ascii_normalize(jd_text)[0])
    role_title = next(
        (line.strip() for line in jd_text.splitlines() if line.strip()), None
    )
    elements: list[JdElement] = []
    for item in parsed:
        if not isinstance(item, dict):
            continue
        text = str(item.get("text", "")).strip()
        try:
            category = ElementCategory(item.get("category"))
        except ValueError:
            continue
        if not text:
            continue
        if fold(ascii_normalize(text)[0]) not in normalized_jd:
            continue  # not grounded in the JD: dropped
        elements.append(JdElement(f"e{len(elements):03d}", category, text, 0))

    raw_hash = hashlib.sha256(jd_text.encode("utf-8")).hexdigest()
    return JdAnalysis(
        jd_id=raw_hash[:12],
        role_title=role_title,
        elements=elements,
        raw_hash=raw_hash,
    )
