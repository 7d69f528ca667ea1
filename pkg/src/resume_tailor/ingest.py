"""Parsing of source documents into normalized resumes and vault-ready chunks.

Inputs are pre-extracted plain text / Markdown resumes and CSV/XML career
records (binary PDF/DOCX parsing is out of scope). Section headings are
matched against a fixed lexicon; unmatched content lands in an "other"
section. Experience entries split on the employer-line pattern
``Employer — Title (dates)`` (em-dash, en-dash, ``--`` or ``-`` separators)
or Markdown ``### Employer`` headings.

Chunking emits a four-level tree per document: one document chunk, one
section chunk per section, one entry chunk per experience entry, one bullet
chunk per bullet. Chunk ids are positional paths (``{doc_id}/s0/e1/b2``) so
identical input bytes always produce identical ids, and parent links are
checkable by string prefix.
"""

from __future__ import annotations

import csv
import io
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum

from resume_tailor.errors import EmptyDocument, RowError, SchemaMismatch
from resume_tailor.textnorm import fold


class DocKind(str, Enum):
    RESUME_HISTORY = "resume_history"
    CAREER_RECORD = "career_record"
    GENERATED = "generated"
    TARGET_RESUME = "target_resume"


class DocFormat(str, Enum):
    PLAINTEXT = "plaintext"
    MARKDOWN = "markdown"
    CSV = "csv"
    XML = "xml"


class SectionKind(str, Enum):
    SUMMARY = "summary"
    SKILLS = "skills"
    EXPERIENCE = "experience"
    EDUCATION = "education"
    PROJECTS = "projects"
    OTHER = "other"


class ChunkLevel(str, Enum):
    DOCUMENT = "document"
    SECTION = "section"
    ENTRY = "entry"
    BULLET = "bullet"

    @property
    def depth(self) -> int:
        return _LEVEL_DEPTH[self]


_LEVEL_DEPTH = {
    ChunkLevel.DOCUMENT: 0,
    ChunkLevel.SECTION: 1,
    ChunkLevel.ENTRY: 2,
    ChunkLevel.BULLET: 3,
}


@dataclass
class SourceDocument:
    doc_id: str
    kind: DocKind
    title: str
    format: DocFormat
    raw: str
    dated: str | None = None

    def __post_init__(self) -> None:
        if not self.raw.strip():
            raise EmptyDocument(f"document {self.doc_id!r} is empty")
        if self.kind == DocKind.CAREER_RECORD and self.format not in (
            DocFormat.CSV,
            DocFormat.XML,
        ):
            raise ValueError("career_record documents must be csv or xml")


@dataclass
class ExperienceEntry:
    employer: str
    title: str
    date_range: str
    bullets: list[str] = field(default_factory=list)


@dataclass
class Section:
    kind: SectionKind
    heading: str
    entries: list[ExperienceEntry] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)


@dataclass
class ResumeDoc:
    sections: list[Section] = field(default_factory=list)
    source: str = ""

    def experience_entries(self) -> list[ExperienceEntry]:
        return [
            entry
            for section in self.sections
            if section.kind == SectionKind.EXPERIENCE
            for entry in section.entries
        ]


@dataclass
class Chunk:
    chunk_id: str
    doc_id: str
    section_kind: SectionKind
    level: ChunkLevel
    parent_id: str | None
    text: str
    employer: str | None = None
    metadata: dict[str, str] = field(default_factory=dict)


# --- resume parsing ----------------------------------------------------------

_HEADING_KINDS = {
    "summary": SectionKind.SUMMARY,
    "profile": SectionKind.SUMMARY,
    "skills": SectionKind.SKILLS,
    "experience": SectionKind.EXPERIENCE,
    "work experience": SectionKind.EXPERIENCE,
    "employment": SectionKind.EXPERIENCE,
    "education": SectionKind.EDUCATION,
    "projects": SectionKind.PROJECTS,
}

_ENTRY_RE = re.compile(
    r"^(?P<employer>.+?)\s+(?:—|–|--|-)\s+(?P<title>.+?)\s*"
    r"\((?P<dates>[^()]*)\)\s*$"
)
_BULLET_RE = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s+(.*\S)\s*$")
_MD_ENTRY_RE = re.compile(r"^###\s+(?P<rest>.*\S)\s*$")


def _heading_kind(line: str) -> SectionKind | None:
    text = line.strip()
    if text.startswith("#"):
        text = text.lstrip("#")
    text = fold(text.strip().rstrip(":"))
    return _HEADING_KINDS.get(text)


def _heading_text(line: str) -> str:
    return line.strip().lstrip("#").strip().rstrip(":").strip()


def _entry_from_text(text: str) -> ExperienceEntry:
    m = _ENTRY_RE.match(text)
    if m:
        return ExperienceEntry(
            employer=m.group("employer").strip(),
            title=m.group("title").strip(),
            date_range=m.group("dates").strip(),
        )
    return ExperienceEntry(employer=text.strip(), title="", date_range="")


def parse_resume_text(raw: str, format: DocFormat = DocFormat.MARKDOWN) -> ResumeDoc:
    """Parse plaintext/Markdown resume text into sections and entries.

    Raises EmptyDocument on whitespace-only input. Content before the first
    recognized heading goes into a heading-less "other" section; a second
    summary-lexicon heading is demoted to "other" so at most one summary
    section exists.
    """
    if format not in (DocFormat.PLAINTEXT, DocFormat.MARKDOWN):
        raise ValueError(f"parse_resume_text does not handle format {format}")
    if not raw.strip():
        raise EmptyDocument("resume text is empty")

    doc = ResumeDoc()
    section: Section | None = None
    entry: ExperienceEntry | None = None
    have_summary = False

    def ensure_section() -> Section:
        nonlocal section
        if section is None:
            section = Section(kind=SectionKind.OTHER, heading="")
            doc.sections.append(section)
        return section

    for raw_line in raw.splitlines():
        line = raw_line.rstrip()
        if not line.strip():
            continue
        kind = _heading_kind(line)
        if kind is not None:
            if kind == SectionKind.SUMMARY:
                if have_summary:
                    kind = SectionKind.OTHER
                else:
                    have_summary = True
            section = Section(kind=kind, heading=_heading_text(line))
            doc.sections.append(section)
            entry = None
            continue
        current = ensure_section()
        if current.kind == SectionKind.EXPERIENCE:
            md = _MD_ENTRY_RE.match(line)
            if md:
                entry = _entry_from_text(md.group("rest"))
                current.entries.append(entry)
                continue
            if not _BULLET_RE.match(line) and _ENTRY_RE.match(line.strip()):
                entry = _entry_from_text(line.strip())
                current.entries.append(entry)
                continue
            bullet = _BULLET_RE.match(line)
            if bullet:
                if entry is not None:
                    entry.bullets.append(bullet.group(1))
                continue
            if entry is not None and entry.bullets:
                # wrapped bullet continuation
                entry.bullets[-1] += " " + line.strip()
            continue
        item = _BULLET_RE.match(line)
        # renderers add their own list markers, so drop any the source had
        current.lines.append(item.group(1) if item else line.strip())

    return doc


# --- career records -----------------------------------------------------------

CAREER_CSV_COLUMNS = ["employer", "title", "start", "end", "category", "description", "skills"]


def _entry_from_record(values: dict[str, str], row: int) -> ExperienceEntry:
    employer = values["employer"].strip()
    if not employer:
        raise RowError(row, "employer is empty")
    bullets = [b.strip() for b in values["description"].split("; ") if b.strip()]
    return ExperienceEntry(
        employer=employer,
        title=values["title"].strip(),
        date_range=f"{values['start'].strip()}-{values['end'].strip()}",
        bullets=bullets,
    )


def parse_career_records(raw: str, format: DocFormat) -> list[ExperienceEntry]:
    """Parse structured career records from CSV or XML.

    CSV requires the exact header ``employer,title,start,end,category,
    description,skills`` (RFC-4180 quoting); XML uses ``<records>`` of
    ``<record>`` elements with same-named children. Descriptions split into
    bullets on "; ". Row indexes in errors are 1-based over data rows.
    """
    if not raw.strip():
        raise EmptyDocument("career record input is empty")
    if format == DocFormat.CSV:
        return _parse_career_csv(raw)
    if format == DocFormat.XML:
        return _parse_career_xml(raw)
    raise ValueError(f"career records must be csv or xml, got {format}")


def _parse_career_csv(raw: str) -> list[ExperienceEntry]:
    reader = csv.reader(io.StringIO(raw))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyDocument("career record CSV has no header") from None
    for expected in CAREER_CSV_COLUMNS:
        if expected not in header:
            raise SchemaMismatch(expected)
    if header != CAREER_CSV_COLUMNS:
        unexpected = [col for col in header if col not in CAREER_CSV_COLUMNS]
        detail = unexpected[0] if unexpected else ",".join(header)
        raise SchemaMismatch(f"header must be exactly {','.join(CAREER_CSV_COLUMNS)}; got {detail}")
    entries = []
    for row_index, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(CAREER_CSV_COLUMNS):
            raise RowError(row_index, f"expected {len(CAREER_CSV_COLUMNS)} fields, got {len(row)}")
        entries.append(_entry_from_record(dict(zip(CAREER_CSV_COLUMNS, row)), row_index))
    return entries


def _parse_career_xml(raw: str) -> list[ExperienceEntry]:
    try:
        root = ET.fromstring(raw)
    except ET.ParseError as exc:
        raise RowError(exc.position[0], f"malformed XML: {exc}") from exc
    if root.tag != "records":
        raise SchemaMismatch("records")
    entries = []
    for row_index, record in enumerate(root, start=1):
        if record.tag != "record":
            raise RowError(row_index, f"unexpected element <{record.tag}>")
        values = {}
        for column in CAREER_CSV_COLUMNS:
            node = record.find(column)
            if node is None:
                raise SchemaMismatch(column)
            values[column] = node.text or ""
        entries.append(_entry_from_record(values, row_index))
    return entries


# --- chunking ------------------------------------------------------------------

def _entry_text(entry: ExperienceEntry) -> str:
    parts = [entry.employer, entry.title, *entry.bullets]
    return " ".join(p for p in parts if p)


def _section_text(section: Section) -> str:
    if section.kind == SectionKind.EXPERIENCE:
        body = [_entry_text(e) for e in section.entries]
    else:
        body = section.lines
    return "\n".join(([section.heading] if section.heading else []) + body)


def chunkize(
    parsed: ResumeDoc | list[ExperienceEntry], doc_id: str, kind: DocKind
) -> list[Chunk]:
    """Emit the document/section/entry/bullet chunk tree for a parsed input.

    Career-record entry lists are wrapped in a single synthetic experience
    section. The resulting parent graph is validated as a single-rooted
    forest before returning.
    """
    if isinstance(parsed, list):
        doc = ResumeDoc(
            sections=[
                Section(kind=SectionKind.EXPERIENCE, heading="Experience", entries=parsed)
            ],
            source=doc_id,
        )
    else:
        doc = parsed

    chunks: list[Chunk] = []
    doc_text = "\n\n".join(_section_text(s) for s in doc.sections) or doc_id
    chunks.append(
        Chunk(
            chunk_id=doc_id,
            doc_id=doc_id,
            section_kind=SectionKind.OTHER,
            level=ChunkLevel.DOCUMENT,
            parent_id=None,
            text=doc_text,
            metadata={"kind": kind.value},
        )
    )
    for i, section in enumerate(doc.sections):
        section_id = f"{doc_id}/s{i}"
        chunks.append(
            Chunk(
                chunk_id=section_id,
                doc_id=doc_id,
                section_kind=section.kind,
                level=ChunkLevel.SECTION,
                parent_id=doc_id,
                text=_section_text(section),
                metadata={"heading": section.heading},
            )
        )
        for j, entry in enumerate(section.entries):
            entry_id = f"{section_id}/e{j}"
            chunks.append(
                Chunk(
                    chunk_id=entry_id,
                    doc_id=doc_id,
                    section_kind=section.kind,
                    level=ChunkLevel.ENTRY,
                    parent_id=section_id,
                    text=_entry_text(entry),
                    employer=entry.employer,
                    metadata={"title": entry.title, "date_range": entry.date_range},
                )
            )
            for k, bullet in enumerate(entry.bullets):
                chunks.append(
                    Chunk(
                        chunk_id=f"{entry_id}/b{k}",
                        doc_id=doc_id,
                        section_kind=section.kind,
                        level=ChunkLevel.BULLET,
                        parent_id=entry_id,
                        text=bullet,
                        employer=entry.employer,
                    )
                )
    validate_chunk_tree(chunks)
    return chunks


def validate_chunk_tree(chunks: list[Chunk]) -> None:
    """Check the parent graph: one root per document, parents exist and are
    strictly coarser, bullet parents are entries, texts non-empty."""
    by_id = {c.chunk_id: c for c in chunks}
    roots_per_doc: dict[str, int] = {}
    for chunk in chunks:
        if not chunk.text:
            raise ValueError(f"chunk {chunk.chunk_id} has empty text")
        if chunk.parent_id is None:
            if chunk.level != ChunkLevel.DOCUMENT:
                raise ValueError(f"non-document chunk {chunk.chunk_id} has no parent")
            roots_per_doc[chunk.doc_id] = roots_per_doc.get(chunk.doc_id, 0) + 1
            continue
        parent = by_id.get(chunk.parent_id)
        if parent is None:
            raise ValueError(f"chunk {chunk.chunk_id} references missing parent {chunk.parent_id}")
        if parent.level.depth >= chunk.level.depth:
            raise ValueError(
                f"chunk {chunk.chunk_id} parent {parent.chunk_id} is not strictly coarser"
            )
        if chunk.level == ChunkLevel.BULLET and parent.level != ChunkLevel.ENTRY:
            raise ValueError(f"bullet chunk {chunk.chunk_id} parent is not an entry")
    for doc_id, count in roots_per_doc.items():
        if count != 1:
            raise ValueError(f"document {doc_id} has {count} roots")


# --- rendering back to markdown (round-trip support) ----------------------------

def render_markdown(doc: ResumeDoc) -> str:
    """Render a ResumeDoc back to Markdown such that re-parsing yields the
    same structure. Entries without a title render as ``### Employer`` only
    (their date range, if any, is not representable in that form)."""
    lines: list[str] = []
    for section in doc.sections:
        if section.heading:
            lines.append(f"## {section.heading}")
        if section.kind == SectionKind.EXPERIENCE:
            for entry in section.entries:
                if entry.title:
                    lines.append(f"### {entry.employer} — {entry.title} ({entry.date_range})")
                else:
                    lines.append(f"### {entry.employer}")
                lines.extend(f"- {bullet}" for bullet in entry.bullets)
        else:
            lines.extend(section.lines)
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def ingest_document(doc: SourceDocument) -> tuple[ResumeDoc | list[ExperienceEntry], list[Chunk]]:
    """Parse and chunk a source document according to its kind/format."""
    if doc.kind == DocKind.CAREER_RECORD:
        parsed: ResumeDoc | list[ExperienceEntry] = parse_career_records(doc.raw, doc.format)
    else:
        resume = parse_resume_text(doc.raw, doc.format)
        resume.source = doc.doc_id
        parsed = resume
    return parsed, chunkize(parsed, doc.doc_id, doc.kind)
