"""Hybrid semantic-lexical snippet scoring.

Confidence for a snippet is ``alpha * semantic + (1 - alpha) * lexical``:

* ``semantic`` maps embedding cosine similarity from [-1, 1] onto [0, 1]
  with the affine map ``(c + 1) / 2``.
* ``lexical`` is the mean fuzzy overlap between the snippet text and every
  extracted JD element, where overlap is :func:`partial_ratio` / 100.

``partial_ratio(a, b)`` is the maximum normalized indel similarity between
the shorter string and any contiguous substring of the longer one, scaled to
0-100. Scanning all substrings (rather than only windows of the shorter
string's length) is deliberate: fixed-length windows miss maxima, e.g. for
("aa", "ab") the best window scores 50 while the substring "a" scores 66.67.
For equal-length inputs both orientations are scanned so the function is
symmetric under argument swap.

Snippets below the confidence threshold (default 0.75, inclusive boundary:
a snippet exactly at the threshold passes) are filtered out of the rewrite
path but retained for tracing and fallback.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

from resume_tailor.errors import DomainError
from resume_tailor.fuzz import best_substring_similarity
from resume_tailor.jd import JdElement
from resume_tailor.textnorm import fold

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.6
DEFAULT_THRESHOLD = 0.75


@dataclass(frozen=True)
class MatchScore:
    semantic: float
    lexical: float
    alpha: float
    confidence: float


@dataclass
class ScoredSnippet:
    chunk_id: str
    matched_elements: list[str]
    score: MatchScore
    passes: bool
    text: str = ""
    collection: str = ""


def semantic_score(cosine: float) -> float:
    """Affine map from cosine similarity in [-1, 1] to [0, 1]."""
    c = min(1.0, max(-1.0, cosine))
    return (c + 1.0) / 2.0


@lru_cache(maxsize=131072)
def _folded_ratio(a: str, b: str) -> float:
    """partial_ratio over already-folded strings; cached, inputs canonical."""
    if not a and not b:
        return 100.0
    if not a or not b:
        return 0.0
    s, t = (a, b) if len(a) <= len(b) else (b, a)
    if s in t:
        return 100.0
    score = best_substring_similarity(s, t)
    if len(s) == len(t):
        score = max(score, best_substring_similarity(t, s))
    return score


def partial_ratio(a: str, b: str) -> float:
    """Best fuzzy overlap between ``a`` and any substring of ``b`` (or vice
    versa when ``b`` is shorter), in [0, 100].

    Inputs are case-folded and whitespace-collapsed first. Returns 100 iff
    one folded string is a contiguous substring of the other, or both are
    empty; exactly one empty string scores 0.
    """
    return _folded_ratio(fold(a), fold(b))


def lexical_score(snippet_text: str, elements: list[JdElement]) -> float:
    """Mean fuzzy overlap of the snippet with every JD element, in [0, 1].

    An empty element list is a degenerate JD: returns 0.0 with a warning.
    """
    if not elements:
        logger.warning("lexical_score called with no JD elements; returning 0.0")
        return 0.0
    total = sum(partial_ratio(e.text, snippet_text) for e in elements)
    return total / (100.0 * len(elements))


def hybrid_confidence(semantic: float, lexical: float, alpha: float = DEFAULT_ALPHA) -> float:
    """Blend semantic and lexical scores: ``alpha*semantic + (1-alpha)*lexical``."""
    for name, value in (("semantic", semantic), ("lexical", lexical), ("alpha", alpha)):
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"{name} must be in [0, 1], got {value}")
    return alpha * semantic + (1.0 - alpha) * lexical


def filter_by_threshold(
    snippets: list[ScoredSnippet], tau: float = DEFAULT_THRESHOLD
) -> tuple[list[ScoredSnippet], list[ScoredSnippet]]:
    """Partition snippets into (kept, dropped) by ``confidence >= tau``.

    Order is preserved in both halves; dropped snippets are retained so the
    trace and the fallback tiers can inspect them.
    """
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau must be in [0, 1], got {tau}")
    kept: list[ScoredSnippet] = []
    dropped: list[ScoredSnippet] = []
    for snippet in snippets:
        snippet.passes = snippet.score.confidence >= tau
        (kept if snippet.passes else dropped).append(snippet)
    return kept, dropped


def score_snippet(
    chunk_id: str,
    text: str,
    best_cosine: float,
    matched_elements: list[str],
    all_elements: list[JdElement],
    alpha: float,
    tau: float,
) -> ScoredSnippet:
    """Build a ScoredSnippet from a retrieval hit."""
    sem = semantic_score(best_cosine)
    lex = lexical_score(text, all_elements)
    conf = hybrid_confidence(sem, lex, alpha)
    score = MatchScore(semantic=sem, lexical=lex, alpha=alpha, confidence=conf)
    return ScoredSnippet(
        chunk_id=chunk_id,
        matched_elements=list(matched_elements),
        score=score,
        passes=conf >= tau,
        text=text,
    )
