"""Text normalization: ASCII mapping for ATS-safe output, case folding,
whitespace collapsing.

The ASCII mapping lives in ``data/ascii_map.tsv`` (documented copy at
``docs/ascii-map.tsv``). Every replacement is itself pure ASCII, which is
what makes :func:`ascii_normalize` idempotent.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_WS_RE = re.compile(r"\s+")

REPLACEMENT_CHAR = "?"


def _load_ascii_map() -> dict[str, str]:
    table: dict[str, str] = {}
    text = resources.files("resume_tailor.data").joinpath("ascii_map.tsv").read_text("utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        code, _, replacement = line.partition("\t")
        table[chr(int(code, 16))] = replacement
    return table


ASCII_MAP: dict[str, str] = _load_ascii_map()


def ascii_normalize(text: str) -> tuple[str, int]:
    """Map known Unicode punctuation/ligatures to ASCII equivalents.

    Returns the normalized text and the number of code points that had no
    mapping and were replaced by ``?``. Idempotent: a second pass is a no-op.
    """
    if text.isascii():
        return text, 0
    out: list[str] = []
    unmapped = 0
    for ch in text:
        if ch.isascii():
            out.append(ch)
        elif ch in ASCII_MAP:
            out.append(ASCII_MAP[ch])
        else:
            out.append(REPLACEMENT_CHAR)
            unmapped += 1
    return "".join(out), unmapped


def collapse_ws(text: str) -> str:
    """Collapse runs of whitespace to single spaces and strip the ends."""
    return _WS_RE.sub(" ", text).strip()


@lru_cache(maxsize=65536)
def fold(text: str) -> str:
    """Canonical comparison form: case-folded, whitespace-collapsed."""
    return collapse_ws(text.casefold())
