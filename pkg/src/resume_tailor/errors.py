"""Exception hierarchy shared across the package.

Every error a caller is expected to handle has its own class; the CLI maps
these onto stable exit codes and the HTTP service onto machine codes.
"""

from __future__ import annotations


class TailorError(Exception):
    """Base class for all package errors."""


# --- ingest ---------------------------------------------------------------

class EmptyDocument(TailorError):
    """Input document is empty or whitespace-only."""


class SchemaMismatch(TailorError):
    """A required column/element is missing from a career-record file."""

    def __init__(self, missing: str):
        super().__init__(f"missing required field: {missing}")
        self.missing = missing


class RowError(TailorError):
    """A career-record row is malformed. ``row`` is 1-based."""

    def __init__(self, row: int, reason: str):
        super().__init__(f"row {row}: {reason}")
        self.row = row
        self.reason = reason


# --- vault ----------------------------------------------------------------

class DimensionMismatch(TailorError):
    """Embedding dimension differs from the vault's configured dimension."""


class DuplicateWithinBatch(TailorError):
    """The same chunk_id appears twice in a single index batch."""


class CorruptStore(TailorError):
    """On-disk vault data could not be decoded."""

    def __init__(self, path: str, record: int | None = None, reason: str = ""):
        loc = f"{path}" if record is None else f"{path}:{record}"
        super().__init__(f"corrupt vault data at {loc}: {reason}")
        self.path = path
        self.record = record


class VersionMismatch(TailorError):
    """The vault manifest declares an unsupported format version."""


class UnknownChunk(TailorError):
    """chunk_id not present in the vault."""


# --- jd analysis / matching ------------------------------------------------

class EmptyJd(TailorError):
    """Job-description text is empty or whitespace-only."""


class DomainError(TailorError):
    """A score argument fell outside its documented domain."""


# --- gateway ----------------------------------------------------------------

class GatewayError(TailorError):
    """Base class for model-gateway failures."""


class EmptyInput(GatewayError):
    """embed() was called with an empty text."""


class TransportError(GatewayError):
    """HTTP backend failed after exhausting retries."""


class ScriptExhausted(GatewayError):
    """Scripted mock has no canned response left for this call."""


# --- pipeline / runs ---------------------------------------------------------

class NodeFailure(TailorError):
    """A pipeline node failed in a way that aborts the run."""

    def __init__(self, node_id: str, cause: Exception):
        super().__init__(f"node {node_id} failed: {cause}")
        self.node_id = node_id
        self.cause = cause


class UnknownRun(TailorError):
    """run_id not present in the run store."""


class ConditionMismatch(TailorError):
    """Baseline and vault reports being compared describe different JDs."""


class StoreCorrupt(TailorError):
    """The run store could not be opened; delete or restore the file."""
