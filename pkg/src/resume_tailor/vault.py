"""Embedding store for career evidence.

Three fixed collections (resume_history, career_records, generated_content)
hold chunk records with L2-normalized float32 embeddings. Retrieval is exact
brute-force cosine similarity — collections are personal-corpus sized, so a
numpy matrix-vector product beats any index, and results are reproducible:
ties break on chunk_id ascending.

On disk a vault is a directory: manifest.json (format version, embedding
dimension, per-collection counts) plus one JSONL file per collection with
embeddings as base64 little-endian float32. Writes take a cross-process file
lock and an in-process mutex; files are replaced atomically via rename.
"""

from __future__ import annotations

import base64
import json
import logging
import os
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from filelock import FileLock

from resume_tailor.errors import (
    CorruptStore,
    DimensionMismatch,
    DuplicateWithinBatch,
    UnknownChunk,
    VersionMismatch,
)
from resume_tailor.ingest import Chunk, ChunkLevel, SectionKind

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
COLLECTIONS = ("resume_history", "career_records", "generated_content")

_RECORD_FIELDS = (
    "chunk_id",
    "doc_id",
    "section_kind",
    "level",
    "parent_id",
    "employer",
    "text",
    "metadata",
    "dated",
    "source_run_id",
    "embedding",
)


@dataclass
class VaultRecord:
    chunk_id: str
    doc_id: str
    section_kind: str
    level: str
    parent_id: str | None
    text: str
    embedding: np.ndarray
    employer: str | None = None
    metadata: dict[str, str] = field(default_factory=dict)
    dated: str | None = None
    source_run_id: str | None = None

    def to_chunk(self) -> Chunk:
        return Chunk(
            chunk_id=self.chunk_id,
            doc_id=self.doc_id,
            section_kind=SectionKind(self.section_kind),
            level=ChunkLevel(self.level),
            parent_id=self.parent_id,
            text=self.text,
            employer=self.employer,
            metadata=dict(self.metadata),
        )


@dataclass(frozen=True)
class VaultHit:
    record: VaultRecord
    cosine: float
    collection: str


def _normalize(vector: np.ndarray) -> np.ndarray:
    v = np.asarray(vector, dtype=np.float32).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        v = np.zeros_like(v)
        v[0] = 1.0
        return v
    return v / norm


def _encode_embedding(vector: np.ndarray) -> str:
    return base64.b64encode(vector.astype("<f4").tobytes()).decode("ascii")


def _decode_embedding(data: str, dimension: int, path: str, record: int) -> np.ndarray:
    try:
        raw = base64.b64decode(data, validate=True)
    except Exception as exc:
        raise CorruptStore(path, record, f"embedding is not base64: {exc}") from exc
    if len(raw) != 4 * dimension:
        raise CorruptStore(
            path, record, f"embedding holds {len(raw) // 4} floats, manifest says {dimension}"
        )
    return np.frombuffer(raw, dtype="<f4").copy()


class Vault:
    """Directory-backed embedding store with exact cosine retrieval."""

    def __init__(self, root: str | Path, gateway, dimension: int | None = None):
        self.root = Path(root)
        self.gateway = gateway
        self.dimension = dimension if dimension is not None else gateway.embed_dim
        self._records: dict[str, list[VaultRecord]] = {c: [] for c in COLLECTIONS}
        self._index: dict[str, dict[str, int]] = {c: {} for c in COLLECTIONS}
        self._matrix: dict[str, np.ndarray | None] = {c: None for c in COLLECTIONS}
        self._mutex = threading.Lock()
        self._file_lock = FileLock(str(self.root / "vault.lock"))

    # -- lifecycle -------------------------------------------------------

    @classmethod
    def load(cls, root: str | Path, gateway) -> "Vault":
        root = Path(root)
        manifest_path = root / "manifest.json"
        if not manifest_path.exists():
            vault = cls(root, gateway)
            return vault
        try:
            manifest = json.loads(manifest_path.read_text())
        except json.JSONDecodeError as exc:
            raise CorruptStore(str(manifest_path), 0, f"manifest is not JSON: {exc}") from exc
        version = manifest.get("format_version")
        if version != FORMAT_VERSION:
            raise VersionMismatch(
                f"vault format {version!r} unsupported (expected {FORMAT_VERSION})"
            )
        dimension = manifest.get("dimension")
        if not isinstance(dimension, int) or dimension <= 0:
            raise CorruptStore(str(manifest_path), 0, f"bad dimension {dimension!r}")
        vault = cls(root, gateway, dimension=dimension)
        for collection, info in manifest.get("collections", {}).items():
            if collection not in COLLECTIONS:
                raise CorruptStore(str(manifest_path), 0, f"unknown collection {collection!r}")
            path = root / info["file"]
            records = vault._read_collection(path)
            if len(records) != info.get("count"):
                raise CorruptStore(
                    str(path),
                    len(records),
                    f"manifest says {info.get('count')} records, file has {len(records)}",
                )
            vault._records[collection] = records
            vault._index[collection] = {r.chunk_id: i for i, r in enumerate(records)}
        return vault

    def _read_collection(self, path: Path) -> list[VaultRecord]:
        if not path.exists():
            raise CorruptStore(str(path), 0, "collection file missing")
        records: list[VaultRecord] = []
        with path.open() as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorruptStore(str(path), lineno, f"bad JSON: {exc}") from exc
                missing = [f for f in _RECORD_FIELDS if f not in obj]
                if missing:
                    raise CorruptStore(str(path), lineno, f"missing field {missing[0]!r}")
                embedding = _decode_embedding(obj["embedding"], self.dimension, str(path), lineno)
                records.append(
                    VaultRecord(
                        chunk_id=obj["chunk_id"],
                        doc_id=obj["doc_id"],
                        section_kind=obj["section_kind"],
                        level=obj["level"],
                        parent_id=obj["parent_id"],
                        text=obj["text"],
                        embedding=embedding,
                        employer=obj["employer"],
                        metadata=obj["metadata"] or {},
                        dated=obj["dated"],
                        source_run_id=obj["source_run_id"],
                    )
                )
        return records

    def persist(self) -> None:
        """Write manifest + collection files atomically under the write lock."""
        self.root.mkdir(parents=True, exist_ok=True)
        with self._mutex, self._file_lock:
            manifest = {
                "format_version": FORMAT_VERSION,
                "dimension": self.dimension,
                "collections": {},
            }
            for collection in COLLECTIONS:
                filename = f"{collection}.jsonl"
                records = self._records[collection]
                manifest["collections"][collection] = {
                    "file": filename,
                    "count": len(records),
                }
                tmp = self.root / (filename + ".tmp")
                with tmp.open("w") as fh:
                    for record in records:
                        fh.write(json.dumps(self._record_obj(record)) + "\n")
                os.replace(tmp, self.root / filename)
            tmp = self.root / "manifest.json.tmp"
            tmp.write_text(json.dumps(manifest, indent=2) + "\n")
            os.replace(tmp, self.root / "manifest.json")

    @staticmethod
    def _record_obj(record: VaultRecord) -> dict:
        return {
            "chunk_id": record.chunk_id,
            "doc_id": record.doc_id,
            "section_kind": record.section_kind,
            "level": record.level,
            "parent_id": record.parent_id,
            "employer": record.employer,
            "text": record.text,
            "metadata": record.metadata,
            "dated": record.dated,
            "source_run_id": record.source_run_id,
            "embedding": _encode_embedding(record.embedding),
        }

    # -- mutation ---------------------------------------------------------

    def _check_collection(self, collection: str) -> None:
        if collection not in COLLECTIONS:
            raise ValueError(f"unknown collection {collection!r}")

    def index_chunks(
        self,
        collection: str,
        chunks: list[Chunk],
        *,
        dated: str | None = None,
        source_run_id: str | None = None,
    ) -> int:
        """Embed and upsert chunks into a collection.

        The same chunk_id twice in one batch raises DuplicateWithinBatch;
        re-indexing an id that already exists in the store replaces it.
        """
        self._check_collection(collection)
        seen: set[str] = set()
        for chunk in chunks:
            if chunk.chunk_id in seen:
                raise DuplicateWithinBatch(chunk.chunk_id)
            seen.add(chunk.chunk_id)
        if not chunks:
            return 0
        vectors = self.gateway.embed([c.text for c in chunks])
        with self._mutex, self._file_lock:
            for chunk, vector in zip(chunks, vectors):
                v = np.asarray(vector, dtype=np.float32).reshape(-1)
                if v.shape[0] != self.dimension:
                    raise DimensionMismatch(
                        f"embedding has {v.shape[0]} dims, vault expects {self.dimension}"
                    )
                record = VaultRecord(
                    chunk_id=chunk.chunk_id,
                    doc_id=chunk.doc_id,
                    section_kind=chunk.section_kind.value,
                    level=chunk.level.value,
                    parent_id=chunk.parent_id,
                    text=chunk.text,
                    embedding=_normalize(v),
                    employer=chunk.employer,
                    metadata=dict(chunk.metadata),
                    dated=dated,
                    source_run_id=source_run_id,
                )
                existing = self._index[collection].get(chunk.chunk_id)
                if existing is not None:
                    self._records[collection][existing] = record
                else:
                    self._index[collection][chunk.chunk_id] = len(self._records[collection])
                    self._records[collection].append(record)
            self._matrix[collection] = None
        return len(chunks)

    def delete(self, chunk_id: str) -> str:
        """Remove a chunk by id from whichever collection holds it; returns
        the collection name. Raises UnknownChunk when absent."""
        with self._mutex, self._file_lock:
            for collection in COLLECTIONS:
                idx = self._index[collection].get(chunk_id)
                if idx is None:
                    continue
                del self._records[collection][idx]
                self._index[collection] = {
                    r.chunk_id: i for i, r in enumerate(self._records[collection])
                }
                self._matrix[collection] = None
                return collection
        raise UnknownChunk(chunk_id)

    # -- read -------------------------------------------------------------

    def list_records(self, collection: str) -> list[VaultRecord]:
        self._check_collection(collection)
        return [replace(r, embedding=r.embedding.copy()) for r in self._records[collection]]

    def counts(self) -> dict[str, int]:
        return {c: len(self._records[c]) for c in COLLECTIONS}

    def get(self, chunk_id: str) -> tuple[str, VaultRecord]:
        for collection in COLLECTIONS:
            idx = self._index[collection].get(chunk_id)
            if idx is not None:
                return collection, self._records[collection][idx]
        raise UnknownChunk(chunk_id)

    def _collection_matrix(self, collection: str) -> np.ndarray:
        cached = self._matrix[collection]
        if cached is None or cached.shape[0] != len(self._records[collection]):
            records = self._records[collection]
            if records:
                cached = np.vstack([r.embedding for r in records])
            else:
                cached = np.zeros((0, self.dimension), dtype=np.float32)
            self._matrix[collection] = cached
        return cached

    def query(
        self,
        *,
        text: str | None = None,
        embedding: np.ndarray | None = None,
        collection: str | None = None,
        k: int = 8,
    ) -> list[VaultHit]:
        """Top-k nearest records by cosine similarity.

        Pass either raw text (embedded via the gateway) or a vector. With
        collection=None all collections are scanned and merged. Ordering is
        (-cosine, chunk_id); fewer than k hits are returned when the store
        is small.
        """
        if (text is None) == (embedding is None):
            raise ValueError("provide exactly one of text or embedding")
        if text is not None:
            embedding = self.gateway.embed([text])[0]
        q = _normalize(np.asarray(embedding, dtype=np.float32).reshape(-1))
        if q.shape[0] != self.dimension:
            raise DimensionMismatch(
                f"query embedding has {q.shape[0]} dims, vault expects {self.dimension}"
            )
        collections = COLLECTIONS if collection is None else (collection,)
        if collection is not None:
            self._check_collection(collection)
        hits: list[VaultHit] = []
        for name in collections:
            matrix = self._collection_matrix(name)
            if matrix.shape[0] == 0:
                continue
            cosines = matrix @ q
            for record, cosine in zip(self._records[name], cosines):
                hits.append(VaultHit(record=record, cosine=float(cosine), collection=name))
        hits.sort(key=lambda h: (-h.cosine, h.record.chunk_id))
        return hits[:k]
