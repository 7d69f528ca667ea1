"""Uniform access to chat-completion and embedding backends.

Two backends share one interface: an HTTP client speaking the widely used
``/chat/completions`` + ``/embeddings`` JSON schema, and a fully
deterministic mock for tests and offline runs.

The mock's embeddings hash character 3-grams into ``embed_dim`` signed
buckets and L2-normalize, so texts sharing substrings get genuinely higher
cosine similarity — retrieval and threshold behavior stay meaningful without
a network. Mock chat has three modes:

* ``identity``  — echo the request payload back (the default),
* ``scripted``  — pop ordered canned responses (from a fixture file),
* ``adversarial`` — echo the payload plus a fabricated employer and an
  unsupported metric, for exercising the guardrails stage.

Review-schema requests are answered from a separate verdict script (default
"ok") in every mode, so review JSON stays parseable while rewrite behavior
varies by mode.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from resume_tailor.errors import EmptyInput, ScriptExhausted, TransportError
from resume_tailor.textnorm import fold

logger = logging.getLogger(__name__)

API_KEY_ENV = "TAILOR_API_KEY"

ADVERSARIAL_SENTENCE = "Boosted quarterly revenue 400% at Globex."
DEFAULT_OK_REVIEW = '{"status": "ok", "issues": []}'


@dataclass
class GatewayConfig:
    backend: str = "mock"  # "http" | "mock"
    base_url: str = ""
    chat_model: str = "chat-default"
    embed_model: str = "embed-default"
    embed_dim: int = 64  # http backend defaults to 1536 via from_profile
    seed: int = 42
    timeout: float = 30.0
    max_retries: int = 3
    temperature: float = 0.0
    chat_enabled: bool = True
    mock_mode: str = "identity"  # "identity" | "scripted" | "adversarial"
    script: list[str] = field(default_factory=list)
    script_path: str | None = None
    review_script: list[str] = field(default_factory=list)

    @classmethod
    def from_profile(cls, profile: str, **overrides) -> GatewayConfig:
        """Build a config from a named profile.

        Profiles: ``mock`` (identity), ``mock-scripted``, ``mock-adversarial``,
        ``mock-nochat`` (embeddings only; chat reports failure), ``http``.
        """
        presets: dict[str, dict] = {
            "mock": {"backend": "mock", "mock_mode": "identity"},
            "mock-scripted": {"backend": "mock", "mock_mode": "scripted"},
            "mock-adversarial": {"backend": "mock", "mock_mode": "adversarial"},
            "mock-nochat": {"backend": "mock", "mock_mode": "identity", "chat_enabled": False},
            "http": {"backend": "http", "embed_dim": 1536},
        }
        if profile not in presets:
            raise ValueError(f"unknown gateway profile: {profile}")
        params = dict(presets[profile])
        params.update(overrides)
        return cls(**params)

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "base_url": self.base_url,
            "chat_model": self.chat_model,
            "embed_model": self.embed_model,
            "embed_dim": self.embed_dim,
            "seed": self.seed,
            "timeout": self.timeout,
            "max_retries": self.max_retries,
            "temperature": self.temperature,
            "chat_enabled": self.chat_enabled,
            "mock_mode": self.mock_mode,
            "script": list(self.script),
            "script_path": self.script_path,
            "review_script": list(self.review_script),
        }


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str


@dataclass(frozen=True)
class ConstraintBlock:
    schema_tag: str
    forbidden: tuple[str, ...] = ()


_PAYLOAD_OPEN = "<<<PAYLOAD"
_PAYLOAD_CLOSE = "PAYLOAD>>>"


@dataclass
class ChatRequest:
    messages: list[ChatMessage]
    constraints: ConstraintBlock
    payload: str

    @classmethod
    def for_schema(
        cls,
        schema_tag: str,
        payload: str,
        instructions: str = "",
        forbidden: tuple[str, ...] | list[str] = (),
    ) -> ChatRequest:
        forbidden = tuple(forbidden)
        system = instructions
        if forbidden:
            system += "\nHard constraints:\n" + "\n".join(f"- {rule}" for rule in forbidden)
        user = f"{_PAYLOAD_OPEN}\n{payload}\n{_PAYLOAD_CLOSE}"
        return cls(
            messages=[ChatMessage("system", system), ChatMessage("user", user)],
            constraints=ConstraintBlock(schema_tag=schema_tag, forbidden=forbidden),
            payload=payload,
        )


@dataclass
class ChatResponse:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0


class MockGateway:
    """Deterministic backend: pure function of (inputs, config)."""

    def __init__(self, config: GatewayConfig):
        self.config = config
        script = list(config.script)
        if config.script_path:
            script = json.loads(Path(config.script_path).read_text("utf-8"))
        self._script = list(script)
        self._script_pos = 0
        self._review_script = list(config.review_script)
        self._review_pos = 0

    @property
    def embed_dim(self) -> int:
        return self.config.embed_dim

    @property
    def chat_enabled(self) -> bool:
        return self.config.chat_enabled

    # -- embeddings ---------------------------------------------------------

    def _embed_one(self, text: str) -> np.ndarray:
        dim = self.config.embed_dim
        key = str(self.config.seed).encode("utf-8")
        padded = f" {fold(text)} "
        grams = (
            [padded[i : i + 3] for i in range(len(padded) - 2)]
            if len(padded) >= 3
            else [padded]
        )
        vec = np.zeros(dim, dtype=np.float64)
        for gram in grams:
            digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8, key=key).digest()
            h = int.from_bytes(digest, "little")
            sign = 1.0 if (h >> 60) & 1 else -1.0
            vec[h % dim] += sign
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:  # signed buckets cancelled out; pick a stable unit axis
            digest = hashlib.blake2b(padded.encode("utf-8"), digest_size=8, key=key).digest()
            vec[int.from_bytes(digest, "little") % dim] = 1.0
            norm = 1.0
        return (vec / norm).astype(np.float32)

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        for text in texts:
            if not text.strip():
                raise EmptyInput("cannot embed empty text")
        return [self._embed_one(t) for t in texts]

    # -- chat ----------------------------------------------------------------

    def chat(self, request: ChatRequest) -> ChatResponse:
        if not request.messages:
            raise EmptyInput("chat request has no messages")
        if not self.config.chat_enabled:
            raise TransportError("chat disabled for this gateway profile")
        if request.constraints.schema_tag == "review":
            if self._review_pos < len(self._review_script):
                text = self._review_script[self._review_pos]
                self._review_pos += 1
            else:
                text = DEFAULT_OK_REVIEW
        elif self.config.mock_mode == "scripted":
            if self._script_pos >= len(self._script):
                raise ScriptExhausted(
                    f"scripted mock exhausted after {len(self._script)} responses"
                )
            text = self._script[self._script_pos]
            self._script_pos += 1
        elif self.config.mock_mode == "adversarial":
            text = f"{request.payload} {ADVERSARIAL_SENTENCE}"
        else:  # identity
            text = request.payload
        prompt_len = sum(len(m.content) for m in request.messages)
        return ChatResponse(
            text=text,
            prompt_tokens=prompt_len // 4,
            completion_tokens=len(text) // 4,
        )


class HttpGateway:
    """Remote backend speaking the common JSON chat/embeddings wire schema.

    Auth comes from the ``TAILOR_API_KEY`` environment variable. Transient
    transport failures are retried with exponential backoff (base 250 ms,
    doubling), at most ``max_retries`` retries per call.
    """

    RETRY_BASE_SECONDS = 0.25

    def __init__(self, config: GatewayConfig, transport=None):
        import httpx

        self.config = config
        headers = {}
        api_key = os.environ.get(API_KEY_ENV)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self._client = httpx.Client(
            base_url=config.base_url,
            headers=headers,
            timeout=config.timeout,
            transport=transport,
        )

    @property
    def embed_dim(self) -> int:
        return self.config.embed_dim

    @property
    def chat_enabled(self) -> bool:
        return self.config.chat_enabled

    def _post_with_retries(self, path: str, body: dict) -> dict:
        import httpx

        attempts = self.config.max_retries + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            if attempt:
                time.sleep(self.RETRY_BASE_SECONDS * (2 ** (attempt - 1)))
            try:
                response = self._client.post(path, json=body)
                if response.status_code >= 500:
                    last_error = TransportError(f"{path}: HTTP {response.status_code}")
                    continue
                response.raise_for_status()
                return response.json()
            except httpx.HTTPStatusError as exc:  # 4xx: do not retry
                raise TransportError(f"{path}: HTTP {exc.response.status_code}") from exc
            except httpx.HTTPError as exc:
                last_error = exc
        raise TransportError(f"{path}: failed after {attempts} attempts") from last_error

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        for text in texts:
            if not text.strip():
                raise EmptyInput("cannot embed empty text")
        data = self._post_with_retries(
            "/embeddings", {"model": self.config.embed_model, "input": texts}
        )
        vectors = [
            np.asarray(item["embedding"], dtype=np.float32) for item in data["data"]
        ]
        for vec in vectors:
            if vec.shape != (self.config.embed_dim,):
                raise TransportError(
                    f"backend returned dimension {vec.shape[0]}, expected {self.config.embed_dim}"
                )
        return vectors

    def chat(self, request: ChatRequest) -> ChatResponse:
        if not request.messages:
            raise EmptyInput("chat request has no messages")
        if not self.config.chat_enabled:
            raise TransportError("chat disabled for this gateway profile")
        body = {
            "model": self.config.chat_model,
            "temperature": self.config.temperature,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
        }
        data = self._post_with_retries("/chat/completions", body)
        usage = data.get("usage", {})
        return ChatResponse(
            text=data["choices"][0]["message"]["content"],
            prompt_tokens=usage.get("prompt_tokens", 0),
            completion_tokens=usage.get("completion_tokens", 0),
        )


Gateway = MockGateway | HttpGateway


def make_gateway(config: GatewayConfig) -> Gateway:
    if config.backend == "mock":
        return MockGateway(config)
    if config.backend == "http":
        return HttpGateway(config)
    raise ValueError(f"unknown gateway backend: {config.backend}")
