"""Provider-agnostic chat-completion client with retries, bounded parallelism,
and a deterministic replay provider for offline tests.

Credential values must never appear in logs or error messages.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import httpx


class Role(Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


class FinishReason(Enum):
    STOP = "Stop"
    LENGTH = "Length"
    ERROR = "Error"


@dataclass(frozen=True)
class ChatMessage:
    role: Role
    content: str


@dataclass(frozen=True)
class ChatRequest:
    model_id: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_output_tokens: int = 1024
    request_tag: str = ""

    def __post_init__(self):
        if not self.messages:
            raise ValueError("a request needs at least one message")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be within [0, 2]")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")


@dataclass(frozen=True)
class ChatResponse:
    content: str
    model_id: str
    finish_reason: FinishReason
    latency_ms: int
    provider: str


class GatewayError(Exception):
    pass


class AuthError(GatewayError):
    pass


class RateLimited(GatewayError):
    pass


class ProviderError(GatewayError):
    pass


class ReplayMiss(GatewayError):
    pass


class TransientFailure(GatewayError):
    """Internal: retryable provider failure (429/5xx/timeout)."""


def request_hash(request: ChatRequest) -> str:
    """Stable across processes: canonical role/content/model/temperature serialization."""
    payload = {
        "messages": [{"role": m.role.value, "content": m.content} for m in request.messages],
        "model_id": request.model_id,
        "temperature": f"{request.temperature:.4f}",
    }
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


class ReplayProvider:
    """Answers from a recorded transcript, keyed by request hash."""

    name = "replay"

    def __init__(self, transcript_path: Path | str):
        self._entries: dict[str, dict] = {}
        path = Path(transcript_path)
        for entry in json.loads(path.read_text(encoding="utf-8")):
            self._entries[entry["request_hash"]] = entry

    def send(self, request: ChatRequest) -> ChatResponse:
        key = request_hash(request)
        entry = self._entries.get(key)
        if entry is None:
            raise ReplayMiss(f"no transcript entry for request hash {key[:12]}…")
        return ChatResponse(
            content=entry["content"],
            model_id=entry.get("model_id", request.model_id),
            finish_reason=FinishReason.STOP,
            latency_ms=0,
            provider=self.name,
        )


class ScriptedProvider:
    """Test double: a callable produces each response's content."""

    name = "scripted"

    def __init__(self, respond: Callable[[ChatRequest], str]):
        self._respond = respond

    def send(self, request: ChatRequest) -> ChatResponse:
        return ChatResponse(
            content=self._respond(request),
            model_id=request.model_id,
            finish_reason=FinishReason.STOP,
            latency_ms=0,
            provider=self.name,
        )


class LiveProvider:
    """HTTP JSON chat-completion client: messages array, bearer auth."""

    name = "live"

    def __init__(self, base_url: str, api_key: Optional[str], timeout: float = 60.0):
        self._base_url = base_url.rstrip("/")
        self._api_key = api_key
        self._timeout = timeout

    def send(self, request: ChatRequest) -> ChatResponse:
        if not self._api_key:
            raise AuthError("no API credential configured (set LLM_API_KEY)")
        body = {
            "model": request.model_id,
            "messages": [
                {"role": m.role.value, "content": m.content} for m in request.messages
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        started = time.monotonic()
        try:
            response = httpx.post(
                f"{self._base_url}/chat/completions",
                json=body,
                headers={"Authorization": f"Bearer {self._api_key}"},
                timeout=self._timeout,
            )
        except httpx.TimeoutException as exc:
            raise TransientFailure("request timed out") from exc
        except httpx.HTTPError as exc:
            raise TransientFailure(f"transport failure: {type(exc).__name__}") from exc
        latency_ms = int((time.monotonic() - started) * 1000)

        if response.status_code in (401, 403):
            raise AuthError("provider rejected the credential")
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientFailure(f"provider returned HTTP {response.status_code}")
        if response.status_code != 200:
            raise ProviderError(f"provider returned HTTP {response.status_code}")
        try:
            payload = response.json()
            choice = payload["choices"][0]
            content = choice["message"]["content"]
            finish = choice.get("finish_reason", "stop")
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed provider payload: {type(exc).__name__}") from exc
        return ChatResponse(
            content=content or "",
            model_id=payload.get("model", request.model_id),
            finish_reason=FinishReason.LENGTH if finish == "length" else FinishReason.STOP,
            latency_ms=latency_ms,
            provider=self.name,
        )


class RecordingProvider:
    """Wraps a live provider and appends transcript entries for later replay."""

    name = "recording"

    def __init__(self, inner, transcript_path: Path | str):
        self._inner = inner
        self._path = Path(transcript_path)

    def send(self, request: ChatRequest) -> ChatResponse:
        response = self._inner.send(request)
        entries = []
        if self._path.exists():
            entries = json.loads(self._path.read_text(encoding="utf-8"))
        entries.append(
            {
                "request_hash": request_hash(request),
                "content": response.content,
                "model_id": response.model_id,
            }
        )
        self._path.write_text(json.dumps(entries, indent=2), encoding="utf-8")
        return response


BACKOFF_SECONDS = (1.0, 2.0, 4.0)
JITTER = 0.2


class Gateway:
    """Retrying front-end over a provider; shareable across threads."""

    def __init__(
        self,
        provider,
        sleep: Callable[[float], None] = time.sleep,
        rng: Optional[random.Random] = None,
    ):
        self._provider = provider
        self._sleep = sleep
        self._rng = rng or random.Random()

    @property
    def provider_name(self) -> str:
        return getattr(self._provider, "name", type(self._provider).__name__)

    def complete(self, request: ChatRequest) -> ChatResponse:
        last: Optional[TransientFailure] = None
        for attempt in range(len(BACKOFF_SECONDS) + 1):
            try:
                return self._provider.send(request)
            except TransientFailure as exc:
                last = exc
                if attempt == len(BACKOFF_SECONDS):
                    break
                base = BACKOFF_SECONDS[attempt]
                jitter = 1.0 + self._rng.uniform(-JITTER, JITTER)
                self._sleep(base * jitter)
        raise RateLimited(f"retries exhausted: {last}")

    def complete_batch(
        self, requests: Sequence[ChatRequest], parallelism: int = 4
    ) -> list[Union[ChatResponse, GatewayError]]:
        """Responses in request order; per-item errors embedded, batch never aborts."""
        if parallelism < 1:
            raise ValueError("parallelism must be >= 1")

        def one(request: ChatRequest) -> Union[ChatResponse, GatewayError]:
            try:
                return self.complete(request)
            except GatewayError as exc:
                return exc

        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            return list(pool.map(one, requests))
