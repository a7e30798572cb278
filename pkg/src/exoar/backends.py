"""Chat-completion backends: live HTTP, fixture directory, recorded replay.

Fixture and replay backends read the same directory layout: one response
file per generation attempt named ``step<N>_attempt<K>.txt`` plus an
optional ``usage.tsv`` with columns ``step  attempt  prompt_tokens
completion_tokens``. A fixture backend falls back to attempt 1 when a
later attempt has no dedicated file; a replay backend is strict and
fails on any request it has no recording for.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol

import requests

from .errors import AuthRejected, BudgetExceeded, Transport
from .prompts import ChatRequest


@dataclass(frozen=True)
class ChatResponse:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0


@dataclass(frozen=True)
class GenerationRecord:
    """Audit record of one generation, including the raw model output.

    Token counts are summed over attempts so cost accounting covers the
    repair round-trip; ``raw_response`` is the final attempt's text and
    ``request`` the original (pre-repair) request.
    """

    step: int
    request: ChatRequest
    raw_response: str
    prompt_tokens: int
    completion_tokens: int
    attempts: int
    created_at: datetime = field(
        default_factory=lambda: datetime.now(timezone.utc), compare=False
    )


class Backend(Protocol):
    """A source of chat completions; must be shareable across sessions."""

    def complete(self, request: ChatRequest, step: int, attempt: int) -> ChatResponse:
        ...


def _read_usage(directory: Path) -> dict[tuple[int, int], tuple[int, int]]:
    usage: dict[tuple[int, int], tuple[int, int]] = {}
    path = directory / "usage.tsv"
    if not path.exists():
        return usage
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("step"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            continue
        step, attempt, prompt_tokens, completion_tokens = (int(p) for p in parts)
        usage[(step, attempt)] = (prompt_tokens, completion_tokens)
    return usage


class FixtureBackend:
    """Serves canned responses from a directory; lenient about attempts."""

    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise Transport(f"fixture directory not found: {self.directory}", status=None)
        self._usage = _read_usage(self.directory)

    def _response_path(self, step: int, attempt: int) -> Path | None:
        path = self.directory / f"step{step}_attempt{attempt}.txt"
        if path.exists():
            return path
        fallback = self.directory / f"step{step}_attempt1.txt"
        return fallback if fallback.exists() else None

    def complete(self, request: ChatRequest, step: int, attempt: int) -> ChatResponse:
        path = self._response_path(step, attempt)
        if path is None:
            raise Transport(
                f"no fixture response for step {step}", status=None, kind="not-found"
            )
        prompt_tokens, completion_tokens = self._usage.get(
            (step, attempt), self._usage.get((step, 1), (0, 0))
        )
        return ChatResponse(
            text=path.read_text(encoding="utf-8"),
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
        )


class ReplayBackend(FixtureBackend):
    """Replays a recorded generation log; any unrecorded request fails."""

    def _response_path(self, step: int, attempt: int) -> Path | None:
        path = self.directory / f"step{step}_attempt{attempt}.txt"
        return path if path.exists() else None


class LiveBackend:
    """Talks to an OpenAI-compatible chat-completions endpoint.

    Transient transport failures (connection errors, 408/429/5xx) are
    retried up to two times with exponential backoff. A global semaphore
    caps concurrent in-flight requests; an optional cumulative token
    ceiling turns the backend off before it can overspend.
    """

    RETRYABLE_STATUSES = {408, 429, 500, 502, 503, 504}

    def __init__(
        self,
        base_url: str,
        api_key: str = "",
        timeout: float = 120.0,
        max_retries: int = 2,
        backoff_seconds: float = 1.0,
        max_concurrency: int = 4,
        token_ceiling: int | None = None,
    ) -> None:
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_seconds = backoff_seconds
        self.token_ceiling = token_ceiling
        self._semaphore = threading.BoundedSemaphore(max_concurrency)
        self._tokens_used = 0
        self._lock = threading.Lock()

    @property
    def tokens_used(self) -> int:
        return self._tokens_used

    def complete(self, request: ChatRequest, step: int, attempt: int,
                 api_key: str | None = None) -> ChatResponse:
        if self.token_ceiling is not None:
            with self._lock:
                if self._tokens_used >= self.token_ceiling:
                    raise BudgetExceeded(
                        f"token ceiling {self.token_ceiling} reached "
                        f"({self._tokens_used} used)"
                    )
        body = {
            "model": request.model_id,
            "messages": [
                {"role": "system", "content": request.system_text},
                {"role": "user", "content": request.user_text},
            ],
            "temperature": request.temperature,
        }
        headers = {"Authorization": f"Bearer {api_key or self.api_key}"}
        url = f"{self.base_url}/v1/chat/completions"

        last_error: Exception | None = None
        for retry in range(self.max_retries + 1):
            if retry:
                time.sleep(self.backoff_seconds * 2 ** (retry - 1))
            try:
                with self._semaphore:
                    response = requests.post(
                        url, json=body, headers=headers, timeout=self.timeout
                    )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code in (401, 403):
                raise AuthRejected(f"endpoint rejected credentials ({response.status_code})")
            if response.status_code in self.RETRYABLE_STATUSES:
                last_error = Transport(
                    f"transient upstream failure ({response.status_code})",
                    status=response.status_code,
                )
                continue
            if response.status_code != 200:
                raise Transport(
                    f"upstream returned {response.status_code}",
                    status=response.status_code,
                )
            return self._parse_payload(response)
        attempts = self.max_retries + 1
        if isinstance(last_error, Transport):
            raise Transport(last_error.message, status=last_error.status, attempts=attempts)
        raise Transport(
            f"transport failed after retries: {last_error}", status=None, attempts=attempts
        )

    def _parse_payload(self, response: requests.Response) -> ChatResponse:
        try:
            payload = response.json()
            text = payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise Transport(f"unparseable completion payload: {exc}", status=200) from exc
        usage = payload.get("usage") or {}
        prompt_tokens = int(usage.get("prompt_tokens", 0))
        completion_tokens = int(usage.get("completion_tokens", 0))
        with self._lock:
            self._tokens_used += prompt_tokens + completion_tokens
        return ChatResponse(
            text=text,
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
        )


class KeyedBackend:
    """Binds a per-session API key to a shared live backend."""

    def __init__(self, inner: LiveBackend, api_key: str) -> None:
        self.inner = inner
        self.api_key = api_key

    def complete(self, request: ChatRequest, step: int, attempt: int) -> ChatResponse:
        return self.inner.complete(request, step, attempt, api_key=self.api_key)


def backend_from_spec(spec: str, api_key: str = "", **live_options) -> Backend:
    """Build a backend from the CLI notation ``live``, ``fixture:<dir>``
    or ``replay:<dir>``."""
    if spec == "live":
        base_url = live_options.pop("base_url", None) or "https://api.openai.com"
        return LiveBackend(base_url=base_url, api_key=api_key, **live_options)
    kind, _, directory = spec.partition(":")
    if kind == "fixture" and directory:
        return FixtureBackend(directory)
    if kind == "replay" and directory:
        return ReplayBackend(directory)
    raise ValueError(f"unknown backend spec: {spec!r}")
