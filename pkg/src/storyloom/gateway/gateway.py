"""Role-routed completion calls with retries and an optional capture log."""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field

from ..errors import ProviderConfigError, ProviderUnavailableError
from .providers import Provider, RetryPolicy, Sleeper, TransientProviderError, default_sleeper
from .roles import ModelRole
from .templates import TemplateCatalog

log = logging.getLogger(__name__)


@dataclass
class CompletionRequest:
    role: ModelRole
    prompt: str
    template_id: str | None = None
    bindings: dict[str, str] | None = None
    session_id: str | None = None
    max_tokens: int | None = None
    temperature: float | None = None


@dataclass
class CompletionResult:
    text: str
    provider_id: str
    latency: float
    attempts: int


@dataclass
class CaptureEntry:
    role: ModelRole
    prompt: str
    result: CompletionResult
    template_id: str | None = None


@dataclass
class LlmGateway:
    """Routes each role to its configured provider.

    Stateless per call apart from the capture log, which is keyed by
    session id, append-only, and synchronized.
    """

    providers: dict[ModelRole, Provider]
    templates: TemplateCatalog = field(default_factory=TemplateCatalog.default)
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    capture: bool = False
    sleeper: Sleeper = default_sleeper

    def __post_init__(self):
        self._capture_lock = threading.Lock()
        self._captured: dict[str, list[CaptureEntry]] = {}

    @classmethod
    def with_mock(cls, seed: int = 0, capture: bool = True, **kwargs) -> "LlmGateway":
        from .mock import MockProvider

        provider = MockProvider(seed=seed)
        return cls(
            providers={role: provider for role in ModelRole},
            capture=capture,
            sleeper=lambda _s: None,
            **kwargs,
        )

    def render_prompt(self, template_id: str, bindings: dict[str, str]) -> str:
        return self.templates.render(template_id, bindings)

    def complete_template(
        self,
        role: ModelRole,
        template_id: str,
        bindings: dict[str, str],
        session_id: str | None = None,
        prompt_suffix: str = "",
    ) -> CompletionResult:
        prompt = self.render_prompt(template_id, bindings) + prompt_suffix
        request = CompletionRequest(
            role=role,
            prompt=prompt,
            template_id=template_id,
            bindings=bindings,
            session_id=session_id,
        )
        return self.complete(request)

    def complete(self, request: CompletionRequest) -> CompletionResult:
        provider = self.providers.get(request.role)
        if provider is None:
            raise ProviderConfigError(f"no provider configured for role {request.role.value!r}")

        started = time.monotonic()
        attempts = 0
        last_error: Exception | None = None
        while attempts < self.retry.attempts:
            attempts += 1
            try:
                text = provider.generate(request)
                if not text or not text.strip():
                    raise TransientProviderError(
                        f"provider {provider.provider_id!r} returned empty text"
                    )
                result = CompletionResult(
                    text=text,
                    provider_id=provider.provider_id,
                    latency=time.monotonic() - started,
                    attempts=attempts,
                )
                self._record(request, result)
                return result
            except TransientProviderError as exc:
                last_error = exc
                log.warning("role %s attempt %d/%d failed: %s",
                            request.role.value, attempts, self.retry.attempts, exc)
                if attempts < self.retry.attempts:
                    self.sleeper(self.retry.delay_before(attempts + 1))

        raise ProviderUnavailableError(
            f"role {request.role.value!r} unavailable after {attempts} attempts: {last_error}",
            attempts=attempts,
        )

    # -- capture log -------------------------------------------------------

    def _record(self, request: CompletionRequest, result: CompletionResult) -> None:
        if not self.capture or request.session_id is None:
            return
        entry = CaptureEntry(
            role=request.role,
            prompt=request.prompt,
            result=result,
            template_id=request.template_id,
        )
        with self._capture_lock:
            self._captured.setdefault(request.session_id, []).append(entry)

    def capture_log(self, session_id: str) -> list[CaptureEntry]:
        with self._capture_lock:
            return list(self._captured.get(session_id, []))
