"""Text-generation providers and the retry policy applied to them.

A provider is anything with ``generate(request) -> str``. Transient failures
(timeouts, 5xx, empty responses) raise :class:`TransientProviderError` and are
retried by the gateway; configuration problems (bad credentials) raise
:class:`~storyloom.errors.ProviderConfigError` and are not.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Protocol

import httpx

from ..errors import ProviderConfigError

if TYPE_CHECKING:
    from .gateway import CompletionRequest


class TransientProviderError(Exception):
    """Retriable provider failure (timeout, overload, empty output)."""


class Provider(Protocol):
    provider_id: str

    def generate(self, request: "CompletionRequest") -> str: ...


@dataclass(frozen=True)
class RetryPolicy:
    """attempts total calls; delays grow exponentially from base_delay."""

    attempts: int = 3
    base_delay: float = 1.0
    factor: float = 2.0
    timeout: float = 60.0

    def delay_before(self, attempt: int) -> float:
        """Delay slept before retry number `attempt` (2-based)."""
        return self.base_delay * self.factor ** (attempt - 2)


class HttpProvider:
    """Chat-completion style HTTP provider.

    Speaks the common ``POST {endpoint}`` / ``choices[0].message.content``
    JSON shape. The API key is read from the environment at call time and
    never stored on the instance.
    """

    def __init__(
        self,
        provider_id: str,
        endpoint: str,
        model: str,
        api_key_env: str,
        timeout: float = 60.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.provider_id = provider_id
        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout
        self._transport = transport

    def generate(self, request: "CompletionRequest") -> str:
        api_key = os.environ.get(self.api_key_env, "")
        if not api_key:
            raise ProviderConfigError(
                f"provider {self.provider_id!r}: environment variable {self.api_key_env} is not set"
            )
        payload: dict = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
        }
        if request.max_tokens is not None:
            payload["max_tokens"] = request.max_tokens
        if request.temperature is not None:
            payload["temperature"] = request.temperature

        try:
            with httpx.Client(transport=self._transport, timeout=self.timeout) as client:
                response = client.post(
                    self.endpoint,
                    json=payload,
                    headers={"Authorization": f"Bearer {api_key}"},
                )
        except httpx.TimeoutException as exc:
            raise TransientProviderError(f"provider {self.provider_id!r} timed out") from exc
        except httpx.HTTPError as exc:
            raise TransientProviderError(f"provider {self.provider_id!r} request failed: {exc}") from exc

        if response.status_code in (401, 403):
            raise ProviderConfigError(
                f"provider {self.provider_id!r} rejected credentials (HTTP {response.status_code})"
            )
        if response.status_code != 200:
            raise TransientProviderError(
                f"provider {self.provider_id!r} returned HTTP {response.status_code}"
            )

        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransientProviderError(
                f"provider {self.provider_id!r} returned an unexpected response shape"
            ) from exc
        return text


Sleeper = Callable[[float], None]
Clock = Callable[[], float]


def default_sleeper(seconds: float) -> None:
    time.sleep(seconds)
