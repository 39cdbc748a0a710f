from __future__ import annotations

import httpx
import pytest

from storyloom.errors import ProviderConfigError, ProviderUnavailableError
from storyloom.gateway import (
    CompletionRequest,
    HttpProvider,
    LlmGateway,
    MockProvider,
    ModelRole,
    RetryPolicy,
    TransientProviderError,
)
from tests.conftest import ScriptedProvider


def _gateway_for(provider, **kwargs):
    sleeps = []
    gateway = LlmGateway(
        providers={role: provider for role in ModelRole},
        sleeper=sleeps.append,
        **kwargs,
    )
    return gateway, sleeps


def _request(**kwargs):
    return CompletionRequest(role=ModelRole.PLOT, prompt="p", **kwargs)


class TestRetries:
    def test_three_consecutive_timeouts_exhaust_retries(self):
        provider = ScriptedProvider([TransientProviderError("timeout")] * 5)
        gateway, sleeps = _gateway_for(provider)
        with pytest.raises(ProviderUnavailableError) as exc_info:
            gateway.complete(_request())
        assert exc_info.value.attempts == 3
        assert provider.calls == 3
        assert sleeps == [1.0, 2.0]

    def test_empty_text_is_treated_as_transient_and_retried(self):
        provider = ScriptedProvider(["", "   ", "real text"])
        gateway, _ = _gateway_for(provider)
        result = gateway.complete(_request())
        assert result.text == "real text"
        assert result.attempts == 3

    def test_success_after_one_failure_records_attempts(self):
        provider = ScriptedProvider([TransientProviderError("blip"), "ok"])
        gateway, sleeps = _gateway_for(provider)
        result = gateway.complete(_request())
        assert result.attempts == 2
        assert sleeps == [1.0]

    def test_auth_failure_is_not_retried(self):
        provider = ScriptedProvider([ProviderConfigError("bad key")])
        gateway, sleeps = _gateway_for(provider)
        with pytest.raises(ProviderConfigError):
            gateway.complete(_request())
        assert provider.calls == 1
        assert sleeps == []

    def test_unbound_role_is_a_config_error(self):
        gateway = LlmGateway(providers={}, sleeper=lambda _s: None)
        with pytest.raises(ProviderConfigError):
            gateway.complete(_request())


class TestMockProvider:
    def test_same_inputs_same_output_across_instances(self):
        request = _request(template_id="plot_segment", bindings={"level": "B1", "option_count": "3"})
        first = MockProvider(seed=11).generate(request)
        second = MockProvider(seed=11).generate(request)
        assert first == second

    def test_seed_changes_output(self):
        request = _request(template_id="plot_segment", bindings={"level": "B1", "option_count": "3"})
        assert MockProvider(seed=1).generate(request) != MockProvider(seed=2).generate(request)

    def test_binding_changes_output(self):
        a = _request(template_id="plot_segment", bindings={"level": "B1", "option_count": "3"})
        b = _request(template_id="plot_segment", bindings={"level": "B2", "option_count": "3"})
        provider = MockProvider(seed=1)
        assert provider.generate(a) != provider.generate(b)

    def test_unknown_template_still_deterministic(self):
        request = _request(template_id="something_else", bindings={})
        provider = MockProvider(seed=3)
        assert provider.generate(request) == provider.generate(request)


class TestCaptureLog:
    def test_entries_keyed_by_session_and_ordered(self):
        gateway = LlmGateway.with_mock(seed=1)
        for session_id, template in (("a", "x1"), ("b", "y1"), ("a", "x2")):
            gateway.complete(_request(template_id=template, bindings={}, session_id=session_id))
        log_a = gateway.capture_log("a")
        log_b = gateway.capture_log("b")
        assert [e.template_id for e in log_a] == ["x1", "x2"]
        assert [e.template_id for e in log_b] == ["y1"]

    def test_disabled_capture_stays_empty(self):
        gateway = LlmGateway.with_mock(seed=1, capture=False)
        gateway.complete(_request(template_id="x", bindings={}, session_id="a"))
        assert gateway.capture_log("a") == []

    def test_role_isolation_language_provider_never_touches_story_roles(self):
        story_mock = MockProvider(seed=5)
        gateway_one = LlmGateway(
            providers={**{r: story_mock for r in ModelRole}, ModelRole.LANGUAGE: MockProvider(seed=5)},
            sleeper=lambda _s: None,
        )
        gateway_two = LlmGateway(
            providers={**{r: story_mock for r in ModelRole}, ModelRole.LANGUAGE: ScriptedProvider(["zzz"])},
            sleeper=lambda _s: None,
        )
        request = _request(template_id="plot_segment", bindings={"level": "B1", "option_count": "3"})
        assert gateway_one.complete(request).text == gateway_two.complete(request).text


class TestHttpProvider:
    def _provider(self, handler, **kwargs):
        return HttpProvider(
            provider_id="remote",
            endpoint="https://llm.example/v1/chat",
            model="storyteller-1",
            api_key_env="STORYLOOM_TEST_KEY",
            transport=httpx.MockTransport(handler),
            **kwargs,
        )

    def test_parses_chat_completion_shape(self, monkeypatch):
        monkeypatch.setenv("STORYLOOM_TEST_KEY", "k-123")
        seen = {}

        def handler(request: httpx.Request) -> httpx.Response:
            seen["auth"] = request.headers.get("authorization")
            return httpx.Response(200, json={"choices": [{"message": {"content": "hello"}}]})

        provider = self._provider(handler)
        assert provider.generate(_request()) == "hello"
        assert seen["auth"] == "Bearer k-123"

    def test_missing_key_env_is_config_error(self, monkeypatch):
        monkeypatch.delenv("STORYLOOM_TEST_KEY", raising=False)
        provider = self._provider(lambda request: httpx.Response(200, json={}))
        with pytest.raises(ProviderConfigError):
            provider.generate(_request())

    def test_401_is_config_error_and_5xx_transient(self, monkeypatch):
        monkeypatch.setenv("STORYLOOM_TEST_KEY", "k")
        with pytest.raises(ProviderConfigError):
            self._provider(lambda r: httpx.Response(401)).generate(_request())
        with pytest.raises(TransientProviderError):
            self._provider(lambda r: httpx.Response(503)).generate(_request())

    def test_prompt_and_secret_never_logged_in_capture(self, monkeypatch):
        monkeypatch.setenv("STORYLOOM_TEST_KEY", "sk-secret-value")

        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(200, json={"choices": [{"message": {"content": "fine"}}]})

        gateway = LlmGateway(
            providers={role: self._provider(handler) for role in ModelRole},
            capture=True,
            sleeper=lambda _s: None,
        )
        gateway.complete(_request(session_id="s"))
        entries = gateway.capture_log("s")
        assert entries and "sk-secret-value" not in entries[0].prompt
        assert "sk-secret-value" not in entries[0].result.text


def test_retry_policy_delays_are_exponential():
    policy = RetryPolicy(attempts=4, base_delay=1.0, factor=2.0)
    assert [policy.delay_before(n) for n in (2, 3, 4)] == [1.0, 2.0, 4.0]
