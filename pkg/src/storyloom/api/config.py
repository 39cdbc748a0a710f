"""Service configuration: YAML file with environment overrides.

Environment variables (all optional) override file values:

    STORYLOOM_LISTEN         host:port
    STORYLOOM_STORAGE_PATH   event store root directory
    STORYLOOM_PROVIDERS      provider config YAML path
    STORYLOOM_MOCK_MODE      1/0
    STORYLOOM_MOCK_SEED      integer
    STORYLOOM_CORS_ORIGINS   comma-separated origins
    STORYLOOM_GENRE_CATALOG  genre catalog file path

Provider config YAML shape::

    providers:
      story:    {kind: http, endpoint: "https://...", model: "...", api_key_env: STORY_API_KEY}
      helper:   {kind: http, endpoint: "https://...", model: "...", api_key_env: HELPER_API_KEY}
    roles:
      proficiency: story
      outline: story
      plot: story
      summary: story
      language: helper

Credentials are environment variable references only; no secrets in files.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..errors import ValidationError
from ..gateway import HttpProvider, LlmGateway, MockProvider, ModelRole
from ..gateway.providers import Provider


@dataclass
class ServiceConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    storage_path: str = "./storyloom-data"
    provider_config: str | None = None
    mock_mode: bool = True
    mock_seed: int = 0
    cors_origins: list[str] = field(default_factory=lambda: ["http://localhost:5173"])
    genre_catalog: str | None = None
    capture_calls: bool = True
    job_wait: float = 2.0
    fsync: bool = True

    @classmethod
    def load(cls, path: str | None = None, env: dict | None = None) -> "ServiceConfig":
        env = os.environ if env is None else env
        data: dict = {}
        if path:
            loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
            if loaded is not None:
                if not isinstance(loaded, dict):
                    raise ValidationError("service config must be a YAML mapping")
                data = loaded

        config = cls(
            storage_path=data.get("storage_path", cls.storage_path),
            provider_config=data.get("providers"),
            mock_mode=bool(data.get("mock_mode", cls.mock_mode)),
            mock_seed=int(data.get("mock_seed", cls.mock_seed)),
            cors_origins=list(data.get("cors_origins", ["http://localhost:5173"])),
            genre_catalog=data.get("genre_catalog"),
            capture_calls=bool(data.get("capture_calls", True)),
            job_wait=float(data.get("job_wait", cls.job_wait)),
            fsync=bool(data.get("fsync", cls.fsync)),
        )
        if "listen" in data:
            config._set_listen(str(data["listen"]))

        if "STORYLOOM_LISTEN" in env:
            config._set_listen(env["STORYLOOM_LISTEN"])
        if "STORYLOOM_STORAGE_PATH" in env:
            config.storage_path = env["STORYLOOM_STORAGE_PATH"]
        if "STORYLOOM_PROVIDERS" in env:
            config.provider_config = env["STORYLOOM_PROVIDERS"]
        if "STORYLOOM_MOCK_MODE" in env:
            config.mock_mode = env["STORYLOOM_MOCK_MODE"] not in ("0", "false", "no", "")
        if "STORYLOOM_MOCK_SEED" in env:
            config.mock_seed = int(env["STORYLOOM_MOCK_SEED"])
        if "STORYLOOM_CORS_ORIGINS" in env:
            config.cors_origins = [o.strip() for o in env["STORYLOOM_CORS_ORIGINS"].split(",") if o.strip()]
        if "STORYLOOM_GENRE_CATALOG" in env:
            config.genre_catalog = env["STORYLOOM_GENRE_CATALOG"]
        return config

    def _set_listen(self, value: str) -> None:
        host, _, port = value.rpartition(":")
        if not host or not port.isdigit():
            raise ValidationError(f"listen address must be host:port, got {value!r}")
        self.listen_host, self.listen_port = host, int(port)


def load_providers(path: str | Path) -> dict[ModelRole, Provider]:
    """Build the role -> provider map from a provider config file."""
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    provider_defs = data.get("providers", {})
    role_map = data.get("roles", {})

    built: dict[str, Provider] = {}
    for name, spec in provider_defs.items():
        kind = spec.get("kind", "http")
        if kind == "mock":
            built[name] = MockProvider(seed=int(spec.get("seed", 0)))
        elif kind == "http":
            try:
                built[name] = HttpProvider(
                    provider_id=name,
                    endpoint=spec["endpoint"],
                    model=spec["model"],
                    api_key_env=spec["api_key_env"],
                    timeout=float(spec.get("timeout", 60.0)),
                )
            except KeyError as exc:
                raise ValidationError(f"provider {name!r} is missing {exc}") from None
        else:
            raise ValidationError(f"provider {name!r} has unknown kind {kind!r}")

    providers: dict[ModelRole, Provider] = {}
    for role in ModelRole:
        provider_name = role_map.get(role.value)
        if provider_name is None:
            raise ValidationError(f"no provider bound to role {role.value!r}")
        if provider_name not in built:
            raise ValidationError(f"role {role.value!r} bound to unknown provider {provider_name!r}")
        providers[role] = built[provider_name]
    return providers


def build_gateway(config: ServiceConfig) -> LlmGateway:
    if config.mock_mode:
        return LlmGateway.with_mock(seed=config.mock_seed, capture=config.capture_calls)
    if not config.provider_config:
        raise ValidationError("mock_mode is off but no provider config path is set")
    return LlmGateway(providers=load_providers(config.provider_config), capture=config.capture_calls)
