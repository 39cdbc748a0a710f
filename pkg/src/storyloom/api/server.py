"""``storyloom-server``: run the HTTP service."""

from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .config import ServiceConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="storyloom-server", description="Run the story service.")
    parser.add_argument("--config", help="service config YAML path")
    parser.add_argument("--listen", help="host:port (overrides config)")
    parser.add_argument("--storage", help="event store root directory")
    parser.add_argument("--providers", help="provider config YAML path")
    parser.add_argument("--mock", action="store_true", help="serve every role with the offline mock")
    parser.add_argument("--no-mock", action="store_true", help="force real providers")
    parser.add_argument("--seed", type=int, help="mock provider seed")
    return parser


def config_from_args(args) -> ServiceConfig:
    config = ServiceConfig.load(args.config)
    if args.listen:
        config._set_listen(args.listen)
    if args.storage:
        config.storage_path = args.storage
    if args.providers:
        config.provider_config = args.providers
    if args.mock:
        config.mock_mode = True
    if args.no_mock:
        config.mock_mode = False
    if args.seed is not None:
        config.mock_seed = args.seed
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    app = create_app(config)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
