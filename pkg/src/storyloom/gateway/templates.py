"""Prompt templates: plain-text files with ``$name`` placeholders.

A template's required bindings are exactly the placeholders found in its
body. Rendering with a missing binding fails naming the placeholder, and a
successful render never leaves a placeholder unsubstituted.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import ProviderConfigError

_PLACEHOLDER_RE = re.compile(r"\$(?:\{([A-Za-z_][A-Za-z0-9_]*)\}|([A-Za-z_][A-Za-z0-9_]*))")


def _placeholders(body: str) -> frozenset[str]:
    names = set()
    for match in _PLACEHOLDER_RE.finditer(body.replace("$$", "")):
        names.add(match.group(1) or match.group(2))
    return frozenset(names)


class MissingBindingError(ProviderConfigError):
    """A required placeholder was not bound. Carries its name."""

    def __init__(self, template_id: str, placeholder: str):
        super().__init__(f"template {template_id!r} is missing binding {placeholder!r}")
        self.placeholder = placeholder


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    body: str
    required_bindings: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def from_text(cls, template_id: str, body: str) -> "PromptTemplate":
        return cls(template_id=template_id, body=body, required_bindings=_placeholders(body))

    def render(self, bindings: dict[str, str]) -> str:
        for name in sorted(self.required_bindings):
            if name not in bindings:
                raise MissingBindingError(self.template_id, name)
        return string.Template(self.body).substitute({k: str(v) for k, v in bindings.items()})


class TemplateCatalog:
    """Template lookup by id. Loaded from a directory of ``<id>.txt`` files."""

    def __init__(self, templates: dict[str, PromptTemplate]):
        self._templates = dict(templates)

    @classmethod
    def from_dir(cls, path: str | Path) -> "TemplateCatalog":
        templates = {}
        for file in sorted(Path(path).glob("*.txt")):
            templates[file.stem] = PromptTemplate.from_text(file.stem, file.read_text(encoding="utf-8"))
        return cls(templates)

    @classmethod
    def default(cls) -> "TemplateCatalog":
        root = resources.files("storyloom.gateway") / "data" / "templates"
        templates = {}
        for file in sorted(root.iterdir(), key=lambda f: f.name):
            if file.name.endswith(".txt"):
                stem = file.name[: -len(".txt")]
                templates[stem] = PromptTemplate.from_text(stem, file.read_text(encoding="utf-8"))
        return cls(templates)

    def __contains__(self, template_id: str) -> bool:
        return template_id in self._templates

    def get(self, template_id: str) -> PromptTemplate:
        try:
            return self._templates[template_id]
        except KeyError:
            raise ProviderConfigError(f"no prompt template named {template_id!r}") from None

    def render(self, template_id: str, bindings: dict[str, str]) -> str:
        return self.get(template_id).render(bindings)

    def ids(self) -> list[str]:
        return sorted(self._templates)
