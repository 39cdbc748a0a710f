"""Genre catalog, loaded from a plain-text config file.

One genre per line: ``id | display name | example works``. Blank lines and
``#`` comments are skipped. A default catalog ships with the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import UnknownGenreError, ValidationError


@dataclass(frozen=True)
class Genre:
    genre_id: str
    display_name: str
    example_works: str

    def to_dict(self) -> dict:
        return {
            "genre_id": self.genre_id,
            "display_name": self.display_name,
            "example_works": self.example_works,
        }


class GenreCatalog:
    def __init__(self, genres: list[Genre]):
        self._genres = list(genres)
        self._by_id = {g.genre_id: g for g in genres}

    @classmethod
    def parse(cls, text: str) -> "GenreCatalog":
        genres = []
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [part.strip() for part in line.split("|")]
            if len(parts) != 3 or not all(parts):
                raise ValidationError(
                    f"genre catalog line {line_no}: expected 'id | display name | example works'"
                )
            genres.append(Genre(parts[0], parts[1], parts[2]))
        return cls(genres)

    @classmethod
    def from_file(cls, path: str | Path) -> "GenreCatalog":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> "GenreCatalog":
        text = (resources.files("storyloom.engine") / "data" / "genres.txt").read_text("utf-8")
        return cls.parse(text)

    def ids(self) -> list[str]:
        return [g.genre_id for g in self._genres]

    def all(self) -> list[Genre]:
        return list(self._genres)

    def require(self, genre_id: str) -> Genre:
        genre = self._by_id.get(genre_id)
        if genre is None:
            raise UnknownGenreError(genre_id, self.ids())
        return genre
