"""Bags of words backing placeholder replacement.

Loaded from a directory of plain-text files (``pids.txt``, ``nouns.txt``,
``verbs.txt``, ``colors.txt``), one lowercase word per line, ``#`` comments
allowed.  The bundled lists ship at the reference sizes 21/77/408 plus a
color list.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path


class EmptyBagCategory(ValueError):
    def __init__(self, category: str):
        super().__init__(f"bag of words has no entries for category {category!r}")
        self.category = category


@dataclass(frozen=True)
class BagOfWords:
    pids: tuple[str, ...]
    nouns: tuple[str, ...]
    verbs: tuple[str, ...]
    colors: tuple[str, ...]

    def __post_init__(self) -> None:
        for category in ("pids", "nouns", "verbs", "colors"):
            words = getattr(self, category)
            if len(set(words)) != len(words):
                dupes = sorted({w for w in words if words.count(w) > 1})
                raise ValueError(f"duplicate {category} entries: {', '.join(dupes)}")

    def for_category(self, category: str) -> tuple[str, ...]:
        table = {
            "pid": self.pids,
            "noun": self.nouns,
            "verb": self.verbs,
            "color": self.colors,
        }
        words = table.get(category)
        if not words:
            raise EmptyBagCategory(category)
        return words


def _read_words(text: str) -> tuple[str, ...]:
    words = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return tuple(words)


def load_bow(directory: str | Path) -> BagOfWords:
    directory = Path(directory)
    parts = {}
    for category in ("pids", "nouns", "verbs", "colors"):
        file = directory / f"{category}.txt"
        parts[category] = _read_words(file.read_text(encoding="utf-8")) if file.exists() else ()
    return BagOfWords(**parts)


def bundled_bow() -> BagOfWords:
    """The word lists shipped inside the package."""
    root = resources.files("aspen").joinpath("data/bow")
    parts = {}
    for category in ("pids", "nouns", "verbs", "colors"):
        parts[category] = _read_words(root.joinpath(f"{category}.txt").read_text(encoding="utf-8"))
    return BagOfWords(**parts)
