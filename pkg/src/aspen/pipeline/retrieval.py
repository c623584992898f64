"""Offline translator that inverts the sentence templates.

Each NL template compiles to an anchored regex whose placeholder slots
become typed capture groups (numbers, variables, vocabulary words,
number lists).  Translating a sentence means finding the first template
whose regex matches with mutually consistent slot captures, then filling
the paired CNL template with those captures — the exact inverse of
dataset instantiation.  No match is a value, not an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from aspen.dataset.generate import _apply_fills
from aspen.dataset.templates import (
    PLACEHOLDER_RE,
    TemplatePair,
    _placeholder_from_match,
    bundled_templates,
)

_NUM = r"\d+"
_VAR = r"[A-Z][0-9]*"
_WORD_LOWER = r"[a-z][a-z0-9_]*"
_WORD_CAP = r"[A-Z][a-z0-9_]*"


def _choice_pattern(count: int, connector: str) -> str:
    middle = r", \d+" * (count - 2)
    if connector == "or":
        return _NUM if count == 1 else rf"\d+{middle} or \d+"
    if count == 1:
        return _NUM
    if count == 2:
        return r"\d+ and \d+"
    return rf"\d+{middle}, and \d+"


@dataclass(frozen=True)
class _Slot:
    group: str
    key: str
    kind: str  # word | exact | range
    lo: int | None = None
    hi: int | None = None


@dataclass(frozen=True)
class IndexEntry:
    pair: TemplatePair
    regex: re.Pattern
    slots: tuple[_Slot, ...]


def _compile_entry(pair: TemplatePair) -> IndexEntry:
    template = pair.nl_template
    parts = ["^"]
    slots: list[_Slot] = []
    cursor = 0
    for number, match in enumerate(PLACEHOLDER_RE.finditer(template)):
        parts.append(re.escape(template[cursor : match.start()]))
        placeholder, capitalized = _placeholder_from_match(match)
        group = f"g{number}"
        if placeholder.category in ("noun", "verb", "pid", "color"):
            pattern = _WORD_CAP if capitalized else _WORD_LOWER
            slots.append(_Slot(group, placeholder.key, "word"))
        elif placeholder.category == "var":
            pattern = _VAR
            slots.append(_Slot(group, placeholder.key, "exact"))
        elif placeholder.category == "num":
            pattern = _NUM
            slots.append(_Slot(group, placeholder.key, "exact"))
        elif placeholder.category == "num_range":
            pattern = _NUM
            slots.append(
                _Slot(group, placeholder.key, "range", lo=placeholder.lo, hi=placeholder.hi)
            )
        else:  # num_choice
            connector = placeholder.connector or ("or" if placeholder.count == 2 else "and-list")
            pattern = _choice_pattern(placeholder.count, connector)
            slots.append(_Slot(group, placeholder.key, "exact"))
        parts.append(f"(?P<{group}>{pattern})")
        cursor = match.end()
    parts.append(re.escape(template[cursor:]))
    parts.append("$")
    return IndexEntry(pair, re.compile("".join(parts)), tuple(slots))


@dataclass(frozen=True)
class TemplateIndex:
    entries: tuple[IndexEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


def build_template_index(pairs=None) -> TemplateIndex:
    """Index template pairs for matching; bundled pairs by default.

    Order matters: the first matching template wins, so callers get the
    same candidate on every run.
    """
    pairs = bundled_templates() if pairs is None else list(pairs)
    return TemplateIndex(tuple(_compile_entry(pair) for pair in pairs))


def _extract_fills(entry: IndexEntry, sentence: str) -> dict[str, str] | None:
    match = entry.regex.match(sentence)
    if match is None:
        return None
    fills: dict[str, str] = {}
    for slot in entry.slots:
        text = match.group(slot.group)
        if slot.kind == "word":
            value = text[0].lower() + text[1:]
        elif slot.kind == "range":
            if not slot.lo <= int(text) <= slot.hi:
                return None
            value = text
        else:
            value = text
        if fills.setdefault(slot.key, value) != value:
            return None  # the same slot captured two different spans
    return fills


def retrieval_translate(nl: str, index: TemplateIndex) -> str | None:
    """CNL candidate for one sentence, or None when no template aligns."""
    sentence = " ".join(nl.split())
    for entry in index.entries:
        fills = _extract_fills(entry, sentence)
        if fills is not None:
            return _apply_fills(entry.pair.cnl_template, fills)
    return None


class RetrievalTranslator:
    """Callable wrapper holding a prebuilt index."""

    def __init__(self, pairs=None):
        self.index = build_template_index(pairs)

    def translate(self, nl: str) -> str | None:
        return retrieval_translate(nl, self.index)

    def translate_many(self, sentences) -> list[str | None]:
        return [self.translate(nl) for nl in sentences]
