"""Template pairs with typed placeholders.

A template file is a sequence of blocks:

    # comment
    [quantified-choice]
    cnl: Noun_1 num_1 have an verb_1 noun_1 var_1, where var_1 is one of num_2, num_3.
    nl: There is noun_1 num_1 has an verb_1 to noun_1 var_1, where var_1 is one of the numbers num_2 or num_3.

Placeholder tokens: ``num_K``, ``verb_K``, ``noun_K``, ``var_K``,
``color_K``, ``PID_K`` (K a positive integer), plus the parameterized
``num_range(LO to HI)`` and ``num_choice(COUNT)`` /
``num_choice(COUNT, or|and)``.  A capitalized token (``Noun_1``)
capitalizes its replacement.  Both sides of a pair must use the same
placeholder set so a slot filled on one side fills the other identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from aspen.cnl.ast import CATEGORY_ORDER


class TemplateFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class PlaceholderMismatch(ValueError):
    """The CNL and NL sides of a pair use different placeholder sets."""


PLACEHOLDER_RE = re.compile(
    r"\bnum_range\s*\(\s*(?P<lo>\d+)\s+to\s+(?P<hi>\d+)\s*\)"
    r"|\bnum_choice\s*\(\s*(?P<count>\d+)(?:\s*,\s*(?P<conn>or|and))?\s*\)"
    r"|\b(?P<cat>[Nn]um|[Vv]erb|[Nn]oun|[Vv]ar|[Cc]olor|PID)_(?P<idx>[1-9]\d*)\b"
)


@dataclass(frozen=True)
class Placeholder:
    """One typed slot; ``key`` identifies the slot across both template sides."""

    category: str  # num | verb | noun | var | color | pid | num_range | num_choice
    index: int | None = None
    lo: int | None = None
    hi: int | None = None
    count: int | None = None
    connector: str | None = None  # "or" | "and-list"

    def __post_init__(self) -> None:
        if self.category == "num_range" and (self.lo is None or self.lo > self.hi):
            raise ValueError("num_range needs lo <= hi")
        if self.category == "num_choice":
            if not self.count or self.count < 1:
                raise ValueError("num_choice needs a positive count")
            if self.count > 10:
                raise ValueError("num_choice draws distinct integers from 1..10")

    @property
    def key(self) -> str:
        if self.category == "num_range":
            return f"num_range({self.lo} to {self.hi})"
        if self.category == "num_choice":
            conn = self.connector or ("or" if self.count == 2 else "and-list")
            return f"num_choice({self.count}, {conn})"
        return f"{self.category}_{self.index}"


def _placeholder_from_match(m: re.Match) -> tuple[Placeholder, bool]:
    """Returns the placeholder and whether the token was capitalized."""
    if m.group("lo") is not None:
        return Placeholder("num_range", lo=int(m.group("lo")), hi=int(m.group("hi"))), False
    if m.group("count") is not None:
        conn = m.group("conn")
        connector = None if conn is None else ("or" if conn == "or" else "and-list")
        return Placeholder("num_choice", count=int(m.group("count")), connector=connector), False
    cat = m.group("cat")
    capitalized = cat[0].isupper() and cat != "PID"
    return Placeholder(cat.lower(), index=int(m.group("idx"))), capitalized


def scan_placeholders(text: str) -> list[Placeholder]:
    """Placeholders in first-occurrence order, duplicates collapsed by key."""
    seen: dict[str, Placeholder] = {}
    for m in PLACEHOLDER_RE.finditer(text):
        ph, _ = _placeholder_from_match(m)
        seen.setdefault(ph.key, ph)
    return list(seen.values())


@dataclass(frozen=True)
class TemplatePair:
    cnl_template: str
    nl_template: str
    category: str

    def placeholders(self) -> list[Placeholder]:
        ordered: dict[str, Placeholder] = {}
        for ph in scan_placeholders(self.cnl_template) + scan_placeholders(self.nl_template):
            ordered.setdefault(ph.key, ph)
        return list(ordered.values())

    def validate(self) -> None:
        cnl_keys = {p.key for p in scan_placeholders(self.cnl_template)}
        nl_keys = {p.key for p in scan_placeholders(self.nl_template)}
        if cnl_keys != nl_keys:
            only_cnl = ", ".join(sorted(cnl_keys - nl_keys)) or "-"
            only_nl = ", ".join(sorted(nl_keys - cnl_keys)) or "-"
            raise PlaceholderMismatch(
                f"placeholder sets differ (cnl only: {only_cnl}; nl only: {only_nl})"
            )
        if self.category not in CATEGORY_ORDER:
            raise ValueError(f"unknown grammar category {self.category!r}")


def parse_templates(text: str) -> list[TemplatePair]:
    pairs: list[TemplatePair] = []
    category: str | None = None
    pending_cnl: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in CATEGORY_ORDER:
                raise TemplateFormatError(f"unknown category {name!r}", lineno)
            if pending_cnl is not None:
                raise TemplateFormatError("cnl line without a following nl line", lineno)
            category = name
            continue
        if line.startswith("cnl:"):
            if category is None:
                raise TemplateFormatError("cnl line before any [category] header", lineno)
            if pending_cnl is not None:
                raise TemplateFormatError("two cnl lines in a row", lineno)
            pending_cnl = line[len("cnl:") :].strip()
            continue
        if line.startswith("nl:"):
            if pending_cnl is None:
                raise TemplateFormatError("nl line without a preceding cnl line", lineno)
            pair = TemplatePair(pending_cnl, line[len("nl:") :].strip(), category)
            pair.validate()
            pairs.append(pair)
            pending_cnl = None
            continue
        raise TemplateFormatError(f"unrecognized line {line!r}", lineno)
    if pending_cnl is not None:
        raise TemplateFormatError("file ends with an unpaired cnl line", lineno)
    return pairs


def load_templates(path: str | Path) -> list[TemplatePair]:
    """Parse one .tpl file, or every *.tpl under a directory (sorted)."""
    path = Path(path)
    if path.is_dir():
        pairs: list[TemplatePair] = []
        for file in sorted(path.glob("*.tpl")):
            pairs.extend(parse_templates(file.read_text(encoding="utf-8")))
        return pairs
    return parse_templates(path.read_text(encoding="utf-8"))


def bundled_templates() -> list[TemplatePair]:
    """The template pairs shipped inside the package."""
    from importlib import resources

    root = resources.files("aspen").joinpath("data/templates")
    pairs: list[TemplatePair] = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".tpl"):
            pairs.extend(parse_templates(entry.read_text(encoding="utf-8")))
    return pairs
