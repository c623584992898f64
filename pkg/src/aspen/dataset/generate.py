"""Placeholder instantiation and balanced record generation."""

from __future__ import annotations

import random
import re
from dataclasses import replace

from aspen.cnl import check_syntax
from aspen.cnl.ast import CATEGORY_ORDER

from .bow import BagOfWords
from .records import DatasetRecord
from .templates import PLACEHOLDER_RE, Placeholder, TemplatePair, _placeholder_from_match
from .manifest import DatasetManifest, manifest_from_records

# var_K is positional, not drawn: the K-th name from this pool.
VARIABLE_POOL = tuple("XYZUVWABCDEFGHIJKLMNOPQRST")

RETRY_CAP = 20


class RetryExhausted(RuntimeError):
    def __init__(self, category: str, template: TemplatePair):
        super().__init__(
            f"no syntactically valid record after {RETRY_CAP} draws for a "
            f"{category} template: {template.cnl_template!r}"
        )
        self.category = category
        self.template = template


def _choice_text(numbers: list[int], connector: str) -> str:
    words = [str(n) for n in numbers]
    if connector == "or":
        return " or ".join(words) if len(words) == 2 else ", ".join(words[:-1]) + f" or {words[-1]}"
    if len(words) == 1:
        return words[0]
    if len(words) == 2:
        return f"{words[0]} and {words[1]}"
    return ", ".join(words[:-1]) + f", and {words[-1]}"


def _fill_values(
    placeholders: list[Placeholder],
    bow: BagOfWords,
    rng: random.Random,
    overrides,
) -> dict[str, str]:
    """One replacement string per placeholder key.

    Word categories draw seeded-uniform without within-record repeats;
    num_K defaults to K; var_K is the K-th pool name; num_range draws in
    its bounds; num_choice draws distinct integers from 1..10, sorted.
    """
    overrides = dict(overrides or {})
    remaining: dict[str, list[str]] = {}
    fills: dict[str, str] = {}
    for ph in placeholders:
        if ph.key in overrides:
            fills[ph.key] = str(overrides[ph.key])
            if ph.category in ("verb", "noun", "pid", "color"):
                remaining.setdefault(ph.category, list(bow.for_category(ph.category)))
                if fills[ph.key] in remaining[ph.category]:
                    remaining[ph.category].remove(fills[ph.key])
            continue
        if ph.category == "num":
            fills[ph.key] = str(ph.index)
        elif ph.category == "var":
            fills[ph.key] = VARIABLE_POOL[(ph.index - 1) % len(VARIABLE_POOL)]
        elif ph.category == "num_range":
            fills[ph.key] = str(rng.randint(ph.lo, ph.hi))
        elif ph.category == "num_choice":
            numbers = sorted(rng.sample(range(1, 11), ph.count))
            connector = ph.connector or ("or" if ph.count == 2 else "and-list")
            fills[ph.key] = _choice_text(numbers, connector)
        else:
            pool = remaining.setdefault(ph.category, list(bow.for_category(ph.category)))
            if not pool:
                raise ValueError(
                    f"bag of words ran out of {ph.category} entries within one record"
                )
            word = pool.pop(rng.randrange(len(pool)))
            fills[ph.key] = word
    return fills


def _apply_fills(text: str, fills: dict[str, str]) -> str:
    def sub(m: re.Match) -> str:
        ph, capitalized = _placeholder_from_match(m)
        value = fills[ph.key]
        if capitalized and value:
            return value[0].upper() + value[1:]
        return value

    return PLACEHOLDER_RE.sub(sub, text)


def instantiate_with_fills(
    template: TemplatePair,
    bow: BagOfWords,
    seed,
    overrides=None,
) -> tuple[DatasetRecord, dict[str, str]]:
    """Instantiate and also return the slot→replacement map used."""
    template.validate()
    rng = random.Random(seed)
    fills = _fill_values(template.placeholders(), bow, rng, overrides)
    record = DatasetRecord(
        id="",
        nl=_apply_fills(template.nl_template, fills),
        cnl=_apply_fills(template.cnl_template, fills),
        category=template.category,
        origin="generated",
    )
    return record, fills


def instantiate(template: TemplatePair, bow: BagOfWords, seed, overrides=None) -> DatasetRecord:
    """Fill every placeholder; the same slot fills identically on both sides."""
    record, _ = instantiate_with_fills(template, bow, seed, overrides)
    return record


def generate_balanced(
    templates,
    bow: BagOfWords,
    targets,
    seed,
) -> tuple[list[DatasetRecord], DatasetManifest]:
    """Generate per-category record counts that hit ``targets`` exactly.

    Templates rotate round-robin within a category; draws failing the
    grammar check are retried with fresh randomness up to RETRY_CAP before
    RetryExhausted.  Output is deterministic in (templates, targets, seed).
    """
    targets = dict(targets)
    unknown = set(targets) - set(CATEGORY_ORDER)
    if unknown:
        raise ValueError(f"unknown categories in targets: {', '.join(sorted(unknown))}")
    by_category: dict[str, list[TemplatePair]] = {}
    for t in templates:
        by_category.setdefault(t.category, []).append(t)

    records: list[DatasetRecord] = []
    serial = 0
    for category in CATEGORY_ORDER:
        want = targets.get(category, 0)
        if want == 0:
            continue
        pool = by_category.get(category)
        if not pool:
            raise ValueError(f"no templates available for category {category!r}")
        for i in range(want):
            template = pool[i % len(pool)]
            for attempt in range(RETRY_CAP):
                record = instantiate(template, bow, seed=f"{seed}:{category}:{i}:{attempt}")
                if check_syntax(record.cnl).accepted:
                    break
            else:
                raise RetryExhausted(category, template)
            serial += 1
            records.append(replace(record, id=f"g{serial:06d}"))
    return records, manifest_from_records(records)
