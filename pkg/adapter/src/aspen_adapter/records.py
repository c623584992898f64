"""Reading the toolkit's dataset JSONL files.

One JSON object per line with at least string "nl" and "cnl" fields (the
generator also writes id/category/origin/parent_id, which training only
uses for error reporting).  Format problems are collected across the
whole file and reported together, each tagged with the offending
record's id when it has one and its line number otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class DatasetFormatError(ValueError):
    def __init__(self, path: str, problems: list[str]):
        shown = "; ".join(problems[:5])
        more = f" (+{len(problems) - 5} more)" if len(problems) > 5 else ""
        super().__init__(f"{path}: {shown}{more}")
        self.path = path
        self.problems = tuple(problems)


@dataclass(frozen=True)
class TrainPair:
    record_id: str
    nl: str
    cnl: str


def read_pairs(path: str) -> list[TrainPair]:
    pairs: list[TrainPair] = []
    problems: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except ValueError:
                problems.append(f"line {lineno}: not valid JSON")
                continue
            if not isinstance(obj, dict):
                problems.append(f"line {lineno}: not an object")
                continue
            label = obj.get("id") if isinstance(obj.get("id"), str) else None
            where = f"record {label}" if label else f"line {lineno}"
            nl, cnl = obj.get("nl"), obj.get("cnl")
            if not isinstance(nl, str) or not nl:
                problems.append(f"{where}: nl must be a non-empty string")
                continue
            if not isinstance(cnl, str) or not cnl:
                problems.append(f"{where}: cnl must be a non-empty string")
                continue
            pairs.append(TrainPair(label or f"line-{lineno}", nl, cnl))
    if problems:
        raise DatasetFormatError(path, problems)
    if not pairs:
        raise DatasetFormatError(path, ["no records"])
    return pairs


def read_many(paths) -> list[TrainPair]:
    pairs: list[TrainPair] = []
    for path in paths:
        pairs.extend(read_pairs(path))
    return pairs
