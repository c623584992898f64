"""Dataset records and their line-delimited JSON file format."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from aspen.cnl.ast import CATEGORY_ORDER

ORIGINS = ("source", "generated", "rephrased")


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    nl: str
    cnl: str
    category: str
    origin: str
    parent_id: str | None = None

    def __post_init__(self) -> None:
        if self.category not in CATEGORY_ORDER:
            raise ValueError(f"unknown grammar category {self.category!r}")
        if self.origin not in ORIGINS:
            raise ValueError(f"unknown origin {self.origin!r}")
        if (self.parent_id is not None) != (self.origin == "rephrased"):
            raise ValueError("parent_id is set exactly when origin is 'rephrased'")


def record_to_line(record: DatasetRecord) -> str:
    return json.dumps(asdict(record), ensure_ascii=False, sort_keys=True)


def record_from_line(line: str) -> DatasetRecord:
    data = json.loads(line)
    return DatasetRecord(
        id=data["id"],
        nl=data["nl"],
        cnl=data["cnl"],
        category=data["category"],
        origin=data["origin"],
        parent_id=data.get("parent_id"),
    )


def write_dataset(path: str | Path, records) -> int:
    path = Path(path)
    lines = [record_to_line(r) for r in records]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return len(lines)


def read_dataset(path: str | Path) -> list[DatasetRecord]:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(record_from_line(line))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad dataset record: {exc}") from exc
    return out
