"""Dataset accounting: per-category counts by origin plus audit identities."""

from __future__ import annotations

from dataclasses import dataclass

from aspen.cnl.ast import CATEGORY_ORDER


@dataclass(frozen=True)
class CategoryCounts:
    source: int
    generated: int
    rephrased: int
    total: int

    @classmethod
    def of(cls, source: int, generated: int, rephrased: int) -> "CategoryCounts":
        return cls(source, generated, rephrased, source + generated + rephrased)


@dataclass(frozen=True)
class DatasetManifest:
    rows: tuple[tuple[str, CategoryCounts], ...]
    grand: CategoryCounts
    rephrase_k: int | None = None

    def row(self, category: str) -> CategoryCounts | None:
        for name, counts in self.rows:
            if name == category:
                return counts
        return None

    def to_dict(self) -> dict:
        return {
            "rows": {
                name: {
                    "source": c.source,
                    "generated": c.generated,
                    "rephrased": c.rephrased,
                    "total": c.total,
                }
                for name, c in self.rows
            },
            "grand": {
                "source": self.grand.source,
                "generated": self.grand.generated,
                "rephrased": self.grand.rephrased,
                "total": self.grand.total,
            },
            "rephrase_k": self.rephrase_k,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetManifest":
        rows = tuple(
            (name, CategoryCounts(c["source"], c["generated"], c["rephrased"], c["total"]))
            for name, c in data["rows"].items()
        )
        g = data["grand"]
        grand = CategoryCounts(g["source"], g["generated"], g["rephrased"], g["total"])
        return cls(rows, grand, data.get("rephrase_k"))


def manifest_from_records(records, rephrase_k: int | None = None) -> DatasetManifest:
    tally: dict[str, dict[str, int]] = {}
    for r in records:
        row = tally.setdefault(r.category, {"source": 0, "generated": 0, "rephrased": 0})
        row[r.origin] += 1
    rows = tuple(
        (cat, CategoryCounts.of(t["source"], t["generated"], t["rephrased"]))
        for cat in CATEGORY_ORDER
        if (t := tally.get(cat)) is not None
    )
    grand = CategoryCounts.of(
        sum(c.source for _, c in rows),
        sum(c.generated for _, c in rows),
        sum(c.rephrased for _, c in rows),
    )
    return DatasetManifest(rows, grand, rephrase_k)


def audit_manifest(manifest: DatasetManifest) -> tuple[str, ...]:
    """Check every accounting identity; returns violations (empty = ok).

    Identities: each row's total equals source+generated+rephrased; the
    grand row equals the column sums; and when a rephrase factor k is
    declared, rephrased = k*(source+generated) per row and overall, which
    makes total = (k+1)*(source+generated).
    """
    violations: list[str] = []
    k = manifest.rephrase_k
    sums = {"source": 0, "generated": 0, "rephrased": 0, "total": 0}
    for name, c in manifest.rows:
        expected = c.source + c.generated + c.rephrased
        if c.total != expected:
            violations.append(
                f"{name}: total {c.total} != source+generated+rephrased = {expected}"
            )
        if k is not None and c.rephrased != k * (c.source + c.generated):
            violations.append(
                f"{name}: rephrased {c.rephrased} != {k}*(source+generated) = "
                f"{k * (c.source + c.generated)}"
            )
        sums["source"] += c.source
        sums["generated"] += c.generated
        sums["rephrased"] += c.rephrased
        sums["total"] += c.total
    g = manifest.grand
    for field_name, value in (
        ("source", g.source),
        ("generated", g.generated),
        ("rephrased", g.rephrased),
        ("total", g.total),
    ):
        if value != sums[field_name]:
            violations.append(
                f"grand {field_name} {value} != column sum {sums[field_name]}"
            )
    if g.total != g.source + g.generated + g.rephrased:
        violations.append(
            f"grand: total {g.total} != source+generated+rephrased = "
            f"{g.source + g.generated + g.rephrased}"
        )
    if k is not None and g.rephrased != k * (g.source + g.generated):
        violations.append(
            f"grand: rephrased {g.rephrased} != {k}*(source+generated) = "
            f"{k * (g.source + g.generated)}"
        )
    return tuple(violations)
