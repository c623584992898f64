"""Bundled end-to-end problem specifications.

A problem directory holds three files:

    nl.txt        one natural-language sentence per line
    gold.lp       the reference program the pipeline's output must match
    problem.json  {"title": ..., "signature": [["edge", 2], ...],
                   "universe": [1, 2, ...]}

The signature and universe configure the bounded uniform-equivalence
check between the compiled program and the gold program.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from aspen.asp.parse import parse_program
from aspen.asp.syntax import AspProgram
from aspen.solver import FactSignature


@dataclass(frozen=True)
class Problem:
    name: str
    title: str
    nl_sentences: tuple[str, ...]
    gold: AspProgram
    signature: FactSignature
    universe: tuple

    def __post_init__(self) -> None:
        if not self.nl_sentences:
            raise ValueError(f"problem {self.name!r} has no sentences")


def _load_from(entry) -> Problem:
    """Build a Problem from a directory-like object (path or resource)."""
    nl_text = entry.joinpath("nl.txt").read_text(encoding="utf-8")
    sentences = tuple(
        line.strip() for line in nl_text.splitlines() if line.strip() and not line.startswith("#")
    )
    gold = parse_program(entry.joinpath("gold.lp").read_text(encoding="utf-8"))
    meta = json.loads(entry.joinpath("problem.json").read_text(encoding="utf-8"))
    signature = FactSignature(
        tuple((str(pred), int(arity)) for pred, arity in meta["signature"])
    )
    return Problem(
        name=entry.name,
        title=str(meta.get("title", entry.name)),
        nl_sentences=sentences,
        gold=gold,
        signature=signature,
        universe=tuple(meta["universe"]),
    )


def load_problem(path: str | Path) -> Problem:
    return _load_from(Path(path))


def bundled_problems() -> list[Problem]:
    """Every problem shipped inside the package, sorted by name."""
    from importlib import resources

    root = resources.files("aspen").joinpath("data/problems")
    problems = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.is_dir():
            problems.append(_load_from(entry))
    return problems


def bundled_problem(name: str) -> Problem:
    for problem in bundled_problems():
        if problem.name == name:
            return problem
    known = ", ".join(p.name for p in bundled_problems()) or "(none)"
    raise KeyError(f"no bundled problem named {name!r}; known: {known}")
