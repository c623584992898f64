"""Rule safety validation.

A rule is safe when every variable occurring in its head, in a negative body
literal, or in a weak-constraint annotation also occurs in a positive body
literal.  A choice-element variable may instead be bound by the element's own
positive conditions.  Comparison-only variables are not required to be bound
here: the grounder ranges them over the constant universe.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import AspRule, Choice, Literal, Term, VAR


@dataclass(frozen=True)
class SafetyViolation:
    variable: str
    place: str  # "head" | "negative body" | "weak annotation"

    def __str__(self) -> str:
        return f"variable {self.variable} in {self.place} is not bound by a positive body literal"


@dataclass(frozen=True)
class SafetyReport:
    ok: bool
    violations: tuple[SafetyViolation, ...] = ()


def _positive_body_vars(rule: AspRule) -> set[str]:
    bound: set[str] = set()
    for item in rule.body:
        if isinstance(item, Literal) and not item.negated:
            bound.update(t.text for t in item.variables())
    return bound


def validate_safety(rule: AspRule) -> SafetyReport:
    """Check one rule; reports every unbound variable with its place."""
    bound = _positive_body_vars(rule)
    violations: list[SafetyViolation] = []
    seen: set[tuple[str, str]] = set()

    def note(variable: Term, place: str, extra_bound: set[str] = frozenset()) -> None:
        name = variable.text
        if name in bound or name in extra_bound:
            return
        key = (name, place)
        if key not in seen:
            seen.add(key)
            violations.append(SafetyViolation(name, place))

    if isinstance(rule.head, tuple):
        for atom in rule.head:
            for v in atom.variables():
                note(v, "head")
    elif isinstance(rule.head, Choice):
        for elem in rule.head.elements:
            local = set()
            for lit in elem.conditions:
                if not lit.negated:
                    local.update(t.text for t in lit.variables())
            for v in elem.atom.variables():
                note(v, "head", local)
            for lit in elem.conditions:
                if lit.negated:
                    for v in lit.variables():
                        note(v, "negative body", local)

    for item in rule.body:
        if isinstance(item, Literal) and item.negated:
            for v in item.variables():
                note(v, "negative body")

    if rule.weak is not None:
        if rule.weak.weight.kind == VAR:
            note(rule.weak.weight, "weak annotation")
        for t in rule.weak.terms:
            if t.kind == VAR:
                note(t, "weak annotation")

    return SafetyReport(ok=not violations, violations=tuple(violations))


def validate_program_safety(rules) -> list[tuple[int, SafetyViolation]]:
    """Safety-check a sequence of rules; returns (rule index, violation) pairs."""
    out: list[tuple[int, SafetyViolation]] = []
    for i, rule in enumerate(rules):
        report = validate_safety(rule)
        for v in report.violations:
            out.append((i, v))
    return out
