"""Brute-force grounding: Cartesian substitution plus comparison elimination.

Every rule is instantiated over all assignments of its variables to the
constant universe (the given constants plus every constant occurring in the
program).  Comparisons are evaluated per instance — instances with a false
comparison are dropped, satisfied comparisons are removed — so ground rules
contain only literals.  Choice-element variables that occur nowhere else in
the rule are local: they expand the element list within one instance instead
of multiplying instances.

The instantiation count is checked against a limit before rules are
materialized; exceeding it raises :class:`GroundingBlowup`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from aspen.asp.syntax import (
    INT,
    VAR,
    AspProgram,
    AspRule,
    Atom,
    Choice,
    ChoiceElement,
    Comparison,
    Literal,
    Term,
    WeakSpec,
    ground_key,
)

DEFAULT_INSTANTIATION_LIMIT = 10**6


class GroundingBlowup(RuntimeError):
    def __init__(self, count: int, limit: int):
        super().__init__(
            f"grounding needs {count} instantiations, over the limit of {limit}"
        )
        self.count = count
        self.limit = limit


@dataclass(frozen=True)
class GroundProgram:
    """Ground rules plus the indexed universe of atoms occurring in them."""

    rules: tuple[AspRule, ...]
    universe: tuple[Atom, ...]

    def index(self) -> dict[Atom, int]:
        return {atom: i for i, atom in enumerate(self.universe)}


def atom_sort_key(atom: Atom) -> tuple:
    return (atom.predicate, len(atom.args), tuple(ground_key(t) for t in atom.args))


def program_constants(rules) -> set[Term]:
    constants: set[Term] = set()

    def scan_term(t: Term) -> None:
        if t.kind != VAR:
            constants.add(t)

    for rule in rules:
        for atom in rule.atoms():
            for t in atom.args:
                scan_term(t)
        for item in rule.body:
            if isinstance(item, Comparison):
                scan_term(item.left)
                scan_term(item.right)
        if rule.weak is not None:
            scan_term(rule.weak.weight)
            for t in rule.weak.terms:
                scan_term(t)
    return constants


def evaluate_comparison(left: Term, op: str, right: Term) -> bool:
    """Total order over ground terms: integers by value below all symbols."""
    lk, rk = ground_key(left), ground_key(right)
    if op == "=":
        return lk == rk
    if op == "!=":
        return lk != rk
    if op == "<":
        return lk < rk
    if op == "<=":
        return lk <= rk
    if op == ">":
        return lk > rk
    return lk >= rk


def _rule_variables(rule: AspRule) -> list[str]:
    """Global variables in first-occurrence order (choice-local ones excluded)."""
    ordered: list[str] = []
    seen: set[str] = set()

    def add(t: Term) -> None:
        if t.kind == VAR and t.text not in seen:
            seen.add(t.text)
            ordered.append(t.text)

    if isinstance(rule.head, tuple):
        for atom in rule.head:
            for t in atom.args:
                add(t)
    for item in rule.body:
        if isinstance(item, Literal):
            for t in item.atom.args:
                add(t)
        else:
            add(item.left)
            add(item.right)
    if rule.weak is not None:
        add(rule.weak.weight)
        for t in rule.weak.terms:
            add(t)
    # Choice-element variables are local to their element unless they also
    # occur in the body or another non-choice position (already collected).
    return ordered


def _element_locals(elem: ChoiceElement, global_vars: set[str]) -> list[str]:
    ordered: list[str] = []
    seen: set[str] = set()
    for t in elem.variables():
        if t.kind == VAR and t.text not in global_vars and t.text not in seen:
            seen.add(t.text)
            ordered.append(t.text)
    return ordered


def _substitute_term(t: Term, binding: dict[str, Term]) -> Term:
    if t.kind == VAR:
        return binding[t.text]
    return t


def _substitute_atom(atom: Atom, binding: dict[str, Term]) -> Atom:
    if not atom.args:
        return atom
    return Atom(atom.predicate, tuple(_substitute_term(t, binding) for t in atom.args))


def _instantiation_count(rule: AspRule, n_constants: int) -> int:
    n_global = len(_rule_variables(rule))
    count = n_constants**n_global
    if isinstance(rule.head, Choice):
        global_set = set(_rule_variables(rule))
        expansions = 0
        for elem in rule.head.elements:
            expansions += n_constants ** len(_element_locals(elem, global_set))
        count *= max(1, expansions)
    return count


def ground(
    program: AspProgram | list[AspRule],
    constants=(),
    limit: int = DEFAULT_INSTANTIATION_LIMIT,
) -> GroundProgram:
    """Ground a program over the given constants plus its own constants.

    ``constants`` items may be Terms, ints, or strings (symbol names).
    Duplicate ground rules collapse to their first occurrence.
    """
    rules = list(program.rules if isinstance(program, AspProgram) else program)
    universe_terms = {_coerce_constant(c) for c in constants} | program_constants(rules)
    ordered_constants = sorted(universe_terms, key=ground_key)
    n_constants = len(ordered_constants)

    total = 0
    for rule in rules:
        total += _instantiation_count(rule, max(n_constants, 1))
        if total > limit:
            raise GroundingBlowup(total, limit)

    ground_rules: list[AspRule] = []
    seen_rules: set[AspRule] = set()
    for rule in rules:
        for instance in _instances(rule, ordered_constants):
            if instance not in seen_rules:
                seen_rules.add(instance)
                ground_rules.append(instance)

    atoms: set[Atom] = set()
    for rule in ground_rules:
        atoms.update(rule.atoms())
    universe = tuple(sorted(atoms, key=atom_sort_key))
    return GroundProgram(tuple(ground_rules), universe)


def _coerce_constant(c) -> Term:
    if isinstance(c, Term):
        if c.kind == VAR:
            raise ValueError(f"universe constants must be ground, got variable {c.text}")
        return c
    if isinstance(c, int):
        return Term(INT, value=c)
    if isinstance(c, str):
        return Term("sym", text=c)
    raise TypeError(f"cannot use {c!r} as a constant")


def _instances(rule: AspRule, constants: list[Term]):
    global_vars = _rule_variables(rule)
    assignments = (
        itertools.product(constants, repeat=len(global_vars)) if global_vars else [()]
    )
    for values in assignments:
        binding = dict(zip(global_vars, values))
        instance = _apply(rule, binding, constants)
        if instance is not None:
            yield instance


def _apply(rule: AspRule, binding: dict[str, Term], constants: list[Term]) -> AspRule | None:
    body: list[Literal] = []
    for item in rule.body:
        if isinstance(item, Comparison):
            left = _substitute_term(item.left, binding)
            right = _substitute_term(item.right, binding)
            if not evaluate_comparison(left, item.op, right):
                return None
        else:
            body.append(Literal(_substitute_atom(item.atom, binding), item.negated))

    head: tuple[Atom, ...] | Choice | None
    if rule.head is None:
        head = None
    elif isinstance(rule.head, tuple):
        head = tuple(_substitute_atom(a, binding) for a in rule.head)
    else:
        global_set = set(binding)
        elements: list[ChoiceElement] = []
        for elem in rule.head.elements:
            local_vars = _element_locals(elem, global_set)
            local_assignments = (
                itertools.product(constants, repeat=len(local_vars)) if local_vars else [()]
            )
            for local_values in local_assignments:
                local_binding = dict(binding)
                local_binding.update(zip(local_vars, local_values))
                elements.append(
                    ChoiceElement(
                        _substitute_atom(elem.atom, local_binding),
                        tuple(
                            Literal(_substitute_atom(lit.atom, local_binding), lit.negated)
                            for lit in elem.conditions
                        ),
                    )
                )
        # deduplicate expanded elements, preserving order
        unique: list[ChoiceElement] = []
        seen: set[ChoiceElement] = set()
        for e in elements:
            if e not in seen:
                seen.add(e)
                unique.append(e)
        head = Choice(tuple(unique), rule.head.lower, rule.head.upper)

    weak: WeakSpec | None = None
    if rule.weak is not None:
        weak = WeakSpec(
            _substitute_term(rule.weak.weight, binding),
            rule.weak.level,
            tuple(_substitute_term(t, binding) for t in rule.weak.terms),
        )
    return AspRule(head=head, body=tuple(body), weak=weak)
