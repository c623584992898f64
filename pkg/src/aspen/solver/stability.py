"""Set-based stability checking, independent of the bitmask kernels.

Implements the textbook definition directly on Python sets: a stable model of
a ground disjunctive program is a model of the program that is a minimal
model of its reduct, established here by subset enumeration.  Weak constraints never
participate — callers must pass only hard rules.

This module is deliberately kept free of numpy/numba so it can serve as a
second, structurally different route for verifying what the kernels report.
"""

from __future__ import annotations

from itertools import chain, combinations
from typing import Iterable

from aspen.asp.syntax import AspRule, Atom, Choice, Literal


def _require_plain(rules: Iterable[AspRule]) -> list[AspRule]:
    checked = []
    for rule in rules:
        if rule.weak is not None:
            raise ValueError("weak constraints do not participate in stability")
        if isinstance(rule.head, Choice):
            raise ValueError("choice rules must be translated before stability checking")
        if not rule.is_ground:
            raise ValueError(f"stability checking needs ground rules, got {rule}")
        checked.append(rule)
    return checked


def is_model(rules: Iterable[AspRule], interpretation: frozenset[Atom] | set[Atom]) -> bool:
    """Classical satisfaction of every rule (negation as ordinary complement)."""
    I = frozenset(interpretation)
    for rule in _require_plain(rules):
        if _body_holds(rule.body, I) and not _head_holds(rule.head, I):
            return False
    return True


def _body_holds(body, I: frozenset[Atom]) -> bool:
    for item in body:
        assert isinstance(item, Literal), "ground rules contain only literals"
        if item.negated == (item.atom in I):
            return False
    return True


def _head_holds(head, I: frozenset[Atom]) -> bool:
    if head is None:
        return False
    return any(atom in I for atom in head)


def gl_reduct(rules: Iterable[AspRule], interpretation) -> list[AspRule]:
    """Delete rules with a negative literal true in I; strip the rest."""
    I = frozenset(interpretation)
    out: list[AspRule] = []
    for rule in _require_plain(rules):
        positive: list[Literal] = []
        deleted = False
        for item in rule.body:
            if item.negated:
                if item.atom in I:
                    deleted = True
                    break
            else:
                positive.append(item)
        if not deleted:
            out.append(AspRule(head=rule.head, body=tuple(positive)))
    return out


def _models_positive(rules: list[AspRule], J: frozenset[Atom]) -> bool:
    for rule in rules:
        if all(item.atom in J for item in rule.body) and not _head_holds(rule.head, J):
            return False
    return True


def is_stable_model(rules: Iterable[AspRule], interpretation) -> bool:
    """Definition check: model of the program, minimal model of the reduct."""
    rules = _require_plain(rules)
    I = frozenset(interpretation)
    if not is_model(rules, I):
        return False
    reduct = gl_reduct(rules, I)
    atoms = sorted(I, key=lambda a: (a.predicate, len(a.args), str(a)))
    for size in range(len(atoms)):
        for subset in combinations(atoms, size):
            if _models_positive(reduct, frozenset(subset)):
                return False
    return True


def stable_models_by_definition(rules: Iterable[AspRule], atoms: Iterable[Atom] | None = None):
    """Enumerate stable models by sweeping the powerset of the given atoms.

    Exponential in the atom count — intended for desk-scale cross-checks.
    When ``atoms`` is None, every atom occurring in the rules is used.
    """
    rules = _require_plain(rules)
    if atoms is None:
        atom_set: set[Atom] = set()
        for rule in rules:
            atom_set.update(rule.atoms())
        atoms = sorted(atom_set, key=lambda a: (a.predicate, len(a.args), str(a)))
    else:
        atoms = list(atoms)
    found = []
    for subset in chain.from_iterable(combinations(atoms, k) for k in range(len(atoms) + 1)):
        I = frozenset(subset)
        if is_stable_model(rules, I):
            found.append(I)
    return found
