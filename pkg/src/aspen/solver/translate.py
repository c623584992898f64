"""Translation of ground choice rules into disjunction-free form.

Each ground choice rule ``l <= {a1 : C1; ...; an : Cn} <= u :- B`` becomes:

- per element i, a support pair over a fresh rejection atom R_i::

      ai :- B, Ci, not R_i.
      R_i :- B, Ci, not ai.

  which makes each applicable element freely in or out of a stable model;

- for a lower bound l, a fresh "off" atom per element (derivable exactly when
  the element is not chosen while B holds), plus one constraint per
  (n-l+1)-subset of elements saying not all of those can be off;

- for an upper bound u, one constraint per (u+1)-subset whose body asserts
  all chosen.

Auxiliary predicates take the rule and element index as arguments, and their
names are chosen to avoid every predicate occurring in the input.  Callers
project them out of reported answer sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from aspen.asp.syntax import AspRule, Atom, Choice, Literal, num

SUBSET_LIMIT = 100_000


class ChoiceTooWide(RuntimeError):
    def __init__(self, n_subsets: int):
        super().__init__(
            f"choice bound translation needs {n_subsets} subset constraints "
            f"(limit {SUBSET_LIMIT})"
        )


@dataclass(frozen=True)
class TranslatedProgram:
    rules: tuple[AspRule, ...]
    aux_atoms: frozenset[Atom]


def _fresh_prefix(rules) -> str:
    used = {atom.predicate for rule in rules for atom in rule.atoms()}
    base = "chc"
    while f"{base}_rej" in used or f"{base}_off" in used:
        base += "x"
    return base


def translate_choices(rules) -> TranslatedProgram:
    """Rewrite every choice rule; non-choice rules pass through unchanged."""
    if not any(isinstance(r.head, Choice) for r in rules):
        return TranslatedProgram(tuple(rules), frozenset())

    prefix = _fresh_prefix(rules)
    out: list[AspRule] = []
    aux: set[Atom] = set()
    for rule_idx, rule in enumerate(rules):
        if not isinstance(rule.head, Choice):
            out.append(rule)
            continue
        choice = rule.head
        body = rule.body
        n = len(choice.elements)

        for elem_idx, elem in enumerate(choice.elements):
            reject = Atom(f"{prefix}_rej", (num(rule_idx), num(elem_idx)))
            aux.add(reject)
            applicable = body + elem.conditions
            out.append(
                AspRule(head=(elem.atom,), body=applicable + (Literal(reject, negated=True),))
            )
            out.append(
                AspRule(head=(reject,), body=applicable + (Literal(elem.atom, negated=True),))
            )

        lower = choice.lower if choice.lower is not None else 0
        if lower > 0:
            if lower > n:
                # Bound can never be met: forbid the body outright.  With an
                # empty body this is an always-violated constraint, which the
                # solver handles even though it has no printable form.
                out.append(AspRule(head=None, body=body))
                continue
            off_atoms = []
            for elem_idx, elem in enumerate(choice.elements):
                off = Atom(f"{prefix}_off", (num(rule_idx), num(elem_idx)))
                aux.add(off)
                off_atoms.append(off)
                out.append(
                    AspRule(head=(off,), body=body + (Literal(elem.atom, negated=True),))
                )
                for lit in elem.conditions:
                    flipped = Literal(lit.atom, negated=not lit.negated)
                    out.append(AspRule(head=(off,), body=body + (flipped,)))
            k = n - lower + 1
            _check_subsets(n, k)
            for subset in itertools.combinations(range(n), k):
                extra = tuple(Literal(off_atoms[j]) for j in subset)
                out.append(AspRule(head=None, body=body + extra))

        upper = choice.upper
        if upper is not None and upper < n:
            k = upper + 1
            _check_subsets(n, k)
            for subset in itertools.combinations(range(n), k):
                extra: list[Literal] = []
                for j in subset:
                    elem = choice.elements[j]
                    extra.append(Literal(elem.atom))
                    extra.extend(elem.conditions)
                out.append(AspRule(head=None, body=body + tuple(extra)))

    return TranslatedProgram(tuple(out), frozenset(aux))


def _check_subsets(n: int, k: int) -> None:
    count = 1
    for i in range(k):
        count = count * (n - i) // (i + 1)
        if count > SUBSET_LIMIT:
            raise ChoiceTooWide(count)
