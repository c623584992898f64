"""Bounded uniform-equivalence checking.

Two programs are uniformly equivalent over a fact signature and constant
universe when, for every set of facts over that signature, both programs
extended with those facts have identical answer-set families.  This module
decides the bounded variant by enumeration: exhaustively over every fact set,
or over a seeded random sample.  Weak-constraint costs are ignored — only the
families of atom sets are compared.

Each program is ground once over the universe; fact sets are appended as
ground rules afterwards, which keeps the sweep affordable.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from aspen.asp.syntax import AspProgram, AspRule, Atom, ground_key

from .ground import _coerce_constant, atom_sort_key, ground
from .models import DEFAULT_ATOM_BOUND, answer_sets

MAX_EXHAUSTIVE_ATOMS = 16


@dataclass(frozen=True)
class FactSignature:
    """Predicates (with arities) that fact sets may use."""

    predicates: tuple[tuple[str, int], ...]

    def atoms(self, universe: tuple) -> list[Atom]:
        out = []
        for predicate, arity in self.predicates:
            for args in itertools.product(universe, repeat=arity):
                out.append(Atom(predicate, args))
        return sorted(out, key=atom_sort_key)


@dataclass(frozen=True)
class Counterexample:
    """A fact set on which the two programs disagree, with both families."""

    facts: tuple[Atom, ...]
    first_families: tuple[tuple[Atom, ...], ...]
    second_families: tuple[tuple[Atom, ...], ...]

    def __str__(self) -> str:
        facts = ", ".join(str(a) for a in self.facts) or "(empty)"
        return (
            f"facts: {facts}\n"
            f"first program:  {len(self.first_families)} answer set(s)\n"
            f"second program: {len(self.second_families)} answer set(s)"
        )


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    mode: str
    checked: int
    counterexample: Counterexample | None = None


def _families(program_rules, facts, atom_bound, backend, recheck):
    rules = list(program_rules) + [AspRule(head=(atom,)) for atom in facts]
    result = answer_sets(rules, atom_bound=atom_bound, backend=backend, recheck=recheck)
    return result.families()


def _render(families) -> tuple[tuple[Atom, ...], ...]:
    rendered = [tuple(sorted(f, key=atom_sort_key)) for f in families]
    return tuple(sorted(rendered, key=lambda fam: [atom_sort_key(a) for a in fam]))


def check_uniform_equivalence(
    first: AspProgram,
    second: AspProgram,
    signature: FactSignature,
    universe,
    *,
    mode: str = "exhaustive",
    samples: int = 256,
    seed: int = 0,
    atom_bound: int = DEFAULT_ATOM_BOUND,
    limit: int = 10**6,
    backend: str | None = None,
    recheck: bool = False,
) -> EquivalenceVerdict:
    """Decide bounded uniform equivalence of two programs.

    ``universe`` lists the constants fact sets draw from (program constants
    join the grounding universe automatically).  Exhaustive mode sweeps all
    2^n fact sets and refuses to start above ``MAX_EXHAUSTIVE_ATOMS``
    candidate atoms; random mode draws ``samples`` seeded subsets.  The
    verdict is symmetric and reflexive by construction.
    """
    first_ground = ground(list(first.rules), constants=universe, limit=limit)
    second_ground = ground(list(second.rules), constants=universe, limit=limit)

    constants = tuple(sorted({_coerce_constant(c) for c in universe}, key=ground_key))
    candidates = signature.atoms(constants)
    n = len(candidates)

    if mode == "exhaustive":
        if n > MAX_EXHAUSTIVE_ATOMS:
            raise ValueError(
                f"{n} candidate fact atoms gives 2^{n} fact sets; use mode='random'"
            )
        masks = range(1 << n)
    elif mode == "random":
        rng = random.Random(seed)
        masks = [rng.getrandbits(n) for _ in range(samples)]
    else:
        raise ValueError(f"unknown mode {mode!r} (use 'exhaustive' or 'random')")

    checked = 0
    for mask in masks:
        facts = tuple(candidates[i] for i in range(n) if (mask >> i) & 1)
        one = _families(first_ground.rules, facts, atom_bound, backend, recheck)
        two = _families(second_ground.rules, facts, atom_bound, backend, recheck)
        checked += 1
        if one != two:
            return EquivalenceVerdict(
                equivalent=False,
                mode=mode,
                checked=checked,
                counterexample=Counterexample(facts, _render(one), _render(two)),
            )
    return EquivalenceVerdict(equivalent=True, mode=mode, checked=checked)


def recheck_counterexample(
    first: AspProgram,
    second: AspProgram,
    counterexample: Counterexample,
    universe,
    *,
    atom_bound: int = DEFAULT_ATOM_BOUND,
    limit: int = 10**6,
    backend: str | None = None,
) -> bool:
    """Re-solve both programs on the counterexample facts; True = still differ."""
    first_ground = ground(list(first.rules), constants=universe, limit=limit)
    second_ground = ground(list(second.rules), constants=universe, limit=limit)
    one = _families(first_ground.rules, counterexample.facts, atom_bound, backend, True)
    two = _families(second_ground.rules, counterexample.facts, atom_bound, backend, True)
    return one != two
