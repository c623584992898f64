"""Answer-set enumeration over ground programs.

Pipeline: translate choice rules away, close the set of potentially
derivable atoms (least fixpoint over positive bodies, negation ignored),
simplify rules against that set, then sweep all interpretations of the
remaining atoms with a bitmask kernel.  Atoms outside the derivable set are
false in every stable model, so the simplification is exact, not heuristic;
it is what keeps the enumeration space within the atom bound.

Every reported answer set is re-checked by default against the set-based
stability definition in :mod:`aspen.solver.stability`, which shares no code
with the kernels.  Weak constraints never affect stability; they annotate
each answer set with a cost per priority level, where identical
(weight, level, terms) violation tuples count once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from aspen.asp.syntax import INT, AspProgram, AspRule, Atom, Literal

from .ground import GroundProgram, atom_sort_key, ground
from .kernels import default_backend, enumerate_stable
from .stability import is_stable_model
from .translate import translate_choices

DEFAULT_ATOM_BOUND = 22


class UniverseTooLarge(RuntimeError):
    def __init__(self, n_atoms: int, bound: int):
        super().__init__(
            f"enumeration space has {n_atoms} atoms, over the bound of {bound}; "
            f"raise the bound only if 2^{n_atoms} sweeps are affordable"
        )
        self.n_atoms = n_atoms
        self.bound = bound


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class AnswerSet:
    """Visible atoms of one stable model plus its cost per priority level."""

    atoms: frozenset[Atom]
    costs: tuple[tuple[int, int], ...] = ()  # (level, total) sorted by level desc

    def project(self, predicate: str) -> frozenset[Atom]:
        return frozenset(a for a in self.atoms if a.predicate == predicate)

    def sorted_atoms(self) -> list[Atom]:
        return sorted(self.atoms, key=atom_sort_key)

    def __str__(self) -> str:
        inner = ", ".join(str(a) for a in self.sorted_atoms())
        return "{" + inner + "}"


@dataclass(frozen=True)
class SolveResult:
    answer_sets: tuple[AnswerSet, ...]
    backend: str
    n_ground_atoms: int
    n_enumeration_atoms: int
    n_free_atoms: int

    def __iter__(self):
        return iter(self.answer_sets)

    def __len__(self) -> int:
        return len(self.answer_sets)

    def families(self) -> frozenset[frozenset[Atom]]:
        return frozenset(a.atoms for a in self.answer_sets)


def _derivable_closure(rules: list[AspRule]) -> set[Atom]:
    derivable: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if rule.head is None:
                continue
            if all(
                (item.atom in derivable)
                for item in rule.body
                if isinstance(item, Literal) and not item.negated
            ):
                for atom in rule.head_atoms():
                    if atom not in derivable:
                        derivable.add(atom)
                        changed = True
    return derivable


def _simplify(rules: list[AspRule], derivable: set[Atom]) -> list[AspRule]:
    out: list[AspRule] = []
    for rule in rules:
        body: list[Literal] = []
        dropped = False
        for item in rule.body:
            assert isinstance(item, Literal)
            if item.negated:
                if item.atom in derivable:
                    body.append(item)
                # negative literal on an underivable atom is always true
            elif item.atom in derivable:
                body.append(item)
            else:
                dropped = True
                break
        if not dropped:
            out.append(AspRule(head=rule.head, body=tuple(body), weak=rule.weak))
    return out


def answer_sets(
    program: GroundProgram | list[AspRule] | tuple[AspRule, ...],
    *,
    atom_bound: int = DEFAULT_ATOM_BOUND,
    backend: str | None = None,
    recheck: bool = True,
    optimal_only: bool = False,
) -> SolveResult:
    """Enumerate the stable models of a ground program.

    Raises UniverseTooLarge when more than ``atom_bound`` atoms survive
    simplification (auxiliary atoms from choice translation included), and
    SolverError if a violated weak constraint carries a non-integer weight
    or the kernel disagrees with the set-based stability re-check.
    """
    if isinstance(program, GroundProgram):
        rules = list(program.rules)
        n_ground_atoms = len(program.universe)
    else:
        rules = list(program)
        seen: set[Atom] = set()
        for rule in rules:
            seen.update(rule.atoms())
        n_ground_atoms = len(seen)
    for rule in rules:
        if not rule.is_ground:
            raise SolverError(f"answer_sets needs ground rules, got: {rule}")

    translated = translate_choices(rules)
    hard = [r for r in translated.rules if r.weak is None]
    weak = [r for r in translated.rules if r.weak is not None]

    derivable = _derivable_closure(hard)
    hard = _simplify(hard, derivable)
    weak = _simplify(weak, derivable)

    atoms = sorted(derivable, key=atom_sort_key)
    if len(atoms) > atom_bound:
        raise UniverseTooLarge(len(atoms), atom_bound)
    index = {atom: i for i, atom in enumerate(atoms)}

    facts_mask = 0
    for rule in hard:
        if rule.is_fact:
            facts_mask |= 1 << index[rule.head[0]]
    free_bits = np.array(
        [i for i in range(len(atoms)) if not (facts_mask >> i) & 1], dtype=np.int64
    )

    n_rules = len(hard)
    head = np.zeros(n_rules, dtype=np.int64)
    pos = np.zeros(n_rules, dtype=np.int64)
    neg = np.zeros(n_rules, dtype=np.int64)
    for r, rule in enumerate(hard):
        for atom in rule.head_atoms():
            head[r] |= 1 << index[atom]
        for item in rule.body:
            if item.negated:
                neg[r] |= 1 << index[item.atom]
            else:
                pos[r] |= 1 << index[item.atom]

    chosen_backend = backend or default_backend()
    masks = enumerate_stable(head, pos, neg, facts_mask, free_bits, backend=chosen_backend)

    weak_specs = []
    for rule in weak:
        wpos = 0
        wneg = 0
        for item in rule.body:
            if item.negated:
                wneg |= 1 << index[item.atom]
            else:
                wpos |= 1 << index[item.atom]
        weak_specs.append((wpos, wneg, rule.weak))

    results: list[AnswerSet] = []
    for mask in masks.tolist():
        atom_set = frozenset(atoms[i] for i in range(len(atoms)) if (mask >> i) & 1)
        if recheck and not is_stable_model(hard, atom_set):
            raise SolverError(
                "kernel reported a set that fails the independent stability re-check"
            )
        visible = frozenset(a for a in atom_set if a not in translated.aux_atoms)
        results.append(AnswerSet(visible, _costs(mask, weak_specs)))

    if optimal_only and results:
        results = _optimal_filter(results)

    return SolveResult(
        answer_sets=tuple(results),
        backend=chosen_backend,
        n_ground_atoms=n_ground_atoms,
        n_enumeration_atoms=len(atoms),
        n_free_atoms=int(free_bits.shape[0]),
    )


def _costs(mask: int, weak_specs) -> tuple[tuple[int, int], ...]:
    violated: set[tuple[int, int, tuple]] = set()
    for wpos, wneg, spec in weak_specs:
        if (mask & wpos) == wpos and (mask & wneg) == 0:
            if spec.weight.kind != INT:
                raise SolverError(
                    f"violated weak constraint has non-integer weight {spec.weight}"
                )
            violated.add((spec.level, spec.weight.value, spec.terms))
    totals: dict[int, int] = {}
    for level, weight, _terms in violated:
        totals[level] = totals.get(level, 0) + weight
    return tuple(sorted(totals.items(), key=lambda kv: -kv[0]))


def _optimal_filter(results: list[AnswerSet]) -> list[AnswerSet]:
    levels = sorted({level for r in results for level, _ in r.costs}, reverse=True)

    def key(r: AnswerSet) -> tuple:
        lookup = dict(r.costs)
        return tuple(lookup.get(level, 0) for level in levels)

    best = min(key(r) for r in results)
    return [r for r in results if key(r) == best]


def solve(
    program: AspProgram,
    facts: tuple[Atom, ...] = (),
    constants=(),
    *,
    limit: int = 10**6,
    atom_bound: int = DEFAULT_ATOM_BOUND,
    backend: str | None = None,
    recheck: bool = True,
    optimal_only: bool = False,
) -> SolveResult:
    """Ground ``program`` plus extra fact atoms, then enumerate answer sets."""
    rules = list(program.rules) + [AspRule(head=(atom,)) for atom in facts]
    gp = ground(rules, constants=constants, limit=limit)
    return answer_sets(
        gp,
        atom_bound=atom_bound,
        backend=backend,
        recheck=recheck,
        optimal_only=optimal_only,
    )
