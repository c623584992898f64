"""Core representation of ground and non-ground ASP programs.

The program model is the disjunctive-rule fragment with strong constraints,
weak constraints and bounded choice rules:

    a1 | ... | an :- b1, ..., bk, not bk+1, ..., not bm.

Everything is an immutable dataclass so rules and atoms can live in sets and
serve as dictionary keys.  Printing is deterministic: the same structure
always renders to the same text, and ``parse_program(print_program(p))``
round-trips.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

SYM = "sym"
INT = "int"
VAR = "var"

_SYMBOL_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_VARIABLE_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")

# Complement used when a comparison has to be negated (e.g. while compiling
# "required" propositions into constraint bodies).
NEGATED_OP = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}


@dataclass(frozen=True, slots=True)
class Term:
    """A constant symbol, an integer, or a variable."""

    kind: str
    text: str = ""
    value: int = 0

    def __post_init__(self) -> None:
        if self.kind == SYM:
            if not _SYMBOL_RE.match(self.text):
                raise ValueError(f"bad constant symbol: {self.text!r}")
        elif self.kind == VAR:
            if not _VARIABLE_RE.match(self.text):
                raise ValueError(f"bad variable name: {self.text!r}")
        elif self.kind != INT:
            raise ValueError(f"unknown term kind: {self.kind!r}")

    @property
    def is_ground(self) -> bool:
        return self.kind != VAR

    def __str__(self) -> str:
        return str(self.value) if self.kind == INT else self.text


def sym(name: str) -> Term:
    return Term(SYM, text=name)


def num(value: int) -> Term:
    return Term(INT, value=value)


def var(name: str) -> Term:
    return Term(VAR, text=name)


def ground_key(t: Term) -> tuple:
    """Total order on ground terms: integers first (by value), then symbols."""
    if t.kind == INT:
        return (0, t.value, "")
    return (1, 0, t.text)


@dataclass(frozen=True, slots=True)
class Atom:
    """predicate(t1, ..., tn); n = 0 is a propositional atom."""

    predicate: str
    args: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if not _SYMBOL_RE.match(self.predicate):
            raise ValueError(f"bad predicate name: {self.predicate!r}")

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return all(t.is_ground for t in self.args)

    def variables(self) -> Iterator[Term]:
        for t in self.args:
            if t.kind == VAR:
                yield t

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"


@dataclass(frozen=True, slots=True)
class Literal:
    """An atom or its default negation ("not a")."""

    atom: Atom
    negated: bool = False

    def variables(self) -> Iterator[Term]:
        yield from self.atom.variables()

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True, slots=True)
class Comparison:
    """Built-in relation between two terms, e.g. X != Y."""

    left: Term
    op: str
    right: Term

    def __post_init__(self) -> None:
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison operator: {self.op!r}")

    def negate(self) -> "Comparison":
        return Comparison(self.left, NEGATED_OP[self.op], self.right)

    def variables(self) -> Iterator[Term]:
        if self.left.kind == VAR:
            yield self.left
        if self.right.kind == VAR:
            yield self.right

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


BodyItem = Union[Literal, Comparison]


@dataclass(frozen=True, slots=True)
class ChoiceElement:
    """One alternative inside a choice head: ``atom : cond1, cond2``."""

    atom: Atom
    conditions: tuple[Literal, ...] = ()

    def variables(self) -> Iterator[Term]:
        yield from self.atom.variables()
        for lit in self.conditions:
            yield from lit.variables()

    def __str__(self) -> str:
        if not self.conditions:
            return str(self.atom)
        return f"{self.atom} : {', '.join(map(str, self.conditions))}"


@dataclass(frozen=True, slots=True)
class Choice:
    """Choice head with optional cardinality bounds: ``l <= {e1; e2} <= u``."""

    elements: tuple[ChoiceElement, ...]
    lower: int | None = None
    upper: int | None = None

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("choice head needs at least one element")
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError("choice lower bound exceeds upper bound")

    def __str__(self) -> str:
        inner = "{" + "; ".join(map(str, self.elements)) + "}"
        if self.lower is not None:
            inner = f"{self.lower} <= {inner}"
        if self.upper is not None:
            inner = f"{inner} <= {self.upper}"
        return inner


@dataclass(frozen=True, slots=True)
class WeakSpec:
    """Annotation of a weak constraint: ``[weight@level, t1, ..., tn]``."""

    weight: Term
    level: int = 0
    terms: tuple[Term, ...] = ()

    def __str__(self) -> str:
        head = f"{self.weight}@{self.level}"
        if self.terms:
            return f"[{head}, {', '.join(map(str, self.terms))}]"
        return f"[{head}]"


Head = Union[tuple[Atom, ...], Choice, None]


@dataclass(frozen=True, slots=True)
class AspRule:
    """One rule.

    ``head`` is a non-empty tuple of atoms (disjunction), a Choice, or None
    for a constraint.  A weak constraint is a constraint carrying a WeakSpec.
    """

    head: Head
    body: tuple[BodyItem, ...] = ()
    weak: WeakSpec | None = None

    def __post_init__(self) -> None:
        if isinstance(self.head, tuple) and not self.head:
            raise ValueError("disjunctive head must not be empty")
        if self.weak is not None and self.head is not None:
            raise ValueError("weak annotation only allowed on constraints")

    @property
    def is_constraint(self) -> bool:
        return self.head is None and self.weak is None

    @property
    def is_weak(self) -> bool:
        return self.weak is not None

    @property
    def is_fact(self) -> bool:
        return isinstance(self.head, tuple) and len(self.head) == 1 and not self.body

    def head_atoms(self) -> Iterator[Atom]:
        if isinstance(self.head, tuple):
            yield from self.head
        elif isinstance(self.head, Choice):
            for elem in self.head.elements:
                yield elem.atom

    def atoms(self) -> Iterator[Atom]:
        """All atoms syntactically occurring in the rule."""
        yield from self.head_atoms()
        if isinstance(self.head, Choice):
            for elem in self.head.elements:
                for lit in elem.conditions:
                    yield lit.atom
        for item in self.body:
            if isinstance(item, Literal):
                yield item.atom

    def variables(self) -> Iterator[Term]:
        if isinstance(self.head, tuple):
            for a in self.head:
                yield from a.variables()
        elif isinstance(self.head, Choice):
            for elem in self.head.elements:
                yield from elem.variables()
        for item in self.body:
            yield from item.variables()
        if self.weak is not None:
            if self.weak.weight.kind == VAR:
                yield self.weak.weight
            for t in self.weak.terms:
                if t.kind == VAR:
                    yield t

    @property
    def is_ground(self) -> bool:
        return next(self.variables(), None) is None

    def __str__(self) -> str:
        return print_rule(self)


@dataclass(frozen=True, slots=True)
class AspProgram:
    """An ordered sequence of rules."""

    rules: tuple[AspRule, ...] = ()

    def __iter__(self) -> Iterator[AspRule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return print_program(self)


def fact(atom: Atom) -> AspRule:
    return AspRule(head=(atom,))


def print_rule(rule: AspRule) -> str:
    body = ", ".join(str(item) for item in rule.body)
    if rule.weak is not None:
        return f":~ {body}. {rule.weak}"
    if rule.head is None:
        return f":- {body}."
    head = " | ".join(map(str, rule.head)) if isinstance(rule.head, tuple) else str(rule.head)
    if not body:
        return f"{head}."
    return f"{head} :- {body}."


def print_program(program: AspProgram) -> str:
    """Render one rule per line; the empty program is the empty string."""
    if not program.rules:
        return ""
    return "\n".join(print_rule(r) for r in program.rules) + "\n"
