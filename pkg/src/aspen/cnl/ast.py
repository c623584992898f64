"""AST for the controlled natural language.

A document is a sequence of categorized sentences.  Each sentence carries a
payload dataclass describing what it says; compilation to ASP happens in
:mod:`aspen.codegen`.  The seven sentence categories are fixed and shared by
the parser, the compiler, the dataset generator and the evaluation tooling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from aspen.asp.syntax import Term

CATEGORY_ORDER = (
    "definition-const-compound",
    "definition-when",
    "definition-whenever",
    "negative-constraint",
    "positive-constraint",
    "quantified-choice",
    "weak-constraint",
)


@dataclass(frozen=True)
class EntityRef:
    """``a col with node X, and with color equal to blue`` → name + bindings."""

    name: str
    bindings: tuple[tuple[str, Term], ...] = ()

    def attrs(self) -> tuple[str, ...]:
        return tuple(attr for attr, _ in self.bindings)


@dataclass(frozen=True)
class ComparisonCond:
    """``X is different from Y`` with the operator already in ASP form."""

    left: Term
    op: str
    right: Term


@dataclass(frozen=True)
class EntityCond:
    """``there is a <entity-ref>`` used as a rule/constraint condition."""

    ref: EntityRef


Condition = Union[EntityCond, ComparisonCond]


@dataclass(frozen=True)
class Core:
    """The claim of a constraint sentence: a comparison, or an entity that is
    asserted present (``there is a``) or absent (``there is no``)."""

    comparison: ComparisonCond | None = None
    ref: EntityRef | None = None
    ref_absent: bool = False

    def __post_init__(self) -> None:
        if (self.comparison is None) == (self.ref is None):
            raise ValueError("core must be exactly one of comparison or entity")


@dataclass(frozen=True)
class EntityDecl:
    """``A edge is identified by a firstnode, and by a secondnode.``"""

    name: str
    key_attrs: tuple[str, ...]
    value_attrs: tuple[str, ...] = ()

    def attrs(self) -> tuple[str, ...]:
        return self.key_attrs + self.value_attrs


@dataclass(frozen=True)
class ConstantDecl:
    """``k is a constant equal to 10.`` (value is optional)."""

    name: str
    value: Term | None = None


@dataclass(frozen=True)
class WhereClause:
    """``, where X is one of 2, 5`` — expands its sentence per listed value."""

    variable: str
    values: tuple[Term, ...]


@dataclass(frozen=True)
class FactProp:
    """A ground assertion, in either surface form.

    Verb form (``Node 1 have an edge node 2.``) sets predicate from the verb;
    entity form (``There is a node with id 1.``) goes through an entity ref.
    """

    predicate: str
    args: tuple[Term, ...]
    where: WhereClause | None = None
    entity_form: bool = False
    attrs: tuple[str, ...] = ()  # binding attrs (entity form only)


@dataclass(frozen=True)
class WhenRule:
    """``There is a <head> when <cond>, and <cond>.``"""

    head: EntityRef
    conditions: tuple[Condition, ...]


@dataclass(frozen=True)
class WheneverRule:
    """``Whenever there is <cond>, whenever ... then we must have a <head>.``"""

    head: EntityRef
    conditions: tuple[Condition, ...]


@dataclass(frozen=True)
class ChoiceAlt:
    ref: EntityRef
    such_that: tuple[EntityCond, ...] = ()


@dataclass(frozen=True)
class ChoiceProp:
    """``Whenever <conds> then we can have <alt>, or <alt>.``

    With a quantifier (``exactly 1 of ...``) lower/upper are set and the
    alternatives may carry "such that" selection conditions.
    """

    conditions: tuple[Condition, ...]
    alternatives: tuple[ChoiceAlt, ...]
    lower: int | None = None
    upper: int | None = None
    bounded: bool = False


@dataclass(frozen=True)
class ConstraintProp:
    """``It is prohibited/required that <core>, whenever <cond>, ...``"""

    mode: str  # "prohibited" | "required"
    core: Core
    conditions: tuple[Condition, ...] = ()


@dataclass(frozen=True)
class WeakProp:
    """``It is preferred, with weight W and priority L, that <core>, ...``"""

    weight: Term
    level: int
    core: Core
    conditions: tuple[Condition, ...] = ()


Payload = Union[
    EntityDecl,
    ConstantDecl,
    FactProp,
    WhenRule,
    WheneverRule,
    ChoiceProp,
    ConstraintProp,
    WeakProp,
]


def category_of(payload: Payload) -> str:
    if isinstance(payload, (EntityDecl, ConstantDecl, FactProp)):
        return "definition-const-compound"
    if isinstance(payload, WhenRule):
        return "definition-when"
    if isinstance(payload, WheneverRule):
        return "definition-whenever"
    if isinstance(payload, ChoiceProp):
        return "quantified-choice"
    if isinstance(payload, ConstraintProp):
        return "negative-constraint" if payload.mode == "prohibited" else "positive-constraint"
    if isinstance(payload, WeakProp):
        return "weak-constraint"
    raise TypeError(f"unknown payload type: {type(payload).__name__}")


@dataclass(frozen=True)
class CnlSentence:
    text: str
    index: int
    payload: Payload

    @property
    def category(self) -> str:
        return category_of(self.payload)


@dataclass
class EntityInfo:
    """Resolved shape of an entity: attribute order fixes the ASP arity."""

    name: str
    attrs: tuple[str, ...]
    declared: bool  # False when introduced implicitly by a head reference


@dataclass
class SymbolTable:
    entities: dict[str, EntityInfo] = field(default_factory=dict)
    constants: dict[str, Term | None] = field(default_factory=dict)

    def declare_entity(self, decl: EntityDecl) -> None:
        self.entities[decl.name] = EntityInfo(decl.name, decl.attrs(), declared=True)

    def declare_constant(self, decl: ConstantDecl) -> None:
        self.constants[decl.name] = decl.value

    def entity(self, name: str) -> EntityInfo | None:
        return self.entities.get(name)

    def introduce_implicit(self, ref: EntityRef) -> EntityInfo:
        """Entity first mentioned in a head position: attrs in surface order."""
        info = self.entities.get(ref.name)
        if info is None:
            info = EntityInfo(ref.name, ref.attrs(), declared=False)
            self.entities[ref.name] = info
        return info


@dataclass(frozen=True)
class CnlDocument:
    sentences: tuple[CnlSentence, ...]
    symbols: SymbolTable

    def __iter__(self):
        return iter(self.sentences)

    def __len__(self) -> int:
        return len(self.sentences)
