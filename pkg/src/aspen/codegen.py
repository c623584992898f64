"""Compilation of parsed CNL documents into ASP programs.

Emission rules, per category:

- entity/constant declarations emit no rules (they only shape the symbol table);
- fact sentences emit one fact per ``where`` expansion;
- definition-when / definition-whenever sentences emit one definite rule,
  body in sentence order;
- quantified-choice sentences emit one disjunctive rule ("or" alternatives)
  or one bounded choice rule (quantified form);
- negative/positive constraints emit one constraint, comparisons first and
  then condition literals, each group in sentence order;
- weak-constraint sentences emit one ``:~`` rule whose annotation terms are
  the distinct body variables in order of first appearance.

An entity first referenced in a head position is introduced implicitly with
its attributes in surface order; references in condition positions must
resolve against the table.  Unbound attributes become fresh variables named
after the attribute; every emitted rule must pass the safety validator, and
any violation becomes a diagnostic instead of an emitted rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from aspen.asp.safety import validate_safety
from aspen.asp.syntax import (
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
    var,
)
from aspen.cnl.ast import (
    ChoiceProp,
    CnlDocument,
    CnlSentence,
    ComparisonCond,
    Condition,
    ConstantDecl,
    ConstraintProp,
    Core,
    EntityCond,
    EntityDecl,
    EntityRef,
    FactProp,
    SymbolTable,
    WeakProp,
    WhenRule,
    WheneverRule,
)

__all__ = ["Diagnostic", "CompileResult", "compile_document", "compile_sentence"]


@dataclass(frozen=True)
class Diagnostic:
    sentence_index: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"sentence {self.sentence_index + 1}: {self.message} [{self.code}]"


@dataclass(frozen=True)
class CompileResult:
    """Program is None when any diagnostic was recorded."""

    program: AspProgram | None
    diagnostics: tuple[Diagnostic, ...]
    sentence_rules: tuple[tuple[int, AspRule], ...]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


class _Emitter:
    def __init__(self, symbols: SymbolTable, sentence_index: int):
        self.symbols = symbols
        self.index = sentence_index
        self.diagnostics: list[Diagnostic] = []
        self.taken_vars: set[str] = set()

    def diag(self, code: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(self.index, code, message))

    def claim_variables(self, payload) -> None:
        """Pre-register user variables so fresh names cannot collide."""
        for term in _payload_terms(payload):
            if term.kind == VAR:
                self.taken_vars.add(term.text)

    def fresh(self, attr: str) -> Term:
        base = attr.upper()
        name = base
        counter = 2
        while name in self.taken_vars:
            name = f"{base}{counter}"
            counter += 1
        self.taken_vars.add(name)
        return var(name)

    def resolve_term(self, term: Term) -> Term:
        """Replace valued constants by their values."""
        if term.kind == "sym":
            value = self.symbols.constants.get(term.text)
            if value is not None:
                return value
        return term

    def ref_to_atom(self, ref: EntityRef, head_position: bool) -> Atom | None:
        info = self.symbols.entity(ref.name)
        if info is None:
            if head_position:
                info = self.symbols.introduce_implicit(ref)
            else:
                self.diag("unknown-entity", f"entity {ref.name!r} is not declared or introduced earlier")
                return None
        bindings = dict(ref.bindings)
        if len(bindings) != len(ref.bindings):
            self.diag("duplicate-attribute", f"entity {ref.name!r} binds an attribute twice")
            return None
        unknown = [attr for attr in bindings if attr not in info.attrs]
        if unknown:
            self.diag(
                "unknown-attribute",
                f"entity {ref.name!r} has no attribute {unknown[0]!r} (known: {', '.join(info.attrs)})",
            )
            return None
        args = tuple(
            self.resolve_term(bindings[attr]) if attr in bindings else self.fresh(attr)
            for attr in info.attrs
        )
        return Atom(info.name, args)

    def condition_items(self, conditions: tuple[Condition, ...]) -> tuple[list[Comparison], list[Literal]] | None:
        comparisons: list[Comparison] = []
        literals: list[Literal] = []
        for cond in conditions:
            if isinstance(cond, ComparisonCond):
                comparisons.append(
                    Comparison(self.resolve_term(cond.left), cond.op, self.resolve_term(cond.right))
                )
            else:
                atom = self.ref_to_atom(cond.ref, head_position=False)
                if atom is None:
                    return None
                literals.append(Literal(atom))
        return comparisons, literals

    def body_in_sentence_order(self, conditions: tuple[Condition, ...]) -> tuple | None:
        items: list[Literal | Comparison] = []
        for cond in conditions:
            if isinstance(cond, ComparisonCond):
                items.append(
                    Comparison(self.resolve_term(cond.left), cond.op, self.resolve_term(cond.right))
                )
            else:
                atom = self.ref_to_atom(cond.ref, head_position=False)
                if atom is None:
                    return None
                items.append(Literal(atom))
        return tuple(items)

    def check_and_collect(self, rule: AspRule, out: list[AspRule]) -> None:
        report = validate_safety(rule)
        if report.ok:
            out.append(rule)
        else:
            detail = "; ".join(str(v) for v in report.violations)
            self.diag("unsafe-rule", f"compiled rule {rule} is unsafe: {detail}")


def _payload_terms(payload):
    """Every term syntactically present in a payload (for variable claiming)."""
    if isinstance(payload, FactProp):
        yield from payload.args
    elif isinstance(payload, (WhenRule, WheneverRule)):
        for _, value in payload.head.bindings:
            yield value
        yield from _condition_terms(payload.conditions)
    elif isinstance(payload, ChoiceProp):
        for alt in payload.alternatives:
            for _, value in alt.ref.bindings:
                yield value
            for cond in alt.such_that:
                for _, value in cond.ref.bindings:
                    yield value
        yield from _condition_terms(payload.conditions)
    elif isinstance(payload, (ConstraintProp, WeakProp)):
        core = payload.core
        if core.comparison is not None:
            yield core.comparison.left
            yield core.comparison.right
        if core.ref is not None:
            for _, value in core.ref.bindings:
                yield value
        yield from _condition_terms(payload.conditions)
        if isinstance(payload, WeakProp):
            yield payload.weight


def _condition_terms(conditions):
    for cond in conditions:
        if isinstance(cond, ComparisonCond):
            yield cond.left
            yield cond.right
        else:
            for _, value in cond.ref.bindings:
                yield value


def compile_sentence(sentence: CnlSentence, symbols: SymbolTable) -> tuple[list[AspRule], list[Diagnostic]]:
    """Compile one sentence against (and updating) the given symbol table."""
    payload = sentence.payload
    em = _Emitter(symbols, sentence.index)
    em.claim_variables(payload)
    rules: list[AspRule] = []

    if isinstance(payload, EntityDecl):
        symbols.declare_entity(payload)
    elif isinstance(payload, ConstantDecl):
        symbols.declare_constant(payload)
    elif isinstance(payload, FactProp):
        _compile_fact(payload, em, rules)
    elif isinstance(payload, WhenRule) or isinstance(payload, WheneverRule):
        head_atom = em.ref_to_atom(payload.head, head_position=True)
        body = em.body_in_sentence_order(payload.conditions)
        if head_atom is not None and body is not None:
            em.check_and_collect(AspRule(head=(head_atom,), body=body), rules)
    elif isinstance(payload, ChoiceProp):
        _compile_choice(payload, em, rules)
    elif isinstance(payload, ConstraintProp):
        _compile_constraint(payload, em, rules)
    elif isinstance(payload, WeakProp):
        _compile_weak(payload, em, rules)
    else:  # pragma: no cover - parser produces no other payloads
        em.diag("internal", f"unhandled payload {type(payload).__name__}")

    return rules, em.diagnostics


def _compile_fact(payload: FactProp, em: _Emitter, rules: list[AspRule]) -> None:
    if payload.entity_form:
        em.symbols.introduce_implicit(EntityRef(payload.predicate, tuple(zip(payload.attrs, payload.args))))
        info = em.symbols.entity(payload.predicate)
        bindings = dict(zip(payload.attrs, payload.args))
        unknown = [a for a in bindings if a not in info.attrs]
        if unknown:
            em.diag(
                "unknown-attribute",
                f"entity {payload.predicate!r} has no attribute {unknown[0]!r} (known: {', '.join(info.attrs)})",
            )
            return
        missing = [a for a in info.attrs if a not in bindings]
        if missing:
            em.diag(
                "ungrounded-fact",
                f"fact leaves attribute {missing[0]!r} of {payload.predicate!r} unbound",
            )
            return
        ordered_args = tuple(bindings[a] for a in info.attrs)
    else:
        em.symbols.introduce_implicit(
            EntityRef(payload.predicate, (("subject", payload.args[0]), ("object", payload.args[1])))
        )
        ordered_args = payload.args

    expansions: list[tuple[Term, ...]]
    if payload.where is not None:
        where = payload.where
        if not any(t.kind == VAR and t.text == where.variable for t in ordered_args):
            em.diag("unused-where", f"where-variable {where.variable} does not occur in the sentence")
            return
        expansions = [
            tuple(value if (t.kind == VAR and t.text == where.variable) else t for t in ordered_args)
            for value in where.values
        ]
    else:
        expansions = [ordered_args]

    for args in expansions:
        resolved = tuple(em.resolve_term(t) for t in args)
        bad = [t for t in resolved if t.kind == VAR]
        if bad:
            em.diag("ungrounded-fact", f"fact argument {bad[0].text} is not a constant")
            return
        rules.append(AspRule(head=(Atom(payload.predicate, resolved),)))


def _compile_choice(payload: ChoiceProp, em: _Emitter, rules: list[AspRule]) -> None:
    body = em.body_in_sentence_order(payload.conditions)
    if body is None:
        return
    if not payload.bounded:
        atoms = []
        for alt in payload.alternatives:
            if alt.such_that:
                em.diag(
                    "conditional-disjunct",
                    "selection conditions ('such that') require a quantified choice",
                )
                return
            atom = em.ref_to_atom(alt.ref, head_position=True)
            if atom is None:
                return
            atoms.append(atom)
        if len(atoms) >= 2:
            em.check_and_collect(AspRule(head=tuple(atoms), body=body), rules)
        else:
            head = Choice((ChoiceElement(atoms[0]),))
            em.check_and_collect(AspRule(head=head, body=body), rules)
        return

    if payload.lower is not None and payload.upper is not None and payload.lower > payload.upper:
        em.diag("bad-bounds", f"lower bound {payload.lower} exceeds upper bound {payload.upper}")
        return
    elements = []
    for alt in payload.alternatives:
        conditions = []
        for cond in alt.such_that:
            atom = em.ref_to_atom(cond.ref, head_position=False)
            if atom is None:
                return
            conditions.append(Literal(atom))
        atom = em.ref_to_atom(alt.ref, head_position=True)
        if atom is None:
            return
        elements.append(ChoiceElement(atom, tuple(conditions)))
    head = Choice(tuple(elements), payload.lower, payload.upper)
    em.check_and_collect(AspRule(head=head, body=body), rules)


def _core_items(core: Core, flip: bool, em: _Emitter) -> tuple[Comparison | None, Literal | None] | None:
    """The core as a body item; flip=True encodes violation of the claim."""
    if core.comparison is not None:
        cmp = Comparison(
            em.resolve_term(core.comparison.left),
            core.comparison.op,
            em.resolve_term(core.comparison.right),
        )
        return (cmp.negate() if flip else cmp), None
    atom = em.ref_to_atom(core.ref, head_position=False)
    if atom is None:
        return None
    negated = core.ref_absent != flip  # absent XOR flip
    return None, Literal(atom, negated=negated)


def _constraint_body(core: Core, flip: bool, conditions: tuple[Condition, ...], em: _Emitter):
    """Constraint-family body: all comparisons first, then all literals."""
    core_items = _core_items(core, flip, em)
    if core_items is None:
        return None
    condition_items = em.condition_items(conditions)
    if condition_items is None:
        return None
    core_cmp, core_lit = core_items
    comparisons, literals = condition_items
    body: list = []
    if core_cmp is not None:
        body.append(core_cmp)
    body.extend(comparisons)
    if core_lit is not None:
        body.append(core_lit)
    body.extend(literals)
    return tuple(body)


def _compile_constraint(payload: ConstraintProp, em: _Emitter, rules: list[AspRule]) -> None:
    body = _constraint_body(payload.core, payload.mode == "required", payload.conditions, em)
    if body is not None:
        em.check_and_collect(AspRule(head=None, body=body), rules)


def _compile_weak(payload: WeakProp, em: _Emitter, rules: list[AspRule]) -> None:
    body = _constraint_body(payload.core, True, payload.conditions, em)
    if body is None:
        return
    seen: set[str] = set()
    terms: list[Term] = []
    for item in body:
        for v in item.variables():
            if v.text not in seen:
                seen.add(v.text)
                terms.append(v)
    weak = WeakSpec(em.resolve_term(payload.weight), payload.level, tuple(terms))
    em.check_and_collect(AspRule(head=None, body=body, weak=weak), rules)


def compile_document(doc: CnlDocument) -> CompileResult:
    """Compile a document sentence by sentence with a fresh symbol table.

    Declarations and implicit head introductions accumulate in order, so a
    sentence may reference anything introduced at or before its position.
    """
    symbols = SymbolTable()
    diagnostics: list[Diagnostic] = []
    collected: list[tuple[int, AspRule]] = []
    for sentence in doc.sentences:
        rules, diags = compile_sentence(sentence, symbols)
        diagnostics.extend(diags)
        collected.extend((sentence.index, rule) for rule in rules)
    program = AspProgram(tuple(rule for _, rule in collected)) if not diagnostics else None
    return CompileResult(program, tuple(diagnostics), tuple(collected))
