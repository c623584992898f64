"""Recursive-descent parser for the controlled natural language.

The accepted grammar is documented in docs/grammar.md.  Parsing is strict and
case-sensitive: keywords must appear exactly as specified ("whenever there
is", not "whenever There is"), words may not contain hyphens, and every
sentence ends with a period.  Variables are a single uppercase letter with an
optional numeric suffix (X, Y2, C1); every other capitalized word is only
legal where the grammar expects one (sentence-initial keywords, the subject
noun of a fact sentence).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from aspen.asp.syntax import Term, num, sym, var

from .ast import (
    ChoiceAlt,
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
    Payload,
    SymbolTable,
    WeakProp,
    WhenRule,
    WheneverRule,
    WhereClause,
)

_VAR_RE = re.compile(r"[A-Z][0-9]*\Z")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class CnlSyntaxError(ValueError):
    """Grammar rejection; carries position and an optional suggested fix."""

    def __init__(self, message: str, line: int = 0, col: int = 0, suggestion: str | None = None):
        detail = f"{message} (line {line}, column {col})"
        if suggestion:
            detail += f"; did you mean {suggestion!r}?"
        super().__init__(detail)
        self.message = message
        self.line = line
        self.col = col
        self.suggestion = suggestion


@dataclass(frozen=True)
class SyntaxVerdict:
    """Outcome of checking one sentence against the grammar."""

    accepted: bool
    category: str | None = None
    reason: str | None = None
    suggestion: str | None = None


@dataclass(frozen=True)
class _Token:
    kind: str  # word | int | comma | period | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == ",":
            tokens.append(_Token("comma", ",", line, col))
            i += 1
            col += 1
            continue
        if ch == ".":
            tokens.append(_Token("period", ".", line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(_Token("int", text[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha():
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(_Token("word", text[start:i], line, col))
            col += i - start
            continue
        raise CnlSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


def _is_variable(text: str) -> bool:
    return bool(_VAR_RE.match(text))


class _SentenceParser:
    """Parses one sentence worth of tokens (period excluded)."""

    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    # --- token helpers ------------------------------------------------------

    def peek(self, offset: int = 0) -> _Token:
        idx = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[idx]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_word(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind == "word" and tok.text == text

    def fail(self, message: str, suggestion: str | None = None):
        tok = self.peek()
        raise CnlSyntaxError(message, tok.line, tok.col, suggestion)

    def expect_word(self, text: str) -> _Token:
        tok = self.next()
        if tok.kind != "word" or tok.text != text:
            shown = tok.text if tok.text else "end of sentence"
            raise CnlSyntaxError(f"expected {text!r}, found {shown!r}", tok.line, tok.col)
        return tok

    def expect_words(self, *words: str) -> None:
        for w in words:
            self.expect_word(w)

    def expect_comma(self) -> None:
        tok = self.next()
        if tok.kind != "comma":
            raise CnlSyntaxError(f"expected ',', found {tok.text or 'end of sentence'!r}", tok.line, tok.col)

    def expect_article(self) -> None:
        tok = self.next()
        if tok.kind != "word" or tok.text not in ("a", "an"):
            raise CnlSyntaxError(
                f"expected an article ('a' or 'an'), found {tok.text or 'end of sentence'!r}",
                tok.line,
                tok.col,
            )

    def expect_end(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise CnlSyntaxError(f"unexpected trailing words starting at {tok.text!r}", tok.line, tok.col)

    def expect_lower_name(self, what: str) -> str:
        tok = self.next()
        if tok.kind != "word" or not tok.text[0].islower():
            shown = tok.text if tok.text else "end of sentence"
            raise CnlSyntaxError(f"expected {what}, found {shown!r}", tok.line, tok.col)
        return tok.text

    def expect_int(self, what: str) -> int:
        tok = self.next()
        if tok.kind != "int":
            raise CnlSyntaxError(
                f"expected {what}, found {tok.text or 'end of sentence'!r}", tok.line, tok.col
            )
        return int(tok.text)

    # --- terms ----------------------------------------------------------------

    def parse_value(self) -> Term:
        """A binding value: integer, variable, constant word, or 'equal to <c>'."""
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return num(int(tok.text))
        if tok.kind != "word":
            self.fail(f"expected a value, found {tok.text or 'end of sentence'!r}")
        if tok.text == "equal":
            self.next()
            self.expect_word("to")
            return self.parse_ground_word_or_int()
        if _is_variable(tok.text):
            self.next()
            return var(tok.text)
        if tok.text[0].islower():
            self.next()
            return sym(tok.text)
        self.fail(f"unexpected capitalized word {tok.text!r} (variables are a single letter plus digits)")

    def parse_ground_word_or_int(self) -> Term:
        tok = self.next()
        if tok.kind == "int":
            return num(int(tok.text))
        if tok.kind == "word" and tok.text[0].islower():
            return sym(tok.text)
        raise CnlSyntaxError(
            f"expected a constant, found {tok.text or 'end of sentence'!r}", tok.line, tok.col
        )

    def parse_term(self) -> Term:
        """A comparison operand: integer, variable, or constant word."""
        tok = self.next()
        if tok.kind == "int":
            return num(int(tok.text))
        if tok.kind == "word":
            if _is_variable(tok.text):
                return var(tok.text)
            if tok.text[0].islower():
                return sym(tok.text)
        raise CnlSyntaxError(
            f"expected a term, found {tok.text or 'end of sentence'!r}", tok.line, tok.col
        )

    # --- shared phrases ---------------------------------------------------------

    def parse_comparison_tail(self, left: Term) -> ComparisonCond:
        """After the left term: 'is <relation phrase> <right term>'."""
        self.expect_word("is")
        tok = self.peek()
        if tok.kind != "word":
            self.fail("expected a comparison phrase")
        if tok.text == "equal":
            self.expect_words("equal", "to")
            return ComparisonCond(left, "=", self.parse_term())
        if tok.text == "different":
            self.expect_words("different", "from")
            return ComparisonCond(left, "!=", self.parse_term())
        if tok.text == "less":
            self.expect_words("less", "than")
            op = "<"
            if self.at_word("or"):
                self.expect_words("or", "equal", "to")
                op = "<="
            return ComparisonCond(left, op, self.parse_term())
        if tok.text == "greater":
            self.expect_words("greater", "than")
            op = ">"
            if self.at_word("or"):
                self.expect_words("or", "equal", "to")
                op = ">="
            return ComparisonCond(left, op, self.parse_term())
        if tok.text == "at" and self.peek(1).text == "most" and self.peek(2).text == "or":
            raise CnlSyntaxError(
                "'at most or equal to' is not a comparison phrase",
                tok.line,
                tok.col,
                suggestion="less than or equal to",
            )
        self.fail(f"unknown comparison phrase starting at {tok.text!r}")

    def parse_entity_ref(self) -> EntityRef:
        """``<name> with <attr> <value>`` plus ``, and with ...`` repeats."""
        name = self.expect_lower_name("an entity name")
        bindings: list[tuple[str, Term]] = []
        if self.at_word("with"):
            self.next()
            bindings.append(self.parse_binding())
            while (
                self.peek().kind == "comma"
                and self.at_word("and", 1)
                and self.at_word("with", 2)
            ):
                self.next()  # comma
                self.next()  # and
                self.next()  # with
                bindings.append(self.parse_binding())
        return EntityRef(name, tuple(bindings))

    def parse_binding(self) -> tuple[str, Term]:
        attr = self.expect_lower_name("an attribute name")
        value = self.parse_value()
        return (attr, value)

    def parse_condition(self, keyword_there: str = "there") -> Condition:
        """``there is a <ref>`` or a comparison."""
        if self.at_word(keyword_there) and self.at_word("is", 1):
            self.next()
            self.expect_word("is")
            self.expect_article()
            return EntityCond(self.parse_entity_ref())
        left = self.parse_term()
        return self.parse_comparison_tail(left)

    def parse_core(self) -> Core:
        """Constraint core: comparison, ``there is a <ref>``, or ``there is no <ref>``."""
        if self.at_word("there") and self.at_word("is", 1):
            self.next()
            self.expect_word("is")
            if self.at_word("no"):
                self.next()
                return Core(ref=self.parse_entity_ref(), ref_absent=True)
            self.expect_article()
            return Core(ref=self.parse_entity_ref())
        left = self.parse_term()
        return Core(comparison=self.parse_comparison_tail(left))

    def parse_whenever_conditions(self) -> list[Condition]:
        """``, whenever <condition>`` repeats (comma required)."""
        conditions: list[Condition] = []
        while self.peek().kind == "comma" and self.at_word("whenever", 1):
            self.next()
            self.expect_word("whenever")
            conditions.append(self.parse_condition())
        return conditions

    def parse_value_list(self) -> list[Term]:
        """``2, 5`` or ``2 or 3`` or ``1, 2, and 5`` (ground values only)."""
        values = [self.parse_ground_word_or_int()]
        while True:
            if self.peek().kind == "comma":
                if self.at_word("and", 1):
                    self.next()
                    self.next()
                    values.append(self.parse_ground_word_or_int())
                    break
                self.next()
                values.append(self.parse_ground_word_or_int())
                continue
            if self.at_word("or"):
                self.next()
                values.append(self.parse_ground_word_or_int())
                break
            break
        return values

    def parse_where(self) -> WhereClause | None:
        if not (self.peek().kind == "comma" and self.at_word("where", 1)):
            return None
        self.next()
        self.expect_word("where")
        tok = self.next()
        if tok.kind != "word" or not _is_variable(tok.text):
            raise CnlSyntaxError(
                f"expected a variable after 'where', found {tok.text or 'end of sentence'!r}",
                tok.line,
                tok.col,
            )
        self.expect_words("is", "one", "of")
        return WhereClause(tok.text, tuple(self.parse_value_list()))

    # --- sentence forms -----------------------------------------------------------

    def parse_sentence(self) -> Payload:
        tok = self.peek()
        if tok.kind != "word":
            self.fail("a sentence must start with a word")
        if tok.text in ("A", "An"):
            payload = self.parse_entity_decl()
        elif tok.text == "Whenever":
            payload = self.parse_whenever_family()
        elif tok.text == "It":
            payload = self.parse_constraint_family()
        elif tok.text == "There":
            payload = self.parse_there_family()
        elif tok.text[0].isupper():
            if _is_variable(tok.text):
                self.fail(f"a sentence may not start with the variable {tok.text!r}")
            payload = self.parse_verb_fact()
        else:
            payload = self.parse_constant_decl()
        self.expect_end()
        return payload

    def parse_entity_decl(self) -> EntityDecl:
        self.next()  # A | An
        name = self.expect_lower_name("an entity name")
        self.expect_words("is", "identified", "by")
        self.expect_article()
        keys = [self.expect_lower_name("an attribute name")]
        values: list[str] = []
        while self.peek().kind == "comma" and self.at_word("and", 1):
            self.next()
            self.next()
            if self.at_word("by"):
                if values:
                    self.fail("'and by' may not follow 'and has'")
                self.next()
                self.expect_article()
                keys.append(self.expect_lower_name("an attribute name"))
            elif self.at_word("has"):
                self.next()
                self.expect_article()
                values.append(self.expect_lower_name("an attribute name"))
            else:
                self.fail("expected 'by' or 'has' after 'and'")
        return EntityDecl(name, tuple(keys), tuple(values))

    def parse_constant_decl(self) -> ConstantDecl:
        name = self.expect_lower_name("a constant name")
        self.expect_words("is", "a", "constant")
        value: Term | None = None
        if self.at_word("equal"):
            self.expect_words("equal", "to")
            value = self.parse_ground_word_or_int()
        return ConstantDecl(name, value)

    def parse_verb_fact(self) -> FactProp:
        subject_tok = self.next()
        subject_value = self.parse_value()
        tok = self.next()
        if tok.kind != "word" or tok.text not in ("has", "have"):
            raise CnlSyntaxError(
                f"expected 'has' or 'have', found {tok.text or 'end of sentence'!r}",
                tok.line,
                tok.col,
            )
        self.expect_article()
        verb = self.expect_lower_name("a verb")
        self.expect_lower_name("an object noun")
        object_value = self.parse_value()
        where = self.parse_where()
        del subject_tok  # subject noun is descriptive; the verb names the predicate
        return FactProp(predicate=verb, args=(subject_value, object_value), where=where)

    def parse_there_family(self) -> Payload:
        self.expect_word("There")
        self.expect_word("is")
        self.expect_article()
        ref = self.parse_entity_ref()
        if self.at_word("when"):
            self.next()
            conditions = [self.parse_condition()]
            while self.peek().kind == "comma" and self.at_word("and", 1):
                self.next()
                self.next()
                conditions.append(self.parse_condition())
            return WhenRule(ref, tuple(conditions))
        where = self.parse_where()
        args = tuple(value for _, value in ref.bindings)
        return FactProp(
            predicate=ref.name,
            args=args,
            where=where,
            entity_form=True,
            attrs=ref.attrs(),
        )

    def parse_whenever_family(self) -> Payload:
        self.expect_word("Whenever")
        conditions = [self.parse_condition()]
        while self.peek().kind == "comma" and self.at_word("whenever", 1):
            self.next()
            self.expect_word("whenever")
            conditions.append(self.parse_condition())
        self.expect_words("then", "we")
        tok = self.next()
        if tok.kind == "word" and tok.text == "must":
            self.expect_word("have")
            self.expect_article()
            head = self.parse_entity_ref()
            return WheneverRule(head, tuple(conditions))
        if tok.kind == "word" and tok.text == "can":
            self.expect_word("have")
            return self.parse_choice_tail(tuple(conditions))
        raise CnlSyntaxError(
            f"expected 'must' or 'can', found {tok.text or 'end of sentence'!r}", tok.line, tok.col
        )

    def parse_choice_tail(self, conditions: tuple[Condition, ...]) -> ChoiceProp:
        lower: int | None = None
        upper: int | None = None
        bounded = False
        tok = self.peek()
        if tok.kind == "word" and tok.text in ("at", "exactly", "between"):
            bounded = True
            if tok.text == "exactly":
                self.next()
                n = self.expect_int("a count after 'exactly'")
                lower = upper = n
            elif tok.text == "between":
                self.next()
                lower = self.expect_int("a lower bound after 'between'")
                self.expect_word("and")
                upper = self.expect_int("an upper bound")
            else:
                self.next()
                which = self.next()
                if which.text == "most":
                    upper = self.expect_int("a count after 'at most'")
                elif which.text == "least":
                    lower = self.expect_int("a count after 'at least'")
                else:
                    raise CnlSyntaxError(
                        f"expected 'most' or 'least' after 'at', found {which.text!r}",
                        which.line,
                        which.col,
                    )
            self.expect_word("of")
        alternatives = [self.parse_choice_alternative(bounded)]
        while self.peek().kind == "comma" and self.at_word("or", 1):
            self.next()
            self.next()
            alternatives.append(self.parse_choice_alternative(bounded))
        return ChoiceProp(conditions, tuple(alternatives), lower, upper, bounded)

    def parse_choice_alternative(self, bounded: bool) -> ChoiceAlt:
        self.expect_article()
        ref = self.parse_entity_ref()
        such_that: list[EntityCond] = []
        if bounded and self.peek().kind == "comma" and self.at_word("such", 1):
            self.next()
            self.expect_words("such", "that")
            such_that.append(self.parse_such_that_condition())
            while (
                self.peek().kind == "comma"
                and self.at_word("and", 1)
                and self.at_word("there", 2)
            ):
                self.next()
                self.next()
                such_that.append(self.parse_such_that_condition())
        return ChoiceAlt(ref, tuple(such_that))

    def parse_such_that_condition(self) -> EntityCond:
        self.expect_words("there", "is")
        self.expect_article()
        return EntityCond(self.parse_entity_ref())

    def parse_constraint_family(self) -> Payload:
        self.expect_word("It")
        self.expect_word("is")
        tok = self.next()
        if tok.kind != "word":
            raise CnlSyntaxError("expected 'prohibited', 'required' or 'preferred'", tok.line, tok.col)
        if tok.text in ("prohibited", "required"):
            self.expect_word("that")
            core = self.parse_core()
            conditions = self.parse_whenever_conditions()
            return ConstraintProp(tok.text, core, tuple(conditions))
        if tok.text == "preferred":
            self.expect_comma()
            self.expect_words("with", "weight")
            weight = self.parse_value()
            self.expect_words("and", "priority")
            level = self.expect_int("an integer priority")
            self.expect_comma()
            self.expect_word("that")
            core = self.parse_core()
            conditions = self.parse_whenever_conditions()
            return WeakProp(weight, level, core, tuple(conditions))
        raise CnlSyntaxError(
            f"expected 'prohibited', 'required' or 'preferred', found {tok.text!r}",
            tok.line,
            tok.col,
        )


def _split_sentences(tokens: list[_Token], text: str) -> list[tuple[list[_Token], str]]:
    sentences: list[tuple[list[_Token], str]] = []
    current: list[_Token] = []
    for tok in tokens:
        if tok.kind == "eof":
            break
        if tok.kind == "period":
            if not current:
                raise CnlSyntaxError("empty sentence", tok.line, tok.col)
            eof = _Token("eof", "", tok.line, tok.col)
            raw = _raw_slice(text, current, tok)
            sentences.append((current + [eof], raw))
            current = []
            continue
        current.append(tok)
    if current:
        tok = current[-1]
        raise CnlSyntaxError("sentence is missing its final period", tok.line, tok.col)
    return sentences


def _raw_slice(text: str, tokens: list[_Token], period: _Token) -> str:
    # Rebuild a normalized single-space rendering; raw offsets are not kept
    # by the tokenizer, and normalized text is what downstream consumers want.
    parts: list[str] = []
    for tok in tokens:
        if tok.kind == "comma":
            parts.append(",")
        else:
            if parts:
                parts.append(" ")
            parts.append(tok.text)
    return "".join(parts) + "."


def parse_sentence_payload(sentence: str) -> Payload:
    """Parse exactly one sentence; raises CnlSyntaxError on rejection."""
    tokens = _tokenize(sentence)
    split = _split_sentences(tokens, sentence)
    if len(split) != 1:
        tok = tokens[0]
        raise CnlSyntaxError("expected exactly one sentence", tok.line, tok.col)
    sentence_tokens, _ = split[0]
    return _SentenceParser(sentence_tokens).parse_sentence()


def categorize(sentence: str) -> str:
    """Grammar category of one sentence (raises CnlSyntaxError if rejected)."""
    from .ast import category_of

    return category_of(parse_sentence_payload(sentence))


def check_syntax(sentence: str) -> SyntaxVerdict:
    """Accept/reject one sentence against the grammar, with a reason."""
    try:
        payload = parse_sentence_payload(sentence)
    except CnlSyntaxError as err:
        return SyntaxVerdict(False, reason=err.message, suggestion=err.suggestion)
    from .ast import category_of

    return SyntaxVerdict(True, category=category_of(payload))


def parse_cnl(text: str) -> CnlDocument:
    """Parse a document into categorized sentences plus its symbol table.

    The symbol table records declared entities/constants and entities
    introduced implicitly by head positions, in document order.
    """
    tokens = _tokenize(text)
    sentences: list[CnlSentence] = []
    symbols = SymbolTable()
    for index, (sentence_tokens, raw) in enumerate(_split_sentences(tokens, text)):
        payload = _SentenceParser(sentence_tokens).parse_sentence()
        _accumulate_symbols(payload, symbols)
        sentences.append(CnlSentence(text=raw, index=index, payload=payload))
    return CnlDocument(tuple(sentences), symbols)


def _accumulate_symbols(payload: Payload, symbols: SymbolTable) -> None:
    if isinstance(payload, EntityDecl):
        symbols.declare_entity(payload)
    elif isinstance(payload, ConstantDecl):
        symbols.declare_constant(payload)
    elif isinstance(payload, FactProp):
        if payload.entity_form:
            symbols.introduce_implicit(EntityRef(payload.predicate, tuple(zip(payload.attrs, payload.args))))
        else:
            symbols.introduce_implicit(
                EntityRef(payload.predicate, (("subject", payload.args[0]), ("object", payload.args[1])))
            )
    elif isinstance(payload, WhenRule) or isinstance(payload, WheneverRule):
        symbols.introduce_implicit(payload.head)
    elif isinstance(payload, ChoiceProp):
        for alt in payload.alternatives:
            symbols.introduce_implicit(alt.ref)
