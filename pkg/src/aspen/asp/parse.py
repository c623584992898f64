"""Parser for the printed ASP fragment.

Accepts exactly what :func:`aspen.asp.syntax.print_program` emits, plus
arbitrary whitespace and ``%`` line comments, so programs can also be written
by hand in fixture files.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    AspProgram,
    AspRule,
    Atom,
    Choice,
    ChoiceElement,
    Comparison,
    Literal,
    Term,
    WeakSpec,
    num,
    sym,
    var,
)

_PUNCT = (":-", ":~", "!=", "<=", ">=", "=", "<", ">", ".", ",", "|", "(", ")", "{", "}", ";", ":", "[", "]", "@", "-")


class AspSyntaxError(ValueError):
    """Raised on malformed program text; carries line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | variable | int | punct | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(_Token("int", text[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            word = text[start:i]
            kind = "variable" if word[0].isupper() else "ident"
            if word[0] == "_":
                raise AspSyntaxError(f"names may not start with underscore: {word!r}", line, col)
            tokens.append(_Token(kind, word, line, col))
            col += i - start
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(_Token("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise AspSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise AspSyntaxError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def fail(self, message: str) -> AspSyntaxError:
        tok = self.peek()
        return AspSyntaxError(message, tok.line, tok.col)

    # --- terms and atoms ---------------------------------------------------

    def parse_term(self) -> Term:
        tok = self.next()
        if tok.kind == "int":
            return num(int(tok.text))
        if tok.text == "-" and self.peek().kind == "int":
            return num(-int(self.next().text))
        if tok.kind == "variable":
            return var(tok.text)
        if tok.kind == "ident":
            return sym(tok.text)
        raise AspSyntaxError(f"expected a term, found {tok.text!r}", tok.line, tok.col)

    def parse_atom(self) -> Atom:
        tok = self.next()
        if tok.kind != "ident":
            raise AspSyntaxError(f"expected a predicate name, found {tok.text!r}", tok.line, tok.col)
        args: list[Term] = []
        if self.peek().text == "(":
            self.next()
            args.append(self.parse_term())
            while self.peek().text == ",":
                self.next()
                args.append(self.parse_term())
            self.expect(")")
        return Atom(tok.text, tuple(args))

    # --- body items ---------------------------------------------------------

    def parse_body_item(self) -> Literal | Comparison:
        tok = self.peek()
        if tok.text == "not" and tok.kind == "ident":
            self.next()
            return Literal(self.parse_atom(), negated=True)
        # A comparison starts with any term; an atom starts with an ident that
        # is NOT immediately followed by a comparison operator.
        if tok.kind == "ident" and self.peek(1).text not in ("=", "!=", "<", "<=", ">", ">="):
            return Literal(self.parse_atom())
        left = self.parse_term()
        op_tok = self.next()
        if op_tok.text not in ("=", "!=", "<", "<=", ">", ">="):
            raise AspSyntaxError(f"expected a comparison operator, found {op_tok.text!r}", op_tok.line, op_tok.col)
        right = self.parse_term()
        return Comparison(left, op_tok.text, right)

    def parse_body(self) -> tuple[Literal | Comparison, ...]:
        items = [self.parse_body_item()]
        while self.peek().text == ",":
            self.next()
            items.append(self.parse_body_item())
        return tuple(items)

    # --- heads ---------------------------------------------------------------

    def parse_choice(self) -> Choice:
        lower: int | None = None
        if self.peek().kind == "int":
            lower = int(self.next().text)
            self.expect("<=")
        self.expect("{")
        elements = [self.parse_choice_element()]
        while self.peek().text == ";":
            self.next()
            elements.append(self.parse_choice_element())
        self.expect("}")
        upper: int | None = None
        if self.peek().text == "<=":
            self.next()
            tok = self.next()
            if tok.kind != "int":
                raise AspSyntaxError(f"expected an integer bound, found {tok.text!r}", tok.line, tok.col)
            upper = int(tok.text)
        return Choice(tuple(elements), lower, upper)

    def parse_choice_element(self) -> ChoiceElement:
        atom = self.parse_atom()
        conditions: list[Literal] = []
        if self.peek().text == ":":
            self.next()
            while True:
                negated = False
                if self.peek().text == "not" and self.peek().kind == "ident":
                    self.next()
                    negated = True
                conditions.append(Literal(self.parse_atom(), negated=negated))
                if self.peek().text != ",":
                    break
                self.next()
        return ChoiceElement(atom, tuple(conditions))

    # --- rules ---------------------------------------------------------------

    def parse_rule(self) -> AspRule:
        tok = self.peek()
        if tok.text == ":-":
            self.next()
            body = self.parse_body()
            self.expect(".")
            return AspRule(head=None, body=body)
        if tok.text == ":~":
            self.next()
            body = self.parse_body()
            self.expect(".")
            return AspRule(head=None, body=body, weak=self.parse_weak_spec())
        if tok.text == "{" or (tok.kind == "int" and self.peek(1).text == "<="):
            head: Choice | tuple[Atom, ...] = self.parse_choice()
        else:
            atoms = [self.parse_atom()]
            while self.peek().text == "|":
                self.next()
                atoms.append(self.parse_atom())
            head = tuple(atoms)
        body = ()
        if self.peek().text == ":-":
            self.next()
            body = self.parse_body()
        self.expect(".")
        return AspRule(head=head, body=body)

    def parse_weak_spec(self) -> WeakSpec:
        self.expect("[")
        weight = self.parse_term()
        self.expect("@")
        tok = self.next()
        neg = False
        if tok.text == "-":
            neg = True
            tok = self.next()
        if tok.kind != "int":
            raise AspSyntaxError(f"expected an integer level, found {tok.text!r}", tok.line, tok.col)
        level = -int(tok.text) if neg else int(tok.text)
        terms: list[Term] = []
        while self.peek().text == ",":
            self.next()
            terms.append(self.parse_term())
        self.expect("]")
        return WeakSpec(weight, level, tuple(terms))

    def parse_program(self) -> AspProgram:
        rules: list[AspRule] = []
        while self.peek().kind != "eof":
            rules.append(self.parse_rule())
        return AspProgram(tuple(rules))


def parse_program(text: str) -> AspProgram:
    """Parse program text into an :class:`AspProgram`.

    Raises :class:`AspSyntaxError` with line/column on malformed input.
    """
    return _Parser(text).parse_program()


def parse_rule(text: str) -> AspRule:
    """Parse exactly one rule."""
    parser = _Parser(text)
    rule = parser.parse_rule()
    tok = parser.peek()
    if tok.kind != "eof":
        raise AspSyntaxError(f"trailing input after rule: {tok.text!r}", tok.line, tok.col)
    return rule
