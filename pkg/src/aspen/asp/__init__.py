"""ASP program model: syntax tree, printer, parser, safety checks."""

from .parse import AspSyntaxError, parse_program, parse_rule
from .safety import SafetyReport, SafetyViolation, validate_program_safety, validate_safety
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
    fact,
    num,
    print_program,
    print_rule,
    sym,
    var,
)

__all__ = [
    "AspProgram",
    "AspRule",
    "AspSyntaxError",
    "Atom",
    "Choice",
    "ChoiceElement",
    "Comparison",
    "Literal",
    "SafetyReport",
    "SafetyViolation",
    "Term",
    "WeakSpec",
    "fact",
    "num",
    "parse_program",
    "parse_rule",
    "print_program",
    "print_rule",
    "sym",
    "validate_program_safety",
    "validate_safety",
    "var",
]
