"""Controlled natural language: AST, grammar parser, sentence categories."""

from .ast import (
    CATEGORY_ORDER,
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
    EntityInfo,
    EntityRef,
    FactProp,
    SymbolTable,
    WeakProp,
    WhenRule,
    WheneverRule,
    WhereClause,
    category_of,
)
from .parser import (
    CnlSyntaxError,
    SyntaxVerdict,
    categorize,
    check_syntax,
    parse_cnl,
    parse_sentence_payload,
)

__all__ = [
    "CATEGORY_ORDER",
    "ChoiceAlt",
    "ChoiceProp",
    "CnlDocument",
    "CnlSentence",
    "CnlSyntaxError",
    "ComparisonCond",
    "Condition",
    "ConstantDecl",
    "ConstraintProp",
    "Core",
    "EntityCond",
    "EntityDecl",
    "EntityInfo",
    "EntityRef",
    "FactProp",
    "SymbolTable",
    "SyntaxVerdict",
    "WeakProp",
    "WhenRule",
    "WheneverRule",
    "WhereClause",
    "categorize",
    "category_of",
    "check_syntax",
    "parse_cnl",
    "parse_sentence_payload",
]
