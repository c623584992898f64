"""End-to-end orchestration: sentences in, checked program out.

A run translates every sentence to a CNL candidate (builtin retrieval or
an external plugin), grammar-checks each candidate, parses the accepted
ones as a single document, compiles it, and — when a gold program is
supplied — decides bounded uniform equivalence against it.  Failures are
recorded per sentence and never repaired silently; the run always
completes with a full report.

Runs serialize to plain dictionaries with no timestamps or host paths,
so the same inputs produce byte-identical persisted reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from aspen.asp.parse import parse_program
from aspen.asp.syntax import AspProgram
from aspen.cnl import check_syntax
from aspen.cnl.parser import CnlSyntaxError, parse_cnl
from aspen.codegen import compile_document
from aspen.solver import DEFAULT_ATOM_BOUND, FactSignature, check_uniform_equivalence

from .plugin import PluginClient, TranslationOutcome, TranslatorUnavailable
from .retrieval import TemplateIndex, build_template_index, retrieval_translate

_KINDS = ("builtin-retrieval", "external-process")


@dataclass(frozen=True)
class TranslatorSpec:
    kind: str = "builtin-retrieval"
    command: tuple[str, ...] = ()
    timeout: float = 10.0
    window: int = 8

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"translator kind must be one of {', '.join(_KINDS)}")
        if self.kind == "external-process" and not self.command:
            raise ValueError("external-process translator needs a command")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.window < 1:
            raise ValueError("pipelining window must be at least 1")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "command": list(self.command),
            "timeout": self.timeout,
            "window": self.window,
        }


@dataclass(frozen=True)
class CnlOutput:
    """One input sentence's candidate plus its grammar verdict."""

    index: int
    nl: str
    cnl: str | None
    error: str | None  # translator-side failure (no match, timeout, plugin fault)
    accepted: bool
    category: str | None
    reason: str | None  # grammar-side rejection detail

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "nl": self.nl,
            "cnl": self.cnl,
            "error": self.error,
            "accepted": self.accepted,
            "category": self.category,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CnlOutput":
        return cls(**{field: data[field] for field in
                      ("index", "nl", "cnl", "error", "accepted", "category", "reason")})


@dataclass(frozen=True)
class PipelineRun:
    translator: dict
    inputs: tuple[str, ...]
    outputs: tuple[CnlOutput, ...]
    program_text: str | None
    diagnostics: tuple[str, ...]
    accepted: int
    syntactic_accuracy: float | None
    equivalence: dict | None  # None when no gold program was supplied

    @property
    def program(self) -> AspProgram | None:
        return None if self.program_text is None else parse_program(self.program_text)

    def to_dict(self) -> dict:
        return {
            "translator": self.translator,
            "inputs": list(self.inputs),
            "outputs": [out.to_dict() for out in self.outputs],
            "program": self.program_text,
            "diagnostics": list(self.diagnostics),
            "accepted": self.accepted,
            "syntactic_accuracy": self.syntactic_accuracy,
            "equivalence": self.equivalence,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineRun":
        return cls(
            translator=data["translator"],
            inputs=tuple(data["inputs"]),
            outputs=tuple(CnlOutput.from_dict(o) for o in data["outputs"]),
            program_text=data["program"],
            diagnostics=tuple(data["diagnostics"]),
            accepted=data["accepted"],
            syntactic_accuracy=data["syntactic_accuracy"],
            equivalence=data["equivalence"],
        )


def translate(sentences, spec: TranslatorSpec, *, index: TemplateIndex | None = None):
    """One TranslationOutcome per sentence, order preserved."""
    sentences = [str(s) for s in sentences]
    if spec.kind == "builtin-retrieval":
        index = build_template_index() if index is None else index
        outcomes = []
        for i, nl in enumerate(sentences):
            cnl = retrieval_translate(nl, index)
            if cnl is None:
                outcomes.append(TranslationOutcome(i, nl, error="no template matched"))
            else:
                outcomes.append(TranslationOutcome(i, nl, cnl=cnl))
        return outcomes
    if not sentences:
        return []
    with PluginClient(spec.command, timeout=spec.timeout, window=spec.window) as client:
        return client.translate_many(sentences)


def _compile_accepted(outputs: list[CnlOutput]) -> tuple[str | None, list[str]]:
    """Compile accepted candidates as one document; remap diagnostics."""
    accepted_indices = [out.index for out in outputs if out.accepted]
    text = "\n".join(out.cnl for out in outputs if out.accepted)
    try:
        document = parse_cnl(text)
    except CnlSyntaxError as exc:  # accepted sentences should re-parse; belt and braces
        return None, [f"document parse failed: {exc}"]
    result = compile_document(document)
    diagnostics = [
        f"sentence {accepted_indices[d.sentence_index] + 1}: {d.message} [{d.code}]"
        for d in result.diagnostics
    ]
    if result.program is None:
        return None, diagnostics
    return str(result.program), diagnostics


def run_pipeline(
    sentences,
    spec: TranslatorSpec = TranslatorSpec(),
    *,
    index: TemplateIndex | None = None,
    gold: AspProgram | None = None,
    signature: FactSignature | None = None,
    universe=(),
    atom_bound: int = DEFAULT_ATOM_BOUND,
) -> PipelineRun:
    """Translate, check, compile, and (optionally) compare against gold."""
    if gold is not None and signature is None:
        raise ValueError("a gold program needs a fact signature for the equivalence check")
    outcomes = translate(sentences, spec, index=index)
    outputs: list[CnlOutput] = []
    for outcome in outcomes:
        if outcome.cnl is None:
            outputs.append(
                CnlOutput(outcome.index, outcome.nl, None, outcome.error,
                          accepted=False, category=None, reason=None)
            )
            continue
        verdict = check_syntax(outcome.cnl)
        outputs.append(
            CnlOutput(outcome.index, outcome.nl, outcome.cnl, None,
                      accepted=verdict.accepted, category=verdict.category,
                      reason=verdict.reason)
        )

    program_text, diagnostics = _compile_accepted(outputs)
    accepted = sum(1 for out in outputs if out.accepted)
    sa = accepted / len(outputs) if outputs else None

    equivalence: dict | None = None
    if gold is not None:
        if program_text is None:
            equivalence = {"status": "skipped", "reason": "compilation incomplete"}
        else:
            verdict = check_uniform_equivalence(
                parse_program(program_text), gold, signature, universe,
                mode="exhaustive", atom_bound=atom_bound,
            )
            equivalence = {
                "status": "equivalent" if verdict.equivalent else "different",
                "checked": verdict.checked,
                "signature": [list(p) for p in signature.predicates],
                "universe": list(universe),
            }
            if verdict.counterexample is not None:
                equivalence["counterexample"] = [
                    str(a) for a in verdict.counterexample.facts
                ]

    return PipelineRun(
        translator=spec.to_dict(),
        inputs=tuple(str(s) for s in sentences),
        outputs=tuple(outputs),
        program_text=program_text,
        diagnostics=tuple(diagnostics),
        accepted=accepted,
        syntactic_accuracy=sa,
        equivalence=equivalence,
    )


def render_run(run: PipelineRun) -> str:
    """Canonical single-line-stable JSON text for a persisted run."""
    return json.dumps(run.to_dict(), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def write_run(path: str | Path, run: PipelineRun) -> None:
    Path(path).write_text(render_run(run), encoding="utf-8")


def read_run(path: str | Path) -> PipelineRun:
    return PipelineRun.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def replay_program(run: PipelineRun) -> str | None:
    """Recompile the persisted candidates; must reproduce the stored program."""
    return _compile_accepted(list(run.outputs))[0]
