"""NL -> CNL -> ASP orchestration with pluggable sentence translators.

Translators are either the builtin template-inverting retriever or an
external process speaking the line-delimited stdio protocol defined in
:mod:`aspen.pipeline.wire` (echo fixture: ``python -m aspen.pipeline.echo``).
"""

from .plugin import PluginClient, TranslationOutcome, TranslatorUnavailable
from .problems import Problem, bundled_problem, bundled_problems, load_problem
from .retrieval import (
    RetrievalTranslator,
    TemplateIndex,
    build_template_index,
    retrieval_translate,
)
from .run import (
    CnlOutput,
    PipelineRun,
    TranslatorSpec,
    read_run,
    render_run,
    replay_program,
    run_pipeline,
    translate,
    write_run,
)
from .wire import (
    PROTOCOL_VERSION,
    canonical_line,
    echo_response,
    handshake_line,
    parse_request,
    response_line,
)

__all__ = [
    "PROTOCOL_VERSION",
    "CnlOutput",
    "PipelineRun",
    "PluginClient",
    "Problem",
    "RetrievalTranslator",
    "TemplateIndex",
    "TranslationOutcome",
    "TranslatorSpec",
    "TranslatorUnavailable",
    "build_template_index",
    "bundled_problem",
    "bundled_problems",
    "canonical_line",
    "echo_response",
    "handshake_line",
    "load_problem",
    "parse_request",
    "read_run",
    "render_run",
    "replay_program",
    "response_line",
    "retrieval_translate",
    "run_pipeline",
    "translate",
    "write_run",
]
