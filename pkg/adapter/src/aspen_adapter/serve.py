"""The plugin serving loop: handshake, then one response per request line.

A single loop answers requests in arrival order.  Translation failures
for one sentence become error responses and the loop continues; only a
failure to load the model at startup is fatal (the caller exits nonzero
before any handshake is written).
"""

from __future__ import annotations

import sys

from .config import AdapterConfig
from .wire import handshake_line, parse_request, response_line

SERVE_NAME = "aspen-adapter"


def passthrough_translate(nl: str) -> str:
    return nl


def model_translator(config: AdapterConfig):
    from .model import generate_one, load_artifact

    model, tokenizer = load_artifact(config.model, config.device)

    def translate(nl: str) -> str:
        return generate_one(model, tokenizer, nl, config)

    return translate


def serve(translate, stdin=None, stdout=None, name: str = SERVE_NAME) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stdout.write(handshake_line(name) + "\n")
    stdout.flush()
    for raw in stdin:
        line = raw.strip()
        if not line:
            continue
        request_id, nl, error = parse_request(line)
        if error is not None:
            stdout.write(response_line(request_id, error=error) + "\n")
        else:
            try:
                stdout.write(response_line(request_id, cnl=translate(nl)) + "\n")
            except Exception as exc:  # one bad generation must not end the loop
                stdout.write(
                    response_line(request_id, error=f"generation failed: {exc}") + "\n"
                )
        stdout.flush()
    return 0
