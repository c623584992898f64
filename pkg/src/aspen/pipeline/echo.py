"""Echo translator plugin: answers every request with its own sentence.

Run as ``python -m aspen.pipeline.echo``.  Serves the stdio wire protocol
and doubles as the conformance fixture external translators are tested
against.
"""

from __future__ import annotations

import sys

from .wire import echo_response, handshake_line


def serve(stdin=None, stdout=None, name: str = "echo") -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stdout.write(handshake_line(name) + "\n")
    stdout.flush()
    for raw in stdin:
        line = raw.strip()
        if not line:
            continue
        stdout.write(echo_response(line) + "\n")
        stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(serve())
