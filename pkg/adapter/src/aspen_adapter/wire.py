"""Line protocol spoken over stdio: one JSON message per line.

This is an independent implementation of the translator-plugin wire
contract (see the host toolkit's docs/plugin-protocol.md): handshake
first, then exactly one response per request line, serialized with
sorted keys, compact separators, and ASCII escapes so the bytes match
any other conforming implementation.  Blank lines are ignored; a line
that cannot be parsed gets an error response carrying the request id
when one was readable and null otherwise.  The loop never dies on bad
input.
"""

from __future__ import annotations

import json

PROTOCOL_VERSION = 1

ERR_NOT_JSON = "malformed request: not valid JSON"
ERR_NOT_OBJECT = "malformed request: not an object"
ERR_BAD_ID = "malformed request: id must be an integer"
ERR_BAD_NL = "malformed request: nl must be a string"


def canonical_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def handshake_line(name: str) -> str:
    return canonical_line({"hello": {"name": name, "protocol": PROTOCOL_VERSION}})


def parse_request(line: str) -> tuple[int | None, str | None, str | None]:
    """Split a raw request line into (id, nl, error); exactly one of nl/error set."""
    try:
        message = json.loads(line)
    except ValueError:
        return None, None, ERR_NOT_JSON
    if not isinstance(message, dict):
        return None, None, ERR_NOT_OBJECT
    request_id = message.get("id")
    if isinstance(request_id, bool) or not isinstance(request_id, int):
        return None, None, ERR_BAD_ID
    nl = message.get("nl")
    if not isinstance(nl, str):
        return request_id, None, ERR_BAD_NL
    return request_id, nl, None


def response_line(request_id: int | None, *, cnl: str | None = None, error: str | None = None) -> str:
    if (cnl is None) == (error is None):
        raise ValueError("a response carries either cnl or error")
    if error is not None:
        return canonical_line({"error": error, "id": request_id})
    return canonical_line({"cnl": cnl, "id": request_id})
