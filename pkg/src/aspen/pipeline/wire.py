"""Canonical encoding of translator plugin messages.

One message per line. A plugin announces itself with a handshake line,
then answers each request line with exactly one response line:

    {"hello":{"name":"echo","protocol":1}}
    {"id":1,"nl":"..."}                      (pipeline -> plugin)
    {"cnl":"...","id":1}                     (plugin -> pipeline)
    {"error":"...","id":1}                   (plugin -> pipeline, failure)

Responses are serialized with sorted keys, compact separators, and ASCII
escapes so that two independent implementations produce identical bytes.
Blank lines are ignored.  A request that cannot be parsed is answered
with an error response carrying the request's id when one was readable
and null otherwise; the serving loop never dies on bad input.
"""

from __future__ import annotations

import json

PROTOCOL_VERSION = 1

ERR_NOT_JSON = "malformed request: not valid JSON"
ERR_NOT_OBJECT = "malformed request: not an object"
ERR_BAD_ID = "malformed request: id must be an integer"
ERR_BAD_NL = "malformed request: nl must be a string"


def canonical_line(obj) -> str:
    """Serialize one message the way every conforming plugin must."""
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


def echo_response(line: str) -> str:
    """The canonical reply an echoing plugin gives to one request line."""
    request_id, nl, error = parse_request(line)
    if error is not None:
        return response_line(request_id, error=error)
    return response_line(request_id, cnl=nl)
