"""Client side of the translator plugin protocol.

Spawns the plugin as a child process, validates its handshake, then
exchanges line-delimited messages over its standard streams.  Requests
are pipelined up to a configurable window; every request ends in exactly
one recorded outcome — a candidate, a plugin-reported error, or a
timeout — and a failing plugin never aborts the batch.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
import time
from dataclasses import dataclass

from .wire import PROTOCOL_VERSION, canonical_line

_EOF = object()


class TranslatorUnavailable(RuntimeError):
    """The plugin process could not be started or never shook hands."""


@dataclass(frozen=True)
class TranslationOutcome:
    """What became of one sentence; exactly one of cnl/error is set."""

    index: int
    nl: str
    cnl: str | None = None
    error: str | None = None

    def __post_init__(self) -> None:
        if (self.cnl is None) == (self.error is None):
            raise ValueError("outcome carries either cnl or error")

    @property
    def ok(self) -> bool:
        return self.error is None


class _Reader(threading.Thread):
    """Drains the child's stdout into a queue so reads can be timed out."""

    def __init__(self, stream):
        super().__init__(daemon=True)
        self.stream = stream
        self.lines: queue.Queue = queue.Queue()

    def run(self) -> None:
        try:
            for line in self.stream:
                self.lines.put(line)
        except ValueError:  # stream closed under us
            pass
        self.lines.put(_EOF)

    def get(self, deadline: float):
        """Next line, or _EOF, or None when the deadline passes first."""
        remaining = deadline - time.monotonic()
        try:
            return self.lines.get(timeout=max(remaining, 0.0))
        except queue.Empty:
            return None


class PluginClient:
    """Drives one external translator process."""

    def __init__(self, command, *, timeout: float = 10.0, window: int = 8):
        if timeout <= 0:
            raise ValueError("timeout must be positive")
        if window < 1:
            raise ValueError("pipelining window must be at least 1")
        self.command = tuple(str(part) for part in command)
        if not self.command:
            raise ValueError("empty plugin command")
        self.timeout = float(timeout)
        self.window = int(window)
        self.name: str | None = None
        self._proc: subprocess.Popen | None = None
        self._reader: _Reader | None = None

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> "PluginClient":
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise TranslatorUnavailable(f"cannot start {' '.join(self.command)}: {exc}")
        self._reader = _Reader(self._proc.stdout)
        self._reader.start()
        line = self._reader.get(time.monotonic() + self.timeout)
        if line is None or line is _EOF:
            self.close()
            raise TranslatorUnavailable("plugin sent no handshake line")
        try:
            hello = json.loads(line).get("hello")
        except (ValueError, AttributeError):
            hello = None
        if not isinstance(hello, dict) or hello.get("protocol") != PROTOCOL_VERSION:
            self.close()
            raise TranslatorUnavailable(f"bad handshake line: {line.strip()!r}")
        self.name = str(hello.get("name", "unnamed"))
        return self

    def close(self) -> None:
        proc = self._proc
        if proc is None:
            return
        self._proc = None
        try:
            if proc.stdin and not proc.stdin.closed:
                proc.stdin.close()
        except OSError:
            pass
        try:
            proc.wait(timeout=2.0)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()

    def __enter__(self) -> "PluginClient":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- requests ----------------------------------------------------------

    def _send(self, request_id: int, nl: str) -> bool:
        line = canonical_line({"id": request_id, "nl": nl}) + "\n"
        try:
            self._proc.stdin.write(line)
            self._proc.stdin.flush()
            return True
        except (OSError, ValueError, AttributeError):
            return False

    def translate_many(self, sentences) -> list[TranslationOutcome]:
        """One outcome per sentence, order preserved, batch never aborted."""
        if self._proc is None or self._reader is None:
            raise RuntimeError("client not started")
        sentences = list(sentences)
        outcomes: list[TranslationOutcome | None] = [None] * len(sentences)
        pending: dict[int, float] = {}  # request id (= sentence index) -> deadline
        next_index = 0
        alive = True

        def fail_rest(reason: str, start: int) -> int:
            for i in range(start, len(sentences)):
                outcomes[i] = TranslationOutcome(i, sentences[i], error=reason)
            return len(sentences)

        while next_index < len(sentences) or pending:
            while alive and next_index < len(sentences) and len(pending) < self.window:
                if self._send(next_index, sentences[next_index]):
                    pending[next_index] = time.monotonic() + self.timeout
                else:
                    alive = False
                    next_index = fail_rest("plugin closed before the request was sent", next_index)
                    break
                next_index += 1
            if not pending:
                if not alive:
                    break
                continue
            oldest = min(pending, key=pending.get)
            line = self._reader.get(pending[oldest])
            if line is None:
                outcomes[oldest] = TranslationOutcome(
                    oldest, sentences[oldest], error=f"timeout after {self.timeout:g}s"
                )
                del pending[oldest]
                continue
            if line is _EOF:
                alive = False
                for request_id in sorted(pending):
                    outcomes[request_id] = TranslationOutcome(
                        request_id, sentences[request_id], error="plugin closed the stream"
                    )
                pending.clear()
                next_index = fail_rest("plugin closed the stream", next_index)
                continue
            response = self._parse_response(line)
            if response is None:
                continue  # unattributable noise; timeouts will surface it
            request_id, cnl, error = response
            if request_id not in pending:
                continue  # duplicate or a response that lost its timeout race
            del pending[request_id]
            outcomes[request_id] = TranslationOutcome(
                request_id, sentences[request_id], cnl=cnl, error=error
            )
        for i, out in enumerate(outcomes):
            if out is None:  # unreachable; keeps the one-outcome-per-sentence contract
                outcomes[i] = TranslationOutcome(i, sentences[i], error="no outcome recorded")
        return outcomes  # type: ignore[return-value]

    def request(self, nl: str) -> TranslationOutcome:
        return self.translate_many([nl])[0]

    @staticmethod
    def _parse_response(line: str):
        try:
            message = json.loads(line)
        except ValueError:
            return None
        if not isinstance(message, dict):
            return None
        request_id = message.get("id")
        if isinstance(request_id, bool) or not isinstance(request_id, int):
            return None
        if isinstance(message.get("cnl"), str):
            return request_id, message["cnl"], None
        if "error" in message:
            return request_id, None, str(message["error"])
        return None
