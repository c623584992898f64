"""Paraphrase expansion behind a provider interface.

A provider maps (nl, variant) to a paraphrased sentence.  Only the NL side
is ever paraphrased; the CNL and category are copied from the parent, so
every rephrased record stays grammatical by construction.  Bundled
providers: identity, a seeded synonym-table rewriter, and an external
process speaking the translator plugin wire protocol (its response field
carries the paraphrase).  Hosted-API settings used elsewhere (engine,
temperature, token limit) are plain configuration fields on
ExternalProcessProvider — no hosted client ships here.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, replace

from .records import DatasetRecord


class ProviderError(RuntimeError):
    """Provider failure; carries everything needed to resume.

    ``partial`` holds the rephrased records completed before the failure
    and ``cursor`` is (record_index, variant) of the failing call.
    """

    def __init__(self, record_id: str, message: str, partial, cursor):
        super().__init__(f"record {record_id}: {message}")
        self.record_id = record_id
        self.partial = list(partial)
        self.cursor = cursor


class IdentityProvider:
    """Returns the sentence unchanged; the degenerate provider."""

    def paraphrase(self, nl: str, variant: int) -> str:
        return nl


_WORD_RE = re.compile(r"[A-Za-z]+")


class SynonymProvider:
    """Deterministic word-level rewriting from a synonym table.

    Each (sentence, variant) pair seeds its own generator, so variants
    differ from one another but reruns are reproducible.
    """

    def __init__(self, table: dict[str, tuple[str, ...]], seed: int = 0):
        self.table = {k.lower(): tuple(v) for k, v in table.items()}
        self.seed = seed

    def paraphrase(self, nl: str, variant: int) -> str:
        rng = random.Random(f"{self.seed}:{variant}:{nl}")

        def sub(m: re.Match) -> str:
            word = m.group(0)
            options = self.table.get(word.lower())
            if not options:
                return word
            pick = options[rng.randrange(len(options))]
            if word[0].isupper():
                pick = pick[0].upper() + pick[1:]
            return pick

        return _WORD_RE.sub(sub, nl)


@dataclass
class ExternalProcessProvider:
    """Paraphrase via a child process speaking the plugin wire protocol.

    The reference hosted-paraphraser settings are carried as inert config
    so runs can record them: engine, temperature, max_tokens.
    """

    command: tuple[str, ...]
    timeout: float = 30.0
    engine: str | None = None
    temperature: float | None = None
    max_tokens: int | None = None

    def __post_init__(self) -> None:
        self._client = None

    def _ensure_client(self):
        if self._client is None:
            from aspen.pipeline.plugin import PluginClient

            self._client = PluginClient(self.command, timeout=self.timeout).start()
        return self._client

    def paraphrase(self, nl: str, variant: int) -> str:
        outcome = self._ensure_client().request(nl)
        if outcome.error is not None:
            raise RuntimeError(outcome.error)
        return outcome.cnl

    def close(self) -> None:
        if self._client is not None:
            self._client.close()
            self._client = None


def rephrase_expand(records, provider, k: int, start_cursor=(0, 0)) -> list[DatasetRecord]:
    """k paraphrases per record; returns only the new rephrased records.

    ``start_cursor`` resumes a previously failed expansion: records and
    variants before it are skipped.  On provider failure, raises
    ProviderError carrying the partial output and the failing cursor.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    records = list(records)
    out: list[DatasetRecord] = []
    start_record, start_variant = start_cursor
    for i, parent in enumerate(records):
        if i < start_record:
            continue
        parent_ref = parent.id or f"idx{i}"
        first_variant = start_variant if i == start_record else 0
        for variant in range(first_variant, k):
            try:
                paraphrase = provider.paraphrase(parent.nl, variant)
            except Exception as exc:
                raise ProviderError(parent_ref, str(exc), out, (i, variant)) from exc
            out.append(
                replace(
                    parent,
                    id=f"{parent_ref}.r{variant + 1}",
                    nl=paraphrase,
                    origin="rephrased",
                    parent_id=parent_ref,
                )
            )
    return out
