"""Translation-quality metrics over prediction/reference corpora.

From-scratch, bit-stable implementations: cumulative corpus BLEU-1..4,
exact-match METEOR, syntactic accuracy over the controlled grammar, and
token-multiset precision/recall/F1 with exact-match accuracy.  Scores are
computed from integer count accumulation before any division, so corpus
order never changes a result.

Tokenization is shared by every metric: lowercase, then split into runs of
word characters and single punctuation marks.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

from aspen.cnl import SyntaxVerdict, check_syntax

TOKENIZATION = "lowercased; word-character runs and single punctuation marks"

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


class EmptyCorpus(ValueError):
    """Raised when a metric is asked to score zero pairs."""


def tokenize(text: str) -> tuple[str, ...]:
    return tuple(_TOKEN_RE.findall(text.lower()))


@dataclass(frozen=True)
class EvalPair:
    """One hypothesis with at least one reference."""

    hypothesis: str
    references: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.references:
            raise ValueError("an EvalPair needs at least one reference")

    def hyp_tokens(self) -> tuple[str, ...]:
        return tokenize(self.hypothesis)

    def ref_tokens(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tokenize(r) for r in self.references)


@dataclass(frozen=True)
class MetricConfig:
    bleu_max_n: int = 4
    bleu_smoothing: bool = False
    meteor_alpha: float = 0.9
    meteor_beta: float = 3.0
    meteor_gamma: float = 0.5

    def __post_init__(self) -> None:
        if not 0 < self.meteor_alpha < 1:
            raise ValueError("meteor_alpha must lie strictly between 0 and 1")
        if self.meteor_beta <= 0:
            raise ValueError("meteor_beta must be positive")
        if not 0 <= self.meteor_gamma <= 1:
            raise ValueError("meteor_gamma must lie in [0, 1]")


@dataclass(frozen=True)
class EvalReport:
    bleu: tuple[float, ...]
    meteor: float
    precision: float
    recall: float
    f1: float
    exact_match_accuracy: float
    syntactic_accuracy: float | None
    total: int
    syntactically_correct: int | None
    tokenization: str = TOKENIZATION
    meteor_stage: str = "exact"

    @property
    def bleu_1(self) -> float:
        return self.bleu[0]

    @property
    def bleu_4(self) -> float:
        return self.bleu[3]

    def to_dict(self) -> dict:
        out = {f"bleu_{i + 1}": score for i, score in enumerate(self.bleu)}
        out.update(
            meteor=self.meteor,
            precision=self.precision,
            recall=self.recall,
            f1=self.f1,
            exact_match_accuracy=self.exact_match_accuracy,
            syntactic_accuracy=self.syntactic_accuracy,
            total=self.total,
            syntactically_correct=self.syntactically_correct,
            tokenization=self.tokenization,
            meteor_stage=self.meteor_stage,
        )
        return out

    def table(self) -> str:
        rows = [("Metric", "Score")]
        for i, score in enumerate(self.bleu):
            rows.append((f"BLEU-{i + 1}", f"{score:.4f}"))
        rows.append(("METEOR", f"{self.meteor:.4f}"))
        rows.append(("Precision", f"{self.precision:.4f}"))
        rows.append(("Recall", f"{self.recall:.4f}"))
        rows.append(("F1", f"{self.f1:.4f}"))
        rows.append(("Accuracy", f"{self.exact_match_accuracy:.4f}"))
        if self.syntactic_accuracy is not None:
            rows.append(("SA", f"{self.syntactic_accuracy:.4f}"))
        width = max(len(name) for name, _ in rows)
        lines = [f"{name:<{width}}  {score}" for name, score in rows]
        lines.insert(1, "-" * len(lines[0]))
        return "\n".join(lines)


def _require_pairs(pairs) -> list[EvalPair]:
    pairs = list(pairs)
    if not pairs:
        raise EmptyCorpus("no hypothesis/reference pairs to score")
    for p in pairs:
        if not p.hyp_tokens():
            raise ValueError(f"empty hypothesis: {p.hypothesis!r}")
    return pairs


def _ngrams(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tokens[i : i + n] for i in range(len(tokens) - n + 1))


def _closest_ref_length(hyp_len: int, ref_lens: list[int]) -> int:
    # Ties go to the shorter reference.
    return min(ref_lens, key=lambda r: (abs(r - hyp_len), r))


def corpus_bleu(pairs, config: MetricConfig = MetricConfig()) -> tuple[float, ...]:
    """Cumulative corpus BLEU-1..max_n.

    Clipped n-gram counts and lengths accumulate over the corpus before
    division.  The brevity penalty is min(1, exp(1 - r/c)) from the corpus
    hypothesis length c and effective reference length r (closest per pair).
    With smoothing off, a zero count at any order zeroes the cumulative
    score; the add-one flag smooths orders 2 and above.
    """
    pairs = _require_pairs(pairs)
    max_n = config.bleu_max_n
    matched = [0] * max_n
    totals = [0] * max_n
    hyp_length = 0
    ref_length = 0
    for pair in pairs:
        hyp = pair.hyp_tokens()
        refs = pair.ref_tokens()
        hyp_length += len(hyp)
        ref_length += _closest_ref_length(len(hyp), [len(r) for r in refs])
        for n in range(1, max_n + 1):
            hyp_grams = _ngrams(hyp, n)
            if not hyp_grams:
                continue
            best = Counter()
            for ref in refs:
                for gram, count in _ngrams(ref, n).items():
                    if count > best[gram]:
                        best[gram] = count
            matched[n - 1] += sum(min(c, best[g]) for g, c in hyp_grams.items())
            totals[n - 1] += sum(hyp_grams.values())

    if hyp_length >= ref_length:
        brevity = 1.0
    else:
        brevity = math.exp(1.0 - ref_length / hyp_length)

    precisions: list[float] = []
    for n in range(max_n):
        num, den = matched[n], totals[n]
        if config.bleu_smoothing and n >= 1:
            num, den = num + 1, den + 1
        precisions.append(num / den if den else 0.0)

    scores = []
    for k in range(1, max_n + 1):
        window = precisions[:k]
        if any(p == 0.0 for p in window):
            scores.append(0.0)
        else:
            scores.append(brevity * math.exp(sum(math.log(p) for p in window) / k))
    return tuple(scores)


def _align(hyp: tuple[str, ...], ref: tuple[str, ...]) -> tuple[int, int]:
    """Exact-match alignment: returns (matches, chunks).

    Matches are maximal by construction (multiset intersection).  Positions
    are paired greedily left to right, preferring the reference position
    that continues the current chunk so fragmentation is not overcounted.
    """
    ref_positions: dict[str, list[int]] = {}
    for j, token in enumerate(ref):
        ref_positions.setdefault(token, []).append(j)
    used: set[int] = set()
    aligned: list[tuple[int, int]] = []
    last_j = -2
    for i, token in enumerate(hyp):
        options = [j for j in ref_positions.get(token, ()) if j not in used]
        if not options:
            continue
        j = next((o for o in options if o == last_j + 1), options[0])
        used.add(j)
        aligned.append((i, j))
        last_j = j
    chunks = 0
    prev = None
    for i, j in aligned:
        if prev is None or i != prev[0] + 1 or j != prev[1] + 1:
            chunks += 1
        prev = (i, j)
    return len(aligned), chunks


def _meteor_pair(hyp, ref, config: MetricConfig) -> float:
    matches, chunks = _align(hyp, ref)
    if matches == 0:
        return 0.0
    precision = matches / len(hyp)
    recall = matches / len(ref)
    fmean = (precision * recall) / (
        config.meteor_alpha * precision + (1 - config.meteor_alpha) * recall
    )
    penalty = config.meteor_gamma * (chunks / matches) ** config.meteor_beta
    return fmean * (1.0 - penalty)


def corpus_meteor(pairs, config: MetricConfig = MetricConfig()) -> float:
    """Mean per-pair METEOR, best reference per pair, exact-match stage only."""
    pairs = _require_pairs(pairs)
    total = 0.0
    for pair in pairs:
        hyp = pair.hyp_tokens()
        total += max(
            (_meteor_pair(hyp, ref, config) for ref in pair.ref_tokens() if ref),
            default=0.0,
        )
    return total / len(pairs)


@dataclass(frozen=True)
class SyntaxScore:
    accuracy: float
    accepted: int
    total: int
    verdicts: tuple[SyntaxVerdict, ...]


def syntactic_accuracy(sentences) -> SyntaxScore:
    """Fraction of sentences the controlled grammar accepts."""
    sentences = list(sentences)
    if not sentences:
        raise EmptyCorpus("no sentences to check")
    verdicts = tuple(check_syntax(s) for s in sentences)
    accepted = sum(1 for v in verdicts if v.accepted)
    return SyntaxScore(accepted / len(sentences), accepted, len(sentences), verdicts)


def token_prf(pairs) -> tuple[float, float, float, float]:
    """Macro-averaged token-multiset precision/recall/F1 plus exact-match rate.

    Each pair scores against its best reference (highest per-pair F1); a
    pair is an exact match when the hypothesis string equals any reference.
    """
    pairs = _require_pairs(pairs)
    p_sum = r_sum = 0.0
    exact = 0
    for pair in pairs:
        hyp = Counter(pair.hyp_tokens())
        hyp_size = sum(hyp.values())
        best = (0.0, 0.0, 0.0)
        for ref_tokens in pair.ref_tokens():
            ref = Counter(ref_tokens)
            overlap = sum(min(c, ref[t]) for t, c in hyp.items())
            p = overlap / hyp_size if hyp_size else 0.0
            r = overlap / sum(ref.values()) if ref else 0.0
            f = 2 * p * r / (p + r) if p + r else 0.0
            if f > best[2]:
                best = (p, r, f)
        p_sum += best[0]
        r_sum += best[1]
        if pair.hypothesis in pair.references:
            exact += 1
    precision = p_sum / len(pairs)
    recall = r_sum / len(pairs)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1, exact / len(pairs)


def evaluate(
    pairs,
    config: MetricConfig = MetricConfig(),
    check_cnl_syntax: bool = False,
) -> EvalReport:
    """Score a corpus on every metric; optionally grammar-check hypotheses."""
    pairs = _require_pairs(pairs)
    bleu = corpus_bleu(pairs, config)
    meteor = corpus_meteor(pairs, config)
    precision, recall, f1, exact = token_prf(pairs)
    sa = None
    correct = None
    if check_cnl_syntax:
        score = syntactic_accuracy([p.hypothesis for p in pairs])
        sa = score.accuracy
        correct = score.accepted
    return EvalReport(
        bleu=bleu,
        meteor=meteor,
        precision=precision,
        recall=recall,
        f1=f1,
        exact_match_accuracy=exact,
        syntactic_accuracy=sa,
        total=len(pairs),
        syntactically_correct=correct,
    )
