"""Metric oracles, each hand-derived in a comment next to its assertion."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from aspen.metrics import (
    EmptyCorpus,
    EvalPair,
    MetricConfig,
    corpus_bleu,
    corpus_meteor,
    evaluate,
    syntactic_accuracy,
    token_prf,
    tokenize,
)

GOOD_CNL = "A node is identified by an id."
BAD_CNL = "It is wrong that stuff."


def pair(hyp, *refs):
    return EvalPair(hyp, tuple(refs))


class TestTokenize:
    def test_lowercases_and_splits_punctuation(self):
        assert tokenize("Col(X,red).") == ("col", "(", "x", ",", "red", ")", ".")

    def test_whitespace_runs(self):
        assert tokenize("a   b\tc") == ("a", "b", "c")


class TestBleu:
    def test_identical_corpus_is_one(self):
        texts = ["a b c d e", "the quick brown fox jumps"]
        pairs = [EvalPair(t, (t,)) for t in texts]
        assert corpus_bleu(pairs) == (1.0, 1.0, 1.0, 1.0)

    def test_clipping_and_capped_brevity(self):
        # hyp "the the the the" vs ref "the cat": clipped unigram count is
        # min(4, 1) = 1 of 4, and the hypothesis is LONGER than the
        # reference (4 > 2) so no brevity penalty applies: BLEU-1 = 0.25.
        scores = corpus_bleu([pair("the the the the", "the cat")])
        assert scores[0] == pytest.approx(0.25, abs=1e-12)
        assert scores[1:] == (0.0, 0.0, 0.0)

    def test_brevity_penalty_when_short(self):
        # hyp "a b" vs ref "a b c d": perfect unigram precision but c=2,
        # r=4 gives BP = exp(1 - 4/2) = exp(-1).
        scores = corpus_bleu([pair("a b", "a b c d")])
        assert scores[0] == pytest.approx(math.exp(-1), abs=1e-12)

    def test_closest_reference_length(self):
        # Unigram precision is perfect (c appears in the longer reference),
        # and the effective reference length is the CLOSER one (2, not 5),
        # so the 3-token hypothesis is long enough and no penalty applies.
        scores = corpus_bleu([pair("a b c", "a b", "a b c x y")])
        assert scores[0] == pytest.approx(1.0)

    def test_disjoint_vocabulary_is_zero(self):
        assert corpus_bleu([pair("a b c d", "w x y z")]) == (0.0, 0.0, 0.0, 0.0)

    def test_smoothing_rescues_higher_orders_only(self):
        # "a b c d" vs "a b x d": trigram and 4-gram overlap are zero, so
        # the default zeroes BLEU-3/4; add-one smoothing keeps them
        # positive without touching BLEU-1 = 3/4.
        p = [pair("a b c d", "a b x d")]
        plain = corpus_bleu(p)
        smoothed = corpus_bleu(p, MetricConfig(bleu_smoothing=True))
        assert plain[0] == smoothed[0] == pytest.approx(3 / 4)
        assert plain[2] == plain[3] == 0.0
        assert smoothed[2] > 0.0 and smoothed[3] > 0.0

    def test_empty_corpus_raises(self):
        with pytest.raises(EmptyCorpus):
            corpus_bleu([])

    def test_empty_hypothesis_rejected(self):
        with pytest.raises(ValueError, match="empty hypothesis"):
            corpus_bleu([pair("", "a b")])


class TestMeteor:
    def test_identical_three_tokens(self):
        # matches=3 in one chunk: penalty = 0.5 * (1/3)^3 = 1/54, P=R=1 so
        # the weighted harmonic mean is 1, score = 53/54.
        score = corpus_meteor([pair("a b c", "a b c")])
        assert score == pytest.approx(53 / 54, abs=1e-9)
        assert score == pytest.approx(0.98148, abs=1e-5)

    def test_reversed_two_tokens(self):
        # "b a" vs "a b": both tokens match but in two chunks, so the
        # penalty is 0.5 * (2/2)^3 = 0.5 and the score halves to 0.5.
        assert corpus_meteor([pair("b a", "a b")]) == pytest.approx(0.5, abs=1e-12)

    def test_zero_overlap_is_zero(self):
        assert corpus_meteor([pair("x y z", "a b c")]) == 0.0

    def test_gamma_zero_is_pure_harmonic_mean(self):
        # "a b c" vs "a b d": P = R = 2/3, so the alpha-weighted harmonic
        # mean is also 2/3; with gamma=0 the penalty vanishes.
        config = MetricConfig(meteor_gamma=0.0)
        score = corpus_meteor([pair("a b c", "a b d")], config)
        assert score == pytest.approx(2 / 3, abs=1e-12)

    def test_corpus_is_arithmetic_mean(self):
        score = corpus_meteor([pair("a b c", "a b c"), pair("x y z", "a b c")])
        assert score == pytest.approx((53 / 54) / 2, abs=1e-12)

    def test_best_reference_wins(self):
        score = corpus_meteor([pair("a b c", "x y z", "a b c")])
        assert score == pytest.approx(53 / 54, abs=1e-9)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            MetricConfig(meteor_alpha=1.2)
        with pytest.raises(ValueError):
            MetricConfig(meteor_beta=0)
        with pytest.raises(ValueError):
            MetricConfig(meteor_gamma=1.5)


class TestSyntacticAccuracy:
    def test_known_accept_rate(self):
        # 389 accepted of 393 = 0.98982 (to five decimals).
        sentences = [GOOD_CNL] * 389 + [BAD_CNL] * 4
        score = syntactic_accuracy(sentences)
        assert score.total == 393 and score.accepted == 389
        assert score.accuracy == pytest.approx(0.98982, abs=1e-5)

    def test_percentage_split(self):
        # 93 rejects in 1362 sentences leaves 93.17% accepted.
        sentences = [GOOD_CNL] * 1269 + [BAD_CNL] * 93
        score = syntactic_accuracy(sentences)
        assert 100 * score.accuracy == pytest.approx(93.17, abs=0.01)

    def test_all_golden_is_one(self):
        assert syntactic_accuracy([GOOD_CNL] * 5).accuracy == 1.0

    def test_verdicts_align_with_sentence_checks(self):
        from aspen.cnl import check_syntax

        sentences = [GOOD_CNL, BAD_CNL, GOOD_CNL]
        score = syntactic_accuracy(sentences)
        assert [v.accepted for v in score.verdicts] == [
            check_syntax(s).accepted for s in sentences
        ]

    def test_empty_raises(self):
        with pytest.raises(EmptyCorpus):
            syntactic_accuracy([])


class TestTokenPrf:
    def test_identical_corpus(self):
        assert token_prf([pair("a b c", "a b c")]) == (1.0, 1.0, 1.0, 1.0)

    def test_two_of_three_overlap(self):
        precision, recall, f1, acc = token_prf([pair("a b c", "a b d")])
        assert precision == pytest.approx(2 / 3)
        assert recall == pytest.approx(2 / 3)
        assert f1 == pytest.approx(2 / 3)
        assert acc == 0.0

    def test_multiset_clipping(self):
        # hyp repeats "a" three times but the reference has only one.
        precision, recall, _, _ = token_prf([pair("a a a", "a b c")])
        assert precision == pytest.approx(1 / 3)
        assert recall == pytest.approx(1 / 3)

    def test_paraphrase_pattern_accuracy_below_f1(self):
        # High token overlap with zero exact matches: accuracy far below F1.
        pairs = [
            pair("the route visits every node once", "the route visits each node once"),
            pair("pick at most one color per node", "pick at most one color for nodes"),
            pair("an edge connects two nodes", "an edge connects a pair of nodes"),
        ]
        precision, recall, f1, acc = token_prf(pairs)
        assert acc == 0.0
        assert f1 > 0.7

    def test_best_reference_by_f1(self):
        precision, recall, f1, acc = token_prf([pair("a b c", "x y z", "a b c")])
        assert (precision, recall, f1, acc) == (1.0, 1.0, 1.0, 1.0)


class TestReport:
    def test_identical_corpus_all_ones(self):
        pairs = [pair("a node is identified by an id .", "a node is identified by an id .")]
        report = evaluate(pairs)
        assert report.bleu == (1.0, 1.0, 1.0, 1.0)
        assert report.f1 == 1.0
        assert report.exact_match_accuracy == 1.0
        assert report.syntactic_accuracy is None

    def test_cnl_syntax_counts(self):
        pairs = [pair(GOOD_CNL, GOOD_CNL), pair(BAD_CNL, GOOD_CNL)]
        report = evaluate(pairs, check_cnl_syntax=True)
        assert report.total == 2
        assert report.syntactically_correct == 1
        assert report.syntactic_accuracy == 0.5

    def test_dict_and_table_round_out(self):
        report = evaluate([pair("a b c d", "a b c d")])
        d = report.to_dict()
        assert d["bleu_4"] == 1.0
        assert d["meteor_stage"] == "exact"
        table = report.table()
        assert "BLEU-4" in table and "METEOR" in table

    def test_permutation_invariance(self):
        pairs = [
            pair("a b c d", "a b x d"),
            pair("the quick fox", "the slow fox"),
            pair("p q r s t", "p q r s t"),
        ]
        shuffled = pairs[::-1]
        assert evaluate(pairs) == evaluate(shuffled)


token_lists = st.lists(st.sampled_from("a b c d e f".split()), min_size=1, max_size=8)
corpora = st.lists(
    st.tuples(token_lists, token_lists).map(
        lambda hr: EvalPair(" ".join(hr[0]), (" ".join(hr[1]),))
    ),
    min_size=1,
    max_size=6,
)


def test_bleu_decays_on_a_realistic_corpus():
    # Cumulative scores typically decay with order; pin that on a fixed
    # corpus.  (It is not a theorem: degenerate corpora can push a
    # higher-order precision above a lower one.)
    pairs = [
        pair("the route visits every node exactly once", "the route visits each node exactly once"),
        pair("adjacent nodes never share a color", "adjacent nodes never get the same color"),
        pair("every item lands in exactly one cluster", "each item lands in exactly one cluster"),
    ]
    scores = corpus_bleu(pairs)
    assert scores[0] > scores[1] > scores[2] > scores[3] > 0.0


@settings(max_examples=150, deadline=None)
@given(corpora)
def test_bleu_bounded_and_zero_absorbs(pairs):
    scores = corpus_bleu(pairs)
    assert all(0.0 <= s <= 1.0 for s in scores)
    # A zero cumulative score can never recover at a higher order: the
    # window of precisions only grows.
    for lo, hi in zip(scores[1:], scores[:-1]):
        if hi == 0.0:
            assert lo == 0.0


@settings(max_examples=150, deadline=None)
@given(corpora)
def test_meteor_and_prf_bounded(pairs):
    assert 0.0 <= corpus_meteor(pairs) <= 1.0
    precision, recall, f1, acc = token_prf(pairs)
    for value in (precision, recall, f1, acc):
        assert 0.0 <= value <= 1.0


@settings(max_examples=80, deadline=None)
@given(corpora, st.randoms())
def test_scores_ignore_corpus_order(pairs, rng):
    shuffled = list(pairs)
    rng.shuffle(shuffled)
    assert corpus_bleu(pairs) == corpus_bleu(shuffled)
    assert corpus_meteor(pairs) == pytest.approx(corpus_meteor(shuffled), abs=1e-12)
    assert token_prf(pairs) == pytest.approx(token_prf(shuffled), abs=1e-12)
