"""Template instantiation, balanced generation, accounting, and rephrasing."""

from __future__ import annotations

import pytest

from aspen.cnl import check_syntax
from aspen.cnl.ast import CATEGORY_ORDER
from aspen.dataset import (
    RETRY_CAP,
    BagOfWords,
    CategoryCounts,
    DatasetManifest,
    DatasetRecord,
    EmptyBagCategory,
    ExternalProcessProvider,
    IdentityProvider,
    PlaceholderMismatch,
    ProviderError,
    RetryExhausted,
    SynonymProvider,
    TemplateFormatError,
    TemplatePair,
    audit_manifest,
    bundled_bow,
    bundled_templates,
    generate_balanced,
    instantiate,
    instantiate_with_fills,
    load_bow,
    manifest_from_records,
    parse_templates,
    read_dataset,
    record_from_line,
    record_to_line,
    rephrase_expand,
    scan_placeholders,
    write_dataset,
)
from aspen.dataset.generate import _apply_fills

TINY_BOW = BagOfWords(
    pids=("alpha", "beta", "gamma", "delta"),
    nouns=("node", "edge", "arc", "path", "tour", "cycle", "route"),
    verbs=("links", "joins", "meets", "leads"),
    colors=("red", "green", "blue", "yellow"),
)

TABLE_CNL = "Noun_1 num_1 have an verb_1 noun_1 var_1, where var_1 is one of num_2, num_3."
TABLE_NL = (
    "There is noun_1 num_1 has an verb_1 to noun_1 var_1, "
    "where var_1 is one of the numbers num_2 or num_3."
)

# Per-category reference counts: (source, generated, rephrased, total).
REFERENCE_ROWS = {
    "definition-const-compound": (154, 21, 875, 1050),
    "definition-when": (145, 15, 800, 960),
    "definition-whenever": (110, 41, 755, 906),
    "negative-constraint": (22, 138, 800, 960),
    "positive-constraint": (39, 121, 800, 960),
    "quantified-choice": (13, 156, 845, 1014),
    "weak-constraint": (11, 149, 800, 960),
}
REFERENCE_GRAND = (494, 641, 5675, 6810)
GENERATION_TARGETS = {cat: row[1] for cat, row in REFERENCE_ROWS.items()}


def reference_manifest() -> DatasetManifest:
    rows = tuple(
        (cat, CategoryCounts(*REFERENCE_ROWS[cat])) for cat in CATEGORY_ORDER
    )
    return DatasetManifest(rows, CategoryCounts(*REFERENCE_GRAND), rephrase_k=5)


class TestTemplateParsing:
    def test_blocks_and_comments(self):
        text = (
            "# leading comment\n"
            "[definition-when]\n"
            "cnl: There is a PID_1 with noun_1 var_1 when there is a PID_2 with noun_1 var_1.\n"
            "nl: PID_2 noun_1 var_1 implies PID_1.\n"
            "\n"
            "[weak-constraint]\n"
            "# another comment\n"
            "cnl: It is preferred, with weight num_1 and priority num_2, that there is no PID_1 with noun_1 var_1.\n"
            "nl: Weight num_1 priority num_2 against PID_1 noun_1 var_1.\n"
        )
        pairs = parse_templates(text)
        assert [p.category for p in pairs] == ["definition-when", "weak-constraint"]
        assert pairs[0].nl_template.startswith("PID_2")

    def test_category_header_required(self):
        with pytest.raises(TemplateFormatError, match="line 1"):
            parse_templates("cnl: no header yet num_1.\n")

    def test_unknown_category_rejected(self):
        with pytest.raises(TemplateFormatError, match="unknown category"):
            parse_templates("[definitely-not-a-category]\n")

    def test_nl_requires_preceding_cnl(self):
        with pytest.raises(TemplateFormatError, match="without a preceding cnl"):
            parse_templates("[definition-when]\nnl: orphan num_1.\n")

    def test_two_cnl_lines_rejected(self):
        text = "[definition-when]\ncnl: one num_1.\ncnl: two num_1.\n"
        with pytest.raises(TemplateFormatError, match="two cnl lines"):
            parse_templates(text)

    def test_unpaired_cnl_at_end_rejected(self):
        with pytest.raises(TemplateFormatError, match="unpaired cnl"):
            parse_templates("[definition-when]\ncnl: dangling num_1.\n")

    def test_unrecognized_line_rejected(self):
        with pytest.raises(TemplateFormatError, match="unrecognized line"):
            parse_templates("[definition-when]\nbogus content\n")

    def test_placeholder_sets_must_match(self):
        pair = TemplatePair("has num_1 and noun_1.", "has only num_1.", "definition-when")
        with pytest.raises(PlaceholderMismatch, match="noun_1"):
            pair.validate()


class TestPlaceholders:
    def test_scan_order_and_dedupe(self):
        keys = [p.key for p in scan_placeholders("var_2 noun_1 var_2 num_range(1 to 4) PID_1")]
        assert keys == ["var_2", "noun_1", "num_range(1 to 4)", "pid_1"]

    def test_num_choice_default_connectors(self):
        two, four = scan_placeholders("num_choice(2) num_choice(4)")
        assert two.key == "num_choice(2, or)"
        assert four.key == "num_choice(4, and-list)"

    def test_num_choice_explicit_connector(self):
        (ph,) = scan_placeholders("num_choice(3, or)")
        assert ph.key == "num_choice(3, or)"

    def test_num_range_requires_ordered_bounds(self):
        with pytest.raises(ValueError, match="lo <= hi"):
            scan_placeholders("num_range(5 to 2)")

    def test_num_choice_count_limited_to_ten(self):
        with pytest.raises(ValueError, match="1..10"):
            scan_placeholders("num_choice(11)")

    def test_capitalized_marker_not_part_of_key(self):
        (ph,) = scan_placeholders("Noun_3")
        assert ph.key == "noun_3"


class TestInstantiate:
    def test_reference_pair_reproduced(self):
        pair = TemplatePair(TABLE_CNL, TABLE_NL, "definition-const-compound")
        record = instantiate(
            pair, TINY_BOW, seed=7, overrides={"noun_1": "node", "verb_1": "edge", "num_3": 5}
        )
        assert record.cnl == "Node 1 have an edge node X, where X is one of 2, 5."
        assert record.nl == (
            "There is node 1 has an edge to node X, where X is one of the numbers 2 or 5."
        )
        assert record.category == "definition-const-compound"
        assert record.origin == "generated"

    def test_no_placeholders_returns_text(self):
        pair = TemplatePair("It is required that there is a fact with id 1.",
                            "A fact with id 1 always holds.", "positive-constraint")
        record = instantiate(pair, TINY_BOW, seed=0)
        assert record.cnl == pair.cnl_template
        assert record.nl == pair.nl_template

    def test_fixed_seed_is_deterministic(self):
        pair = TemplatePair(
            "There is a noun_1 with noun_2 num_range(1 to 9).",
            "A noun_1 whose noun_2 is num_range(1 to 9).",
            "definition-const-compound",
        )
        a = instantiate(pair, TINY_BOW, seed="s:1")
        b = instantiate(pair, TINY_BOW, seed="s:1")
        c = instantiate(pair, TINY_BOW, seed="s:2")
        assert a == b
        assert a != c  # two draws differing somewhere is what the seed is for

    def test_num_defaults_are_sequential(self):
        pair = TemplatePair("num_1 num_2 num_3.", "num_1 num_2 num_3.", "definition-when")
        _, fills = instantiate_with_fills(pair, TINY_BOW, seed=0)
        assert (fills["num_1"], fills["num_2"], fills["num_3"]) == ("1", "2", "3")

    def test_variables_are_positional(self):
        pair = TemplatePair("var_1 var_2 var_3 var_4.", "var_1 var_2 var_3 var_4.", "definition-when")
        _, fills = instantiate_with_fills(pair, TINY_BOW, seed=0)
        assert (fills["var_1"], fills["var_2"], fills["var_3"], fills["var_4"]) == (
            "X", "Y", "Z", "U",
        )

    def test_num_range_stays_in_bounds(self):
        pair = TemplatePair("num_range(3 to 5).", "num_range(3 to 5).", "definition-when")
        values = {
            instantiate_with_fills(pair, TINY_BOW, seed=s)[1]["num_range(3 to 5)"]
            for s in range(60)
        }
        assert values == {"3", "4", "5"}

    def test_num_choice_sorted_distinct(self):
        pair = TemplatePair("num_choice(10, and).", "num_choice(10, and).", "definition-when")
        _, fills = instantiate_with_fills(pair, TINY_BOW, seed=3)
        # ten distinct values from 1..10 leave no freedom at all
        assert fills["num_choice(10, and-list)"] == "1, 2, 3, 4, 5, 6, 7, 8, 9, and 10"

    def test_num_choice_pair_uses_or(self):
        pair = TemplatePair("num_choice(2).", "num_choice(2).", "definition-when")
        _, fills = instantiate_with_fills(pair, TINY_BOW, seed=5)
        lo, hi = fills["num_choice(2, or)"].split(" or ")
        assert int(lo) < int(hi)

    def test_word_draws_do_not_repeat_within_record(self):
        pair = TemplatePair(
            "noun_1 noun_2 noun_3 noun_4.", "noun_1 noun_2 noun_3 noun_4.", "definition-when"
        )
        for seed in range(30):
            _, fills = instantiate_with_fills(pair, TINY_BOW, seed=seed)
            words = [fills[f"noun_{i}"] for i in range(1, 5)]
            assert len(set(words)) == 4

    def test_capitalized_token_capitalizes_fill(self):
        pair = TemplatePair("Noun_1 and noun_1.", "Noun_1 and noun_1.", "definition-when")
        record, fills = instantiate_with_fills(pair, TINY_BOW, seed=1)
        word = fills["noun_1"]
        assert record.cnl == f"{word.capitalize()} and {word}."

    def test_overrides_win_and_leave_pool(self):
        pair = TemplatePair("noun_1 noun_2.", "noun_1 noun_2.", "definition-when")
        for seed in range(30):
            _, fills = instantiate_with_fills(
                pair, TINY_BOW, seed=seed, overrides={"noun_1": "arc"}
            )
            assert fills["noun_1"] == "arc"
            assert fills["noun_2"] != "arc"

    def test_same_slot_fills_both_sides(self):
        pair = TemplatePair(TABLE_CNL, TABLE_NL, "definition-const-compound")
        record, fills = instantiate_with_fills(pair, TINY_BOW, seed=11)
        assert _apply_fills(pair.cnl_template, fills) == record.cnl
        assert _apply_fills(pair.nl_template, fills) == record.nl

    def test_reabstraction_recovers_skeleton(self):
        import re

        pair = TemplatePair(TABLE_CNL, TABLE_NL, "definition-const-compound")
        record, fills = instantiate_with_fills(pair, TINY_BOW, seed=13)
        text = record.cnl
        for key, value in sorted(fills.items(), key=lambda kv: -len(kv[1])):
            if value[0].islower():
                text = re.sub(rf"\b{re.escape(value.capitalize())}\b", key.capitalize(), text)
            text = re.sub(rf"\b{re.escape(value)}\b", key, text)
        assert text == TABLE_CNL

    def test_empty_bag_category(self):
        bow = BagOfWords(pids=(), nouns=("node",), verbs=(), colors=())
        pair = TemplatePair("PID_1.", "PID_1.", "definition-when")
        with pytest.raises(EmptyBagCategory):
            instantiate(pair, bow, seed=0)

    def test_pool_exhaustion_within_record(self):
        bow = BagOfWords(pids=("alpha",), nouns=("node",), verbs=("links",), colors=("red",))
        pair = TemplatePair("noun_1 noun_2.", "noun_1 noun_2.", "definition-when")
        with pytest.raises(ValueError, match="ran out"):
            instantiate(pair, bow, seed=0)

    def test_mismatched_pair_is_rejected(self):
        pair = TemplatePair("noun_1.", "noun_2.", "definition-when")
        with pytest.raises(PlaceholderMismatch):
            instantiate(pair, TINY_BOW, seed=0)


class TestBundledData:
    def test_bow_sizes(self):
        bow = bundled_bow()
        assert len(bow.pids) == 21
        assert len(bow.nouns) == 77
        assert len(bow.verbs) == 408
        assert len(bow.colors) >= 3

    def test_bow_loading_skips_comments(self, tmp_path):
        (tmp_path / "nouns.txt").write_text("# heading\nnode\n\nedge\n")
        bow = load_bow(tmp_path)
        assert bow.nouns == ("node", "edge")
        assert bow.pids == ()

    def test_duplicate_words_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            BagOfWords(pids=("a", "a"), nouns=(), verbs=(), colors=())

    def test_bundled_templates_cover_every_category(self):
        pairs = bundled_templates()
        per_category = {cat: 0 for cat in CATEGORY_ORDER}
        for pair in pairs:
            pair.validate()
            per_category[pair.category] += 1
        assert all(count >= 2 for count in per_category.values()), per_category

    def test_reference_pair_ships_first(self):
        pairs = bundled_templates()
        assert pairs[0].cnl_template == TABLE_CNL
        assert pairs[0].nl_template == TABLE_NL

    def test_every_bundled_template_generates_valid_cnl(self):
        bow = bundled_bow()
        for pair in bundled_templates():
            for seed in range(3):
                record = instantiate(pair, bow, seed=f"cover:{seed}")
                verdict = check_syntax(record.cnl)
                assert verdict.accepted, (pair.cnl_template, record.cnl, verdict.reason)
                assert verdict.category == pair.category


class TestGenerateBalanced:
    def test_small_targets_hit_exactly(self):
        pairs = bundled_templates()
        targets = {"definition-when": 4, "weak-constraint": 2}
        records, manifest = generate_balanced(pairs, bundled_bow(), targets, seed=0)
        assert len(records) == 6
        assert [r.id for r in records] == [f"g{i:06d}" for i in range(1, 7)]
        assert manifest.row("definition-when").generated == 4
        assert manifest.row("weak-constraint").generated == 2
        assert manifest.grand.total == 6

    def test_all_zero_targets(self):
        records, manifest = generate_balanced(bundled_templates(), bundled_bow(), {}, seed=0)
        assert records == []
        assert manifest.rows == ()
        assert manifest.grand.total == 0

    def test_deterministic_under_seed(self):
        pairs = bundled_templates()
        targets = {cat: 3 for cat in CATEGORY_ORDER}
        first, _ = generate_balanced(pairs, bundled_bow(), targets, seed="run")
        second, _ = generate_balanced(pairs, bundled_bow(), targets, seed="run")
        assert [record_to_line(r) for r in first] == [record_to_line(r) for r in second]
        third, _ = generate_balanced(pairs, bundled_bow(), targets, seed="other")
        assert [r.cnl for r in first] != [r.cnl for r in third]

    def test_reference_generation_targets(self):
        records, manifest = generate_balanced(
            bundled_templates(), bundled_bow(), GENERATION_TARGETS, seed=2024
        )
        assert len(records) == 641
        assert all(check_syntax(r.cnl).accepted for r in records)
        for cat, want in GENERATION_TARGETS.items():
            assert manifest.row(cat).generated == want
        assert manifest.grand.generated == 641
        assert audit_manifest(manifest) == ()

    def test_unknown_target_category(self):
        with pytest.raises(ValueError, match="unknown categories"):
            generate_balanced(bundled_templates(), bundled_bow(), {"nope": 1}, seed=0)

    def test_missing_template_category(self):
        pairs = [p for p in bundled_templates() if p.category != "weak-constraint"]
        with pytest.raises(ValueError, match="weak-constraint"):
            generate_balanced(pairs, bundled_bow(), {"weak-constraint": 1}, seed=0)

    def test_retry_cap_exhausts(self):
        hopeless = TemplatePair("noun_1 num_1.", "noun_1 num_1.", "definition-when")
        with pytest.raises(RetryExhausted) as err:
            generate_balanced([hopeless], TINY_BOW, {"definition-when": 1}, seed=0)
        assert err.value.category == "definition-when"
        assert str(RETRY_CAP) in str(err.value)


class TestManifest:
    def test_reference_rows_accepted(self):
        assert audit_manifest(reference_manifest()) == ()

    def test_reference_row_arithmetic(self):
        manifest = reference_manifest()
        for _, counts in manifest.rows:
            assert counts.total == 6 * (counts.source + counts.generated)
        grand = manifest.grand
        assert grand.source + grand.generated == 1135
        assert grand.rephrased == 5 * 1135
        assert grand.total == 6 * 1135

    def test_balance_ratio(self):
        totals = [counts.total for _, counts in reference_manifest().rows]
        assert max(totals) / min(totals) <= 1.2

    def test_every_single_cell_perturbation_rejected(self):
        base = reference_manifest().to_dict()
        spots = [("rows", cat, field) for cat in base["rows"] for field in base["rows"][cat]]
        spots += [("grand", None, field) for field in base["grand"]]
        for kind, cat, field in spots:
            for delta in (1, -1):
                data = reference_manifest().to_dict()
                if kind == "rows":
                    data["rows"][cat][field] += delta
                else:
                    data["grand"][field] += delta
                manifest = DatasetManifest.from_dict(data)
                violations = audit_manifest(manifest)
                assert violations, (kind, cat, field, delta)

    def test_violation_names_category(self):
        data = reference_manifest().to_dict()
        data["rows"]["definition-when"]["rephrased"] += 1
        violations = audit_manifest(DatasetManifest.from_dict(data))
        assert any("definition-when" in v for v in violations)

    def test_row_lookup_and_round_trip(self):
        manifest = reference_manifest()
        assert manifest.row("quantified-choice").total == 1014
        assert manifest.row("missing") is None
        assert DatasetManifest.from_dict(manifest.to_dict()) == manifest

    def test_manifest_from_records_counts_origins(self):
        records = [
            DatasetRecord("s1", "n", "c", "definition-when", "source"),
            DatasetRecord("g1", "n", "c", "definition-when", "generated"),
            DatasetRecord("g1.r1", "n", "c", "definition-when", "rephrased", parent_id="g1"),
        ]
        manifest = manifest_from_records(records)
        counts = manifest.row("definition-when")
        assert (counts.source, counts.generated, counts.rephrased, counts.total) == (1, 1, 1, 3)


class TestRecords:
    def test_line_round_trip(self):
        record = DatasetRecord(
            "g000001",
            "There is node 1 has an edge to node 2.",
            "Node 1 have an edge node 2.",
            "definition-const-compound",
            "generated",
        )
        assert record_from_line(record_to_line(record)) == record

    def test_file_round_trip(self, tmp_path):
        records = [
            DatasetRecord("a", "x", "y", "definition-when", "source"),
            DatasetRecord("a.r1", "x2", "y", "definition-when", "rephrased", parent_id="a"),
        ]
        path = tmp_path / "data.jsonl"
        assert write_dataset(path, records) == 2
        assert path.read_text().endswith("}\n")
        assert read_dataset(path) == records

    def test_bad_line_reports_position(self, tmp_path):
        path = tmp_path / "data.jsonl"
        path.write_text('{"id": "a"}\n')
        with pytest.raises(ValueError, match="data.jsonl:1"):
            read_dataset(path)

    def test_category_validated(self):
        with pytest.raises(ValueError, match="category"):
            DatasetRecord("a", "x", "y", "not-a-category", "source")

    def test_origin_validated(self):
        with pytest.raises(ValueError, match="origin"):
            DatasetRecord("a", "x", "y", "definition-when", "cloned")

    def test_parent_id_only_for_rephrased(self):
        with pytest.raises(ValueError, match="parent_id"):
            DatasetRecord("a", "x", "y", "definition-when", "source", parent_id="b")
        with pytest.raises(ValueError, match="parent_id"):
            DatasetRecord("a", "x", "y", "definition-when", "rephrased")


class TestRephrase:
    def base_records(self, n=3):
        return [
            DatasetRecord(f"g{i}", f"sentence number {i}.", "cnl text.", "definition-when",
                          "generated")
            for i in range(n)
        ]

    def test_identity_sixfold_totals(self):
        base = self.base_records(4)
        rephrased = rephrase_expand(base, IdentityProvider(), k=5)
        assert len(rephrased) == 20
        manifest = manifest_from_records(base + rephrased, rephrase_k=5)
        assert audit_manifest(manifest) == ()
        counts = manifest.row("definition-when")
        assert counts.total == 6 * (counts.source + counts.generated)

    def test_rephrased_share_cnl_and_category(self):
        base = self.base_records(2)
        out = rephrase_expand(base, IdentityProvider(), k=2)
        assert [r.id for r in out] == ["g0.r1", "g0.r2", "g1.r1", "g1.r2"]
        for rec in out:
            parent = next(p for p in base if p.id == rec.parent_id)
            assert rec.cnl == parent.cnl
            assert rec.category == parent.category
            assert rec.nl == parent.nl  # identity provider copies the sentence
            assert rec.origin == "rephrased"

    def test_k_zero_is_empty(self):
        assert rephrase_expand(self.base_records(), IdentityProvider(), k=0) == []

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError, match=">= 0"):
            rephrase_expand(self.base_records(), IdentityProvider(), k=-1)

    def test_synonym_provider_is_deterministic(self):
        provider = SynonymProvider({"sentence": ("line", "phrase")}, seed=9)
        first = provider.paraphrase("A sentence about a sentence.", variant=0)
        again = provider.paraphrase("A sentence about a sentence.", variant=0)
        other = provider.paraphrase("A sentence about a sentence.", variant=1)
        assert first == again
        assert first != "A sentence about a sentence."
        assert {first, other} <= {
            "A line about a line.", "A phrase about a phrase.",
            "A line about a phrase.", "A phrase about a line.",
        }

    def test_synonym_provider_keeps_capitalization(self):
        provider = SynonymProvider({"whenever": ("anytime",)})
        assert provider.paraphrase("Whenever it rains.", 0) == "Anytime it rains."

    def test_provider_error_carries_cursor_and_partial(self):
        class Flaky:
            def __init__(self):
                self.calls = 0

            def paraphrase(self, nl, variant):
                self.calls += 1
                if self.calls == 4:
                    raise RuntimeError("offline")
                return nl.upper()

        base = self.base_records(3)
        with pytest.raises(ProviderError) as err:
            rephrase_expand(base, Flaky(), k=2)
        assert err.value.record_id == "g1"
        assert err.value.cursor == (1, 1)
        assert [r.id for r in err.value.partial] == ["g0.r1", "g0.r2", "g1.r1"]

    def test_resume_from_cursor_completes(self):
        base = self.base_records(3)
        full = rephrase_expand(base, IdentityProvider(), k=2)
        tail = rephrase_expand(base, IdentityProvider(), k=2, start_cursor=(1, 1))
        assert full[3:] == tail

    def test_rerun_is_byte_identical(self):
        base = self.base_records(3)
        a = rephrase_expand(base, IdentityProvider(), k=3)
        b = rephrase_expand(base, IdentityProvider(), k=3)
        assert [record_to_line(r) for r in a] == [record_to_line(r) for r in b]

    def test_external_provider_over_the_wire(self):
        import sys

        provider = ExternalProcessProvider(
            (sys.executable, "-m", "aspen.pipeline.echo")
        )
        try:
            base = self.base_records(2)
            out = rephrase_expand(base, provider, k=2)
            assert [r.nl for r in out] == [
                "sentence number 0.", "sentence number 0.",
                "sentence number 1.", "sentence number 1.",
            ]
        finally:
            provider.close()

    def test_external_provider_error_becomes_provider_error(self):
        import sys

        script = (
            'import sys, json\n'
            'print(\'{"hello":{"name":"grump","protocol":1}}\', flush=True)\n'
            "for line in sys.stdin:\n"
            "    if not line.strip():\n"
            "        continue\n"
            "    req = json.loads(line)\n"
            '    print(json.dumps({"error": "api quota", "id": req["id"]},\n'
            '          sort_keys=True, separators=(",", ":")), flush=True)\n'
        )
        provider = ExternalProcessProvider((sys.executable, "-u", "-c", script))
        try:
            with pytest.raises(ProviderError) as err:
                rephrase_expand(self.base_records(2), provider, k=1)
            assert err.value.cursor == (0, 0)
            assert "api quota" in str(err.value)
        finally:
            provider.close()
