"""Command-line interface.

Every reporting subcommand speaks two dialects: a human-readable table
(the default) and line-delimited JSON records for machines, selected with
``--format table|records|both``.  ``compile`` is the exception — its
output *is* the program, and diagnostics go to stderr as JSON lines with
exit code 2, so it drops into build scripts unchanged.

Defaults for bounds, seeds, and the translator come from an optional JSON
config file (``--config`` or the ASPEN_CONFIG environment variable).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .asp.parse import AspSyntaxError, parse_program
from .cnl import check_syntax
from .cnl.parser import CnlSyntaxError, parse_cnl
from .codegen import compile_document
from .config import ConfigError, load_config, translator_from_config
from .dataset import (
    ExternalProcessProvider,
    IdentityProvider,
    ProviderError,
    SynonymProvider,
    audit_manifest,
    bundled_bow,
    bundled_templates,
    generate_balanced,
    load_bow,
    load_templates,
    manifest_from_records,
    read_dataset,
    write_dataset,
)
from .metrics import EvalPair, evaluate
from .pipeline import (
    TranslatorUnavailable,
    bundled_problem,
    bundled_problems,
    render_run,
    run_pipeline,
    translate,
    write_run,
)
from .solver import (
    DEFAULT_ATOM_BOUND,
    FactSignature,
    SolverError,
    check_uniform_equivalence,
    solve,
)

import shlex


# --------------------------------------------------------------------------
# small shared helpers

def _read_lines(path: str) -> list[str]:
    """Nonblank lines of a file; '-' reads stdin."""
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


def _read_text(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")


def _record(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=True)


def _emit(args, table_lines, records, out=None):
    """Route a report to the format the user asked for."""
    stream = out or sys.stdout
    if args.format in ("table", "both"):
        for line in table_lines:
            print(line, file=stream)
    if args.format in ("records", "both"):
        for rec in records:
            print(_record(rec), file=stream)


def _table(rows: list[tuple], header: tuple) -> list[str]:
    """Align columns; every cell is str()-ed."""
    cells = [tuple(str(c) for c in header)] + [tuple(str(c) for c in row) for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    for n, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return lines


def _parse_signature(items: list[str]) -> FactSignature:
    predicates = []
    for item in items:
        name, sep, arity = item.partition("/")
        if not sep or not name or not arity.isdigit() or int(arity) < 1:
            raise SystemExit(f"error: bad --sig entry {item!r}; expected name/arity")
        predicates.append((name, int(arity)))
    return FactSignature(tuple(predicates))


def _parse_universe(text: str) -> tuple:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        out.append(int(part) if part.lstrip("-").isdigit() else part)
    if not out:
        raise SystemExit("error: --universe needs at least one constant")
    return tuple(out)


def _parse_asp_file(path: str):
    try:
        return parse_program(_read_text(path))
    except AspSyntaxError as exc:
        raise SystemExit(f"error: {path}: {exc}")


def _facts_from_file(path: str) -> tuple:
    program = _parse_asp_file(path)
    facts = []
    for rule in program.rules:
        if rule.body or rule.weak is not None or not isinstance(rule.head, tuple) \
                or len(rule.head) != 1:
            raise SystemExit(f"error: {path}: a facts file may only contain facts")
        atom = rule.head[0]
        if any(t.kind == "var" for t in atom.args):
            raise SystemExit(f"error: {path}: facts must be ground, got {atom}")
        facts.append(atom)
    return tuple(facts)


# --------------------------------------------------------------------------
# subcommands

def _cmd_check_syntax(args, config) -> int:
    sentences = _read_lines(args.file)
    verdicts = [check_syntax(s) for s in sentences]
    rows = [
        (i, "yes" if v.accepted else "NO", v.category or "-", v.reason or "")
        for i, v in enumerate(verdicts)
    ]
    records = [
        {
            "index": i,
            "sentence": s,
            "accepted": v.accepted,
            "category": v.category,
            "reason": v.reason,
        }
        for i, (s, v) in enumerate(zip(sentences, verdicts))
    ]
    accepted = sum(v.accepted for v in verdicts)
    table = _table(rows, ("#", "ok", "category", "reason"))
    table.append(f"accepted {accepted}/{len(sentences)}")
    _emit(args, table, records)
    return 0 if accepted == len(sentences) else 1


def _cmd_translate(args, config) -> int:
    sentences = _read_lines(args.file)
    spec = translator_from_config(config, args.plugin)
    try:
        outcomes = translate(sentences, spec)
    except TranslatorUnavailable as exc:
        raise SystemExit(f"error: translator unavailable: {exc}")
    if args.out:
        lines = [o.cnl for o in outcomes if o.ok]
        Path(args.out).write_text("".join(l + "\n" for l in lines), encoding="utf-8")
    rows = [
        (o.index, "ok" if o.ok else "FAIL", o.cnl if o.ok else o.error)
        for o in outcomes
    ]
    records = [
        {"index": o.index, "nl": o.nl, "cnl": o.cnl, "error": o.error}
        for o in outcomes
    ]
    ok = sum(o.ok for o in outcomes)
    table = _table(rows, ("#", "status", "candidate"))
    table.append(f"translated {ok}/{len(outcomes)}")
    _emit(args, table, records)
    return 0 if ok == len(outcomes) else 1


def _cmd_compile(args, config) -> int:
    try:
        document = parse_cnl(_read_text(args.file))
    except CnlSyntaxError as exc:
        print(_record({"sentence": None, "code": "syntax", "message": str(exc)}),
              file=sys.stderr)
        return 2
    result = compile_document(document)
    for d in result.diagnostics:
        print(_record({"sentence": d.sentence_index + 1, "code": d.code,
                       "message": d.message}), file=sys.stderr)
    if result.program is None:
        return 2
    text = str(result.program)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_run(args, config) -> int:
    gold = signature = None
    universe: tuple = ()
    if args.problem:
        problem = bundled_problem(args.problem)
        sentences = list(problem.nl_sentences)
        gold, signature, universe = problem.gold, problem.signature, problem.universe
    else:
        if not args.file:
            raise SystemExit("error: give an NL file or --problem NAME")
        sentences = _read_lines(args.file)
    if args.gold:
        gold = _parse_asp_file(args.gold)
        if not args.sig or not args.universe:
            raise SystemExit("error: --gold needs --sig and --universe")
    if args.sig:
        signature = _parse_signature(args.sig)
    if args.universe:
        universe = _parse_universe(args.universe)
    spec = translator_from_config(config, args.plugin)
    atom_bound = args.atom_bound or config.get("atom_bound", DEFAULT_ATOM_BOUND)
    try:
        run = run_pipeline(sentences, spec, gold=gold, signature=signature,
                           universe=universe, atom_bound=atom_bound)
    except TranslatorUnavailable as exc:
        raise SystemExit(f"error: translator unavailable: {exc}")
    if args.out:
        write_run(args.out, run)

    rows = [
        (o.index, "ok" if o.accepted else "NO",
         o.category or "-", (o.error or o.reason or ""))
        for o in run.outputs
    ]
    table = _table(rows, ("#", "accepted", "category", "note"))
    sa = "-" if run.syntactic_accuracy is None else f"{run.syntactic_accuracy:.4f}"
    table.append(f"accepted {run.accepted}/{len(run.outputs)}  syntactic accuracy {sa}")
    table.append("program: " + ("compiled" if run.program_text is not None
                                else "incomplete"))
    if run.equivalence is not None:
        table.append("equivalence: " + run.equivalence["status"])
    for diag in run.diagnostics:
        table.append(f"diagnostic: {diag}")
    records = [o.to_dict() | {"kind": "sentence"} for o in run.outputs]
    records.append({
        "kind": "summary",
        "accepted": run.accepted,
        "total": len(run.outputs),
        "syntactic_accuracy": run.syntactic_accuracy,
        "compiled": run.program_text is not None,
        "diagnostics": list(run.diagnostics),
        "equivalence": run.equivalence,
    })
    _emit(args, table, records)
    if run.program_text is None:
        return 2
    if run.equivalence is not None and run.equivalence["status"] == "different":
        return 1
    return 0


def _cmd_eval(args, config) -> int:
    hyp = _read_lines(args.hyp)
    ref = _read_lines(args.ref)
    if len(hyp) != len(ref):
        raise SystemExit(
            f"error: {len(hyp)} hypothesis lines vs {len(ref)} reference lines")
    pairs = [EvalPair(h, (r,)) for h, r in zip(hyp, ref)]
    report = evaluate(pairs, check_cnl_syntax=args.cnl_syntax)
    rows = [("BLEU-%d" % (i + 1), f"{v:.5f}") for i, v in enumerate(report.bleu)]
    rows += [
        ("METEOR", f"{report.meteor:.5f}"),
        ("precision", f"{report.precision:.5f}"),
        ("recall", f"{report.recall:.5f}"),
        ("F1", f"{report.f1:.5f}"),
        ("exact match", f"{report.exact_match_accuracy:.5f}"),
    ]
    if report.syntactic_accuracy is not None:
        rows.append(("syntactic accuracy", f"{report.syntactic_accuracy:.5f}"))
    table = _table(rows, ("metric", "value"))
    table.append(f"pairs: {report.total}")
    record = {
        "bleu": list(report.bleu),
        "meteor": report.meteor,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "exact_match_accuracy": report.exact_match_accuracy,
        "syntactic_accuracy": report.syntactic_accuracy,
        "total": report.total,
        "syntactically_correct": report.syntactically_correct,
    }
    _emit(args, table, [record])
    return 0


def _cmd_solve(args, config) -> int:
    program = _parse_asp_file(args.file)
    facts = _facts_from_file(args.facts) if args.facts else ()
    atom_bound = args.atom_bound or config.get("atom_bound", DEFAULT_ATOM_BOUND)
    try:
        result = solve(program, facts, atom_bound=atom_bound,
                       optimal_only=args.optimal_only)
    except SolverError as exc:
        raise SystemExit(f"error: {exc}")
    keep = None
    if args.project:
        keep = {p.split("/", 1)[0] for p in args.project}
    table, records = [], []
    shown = set()
    for n, answer in enumerate(result.answer_sets, start=1):
        atoms = answer.sorted_atoms()
        if keep is not None:
            atoms = [a for a in atoms if a.predicate in keep]
        rendered = tuple(str(a) for a in atoms)
        if keep is not None and rendered in shown:
            continue
        shown.add(rendered)
        table.append(f"answer {n}: {{{', '.join(rendered)}}}")
        if answer.costs:
            table.append("  cost " + " ".join(f"{t}@{l}" for l, t in answer.costs))
        records.append({"answer_set": list(rendered),
                        "costs": [list(c) for c in answer.costs]})
    count = len(records)
    table.append(f"{count} answer set(s); backend {result.backend}")
    records.append({"satisfiable": count > 0, "count": count,
                    "backend": result.backend})
    _emit(args, table, records)
    return 0


def _cmd_equiv(args, config) -> int:
    first = _parse_asp_file(args.first)
    second = _parse_asp_file(args.second)
    signature = _parse_signature(args.sig)
    universe = _parse_universe(args.universe)
    atom_bound = args.atom_bound or config.get("atom_bound", DEFAULT_ATOM_BOUND)
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    kwargs = dict(atom_bound=atom_bound)
    if args.sample:
        kwargs.update(mode="random", samples=args.sample, seed=seed)
    try:
        verdict = check_uniform_equivalence(first, second, signature, universe, **kwargs)
    except SolverError as exc:
        raise SystemExit(f"error: {exc}")
    table = [
        f"verdict: {'equivalent' if verdict.equivalent else 'different'} "
        f"({verdict.mode}, {verdict.checked} fact set(s) checked)"
    ]
    record = {"equivalent": verdict.equivalent, "mode": verdict.mode,
              "checked": verdict.checked, "counterexample": None}
    if verdict.counterexample is not None:
        facts = [str(a) for a in verdict.counterexample.facts]
        table.append("counterexample facts: " + (", ".join(facts) or "(empty set)"))
        record["counterexample"] = facts
    _emit(args, table, [record])
    return 0 if verdict.equivalent else 1


def _cmd_gen_dataset(args, config) -> int:
    templates = load_templates(args.templates) if args.templates else bundled_templates()
    bow = load_bow(args.bow) if args.bow else bundled_bow()
    if args.targets:
        targets = json.loads(Path(args.targets).read_text(encoding="utf-8"))
        if not isinstance(targets, dict):
            raise SystemExit("error: targets file must hold a JSON object")
    else:
        targets = {t.category: 0 for t in templates}
        for t in templates:
            targets[t.category] += 3
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    records, manifest = generate_balanced(templates, bow, targets, seed)
    out = sys.stdout if args.out in (None, "-") else None
    if out is None:
        write_dataset(args.out, records)
    else:
        from .dataset import record_to_line
        for r in records:
            out.write(record_to_line(r) + "\n")
    rows = [(name, c.source, c.generated, c.rephrased, c.total)
            for name, c in manifest.rows]
    g = manifest.grand
    rows.append(("total", g.source, g.generated, g.rephrased, g.total))
    for line in _table(rows, ("category", "source", "generated", "rephrased", "total")):
        print(line, file=sys.stderr)
    return 0


def _cmd_rephrase(args, config) -> int:
    from .dataset import rephrase_expand

    records = read_dataset(args.dataset)
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    if args.provider == "identity":
        provider = IdentityProvider()
    elif args.provider == "synonym":
        if not args.table:
            raise SystemExit("error: the synonym provider needs --table FILE")
        table = json.loads(Path(args.table).read_text(encoding="utf-8"))
        provider = SynonymProvider({k: tuple(v) for k, v in table.items()}, seed=seed)
    else:
        provider = ExternalProcessProvider(tuple(shlex.split(args.provider)))
    try:
        fresh = rephrase_expand(records, provider, args.k)
    except ProviderError as exc:
        raise SystemExit(f"error: paraphrase provider failed at {exc.cursor}: {exc}")
    combined = records + fresh
    if args.out in (None, "-"):
        from .dataset import record_to_line
        for r in combined:
            sys.stdout.write(record_to_line(r) + "\n")
    else:
        write_dataset(args.out, combined)
    manifest = manifest_from_records(combined, rephrase_k=args.k)
    rows = [(name, c.source, c.generated, c.rephrased, c.total)
            for name, c in manifest.rows]
    g = manifest.grand
    rows.append(("total", g.source, g.generated, g.rephrased, g.total))
    for line in _table(rows, ("category", "source", "generated", "rephrased", "total")):
        print(line, file=sys.stderr)
    return 0


def _cmd_audit(args, config) -> int:
    records = read_dataset(args.dataset)
    manifest = manifest_from_records(records, rephrase_k=args.rephrase_k)
    violations = audit_manifest(manifest)
    rows = [(name, c.source, c.generated, c.rephrased, c.total)
            for name, c in manifest.rows]
    g = manifest.grand
    rows.append(("total", g.source, g.generated, g.rephrased, g.total))
    table = _table(rows, ("category", "source", "generated", "rephrased", "total"))
    table.append(f"records: {len(records)}")
    table += [f"VIOLATION: {v}" for v in violations]
    if not violations:
        table.append("accounting: clean")
    recs = [
        {"category": name, "source": c.source, "generated": c.generated,
         "rephrased": c.rephrased, "total": c.total}
        for name, c in list(manifest.rows) + [("total", manifest.grand)]
    ]
    recs.append({"violations": list(violations), "records": len(records)})
    _emit(args, table, recs)
    return 0 if not violations else 1


# --------------------------------------------------------------------------
# parser wiring

def _add_format(p) -> None:
    p.add_argument("--format", choices=("table", "records", "both"),
                   default="table", help="report style (default: table)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aspen",
        description="Controlled-language to answer-set-program toolkit.",
    )
    parser.add_argument("--config", help="JSON config file (or set ASPEN_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-syntax", help="grammar-check sentences, one per line")
    p.add_argument("file", help="sentence file ('-' for stdin)")
    _add_format(p)
    p.set_defaults(func=_cmd_check_syntax)

    p = sub.add_parser("translate", help="translate NL sentences to candidates")
    p.add_argument("file", help="NL sentences, one per line ('-' for stdin)")
    p.add_argument("--plugin", help="external translator command line")
    p.add_argument("--out", help="write accepted candidates here, one per line")
    _add_format(p)
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("compile", help="compile a sentence file to a program")
    p.add_argument("file", help="controlled-language file ('-' for stdin)")
    p.add_argument("-o", "--output", help="write the program here instead of stdout")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("run", help="full pipeline: translate, check, compile, compare")
    p.add_argument("file", nargs="?", help="NL sentences, one per line")
    p.add_argument("--problem", help="use a bundled problem (name)")
    p.add_argument("--plugin", help="external translator command line")
    p.add_argument("--gold", help="reference program to compare against")
    p.add_argument("--sig", action="append", default=[],
                   help="fact signature entry name/arity (repeatable)")
    p.add_argument("--universe", help="comma-separated constants for fact sets")
    p.add_argument("--atom-bound", type=int, help="solver atom budget")
    p.add_argument("--out", help="persist the full run report (JSON) here")
    _add_format(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("eval", help="score hypothesis sentences against references")
    p.add_argument("--hyp", required=True, help="hypothesis file, one per line")
    p.add_argument("--ref", required=True, help="reference file, one per line")
    p.add_argument("--cnl-syntax", action="store_true",
                   help="also grammar-check hypotheses")
    _add_format(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("solve", help="enumerate answer sets of a program")
    p.add_argument("file", help="program file ('-' for stdin)")
    p.add_argument("--facts", help="extra facts file appended to the program")
    p.add_argument("--project", action="append", default=[],
                   help="show only this predicate name/arity (repeatable)")
    p.add_argument("--atom-bound", type=int, help="solver atom budget")
    p.add_argument("--optimal-only", action="store_true",
                   help="keep only minimum-cost answer sets")
    _add_format(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("equiv", help="decide bounded uniform equivalence")
    p.add_argument("first", help="first program file")
    p.add_argument("second", help="second program file")
    p.add_argument("--sig", action="append", required=True,
                   help="fact signature entry name/arity (repeatable)")
    p.add_argument("--universe", required=True,
                   help="comma-separated constants for fact sets")
    p.add_argument("--sample", type=int,
                   help="check N random fact sets instead of all of them")
    p.add_argument("--seed", type=int, help="random-mode seed")
    p.add_argument("--atom-bound", type=int, help="solver atom budget")
    _add_format(p)
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("gen-dataset", help="generate a balanced dataset")
    p.add_argument("--templates", help="template file (default: bundled)")
    p.add_argument("--bow", help="word-list directory (default: bundled)")
    p.add_argument("--targets", help="JSON file mapping category to count")
    p.add_argument("--seed", type=int, help="generation seed")
    p.add_argument("--out", help="dataset file (default: stdout)")
    p.set_defaults(func=_cmd_gen_dataset)

    p = sub.add_parser("rephrase", help="expand a dataset with paraphrases")
    p.add_argument("dataset", help="dataset file to expand")
    p.add_argument("--provider", required=True,
                   help="'identity', 'synonym', or an external command line")
    p.add_argument("--k", type=int, required=True, help="paraphrases per record")
    p.add_argument("--table", help="synonym table JSON (word -> alternatives)")
    p.add_argument("--seed", type=int, help="synonym-provider seed")
    p.add_argument("--out", help="combined dataset file (default: stdout)")
    p.set_defaults(func=_cmd_rephrase)

    p = sub.add_parser("audit", help="check a dataset's accounting identities")
    p.add_argument("dataset", help="dataset file")
    p.add_argument("--rephrase-k", type=int,
                   help="declared paraphrase factor to verify")
    _add_format(p)
    p.set_defaults(func=_cmd_audit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args, config)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 2
    except (CnlSyntaxError, AspSyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
