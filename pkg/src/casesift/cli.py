"""casesift command-line interface."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import date
from pathlib import Path

from . import __version__, analytics, generator, keywords, llm, pipeline, rules, sampling
from .corpus import filter_by_date, load_corpus, load_jsonl, save_jsonl
from .regex_filter import RootPattern, regex_filter


def _load_any(path: str):
    """Load a dataset from a JSONL file or a directory of case XML files."""
    p = Path(path)
    if p.is_dir():
        return load_corpus(p)
    return load_jsonl(p)


def cmd_generate(args) -> int:
    spec = generator.CorpusSpec(n_sj=args.n_sj, n_non_sj=args.n_non_sj,
                                n_distractor=args.n_distractor,
                                n_oversized=args.n_oversized, seed=args.seed)
    truths = generator.generate_synthetic_corpus(spec, args.out)
    print(f"wrote {len(truths)} cases to {args.out}")
    return 0


def cmd_ingest(args) -> int:
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    manifest = out.with_name(out.stem + "_skips.csv")
    dataset = load_corpus(args.input, manifest_path=manifest)
    if args.cutoff:
        result = filter_by_date(dataset, date.fromisoformat(args.cutoff))
        dataset = result.kept
        if result.undated_ids:
            print(f"flagged {len(result.undated_ids)} undated case(s), retained", file=sys.stderr)
    save_jsonl(dataset, out)
    print(f"ingested {len(dataset)} cases -> {out} (skip manifest: {manifest})")
    return 0


def cmd_regex_filter(args) -> int:
    dataset = _load_any(args.input)
    pattern = RootPattern(args.pattern) if args.pattern else RootPattern()
    selected = regex_filter(dataset, pattern)
    save_jsonl(selected, args.out)
    print(f"{len(selected)} of {len(dataset)} cases match -> {args.out}")
    return 0


def cmd_keywords(args) -> int:
    dataset = _load_any(args.input)
    catalog = keywords.load_catalog(args.catalog) if args.catalog else keywords.default_catalog()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    profiles = keywords.scan_dataset(dataset, catalog)
    totals = keywords.total_counts(profiles, catalog)
    isolation = keywords.isolation_counts(profiles, catalog)
    matrix = keywords.cooccurrence(profiles, catalog)
    with open(out_dir / "counts.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["variant", "count"])
        writer.writerows(totals.items())
    with open(out_dir / "isolation.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["variant", "count"])
        writer.writerows(isolation.items())
    with open(out_dir / "cooccurrence.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + list(matrix.labels))
        for label, row in zip(matrix.labels, matrix.cells):
            writer.writerow([label] + [int(v) for v in row])
    print(f"keyword stats for {len(profiles)} cases -> {out_dir}")
    return 0


def cmd_venn(args) -> int:
    dataset = _load_any(args.input)
    catalog = keywords.load_catalog(args.catalog) if args.catalog else keywords.default_catalog()
    keys = [k.strip() for k in args.keys.split(",")]
    profiles = keywords.scan_dataset(dataset, catalog)
    regions = keywords.venn_counts(profiles, keys, catalog)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"keys": keys, "regions": regions}, indent=1) + "\n",
                   encoding="utf-8")
    print(json.dumps(regions, indent=1))
    return 0


def cmd_classify_matrix(args) -> int:
    dataset = _load_any(args.input)
    ruleset = rules.load_ruleset(args.rules) if args.rules else rules.default_ruleset()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ksjd, knsjd, decisions = rules.classify_dataset(dataset, ruleset)
    rules.write_decisions_csv(decisions, out_dir / "matrix_decisions.csv")
    save_jsonl(ksjd, out_dir / "ksjd.jsonl")
    save_jsonl(knsjd, out_dir / "knsjd.jsonl")
    print(f"matrix split: {len(ksjd)} sj / {len(knsjd)} non-sj -> {out_dir}")
    return 0


def cmd_classify_llm(args) -> int:
    dataset = _load_any(args.input)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.backend == "script":
        if not args.script:
            print("--script is required with --backend script", file=sys.stderr)
            return 2
        backend = llm.ScriptedBackend.from_csv(args.script)
    else:
        if not args.endpoint:
            print("--endpoint is required with --backend live", file=sys.stderr)
            return 2
        backend = llm.LiveBackend(endpoint=args.endpoint, model=args.model)
    result = llm.classify_dataset(dataset, backend, limit_words=args.limit_words,
                                  log_path=out_dir / "llm_decisions.jsonl",
                                  max_concurrent=args.max_concurrent)
    save_jsonl(result.sj, out_dir / "csjd.jsonl")
    save_jsonl(result.non_sj, out_dir / "cnsjd.jsonl")
    print(f"llm split: {len(result.sj)} sj / {len(result.non_sj)} non-sj / "
          f"{len(result.skipped)} skipped / {len(result.unparseable)} unparseable -> {out_dir}")
    return 0


def cmd_sample(args) -> int:
    dataset = _load_any(args.input)
    n = args.n or sampling.required_sample_size(len(dataset), args.confidence,
                                                args.margin, args.proportion)
    plan = sampling.draw_sample(dataset, n, args.seed, args.confidence,
                                args.margin, args.proportion)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    sampling.save_plan(plan, out)
    print(f"sampled {plan.size} of {plan.population_size} -> {out}")
    return 0


def _load_predictions(path: str) -> dict[str, str]:
    p = Path(path)
    if p.suffix == ".csv":
        return {d.case_id: d.label for d in rules.read_decisions_csv(p)}
    return {cid: d.label for cid, d in llm.load_decision_log(p).items()}


def cmd_evaluate(args) -> int:
    predictions = _load_predictions(args.pred)
    store = sampling.LabelStore(args.gold)
    gold = store.current()
    if not gold:
        print("label store is empty; nothing to evaluate", file=sys.stderr)
        return 2
    cm = sampling.confusion(predictions, gold)
    report = sampling.scores(cm)
    if args.out:
        Path(args.out).write_text(json.dumps(report.to_dict(), indent=1) + "\n",
                                  encoding="utf-8")
    print(sampling.render_report(report))
    return 0


def cmd_analyze(args) -> int:
    dataset = _load_any(args.input)
    tier_map = analytics.load_tier_map(args.tiers) if args.tiers else analytics.default_tier_map()
    ks = tuple(int(k) for k in args.kmeans.split(",")) if args.kmeans else (2, 10)
    out_dir = Path(args.out_dir)
    pipeline.write_analysis(dataset, tier_map, ks, out_dir)
    print(f"analysis of {len(dataset)} cases -> {out_dir}")
    return 0


def cmd_charts(args) -> int:
    pipeline.write_charts(Path(args.analysis), Path(args.out_dir))
    print(f"charts -> {args.out_dir}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import build_state, create_app

    state = build_state(args.input, args.plan, args.labels,
                        matrix_csv=args.predictions, llm_log=args.llm_decisions,
                        catalog_path=args.catalog,
                        reveal_predictions=args.reveal_predictions,
                        reviewer=args.reviewer)
    app = create_app(state, static_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_run(args) -> int:
    config = pipeline.PipelineConfig.from_file(args.config)
    if args.out_dir:
        config.out_dir = Path(args.out_dir)
    if args.seed is not None:
        config.seed = args.seed
    manifest = pipeline.run_pipeline(config)
    print(json.dumps(manifest.stages, indent=1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="casesift",
                                     description="Identify and evaluate summary judgment "
                                                 "decisions in a case-law corpus.")
    parser.add_argument("--version", action="version", version=f"casesift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic corpus with ground-truth sidecars")
    p.add_argument("--out", required=True)
    p.add_argument("--n-sj", type=int, default=10)
    p.add_argument("--n-non-sj", type=int, default=10)
    p.add_argument("--n-distractor", type=int, default=5)
    p.add_argument("--n-oversized", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest", help="load a corpus directory into a JSONL dataset")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cutoff", default=None, help="drop cases heard before this ISO date")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("regex-filter", help="keep cases matching the root pattern")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pattern", default=None)
    p.set_defaults(func=cmd_regex_filter)

    p = sub.add_parser("keywords", help="keyword counts, isolation and co-occurrence")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--catalog", default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_keywords)

    p = sub.add_parser("venn", help="exclusive venn region counts for 2-3 keys")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--keys", required=True, help='e.g. "summary judgment,no real prospect,mini-trial"')
    p.add_argument("--catalog", default=None)
    p.add_argument("--out", default="venn.json")
    p.set_defaults(func=cmd_venn)

    p = sub.add_parser("classify-matrix", help="apply the boolean search matrix")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--rules", default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_classify_matrix)

    p = sub.add_parser("classify-llm", help="classify via a completion backend")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--backend", choices=("script", "live"), default="script")
    p.add_argument("--script", default=None, help="CSV case_id,response_text")
    p.add_argument("--endpoint", default=None)
    p.add_argument("--model", default="")
    p.add_argument("--limit-words", type=int, default=llm.DEFAULT_WORD_LIMIT)
    p.add_argument("--max-concurrent", type=int, default=4)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_classify_llm)

    p = sub.add_parser("sample", help="draw an FPC-sized review sample")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--margin", type=float, default=0.05)
    p.add_argument("--proportion", type=float, default=0.5)
    p.add_argument("--n", type=int, default=None, help="override the computed size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="sample_plan.json")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("evaluate", help="score predictions against reviewed labels")
    p.add_argument("--pred", required=True, help="matrix_decisions.csv or llm_decisions.jsonl")
    p.add_argument("--gold", required=True, help="label store JSONL")
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("analyze", help="distribution analytics for a dataset")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--tiers", default=None)
    p.add_argument("--kmeans", default="2,10")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("charts", help="render SVG charts from an analysis directory")
    p.add_argument("--analysis", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_charts)

    p = sub.add_parser("serve", help="run the review API and UI")
    p.add_argument("--in", dest="input", required=True, help="dataset JSONL")
    p.add_argument("--plan", required=True, help="sample plan JSON")
    p.add_argument("--labels", required=True, help="label store JSONL (created if absent)")
    p.add_argument("--predictions", default=None, help="matrix_decisions.csv")
    p.add_argument("--llm-decisions", default=None, help="llm_decisions.jsonl")
    p.add_argument("--catalog", default=None)
    p.add_argument("--ui", default=None, help="static frontend directory")
    p.add_argument("--reviewer", default="")
    p.add_argument("--reveal-predictions", action="store_true")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8440)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("run", help="run the full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
