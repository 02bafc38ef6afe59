"""End-to-end pipeline: ingest -> date filter -> regex -> keywords -> matrix -> llm -> sample -> analyze.

A run is reproducible from config + corpus alone. The manifest written after
every stage records input hashes, per-stage counts and the completed stage
list; a rerun resumes after the last completed stage when inputs and config
are unchanged.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from . import __version__, analytics, charts, keywords, llm, rules, sampling
from .corpus import Dataset, filter_by_date, load_corpus, load_jsonl, save_jsonl
from .regex_filter import RootPattern, regex_filter

MANIFEST_FILE = "manifest.json"


class ConfigValidationError(ValueError):
    """Pipeline config failed validation before any work started."""


@dataclass
class PipelineConfig:
    corpus: Path
    out_dir: Path
    date_cutoff: date | None = date(1999, 4, 26)
    pattern: str | None = None
    catalog: Path | None = None
    rules: Path | None = None
    tiers: Path | None = None
    llm_backend: str = "none"               # none | script | live
    llm_script: Path | None = None
    llm_endpoint: str = ""
    llm_model: str = ""
    limit_words: int = llm.DEFAULT_WORD_LIMIT
    confidence: float = 0.95
    margin: float = 0.05
    proportion: float = 0.5
    seed: int = 0
    kmeans_ks: tuple[int, ...] = (2, 10)

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigValidationError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(raw, base=path.parent)

    @classmethod
    def from_dict(cls, raw: dict, base: Path = Path(".")) -> "PipelineConfig":
        def resolve(key: str) -> Path | None:
            value = raw.get(key)
            return (base / value).resolve() if value else None

        corpus = resolve("corpus")
        if corpus is None:
            raise ConfigValidationError("config is missing the corpus path")
        out_dir = resolve("out_dir")
        if out_dir is None:
            raise ConfigValidationError("config is missing out_dir")
        cutoff_raw = raw.get("date_cutoff", "1999-04-26")
        cutoff = date.fromisoformat(cutoff_raw) if cutoff_raw else None
        backend = raw.get("llm_backend", "none")
        if backend not in ("none", "script", "live"):
            raise ConfigValidationError(f"llm_backend must be none|script|live, got {backend!r}")
        config = cls(
            corpus=corpus, out_dir=out_dir, date_cutoff=cutoff,
            pattern=raw.get("pattern"), catalog=resolve("catalog"),
            rules=resolve("rules"), tiers=resolve("tiers"),
            llm_backend=backend, llm_script=resolve("llm_script"),
            llm_endpoint=raw.get("llm_endpoint", ""), llm_model=raw.get("llm_model", ""),
            limit_words=int(raw.get("limit_words", llm.DEFAULT_WORD_LIMIT)),
            confidence=float(raw.get("confidence", 0.95)),
            margin=float(raw.get("margin", 0.05)),
            proportion=float(raw.get("proportion", 0.5)),
            seed=int(raw.get("seed", 0)),
            kmeans_ks=tuple(int(k) for k in raw.get("kmeans", [2, 10])),
        )
        config.validate()
        return config

    def fingerprint(self) -> str:
        """Hash of the processing parameters (paths to inputs excluded; the
        corpus content is fingerprinted separately)."""
        relevant = (
            self.date_cutoff.isoformat() if self.date_cutoff else "",
            self.pattern or "", _file_digest(self.catalog), _file_digest(self.rules),
            _file_digest(self.tiers), self.llm_backend, _file_digest(self.llm_script),
            self.llm_endpoint, self.llm_model, self.limit_words, self.confidence,
            self.margin, self.proportion, self.seed, self.kmeans_ks,
        )
        return hashlib.sha256(repr(relevant).encode("utf-8")).hexdigest()

    def validate(self) -> None:
        if not Path(self.corpus).exists():
            raise ConfigValidationError(f"corpus path does not exist: {self.corpus}")
        if self.llm_backend == "script" and (
                self.llm_script is None or not Path(self.llm_script).exists()):
            raise ConfigValidationError("llm_backend=script requires an existing llm_script")
        if self.llm_backend == "live" and not self.llm_endpoint:
            raise ConfigValidationError("llm_backend=live requires llm_endpoint")
        for k in self.kmeans_ks:
            if k < 1:
                raise ConfigValidationError(f"kmeans k must be >= 1, got {k}")


def _file_digest(path: Path | None) -> str:
    if path is None or not Path(path).is_file():
        return ""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def corpus_fingerprint(path: Path) -> str:
    """Stable hash over the corpus contents, independent of enumeration order."""
    digest = hashlib.sha256()
    files = sorted(path.rglob("*")) if path.is_dir() else [path]
    for file in files:
        if file.is_file():
            digest.update(file.name.encode("utf-8"))
            digest.update(hashlib.sha256(file.read_bytes()).digest())
    return digest.hexdigest()


@dataclass
class Manifest:
    version: str = __version__
    corpus_hash: str = ""
    config_hash: str = ""
    stages: dict = field(default_factory=dict)
    completed: list = field(default_factory=list)

    def save(self, path: Path) -> None:
        path.write_text(json.dumps({
            "version": self.version, "corpus_hash": self.corpus_hash,
            "config_hash": self.config_hash, "stages": self.stages,
            "completed": self.completed,
        }, indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path) -> "Manifest":
        raw = json.loads(path.read_text(encoding="utf-8"))
        return cls(version=raw.get("version", ""), corpus_hash=raw.get("corpus_hash", ""),
                   config_hash=raw.get("config_hash", ""),
                   stages=raw.get("stages", {}), completed=raw.get("completed", []))


def _write_counts_csv(path: Path, rows, header) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def run_pipeline(config: PipelineConfig) -> Manifest:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_path = out / MANIFEST_FILE
    fingerprint = corpus_fingerprint(Path(config.corpus))
    config_hash = config.fingerprint()

    manifest = Manifest(corpus_hash=fingerprint, config_hash=config_hash)
    if manifest_path.exists():
        previous = Manifest.load(manifest_path)
        if (previous.corpus_hash == fingerprint and previous.version == __version__
                and previous.config_hash == config_hash):
            manifest = previous

    catalog = keywords.load_catalog(config.catalog) if config.catalog else keywords.default_catalog()
    ruleset = rules.load_ruleset(config.rules) if config.rules else rules.default_ruleset()
    tier_map = analytics.load_tier_map(config.tiers) if config.tiers else analytics.default_tier_map()
    pattern = RootPattern(config.pattern) if config.pattern else RootPattern()

    def done(stage: str, counts: dict) -> None:
        manifest.stages[stage] = counts
        if stage not in manifest.completed:
            manifest.completed.append(stage)
        manifest.save(manifest_path)

    def fresh(stage: str, *outputs: Path) -> bool:
        return stage in manifest.completed and all(p.exists() for p in outputs)

    # ingest
    corpus_file = out / "corpus.jsonl"
    if not fresh("ingest", corpus_file):
        dataset = load_corpus(config.corpus, manifest_path=out / "skip_manifest.csv")
        save_jsonl(dataset, corpus_file)
        with open(out / "skip_manifest.csv", encoding="utf-8") as fh:
            skip_count = max(sum(1 for _ in fh) - 1, 0)
        done("ingest", {"cases": len(dataset), "skipped_files": skip_count})
    dataset = load_jsonl(corpus_file, name="corpus")

    # date filter
    dated_file = out / "dated.jsonl"
    if not fresh("date_filter", dated_file):
        if config.date_cutoff is not None:
            result = filter_by_date(dataset, config.date_cutoff)
            save_jsonl(result.kept, dated_file)
            done("date_filter", {"kept": len(result.kept), "excluded": len(result.excluded),
                                 "undated_flagged": len(result.undated_ids)})
        else:
            save_jsonl(dataset, dated_file)
            done("date_filter", {"kept": len(dataset), "excluded": 0, "undated_flagged": 0})
    dated = load_jsonl(dated_file, name="dated")

    # regex
    regex_file = out / "regex_sj.jsonl"
    if not fresh("regex", regex_file):
        selected = regex_filter(dated, pattern)
        save_jsonl(selected, regex_file)
        done("regex", {"selected": len(selected), "input": len(dated)})
    regex_sj = load_jsonl(regex_file, name="regex_sj", provenance="regex-sj")

    # keywords
    stats_dir = out / "stats"
    if not fresh("keywords", stats_dir / "counts.csv"):
        stats_dir.mkdir(exist_ok=True)
        profiles = keywords.scan_dataset(regex_sj, catalog)
        totals = keywords.total_counts(profiles, catalog)
        _write_counts_csv(stats_dir / "counts.csv", totals.items(), ["variant", "count"])
        isolation = keywords.isolation_counts(profiles, catalog)
        _write_counts_csv(stats_dir / "isolation.csv", isolation.items(), ["variant", "count"])
        matrix = keywords.cooccurrence(profiles, catalog)
        with open(stats_dir / "cooccurrence.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([""] + list(matrix.labels))
            for label, row in zip(matrix.labels, matrix.cells):
                writer.writerow([label] + [int(v) for v in row])
        done("keywords", {"profiles": len(profiles)})

    # matrix classification
    matrix_dir = out / "matrix"
    ksjd_file, knsjd_file = matrix_dir / "ksjd.jsonl", matrix_dir / "knsjd.jsonl"
    if not fresh("matrix", ksjd_file, knsjd_file):
        matrix_dir.mkdir(exist_ok=True)
        ksjd, knsjd, decisions = rules.classify_dataset(regex_sj, ruleset)
        rules.write_decisions_csv(decisions, matrix_dir / "matrix_decisions.csv")
        save_jsonl(ksjd, ksjd_file)
        save_jsonl(knsjd, knsjd_file)
        done("matrix", {"sj": len(ksjd), "non_sj": len(knsjd)})
    ksjd = load_jsonl(ksjd_file, name="ksjd", provenance="matrix-sj")
    knsjd = load_jsonl(knsjd_file, name="knsjd", provenance="matrix-non-sj")

    # llm classification
    csjd = cnsjd = None
    if config.llm_backend != "none":
        llm_dir = out / "llm"
        csjd_file, cnsjd_file = llm_dir / "csjd.jsonl", llm_dir / "cnsjd.jsonl"
        if not fresh("llm", csjd_file, cnsjd_file):
            llm_dir.mkdir(exist_ok=True)
            if config.llm_backend == "script":
                backend = llm.ScriptedBackend.from_csv(config.llm_script)
            else:
                backend = llm.LiveBackend(endpoint=config.llm_endpoint, model=config.llm_model)
            result = llm.classify_dataset(regex_sj, backend, limit_words=config.limit_words,
                                          log_path=llm_dir / "llm_decisions.jsonl")
            save_jsonl(result.sj, csjd_file)
            save_jsonl(result.non_sj, cnsjd_file)
            done("llm", {"sj": len(result.sj), "non_sj": len(result.non_sj),
                         "skipped": len(result.skipped), "unparseable": len(result.unparseable)})
        csjd = load_jsonl(csjd_file, name="csjd", provenance="llm-sj")
        cnsjd = load_jsonl(cnsjd_file, name="cnsjd", provenance="llm-non-sj")

    # sampling plans for every produced dataset
    samples_dir = out / "samples"
    sampled = {"ksjd": ksjd, "knsjd": knsjd}
    if csjd is not None:
        sampled.update({"csjd": csjd, "cnsjd": cnsjd})
    if not fresh("sample", *(samples_dir / f"{name}_plan.json" for name in sampled)):
        samples_dir.mkdir(exist_ok=True)
        counts = {}
        for name, ds in sampled.items():
            if len(ds) == 0:
                counts[name] = 0
                continue
            n = sampling.required_sample_size(len(ds), config.confidence, config.margin,
                                              config.proportion)
            plan = sampling.draw_sample(ds, n, config.seed, config.confidence,
                                        config.margin, config.proportion)
            sampling.save_plan(plan, samples_dir / f"{name}_plan.json")
            counts[name] = n
        done("sample", counts)

    # analytics + charts on the strongest SJ dataset available
    analysis_dir = out / "analysis"
    target = csjd if csjd is not None else ksjd
    if not fresh("analyze", analysis_dir / "wordstats.json"):
        analysis_dir.mkdir(exist_ok=True)
        write_analysis(target, tier_map, config.kmeans_ks, analysis_dir)
        done("analyze", {"dataset": target.name, "cases": len(target)})

    charts_dir = out / "charts"
    if not fresh("charts", charts_dir):
        charts_dir.mkdir(exist_ok=True)
        write_charts(analysis_dir, charts_dir)
        done("charts", {})

    return manifest


def write_analysis(dataset: Dataset, tier_map: analytics.CourtTierMap,
                   kmeans_ks: tuple[int, ...], analysis_dir: Path) -> None:
    analysis_dir.mkdir(parents=True, exist_ok=True)
    years = analytics.counts_by_year(dataset)
    _write_counts_csv(analysis_dir / "by_year.csv", years.counts.items(), ["year", "count"])
    _write_counts_csv(analysis_dir / "by_court.csv", analytics.counts_by_court(dataset),
                      ["court", "count"])
    _write_counts_csv(analysis_dir / "by_tier.csv", analytics.counts_by_tier(dataset, tier_map),
                      ["tier", "count"])

    if len(set(years.counts)) >= 2:
        fit = analytics.linear_regression(sorted(years.counts.items()))
        (analysis_dir / "regression.json").write_text(
            json.dumps(fit.to_dict(), indent=1) + "\n", encoding="utf-8")

    if len(dataset) >= 1:
        stats = analytics.word_count_stats(dataset)
        (analysis_dir / "wordstats.json").write_text(
            json.dumps(stats.to_dict(), indent=1) + "\n", encoding="utf-8")
        distinct = len({case.word_count for case in dataset})
        for k in kmeans_ks:
            if k > distinct:
                continue
            result, assignments = analytics.cluster_word_counts(dataset, k)
            path = analysis_dir / f"clusters_k{k}.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["case_id", "word_count", "cluster"])
                for case in dataset:
                    writer.writerow([case.id, case.word_count, assignments[case.id]])
    else:
        (analysis_dir / "wordstats.json").write_text("{}\n", encoding="utf-8")


def write_charts(analysis_dir: Path, charts_dir: Path) -> None:
    charts_dir.mkdir(parents=True, exist_ok=True)

    def read_rows(name: str) -> list[list[str]]:
        path = analysis_dir / name
        if not path.exists():
            return []
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        return rows[1:]

    year_rows = [(int(y), int(c)) for y, c in read_rows("by_year.csv")]
    (charts_dir / "cases_by_year.svg").write_text(
        charts.line_chart(year_rows, "Cases per year", "year", "cases"), encoding="utf-8")

    court_rows = [(court, int(c)) for court, c in read_rows("by_court.csv")]
    (charts_dir / "cases_by_court.svg").write_text(
        charts.bar_chart(court_rows[:15], "Cases by court"), encoding="utf-8")

    tier_rows = [(tier, int(c)) for tier, c in read_rows("by_tier.csv")]
    (charts_dir / "cases_by_tier.svg").write_text(
        charts.bar_chart(tier_rows, "Cases by tier"), encoding="utf-8")

    regression_file = analysis_dir / "regression.json"
    if regression_file.exists() and year_rows:
        fit = json.loads(regression_file.read_text(encoding="utf-8"))
        (charts_dir / "regression.svg").write_text(
            charts.regression_chart(year_rows, fit["slope"], fit["intercept"],
                                    "Yearly trend"), encoding="utf-8")

    for clusters_file in sorted(analysis_dir.glob("clusters_k*.csv")):
        rows = []
        with open(clusters_file, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        values = [int(r["word_count"]) for r in rows]
        labels = [int(r["cluster"]) for r in rows]
        (charts_dir / f"{clusters_file.stem}.svg").write_text(
            charts.cluster_scatter(values, labels, "Word counts by cluster"), encoding="utf-8")
