"""Acceptance suite: one test per release criterion, tolerances pinned inline.

Run with `pytest -s tests/test_acceptance.py` to see one PASS line per
criterion. Every expected value here is either a closed-form computation
checked against an in-test oracle or a published reference figure.
"""

from __future__ import annotations

import random
import re
import time
from itertools import combinations

import numpy as np
import pytest

from casesift import generator
from casesift.analytics import default_tier_map, kmeans_1d, linear_regression, tier_of
from casesift.corpus import Case, Dataset, scan_corpus
from casesift.keywords import (
    MatchProfile,
    cooccurrence,
    default_catalog,
    isolation_counts,
    venn_counts,
)
from casesift.llm import PromptTemplate, ScriptedBackend, classify_dataset, parse_response
from casesift.pipeline import PipelineConfig, run_pipeline
from casesift.regex_filter import matches_root
from casesift.rules import default_ruleset, evaluate
from casesift.sampling import ConfusionMatrix, required_sample_size, scores

from test_analytics import closed_form_ols, exhaustive_best_wcss
from test_regex_filter import FIXTURE
from test_rules import naive_decision, random_documents


def announce(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def test_fpc_sample_sizes_reproduce_published_values():
    start = time.perf_counter()
    results = {n: required_sample_size(n, 0.95, 0.05, 0.5)
               for n in (2408, 3545, 3102, 2811)}
    elapsed = time.perf_counter() - start
    assert results == {2408: 332, 3545: 347, 3102: 342, 2811: 339}  # zero tolerance
    assert elapsed < 0.001, f"took {elapsed * 1000:.3f} ms"
    announce("FPC sample sizes 332/347/342/339, < 1 ms")


def test_f1_scores_reproduce_published_values():
    start = time.perf_counter()
    matrix_review = scores(ConfusionMatrix(tp=215, fn=36, fp=117, tn=311))
    llm_review = scores(ConfusionMatrix(tp=309, fn=6, fp=33, tn=333))
    elapsed = time.perf_counter() - start
    assert matrix_review.f1["sj"] == pytest.approx(0.74, abs=0.005)
    assert matrix_review.weighted_f1 == pytest.approx(0.78, abs=0.005)
    assert llm_review.f1["sj"] == pytest.approx(0.94, abs=0.005)
    assert llm_review.weighted_f1 == pytest.approx(0.94, abs=0.005)
    assert elapsed < 0.001, f"took {elapsed * 1000:.3f} ms"
    announce("F1 0.74/0.78 and 0.94/0.94 (+/- 0.005), < 1 ms")


def test_correct_percentages_reproduce_published_values():
    matrix_review = scores(ConfusionMatrix(tp=215, fn=36, fp=117, tn=311))
    assert matrix_review.correct_percentage["sj"] == pytest.approx(64.8, abs=0.05)
    assert matrix_review.correct_percentage["non-sj"] == pytest.approx(89.6, abs=0.05)
    llm_review = scores(ConfusionMatrix(tp=309, fn=6, fp=33, tn=333))
    assert llm_review.correct_percentage["sj"] == pytest.approx(90.4, abs=0.05)
    assert llm_review.correct_percentage["non-sj"] == pytest.approx(98.2, abs=0.05)
    announce("correct percentages 64.8/89.6 and 90.4/98.2 (+/- 0.05)")


def test_regex_pattern_semantics_on_fixture():
    assert len(FIXTURE) == 20
    hits = sum(1 for text, expected in FIXTURE if matches_root(text) is expected)
    assert hits == 20  # 100% on the fixture
    assert matches_root("summary judgment") and matches_root("summary judgement")
    assert matches_root("summarily judged")
    assert not matches_root("the judgment summary was read")
    announce("regex fixture 20/20 incl. variants, summarily judged, judgment-summary rejection")


def test_matrix_classifier_oracle_equivalence_and_pipeline(tmp_path):
    start = time.perf_counter()
    ruleset = default_ruleset()

    docs = random_documents(220, seed=1234)
    covered_inc: set[str] = set()
    covered_exc: set[str] = set()
    agree = 0
    for doc in docs:
        mine = evaluate(doc, ruleset)
        label, inc, exc = naive_decision(doc)
        if (mine.label, list(mine.fired_inclusions), list(mine.fired_exclusions)) == \
                (label, inc, exc):
            agree += 1
        covered_inc.update(inc)
        covered_exc.update(exc)
    assert agree == len(docs)  # 100% agreement
    assert covered_inc == {"1", "2", "3", "4", "5", "6", "7"}
    assert covered_exc == {"8a", "8b", "8c"}

    corpus_dir = tmp_path / "corpus"
    spec = generator.CorpusSpec(n_sj=40, n_non_sj=40, n_distractor=19,
                                n_oversized=1, seed=2024)
    truths = generator.generate_synthetic_corpus(spec, corpus_dir)
    assert len(truths) == 100
    config = PipelineConfig.from_dict({
        "corpus": str(corpus_dir), "out_dir": str(tmp_path / "run"),
        "llm_backend": "script",
        "llm_script": str(corpus_dir / generator.LLM_SCRIPT_FILE),
    })
    manifest = run_pipeline(config)
    expect_regex = {t.case_id for t in truths if t.regex_match}
    expect_sj = {t.case_id for t in truths if t.regex_match and t.matrix_label == "sj"}
    assert manifest.stages["regex"]["selected"] == len(expect_regex)
    assert manifest.stages["matrix"]["sj"] == len(expect_sj)
    assert manifest.stages["matrix"]["non_sj"] == len(expect_regex) - len(expect_sj)

    import json
    ksjd_ids = {json.loads(line)["id"]
                for line in (tmp_path / "run" / "matrix" / "ksjd.jsonl").read_text().splitlines()}
    assert ksjd_ids == expect_sj  # exact ground-truth partition

    elapsed = time.perf_counter() - start
    assert elapsed < 10, f"took {elapsed:.1f} s"
    announce("matrix oracle equivalence 220/220 + exact 100-case pipeline funnel, < 10 s")


def _random_profiles(n: int, variants: list[str], seed: int) -> list[MatchProfile]:
    rng = random.Random(seed)
    profiles = []
    for i in range(n):
        k = rng.randint(0, 6)
        chosen = rng.sample(variants, k)
        counts = {v: 0 for v in variants}
        for v in chosen:
            counts[v] = rng.randint(1, 4)
        profiles.append(MatchProfile(case_id=f"p{i:04d}", counts=counts))
    return profiles


def test_cooccurrence_invariants_on_1000_profiles():
    catalog = default_catalog()
    variants = catalog.variants()
    profiles = _random_profiles(1000, variants, seed=77)

    matrix = cooccurrence(profiles, catalog)
    cells = matrix.cells
    assert (cells == cells.T).all()                      # symmetry
    diag = np.diag(cells)
    n = len(variants)
    for i in range(n):
        for j in range(n):
            assert cells[i, j] <= min(diag[i], diag[j])  # cell <= min(diagonals)

    iso = isolation_counts(profiles, catalog)
    for idx, variant in enumerate(variants):
        assert iso[variant] <= diag[idx]                 # isolation <= diagonal

    rng = random.Random(99)
    for _ in range(20):
        keys = rng.sample(variants, rng.choice([2, 3]))
        regions = venn_counts(profiles, keys, catalog)
        assert sum(regions.values()) == len(profiles)
        direct_union = sum(1 for p in profiles if any(p.present(k) for k in keys))
        assert sum(v for name, v in regions.items() if name != "outside") == direct_union
        for size in (2, 3):
            for combo in combinations(keys, size):
                if size > len(keys):
                    continue
                direct = sum(1 for p in profiles if all(p.present(k) for k in combo))
                from_regions = sum(
                    v for name, v in regions.items()
                    if name != "outside" and set(combo) <= set(name.split(" & ")))
                assert from_regions == direct
    announce("co-occurrence/venn/isolation invariants on 1,000 profiles, zero violations")


def test_ols_closed_form_and_p_value():
    for intercept in (0.0, 10.0, -3.5):
        fit = linear_regression([(x, 6 * x + intercept) for x in range(2000, 2012)])
        assert fit.slope == pytest.approx(6.0, abs=1e-9)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-9)

    rng = random.Random(2718)
    for _ in range(100):
        points = [(float(i), rng.uniform(-100, 100)) for i in range(20)]
        fit = linear_regression(points)
        slope, icept, r2 = closed_form_ols(points)
        assert fit.slope == pytest.approx(slope, rel=0, abs=1e-9)
        assert fit.intercept == pytest.approx(icept, rel=0, abs=1e-9)
        assert fit.r_squared == pytest.approx(r2, rel=0, abs=1e-9)

    trending = [(float(x), 6.0 * x + rng.uniform(-10, 10)) for x in range(2000, 2024)]
    assert linear_regression(trending).p_value < 0.005
    announce("OLS slope-6 recovery, 100-series closed-form agreement @1e-9, p < 0.005")


def test_kmeans_fixture_optimal_and_random_instances_sound():
    fixture = [1, 2, 3, 100, 101, 102]
    result = kmeans_1d(fixture, k=2)
    assert result.centroids == (2.0, 101.0)
    assert result.wcss == pytest.approx(exhaustive_best_wcss(fixture, 2), abs=1e-9)

    rng = random.Random(31415)
    for _ in range(100):
        n = rng.randint(2, 12)
        values = [round(rng.uniform(0, 200), 2) for _ in range(n)]
        k = rng.randint(1, min(3, len(set(values))))
        result = kmeans_1d(values, k=k)

        best = exhaustive_best_wcss(values, k)
        optimal = result.wcss <= best + 1e-9

        trace = result.objective_trace
        monotone = all(a >= b - 1e-9 for a, b in zip(trace, trace[1:]))
        arr = np.asarray(values, dtype=float)
        cents = np.asarray(result.centroids)
        nearest = np.abs(arr[:, None] - cents[None, :]).argmin(axis=1)
        nearest_ok = list(nearest) == list(result.labels)

        assert monotone and nearest_ok          # both asserted on every instance
        assert optimal or (monotone and nearest_ok)
        assert result.wcss >= best - 1e-9       # can never beat the exhaustive optimum
    announce("1-D k-means: fixture optimal, 100 random instances monotone + nearest-centroid")


def test_llm_pipeline_determinism_offline(tmp_path):
    start = time.perf_counter()
    corpus_dir = tmp_path / "corpus"
    spec = generator.CorpusSpec(n_sj=20, n_non_sj=18, n_distractor=11,
                                n_oversized=1, seed=4242)
    truths = generator.generate_synthetic_corpus(spec, corpus_dir)
    assert len(truths) == 50
    dataset, _ = scan_corpus(corpus_dir)

    backend = ScriptedBackend.from_csv(corpus_dir / generator.LLM_SCRIPT_FILE)
    no = "<response> No, this is not a summary judgment case. </response>"
    for truth in truths:
        backend.responses.setdefault(truth.case_id, no)

    result = classify_dataset(dataset, backend, log_path=tmp_path / "clean.jsonl",
                              max_concurrent=1)
    expect_sj = {t.case_id for t in truths if t.llm_outcome == "sj"}
    expect_skip = {t.case_id for t in truths if t.llm_outcome == "skipped"}
    assert set(result.sj.ids()) == expect_sj
    assert set(result.skipped) == expect_skip
    oversized = next(t.case_id for t in truths if t.truth == "oversized")
    big_case = dataset.by_id()[oversized]
    assert big_case.word_count == 239_178 and oversized in result.skipped
    assert (len(result.sj) + len(result.non_sj) + len(result.skipped)
            + len(result.unparseable)) == 50

    # worked examples embedded in the template parse to their stated labels
    spans = re.findall(r"<response>.*?</response>", PromptTemplate().prefix, re.DOTALL)
    assert parse_response(spans[2])[0] == "sj" and parse_response(spans[2])[1]
    assert parse_response(spans[3]) == ("non-sj", "")

    # interrupted run resumes to identical decisions
    class Crash(Exception):
        pass

    class CrashingBackend:
        backend_id = "crash"

        def __init__(self, responses, healthy):
            self.responses, self.healthy, self.calls = responses, healthy, 0

        def complete(self, case_id, prompt):
            self.calls += 1
            if self.calls > self.healthy:
                raise Crash("interrupted")
            return self.responses[case_id]

    crash_log = tmp_path / "crash.jsonl"
    with pytest.raises(Crash):
        classify_dataset(dataset, CrashingBackend(dict(backend.responses), 10),
                         log_path=crash_log, max_concurrent=1)
    resumed = classify_dataset(dataset, ScriptedBackend(dict(backend.responses)),
                               log_path=crash_log, max_concurrent=1)
    assert [(d.case_id, d.label) for d in resumed.decisions] == \
           [(d.case_id, d.label) for d in result.decisions]

    elapsed = time.perf_counter() - start
    assert elapsed < 5, f"took {elapsed:.1f} s"
    announce("LLM scripted run: 50-case partition, 239,178-word skip, resume identity, < 5 s")


def test_court_tier_mapping_resolves_all_30_courts():
    from test_analytics import APPENDIX_COURTS
    tier_map = default_tier_map()
    assert len(APPENDIX_COURTS) == 30
    for court, expected in APPENDIX_COURTS.items():
        assert tier_of(court, tier_map) == expected, court
    assert tier_of("United Kingdom Supreme Court", tier_map) == "Tier 1: Court of Last Resort"
    assert tier_of("England and Wales Court of Appeal (Civil Division)",
                   tier_map) == "Tier 2: Appellate Court"
    assert tier_of("England and Wales High Court (Chancery Division)",
                   tier_map) == "Tier 3: First Instance Court"
    announce("court tier map resolves all 30 courts incl. spot-set")
