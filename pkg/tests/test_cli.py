from __future__ import annotations

import json
from pathlib import Path

import pytest

from casesift import generator
from casesift.cli import main


@pytest.fixture(scope="module")
def workspace(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus"
    generator.generate_synthetic_corpus(
        generator.CorpusSpec(n_sj=10, n_non_sj=8, n_distractor=4, seed=55), corpus)
    return root


def test_generate_command(tmp_path):
    out = tmp_path / "gen"
    assert main(["generate", "--out", str(out), "--n-sj", "3", "--n-non-sj", "2",
                 "--n-distractor", "1", "--seed", "9"]) == 0
    assert len(list(out.glob("*.xml"))) == 6
    assert (out / generator.ANSWERS_FILE).exists()


def test_full_cli_chain(workspace):
    corpus = workspace / "corpus"

    assert main(["ingest", "--in", str(corpus), "--out", str(workspace / "corpus.jsonl"),
                 "--cutoff", "1999-04-26"]) == 0
    assert (workspace / "corpus_skips.csv").exists()

    assert main(["regex-filter", "--in", str(workspace / "corpus.jsonl"),
                 "--out", str(workspace / "regex_sj.jsonl")]) == 0

    assert main(["keywords", "--in", str(workspace / "regex_sj.jsonl"),
                 "--out-dir", str(workspace / "stats")]) == 0
    for name in ("counts.csv", "isolation.csv", "cooccurrence.csv"):
        assert (workspace / "stats" / name).exists()

    assert main(["venn", "--in", str(workspace / "regex_sj.jsonl"),
                 "--keys", "summary judgment,no real prospect,mini-trial",
                 "--out", str(workspace / "venn.json")]) == 0
    regions = json.loads((workspace / "venn.json").read_text())["regions"]
    assert "outside" in regions and len(regions) == 8

    assert main(["classify-matrix", "--in", str(workspace / "regex_sj.jsonl"),
                 "--out-dir", str(workspace / "matrix")]) == 0
    assert (workspace / "matrix" / "ksjd.jsonl").exists()

    assert main(["classify-llm", "--in", str(workspace / "regex_sj.jsonl"),
                 "--backend", "script",
                 "--script", str(corpus / generator.LLM_SCRIPT_FILE),
                 "--out-dir", str(workspace / "llm")]) == 0
    assert (workspace / "llm" / "csjd.jsonl").exists()

    assert main(["sample", "--in", str(workspace / "matrix" / "ksjd.jsonl"),
                 "--seed", "42", "--out", str(workspace / "plan.json")]) == 0
    plan = json.loads((workspace / "plan.json").read_text())
    assert plan["size"] <= plan["population_size"]

    # label every sampled case through the store, then evaluate
    from casesift.sampling import LabelStore
    store = LabelStore(workspace / "labels.jsonl", allowed_ids=set(plan["case_ids"]))
    truths = {t.case_id: t.matrix_label for t in generator.read_answers(corpus)}
    for cid in plan["case_ids"]:
        store.record_label(cid, truths[cid], reviewer="cli-test")

    assert main(["evaluate", "--pred", str(workspace / "matrix" / "matrix_decisions.csv"),
                 "--gold", str(workspace / "labels.jsonl"),
                 "--out", str(workspace / "report.json")]) == 0
    report = json.loads((workspace / "report.json").read_text())
    assert report["f1"]["sj"] == 1.0  # matrix agrees with its own ground truth

    assert main(["analyze", "--in", str(workspace / "llm" / "csjd.jsonl"),
                 "--kmeans", "2", "--out-dir", str(workspace / "analysis")]) == 0
    assert (workspace / "analysis" / "by_year.csv").exists()

    assert main(["charts", "--analysis", str(workspace / "analysis"),
                 "--out-dir", str(workspace / "charts")]) == 0
    assert (workspace / "charts" / "cases_by_year.svg").exists()


def test_run_command(workspace, tmp_path):
    corpus = workspace / "corpus"
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "corpus": str(corpus),
        "out_dir": str(tmp_path / "run"),
        "llm_backend": "script",
        "llm_script": str(corpus / generator.LLM_SCRIPT_FILE),
    }), encoding="utf-8")
    assert main(["run", "--config", str(config)]) == 0
    assert (tmp_path / "run" / "manifest.json").exists()


def test_error_paths(tmp_path):
    assert main(["ingest", "--in", str(tmp_path / "missing"),
                 "--out", str(tmp_path / "o.jsonl")]) == 1
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    assert main(["classify-llm", "--in", str(empty), "--backend", "script",
                 "--out-dir", str(tmp_path / "llm")]) == 2  # --script missing
    assert main(["evaluate", "--pred", str(tmp_path / "nope.csv"),
                 "--gold", str(tmp_path / "nope.jsonl")]) == 1
