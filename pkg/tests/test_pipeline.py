from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from casesift import generator
from casesift.pipeline import (
    ConfigValidationError,
    PipelineConfig,
    run_pipeline,
)

SPEC = generator.CorpusSpec(n_sj=40, n_non_sj=40, n_distractor=19, n_oversized=1, seed=100)


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("corpus")
    generator.generate_synthetic_corpus(SPEC, path)
    return path


def make_config(corpus_dir: Path, out_dir: Path) -> PipelineConfig:
    return PipelineConfig.from_dict({
        "corpus": str(corpus_dir),
        "out_dir": str(out_dir),
        "llm_backend": "script",
        "llm_script": str(corpus_dir / generator.LLM_SCRIPT_FILE),
        "seed": 7,
        "kmeans": [2, 3],
    })


def dataset_ids(path: Path) -> set[str]:
    ids = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                ids.add(json.loads(line)["id"])
    return ids


class TestConfig:
    def test_missing_corpus_fails_before_any_work(self, tmp_path):
        with pytest.raises(ConfigValidationError):
            PipelineConfig.from_dict({"corpus": str(tmp_path / "nope"),
                                      "out_dir": str(tmp_path / "out")})

    def test_missing_out_dir_key(self, tmp_path):
        with pytest.raises(ConfigValidationError):
            PipelineConfig.from_dict({"corpus": str(tmp_path)})

    def test_script_backend_requires_script(self, tmp_path):
        with pytest.raises(ConfigValidationError):
            PipelineConfig.from_dict({"corpus": str(tmp_path), "out_dir": str(tmp_path),
                                      "llm_backend": "script"})

    def test_config_file_roundtrip(self, tmp_path, corpus_dir):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps({
            "corpus": str(corpus_dir), "out_dir": str(tmp_path / "out"),
            "llm_backend": "none",
        }), encoding="utf-8")
        config = PipelineConfig.from_file(cfg_path)
        assert config.corpus == corpus_dir.resolve()


class TestFullRun:
    def test_funnel_matches_ground_truth(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path / "run")
        manifest = run_pipeline(config)
        truths = generator.read_answers(corpus_dir)

        assert manifest.stages["ingest"]["cases"] == SPEC.total
        assert manifest.stages["ingest"]["skipped_files"] == 0

        expect_regex = {t.case_id for t in truths if t.regex_match}
        assert manifest.stages["regex"]["selected"] == len(expect_regex)
        assert dataset_ids(tmp_path / "run" / "regex_sj.jsonl") == expect_regex

        expect_ksjd = {t.case_id for t in truths
                       if t.regex_match and t.matrix_label == "sj"}
        assert dataset_ids(tmp_path / "run" / "matrix" / "ksjd.jsonl") == expect_ksjd
        assert manifest.stages["matrix"]["sj"] == len(expect_ksjd)
        assert (manifest.stages["matrix"]["sj"] + manifest.stages["matrix"]["non_sj"]
                == len(expect_regex))

        expect_csjd = {t.case_id for t in truths if t.llm_outcome == "sj"}
        expect_skip = {t.case_id for t in truths if t.llm_outcome == "skipped"}
        assert dataset_ids(tmp_path / "run" / "llm" / "csjd.jsonl") == expect_csjd
        assert manifest.stages["llm"]["skipped"] == len(expect_skip)
        assert manifest.stages["llm"]["unparseable"] == 0

        for name in ("ksjd", "knsjd", "csjd", "cnsjd"):
            assert (tmp_path / "run" / "samples" / f"{name}_plan.json").exists()
        assert (tmp_path / "run" / "analysis" / "wordstats.json").exists()
        assert (tmp_path / "run" / "charts" / "cases_by_year.svg").exists()

    def test_rerun_is_byte_identical(self, corpus_dir, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        run_pipeline(make_config(corpus_dir, out_a))
        run_pipeline(make_config(corpus_dir, out_b))
        compared = 0
        for file_a in sorted(out_a.rglob("*")):
            if not file_a.is_file():
                continue
            file_b = out_b / file_a.relative_to(out_a)
            assert file_b.exists(), file_b
            assert file_a.read_bytes() == file_b.read_bytes(), file_a.name
            compared += 1
        assert compared > 10

    def test_resume_skips_completed_stages(self, corpus_dir, tmp_path):
        out = tmp_path / "resume"
        config = make_config(corpus_dir, out)
        first = run_pipeline(config)
        regex_file = out / "regex_sj.jsonl"
        before = regex_file.stat().st_mtime_ns
        second = run_pipeline(config)
        assert regex_file.stat().st_mtime_ns == before
        assert second.stages == first.stages

    def test_sample_sizes_use_fpc(self, corpus_dir, tmp_path):
        from casesift.sampling import required_sample_size
        out = tmp_path / "fpc"
        run_pipeline(make_config(corpus_dir, out))
        plan = json.loads((out / "samples" / "ksjd_plan.json").read_text())
        assert plan["size"] == required_sample_size(plan["population_size"])
        assert len(plan["case_ids"]) == plan["size"]

    def test_matrix_decision_csv_covers_regex_set(self, corpus_dir, tmp_path):
        out = tmp_path / "decisions"
        run_pipeline(make_config(corpus_dir, out))
        with open(out / "matrix" / "matrix_decisions.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert {r["case_id"] for r in rows} == dataset_ids(out / "regex_sj.jsonl")
        assert all(r["label"] in ("sj", "non-sj") for r in rows)
