from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from casesift import sampling
from casesift.corpus import Case, Dataset, save_jsonl
from casesift.rules import MatrixDecision, write_decisions_csv
from casesift.server import ReviewState, build_state, create_app


@pytest.fixture()
def review(tmp_path):
    cases = [
        Case.build(f"c{i:02d}", "United Kingdom Supreme Court", None,
                   f"case {i} text with summary judgment under cpr 24")
        for i in range(6)
    ]
    dataset = Dataset.from_cases("regex_sj", cases)
    dataset_path = tmp_path / "regex_sj.jsonl"
    save_jsonl(dataset, dataset_path)

    plan = sampling.draw_sample(dataset, 4, seed=5)
    plan_path = tmp_path / "plan.json"
    sampling.save_plan(plan, plan_path)

    predictions = [
        MatrixDecision(case_id=c.id, label="sj" if i % 2 == 0 else "non-sj",
                       fired_inclusions=("3",) if i % 2 == 0 else (),
                       fired_exclusions=())
        for i, c in enumerate(cases)
    ]
    pred_path = tmp_path / "matrix_decisions.csv"
    write_decisions_csv(predictions, pred_path)

    labels_path = tmp_path / "labels.jsonl"
    state = build_state(dataset_path, plan_path, labels_path, matrix_csv=pred_path,
                        reviewer="expert-1")
    client = TestClient(create_app(state))
    return client, state, plan, labels_path, pred_path


class TestSessionAndQueue:
    def test_fresh_session(self, review):
        client, state, plan, *_ = review
        payload = client.get("/api/session").json()
        assert payload["total"] == 4 and payload["labelled"] == 0
        assert payload["blind"] is True and payload["done"] is False

    def test_next_case_has_text_and_highlights(self, review):
        client, state, plan, *_ = review
        payload = client.get("/api/cases/next").json()
        assert payload["done"] is False
        case = payload["case"]
        assert case["id"] == plan.case_ids[0]
        assert "summary judgment" in case["text"]
        variants = {h["variant"] for h in case["highlights"]}
        assert {"summary judgment", "cpr 24"} <= variants
        for span in case["highlights"]:
            assert case["text"][span["start"]:span["end"]].lower() == span["variant"]

    def test_case_by_id_and_unknown(self, review):
        client, state, plan, *_ = review
        ok = client.get(f"/api/cases/{plan.case_ids[1]}")
        assert ok.status_code == 200
        missing = client.get("/api/cases/ghost")
        assert missing.status_code == 404
        assert "error" in missing.json()


class TestLabelling:
    def test_label_advances_progress(self, review):
        client, state, plan, *_ = review
        first = plan.case_ids[0]
        reply = client.post("/api/labels", json={"case_id": first, "label": "sj",
                                                 "reviewer": "expert-1"})
        assert reply.status_code == 200
        assert reply.json()["progress"]["labelled"] == 1
        next_case = client.get("/api/cases/next").json()["case"]["id"]
        assert next_case == plan.case_ids[1]

    def test_unknown_case_is_404_payload(self, review):
        client, *_ = review
        reply = client.post("/api/labels", json={"case_id": "ghost", "label": "sj"})
        assert reply.status_code == 404
        assert "error" in reply.json()

    def test_invalid_label_is_400(self, review):
        client, state, plan, *_ = review
        reply = client.post("/api/labels", json={"case_id": plan.case_ids[0],
                                                 "label": "perhaps"})
        assert reply.status_code == 400

    def test_double_submit_overwrites(self, review):
        client, state, plan, labels_path, _ = review
        cid = plan.case_ids[0]
        client.post("/api/labels", json={"case_id": cid, "label": "sj"})
        client.post("/api/labels", json={"case_id": cid, "label": "non-sj"})
        assert state.store.current()[cid] == "non-sj"
        assert len(state.store.history(cid)) == 2
        assert client.get("/api/session").json()["labelled"] == 1

    def test_completion_screen_with_metrics(self, review):
        client, state, plan, *_ = review
        for cid in plan.case_ids:
            client.post("/api/labels", json={"case_id": cid, "label": "sj"})
        payload = client.get("/api/cases/next").json()
        assert payload["done"] is True
        assert payload["metrics"]["labelled"] == 4


class TestMetricsParity:
    def test_api_metrics_equal_cli_evaluate(self, review, tmp_path):
        client, state, plan, labels_path, pred_path = review
        gold = ["sj", "non-sj", "sj", "non-sj"]
        for cid, label in zip(plan.case_ids, gold):
            client.post("/api/labels", json={"case_id": cid, "label": label})
        api_report = client.get("/api/metrics").json()["report"]

        from casesift.cli import main
        out_json = tmp_path / "report.json"
        code = main(["evaluate", "--pred", str(pred_path), "--gold", str(labels_path),
                     "--out", str(out_json)])
        assert code == 0
        cli_report = json.loads(out_json.read_text(encoding="utf-8"))
        assert api_report == cli_report

    def test_metrics_empty_before_labels(self, review):
        client, *_ = review
        payload = client.get("/api/metrics").json()
        assert payload == {"labelled": 0, "report": None}


class TestPredictionReveal:
    def test_hidden_until_labelled(self, review):
        client, state, plan, *_ = review
        cid = plan.case_ids[0]
        blocked = client.get(f"/api/predictions/{cid}")
        assert blocked.status_code == 403
        client.post("/api/labels", json={"case_id": cid, "label": "sj"})
        revealed = client.get(f"/api/predictions/{cid}")
        assert revealed.status_code == 200
        assert revealed.json()["predictions"]["matrix"]["label"] in ("sj", "non-sj")

    def test_reveal_flag_disables_blinding(self, tmp_path, review):
        _, state, plan, *_ = review
        open_state = ReviewState(dataset=state.dataset, plan=plan, store=state.store,
                                 eval_predictions=state.eval_predictions,
                                 predictions_detail=state.predictions_detail,
                                 catalog=state.catalog, reveal_predictions=True)
        client = TestClient(create_app(open_state))
        reply = client.get(f"/api/predictions/{plan.case_ids[1]}")
        assert reply.status_code == 200


class TestStateConstruction:
    def test_plan_ids_must_exist_in_dataset(self, tmp_path):
        ds = Dataset.from_cases("d", [Case.build("a", "c", None, "t")])
        plan = sampling.SamplePlan("d", 1, 0.95, 0.05, 0.5, 1, 0, ("zz",))
        with pytest.raises(ValueError):
            ReviewState(dataset=ds, plan=plan,
                        store=sampling.LabelStore(tmp_path / "l.jsonl"),
                        eval_predictions={"zz": "sj"})

    def test_serving_does_not_mutate_dataset(self, review, tmp_path):
        client, state, plan, labels_path, _ = review
        before = {c.id: c.text for c in state.dataset}
        client.post("/api/labels", json={"case_id": plan.case_ids[0], "label": "sj"})
        after = {c.id: c.text for c in state.dataset}
        assert before == after
        assert Path(labels_path).exists()
