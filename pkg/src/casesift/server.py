"""HTTP review service for the human-in-the-loop manual checks.

Serves sampled cases one at a time with keyword highlight offsets, accepts
labels, and recomputes the evaluation report on demand. Pipeline predictions
stay hidden until a case has been labelled (blind review) unless the server
was started with reveal enabled. Serving never mutates datasets; the label
store is the only thing that changes, through a single serialized writer.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import keywords, llm, rules, sampling
from .corpus import Case, Dataset, load_jsonl


@dataclass
class ReviewState:
    dataset: Dataset
    plan: sampling.SamplePlan
    store: sampling.LabelStore
    eval_predictions: dict[str, str]
    predictions_detail: dict[str, dict] = field(default_factory=dict)
    catalog: keywords.KeywordCatalog | None = None
    reveal_predictions: bool = False
    reviewer: str = ""

    def __post_init__(self) -> None:
        self._cases = self.dataset.by_id()
        self._lock = threading.Lock()
        missing = [i for i in self.plan.case_ids if i not in self._cases]
        if missing:
            raise ValueError(f"sample ids missing from dataset: {missing[:5]}")

    def case(self, case_id: str) -> Case | None:
        return self._cases.get(case_id)

    def labelled_ids(self) -> set[str]:
        return set(self.store.current())

    def queue(self) -> list[str]:
        labelled = self.labelled_ids()
        return [i for i in self.plan.case_ids if i not in labelled]

    def progress(self) -> dict:
        labelled = len([i for i in self.plan.case_ids if i in self.labelled_ids()])
        return {"labelled": labelled, "total": self.plan.size,
                "remaining": self.plan.size - labelled}

    def submit(self, case_id: str, label: str, reviewer: str) -> dict:
        with self._lock:
            self.store.record_label(case_id, label, reviewer)
        return self.progress()

    def metrics(self) -> dict:
        gold = {i: lb for i, lb in self.store.current().items() if i in set(self.plan.case_ids)}
        if not gold:
            return {"labelled": 0, "report": None}
        cm = sampling.confusion(self.eval_predictions, gold)
        report = sampling.scores(cm)
        return {"labelled": len(gold), "report": report.to_dict()}

    def case_payload(self, case: Case) -> dict:
        highlights = (keywords.find_spans(case.text, self.catalog)
                      if self.catalog is not None else [])
        return {
            "id": case.id,
            "court": case.court,
            "hearing_date": case.hearing_date.isoformat() if case.hearing_date else None,
            "word_count": case.word_count,
            "text": case.text,
            "highlights": highlights,
        }


class LabelSubmission(BaseModel):
    case_id: str
    label: str
    reviewer: str = ""


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def create_app(state: ReviewState, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="casesift review")

    @app.get("/api/session")
    def session() -> dict:
        progress = state.progress()
        return {
            "dataset": state.dataset.name,
            "plan": state.plan.dataset_name,
            "reviewer": state.reviewer,
            "blind": not state.reveal_predictions,
            "done": progress["remaining"] == 0,
            **progress,
        }

    @app.get("/api/cases/next")
    def next_case():
        queue = state.queue()
        if not queue:
            return {"done": True, "progress": state.progress(), "metrics": state.metrics()}
        case = state.case(queue[0])
        return {"done": False, "progress": state.progress(),
                "case": state.case_payload(case)}

    @app.get("/api/cases/{case_id}")
    def case_by_id(case_id: str):
        if case_id not in set(state.plan.case_ids):
            return _error(404, f"case {case_id!r} is not in the active sample")
        return {"case": state.case_payload(state.case(case_id))}

    @app.post("/api/labels")
    def submit_label(submission: LabelSubmission):
        if state.case(submission.case_id) is None or \
                submission.case_id not in set(state.plan.case_ids):
            return _error(404, f"case {submission.case_id!r} is not in the active sample")
        try:
            progress = state.submit(submission.case_id, submission.label,
                                    submission.reviewer or state.reviewer)
        except (KeyError, ValueError) as exc:
            return _error(400, str(exc))
        return {"ok": True, "progress": progress}

    @app.get("/api/metrics")
    def metrics():
        return state.metrics()

    @app.get("/api/predictions/{case_id}")
    def predictions(case_id: str):
        if case_id not in set(state.plan.case_ids):
            return _error(404, f"case {case_id!r} is not in the active sample")
        if not state.reveal_predictions and case_id not in state.labelled_ids():
            return _error(403, "predictions are hidden until the case is labelled")
        return {"case_id": case_id,
                "predictions": state.predictions_detail.get(case_id, {})}

    if static_dir is not None and Path(static_dir).exists():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def build_state(dataset_path: str | Path, plan_path: str | Path, labels_path: str | Path,
                matrix_csv: str | Path | None = None,
                llm_log: str | Path | None = None,
                catalog_path: str | Path | None = None,
                reveal_predictions: bool = False,
                reviewer: str = "") -> ReviewState:
    """Assemble a ReviewState from the artifacts the pipeline wrote to disk."""
    dataset = load_jsonl(dataset_path)
    plan = sampling.load_plan(plan_path)
    store = sampling.LabelStore(labels_path, allowed_ids=set(plan.case_ids))

    detail: dict[str, dict] = {}
    eval_predictions: dict[str, str] = {}
    if matrix_csv is not None:
        for decision in rules.read_decisions_csv(matrix_csv):
            detail.setdefault(decision.case_id, {})["matrix"] = {
                "label": decision.label,
                "fired_inclusions": list(decision.fired_inclusions),
                "fired_exclusions": list(decision.fired_exclusions),
            }
            eval_predictions[decision.case_id] = decision.label
    if llm_log is not None:
        for case_id, decision in llm.load_decision_log(llm_log).items():
            detail.setdefault(case_id, {})["llm"] = {
                "label": decision.label, "reason": decision.reason,
                "backend_id": decision.backend_id,
            }
            if matrix_csv is None and decision.label in ("sj", "non-sj"):
                eval_predictions[case_id] = decision.label
    if not eval_predictions:
        raise ValueError("serve needs matrix decisions or an LLM decision log for metrics")

    catalog = keywords.load_catalog(catalog_path) if catalog_path else keywords.default_catalog()
    return ReviewState(dataset=dataset, plan=plan, store=store,
                       eval_predictions=eval_predictions, predictions_detail=detail,
                       catalog=catalog, reveal_predictions=reveal_predictions,
                       reviewer=reviewer)
