"""Deterministic synthetic corpus generator with ground-truth sidecar files.

Every generated case carries a construction-derived truth record: whether the
root regex matches, what the search matrix should decide, and what a scripted
LLM backend should answer. Case bodies are assembled from templates so that

* "sj" cases plant one inclusion rule's phrases (rules cycle 1..7) plus
  catalog variants drawn round-robin until the whole catalog is covered,
* "distractor" cases plant an inclusion rule AND one exclusion rule's
  phrases (cycling 8a/8b/8c), so the veto makes them non-SJ,
* "non-sj" cases alternate between neutral filler (no root match at all) and
  a bare mention of the search term that fires no inclusion rule,
* "oversized" cases are sj cases padded past the word-count guard.

Filler vocabulary avoids the stems and digits used by any keyword, rule
phrase or the root pattern, so plants are the only matches. The sidecar
``plant_counts.json`` tallies per-variant occurrences with a regex-lookahead
counter, independent of the scanner's find loop.
"""

from __future__ import annotations

import csv
import json
import random
import re
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

from .corpus import LABEL_NON_SJ, LABEL_SJ, Case, count_words

ANSWERS_FILE = "answers.csv"
LLM_SCRIPT_FILE = "llm_script.csv"
PLANT_COUNTS_FILE = "plant_counts.json"

OVERSIZED_WORDS = 239_178
PAD_WORD = "argument"

_SJ_TERMS = ("summary judgement", "summary judgment")
_COMPELLING = (
    "compelling reason why the case or issue should be disposed of at a trial",
    "compelling reason to try the case or issue",
)
_CPR24 = (
    "civil procedure rules part 24", "cpr 24", "cpr 24.2", "cpr part 24",
    "part 24 of the civil procedure rules", "part 24 application",
    "part 24 judgement", "part 24 judgment", "r 24.2", "r. 24.2", "rule 24.2",
)
_EASYAIR = (
    "easyair v opal", "easyair ltd v opal telecom",
    "easyair ltd. (t.a openair) v. opal telecom ltd [2009] ewhc 339 (ch)",
    "ewhc 339 (ch)",
)
_PROSPECT = (
    "real prospect of success", "real prospect of succeeding",
    "realistic prospect of success", "realistic prospect of succeeding",
    "no real prospect", "no real prospect of succeeding",
    "no real prospect of success",
)
_FANCIFUL = (
    "fanciful not real", "realistic as opposed to a fanciful",
    "real as opposed to a fanciful", "real and not merely fanciful",
    "more than fanciful",
)
_MINITRIAL = ("mini trial", "mini-trial", "must not conduct a mini-trial")

ALL_VARIANTS: tuple[str, ...] = (
    _SJ_TERMS + _COMPELLING + _CPR24 + _EASYAIR + _PROSPECT + _FANCIFUL + _MINITRIAL
)

_EXCLUSION_AMEND = (
    "application to amend the claim form",
    "application to amend a claim form",
    "application to amend the defence",
    "an amendment to a claim form under cpr 17.3",
    "application for permission to amend",
)
_EXCLUSION_SERVE = (
    "application to serve outside the jurisdiction",
    "application for permission to serve outside the jurisdiction",
    "merits of the relevant claim under cpr r.6.37(1)(b)",
    "under cpr rr. 6.36, 6.37 and 6.38",
)
_EXCLUSION_SET_ASIDE = (
    "set aside a default judgment",
    "set aside or vary a judgment",
    "set aside a judgment entered in default",
)
_CPR13 = ("cpr 13", "cpr 13.3")

ALL_EXCLUSION_PHRASES: tuple[str, ...] = (
    _EXCLUSION_AMEND + _EXCLUSION_SERVE + _EXCLUSION_SET_ASIDE + _CPR13
)

RULE_ONE_SENTENCE = "This is an application for summary judgment."

# Filler never uses summ/judg/cpr/prospect/fanciful/mini/compelling/amend/
# serve/easyair/ewhc stems, "set aside", or digits.
_FILLER = (
    "The parties exchanged witness statements concerning the licensing fees.",
    "Counsel for the respondent relied on the correspondence between the brokers.",
    "The hearing addressed the construction of the charterparty clauses.",
    "Questions of quantum were deferred pending expert accountancy evidence.",
    "The dispute arose from a shareholders agreement governing the venture.",
    "Both experts agreed that the valuation depended on market comparables.",
    "The landlord sought possession following persistent arrears of rent.",
    "An issue of contractual interpretation dominated the oral submissions.",
    "The insurer denied cover on the basis of alleged non-disclosure.",
    "Delivery of the cargo was delayed by congestion at the discharge port.",
    "The architect certified completion notwithstanding the defects schedule.",
    "Negotiations continued between the liquidators and the secured creditors.",
)

_MENTION_ONLY = (
    "An earlier request for summary judgment between different parties was noted in the chronology.",
    "The history records that summary judgement had once been sought before the matter settled.",
)

_COURTS = (
    "England and Wales High Court (Chancery Division)",
    "England and Wales Court of Appeal (Civil Division)",
    "England and Wales High Court (Queen's Bench Division)",
    "England and Wales High Court (Commercial Court)",
    "England and Wales High Court (Technology and Construction Court)",
    "United Kingdom Supreme Court",
    "United Kingdom Competition Appeal Tribunal",
    "First-tier Tribunal (Tax)",
)


@dataclass(frozen=True)
class CorpusSpec:
    """Size, label mix and seed for one synthetic corpus."""

    n_sj: int = 10
    n_non_sj: int = 10
    n_distractor: int = 5
    n_oversized: int = 0
    seed: int = 0
    start_year: int = 2000
    end_year: int = 2023

    @property
    def total(self) -> int:
        return self.n_sj + self.n_non_sj + self.n_distractor + self.n_oversized


@dataclass(frozen=True)
class CaseTruth:
    """Construction-derived expectations for one generated case."""

    case_id: str
    truth: str              # sj | non-sj | distractor | oversized
    regex_match: bool
    matrix_label: str       # sj | non-sj
    llm_outcome: str        # sj | non-sj | skipped | "" (never reaches the LLM)


class _Cycler:
    """Deterministic round-robin over a phrase tuple."""

    def __init__(self, items: tuple[str, ...]):
        self.items = items
        self.pos = 0

    def next(self) -> str:
        item = self.items[self.pos % len(self.items)]
        self.pos += 1
        return item


def _embed(phrase: str) -> str:
    return f"The court considered whether {phrase} was decisive in the present matter."


def _count_with_lookahead(lower_text: str, phrase: str) -> int:
    return len(re.findall("(?=" + re.escape(phrase) + ")", lower_text))


def generate_synthetic_corpus(spec: CorpusSpec, out_dir: str | Path) -> list[CaseTruth]:
    """Write <out_dir>/syn-*.xml plus the three sidecar files; return the truths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(spec.seed)

    sj_rule_cycle = _Cycler(tuple(str(i) for i in range(1, 8)))
    exclusion_cycle = _Cycler(("8a", "8b", "8c"))
    cyclers = {
        "sj": _Cycler(_SJ_TERMS), "compelling": _Cycler(_COMPELLING),
        "cpr24": _Cycler(_CPR24), "easyair": _Cycler(_EASYAIR),
        "prospect": _Cycler(_PROSPECT), "fanciful": _Cycler(_FANCIFUL),
        "minitrial": _Cycler(_MINITRIAL),
        "amend": _Cycler(_EXCLUSION_AMEND), "serve": _Cycler(_EXCLUSION_SERVE),
        "set_aside": _Cycler(_EXCLUSION_SET_ASIDE), "cpr13": _Cycler(_CPR13),
    }
    coverage = _Cycler(ALL_VARIANTS)

    def inclusion_sentences(rule: str) -> list[str]:
        if rule == "1":
            return [RULE_ONE_SENTENCE]
        if rule == "2":
            return [_embed(cyclers["sj"].next()), _embed(cyclers["compelling"].next())]
        if rule == "3":
            return [_embed(cyclers["sj"].next()), _embed(cyclers["cpr24"].next())]
        if rule == "4":
            return [_embed(cyclers["sj"].next()), _embed(cyclers["easyair"].next())]
        if rule == "5":
            return [_embed(cyclers["sj"].next()), _embed(cyclers["prospect"].next()),
                    _embed(cyclers["cpr24"].next())]
        if rule == "6":
            return [_embed(cyclers["sj"].next()), _embed(cyclers["prospect"].next()),
                    _embed(cyclers["fanciful"].next())]
        return [_embed(cyclers["sj"].next()), _embed(cyclers["prospect"].next()),
                _embed(cyclers["minitrial"].next())]

    def exclusion_sentences(rule: str) -> list[str]:
        if rule == "8a":
            return [_embed(cyclers["amend"].next())]
        if rule == "8b":
            return [_embed(cyclers["serve"].next())]
        return [_embed(cyclers["set_aside"].next()), _embed(cyclers["cpr13"].next())]

    def filler(k: int) -> list[str]:
        return [rng.choice(_FILLER) for _ in range(k)]

    def sj_body(extra_coverage: int) -> list[str]:
        rule = sj_rule_cycle.next()
        sentences = inclusion_sentences(rule)
        sentences += [_embed(coverage.next()) for _ in range(extra_coverage)]
        return sentences + filler(rng.randint(2, 6))

    # Spread full catalog coverage across the sj cases.
    per_case_extras = -(-len(ALL_VARIANTS) // spec.n_sj) if spec.n_sj else 0

    plan: list[tuple[str, str]] = []           # (kind, case_id)
    for i in range(spec.n_sj):
        plan.append(("sj", f"syn-{i:06d}"))
    for i in range(spec.n_non_sj):
        kind = "neutral" if i % 2 == 0 else "mention"
        plan.append((kind, f"syn-{spec.n_sj + i:06d}"))
    base = spec.n_sj + spec.n_non_sj
    for i in range(spec.n_distractor):
        plan.append(("distractor", f"syn-{base + i:06d}"))
    base += spec.n_distractor
    for i in range(spec.n_oversized):
        plan.append(("oversized", f"syn-{base + i:06d}"))

    truths: list[CaseTruth] = []
    plant_counts: dict[str, int] = {v: 0 for v in ALL_VARIANTS}
    script_rows: list[tuple[str, str]] = []
    epoch = date(spec.start_year, 1, 1)
    day_span = max((date(spec.end_year, 12, 31) - epoch).days, 1)

    for index, (kind, case_id) in enumerate(plan):
        padding = ""
        if kind == "sj":
            sentences = sj_body(per_case_extras)
            truth = CaseTruth(case_id, "sj", True, LABEL_SJ, "sj")
        elif kind == "distractor":
            sentences = inclusion_sentences(sj_rule_cycle.next())
            sentences += exclusion_sentences(exclusion_cycle.next())
            sentences += filler(rng.randint(2, 6))
            truth = CaseTruth(case_id, "distractor", True, LABEL_NON_SJ, "non-sj")
        elif kind == "mention":
            sentences = [_MENTION_ONLY[index % len(_MENTION_ONLY)]] + filler(rng.randint(2, 6))
            truth = CaseTruth(case_id, "non-sj", True, LABEL_NON_SJ, "non-sj")
        elif kind == "oversized":
            sentences = sj_body(0)
            body_words = count_words(" ".join(sentences))
            padding = " ".join([PAD_WORD] * (OVERSIZED_WORDS - body_words))
            truth = CaseTruth(case_id, "oversized", True, LABEL_SJ, "skipped")
        else:
            sentences = filler(rng.randint(3, 8))
            truth = CaseTruth(case_id, "non-sj", False, LABEL_NON_SJ, "")

        text = " ".join(sentences)
        lower = text.lower()
        for variant in ALL_VARIANTS:
            plant_counts[variant] += _count_with_lookahead(lower, variant)
        if padding:
            text = text + " " + padding

        court = _COURTS[index % len(_COURTS)]
        hearing = epoch + timedelta(days=rng.randrange(day_span))
        case = Case.build(id=case_id, court=court, hearing_date=hearing, text=text)
        _write_case_xml(case, out_dir / f"{case_id}.xml")

        truths.append(truth)
        if truth.regex_match:
            if truth.llm_outcome == "non-sj":
                response = "<response> No, this is not a summary judgment case. </response>"
            else:
                response = ("<response> Yes, this is a summary judgment case. "
                            "Reason: The decision determines an application for summary "
                            "judgment on the real prospect test. </response>")
            script_rows.append((case_id, response))

    with open(out_dir / ANSWERS_FILE, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id", "truth", "regex_match", "matrix_label", "llm_outcome"])
        for t in truths:
            writer.writerow([t.case_id, t.truth, int(t.regex_match), t.matrix_label, t.llm_outcome])

    with open(out_dir / LLM_SCRIPT_FILE, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id", "response_text"])
        writer.writerows(script_rows)

    with open(out_dir / PLANT_COUNTS_FILE, "w", encoding="utf-8") as fh:
        json.dump(plant_counts, fh, indent=1, sort_keys=True)

    return truths


def _write_case_xml(case: Case, path: Path) -> None:
    from .corpus import case_to_xml
    path.write_text(case_to_xml(case), encoding="utf-8")


def read_answers(corpus_dir: str | Path) -> list[CaseTruth]:
    truths: list[CaseTruth] = []
    with open(Path(corpus_dir) / ANSWERS_FILE, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            truths.append(CaseTruth(
                case_id=row["case_id"], truth=row["truth"],
                regex_match=bool(int(row["regex_match"])),
                matrix_label=row["matrix_label"], llm_outcome=row["llm_outcome"],
            ))
    return truths
