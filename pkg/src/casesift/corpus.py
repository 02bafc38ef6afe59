"""Case documents: XML parsing, dataset management, JSONL persistence.

A case document is a UTF-8 XML file with root ``<case>`` and children
``<court>``, ``<hearing_date>`` (optional), ``<citation>`` and ``<text>``.
Datasets keep their cases sorted by id so every downstream stage (filtering,
sampling, classification) is reproducible regardless of filesystem order.
"""

from __future__ import annotations

import csv
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from xml.sax.saxutils import escape

LABEL_SJ = "sj"
LABEL_NON_SJ = "non-sj"


class CaseParseError(ValueError):
    """Raised for XML that does not parse; names the byte offset of the fault."""

    def __init__(self, message: str, byte_offset: int | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset


class CaseSchemaError(ValueError):
    """Raised for well-formed XML missing a required element."""


class DatasetError(ValueError):
    """Raised for datasets violating their invariants (e.g. duplicate ids)."""


def count_words(text: str) -> int:
    """Number of maximal non-whitespace runs in *text*."""
    return len(text.split())


@dataclass(frozen=True)
class Case:
    """One court decision."""

    id: str
    court: str
    hearing_date: date | None
    text: str
    word_count: int

    @classmethod
    def build(cls, id: str, court: str, hearing_date: date | None, text: str) -> "Case":
        return cls(id=id, court=court, hearing_date=hearing_date, text=text,
                   word_count=count_words(text))


@dataclass(frozen=True)
class Dataset:
    """Named, id-sorted collection of cases with unique ids."""

    name: str
    cases: tuple[Case, ...]
    provenance: str = ""

    @classmethod
    def from_cases(cls, name: str, cases, provenance: str = "") -> "Dataset":
        ordered = tuple(sorted(cases, key=lambda c: c.id))
        seen: set[str] = set()
        for case in ordered:
            if case.id in seen:
                raise DatasetError(f"duplicate case id {case.id!r} in dataset {name!r}")
            seen.add(case.id)
        return cls(name=name, cases=ordered, provenance=provenance)

    def __len__(self) -> int:
        return len(self.cases)

    def __iter__(self):
        return iter(self.cases)

    def ids(self) -> list[str]:
        return [c.id for c in self.cases]

    def by_id(self) -> dict[str, Case]:
        return {c.id: c for c in self.cases}


_DAY_MONTH_YEAR = re.compile(r"^\s*(\d{1,2})\s+([A-Za-z]+)\s+(\d{4})\s*$")


def parse_hearing_date(value: str | None) -> date | None:
    """Parse ISO-8601 or "D Month YYYY" dates; anything else is absent."""
    if value is None:
        return None
    value = value.strip()
    if not value:
        return None
    try:
        return date.fromisoformat(value)
    except ValueError:
        pass
    if _DAY_MONTH_YEAR.match(value):
        try:
            return datetime.strptime(value, "%d %B %Y").date()
        except ValueError:
            return None
    return None


def _byte_offset(xml_text: str, line: int, column: int) -> int:
    lines = xml_text.splitlines(keepends=True)
    prefix = "".join(lines[: line - 1])
    col_text = lines[line - 1][:column] if line - 1 < len(lines) else ""
    return len(prefix.encode("utf-8")) + len(col_text.encode("utf-8"))


def parse_case_document(xml_text: str, fallback_id: str | None = None) -> Case:
    """Parse one ``<case>`` document into a Case.

    The id comes from ``<citation>``, or *fallback_id* (usually the file stem)
    when the element is absent. ``<text>`` is required; ``<hearing_date>`` is
    optional and silently absent when it does not parse as a date.
    """
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset(xml_text, line, column)
        raise CaseParseError(f"malformed XML at byte {offset}: {exc}", offset) from exc

    text_el = root.find("text")
    if text_el is None:
        raise CaseSchemaError("case document missing required <text> element")
    text = text_el.text or ""

    citation_el = root.find("citation")
    citation = (citation_el.text or "").strip() if citation_el is not None else ""
    case_id = citation or (fallback_id or "")
    if not case_id:
        raise CaseSchemaError("case document has no <citation> and no fallback id")

    court_el = root.find("court")
    court = (court_el.text or "").strip() if court_el is not None else ""

    date_el = root.find("hearing_date")
    hearing = parse_hearing_date(date_el.text if date_el is not None else None)

    return Case.build(id=case_id, court=court, hearing_date=hearing, text=text)


def case_to_xml(case: Case) -> str:
    """Serialize a Case back to the document format parse_case_document reads."""
    parts = ["<case>"]
    parts.append(f"  <court>{escape(case.court)}</court>")
    if case.hearing_date is not None:
        parts.append(f"  <hearing_date>{case.hearing_date.isoformat()}</hearing_date>")
    parts.append(f"  <citation>{escape(case.id)}</citation>")
    parts.append(f"  <text>{escape(case.text)}</text>")
    parts.append("</case>")
    return "\n".join(parts) + "\n"


def scan_corpus(path: str | Path, name: str | None = None) -> tuple[Dataset, list[tuple[str, str]]]:
    """Load every parseable .xml case under *path*.

    Returns the id-sorted dataset plus (filename, error) records for files
    that were skipped. Individual bad files are never fatal.
    """
    path = Path(path)
    if not path.exists():
        raise IOError(f"corpus path does not exist: {path}")
    files = sorted(path.rglob("*.xml")) if path.is_dir() else [path]
    cases: list[Case] = []
    skipped: list[tuple[str, str]] = []
    for file in files:
        try:
            raw = file.read_text(encoding="utf-8")
            cases.append(parse_case_document(raw, fallback_id=file.stem))
        except (CaseParseError, CaseSchemaError, UnicodeDecodeError, OSError) as exc:
            skipped.append((file.name, str(exc)))
    dataset = Dataset.from_cases(name or path.name, cases, provenance="ingest")
    return dataset, skipped


def write_skip_manifest(skipped: list[tuple[str, str]], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["filename", "error"])
        writer.writerows(skipped)


def load_corpus(path: str | Path, manifest_path: str | Path | None = None,
                name: str | None = None) -> Dataset:
    """scan_corpus plus an optional skip manifest written to *manifest_path*."""
    dataset, skipped = scan_corpus(path, name=name)
    if manifest_path is not None:
        write_skip_manifest(skipped, manifest_path)
    return dataset


@dataclass(frozen=True)
class DateFilterResult:
    """Partition of a dataset at a cutoff date.

    Cases lacking a hearing date are retained in *kept* and flagged in
    *undated_ids* so the pipeline manifest can report them.
    """

    kept: Dataset
    excluded: Dataset
    undated_ids: tuple[str, ...] = field(default=())


def filter_by_date(dataset: Dataset, cutoff: date) -> DateFilterResult:
    """Keep cases heard on or after *cutoff*; undated cases are kept and flagged."""
    kept: list[Case] = []
    excluded: list[Case] = []
    undated: list[str] = []
    for case in dataset:
        if case.hearing_date is None:
            kept.append(case)
            undated.append(case.id)
        elif case.hearing_date >= cutoff:
            kept.append(case)
        else:
            excluded.append(case)
    return DateFilterResult(
        kept=Dataset.from_cases(dataset.name, kept, provenance="date-filter"),
        excluded=Dataset.from_cases(dataset.name + "-excluded", excluded, provenance="date-filter"),
        undated_ids=tuple(undated),
    )


def save_jsonl(dataset: Dataset, path: str | Path) -> None:
    """One case per line: id, court, hearing_date (ISO or null), text, word_count."""
    with open(path, "w", encoding="utf-8") as fh:
        for case in dataset:
            fh.write(json.dumps({
                "id": case.id,
                "court": case.court,
                "hearing_date": case.hearing_date.isoformat() if case.hearing_date else None,
                "text": case.text,
                "word_count": case.word_count,
            }, ensure_ascii=False) + "\n")


def load_jsonl(path: str | Path, name: str | None = None, provenance: str = "") -> Dataset:
    path = Path(path)
    cases: list[Case] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            cases.append(Case(
                id=rec["id"],
                court=rec.get("court", ""),
                hearing_date=parse_hearing_date(rec.get("hearing_date")),
                text=rec.get("text", ""),
                word_count=int(rec.get("word_count", count_words(rec.get("text", "")))),
            ))
    return Dataset.from_cases(name or path.stem, cases, provenance=provenance)
