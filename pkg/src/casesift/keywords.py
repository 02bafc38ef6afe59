"""Keyword catalog scanning: per-case counts, totals, isolation, co-occurrence, Venn regions.

Matching is literal lowercase substring containment with no token boundaries,
so "cpr 24" also fires inside "cpr 24.2" and "no real prospect" inside
"no real prospect of success" — the catalog deliberately lists such nested
variants separately. Occurrences are counted at every start offset (the scan
advances one character past each hit, so overlapping hits all count).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cfgfile import ConfigError, read_sections
from .corpus import Case, Dataset


@dataclass(frozen=True)
class KeywordCatalog:
    """Ordered categories of lowercase keyword variants."""

    categories: tuple[tuple[str, tuple[str, ...]], ...]

    def variants(self) -> list[str]:
        """All variants in catalog order."""
        return [v for _, vs in self.categories for v in vs]

    def category_names(self) -> list[str]:
        return [name for name, _ in self.categories]

    def variants_of(self, category: str) -> tuple[str, ...]:
        for name, vs in self.categories:
            if name == category:
                return vs
        raise KeyError(category)


@dataclass(frozen=True)
class MatchProfile:
    """Per-variant occurrence counts for one case."""

    case_id: str
    counts: Mapping[str, int]

    def present(self, variant: str) -> bool:
        return self.counts.get(variant, 0) >= 1

    def present_variants(self) -> set[str]:
        return {v for v, n in self.counts.items() if n >= 1}


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """Symmetric case-level joint-presence counts; diagonal holds per-variant case counts."""

    labels: tuple[str, ...]
    cells: np.ndarray

    def cell(self, a: str, b: str) -> int:
        i, j = self.labels.index(a), self.labels.index(b)
        return int(self.cells[i, j])

    def diagonal(self, variant: str) -> int:
        return self.cell(variant, variant)


def build_catalog(categories: Iterable[tuple[str, Iterable[str]]]) -> KeywordCatalog:
    """Validate and lowercase-normalize a category -> variants mapping."""
    seen: set[str] = set()
    out: list[tuple[str, tuple[str, ...]]] = []
    for name, variants in categories:
        normalized = tuple(v.strip().lower() for v in variants)
        if not normalized:
            raise ConfigError(f"category {name!r} has no variants")
        for v in normalized:
            if not v:
                raise ConfigError(f"category {name!r} contains an empty variant")
            if v in seen:
                raise ConfigError(f"duplicate variant {v!r} in catalog")
            seen.add(v)
        out.append((name.strip().lower(), normalized))
    return KeywordCatalog(categories=tuple(out))


def load_catalog(config_path: str | Path) -> KeywordCatalog:
    """Load a catalog config file (sections are categories, lines are variants)."""
    return build_catalog((name, lines) for name, lines, _ in read_sections(config_path))


def default_catalog() -> KeywordCatalog:
    with resources.as_file(resources.files("casesift.data") / "table1.cfg") as path:
        return load_catalog(path)


def default_catalog_path() -> Path:
    return Path(str(resources.files("casesift.data") / "table1.cfg"))


def count_occurrences(haystack_lower: str, needle_lower: str) -> int:
    """Occurrences of needle in haystack counting every start offset."""
    count = 0
    start = 0
    while True:
        idx = haystack_lower.find(needle_lower, start)
        if idx < 0:
            return count
        count += 1
        start = idx + 1


def scan_text(text: str, catalog: KeywordCatalog) -> dict[str, int]:
    lower = text.lower()
    return {v: count_occurrences(lower, v) for v in catalog.variants()}


def scan_case(case: Case, catalog: KeywordCatalog) -> MatchProfile:
    """Occurrence counts for every catalog variant in one case."""
    return MatchProfile(case_id=case.id, counts=scan_text(case.text, catalog))


def scan_dataset(dataset: Dataset, catalog: KeywordCatalog) -> list[MatchProfile]:
    return [scan_case(case, catalog) for case in dataset]


def find_spans(text: str, catalog: KeywordCatalog) -> list[dict]:
    """Start/end character offsets of every variant occurrence, for highlighting."""
    lower = text.lower()
    spans: list[dict] = []
    for variant in catalog.variants():
        start = 0
        while True:
            idx = lower.find(variant, start)
            if idx < 0:
                break
            spans.append({"start": idx, "end": idx + len(variant), "variant": variant})
            start = idx + 1
    spans.sort(key=lambda s: (s["start"], s["end"]))
    return spans


def total_counts(profiles: Sequence[MatchProfile], catalog: KeywordCatalog) -> dict[str, int]:
    """Summed occurrence counts per variant, ordered by descending count then catalog order."""
    order = catalog.variants()
    totals = {v: 0 for v in order}
    for profile in profiles:
        for v, n in profile.counts.items():
            totals[v] += n
    rank = {v: i for i, v in enumerate(order)}
    return dict(sorted(totals.items(), key=lambda kv: (-kv[1], rank[kv[0]])))


def isolation_counts(profiles: Sequence[MatchProfile], catalog: KeywordCatalog) -> dict[str, int]:
    """Cases where a variant is present and no other catalog variant is."""
    out = {v: 0 for v in catalog.variants()}
    for profile in profiles:
        present = profile.present_variants()
        if len(present) == 1:
            out[next(iter(present))] += 1
    return out


def cooccurrence(profiles: Sequence[MatchProfile], catalog: KeywordCatalog) -> CooccurrenceMatrix:
    """Joint case-level presence matrix; repeated co-occurrence inside one case counts once."""
    labels = tuple(catalog.variants())
    presence = np.zeros((len(profiles), len(labels)), dtype=np.int64)
    for row, profile in enumerate(profiles):
        for col, variant in enumerate(labels):
            if profile.counts.get(variant, 0) >= 1:
                presence[row, col] = 1
    cells = presence.T @ presence
    return CooccurrenceMatrix(labels=labels, cells=cells)


def _key_presence(profile: MatchProfile, key: str, catalog: KeywordCatalog) -> bool:
    # A key naming both a variant and a category resolves as the variant.
    if key in profile.counts:
        return profile.counts[key] >= 1
    return any(profile.present(v) for v in catalog.variants_of(key))


def venn_counts(profiles: Sequence[MatchProfile], keys: Sequence[str],
                catalog: KeywordCatalog) -> dict[str, int]:
    """Exclusive region counts for 2 or 3 keys (variants or categories).

    Region names join the member keys with " & "; the cases matching no key
    land under "outside". Region counts plus outside sum to the profile count.
    """
    keys = [k.strip().lower() for k in keys]
    if not 2 <= len(keys) <= 3:
        raise ValueError("venn_counts takes exactly 2 or 3 keys")
    if len(set(keys)) != len(keys):
        raise ValueError("venn keys must be distinct")
    known = set(catalog.variants()) | set(catalog.category_names())
    for key in keys:
        if key not in known:
            raise ValueError(f"unknown venn key {key!r} (not a variant or category)")

    regions: dict[str, int] = {}
    for mask in range(1, 2 ** len(keys)):
        members = [keys[i] for i in range(len(keys)) if mask & (1 << i)]
        regions[" & ".join(members)] = 0
    outside = 0
    for profile in profiles:
        mask = 0
        for i, key in enumerate(keys):
            if _key_presence(profile, key, catalog):
                mask |= 1 << i
        if mask == 0:
            outside += 1
        else:
            members = [keys[i] for i in range(len(keys)) if mask & (1 << i)]
            regions[" & ".join(members)] += 1
    regions["outside"] = outside
    return regions
