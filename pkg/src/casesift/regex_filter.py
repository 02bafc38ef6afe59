"""Stage-1 filter: keep every case that mentions a summary-judgment-like term.

The default pattern finds a word starting with "summ" followed (possibly with
no whitespace at all, since ``\\s*`` admits the empty string) by a word
starting with "judg", so "summary judgment", "summary judgements" and
"summarily judged" all match while "judgment summary" does not. The whole
match is case-insensitive, which also lifts the ``[a-z]`` classes to A-Z.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .corpus import Dataset

DEFAULT_PATTERN = r"\bsumm[a-z]*\s*judg[a-z]*"


@dataclass(frozen=True)
class RootPattern:
    pattern_source: str = DEFAULT_PATTERN
    case_insensitive: bool = True

    def compiled(self) -> re.Pattern[str]:
        return _compile(self.pattern_source, self.case_insensitive)


@lru_cache(maxsize=16)
def _compile(source: str, case_insensitive: bool) -> re.Pattern[str]:
    return re.compile(source, re.IGNORECASE if case_insensitive else 0)


def matches_root(text: str, pattern: RootPattern | None = None) -> bool:
    """True iff the pattern occurs anywhere in *text*."""
    pattern = pattern or RootPattern()
    return pattern.compiled().search(text) is not None


def regex_filter(dataset: Dataset, pattern: RootPattern | None = None) -> Dataset:
    """Subset of *dataset* whose case text matches the root pattern."""
    pattern = pattern or RootPattern()
    compiled = pattern.compiled()
    kept = [case for case in dataset if compiled.search(case.text) is not None]
    return Dataset.from_cases(dataset.name, kept, provenance="regex-sj")
