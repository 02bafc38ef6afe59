from __future__ import annotations

import pytest

from casesift import generator
from casesift.corpus import Case, Dataset
from casesift.regex_filter import DEFAULT_PATTERN, RootPattern, matches_root, regex_filter

# Hand-evaluated fixture: (text, should_match). The pattern wants a word
# starting "summ", then optional whitespace, then "judg..." directly after.
FIXTURE = [
    ("summary judgment", True),
    ("summary judgement", True),
    ("summary judgments", True),
    ("summary judgements", True),
    ("SUMMARY JUDGEMENTS were entered", True),
    ("Summary Judgment was granted", True),
    ("summarily judged", True),
    ("summjudg", True),                       # \s* admits zero whitespace
    ("summary\njudgment", True),              # \s matches newlines
    ("summary  judgment with double space", True),
    ("an application for summary judgment.", True),
    ("summ judgment", True),
    ("the judgment summary was read", False),  # judg before summ
    ("judgment summarily entered", False),
    ("a summary of the judgment", False),      # intervening word
    ("summing up before the jury", False),
    ("judgement only", False),
    ("summary only", False),
    ("sum judgment", False),                   # "sum" lacks the second m
    ("", False),
]


class TestMatchesRoot:
    def test_default_pattern_source(self):
        assert RootPattern().pattern_source == DEFAULT_PATTERN == r"\bsumm[a-z]*\s*judg[a-z]*"

    @pytest.mark.parametrize("text,expected", FIXTURE)
    def test_fixture(self, text, expected):
        assert matches_root(text) is expected

    def test_case_sensitivity_flag(self):
        sensitive = RootPattern(case_insensitive=False)
        assert matches_root("SUMMARY JUDGMENT", sensitive) is False
        assert matches_root("summary judgment", sensitive) is True


def _dataset(texts: dict[str, str]) -> Dataset:
    return Dataset.from_cases(
        "d", [Case.build(cid, "court", None, text) for cid, text in texts.items()])


class TestRegexFilter:
    def test_zero_mentions_gives_empty(self):
        ds = _dataset({"a": "nothing relevant here", "b": "plain contract claim"})
        assert len(regex_filter(ds)) == 0

    def test_provenance_and_subset(self):
        ds = _dataset({"a": "summary judgment", "b": "other", "c": "summarily judged"})
        out = regex_filter(ds)
        assert out.provenance == "regex-sj"
        assert out.ids() == ["a", "c"]
        assert set(out.ids()) <= set(ds.ids())

    def test_idempotent(self):
        ds = _dataset({"a": "summary judgment", "b": "other"})
        once = regex_filter(ds)
        twice = regex_filter(once)
        assert once.ids() == twice.ids()

    def test_every_retained_case_matches(self):
        ds = _dataset({f"c{i}": text for i, (text, _) in enumerate(FIXTURE)})
        out = regex_filter(ds)
        for case in out:
            assert matches_root(case.text)

    def test_planted_mentions_selected_exactly(self, tmp_path):
        spec = generator.CorpusSpec(n_sj=6, n_non_sj=8, n_distractor=3, seed=21)
        generator.generate_synthetic_corpus(spec, tmp_path)
        from casesift.corpus import scan_corpus
        ds, _ = scan_corpus(tmp_path)
        expected = {t.case_id for t in generator.read_answers(tmp_path) if t.regex_match}
        assert set(regex_filter(ds).ids()) == expected
