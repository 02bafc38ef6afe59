"""Config-driven boolean search matrix splitting cases into SJ and non-SJ.

A rule config declares named phrase sets (``[set name]`` sections) and rules
(``[include <id>]`` / ``[exclude <id>]`` sections holding one boolean
expression). Expression grammar:

    expr    := term (("AND" | "OR") term)*   # no mixing without parentheses
    term    := set_name | "quoted phrase" | "(" expr ")"

A set name expands to OR over its phrases. Phrase tests use the same
lowercase substring semantics as the keyword scanner. A case is labelled SJ
exactly when at least one inclusion rule fires and no exclusion rule does:
exclusions veto globally.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .cfgfile import ConfigError, read_sections
from .corpus import LABEL_NON_SJ, LABEL_SJ, Case, Dataset


@dataclass(frozen=True)
class Phrase:
    text: str

    def evaluate(self, lower_text: str) -> bool:
        return self.text in lower_text

    def phrases(self) -> list[str]:
        return [self.text]


@dataclass(frozen=True)
class And:
    operands: tuple

    def evaluate(self, lower_text: str) -> bool:
        return all(op.evaluate(lower_text) for op in self.operands)

    def phrases(self) -> list[str]:
        return [p for op in self.operands for p in op.phrases()]


@dataclass(frozen=True)
class Or:
    operands: tuple

    def evaluate(self, lower_text: str) -> bool:
        return any(op.evaluate(lower_text) for op in self.operands)

    def phrases(self) -> list[str]:
        return [p for op in self.operands for p in op.phrases()]


@dataclass(frozen=True)
class Rule:
    rule_id: str
    expression: Phrase | And | Or

    def fires(self, lower_text: str) -> bool:
        return self.expression.evaluate(lower_text)


@dataclass(frozen=True)
class RuleSet:
    inclusion_rules: tuple[Rule, ...]
    exclusion_rules: tuple[Rule, ...]


@dataclass(frozen=True)
class MatrixDecision:
    case_id: str
    label: str
    fired_inclusions: tuple[str, ...]
    fired_exclusions: tuple[str, ...]


_TOKEN = re.compile(r'\s*(?:(?P<quote>"[^"]*")|(?P<lparen>\()|(?P<rparen>\))|(?P<word>[^\s()"]+))')


def _tokenize(source: str, where: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(source):
        match = _TOKEN.match(source, pos)
        if match is None or match.end() == pos:
            remainder = source[pos:].strip()
            if not remainder:
                break
            raise ConfigError(f"{where}: cannot tokenize near {remainder[:30]!r}")
        pos = match.end()
        if match.group("quote") is not None:
            tokens.append(("phrase", match.group("quote")[1:-1].strip().lower()))
        elif match.group("lparen"):
            tokens.append(("lparen", "("))
        elif match.group("rparen"):
            tokens.append(("rparen", ")"))
        else:
            word = match.group("word")
            if word.upper() in ("AND", "OR"):
                tokens.append(("op", word.upper()))
            else:
                tokens.append(("name", word))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], sets: dict[str, tuple[str, ...]], where: str):
        self.tokens = tokens
        self.sets = sets
        self.where = where
        self.pos = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str]:
        token = self.peek()
        if token is None:
            raise ConfigError(f"{self.where}: unexpected end of expression")
        self.pos += 1
        return token

    def parse(self):
        expr = self.expression()
        if self.peek() is not None:
            kind, value = self.peek()
            raise ConfigError(f"{self.where}: trailing {value!r} after expression")
        return expr

    def expression(self):
        operands = [self.term()]
        operator: str | None = None
        while self.peek() is not None and self.peek()[0] == "op":
            _, op = self.next()
            if operator is None:
                operator = op
            elif op != operator:
                raise ConfigError(
                    f"{self.where}: mixed AND/OR without parentheses")
            operands.append(self.term())
        if len(operands) == 1:
            return operands[0]
        node = And if operator == "AND" else Or
        return node(operands=tuple(operands))

    def term(self):
        kind, value = self.next()
        if kind == "phrase":
            if not value:
                raise ConfigError(f"{self.where}: empty phrase literal")
            return Phrase(value)
        if kind == "name":
            if value not in self.sets:
                raise ConfigError(f"{self.where}: unknown set or operator {value!r}")
            phrases = self.sets[value]
            if len(phrases) == 1:
                return Phrase(phrases[0])
            return Or(operands=tuple(Phrase(p) for p in phrases))
        if kind == "lparen":
            inner = self.expression()
            closing = self.next()
            if closing[0] != "rparen":
                raise ConfigError(f"{self.where}: expected ')', got {closing[1]!r}")
            return inner
        raise ConfigError(f"{self.where}: unexpected {value!r}")


def load_ruleset(config_path: str | Path) -> RuleSet:
    """Parse a rule config into expression trees."""
    config_path = Path(config_path)
    sets: dict[str, tuple[str, ...]] = {}
    inclusions: list[Rule] = []
    exclusions: list[Rule] = []
    for header, lines, lineno in read_sections(config_path):
        where = f"{config_path}:{lineno}"
        parts = header.split(None, 1)
        kind = parts[0].lower()
        if kind == "set":
            if len(parts) != 2:
                raise ConfigError(f"{where}: [set] needs a name")
            name = parts[1].strip()
            phrases = tuple(line.strip().lower() for line in lines)
            if not phrases or any(not p for p in phrases):
                raise ConfigError(f"{where}: set {name!r} has an empty phrase")
            if name in sets:
                raise ConfigError(f"{where}: duplicate set {name!r}")
            sets[name] = phrases
        elif kind in ("include", "exclude"):
            if len(parts) != 2:
                raise ConfigError(f"{where}: [{kind}] needs a rule id")
            rule_id = parts[1].strip()
            source = " ".join(lines)
            if not source.strip():
                raise ConfigError(f"{where}: rule {rule_id!r} has no expression")
            expr = _Parser(_tokenize(source, where), sets, where).parse()
            rule = Rule(rule_id=rule_id, expression=expr)
            (inclusions if kind == "include" else exclusions).append(rule)
        else:
            raise ConfigError(f"{where}: unknown section kind {kind!r}")
    if not inclusions:
        raise ConfigError(f"{config_path}: no inclusion rules defined")
    return RuleSet(inclusion_rules=tuple(inclusions), exclusion_rules=tuple(exclusions))


def default_ruleset() -> RuleSet:
    with resources.as_file(resources.files("casesift.data") / "appendix1.cfg") as path:
        return load_ruleset(path)


def default_ruleset_path() -> Path:
    return Path(str(resources.files("casesift.data") / "appendix1.cfg"))


def evaluate(case_text: str, ruleset: RuleSet, case_id: str = "") -> MatrixDecision:
    """Label one text: SJ iff any inclusion fires and no exclusion does."""
    lower = case_text.lower()
    fired_inc = tuple(r.rule_id for r in ruleset.inclusion_rules if r.fires(lower))
    fired_exc = tuple(r.rule_id for r in ruleset.exclusion_rules if r.fires(lower))
    label = LABEL_SJ if fired_inc and not fired_exc else LABEL_NON_SJ
    return MatrixDecision(case_id=case_id, label=label,
                          fired_inclusions=fired_inc, fired_exclusions=fired_exc)


def classify_dataset(dataset: Dataset, ruleset: RuleSet
                     ) -> tuple[Dataset, Dataset, list[MatrixDecision]]:
    """Disjoint partition of *dataset* into (matched, unmatched) plus decisions."""
    decisions = [evaluate(case.text, ruleset, case_id=case.id) for case in dataset]
    by_label: dict[str, list[Case]] = {LABEL_SJ: [], LABEL_NON_SJ: []}
    for case, decision in zip(dataset, decisions):
        by_label[decision.label].append(case)
    ksjd = Dataset.from_cases("ksjd", by_label[LABEL_SJ], provenance="matrix-sj")
    knsjd = Dataset.from_cases("knsjd", by_label[LABEL_NON_SJ], provenance="matrix-non-sj")
    return ksjd, knsjd, decisions


def write_decisions_csv(decisions: list[MatrixDecision], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case_id", "label", "fired_inclusions", "fired_exclusions"])
        for d in decisions:
            writer.writerow([d.case_id, d.label,
                             ";".join(d.fired_inclusions), ";".join(d.fired_exclusions)])


def read_decisions_csv(path: str | Path) -> list[MatrixDecision]:
    decisions: list[MatrixDecision] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            decisions.append(MatrixDecision(
                case_id=row["case_id"],
                label=row["label"],
                fired_inclusions=tuple(x for x in row["fired_inclusions"].split(";") if x),
                fired_exclusions=tuple(x for x in row["fired_exclusions"].split(";") if x),
            ))
    return decisions
