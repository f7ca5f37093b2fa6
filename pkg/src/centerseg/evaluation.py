"""Scoring resolutions against gold antecedents and corpus statistics.

Outcome classes:

* ``CORRECT``: right entity, found in the gold (linearly most recent) utterance;
* ``FALSE_POSITIVE``: right entity, found at a hierarchically more recent
  but linearly older mention;
* ``ERROR``: unresolved or wrong entity;
* ``INTRA_UTTERANCE``: gold antecedent lies in the same utterance.

Locus histograms count correct and false-positive outcomes together (the
false positives are additionally reported on their own, in parentheses), so
``sum(locus_hist) + errors`` equals the number of gold-annotated expressions.
"""

from __future__ import annotations

import enum
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional, Sequence

from centerseg.corpus import Document, Expression, Gold
from centerseg.resolver import Clause, ResolutionResult
from centerseg.segmenter import AnalysisTrace

logger = logging.getLogger(__name__)

KINDS = ("anaphors", "ellipses")

DISTANCE_BUCKETS = ("U_i", "U_i-1", "U_i-2", "U_i-3", "U_i-4", "U_i-5",
                    "U_i-6..10", "U_i-11..15", "U_i-16..20", "U_i-21+")


class OutcomeValue(enum.Enum):
    CORRECT = "correct"
    ERROR = "error"
    FALSE_POSITIVE = "false-positive"
    INTRA_UTTERANCE = "intra-utterance"


@dataclass(frozen=True)
class Outcome:
    value: OutcomeValue
    result: ResolutionResult

    @property
    def locus(self):
        return self.result.locus


def kind_group(x_kind) -> str:
    return "anaphors" if x_kind.is_anaphor else "ellipses"


def classify_outcome(result: ResolutionResult, gold: Optional[Gold]) -> Optional[Outcome]:
    """Classify one resolution; returns None (and logs) when there is no gold annotation."""
    if gold is None:
        logger.info("no gold antecedent for %s, skipped", result.expression)
        return None
    if gold.utterance == result.utterance:
        value = OutcomeValue.INTRA_UTTERANCE
    elif result.entity is None or result.entity != gold.entity:
        value = OutcomeValue.ERROR
    elif result.locus.utterance == gold.utterance:
        value = OutcomeValue.CORRECT
    else:
        value = OutcomeValue.FALSE_POSITIVE
    return Outcome(value, result)


def distance_bucket(distance: int) -> str:
    if distance < 0:
        raise ValueError(f"negative antecedent distance {distance}")
    if distance == 0:
        return "U_i"
    if distance <= 5:
        return f"U_i-{distance}"
    if distance <= 10:
        return "U_i-6..10"
    if distance <= 15:
        return "U_i-11..15"
    if distance <= 20:
        return "U_i-16..20"
    return "U_i-21+"


def _empty_hist(keys: Sequence[str]) -> dict[str, int]:
    return {k: 0 for k in keys}


def _gold_expressions(doc: Document) -> Iterable[tuple[int, Expression]]:
    for u in doc.utterances:
        for x in u.expressions:
            if x.kind.is_anaphoric and x.gold is not None:
                yield u.index, x


def distance_histogram(doc: Document) -> dict[str, dict[str, int]]:
    """Linear distance from each gold-annotated expression to its antecedent."""
    hist = {k: _empty_hist(DISTANCE_BUCKETS) for k in KINDS}
    for i, x in _gold_expressions(doc):
        hist[kind_group(x.kind)][distance_bucket(i - x.gold.utterance)] += 1
    return hist


def locus_category(result: ResolutionResult) -> str:
    loc = result.locus
    if loc.clause is Clause.INTRA_UTTERANCE:
        return "U_i"
    if loc.clause is Clause.PREV_CF:
        return "Cf(s,U_i-1)"
    if loc.clause is Clause.SEG_END_CF:
        return "Cp(s-1,U_DS[s-1.end])" if loc.rank == 1 else "Cf(s-1,U_DS[s-1.end])"
    if loc.clause is Clause.SEG_END_CP:
        k = result.search_level - loc.level
        return f"Cp(s-{k},U_DS[s-{k}.end])"
    raise ValueError(f"unresolved result has no locus category: {result.expression}")


_FIXED_LOCI = ("U_i", "Cf(s,U_i-1)", "Cp(s-1,U_DS[s-1.end])", "Cf(s-1,U_DS[s-1.end])")


def _locus_order(key: str) -> tuple:
    if key in _FIXED_LOCI:
        return (_FIXED_LOCI.index(key), 0)
    return (len(_FIXED_LOCI), int(key.split("-")[1].split(",")[0]))


def locus_histogram(outcomes: Iterable[Outcome]) -> dict[str, dict[str, int]]:
    hist: dict[str, Counter] = {k: Counter(dict.fromkeys(_FIXED_LOCI, 0)) for k in KINDS}
    for o in outcomes:
        if o.value is OutcomeValue.ERROR:
            continue
        hist[kind_group(o.result.kind)][locus_category(o.result)] += 1
    return {k: {key: h[key] for key in sorted(h, key=_locus_order)} for k, h in hist.items()}


def evaluate_trace(trace: AnalysisTrace) -> list[Outcome]:
    golds = {x.id: x.gold for u in trace.document.utterances for x in u.expressions}
    outcomes = []
    for st in trace.steps:
        for r in st.resolutions:
            o = classify_outcome(r, golds.get(r.expression))
            if o is not None:
                outcomes.append(o)
    return outcomes


def _add_nested(a: dict, b: dict) -> dict:
    out = {}
    for k in list(a) + [k for k in b if k not in a]:
        va, vb = a.get(k), b.get(k)
        if isinstance(va, dict) or isinstance(vb, dict):
            out[k] = _add_nested(va or {}, vb or {})
        else:
            out[k] = (va or 0) + (vb or 0)
    return out


@dataclass
class StatsReport:
    counts: dict[str, int] = field(default_factory=lambda: _empty_hist(
        ("anaphors", "ellipses", "utterances", "words", "documents")))
    distance_hist: dict[str, dict[str, int]] = field(default_factory=lambda: {
        k: _empty_hist(DISTANCE_BUCKETS) for k in KINDS})
    locus_hist: dict[str, dict[str, int]] = field(default_factory=lambda: {
        k: _empty_hist(_FIXED_LOCI) for k in KINDS})
    errors: dict[str, int] = field(default_factory=lambda: _empty_hist(KINDS))
    false_positives: dict[str, int] = field(default_factory=lambda: _empty_hist(KINDS))
    gold: dict[str, int] = field(default_factory=lambda: _empty_hist(KINDS))
    outcomes: dict[str, int] = field(default_factory=lambda: _empty_hist(
        [v.value for v in OutcomeValue]))
    max_depth: int = 0

    def __add__(self, other: "StatsReport") -> "StatsReport":
        merged = StatsReport(
            counts=_add_nested(self.counts, other.counts),
            distance_hist=_add_nested(self.distance_hist, other.distance_hist),
            locus_hist=_add_nested(self.locus_hist, other.locus_hist),
            errors=_add_nested(self.errors, other.errors),
            false_positives=_add_nested(self.false_positives, other.false_positives),
            gold=_add_nested(self.gold, other.gold),
            outcomes=_add_nested(self.outcomes, other.outcomes),
            max_depth=max(self.max_depth, other.max_depth),
        )
        for k in KINDS:
            merged.locus_hist[k] = {key: merged.locus_hist[k][key]
                                    for key in sorted(merged.locus_hist[k], key=_locus_order)}
        return merged

    @property
    def has_gold(self) -> bool:
        return sum(self.gold.values()) > 0

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "distance": self.distance_hist,
            "locus": self.locus_hist,
            "errors": self.errors,
            "false_positives": self.false_positives,
            "gold_annotated": self.gold,
            "outcomes": self.outcomes,
            "max_depth": self.max_depth,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def document_report(doc: Document, trace: AnalysisTrace) -> StatsReport:
    rep = StatsReport()
    for u in doc.utterances:
        for x in u.expressions:
            if x.kind.is_anaphoric:
                rep.counts[kind_group(x.kind)] += 1
    rep.counts["utterances"] = len(doc.utterances)
    rep.counts["words"] = sum(u.word_count for u in doc.utterances)
    rep.counts["documents"] = 1
    rep.distance_hist = distance_histogram(doc)
    outcomes = evaluate_trace(trace)
    rep.locus_hist = locus_histogram(outcomes)
    for o in outcomes:
        group = kind_group(o.result.kind)
        rep.gold[group] += 1
        rep.outcomes[o.value.value] += 1
        if o.value is OutcomeValue.ERROR:
            rep.errors[group] += 1
        elif o.value is OutcomeValue.FALSE_POSITIVE:
            rep.false_positives[group] += 1
    rep.max_depth = max(trace.max_depth, trace.registry.max_level())
    return rep


def summarize(docs: Sequence[Document], traces: Sequence[AnalysisTrace]) -> StatsReport:
    if len(docs) != len(traces):
        raise ValueError("one trace per document expected")
    return reduce(lambda a, b: a + b, (document_report(d, t) for d, t in zip(docs, traces)),
                  StatsReport())


# -- plain-text tables ---------------------------------------------------------

_TITLES = {"anaphors": "Anaphoric", "ellipses": "Elliptical"}

def _table(title: str, rows: list[tuple[str, str]]) -> list[str]:
    width = max([len(r[0]) for r in rows] + [len(title)])
    vwidth = max([len(r[1]) for r in rows] + [1])
    lines = [title, "-" * (width + vwidth + 3)]
    lines += [f"{label:<{width}}   {value:>{vwidth}}" for label, value in rows]
    return lines


def format_report(rep: StatsReport) -> str:
    out: list[str] = []
    out += _table("Test set", [(k, str(rep.counts[k]))
                               for k in ("anaphors", "ellipses", "utterances", "words")])
    out.append("")
    for kind in KINDS:
        name = _TITLES[kind]
        out += _table(f"{name} antecedent in utterance U_x",
                      [(b, str(n)) for b, n in rep.distance_hist[kind].items()])
        out.append("")
        if rep.has_gold:
            rows = [(b, str(n)) for b, n in rep.locus_hist[kind].items()]
            rows.append(("errors", str(rep.errors[kind])))
            rows.append(("false positives", f"({rep.false_positives[kind]})"))
        else:
            rows = [("errors", "n/a"), ("false positives", "n/a")]
        out += _table(f"{name} antecedent in center_x", rows)
        out.append("")
    out.append(f"maximum segment depth: {rep.max_depth}")
    return "\n".join(out) + "\n"
