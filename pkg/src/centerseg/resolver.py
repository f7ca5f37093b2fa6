"""Anaphora resolution against the reachability constraints of the segment registry.

Search order for an expression in ``U_i`` analyzed at level ``s``:

1. ``Cf(s, U_{i-1})`` in rank order;
2. ``Cf(s-1, U_{DS[s-1.end]})`` in rank order;
3. ``Cp(v, U_{DS[v.end]})`` for open levels ``v < s-1``, highest ``v`` first,
   matching only directly realized (non-mediated) preferred centers.

Closed and absorbed segments are never consulted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Optional

from centerseg.corpus import Expression, ExpressionKind, Utterance
from centerseg.registry import SegmentRegistry, reachable_snapshot


class Clause(enum.Enum):
    PREV_CF = "prev-cf"
    SEG_END_CF = "seg-end-cf"
    SEG_END_CP = "seg-end-cp"
    INTRA_UTTERANCE = "intra-utterance"
    UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class Locus:
    clause: Clause
    level: Optional[int] = None
    utterance: Optional[int] = None
    rank: Optional[int] = None

    def to_dict(self) -> dict:
        return {"clause": self.clause.value, "level": self.level,
                "utterance": self.utterance, "rank": self.rank}


UNREACHABLE = Locus(Clause.UNREACHABLE)


@dataclass(frozen=True)
class ResolutionResult:
    expression: str
    utterance: int
    kind: ExpressionKind
    entity: Optional[str]
    locus: Locus
    # level the search started from (s of the pre-step registry)
    search_level: int

    @property
    def resolved(self) -> bool:
        return self.entity is not None

    def to_dict(self) -> dict:
        return {"expression": self.expression, "utterance": self.utterance,
                "kind": self.kind.value, "entity": self.entity,
                "locus": self.locus.to_dict(), "search_level": self.search_level}


@dataclass(frozen=True)
class ResolutionSet:
    """Antecedent entities of one utterance plus the per-expression results."""

    best_locus: dict[str, Locus] = field(default_factory=dict)
    results: tuple[ResolutionResult, ...] = ()

    @property
    def entities(self) -> frozenset[str]:
        return frozenset(self.best_locus)

    def __contains__(self, entity: str) -> bool:
        return entity in self.best_locus

    def __len__(self) -> int:
        return len(self.best_locus)


def is_anaphor_for(x: Expression, ante: str) -> bool:
    # agreement, binding and sortal checks are folded into the annotated candidate set
    return ante in x.candidates


def _candidate_loci(state: SegmentRegistry, s: int, i: int) -> Iterator[tuple[Locus, str]]:
    snap = reachable_snapshot(state, s, i)
    if snap.prev is not None:
        for rank, entry in enumerate(snap.prev.cf, start=1):
            yield Locus(Clause.PREV_CF, s, i - 1, rank), entry.entity
    if snap.seg_end is not None:
        for rank, entry in enumerate(snap.seg_end.cf, start=1):
            yield Locus(Clause.SEG_END_CF, s - 1, snap.seg_end.utterance, rank), entry.entity
    for v, end, cp in snap.cp_chain:
        if cp.direct:
            yield Locus(Clause.SEG_END_CP, v, end, 1), cp.entity


def is_reachable(state: SegmentRegistry, ante: str, s: int, i: int) -> Locus:
    for locus, entity in _candidate_loci(state, s, i):
        if entity == ante:
            return locus
    return UNREACHABLE


def resolve(state: SegmentRegistry, x: Expression, s: int, i: int) -> ResolutionResult:
    if not x.kind.is_anaphoric:
        raise ValueError(f"expression {x.id!r} is not anaphoric")
    for locus, entity in _candidate_loci(state, s, i):
        if is_anaphor_for(x, entity):
            return ResolutionResult(x.id, i, x.kind, entity, locus, s)
    return ResolutionResult(x.id, i, x.kind, None, UNREACHABLE, s)


_PRECEDENCE = {Clause.PREV_CF: 0, Clause.SEG_END_CF: 1, Clause.SEG_END_CP: 2}


def _locus_key(locus: Locus) -> tuple:
    return (_PRECEDENCE[locus.clause], -(locus.level or 0), locus.rank or 0)


def resolved_set(state: SegmentRegistry, u: Utterance) -> ResolutionSet:
    """Resolve every anaphoric expression of ``u`` against the pre-step registry.

    Expressions whose gold antecedent lies in ``u`` itself are not searched;
    they are reported with an intra-utterance locus and do not enter the
    antecedent set that drives segmentation.
    """
    s, i = state.current_level, u.index
    best: dict[str, Locus] = {}
    results = []
    for x in u.expressions:
        if not x.kind.is_anaphoric:
            continue
        if x.gold is not None and x.gold.utterance == i:
            results.append(ResolutionResult(x.id, i, x.kind, x.gold.entity,
                                            Locus(Clause.INTRA_UTTERANCE, s, i), s))
            continue
        res = resolve(state, x, s, i)
        results.append(res)
        if res.entity is None:
            continue
        known = best.get(res.entity)
        if known is None or _locus_key(res.locus) < _locus_key(known):
            best[res.entity] = res.locus
    return ResolutionSet(best, tuple(results))
