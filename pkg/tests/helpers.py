"""Shared test machinery: document builders, random corpora, brute-force oracles."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from centerseg.corpus import (CfEntry, Document, Entity, Expression, ExpressionKind, Gold,
                              Utterance)
from centerseg.registry import SegmentRegistry, SegmentStatus
from centerseg.resolver import Clause, Locus, UNREACHABLE, resolved_set
from centerseg.segmenter import StepRecord, initialize, step

SAMPLE_PATH = Path(__file__).resolve().parents[1] / "src" / "centerseg" / "data" / "sample_hl1260.json"


def cf(*items) -> tuple[CfEntry, ...]:
    """``cf("a", "~b")``: a leading ``~`` marks a mediated entry."""
    out = []
    for it in items:
        mediated = it.startswith("~")
        ent = it.lstrip("~")
        out.append(CfEntry(ent, "" if mediated else ent, mediated))
    return tuple(out)


def ana(xid: str, *cands: str, kind: str = "nominal", gold: Optional[tuple[str, int]] = None) -> Expression:
    return Expression(xid, xid, ExpressionKind(kind), frozenset(cands),
                      Gold(*gold) if gold else None)


def make_doc(utterances: list[tuple[tuple[CfEntry, ...], list[Expression]]], doc_id: str = "t") -> Document:
    ents = sorted({e.entity for c, _ in utterances for e in c}
                  | {c for _, xs in utterances for x in xs for c in x.candidates})
    utts = tuple(Utterance(i, c, tuple(xs), word_count=len(c))
                 for i, (c, xs) in enumerate(utterances, start=1))
    return Document(doc_id, tuple(Entity(e, e) for e in ents), utts)


# -- random corpora ------------------------------------------------------------

KIND_CHOICES = ("pronoun", "nominal", "ellipsis", "none")


def random_document(rng: random.Random, max_utterances: int = 8, max_entities: int = 5,
                    doc_id: str = "rand") -> Document:
    """Random well-formed document; expressions favour recently mentioned entities."""
    n_ent = rng.randint(1, max_entities)
    entities = [f"e{k}" for k in range(n_ent)]
    n = rng.randint(1, max_utterances)
    utterances = []
    history: list[tuple[str, ...]] = []
    for i in range(1, n + 1):
        size = rng.randint(1, n_ent)
        ents = rng.sample(entities, size)
        entries = tuple(CfEntry(e, "" if med else e, med)
                        for e in ents for med in [rng.random() < 0.25])
        exprs = []
        for k in range(rng.randint(0, 3)):
            kind = ExpressionKind(rng.choice(KIND_CHOICES))
            pool = [e for cfl in history[-3:] for e in cfl] or entities
            if rng.random() < 0.8:
                cands = {rng.choice(pool)}
            else:
                cands = set(rng.sample(entities, rng.randint(1, n_ent)))
            gold = None
            if kind.is_anaphoric and rng.random() < 0.9:
                target = rng.choice(sorted(cands))
                earlier = [j for j, cfl in enumerate(history, start=1) if target in cfl]
                if earlier and rng.random() < 0.9:
                    gold = Gold(target, earlier[-1])
                else:
                    gold = Gold(target, i)
            exprs.append(Expression(f"x{i}_{k}", f"x{i}_{k}", kind,
                                    frozenset(cands) if kind.is_anaphoric or rng.random() < 0.5 else frozenset(),
                                    gold))
        utterances.append(Utterance(i, entries, tuple(exprs), word_count=rng.randint(0, 30)))
        history.append(tuple(ents))
    return Document(doc_id, tuple(Entity(e, e) for e in entities), tuple(utterances))


def random_corpus(seed: int, count: int, **kw) -> list[Document]:
    rng = random.Random(seed)
    return [random_document(rng, doc_id=f"rand-{seed}-{k}", **kw) for k in range(count)]


# -- step-wise replay ------------------------------------------------------------

@dataclass
class Replay:
    pre_states: list[SegmentRegistry]  # pre_states[i] = registry before U_i (i >= 2)
    post_states: list[SegmentRegistry]  # post_states[i] = registry after U_i
    records: list[StepRecord]


def replay(doc: Document, check=None) -> Replay:
    """Run the segmenter manually, keeping a copy of the registry around every step.

    ``check(pre_state, utterance)`` is called before each step when given.
    """
    first = doc.utterances[0]
    state, rec = initialize(first)
    pre: list = [None, None]
    post: list = [None, state.copy()]
    records = [rec]
    for u in doc.utterances[1:]:
        if check is not None:
            check(state, u)
        pre.append(state.copy())
        rec = step(state, u, resolved_set(state, u))
        post.append(state.copy())
        records.append(rec)
    return Replay(pre, post, records)


# -- brute-force reachability ------------------------------------------------------

def oracle_is_reachable(state: SegmentRegistry, ante: str, s: int, i: int) -> Locus:
    """Reachability read directly off the segment archive.

    Only segments whose archived status is open count. ``Cf(l, U_j)`` is
    defined when ``U_j`` was analyzed at level ``l`` and lies inside an open
    segment at level ``l``.
    """
    open_segs = [seg for seg in state.archive if seg.status is SegmentStatus.OPEN]
    by_level = {}
    for seg in open_segs:
        assert seg.level not in by_level, "two open segments on one level"
        by_level[seg.level] = seg

    def cf_of(level: int, j: int):
        seg = by_level.get(level)
        if seg is None or not (seg.beg <= j <= seg.end):
            return None
        if state.level_of_utterance.get(j) != level:
            return None
        return state.cf_by_utterance[j]

    prev = cf_of(s, i - 1) if i > 1 else None
    if prev is not None:
        for rank, e in enumerate(prev, start=1):
            if e.entity == ante:
                return Locus(Clause.PREV_CF, s, i - 1, rank)
    if s - 1 in by_level:
        end = by_level[s - 1].end
        seg_end = cf_of(s - 1, end)
        for rank, e in enumerate(seg_end or (), start=1):
            if e.entity == ante:
                return Locus(Clause.SEG_END_CF, s - 1, end, rank)

    def str_equal_cp(v: int) -> bool:
        seg = by_level.get(v)
        if seg is None:
            return False
        data = cf_of(v, seg.end)
        return bool(data) and data[0].entity == ante and not data[0].mediated

    levels = sorted(by_level)
    for v in levels:
        if v < s - 1 and str_equal_cp(v) and not any(v < w and str_equal_cp(w) for w in levels):
            return Locus(Clause.SEG_END_CP, v, by_level[v].end, 1)
    return UNREACHABLE


def oracle_lift(state: SegmentRegistry, s: int, i: int, depth: int = 0) -> tuple[int, int]:
    """Recursive Lift, returning (level, recursion depth)."""
    def cp(level, j):
        if state.level_of_utterance.get(j) != level:
            return None
        return state.cf_by_utterance[j][0].entity

    if s > 2 and i > 3:
        a, b, c = cp(s, i - 1), cp(s - 1, i - 2), cp(s - 2, i - 3)
        if None not in (a, b, c) and a != b and b != c:
            if a in {e.entity for e in state.cf_by_utterance[i - 2]}:
                return oracle_lift(state, s - 1, i - 1, depth + 1)
    return s, depth
