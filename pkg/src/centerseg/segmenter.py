"""Centered segmentation: builds the segment hierarchy utterance by utterance.

Each step picks exactly one block:

``B1``   an antecedent equals the directly realized ``Cp(s, U_{i-1})``:
         continue the segment, possibly lifting a chain of embedded ones;
``B2a``  nothing in ``Cf(s, U_{i-1})`` is referred to, but a higher open
         segment's end-point ``Cp`` is: close everything below it and continue it;
``B2b``  as above, but only some ``Cf`` of the end of level ``s-1`` matches:
         close the current segment and open a parallel one at level ``s``;
``B2c``  nothing reachable is referred to: open an embedded segment;
``B3``   ``Cf(s, U_{i-1})`` is referred to, but not its ``Cp``: open an
         embedded segment.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from centerseg.centering import (CenteringRecord, TPPattern, Transition, classify_tp,
                                 classify_transition, compute_backward_center)
from centerseg.corpus import Document, Utterance
from centerseg.registry import (RegistryInvariantError, ReachableSnapshot, SegmentRegistry,
                                reachable_snapshot)
from centerseg.resolver import ResolutionResult, ResolutionSet, resolved_set

logger = logging.getLogger(__name__)

__all__ = ["Block", "StepRecord", "AnalysisTrace", "initialize", "lift", "lift_depth",
           "step", "run", "reachable_snapshot", "ReachableSnapshot"]


class Block(enum.Enum):
    INIT = "init"
    B1 = "1"
    B2A = "2a"
    B2B = "2b"
    B2C = "2c"
    B3 = "3"


@dataclass(frozen=True)
class StepRecord:
    utterance: int
    block: Block
    centering: CenteringRecord
    level: int
    open_segments: tuple[tuple[int, int, int], ...]
    lift_result: Optional[tuple[int, int]] = None
    tp: Optional[TPPattern] = None
    resolutions: tuple[ResolutionResult, ...] = ()

    @property
    def lifted(self) -> bool:
        return self.lift_result is not None and self.lift_result[0] != self.lift_result[1]

    @property
    def label(self) -> str:
        """Block label as printed in the analysis table (``"1, Lift"`` etc.)."""
        if self.block is Block.INIT:
            return ""
        if self.lifted:
            return "1, Lift"
        return self.block.value


@dataclass
class AnalysisTrace:
    document: Document
    steps: list[StepRecord] = field(default_factory=list)
    registry: SegmentRegistry = field(default_factory=SegmentRegistry)

    @property
    def max_depth(self) -> int:
        return max((st.level for st in self.steps), default=0)

    def to_dict(self) -> dict:
        doc = self.document
        steps = []
        for st in self.steps:
            u = doc.utterance(st.utterance)
            c = st.centering
            steps.append({
                "utterance": st.utterance,
                "block": st.block.value,
                "label": st.label,
                "lift": list(st.lift_result) if st.lift_result else None,
                "level": st.level,
                "cb": c.cb,
                "cp": c.cp,
                "transition": c.transition.value,
                "tp": st.tp.value if st.tp else None,
                "cf": [{"entity": e.entity, "surface": e.surface, "mediated": e.mediated,
                        "label": doc.surface(e.entity)} for e in u.cf],
                "open_segments": [list(t) for t in st.open_segments],
                "resolutions": [r.to_dict() for r in st.resolutions],
            })
        return {
            "document": doc.id,
            "entities": {e.id: e.surface or e.id for e in doc.entities},
            "steps": steps,
            "segments": [{"level": s.level, "beg": s.beg, "end": s.end, "status": s.status.value}
                         for s in self.registry.archive],
            "max_depth": self.max_depth,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"


def _open_tuple(state: SegmentRegistry) -> tuple[tuple[int, int, int], ...]:
    return tuple(seg.as_tuple() for seg in state.open_segments())


def initialize(u1: Utterance) -> tuple[SegmentRegistry, StepRecord]:
    if u1.index != 1:
        raise ValueError(f"analysis must start at U1, got U{u1.index}")
    state = SegmentRegistry()
    state.open_segment(1, 1)
    state.record_utterance(1, u1.cf)
    record = StepRecord(1, Block.INIT, CenteringRecord(1, None, u1.cp, Transition.NONE),
                        1, _open_tuple(state))
    return state, record


def _lift_condition(state: SegmentRegistry, s: int, i: int) -> bool:
    if not (s > 2 and i > 3):
        return False
    cp_s = state.cp_at(s, i - 1)
    cp_s1 = state.cp_at(s - 1, i - 2)
    cp_s2 = state.cp_at(s - 2, i - 3)
    if cp_s is None or cp_s1 is None or cp_s2 is None:
        return False
    cf_s1 = state.cf_at(s - 1, i - 2)
    return (cp_s.entity != cp_s1.entity
            and cp_s1.entity != cp_s2.entity
            and any(e.entity == cp_s.entity for e in cf_s1))


def lift(state: SegmentRegistry, s: int, i: int) -> int:
    """Level that ``U_i`` continues after a chain of rheme thematizations is collapsed.

    Cross-level ``Cp`` references only count when the utterance was actually
    analyzed at that level; otherwise the chain stops.
    """
    while _lift_condition(state, s, i):
        s, i = s - 1, i - 1
    return s


def lift_depth(state: SegmentRegistry, s: int, i: int) -> int:
    """Number of recursive Lift applications for ``(s, i)``."""
    return s - lift(state, s, i)


def step(state: SegmentRegistry, u: Utterance, R: ResolutionSet) -> StepRecord:
    """Analyze ``u`` (the next utterance), mutating ``state``; ``R`` is its resolution set."""
    i = u.index
    if i != state.last_utterance + 1:
        raise ValueError(f"expected U{state.last_utterance + 1}, got U{i}")
    s = state.current_level
    prev_cf = state.cf_at(s, i - 1)
    if prev_cf is None:
        raise RegistryInvariantError(f"U{i - 1} is not at current level {s}")

    cb = compute_backward_center(prev_cf, R.entities)
    prev_cp = prev_cf[0]
    lift_result = None

    if prev_cp.direct and prev_cp.entity in R:
        block = Block.B1
        target = lift(state, s, i)
        lift_result = (s, target)
        state.absorb_above(target)
        state.extend(target, i)
    elif not any(e.entity in R for e in prev_cf):
        block = None
        k = s
        while block is None and k > 1:
            k -= 1
            end = state.end_of(k)
            cf_k = state.cf_at(k, end)
            if cf_k is None:
                raise RegistryInvariantError(f"end U{end} of level {k} has no data at that level")
            if cf_k[0].direct and cf_k[0].entity in R:
                block = Block.B2A
                state.close_above(k)
                state.extend(k, i)
            elif k == s - 1 and any(e.entity in R for e in cf_k):
                block = Block.B2B
                state.open_segment(s, i)
        if block is None:
            block = Block.B2C
            state.open_segment(s + 1, i)
    else:
        block = Block.B3
        state.open_segment(s + 1, i)

    tp = classify_tp(state.cf_by_utterance[i - 1], u.cf)
    state.record_utterance(i, u.cf)
    state.check()

    transition = classify_transition(cb, state.last_cb, u.cp)
    state.last_cb = cb
    return StepRecord(
        utterance=i,
        block=block,
        centering=CenteringRecord(i, cb, u.cp, transition),
        level=state.current_level,
        open_segments=_open_tuple(state),
        lift_result=lift_result,
        tp=tp,
        resolutions=R.results,
    )


ResolverFn = Callable[[SegmentRegistry, Utterance], ResolutionSet]


def run(doc: Document, resolver: ResolverFn = resolved_set) -> AnalysisTrace:
    first = doc.utterances[0]
    # U1 has nothing to refer back to; its expressions resolve against an empty registry
    initial = resolver(SegmentRegistry(), first)
    state, record = initialize(first)
    steps = [dataclasses.replace(record, resolutions=initial.results)]
    for u in doc.utterances[1:]:
        rec = step(state, u, resolver(state, u))
        steps.append(rec)
        logger.debug("U%d: block %s level %d", u.index, rec.label, rec.level)
    return AnalysisTrace(doc, steps, state)
