"""Registry of referential discourse segments.

The registry keeps, per level, the one segment currently open there (the
``DS[s.beg]``/``DS[s.end]`` slots of the segmentation algorithm) plus an
archive of every segment ever created, so closed history stays renderable.
Centering data of processed utterances are stored alongside, keyed by the
level each utterance was assigned when it was analyzed.
"""

from __future__ import annotations

import copy
import enum
from dataclasses import dataclass, field
from typing import Optional

from centerseg.corpus import CfEntry


class RegistryInvariantError(AssertionError):
    """The registry reached a state the algorithm can never produce."""


class SegmentStatus(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"
    ABSORBED = "absorbed"


@dataclass
class Segment:
    level: int
    beg: int
    end: int
    status: SegmentStatus = SegmentStatus.OPEN

    @property
    def is_open(self) -> bool:
        return self.status is SegmentStatus.OPEN

    def __contains__(self, i: int) -> bool:
        return self.beg <= i <= self.end

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.level, self.beg, self.end)


@dataclass
class SegmentRegistry:
    open_by_level: dict[int, Segment] = field(default_factory=dict)
    archive: list[Segment] = field(default_factory=list)
    current_level: int = 0
    level_of_utterance: dict[int, int] = field(default_factory=dict)
    cf_by_utterance: dict[int, tuple[CfEntry, ...]] = field(default_factory=dict)
    # utterances whose centering data were dropped by a lift
    excluded: set[int] = field(default_factory=set)
    last_utterance: int = 0
    # Cb of the last analyzed utterance, needed for the next transition
    last_cb: Optional[str] = None

    # -- lookups -------------------------------------------------------------

    def segment(self, level: int) -> Optional[Segment]:
        return self.open_by_level.get(level)

    def end_of(self, level: int) -> Optional[int]:
        seg = self.open_by_level.get(level)
        return seg.end if seg is not None else None

    def cf_at(self, level: int, i: int) -> Optional[tuple[CfEntry, ...]]:
        """``Cf(level, U_i)``: defined only if ``U_i`` was analyzed at ``level``."""
        if self.level_of_utterance.get(i) != level:
            return None
        return self.cf_by_utterance[i]

    def cp_at(self, level: int, i: int) -> Optional[CfEntry]:
        cf = self.cf_at(level, i)
        return cf[0] if cf else None

    def accessible_cf(self, level: int, i: int) -> Optional[tuple[CfEntry, ...]]:
        """Like :meth:`cf_at` but hides data of utterances removed by a lift."""
        if i in self.excluded:
            return None
        return self.cf_at(level, i)

    def open_segments(self) -> list[Segment]:
        return [self.open_by_level[lvl] for lvl in sorted(self.open_by_level)]

    def max_level(self) -> int:
        return max((s.level for s in self.archive), default=0)

    # -- mutation ------------------------------------------------------------

    def open_segment(self, level: int, i: int) -> Segment:
        """Open ``(level, i, i)``, ultimately closing whatever is open at ``>= level``."""
        for lvl in [l for l in self.open_by_level if l >= level]:
            self._retire(lvl, SegmentStatus.CLOSED)
        seg = Segment(level, i, i)
        self.open_by_level[level] = seg
        self.archive.append(seg)
        self.current_level = level
        return seg

    def close_above(self, level: int) -> None:
        for lvl in [l for l in self.open_by_level if l > level]:
            self._retire(lvl, SegmentStatus.CLOSED)

    def absorb_above(self, level: int) -> None:
        for lvl in [l for l in self.open_by_level if l > level]:
            seg = self._retire(lvl, SegmentStatus.ABSORBED)
            self.excluded.update(j for j in range(seg.beg, seg.end + 1)
                                 if self.level_of_utterance.get(j) == lvl)

    def extend(self, level: int, i: int) -> None:
        seg = self.open_by_level.get(level)
        if seg is None:
            raise RegistryInvariantError(f"no open segment at level {level}")
        seg.end = i
        self.current_level = level

    def record_utterance(self, i: int, cf: tuple[CfEntry, ...]) -> None:
        self.level_of_utterance[i] = self.current_level
        self.cf_by_utterance[i] = tuple(cf)
        self.last_utterance = i

    def _retire(self, level: int, status: SegmentStatus) -> Segment:
        seg = self.open_by_level.pop(level)
        seg.status = status
        return seg

    def copy(self) -> "SegmentRegistry":
        return copy.deepcopy(self)

    # -- checks --------------------------------------------------------------

    def violations(self) -> list[str]:
        """Stack-discipline violations of the current state (empty when sound)."""
        out = []
        levels = sorted(self.open_by_level)
        if levels != list(range(1, self.current_level + 1)):
            out.append(f"open levels {levels} are not 1..{self.current_level}")
        for lvl, seg in self.open_by_level.items():
            if seg.level != lvl or not seg.is_open:
                out.append(f"slot {lvl} holds {seg}")
            if seg.beg > seg.end:
                out.append(f"segment {seg.as_tuple()} has beg > end")
        for lower, upper in zip(levels, levels[1:]):
            if not self.open_by_level[upper].beg > self.open_by_level[lower].end:
                out.append(f"level {upper} begins before level {lower} ends")
        if self.last_utterance and self.end_of(self.current_level) != self.last_utterance:
            out.append(f"current level {self.current_level} does not end at U{self.last_utterance}")
        return out

    def check(self) -> None:
        problems = self.violations()
        if problems:
            raise RegistryInvariantError("; ".join(problems))


@dataclass(frozen=True)
class VisibleCf:
    level: int
    utterance: int
    cf: tuple[CfEntry, ...]


@dataclass(frozen=True)
class ReachableSnapshot:
    """What the next utterance may refer back to, in precedence order."""

    prev: Optional[VisibleCf]
    seg_end: Optional[VisibleCf]
    cp_chain: tuple[tuple[int, int, CfEntry], ...]  # (level, utterance, Cp), level descending

    def entries(self):
        if self.prev is not None:
            yield from ((self.prev.level, self.prev.utterance, e) for e in self.prev.cf)
        if self.seg_end is not None:
            yield from ((self.seg_end.level, self.seg_end.utterance, e) for e in self.seg_end.cf)
        yield from self.cp_chain


def reachable_snapshot(state: SegmentRegistry, s: int | None = None,
                       i: int | None = None) -> ReachableSnapshot:
    """Centering data visible from ``U_i`` at level ``s``.

    Defaults to the perspective of the next, not yet analyzed utterance.
    Only open segments are consulted.
    """
    s = state.current_level if s is None else s
    i = state.last_utterance + 1 if i is None else i
    prev = None
    if i > 1:
        cf = state.accessible_cf(s, i - 1)
        if cf is not None:
            prev = VisibleCf(s, i - 1, cf)
    seg_end = None
    end = state.end_of(s - 1)
    if end is not None:
        cf = state.accessible_cf(s - 1, end)
        if cf is not None:
            seg_end = VisibleCf(s - 1, end, cf)
    chain = []
    for v in range(s - 2, 0, -1):
        end = state.end_of(v)
        cf = state.accessible_cf(v, end) if end is not None else None
        if cf:
            chain.append((v, end, cf[0]))
    return ReachableSnapshot(prev, seg_end, tuple(chain))
