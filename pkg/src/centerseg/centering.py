"""Local centering data: Cp, Cb, transition types and thematic progression."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import AbstractSet, Optional, Sequence

from centerseg.corpus import CfEntry


class Transition(enum.Enum):
    CONTINUE = "C"
    RETAIN = "R"
    SMOOTH_SHIFT = "SS"
    ROUGH_SHIFT = "RS"
    NONE = "---"

    def __str__(self) -> str:
        return self.value


class TPPattern(enum.Enum):
    CONSTANT_THEME = "constant-theme"
    LINEAR_THEMATIZATION = "linear-thematization"
    OTHER = "other"


@dataclass(frozen=True)
class CenteringRecord:
    utterance: int
    cb: Optional[str]
    cp: str
    transition: Transition


def preferred_center(cf: Sequence[CfEntry]) -> str:
    if not cf:
        raise ValueError("preferred center of an empty Cf list is undefined")
    return cf[0].entity


def compute_backward_center(prev_cf: Optional[Sequence[CfEntry]],
                            resolved_entities: AbstractSet[str]) -> Optional[str]:
    """Highest-ranked entity of ``prev_cf`` that is realized in the current utterance.

    Mediated entries count as realized; only entity identity matters here.
    """
    if not prev_cf or not resolved_entities:
        return None
    for entry in prev_cf:
        if entry.entity in resolved_entities:
            return entry.entity
    return None


def classify_transition(cb_n: Optional[str], cb_prev: Optional[str], cp_n: str) -> Transition:
    if cb_n is None:
        return Transition.NONE
    same_cb = cb_prev is None or cb_n == cb_prev
    if same_cb:
        return Transition.CONTINUE if cb_n == cp_n else Transition.RETAIN
    return Transition.SMOOTH_SHIFT if cb_n == cp_n else Transition.ROUGH_SHIFT


def classify_tp(prev_cf: Sequence[CfEntry], curr_cf: Sequence[CfEntry]) -> TPPattern:
    prev_cp = preferred_center(prev_cf)
    curr_cp = preferred_center(curr_cf)
    if prev_cp == curr_cp:
        return TPPattern.CONSTANT_THEME
    if any(e.entity == curr_cp for e in prev_cf):
        return TPPattern.LINEAR_THEMATIZATION
    return TPPattern.OTHER
