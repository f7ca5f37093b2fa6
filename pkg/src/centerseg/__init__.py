"""Centered discourse segmentation: referential segment hierarchies from local centering data."""

from importlib import resources

from centerseg.centering import (CenteringRecord, TPPattern, Transition, classify_tp,
                                 classify_transition, compute_backward_center, preferred_center)
from centerseg.corpus import (CfEntry, CorpusError, Document, Entity, Expression, ExpressionKind,
                              Gold, Utterance, dump_corpus, parse_corpus, validate_document)
from centerseg.registry import Segment, SegmentRegistry, SegmentStatus, reachable_snapshot
from centerseg.resolver import (Clause, Locus, ResolutionResult, is_anaphor_for, is_reachable,
                                resolve, resolved_set)
from centerseg.segmenter import AnalysisTrace, Block, StepRecord, initialize, lift, run, step

__version__ = "0.1.0"


def sample_document() -> Document:
    """The annotated printer-review sample text shipped with the package."""
    data = resources.files("centerseg").joinpath("data/sample_hl1260.json").read_bytes()
    return parse_corpus(data)[0]
