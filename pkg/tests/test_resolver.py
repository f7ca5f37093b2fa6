import pytest
from hypothesis import given, strategies as st

from centerseg.registry import Segment, SegmentRegistry, reachable_snapshot
from centerseg.resolver import (Clause, Locus, UNREACHABLE, is_anaphor_for, is_reachable, resolve,
                                resolved_set)
from centerseg.segmenter import initialize
from centerseg.corpus import Utterance
from helpers import ana, cf, make_doc, oracle_is_reachable, random_document, replay


def test_is_anaphor_for(sample_doc):
    er = sample_doc.utterance(3).expressions[0]
    assert is_anaphor_for(er, "hl1260")
    seite = sample_doc.utterance(7).expressions[0]
    assert seite.surface == "Seite" and is_anaphor_for(seite, "handbuch")
    assert not is_anaphor_for(ana("x", "a"), "b")


def test_reachable_from_segment_end_cf(sample_replay):
    after_u11 = sample_replay.post_states[11]
    assert is_reachable(after_u11, "hl1260", 3, 12) == Locus(Clause.SEG_END_CF, 2, 7, 3)


def test_reachable_from_previous_cf(sample_replay):
    after_u6 = sample_replay.post_states[6]
    assert is_reachable(after_u6, "handbuch", 2, 7) == Locus(Clause.PREV_CF, 2, 6, 1)


def test_closed_mediated_occurrences_are_not_consulted(sample_replay):
    after_u11 = sample_replay.post_states[11]
    # U9 and U10 hold the printer (mediated) but sit in absorbed segments
    assert after_u11.accessible_cf(4, 9) is None and after_u11.accessible_cf(5, 10) is None
    snap = reachable_snapshot(after_u11)
    assert {utt for _, utt, _ in snap.entries()} == {11, 7, 3}


def stacked_registry(cfs):
    """Open segments at levels 1..n, one utterance each."""
    reg = SegmentRegistry()
    for i, c in enumerate(cfs, start=1):
        reg.open_segment(i, i)
        reg.record_utterance(i, c)
    return reg


def test_mediated_cp_skipped_in_segment_end_search():
    reg = stacked_registry([cf("a"), cf("~a", "b"), cf("c"), cf("d")])
    assert is_reachable(reg, "a", 4, 5) == Locus(Clause.SEG_END_CP, 1, 1, 1)
    reg = stacked_registry([cf("~a"), cf("~a", "b"), cf("c"), cf("d")])
    assert is_reachable(reg, "a", 4, 5) == UNREACHABLE


def test_clause_precedence():
    reg = stacked_registry([cf("a"), cf("a", "b"), cf("c", "a")])
    assert is_reachable(reg, "a", 3, 4).clause is Clause.PREV_CF
    assert is_reachable(reg, "b", 3, 4) == Locus(Clause.SEG_END_CF, 2, 2, 2)
    assert is_reachable(reg, "zz", 3, 4) == UNREACHABLE


def test_highest_segment_end_cp_wins():
    reg = stacked_registry([cf("a"), cf("a"), cf("c"), cf("d"), cf("e")])
    assert is_reachable(reg, "a", 5, 6) == Locus(Clause.SEG_END_CP, 2, 2, 1)


def test_resolve_sample(sample_doc, sample_replay):
    handbuch = sample_doc.utterance(6).expressions[0]
    res = resolve(sample_replay.pre_states[6], handbuch, 3, 6)
    assert (res.entity, res.locus) == ("handbuch", Locus(Clause.PREV_CF, 3, 5, 1))
    hl = sample_doc.utterance(12).expressions[0]
    res = resolve(sample_replay.pre_states[12], hl, 3, 12)
    assert (res.entity, res.locus) == ("hl1260", Locus(Clause.SEG_END_CF, 2, 7, 3))


def test_resolve_without_compatible_candidate(sample_replay):
    res = resolve(sample_replay.pre_states[12], ana("x", "nowhere"), 3, 12)
    assert res.entity is None and res.locus == UNREACHABLE and not res.resolved


def test_resolve_rejects_non_anaphoric(sample_replay):
    with pytest.raises(ValueError):
        resolve(sample_replay.pre_states[2], ana("x", "a", kind="none"), 1, 2)


def test_resolved_set_sample(sample_doc, sample_replay):
    assert len(resolved_set(sample_replay.pre_states[4], sample_doc.utterance(4))) == 0
    assert "inhaltsverzeichnis" in resolved_set(sample_replay.pre_states[8], sample_doc.utterance(8))
    rs = resolved_set(sample_replay.pre_states[9], sample_doc.utterance(9))
    assert rs.entities == {"kapitel", "hl1260"}
    assert len(rs.results) == 3


def test_resolved_set_is_a_set():
    state, _ = initialize(Utterance(1, cf("a", "b")))
    u2 = Utterance(2, cf("a"), (ana("x1", "a", kind="pronoun"), ana("x2", "a")))
    rs = resolved_set(state, u2)
    assert rs.entities == {"a"} and len(rs.results) == 2


def test_intra_utterance_gold_is_not_searched():
    state, _ = initialize(Utterance(1, cf("a")))
    u2 = Utterance(2, cf("b", "a"), (ana("x1", "b", gold=("b", 2)), ana("x2", "z", kind="none")))
    rs = resolved_set(state, u2)
    assert len(rs) == 0
    (res,) = rs.results
    assert res.locus.clause is Clause.INTRA_UTTERANCE and res.entity == "b"


def test_snapshot_examples(sample_replay):
    after_u11 = reachable_snapshot(sample_replay.post_states[11])
    assert (after_u11.prev.level, after_u11.prev.utterance) == (3, 11)
    assert (after_u11.seg_end.level, after_u11.seg_end.utterance) == (2, 7)
    assert [(v, u, e.entity) for v, u, e in after_u11.cp_chain] == [(1, 3, "hl1260")]
    after_u5 = reachable_snapshot(sample_replay.post_states[5])
    assert (after_u5.prev.level, after_u5.prev.utterance) == (3, 5)
    assert (after_u5.seg_end.level, after_u5.seg_end.utterance) == (2, 4)
    assert [(v, u) for v, u, _ in after_u5.cp_chain] == [(1, 3)]


def test_snapshot_at_the_start():
    empty = reachable_snapshot(SegmentRegistry())
    assert empty.prev is None and empty.seg_end is None and empty.cp_chain == ()
    state, _ = initialize(Utterance(1, cf("a")))
    snap = reachable_snapshot(state)
    assert snap.prev.utterance == 1 and snap.seg_end is None and snap.cp_chain == ()


@given(st.randoms(use_true_random=False))
def test_matches_brute_force(rng):
    doc = random_document(rng)
    entities = [e.id for e in doc.entities] + ["absent"]
    rep = replay(doc)
    for i in range(2, len(doc) + 1):
        pre = rep.pre_states[i]
        s = pre.current_level
        for ante in entities:
            assert is_reachable(pre, ante, s, i) == oracle_is_reachable(pre, ante, s, i)


@given(st.randoms(use_true_random=False))
def test_loci_are_open(rng):
    doc = random_document(rng)
    rep = replay(doc)
    for i in range(2, len(doc) + 1):
        pre = rep.pre_states[i]
        for res in resolved_set(pre, doc.utterance(i)).results:
            loc = res.locus
            if loc.clause in (Clause.UNREACHABLE, Clause.INTRA_UTTERANCE):
                continue
            seg = pre.segment(loc.level)
            assert seg is not None and seg.beg <= loc.utterance <= seg.end
            assert loc.utterance not in pre.excluded
            if loc.clause is Clause.PREV_CF:
                assert loc.utterance == i - 1
            else:
                assert loc.utterance == seg.end
            if loc.clause is Clause.SEG_END_CP:
                assert loc.rank == 1
                # no higher open level below s-1 also offers it
                for w in range(loc.level + 1, res.search_level - 1):
                    cp = pre.cf_by_utterance[pre.end_of(w)][0]
                    assert not (cp.entity == res.entity and cp.direct)


@given(st.randoms(use_true_random=False))
def test_resolution_is_pure(rng):
    doc = random_document(rng)
    rep = replay(doc)
    for i in range(2, len(doc) + 1):
        before = rep.pre_states[i].copy()
        a = resolved_set(rep.pre_states[i], doc.utterance(i))
        b = resolved_set(rep.pre_states[i], doc.utterance(i))
        assert a == b
        assert rep.pre_states[i] == before
