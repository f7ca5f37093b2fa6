"""Annotated corpus model: entities, ranked Cf lists, referring expressions.

A corpus file is UTF-8 JSON holding either one document object or a list of
them::

    {"id": "doc",
     "entities": [{"id": "e1", "surface": "Brother HL-1260"}],
     "utterances": [
        {"index": 1, "text": "...", "words": 2,
         "cf": [{"entity": "e1", "surface": "HL-1260", "mediated": false}],
         "expressions": [{"id": "x1", "surface": "er", "kind": "pronoun",
                          "candidates": ["e1"],
                          "gold": {"entity": "e1", "utterance": 1}}]}]}

Structural defects (bad JSON, duplicate or undeclared ids, broken indexing)
raise :class:`CorpusError` at parse time. Softer invariant violations are
reported by :func:`validate_document` as findings.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence


class CorpusError(ValueError):
    """Raised for structurally broken corpus input."""

    def __init__(self, message: str, document: str | None = None,
                 utterance: int | None = None, field: str | None = None):
        self.document = document
        self.utterance = utterance
        self.field = field
        where = []
        if document is not None:
            where.append(f"document {document!r}")
        if utterance is not None:
            where.append(f"U{utterance}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ExpressionKind(enum.Enum):
    PRONOUN = "pronoun"
    NOMINAL = "nominal"
    ELLIPSIS = "ellipsis"
    NONE = "none"

    @property
    def is_anaphoric(self) -> bool:
        return self is not ExpressionKind.NONE

    @property
    def is_anaphor(self) -> bool:
        """Pronominal or nominal anaphor (as opposed to a textual ellipsis)."""
        return self in (ExpressionKind.PRONOUN, ExpressionKind.NOMINAL)


@dataclass(frozen=True)
class Entity:
    id: str
    surface: str = ""


@dataclass(frozen=True)
class CfEntry:
    entity: str
    surface: str
    # True when the entity is in the Cf only through a textual ellipsis.
    mediated: bool = False

    @property
    def direct(self) -> bool:
        return not self.mediated


@dataclass(frozen=True)
class Gold:
    entity: str
    utterance: int


@dataclass(frozen=True)
class Expression:
    id: str
    surface: str
    kind: ExpressionKind
    candidates: frozenset[str] = frozenset()
    gold: Optional[Gold] = None


@dataclass(frozen=True)
class Utterance:
    index: int
    cf: tuple[CfEntry, ...]
    expressions: tuple[Expression, ...] = ()
    text: str = ""
    word_count: int = 0

    @property
    def cp(self) -> str:
        return self.cf[0].entity

    def cf_entities(self) -> tuple[str, ...]:
        return tuple(e.entity for e in self.cf)


@dataclass(frozen=True)
class Document:
    id: str
    entities: tuple[Entity, ...]
    utterances: tuple[Utterance, ...]
    _by_id: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {e.id: e for e in self.entities})

    def entity(self, entity_id: str) -> Entity:
        return self._by_id[entity_id]

    def surface(self, entity_id: str) -> str:
        ent = self._by_id.get(entity_id)
        return ent.surface or ent.id if ent is not None else entity_id

    def utterance(self, index: int) -> Utterance:
        return self.utterances[index - 1]

    def __len__(self) -> int:
        return len(self.utterances)


# -- parsing -----------------------------------------------------------------

def _require(obj: dict, key: str, kind: type | tuple, doc: str | None,
             utt: int | None = None, where: str | None = None) -> Any:
    name = f"{where}.{key}" if where else key
    if not isinstance(obj, dict) or key not in obj:
        raise CorpusError("missing required field", doc, utt, name)
    value = obj[key]
    # bool is an int subclass; reject it where an integer is expected
    if kind is int and isinstance(value, bool):
        raise CorpusError(f"expected int, got {value!r}", doc, utt, name)
    if not isinstance(value, kind):
        raise CorpusError(f"expected {getattr(kind, '__name__', kind)}, got {type(value).__name__}",
                          doc, utt, name)
    return value


def _parse_expression(raw: dict, doc_id: str, utt: int, declared: set[str]) -> Expression:
    xid = _require(raw, "id", str, doc_id, utt, "expressions")
    where = f"expressions[{xid}]"
    surface = raw.get("surface", "")
    kind_raw = raw.get("kind", "none")
    try:
        kind = ExpressionKind(kind_raw)
    except ValueError:
        raise CorpusError(f"unknown expression kind {kind_raw!r}", doc_id, utt, f"{where}.kind") from None
    candidates = raw.get("candidates", [])
    if not isinstance(candidates, list) or not all(isinstance(c, str) for c in candidates):
        raise CorpusError("candidates must be a list of entity ids", doc_id, utt, f"{where}.candidates")
    for c in candidates:
        if c not in declared:
            raise CorpusError(f"undeclared entity {c!r}", doc_id, utt, f"{where}.candidates")
    gold = None
    if raw.get("gold") is not None:
        g = raw["gold"]
        gent = _require(g, "entity", str, doc_id, utt, f"{where}.gold")
        gutt = _require(g, "utterance", int, doc_id, utt, f"{where}.gold")
        if gent not in declared:
            raise CorpusError(f"undeclared entity {gent!r}", doc_id, utt, f"{where}.gold.entity")
        gold = Gold(gent, gutt)
    return Expression(xid, surface, kind, frozenset(candidates), gold)


def _parse_document(raw: Any) -> Document:
    if not isinstance(raw, dict):
        raise CorpusError("document must be a JSON object")
    doc_id = _require(raw, "id", str, None)
    ents_raw = _require(raw, "entities", list, doc_id)
    entities = []
    seen: set[str] = set()
    for er in ents_raw:
        eid = _require(er, "id", str, doc_id, where="entities")
        if eid in seen:
            raise CorpusError(f"duplicate entity id {eid!r}", doc_id, None, "entities")
        seen.add(eid)
        entities.append(Entity(eid, er.get("surface", "") or ""))

    utts_raw = _require(raw, "utterances", list, doc_id)
    if not utts_raw:
        raise CorpusError("document has no utterances", doc_id, None, "utterances")
    utterances = []
    for pos, ur in enumerate(utts_raw, start=1):
        index = _require(ur, "index", int, doc_id, where="utterances")
        if index != pos:
            raise CorpusError(f"utterance indices must be 1..n consecutive; expected {pos}, got {index}",
                              doc_id, index, "index")
        cf = []
        for cr in _require(ur, "cf", list, doc_id, index):
            ent = _require(cr, "entity", str, doc_id, index, "cf")
            if ent not in seen:
                raise CorpusError(f"undeclared entity {ent!r}", doc_id, index, "cf")
            mediated = cr.get("mediated", False)
            if not isinstance(mediated, bool):
                raise CorpusError("mediated must be a boolean", doc_id, index, "cf.mediated")
            cf.append(CfEntry(ent, cr.get("surface", "") or "", mediated))
        exprs = tuple(_parse_expression(xr, doc_id, index, seen) for xr in ur.get("expressions", []))
        words = ur.get("words", 0)
        if isinstance(words, bool) or not isinstance(words, int) or words < 0:
            raise CorpusError("words must be a non-negative integer", doc_id, index, "words")
        utterances.append(Utterance(index, tuple(cf), exprs, ur.get("text", "") or "", words))
    return Document(doc_id, tuple(entities), tuple(utterances))


def parse_corpus(data: bytes | str) -> list[Document]:
    """Parse a corpus file (one document object or a list of them)."""
    try:
        raw = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorpusError(f"malformed JSON: {exc}") from exc
    if isinstance(raw, dict):
        raw = [raw]
    if not isinstance(raw, list):
        raise CorpusError("corpus must be a document object or a list of documents")
    docs = [_parse_document(r) for r in raw]
    ids = [d.id for d in docs]
    if len(set(ids)) != len(ids):
        raise CorpusError("duplicate document ids in one corpus file")
    return docs


def document_to_dict(doc: Document) -> dict:
    def expr(x: Expression) -> dict:
        out = {"id": x.id, "surface": x.surface, "kind": x.kind.value,
               "candidates": sorted(x.candidates)}
        if x.gold is not None:
            out["gold"] = {"entity": x.gold.entity, "utterance": x.gold.utterance}
        return out

    return {
        "id": doc.id,
        "entities": [{"id": e.id, "surface": e.surface} for e in doc.entities],
        "utterances": [
            {"index": u.index, "text": u.text, "words": u.word_count,
             "cf": [{"entity": c.entity, "surface": c.surface, "mediated": c.mediated} for c in u.cf],
             "expressions": [expr(x) for x in u.expressions]}
            for u in doc.utterances
        ],
    }


def dump_corpus(docs: Sequence[Document]) -> bytes:
    payload: Any = [document_to_dict(d) for d in docs]
    if len(payload) == 1:
        payload = payload[0]
    return json.dumps(payload, ensure_ascii=False, indent=2).encode("utf-8")


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    document: str
    utterance: Optional[int]
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        loc = self.document if self.utterance is None else f"{self.document}:U{self.utterance}"
        tail = f" ({self.detail})" if self.detail else ""
        return f"{self.severity}: {loc}: {self.rule}{tail}"


def validate_document(doc: Document) -> list[Finding]:
    findings: list[Finding] = []

    def add(rule: str, utt: int | None = None, detail: str = "", severity: str = "error") -> None:
        findings.append(Finding(severity, doc.id, utt, rule, detail))

    declared = {e.id for e in doc.entities}
    if len(declared) != len(doc.entities):
        add("entity ids must be unique")
    if not doc.utterances:
        add("document must have at least one utterance")
    expr_ids: set[str] = set()
    for pos, u in enumerate(doc.utterances, start=1):
        if u.index != pos:
            add("utterance indices must be 1..n consecutive", u.index, f"expected {pos}")
        if not u.cf:
            add("cf must be non-empty", u.index)
        ents = u.cf_entities()
        if len(set(ents)) != len(ents):
            dupes = sorted({e for e in ents if ents.count(e) > 1})
            add("cf entities must be pairwise distinct", u.index, ", ".join(dupes))
        for c in u.cf:
            if c.entity not in declared:
                add("undeclared entity", u.index, c.entity)
            if not c.mediated and not c.surface:
                add("direct cf entry needs a surface string", u.index, c.entity)
        for x in u.expressions:
            if x.id in expr_ids:
                add("expression ids must be unique", u.index, x.id)
            expr_ids.add(x.id)
            if x.kind.is_anaphoric and not x.candidates:
                add("anaphoric expression needs candidates", u.index, x.id)
            for c in sorted(x.candidates - declared):
                add("undeclared entity", u.index, c)
            if x.gold is not None:
                if x.gold.entity not in declared:
                    add("undeclared entity", u.index, x.gold.entity)
                if x.gold.utterance > u.index:
                    add("gold antecedent must precede expression", u.index, x.id)
                elif x.gold.utterance < 1:
                    add("gold antecedent utterance out of range", u.index, x.id)
    return findings


def has_errors(findings: Iterable[Finding]) -> bool:
    return any(f.severity == "error" for f in findings)
