"""Command-line front end.

    centerseg analyze|render|stats|validate FILE... [--format text|json]
              [--depth-warn N] [--out DIR]

Exit status: 0 success, 1 I/O failure, 2 invalid corpus, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from centerseg.corpus import CorpusError, Document, has_errors, parse_corpus, validate_document
from centerseg.evaluation import format_report, summarize
from centerseg.registry import RegistryInvariantError
from centerseg.render import render_trace
from centerseg.segmenter import AnalysisTrace, run

logger = logging.getLogger("centerseg")

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_DEPTH_WARN = 7


@dataclass(frozen=True)
class CliConfig:
    command: str
    inputs: tuple[Path, ...]
    format: str = "text"
    depth_warn: int = DEFAULT_DEPTH_WARN
    out: Optional[Path] = None

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("at least one input path is required")
        if self.depth_warn < 1:
            raise ValueError("--depth-warn must be >= 1")


class _Failure(Exception):
    def __init__(self, status: int):
        self.status = status


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
        raise _Failure(EXIT_IO) from exc


def _load_documents(cfg: CliConfig) -> list[Document]:
    """Parse and validate every input; report all findings before failing."""
    docs, invalid = [], False
    for path in cfg.inputs:
        data = _read(path)
        try:
            parsed = parse_corpus(data)
        except CorpusError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            invalid = True
            continue
        for doc in parsed:
            findings = validate_document(doc)
            for f in findings:
                print(f"{path}: {f}", file=sys.stderr)
            invalid = invalid or has_errors(findings)
            docs.append(doc)
    if invalid:
        raise _Failure(EXIT_INVALID)
    return docs


def _analyze_all(docs: Sequence[Document]) -> list[AnalysisTrace]:
    # documents are independent; map() keeps input order
    with ThreadPoolExecutor() as pool:
        return list(pool.map(run, docs))


def _emit(cfg: CliConfig, name: str, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / name).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write {cfg.out / name}: {exc}", file=sys.stderr)
        raise _Failure(EXIT_IO) from exc


def _safe_name(doc_id: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in doc_id) or "document"


def run_validate(cfg: CliConfig) -> int:
    docs = _load_documents(cfg)
    logger.info("%d document(s) valid", len(docs))
    return EXIT_OK


def run_analyze(cfg: CliConfig) -> int:
    traces = _analyze_all(_load_documents(cfg))
    if cfg.out is None and cfg.format == "json" and len(traces) > 1:
        payload = json.dumps([t.to_dict() for t in traces], ensure_ascii=False, indent=2)
        sys.stdout.write(payload + "\n")
        return EXIT_OK
    for t in traces:
        stem = _safe_name(t.document.id)
        if cfg.format == "json":
            _emit(cfg, f"{stem}.trace.json", t.to_json())
        else:
            _emit(cfg, f"{stem}.trace.txt", render_trace(t.to_dict()))
    return EXIT_OK


def _load_traces(cfg: CliConfig) -> list[dict]:
    """Traces from trace JSON files as-is; corpus files are analyzed first."""
    traces: list[dict] = []
    for path in cfg.inputs:
        try:
            obj = json.loads(_read(path))
        except (json.JSONDecodeError, UnicodeDecodeError):
            obj = None
        items = obj if isinstance(obj, list) else [obj]
        if obj is not None and all(isinstance(t, dict) and "steps" in t for t in items):
            traces.extend(items)
            continue
        docs = _load_documents(dataclasses.replace(cfg, inputs=(path,)))
        traces.extend(t.to_dict() for t in _analyze_all(docs))
    return traces


def run_render(cfg: CliConfig) -> int:
    for t in _load_traces(cfg):
        _emit(cfg, f"{_safe_name(str(t.get('document', '')))}.table.txt", render_trace(t))
    return EXIT_OK


def run_stats(cfg: CliConfig) -> int:
    docs = _load_documents(cfg)
    report = summarize(docs, _analyze_all(docs))
    if report.max_depth > cfg.depth_warn:
        print(f"warning: maximum segment depth {report.max_depth} exceeds {cfg.depth_warn}",
              file=sys.stderr)
    if cfg.format == "json":
        _emit(cfg, "stats.json", report.to_json())
    else:
        _emit(cfg, "stats.txt", format_report(report))
    return EXIT_OK


COMMANDS = {"analyze": run_analyze, "render": run_render, "stats": run_stats,
            "validate": run_validate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="centerseg",
                                     description="Centered discourse segmentation and anaphora resolution.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("inputs", nargs="+", type=Path, metavar="FILE")
        p.add_argument("--format", choices=("text", "json"),
                       default="json" if name == "analyze" else "text")
        p.add_argument("--depth-warn", type=int, default=DEFAULT_DEPTH_WARN)
        p.add_argument("--out", type=Path, default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = CliConfig(args.command, tuple(args.inputs), args.format, args.depth_warn, args.out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        return COMMANDS[cfg.command](cfg)
    except _Failure as f:
        return f.status
    except RegistryInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
