"""Monospace rendering of an analysis trace in the layout of the sample analysis table."""

from __future__ import annotations

LEGEND = ("# level columns: '+-' = segment begins here, '| ' = segment continues; "
          "Cf lists are ranked, the first entry is the preferred center")

BEGIN = "+-"
CONTINUE = "| "
BLANK = "  "


def _row_cells(trace: dict, depth: int) -> list[list[str]]:
    names = trace.get("entities", {})
    rows = []
    for st in trace["steps"]:
        i = st["utterance"]
        levels = [BLANK] * depth
        for seg in trace.get("segments", []):
            if seg["beg"] <= i <= seg["end"]:
                levels[seg["level"] - 1] = BEGIN if seg["beg"] == i else CONTINUE
        cb = names.get(st["cb"], st["cb"]) if st["cb"] is not None else "--"
        cf = "[" + ", ".join(e.get("label") or names.get(e["entity"], e["entity"])
                             for e in st["cf"]) + "]"
        rows.append([f"({i})", cb, cf, st["transition"], " ".join(levels), st["label"]])
    return rows


def render_trace(trace: dict) -> str:
    """Render a trace (as produced by ``AnalysisTrace.to_dict``) as a text table.

    Output depends only on the trace contents, so it is byte-stable.
    """
    depth = max([seg["level"] for seg in trace.get("segments", [])] + [1])
    header = ["U_i", "Cb", "Cf", "Trans.",
              " ".join(f"{lvl:<2}" for lvl in range(1, depth + 1)), "Block"]
    rows = _row_cells(trace, depth)
    widths = [max(len(r[c]) for r in rows + [header]) for c in range(len(header))]

    def fmt(cells: list[str]) -> str:
        return " | ".join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()

    lines = [f"# document: {trace.get('document', '')}", LEGEND, fmt(header),
             "-+-".join("-" * w for w in widths)]
    lines += [fmt(r) for r in rows]
    return "\n".join(lines) + "\n"
