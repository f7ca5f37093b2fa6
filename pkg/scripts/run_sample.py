"""Analyze the bundled sample document and print its table and statistics."""

import argparse

from centerseg import sample_document
from centerseg.evaluation import document_report, format_report
from centerseg.render import render_trace
from centerseg.segmenter import run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true", help="print the raw trace instead of the table")
    args = ap.parse_args()
    doc = sample_document()
    trace = run(doc)
    if args.json:
        print(trace.to_json(), end="")
        return
    print(render_trace(trace.to_dict()))
    print(format_report(document_report(doc, trace)), end="")


if __name__ == "__main__":
    main()
