"""Segment a synthetic corpus and report how often each block fires and how deep segments nest.

Documents come from the same generator the test suite uses, so the numbers
show how well the random corpus covers the algorithm.
"""

import argparse
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from helpers import random_corpus  # noqa: E402

from centerseg.evaluation import summarize  # noqa: E402
from centerseg.segmenter import run  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20261016)
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--max-utterances", type=int, default=8)
    ap.add_argument("--max-entities", type=int, default=5)
    args = ap.parse_args()

    docs = random_corpus(args.seed, args.count, max_utterances=args.max_utterances,
                         max_entities=args.max_entities)
    traces = [run(d) for d in docs]
    blocks = Counter(st.label or "init" for t in traces for st in t.steps)
    depths = Counter(t.max_depth for t in traces)
    lifts = Counter(st.lift_result[0] - st.lift_result[1] for t in traces for st in t.steps
                    if st.lifted)

    print(f"{len(docs)} documents, {sum(len(d) for d in docs)} utterances")
    print("blocks:", ", ".join(f"{k}={v}" for k, v in sorted(blocks.items())))
    print("lift jumps:", ", ".join(f"{k}={v}" for k, v in sorted(lifts.items())) or "none")
    print("max depth per document:", ", ".join(f"{k}={v}" for k, v in sorted(depths.items())))
    rep = summarize(docs, traces)
    print("outcomes:", ", ".join(f"{k}={v}" for k, v in rep.outcomes.items()))


if __name__ == "__main__":
    main()
