#!/usr/bin/env python3
"""Run the full desk-scale pipeline over the bundled sample corpus.

Drives the CLI in-process through ingest, split, stats, enrich, lexrank
summarization, scoring, and assignment, fills the verdict store with the
seeded synthetic verdicts from make_demo_verdicts.py, and finishes with
the report stage. Everything lands in out-demo/ (override with
--out-dir); reruns produce byte-identical artifacts, only the manifests
re-stamp their creation time.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from make_demo_verdicts import build_verdicts

from leitsatz.cli import load_assignments, main as cli_main
from leitsatz.evalframe import export_verdicts

REPO = Path(__file__).resolve().parent.parent


def run(argv: list[str]) -> None:
    print("$ leitsatz " + " ".join(argv))
    code = cli_main(argv)
    if code != 0:
        sys.exit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", default=str(REPO / "data" / "sample_corpus.jsonl"))
    parser.add_argument("--out-dir", default="out-demo")
    parser.add_argument("--reviewers", default="r1,r2,r3")
    parser.add_argument("--per-item", type=int, default=3)
    parser.add_argument("--verdict-seed", type=int, default=11)
    args = parser.parse_args()

    out = Path(args.out_dir)
    base = ["--out-dir", str(out)]
    corpus = ["--corpus", args.corpus]

    run(base + ["ingest"] + corpus)
    run(base + ["split"] + corpus)
    run(base + ["stats"] + corpus)
    run(base + ["enrich"] + corpus)
    run(base + ["summarize"] + corpus + ["--approach", "lexrank"])
    run(base + ["score"] + corpus)
    run(
        base
        + ["assign", "--reviewers", args.reviewers, "--per-item", str(args.per_item)]
    )

    assignments = load_assignments(out / "assignments.json")
    store = build_verdicts(assignments, args.verdict_seed)
    verdict_path = out / "verdicts.jsonl"
    export_verdicts(store, verdict_path)
    print(f"wrote {len(list(store))} synthetic verdicts -> {verdict_path}")

    run(base + ["report"] + corpus)

    print("\nartifacts:")
    for path in sorted(out.iterdir()):
        print(f"  {path}")


if __name__ == "__main__":
    main()
