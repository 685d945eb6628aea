#!/usr/bin/env python3
"""Generate seeded synthetic verdicts for an assignment file.

Reads assignments.json, draws one seven-class verdict per (item, reviewer)
pair from a fixed RNG, and writes a verdict store the report stage can
consume. Stands in for the review backend when no human reviewers are
around; the draws are deterministic per seed.
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

from leitsatz.cli import load_assignments
from leitsatz.evalframe import ClassVerdict, VerdictStore, export_verdicts

REASONING = (
    "Der Kandidat benennt den tragenden Grund knapper und ohne die "
    "Nebenaspekte der Referenz."
)

# fulfillment probability per class; superiority (class 7) stays rare
CLASS_WEIGHTS = (0.9, 0.85, 0.8, 0.7, 0.8, 0.85, 0.1)


def draw_decisions(rng: random.Random) -> tuple[bool, ...]:
    return tuple(rng.random() < w for w in CLASS_WEIGHTS)


def build_verdicts(assignments, seed: int) -> VerdictStore:
    rng = random.Random(seed)
    store = VerdictStore()
    ordered = sorted(assignments, key=lambda a: (a.judgment_id, a.approach))
    for assignment in ordered:
        for reviewer in sorted(assignment.reviewer_ids):
            decisions = draw_decisions(rng)
            store.add(
                ClassVerdict(
                    reviewer_id=reviewer,
                    judgment_id=assignment.judgment_id,
                    approach=assignment.approach,
                    decisions=decisions,
                    superiority_reasoning=REASONING if decisions[6] else "",
                )
            )
    return store


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--assignments", default="out-demo/assignments.json")
    parser.add_argument("--out", default="out-demo/verdicts.jsonl")
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()

    assignments = load_assignments(Path(args.assignments))
    store = build_verdicts(assignments, args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    export_verdicts(store, out)
    print(f"wrote {len(list(store))} verdicts -> {out}")


if __name__ == "__main__":
    main()
