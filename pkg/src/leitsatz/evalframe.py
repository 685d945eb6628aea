"""Human evaluation framework: classes, assignments, agreement, correlation.

Summaries are judged on seven binary classes. Each summary goes to a fixed
number of reviewers (default 3) and a class counts as fulfilled when a
strict majority marks it so. Agreement is chance-corrected multi-rater
kappa; reviewer pairs are compared with the same estimator at n=2 over the
(summary, class) decisions both of them rated.
"""

from __future__ import annotations

import json
import random
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ConfigError, DataError

NUM_CLASSES = 7
DEFAULT_PER_ITEM = 3


@dataclass(frozen=True)
class EvalClass:
    index: int
    aspect: str
    description: str


EVAL_CLASSES: tuple[EvalClass, ...] = (
    EvalClass(1, "Intelligibility", "Intelligible result"),
    EvalClass(2, "Language", "Correct use of German language"),
    EvalClass(3, "Pertinence", "Only necessary information"),
    EvalClass(4, "Completeness", "Inclusion of every aspect"),
    EvalClass(5, "Main Focus", "Inclusion of 3/4 of aspects"),
    EvalClass(6, "Correctness", "No error in legal reasoning"),
    EvalClass(7, "Superiority", "Superior compared to the original"),
)


@dataclass(frozen=True)
class ClassVerdict:
    reviewer_id: str
    judgment_id: str
    approach: str
    decisions: tuple[bool, ...]
    superiority_reasoning: str = ""
    comment: str = ""
    ts: str = ""

    def __post_init__(self):
        if len(self.decisions) != NUM_CLASSES:
            raise DataError(
                f"verdict needs exactly {NUM_CLASSES} decisions, got {len(self.decisions)}"
            )
        object.__setattr__(self, "decisions", tuple(bool(d) for d in self.decisions))
        if self.decisions[6] and not self.superiority_reasoning.strip():
            raise DataError("a fulfilled superiority class requires written reasoning")

    @property
    def summary_ref(self) -> tuple[str, str]:
        return (self.judgment_id, self.approach)

    def to_record(self) -> dict:
        return {
            "reviewer": self.reviewer_id,
            "judgment_id": self.judgment_id,
            "approach": self.approach,
            "decisions": list(self.decisions),
            "reasoning": self.superiority_reasoning,
            "comment": self.comment,
            "ts": self.ts,
        }

    @classmethod
    def from_record(cls, record: dict, where: str = "record") -> "ClassVerdict":
        try:
            decisions = record["decisions"]
            if not isinstance(decisions, list):
                raise DataError(f"{where}: decisions must be a list")
            return cls(
                reviewer_id=str(record["reviewer"]),
                judgment_id=str(record["judgment_id"]),
                approach=str(record["approach"]),
                decisions=tuple(bool(d) for d in decisions),
                superiority_reasoning=str(record.get("reasoning", "")),
                comment=str(record.get("comment", "")),
                ts=str(record.get("ts", "")),
            )
        except KeyError as exc:
            raise DataError(f"{where}: missing field {exc.args[0]!r}") from None


class VerdictStore:
    """One current verdict per (reviewer, judgment, approach); edits supersede."""

    def __init__(self, verdicts: Iterable[ClassVerdict] = ()):
        self._current: dict[tuple[str, str, str], ClassVerdict] = {}
        self.audit: list[ClassVerdict] = []
        for v in verdicts:
            self.add(v)

    @staticmethod
    def _key(v: ClassVerdict) -> tuple[str, str, str]:
        return (v.reviewer_id, v.judgment_id, v.approach)

    def add(self, verdict: ClassVerdict) -> None:
        key = self._key(verdict)
        if key in self._current:
            raise DataError(
                f"verdict already submitted by {verdict.reviewer_id!r} for "
                f"({verdict.judgment_id!r}, {verdict.approach!r})"
            )
        self._current[key] = verdict

    def supersede(self, verdict: ClassVerdict) -> None:
        """Replace an existing verdict, keeping the old one for audit."""
        key = self._key(verdict)
        old = self._current.get(key)
        if old is not None:
            self.audit.append(old)
        self._current[key] = verdict

    def get(self, reviewer_id: str, judgment_id: str, approach: str) -> ClassVerdict | None:
        return self._current.get((reviewer_id, judgment_id, approach))

    def by_summary(self, judgment_id: str, approach: str) -> list[ClassVerdict]:
        return [
            v
            for v in self._current.values()
            if v.judgment_id == judgment_id and v.approach == approach
        ]

    def reviewers(self) -> list[str]:
        return sorted({v.reviewer_id for v in self._current.values()})

    def summary_refs(self) -> list[tuple[str, str]]:
        return sorted({v.summary_ref for v in self._current.values()})

    def __iter__(self) -> Iterator[ClassVerdict]:
        return iter(sorted(self._current.values(), key=self._key))

    def __len__(self) -> int:
        return len(self._current)


def export_verdicts(store: VerdictStore, path: str | Path) -> None:
    """Write every current verdict as JSONL, ordered by (reviewer, judgment, approach)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for verdict in store:
            fh.write(json.dumps(verdict.to_record(), ensure_ascii=False))
            fh.write("\n")


def import_verdicts(path: str | Path) -> VerdictStore:
    store = VerdictStore()
    p = Path(path)
    if not p.exists():
        raise DataError(f"verdict file does not exist: {p}")
    with p.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{p}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{where}: invalid JSON: {exc}") from exc
            store.add(ClassVerdict.from_record(record, where))
    return store


@dataclass(frozen=True)
class Assignment:
    judgment_id: str
    approach: str
    reviewer_ids: frozenset[str]
    presentation_order_seed: int

    @property
    def summary_ref(self) -> tuple[str, str]:
        return (self.judgment_id, self.approach)


def _summary_ref(summary) -> tuple[str, str]:
    if isinstance(summary, tuple):
        jid, approach = summary
        return (str(jid), str(approach))
    return (summary.judgment_id, summary.approach)


def build_assignments(
    summaries: Sequence,
    reviewers: Sequence[str],
    per_item: int = DEFAULT_PER_ITEM,
    seed: int = 0,
) -> list[Assignment]:
    """Assign each summary to per_item reviewers, loads balanced within a group size.

    All approaches of one judgment go to the same reviewer trio so paired
    comparison stays possible. Judgments are handled in seeded random order
    and each one picks the currently least-loaded reviewers, so when every
    judgment carries one summary the loads end up within 1 of each other.
    """
    reviewer_list = list(reviewers)
    if len(set(reviewer_list)) != len(reviewer_list):
        raise ConfigError("reviewer ids must be unique")
    if per_item < 1:
        raise ConfigError(f"per_item must be >= 1, got {per_item}")
    if len(reviewer_list) < per_item:
        raise ConfigError(
            f"need at least {per_item} reviewers, got {len(reviewer_list)}"
        )

    refs = [_summary_ref(s) for s in summaries]
    if len(set(refs)) != len(refs):
        raise DataError("duplicate (judgment, approach) among summaries")
    by_judgment: dict[str, list[tuple[str, str]]] = {}
    for ref in refs:
        by_judgment.setdefault(ref[0], []).append(ref)

    rng = random.Random(seed)
    judgment_ids = sorted(by_judgment)
    rng.shuffle(judgment_ids)
    load = {r: 0 for r in reviewer_list}
    assignments: list[Assignment] = []
    for jid in judgment_ids:
        group = by_judgment[jid]
        priority = {r: rng.random() for r in reviewer_list}
        chosen = sorted(reviewer_list, key=lambda r: (load[r], priority[r]))[:per_item]
        trio = frozenset(chosen)
        for r in chosen:
            load[r] += len(group)
        for ref in group:
            assignments.append(
                Assignment(
                    judgment_id=ref[0],
                    approach=ref[1],
                    reviewer_ids=trio,
                    presentation_order_seed=seed,
                )
            )
    assignments.sort(key=lambda a: (a.judgment_id, a.approach))
    return assignments


def majority_verdict(verdicts: Sequence[ClassVerdict], per_item: int = DEFAULT_PER_ITEM) -> tuple[bool, ...]:
    """Per-class strict majority over exactly per_item verdicts for one summary."""
    if len(verdicts) != per_item:
        raise DataError(f"expected exactly {per_item} verdicts, got {len(verdicts)}")
    refs = {v.summary_ref for v in verdicts}
    if len(refs) > 1:
        raise DataError(f"verdicts span multiple summaries: {sorted(refs)}")
    needed = per_item // 2 + 1
    return tuple(
        sum(v.decisions[c] for v in verdicts) >= needed for c in range(NUM_CLASSES)
    )


@dataclass(frozen=True)
class FleissResult:
    kappa: float
    observed: float
    expected: float


def fleiss_details(units: Sequence[Sequence[int]]) -> FleissResult:
    """Multi-rater chance-corrected agreement over category-count rows.

    Every row lists how many raters chose each category; all rows must sum
    to the same rater count n >= 2. When expected agreement is 1 (all mass
    on one category) observed agreement is necessarily 1 too and the
    coefficient is defined as 1.
    """
    if not units:
        raise DataError("agreement needs at least one unit")
    n = sum(units[0])
    if n < 2:
        raise DataError(f"need at least 2 raters per unit, got {n}")
    k = len(units[0])
    total = [0] * k
    p_sum = 0.0
    for i, row in enumerate(units):
        if len(row) != k:
            raise DataError(f"unit {i} has {len(row)} categories, expected {k}")
        if any(c < 0 for c in row):
            raise DataError(f"unit {i} has negative counts")
        if sum(row) != n:
            raise DataError(f"unit {i} has {sum(row)} ratings, expected {n}")
        p_sum += (sum(c * c for c in row) - n) / (n * (n - 1))
        for j, c in enumerate(row):
            total[j] += c
    big_n = len(units)
    observed = p_sum / big_n
    shares = [t / (big_n * n) for t in total]
    expected = sum(s * s for s in shares)
    if expected >= 1.0:
        return FleissResult(kappa=1.0, observed=observed, expected=expected)
    kappa = (observed - expected) / (1.0 - expected)
    return FleissResult(kappa=kappa, observed=observed, expected=expected)


def fleiss_kappa(units: Sequence[Sequence[int]]) -> float:
    return fleiss_details(units).kappa


def _shared_units(a: Sequence[ClassVerdict], b: Sequence[ClassVerdict]) -> list[list[int]]:
    """Binary category counts over the (summary, class) decisions both made."""
    b_by_ref = {v.summary_ref: v for v in b}
    units: list[list[int]] = []
    for va in a:
        vb = b_by_ref.get(va.summary_ref)
        if vb is None:
            continue
        for c in range(NUM_CLASSES):
            fulfilled = int(va.decisions[c]) + int(vb.decisions[c])
            units.append([fulfilled, 2 - fulfilled])
    return units


def pairwise_kappa_matrix(
    store: VerdictStore,
) -> tuple[dict[tuple[str, str], float], list[tuple[str, str]]]:
    """Agreement per reviewer pair; pairs without shared summaries reported absent."""
    reviewers = store.reviewers()
    by_reviewer: dict[str, list[ClassVerdict]] = {r: [] for r in reviewers}
    for v in store:
        by_reviewer[v.reviewer_id].append(v)
    values: dict[tuple[str, str], float] = {}
    absent: list[tuple[str, str]] = []
    for i, r1 in enumerate(reviewers):
        for r2 in reviewers[i + 1 :]:
            units = _shared_units(by_reviewer[r1], by_reviewer[r2])
            if not units:
                absent.append((r1, r2))
                continue
            values[(r1, r2)] = fleiss_details(units).kappa
    return values, absent


@dataclass
class ClassAgreement:
    class_index: int
    kappa: float | None
    pairwise_mean: float | None
    fulfilled: int
    not_fulfilled: int
    observed: float | None
    expected: float | None

    def to_dict(self) -> dict:
        return {
            "class": self.class_index,
            "aspect": EVAL_CLASSES[self.class_index - 1].aspect,
            "kappa": self.kappa,
            "pairwise_mean_kappa": self.pairwise_mean,
            "fulfilled": self.fulfilled,
            "not_fulfilled": self.not_fulfilled,
            "observed_agreement": self.observed,
            "expected_agreement": self.expected,
        }


def _complete_groups(
    store: VerdictStore, per_item: int
) -> tuple[dict[tuple[str, str], list[ClassVerdict]], list[dict]]:
    groups: dict[tuple[str, str], list[ClassVerdict]] = {}
    for v in store:
        groups.setdefault(v.summary_ref, []).append(v)
    complete: dict[tuple[str, str], list[ClassVerdict]] = {}
    excluded: list[dict] = []
    for ref in sorted(groups):
        vs = groups[ref]
        if len(vs) == per_item:
            complete[ref] = vs
        else:
            excluded.append(
                {
                    "judgment_id": ref[0],
                    "approach": ref[1],
                    "verdicts": len(vs),
                    "expected": per_item,
                }
            )
    return complete, excluded


def per_class_kappa(
    store: VerdictStore, per_item: int = DEFAULT_PER_ITEM
) -> tuple[dict[int, ClassAgreement], list[dict]]:
    """Per class: multi-rater kappa over summaries plus decision tallies.

    Summaries lacking exactly per_item verdicts are excluded and listed.
    The pairwise mean is the average of the two-rater coefficients over
    reviewer pairs restricted to this class, emitted alongside the
    multi-rater value because either reading of an "average" is defensible.
    """
    complete, excluded = _complete_groups(store, per_item)
    per_class: dict[int, ClassAgreement] = {}
    reviewers = store.reviewers()
    by_reviewer: dict[str, list[ClassVerdict]] = {r: [] for r in reviewers}
    for vs in complete.values():
        for v in vs:
            by_reviewer[v.reviewer_id].append(v)
    for c in range(NUM_CLASSES):
        units = []
        fulfilled = 0
        for ref in sorted(complete):
            yes = sum(v.decisions[c] for v in complete[ref])
            fulfilled += yes
            units.append([yes, per_item - yes])
        if units:
            details = fleiss_details(units)
            kappa, observed, expected = details.kappa, details.observed, details.expected
        else:
            kappa = observed = expected = None
        pair_values = []
        for i, r1 in enumerate(reviewers):
            for r2 in reviewers[i + 1 :]:
                b_by_ref = {v.summary_ref: v for v in by_reviewer[r2]}
                pair_units = []
                for va in by_reviewer[r1]:
                    vb = b_by_ref.get(va.summary_ref)
                    if vb is None:
                        continue
                    yes = int(va.decisions[c]) + int(vb.decisions[c])
                    pair_units.append([yes, 2 - yes])
                if pair_units:
                    pair_values.append(fleiss_details(pair_units).kappa)
        total_decisions = len(units) * per_item
        per_class[c + 1] = ClassAgreement(
            class_index=c + 1,
            kappa=kappa,
            pairwise_mean=statistics.mean(pair_values) if pair_values else None,
            fulfilled=fulfilled,
            not_fulfilled=total_decisions - fulfilled,
            observed=observed,
            expected=expected,
        )
    return per_class, excluded


@dataclass
class AgreementReport:
    reviewers: tuple[str, ...]
    pairwise: dict[tuple[str, str], float]
    pairwise_absent: list[tuple[str, str]]
    per_class: dict[int, ClassAgreement]
    excluded_summaries: list[dict]

    def pairwise_value(self, r1: str, r2: str) -> float | None:
        if r1 == r2:
            return 1.0
        key = (r1, r2) if (r1, r2) in self.pairwise else (r2, r1)
        return self.pairwise.get(key)

    def pairwise_matrix(self) -> list[list[float | None]]:
        return [[self.pairwise_value(r1, r2) for r2 in self.reviewers] for r1 in self.reviewers]

    def to_dict(self) -> dict:
        return {
            "unit": "one (summary, class) binary decision",
            "reviewers": list(self.reviewers),
            "pairwise_matrix": self.pairwise_matrix(),
            "pairwise_absent": [list(p) for p in self.pairwise_absent],
            "per_class": [self.per_class[c].to_dict() for c in sorted(self.per_class)],
            "excluded_summaries": list(self.excluded_summaries),
        }


def agreement_report(store: VerdictStore, per_item: int = DEFAULT_PER_ITEM) -> AgreementReport:
    pairwise, absent = pairwise_kappa_matrix(store)
    per_class, excluded = per_class_kappa(store, per_item)
    return AgreementReport(
        reviewers=tuple(store.reviewers()),
        pairwise=pairwise,
        pairwise_absent=absent,
        per_class=per_class,
        excluded_summaries=excluded,
    )


@dataclass
class FulfillmentReport:
    """Per approach: fraction of judgments whose majority fulfills each class."""

    approaches: tuple[str, ...]
    fractions: dict[str, tuple[float, ...]]
    mean_fulfilled: dict[str, float]
    judgment_counts: dict[str, int]
    excluded: list[dict]

    def rows(self) -> list[dict]:
        out = []
        for approach in self.approaches:
            row: dict = {"approach": approach, "judgments": self.judgment_counts[approach]}
            for c in range(NUM_CLASSES):
                row[f"class_{c + 1}"] = self.fractions[approach][c]
            row["mean_classes_fulfilled"] = self.mean_fulfilled[approach]
            out.append(row)
        return out

    def to_dict(self) -> dict:
        return {"rows": self.rows(), "excluded": list(self.excluded)}


def majority_verdicts(
    store: VerdictStore, per_item: int = DEFAULT_PER_ITEM
) -> tuple[dict[tuple[str, str], tuple[bool, ...]], list[dict]]:
    """Majority decision per fully reviewed summary; incomplete ones listed."""
    complete, excluded = _complete_groups(store, per_item)
    return {ref: majority_verdict(vs, per_item) for ref, vs in complete.items()}, excluded


def fulfillment_report(
    store: VerdictStore, per_item: int = DEFAULT_PER_ITEM
) -> FulfillmentReport:
    """Majority-fulfillment percentages per approach and class, plus the mean count."""
    majorities, excluded = majority_verdicts(store, per_item)
    approaches: list[str] = []
    for _, approach in sorted(majorities):
        if approach not in approaches:
            approaches.append(approach)
    fractions: dict[str, tuple[float, ...]] = {}
    mean_fulfilled: dict[str, float] = {}
    counts: dict[str, int] = {}
    for approach in approaches:
        rows = [m for (jid, a), m in majorities.items() if a == approach]
        counts[approach] = len(rows)
        fractions[approach] = tuple(
            sum(m[c] for m in rows) / len(rows) for c in range(NUM_CLASSES)
        )
        mean_fulfilled[approach] = statistics.mean(sum(m) for m in rows)
    return FulfillmentReport(
        approaches=tuple(approaches),
        fractions=fractions,
        mean_fulfilled=mean_fulfilled,
        judgment_counts=counts,
        excluded=excluded,
    )


def _average_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for idx in order[i : j + 1]:
            ranks[idx] = mean_rank
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Rank correlation (mean ranks on ties); None when a side is constant."""
    if len(x) != len(y):
        raise DataError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise DataError(f"need at least 3 observations, got {len(x)}")
    rx = _average_ranks(list(x))
    ry = _average_ranks(list(y))
    mx = statistics.mean(rx)
    my = statistics.mean(ry)
    dx = [a - mx for a in rx]
    dy = [b - my for b in ry]
    sxx = sum(a * a for a in dx)
    syy = sum(b * b for b in dy)
    if sxx == 0 or syy == 0:
        return None
    sxy = sum(a * b for a, b in zip(dx, dy))
    rho = sxy / (sxx * syy) ** 0.5
    return max(-1.0, min(1.0, rho))


def interpret_kappa(value: float) -> str:
    """Landis–Koch label for an agreement coefficient."""
    if not -1.0 <= value <= 1.0:
        raise DataError(f"agreement value out of [-1, 1]: {value}")
    if value <= 0.0:
        return "poor"
    if value <= 0.20:
        return "slight"
    if value <= 0.40:
        return "fair"
    if value <= 0.60:
        return "moderate"
    if value <= 0.80:
        return "substantial"
    return "almost perfect"


def interpret_rho(value: float) -> str:
    """Cohen-style strength label for a correlation coefficient."""
    if not -1.0 <= value <= 1.0:
        raise DataError(f"correlation value out of [-1, 1]: {value}")
    mag = abs(value)
    if mag < 0.10:
        return "negligible"
    if mag < 0.30:
        return "low"
    if mag < 0.50:
        return "medium"
    return "large"


def interpret(value: float, scale: str) -> str:
    if scale == "kappa":
        return interpret_kappa(value)
    if scale == "rho":
        return interpret_rho(value)
    raise ConfigError(f"unknown interpretation scale {scale!r} (want 'kappa' or 'rho')")


# Which metric component is expected to track which class: recall against the
# coverage classes (4 full, 5 main aspects), precision against pertinence (3).
CORRELATION_PAIRS: tuple[tuple[str, int], ...] = (
    ("recall", 4),
    ("recall", 5),
    ("precision", 3),
)


def correlate_metrics_with_classes(
    per_summary: Mapping[tuple[str, str, str], object],
    majorities: Mapping[tuple[str, str], Sequence[bool]],
) -> list[dict]:
    """Rank-correlate metric components with majority class outcomes.

    per_summary maps (judgment_id, approach, metric) to a PRF; majorities
    maps (judgment_id, approach) to the seven booleans. Class outcomes
    enter as 0/1 reals. Pairs with an undefined coefficient (constant
    vector) are emitted with rho None.
    """
    metrics = sorted({metric for (_, _, metric) in per_summary})
    rows: list[dict] = []
    for metric in metrics:
        for component, class_index in CORRELATION_PAIRS:
            xs: list[float] = []
            ys: list[float] = []
            for (jid, approach, m), prf in sorted(per_summary.items()):
                if m != metric:
                    continue
                majority = majorities.get((jid, approach))
                if majority is None:
                    continue
                xs.append(getattr(prf, component))
                ys.append(1.0 if majority[class_index - 1] else 0.0)
            row = {
                "metric": metric,
                "component": component,
                "class": class_index,
                "n": len(xs),
            }
            if len(xs) >= 3:
                rho = spearman(xs, ys)
                row["rho"] = rho
                row["strength"] = interpret_rho(rho) if rho is not None else "undefined"
            else:
                row["rho"] = None
                row["strength"] = "undefined"
            rows.append(row)
    return rows
