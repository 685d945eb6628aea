"""Verdicts, assignments, agreement statistics, and correlations."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import pytest
import scipy.stats

from leitsatz.errors import ConfigError, DataError
from leitsatz.evalframe import (
    Assignment,
    ClassVerdict,
    CORRELATION_PAIRS,
    EVAL_CLASSES,
    VerdictStore,
    agreement_report,
    build_assignments,
    correlate_metrics_with_classes,
    export_verdicts,
    fleiss_details,
    fleiss_kappa,
    fulfillment_report,
    import_verdicts,
    interpret,
    interpret_kappa,
    interpret_rho,
    majority_verdict,
    majority_verdicts,
    pairwise_kappa_matrix,
    per_class_kappa,
    spearman,
)
from leitsatz.metrics import PRF

from conftest import verdict
from verdict_fixture import (
    DECISIONS,
    EXPECTED_FRACTIONS,
    EXPECTED_MAJORITY,
    EXPECTED_MEAN_FULFILLED,
    build_store,
)


def fleiss_oracle(matrix):
    """Direct transcription of the agreement formulas, no shared code."""
    units = len(matrix)
    n = sum(matrix[0])
    total = units * n
    k = len(matrix[0])
    p_j = [sum(row[j] for row in matrix) / total for j in range(k)]
    p_i = [(sum(c * c for c in row) - n) / (n * (n - 1)) for row in matrix]
    observed = sum(p_i) / units
    expected = sum(p * p for p in p_j)
    if expected >= 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


class TestEvalClasses:
    def test_seven_classes_fixed(self):
        assert [c.index for c in EVAL_CLASSES] == [1, 2, 3, 4, 5, 6, 7]
        assert [c.aspect for c in EVAL_CLASSES] == [
            "Intelligibility",
            "Language",
            "Pertinence",
            "Completeness",
            "Main Focus",
            "Correctness",
            "Superiority",
        ]
        assert EVAL_CLASSES[0].description == "Intelligible result"
        assert EVAL_CLASSES[1].description == "Correct use of German language"
        assert EVAL_CLASSES[2].description == "Only necessary information"
        assert EVAL_CLASSES[3].description == "Inclusion of every aspect"
        assert EVAL_CLASSES[4].description == "Inclusion of 3/4 of aspects"
        assert EVAL_CLASSES[5].description == "No error in legal reasoning"
        assert EVAL_CLASSES[6].description == "Superior compared to the original"


class TestClassVerdict:
    def test_wrong_decision_count(self):
        with pytest.raises(DataError):
            ClassVerdict("r", "j", "gold", (True,) * 6)
        with pytest.raises(DataError):
            ClassVerdict("r", "j", "gold", (True,) * 8)

    def test_superiority_requires_reasoning(self):
        with pytest.raises(DataError):
            ClassVerdict("r", "j", "gold", (False,) * 6 + (True,), superiority_reasoning="")

    def test_superiority_with_reasoning_ok(self):
        v = verdict("r", "j", "gold", (False,) * 6 + (True,), reasoning="besser strukturiert")
        assert v.decisions[6] is True

    def test_bool_coercion(self):
        v = ClassVerdict("r", "j", "gold", (1, 0, 1, 0, 1, 0, 0))
        assert v.decisions == (True, False, True, False, True, False, False)

    def test_record_round_trip(self):
        v = verdict("r", "j", "lexrank", (True,) * 7, reasoning="klarer", comment="gut", ts="2024-01-01T00:00:00+00:00")
        rec = v.to_record()
        assert rec["reviewer"] == "r"
        assert rec["reasoning"] == "klarer"
        assert ClassVerdict.from_record(rec) == v


class TestVerdictStore:
    def test_duplicate_rejected(self):
        store = VerdictStore([verdict("r", "j", "gold", (True,) * 6 + (False,))])
        with pytest.raises(DataError):
            store.add(verdict("r", "j", "gold", (False,) * 7))

    def test_supersede_keeps_audit(self):
        first = verdict("r", "j", "gold", (True,) * 6 + (False,))
        second = verdict("r", "j", "gold", (False,) * 7)
        store = VerdictStore([first])
        store.supersede(second)
        assert store.get("r", "j", "gold") == second
        assert first in store.audit

    def test_by_summary_and_reviewers(self):
        store = build_store()
        assert store.reviewers() == ["r1", "r2", "r3"]
        assert len(store.by_summary("j1", "gold")) == 3
        assert ("j1", "lexrank") in store.summary_refs()

    def test_export_import_identity(self, tmp_path):
        store = build_store()
        path = tmp_path / "verdicts.jsonl"
        export_verdicts(store, path)
        again = import_verdicts(path)
        assert list(again) == list(store)

    def test_import_rejects_bad_record(self, tmp_path):
        path = tmp_path / "verdicts.jsonl"
        path.write_text('{"reviewer": "r"}\n', encoding="utf-8")
        with pytest.raises(DataError):
            import_verdicts(path)


@dataclass(frozen=True)
class Summary:
    judgment_id: str
    approach: str


class TestAssignments:
    def test_200_summaries_5_reviewers_balanced_exactly(self):
        summaries = [Summary(f"j{i}", "lexrank") for i in range(200)]
        got = build_assignments(summaries, [f"r{i}" for i in range(5)], per_item=3, seed=42)
        loads = {}
        for a in got:
            assert len(a.reviewer_ids) == 3
            for r in a.reviewer_ids:
                loads[r] = loads.get(r, 0) + 1
        assert sorted(loads.values()) == [120] * 5

    def test_grouped_approaches_balanced_exactly(self):
        summaries = [
            Summary(f"j{i}", approach)
            for i in range(50)
            for approach in ("lexrank", "model_plain", "model_enriched", "gold")
        ]
        got = build_assignments(summaries, [f"r{i}" for i in range(5)], per_item=3, seed=1)
        loads = {}
        for a in got:
            for r in a.reviewer_ids:
                loads[r] = loads.get(r, 0) + 1
        assert sorted(loads.values()) == [120] * 5

    def test_same_trio_per_judgment(self):
        summaries = [Summary("j1", "gold"), Summary("j1", "lexrank"), Summary("j2", "gold")]
        got = build_assignments(summaries, ["a", "b", "c", "d"], per_item=3, seed=3)
        by_ref = {a.summary_ref: a.reviewer_ids for a in got}
        assert by_ref[("j1", "gold")] == by_ref[("j1", "lexrank")]

    def test_single_summary_all_assigned(self):
        got = build_assignments([Summary("j", "gold")], ["a", "b", "c"], per_item=3, seed=0)
        assert got[0].reviewer_ids == frozenset({"a", "b", "c"})

    def test_too_few_reviewers(self):
        with pytest.raises(ConfigError):
            build_assignments([Summary("j", "gold")], ["a", "b"], per_item=3, seed=0)

    def test_duplicate_summary_rejected(self):
        with pytest.raises(DataError):
            build_assignments([Summary("j", "gold")] * 2, ["a", "b", "c"], per_item=3, seed=0)

    def test_deterministic_per_seed(self):
        summaries = [Summary(f"j{i}", "lexrank") for i in range(30)]
        reviewers = [f"r{i}" for i in range(5)]
        assert build_assignments(summaries, reviewers, 3, seed=9) == build_assignments(
            summaries, reviewers, 3, seed=9
        )
        assert build_assignments(summaries, reviewers, 3, seed=9) != build_assignments(
            summaries, reviewers, 3, seed=10
        )

    def test_seed_recorded_for_presentation_order(self):
        got = build_assignments([Summary("j", "gold")], ["a", "b", "c"], per_item=3, seed=77)
        assert got[0].presentation_order_seed == 77

    def test_random_feasible_configs_loads_within_one(self):
        rng = random.Random(2718)
        for _ in range(50):
            per_item = rng.randint(1, 4)
            n_rev = rng.randint(per_item, per_item + 4)
            n_sum = rng.randint(1, 60)
            summaries = [Summary(f"j{i}", "lexrank") for i in range(n_sum)]
            reviewers = [f"r{i}" for i in range(n_rev)]
            got = build_assignments(summaries, reviewers, per_item, seed=rng.randint(0, 999))
            loads = {r: 0 for r in reviewers}
            for a in got:
                assert len(a.reviewer_ids) == per_item
                for r in a.reviewer_ids:
                    loads[r] += 1
            assert max(loads.values()) - min(loads.values()) <= 1


class TestMajority:
    def test_fixture_majorities(self):
        store = build_store()
        for (jid, approach), expect in EXPECTED_MAJORITY.items():
            assert majority_verdict(store.by_summary(jid, approach)) == expect

    def test_wrong_count_rejected(self):
        store = build_store()
        with pytest.raises(DataError):
            majority_verdict(store.by_summary("j1", "gold")[:2])

    def test_mixed_refs_rejected(self):
        a = verdict("r1", "j1", "gold", (True,) * 6 + (False,))
        b = verdict("r2", "j1", "gold", (True,) * 6 + (False,))
        c = verdict("r3", "j2", "gold", (True,) * 6 + (False,))
        with pytest.raises(DataError):
            majority_verdict([a, b, c])

    def test_monotone_under_true_flip(self):
        rng = random.Random(5)
        for _ in range(100):
            decisions = [
                tuple(rng.random() < 0.5 for _ in range(7)) for _ in range(3)
            ]
            vs = [
                verdict(f"r{i}", "j", "gold", d)
                for i, d in enumerate(decisions)
            ]
            base = majority_verdict(vs)
            i = rng.randrange(3)
            c = rng.randrange(7)
            flipped = list(decisions[i])
            flipped[c] = True
            vs[i] = verdict(f"r{i}", "j", "gold", tuple(flipped))
            grown = majority_verdict(vs)
            for k in range(7):
                assert not (base[k] and not grown[k])

    def test_majority_verdicts_excludes_incomplete(self):
        store = build_store()
        store.add(verdict("r1", "extra", "gold", (True,) * 6 + (False,)))
        got, excluded = majority_verdicts(store)
        assert ("extra", "gold") not in got
        assert excluded and excluded[0]["judgment_id"] == "extra"
        assert len(got) == 8


class TestFleiss:
    def test_perfect_agreement_exactly_one(self):
        assert fleiss_kappa([[3, 0], [0, 3], [3, 0]]) == 1.0

    def test_hand_fixture(self):
        details = fleiss_details([[2, 0], [1, 1], [0, 2], [2, 0]])
        assert details.observed == pytest.approx(0.75, abs=1e-12)
        assert details.expected == pytest.approx(0.53125, abs=1e-12)
        assert details.kappa == pytest.approx(0.4666666666666667, abs=1e-9)

    def test_uniform_random_ratings_near_zero(self):
        rng = random.Random(1337)
        units = []
        for _ in range(10_000):
            yes = sum(1 for _ in range(2) if rng.random() < 0.5)
            units.append([yes, 2 - yes])
        assert abs(fleiss_kappa(units)) < 0.05

    def test_matches_oracle_on_random_matrices(self):
        rng = random.Random(404)
        for _ in range(300):
            raters = rng.randint(2, 5)
            cats = rng.randint(2, 4)
            rows = []
            for _ in range(rng.randint(1, 20)):
                row = [0] * cats
                for _ in range(raters):
                    row[rng.randrange(cats)] += 1
                rows.append(row)
            assert fleiss_kappa(rows) == pytest.approx(fleiss_oracle(rows), abs=1e-12)

    def test_label_swap_invariance(self):
        rows = [[2, 1], [0, 3], [1, 2], [3, 0]]
        swapped = [[b, a] for a, b in rows]
        assert fleiss_kappa(rows) == pytest.approx(fleiss_kappa(swapped), abs=1e-12)

    def test_degenerate_single_category(self):
        assert fleiss_kappa([[3, 0], [3, 0]]) == 1.0

    def test_row_validation(self):
        with pytest.raises(DataError):
            fleiss_kappa([])
        with pytest.raises(DataError):
            fleiss_kappa([[2, 0], [1, 0]])
        with pytest.raises(DataError):
            fleiss_kappa([[1, 0]])


class TestPairwise:
    def test_identical_reviewers_get_one(self):
        store = VerdictStore()
        for jid in ("j1", "j2"):
            for r in ("a", "b"):
                store.add(verdict(r, jid, "gold", (True, False, True, False, True, False, False)))
        values, absent = pairwise_kappa_matrix(store)
        assert values[("a", "b")] == 1.0
        assert absent == []

    def test_disjoint_reviewers_absent(self):
        store = VerdictStore(
            [
                verdict("a", "j1", "gold", (True,) * 6 + (False,)),
                verdict("b", "j2", "gold", (True,) * 6 + (False,)),
            ]
        )
        values, absent = pairwise_kappa_matrix(store)
        assert values == {}
        assert absent == [("a", "b")]

    def test_matches_unit_construction_oracle(self):
        store = build_store()
        values, absent = pairwise_kappa_matrix(store)
        assert absent == []
        for (a, b), got in values.items():
            units = []
            for (jid, approach), by_reviewer in DECISIONS.items():
                for c in range(7):
                    da = by_reviewer[a][c]
                    db = by_reviewer[b][c]
                    units.append([int(da) + int(db), 2 - int(da) - int(db)])
            assert got == pytest.approx(fleiss_oracle(units), abs=1e-12)

    def test_relabeling_equivariance(self):
        store = build_store()
        values, _ = pairwise_kappa_matrix(store)
        renamed = VerdictStore()
        mapping = {"r1": "zz", "r2": "aa", "r3": "mm"}
        for v in store:
            renamed.add(
                ClassVerdict(
                    mapping[v.reviewer_id],
                    v.judgment_id,
                    v.approach,
                    v.decisions,
                    v.superiority_reasoning,
                    v.comment,
                    v.ts,
                )
            )
        renamed_values, _ = pairwise_kappa_matrix(renamed)
        for (a, b), value in values.items():
            key = tuple(sorted((mapping[a], mapping[b])))
            assert renamed_values[key] == pytest.approx(value, abs=1e-15)


class TestPerClass:
    def test_unanimous_store(self):
        store = VerdictStore()
        for jid in ("j1", "j2"):
            for r in ("a", "b", "c"):
                store.add(verdict(r, jid, "gold", (True, False, True, False, True, False, False)))
        per_class, excluded = per_class_kappa(store)
        assert excluded == []
        for agreement in per_class.values():
            assert agreement.kappa == 1.0

    def test_counts_sum_to_summaries_times_raters(self):
        store = build_store()
        per_class, _ = per_class_kappa(store)
        for agreement in per_class.values():
            assert agreement.fulfilled + agreement.not_fulfilled == 8 * 3

    def test_matches_oracle_per_class(self):
        store = build_store()
        per_class, _ = per_class_kappa(store)
        for c in range(7):
            units = []
            for ref, by_reviewer in DECISIONS.items():
                yes = sum(1 for d in by_reviewer.values() if d[c])
                units.append([yes, 3 - yes])
            assert per_class[c + 1].kappa == pytest.approx(fleiss_oracle(units), abs=1e-12)

    def test_incomplete_groups_excluded(self):
        store = build_store()
        store.add(verdict("r1", "extra", "gold", (True,) * 6 + (False,)))
        per_class, excluded = per_class_kappa(store)
        assert excluded and excluded[0]["judgment_id"] == "extra"
        for agreement in per_class.values():
            assert agreement.fulfilled + agreement.not_fulfilled == 8 * 3

    def test_pairwise_mean_emitted(self):
        store = build_store()
        per_class, _ = per_class_kappa(store)
        for agreement in per_class.values():
            assert agreement.pairwise_mean is None or -1.0 <= agreement.pairwise_mean <= 1.0
        assert any(a.pairwise_mean is not None for a in per_class.values())

    def test_to_dict_carries_aspect(self):
        store = build_store()
        per_class, _ = per_class_kappa(store)
        assert per_class[1].to_dict()["aspect"] == "Intelligibility"


class TestAgreementReport:
    def test_structure(self):
        report = agreement_report(build_store())
        assert report.reviewers == ("r1", "r2", "r3")
        matrix = report.pairwise_matrix()
        assert matrix[0][0] == 1.0
        assert matrix[0][1] == report.pairwise_value("r1", "r2")
        d = report.to_dict()
        assert "unit" in d
        assert len(d["per_class"]) == 7


class TestFulfillment:
    def test_single_judgment_everything_fulfilled(self):
        store = VerdictStore()
        for r in ("a", "b", "c"):
            store.add(verdict(r, "j", "gold", (True,) * 7, reasoning="klar besser"))
        report = fulfillment_report(store)
        assert report.fractions["gold"] == (1.0,) * 7
        assert report.mean_fulfilled["gold"] == 7.0

    def test_hand_fixture_exact(self):
        report = fulfillment_report(build_store())
        assert report.fractions == EXPECTED_FRACTIONS
        assert report.mean_fulfilled == EXPECTED_MEAN_FULFILLED
        assert report.judgment_counts == {"gold": 4, "lexrank": 4}

    def test_rows_shape(self):
        rows = fulfillment_report(build_store()).rows()
        assert [r["approach"] for r in rows] == ["gold", "lexrank"]
        for row in rows:
            assert set(row) >= {"approach", "judgments", "mean_classes_fulfilled"} | {
                f"class_{i}" for i in range(1, 8)
            }


class TestSpearman:
    def test_hand_fixture(self):
        assert spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, abs=1e-12)

    def test_identity_and_reversal(self):
        assert spearman([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
        assert spearman([1, 2, 3], [-1, -2, -3]) == pytest.approx(-1.0)

    def test_constant_vector_undefined(self):
        assert spearman([1, 1, 1], [1, 2, 3]) is None

    def test_length_validation(self):
        with pytest.raises(DataError):
            spearman([1, 2], [1, 2])
        with pytest.raises(DataError):
            spearman([1, 2, 3], [1, 2])

    def test_matches_scipy_with_ties(self):
        rng = random.Random(321)
        for _ in range(100):
            n = rng.randint(3, 30)
            x = [rng.randint(0, 5) for _ in range(n)]
            y = [rng.randint(0, 5) for _ in range(n)]
            if len(set(x)) < 2 or len(set(y)) < 2:
                continue
            want = scipy.stats.spearmanr(x, y).statistic
            assert spearman(x, y) == pytest.approx(want, abs=1e-12)

    def test_monotone_transform_invariance(self):
        rng = random.Random(99)
        for _ in range(100):
            n = rng.randint(3, 20)
            x = [rng.random() for _ in range(n)]
            y = [rng.random() for _ in range(n)]
            base = spearman(x, y)
            assert spearman([math.exp(v) for v in x], y) == pytest.approx(base, abs=1e-12)
            assert spearman(x, [3 * v + 7 for v in y]) == pytest.approx(base, abs=1e-12)

    def test_clamped_to_unit_interval(self):
        got = spearman([1, 2, 3, 4, 5], [1, 2, 3, 4, 5])
        assert got <= 1.0


class TestInterpret:
    def test_kappa_bands(self):
        assert interpret_kappa(-0.2) == "poor"
        assert interpret_kappa(0.0) == "poor"
        assert interpret_kappa(0.1) == "slight"
        assert interpret_kappa(0.2) == "slight"
        assert interpret_kappa(0.35) == "fair"
        assert interpret_kappa(0.55) == "moderate"
        assert interpret_kappa(0.6568) == "substantial"
        assert interpret_kappa(0.81) == "almost perfect"
        assert interpret_kappa(1.0) == "almost perfect"

    def test_rho_bands(self):
        assert interpret_rho(0.05) == "negligible"
        assert interpret_rho(-0.05) == "negligible"
        assert interpret_rho(0.15) == "low"
        assert interpret_rho(0.35) == "medium"
        assert interpret_rho(-0.45) == "medium"
        assert interpret_rho(0.5) == "large"
        assert interpret_rho(-0.9) == "large"

    def test_out_of_range(self):
        with pytest.raises(DataError):
            interpret_kappa(1.5)
        with pytest.raises(DataError):
            interpret_rho(-1.01)

    def test_dispatch(self):
        assert interpret(0.6568, "kappa") == "substantial"
        assert interpret(0.35, "rho") == "medium"
        with pytest.raises(ConfigError):
            interpret(0.5, "pearson")


class TestCorrelation:
    def test_pairs_configuration(self):
        assert CORRELATION_PAIRS == (("recall", 4), ("recall", 5), ("precision", 3))

    def test_rows_on_synthetic_data(self):
        majorities, _ = majority_verdicts(build_store())
        per_summary = {}
        rng = random.Random(8)
        for jid, approach in majorities:
            for metric in ("rouge1",):
                per_summary[(jid, approach, metric)] = PRF(rng.random(), rng.random(), rng.random())
        rows = correlate_metrics_with_classes(per_summary, majorities)
        assert len(rows) == len(CORRELATION_PAIRS)
        for row in rows:
            assert row["metric"] == "rouge1"
            assert row["n"] == 8
            assert (row["component"], row["class"]) in CORRELATION_PAIRS
            if row["rho"] is not None:
                assert -1.0 <= row["rho"] <= 1.0
                assert row["strength"] in ("negligible", "low", "medium", "large")

    def test_constant_class_gives_undefined(self):
        majorities = {
            ("j1", "gold"): (True,) * 7,
            ("j2", "gold"): (True,) * 7,
            ("j3", "gold"): (True,) * 7,
        }
        per_summary = {
            ("j1", "gold", "rouge1"): PRF(0.1, 0.2, 0.2),
            ("j2", "gold", "rouge1"): PRF(0.3, 0.4, 0.4),
            ("j3", "gold", "rouge1"): PRF(0.5, 0.6, 0.6),
        }
        rows = correlate_metrics_with_classes(per_summary, majorities)
        assert all(row["rho"] is None for row in rows)
        assert all(row["strength"] == "undefined" for row in rows)

    def test_too_few_points(self):
        majorities = {("j1", "gold"): (True,) * 7}
        per_summary = {("j1", "gold", "rouge1"): PRF(0.1, 0.2, 0.2)}
        rows = correlate_metrics_with_classes(per_summary, majorities)
        assert all(row["rho"] is None and row["n"] == 1 for row in rows)
