from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmbench import (
    EditLogRecord,
    Origin,
    agreement_report,
    bin_by_quantiles,
    cohen_kappa,
    edit_type_frequencies,
    pearson_rho,
    selection_rates,
    time_edits_series,
)

T0 = datetime(2026, 8, 9, 9, 0, 0, tzinfo=timezone.utc)


def make_record(translator="T1", seg="s1", origin=Origin.MT, ins=0, dele=0, sub=0,
                shift=0, time_ms=1000, offset=0):
    started = T0 + timedelta(seconds=offset)
    return EditLogRecord(
        segment_id=seg,
        translator_id=translator,
        origin=origin,
        initial_text="",
        final_text="",
        edit_time_ms=time_ms,
        insertions=ins,
        deletions=dele,
        substitutions=sub,
        shifts=shift,
        started_at=started,
        finished_at=started + timedelta(milliseconds=time_ms),
    )


labels = st.lists(st.sampled_from(["MT", "TM", "None"]), min_size=1, max_size=40)


class TestCohenKappa:
    def test_perfect_agreement(self):
        assert cohen_kappa(["MT", "TM", "MT"], ["MT", "TM", "MT"]) == 1.0

    def test_hand_computed_example(self):
        # po = 0.6, pe = 0.28, kappa = 0.32 / 0.72
        a = ["MT", "MT", "TM", "None", "MT"]
        b = ["MT", "TM", "TM", "None", "None"]
        assert cohen_kappa(a, b) == pytest.approx(0.32 / 0.72, abs=1e-12)
        assert cohen_kappa(a, b) == pytest.approx(0.4444444444, abs=1e-9)

    def test_degenerate_constant_equal(self):
        assert cohen_kappa(["MT", "MT"], ["MT", "MT"]) == 1.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cohen_kappa(["MT"], ["MT", "TM"])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cohen_kappa([], [])

    @given(labels, labels)
    def test_symmetric_and_bounded(self, a, b):
        n = min(len(a), len(b))
        a, b = a[:n], b[:n]
        k1 = cohen_kappa(a, b)
        assert -1.0 <= k1 <= 1.0
        assert k1 == pytest.approx(cohen_kappa(b, a), abs=1e-12)

    @given(labels)
    def test_self_agreement(self, a):
        assert cohen_kappa(a, a) == 1.0


class TestPearsonRho:
    def test_perfect_positive(self):
        assert pearson_rho([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0, abs=1e-12)

    def test_perfect_negative(self):
        assert pearson_rho([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0, abs=1e-12)

    def test_hand_computed(self):
        # cov = 4, var_x = var_y = 5 -> 4 / 5
        assert pearson_rho([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, abs=1e-12)

    def test_constant_series_rejected(self):
        with pytest.raises(ValueError):
            pearson_rho([1, 1, 1], [1, 2, 3])
        with pytest.raises(ValueError):
            pearson_rho([1, 2, 3], [5, 5, 5])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            pearson_rho([1, 2], [1, 2, 3])

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            pearson_rho([1], [2])

    @given(
        st.lists(st.integers(-50, 50), min_size=3, max_size=30),
        st.integers(1, 9),
        st.integers(-20, 20),
    )
    @settings(max_examples=150)
    def test_invariant_under_positive_affine(self, xs, scale, shift):
        ys = list(range(len(xs)))
        if len(set(xs)) < 2:
            return
        base = pearson_rho([float(x) for x in xs], [float(y) for y in ys])
        transformed = pearson_rho([float(scale * x + shift) for x in xs], [float(y) for y in ys])
        assert transformed == pytest.approx(base, abs=1e-9)


class TestSelectionRates:
    def test_table_counts_t1(self):
        records = (
            [make_record("T1", f"m{i}", Origin.MT) for i in range(160)]
            + [make_record("T1", "t0", Origin.TM)]
            + [make_record("T1", f"n{i}", Origin.SCRATCH) for i in range(39)]
        )
        table = selection_rates(records)
        assert table.totals["T1"] == 200
        assert table.rates["T1"][Origin.MT] == 0.800
        assert table.rates["T1"][Origin.TM] == 0.005
        assert table.rates["T1"][Origin.SCRATCH] == 0.195

    def test_single_record(self):
        table = selection_rates([make_record()])
        assert table.rates["T1"][Origin.MT] == 1.0

    def test_rates_sum_to_one(self):
        records = [
            make_record("T2", f"s{i}", origin)
            for i, origin in enumerate(
                [Origin.MT] * 7 + [Origin.TM] * 2 + [Origin.SCRATCH] * 4 + [Origin.APE]
            )
        ]
        table = selection_rates(records)
        assert sum(table.rates["T2"].values()) == pytest.approx(1.0, abs=1e-12)

    def test_counts_sum_to_record_count(self):
        records = [make_record("T1", f"s{i}") for i in range(5)]
        table = selection_rates(records)
        assert sum(table.counts["T1"].values()) == 5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            selection_rates([])


class TestEditTypeFrequencies:
    def test_empty(self):
        freq = edit_type_frequencies([])
        assert freq.as_dict() == {
            "insertions": 0, "deletions": 0, "substitutions": 0, "shifts": 0,
        }
        assert freq.per_record_totals == ()

    def test_single_record(self):
        freq = edit_type_frequencies([make_record(ins=2, dele=1, sub=3, shift=0)])
        assert freq.as_dict() == {
            "insertions": 2, "deletions": 1, "substitutions": 3, "shifts": 0,
        }
        assert freq.per_record_totals == (6,)

    def test_additive_over_disjoint_sets(self):
        a = [make_record(seg="s1", ins=1, sub=2), make_record(seg="s2", dele=3)]
        b = [make_record(seg="s3", shift=1, ins=4)]
        fa, fb, fab = (
            edit_type_frequencies(a),
            edit_type_frequencies(b),
            edit_type_frequencies(a + b),
        )
        for key in ("insertions", "deletions", "substitutions", "shifts"):
            assert fab.as_dict()[key] == fa.as_dict()[key] + fb.as_dict()[key]


class TestTimeEditsSeries:
    def test_empty(self):
        assert time_edits_series([]) == []

    def test_zero_edit_record(self):
        assert time_edits_series([make_record(time_ms=5000)]) == [(0, 5000)]

    def test_ordered_by_finish_and_consistent(self):
        records = [
            make_record(seg="s2", ins=2, time_ms=100, offset=50),
            make_record(seg="s1", sub=1, shift=1, time_ms=900, offset=0),
        ]
        series = time_edits_series(records)
        assert series == [(2, 900), (2, 100)]
        for point, rec in zip(series, sorted(records, key=lambda r: r.finished_at)):
            assert point[0] == rec.insertions + rec.deletions + rec.substitutions + rec.shifts
            assert point[1] == rec.edit_time_ms


class TestBinning:
    def test_terciles(self):
        assert bin_by_quantiles([1, 2, 3, 4, 5, 6]) == [0, 0, 1, 1, 2, 2]

    def test_ties_share_bins(self):
        bins = bin_by_quantiles([5, 5, 5, 5])
        assert bins == [0, 0, 0, 0]

    def test_empty(self):
        assert bin_by_quantiles([]) == []


class TestAgreementReport:
    def test_selection_variable(self):
        records = []
        for seg, (o1, o2) in enumerate(
            [(Origin.MT, Origin.MT), (Origin.MT, Origin.TM), (Origin.SCRATCH, Origin.SCRATCH)]
        ):
            records.append(make_record("T1", f"s{seg}", o1))
            records.append(make_record("T2", f"s{seg}", o2))
        report = agreement_report(records, "selection")
        assert report.translators == ("T1", "T2")
        assert report.kappa[("T1", "T2")] == report.kappa[("T2", "T1")]
        assert -1.0 <= report.kappa[("T1", "T2")] <= 1.0

    def test_continuous_variable_binned(self):
        records = []
        for seg in range(9):
            records.append(make_record("T1", f"s{seg}", time_ms=100 * (seg + 1)))
            records.append(make_record("T2", f"s{seg}", time_ms=100 * (seg + 1)))
        report = agreement_report(records, "time")
        assert report.kappa[("T1", "T2")] == 1.0

    def test_unknown_variable(self):
        with pytest.raises(ValueError):
            agreement_report([make_record()], "mood")
