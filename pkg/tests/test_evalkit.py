import pytest

from emoshop.evalkit import (
    EmptyInput,
    OutOfRange,
    TaskRecord,
    UmuxRecord,
    aggregate,
    check_message_budget,
    format_mmss,
    grade,
    load_task_records,
    load_umux_records,
    parse_mmss,
    umux_lite,
)


def record(task="T1", time=60.0, messages=1, ue=0, se=0, success=True, method="text_area"):
    return TaskRecord(
        task_id=task,
        time_seconds=time,
        messages=messages,
        user_errors=ue,
        system_errors=se,
        success=success,
        method=method,
    )


class TestUmuxLite:
    def test_extremes(self):
        assert umux_lite(7, 7) == 100.0
        assert umux_lite(1, 1) == 0.0

    def test_direct_arithmetic(self):
        # (6 + 6 - 2) * 100 / 12
        assert umux_lite(6, 6) == pytest.approx(83.33, abs=0.01)

    def test_monotone_in_each_argument(self):
        for q1 in range(1, 8):
            for q2 in range(1, 8):
                if q1 < 7:
                    assert umux_lite(q1 + 1, q2) >= umux_lite(q1, q2)
                if q2 < 7:
                    assert umux_lite(q1, q2 + 1) >= umux_lite(q1, q2)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            umux_lite(0, 5)
        with pytest.raises(OutOfRange):
            umux_lite(3, 8)


class TestGrade:
    def test_published_anchor(self):
        assert grade(79.26) == "A-"

    def test_top_grade(self):
        assert grade(100.0) == "A+"

    def test_boundary_below_a_minus(self):
        assert grade(78.8) == "B+"
        assert grade(78.9) == "A-"

    def test_bottom(self):
        assert grade(0.0) == "F"

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            grade(101)

    def test_grade_of_umux_never_errors(self):
        for q1 in range(1, 8):
            for q2 in range(1, 8):
                assert grade(umux_lite(q1, q2))


class TestAggregate:
    def test_single_record(self):
        table = aggregate([record(time=42, messages=3, ue=1, se=2)], [])
        row = table.rows[0]
        assert row.success_rate_pct == 100.0
        assert row.avg_time_seconds == 42
        assert row.avg_messages == 3
        assert row.avg_user_errors == 1
        assert row.avg_system_errors == 2

    def test_hand_built_four_records(self):
        records = [
            record(task="T1", time=100, messages=2, ue=1, se=0, success=True, method="text_area"),
            record(task="T1", time=200, messages=4, ue=0, se=1, success=False, method="microphone"),
            record(task="T2", time=50, messages=1, ue=0, se=0, success=True, method="text_area"),
            record(task="T2", time=70, messages=3, ue=2, se=2, success=True, method="image_upload"),
        ]
        table = aggregate(records, [UmuxRecord(6, 5)])
        t1, t2 = table.rows
        # spreadsheet-style hand computation
        assert t1.avg_time_seconds == 150
        assert t1.avg_messages == 3
        assert t1.avg_user_errors == 0.5
        assert t1.avg_system_errors == 0.5
        assert t1.success_rate_pct == 50.0
        assert t2.avg_time_seconds == 60
        assert t2.success_rate_pct == 100.0
        assert table.method_usage_pct["text_area"] == 50.0
        assert table.method_usage_pct["microphone"] == 25.0
        assert table.mean_umux == pytest.approx((6 + 5 - 2) * 100 / 12)

    def test_usage_shares_sum_to_100(self):
        records = [record(method=m) for m in ("text_area", "microphone", "product_link")]
        table = aggregate(records, [])
        assert sum(table.method_usage_pct.values()) == pytest.approx(100.0, abs=0.5)

    def test_permutation_invariant(self):
        records = [
            record(task="T1", time=10 * i, messages=i, success=i % 2 == 0)
            for i in range(1, 6)
        ]
        assert aggregate(records, []) == aggregate(list(reversed(records)), [])

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            aggregate([], [])


class TestMessageBudget:
    def test_over_budget_flagged(self):
        records = [record(task="T2", messages=m) for m in (1, 1, 1, 1, 1, 1, 1, 1, 1, 2)]
        assert check_message_budget(records)["T2"] is True

    def test_under_budget_not_flagged(self):
        records = [record(task="T1", messages=m) for m in (1, 1, 1, 1, 2, 1, 1, 1, 1, 2)]
        assert check_message_budget(records)["T1"] is False

    def test_exact_budget_not_flagged(self):
        records = [record(task="T4", messages=1)]
        assert check_message_budget(records)["T4"] is False


class TestTaskRecord:
    def test_over_five_minutes_cannot_succeed(self):
        with pytest.raises(OutOfRange):
            record(time=301, success=True)
        assert record(time=301, success=False).success is False

    def test_invalid_task_and_method(self):
        with pytest.raises(OutOfRange):
            record(task="T9")
        with pytest.raises(OutOfRange):
            record(method="telepathy")


class TestTimeParsing:
    def test_mmss(self):
        assert parse_mmss("01:35") == 95
        assert parse_mmss("00:42") == 42
        assert parse_mmss("90") == 90

    def test_format(self):
        assert format_mmss(95) == "01:35"


class TestCsvLoading:
    def test_round_trip(self, tmp_path):
        tasks = tmp_path / "tasks.csv"
        tasks.write_text(
            "task,time,messages,user_errors,system_errors,success,method\n"
            "T1,01:35,2,1,0,true,text_area\n"
            "T3,00:59,1,0,1,false,microphone\n",
            encoding="utf-8",
        )
        records = load_task_records(tasks)
        assert len(records) == 2
        assert records[0].time_seconds == 95
        assert records[1].success is False

        umux = tmp_path / "umux.csv"
        umux.write_text("user,q1,q2\nu1,6,6\nu2,7,5\n", encoding="utf-8")
        loaded = load_umux_records(umux)
        assert [(r.q1, r.q2) for r in loaded] == [(6, 6), (7, 5)]
