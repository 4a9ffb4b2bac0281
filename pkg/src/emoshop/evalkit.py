"""Usability evaluation toolkit: UMUX-Lite scoring and task metric tables.

Covers the two-item UMUX-Lite questionnaire, curved letter-grade mapping,
and per-task aggregation of time / message / error / success measurements.
"""
from __future__ import annotations

import csv
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

TASK_IDS = ("T1", "T2", "T3", "T4")
METHODS = ("text_area", "microphone", "image_upload", "product_link")
TASK_TIME_LIMIT_SECONDS = 300

# Estimated messages needed per task; averages above these are over budget.
MESSAGE_ESTIMATES = {"T1": 2, "T2": 1, "T3": 2, "T4": 1}

# Curved grading scale bands (lower bound inclusive), best band first.
DEFAULT_GRADE_BANDS: tuple[tuple[float, str], ...] = (
    (84.1, "A+"),
    (80.8, "A"),
    (78.9, "A-"),
    (77.2, "B+"),
    (74.1, "B"),
    (72.6, "B-"),
    (71.1, "C+"),
    (65.0, "C"),
    (62.7, "C-"),
    (51.7, "D"),
    (0.0, "F"),
)


class EvalError(Exception):
    pass


class OutOfRange(EvalError):
    pass


class EmptyInput(EvalError):
    pass


@dataclass(frozen=True)
class UmuxRecord:
    q1: int  # capabilities meet my needs
    q2: int  # easy to use

    def __post_init__(self):
        for name, value in (("q1", self.q1), ("q2", self.q2)):
            if not 1 <= value <= 7:
                raise OutOfRange(f"{name} must be in [1,7], got {value}")


@dataclass(frozen=True)
class TaskRecord:
    task_id: str
    time_seconds: float
    messages: int
    user_errors: int
    system_errors: int
    success: bool
    method: str

    def __post_init__(self):
        if self.task_id not in TASK_IDS:
            raise OutOfRange(f"task_id must be one of {TASK_IDS}, got {self.task_id}")
        if self.method not in METHODS:
            raise OutOfRange(f"method must be one of {METHODS}, got {self.method}")
        for name in ("time_seconds", "messages", "user_errors", "system_errors"):
            if getattr(self, name) < 0:
                raise OutOfRange(f"{name} must be non-negative")
        # a task over the 5-minute limit cannot count as a success
        if self.success and self.time_seconds > TASK_TIME_LIMIT_SECONDS:
            raise OutOfRange("tasks over 5 minutes are failures")


@dataclass(frozen=True)
class TaskSummaryRow:
    task_id: str
    avg_time_seconds: float
    avg_messages: float
    avg_user_errors: float
    avg_system_errors: float
    success_rate_pct: float


@dataclass(frozen=True)
class SummaryTable:
    rows: tuple[TaskSummaryRow, ...]
    method_usage_pct: dict[str, float]
    mean_umux: float | None
    umux_grade: str | None = field(default=None)


def umux_lite(q1: int, q2: int) -> float:
    """Two-item usability score on a 0..100 scale."""
    record = UmuxRecord(q1=q1, q2=q2)
    return (record.q1 + record.q2 - 2) * 100.0 / 12.0


def grade(
    mean_score: float,
    bands: tuple[tuple[float, str], ...] = DEFAULT_GRADE_BANDS,
) -> str:
    """Letter grade for a mean score per the curved grading bands."""
    if not 0.0 <= mean_score <= 100.0:
        raise OutOfRange(f"score must be in [0,100], got {mean_score}")
    for lower, letter in bands:
        if mean_score >= lower:
            return letter
    return bands[-1][1]


def parse_mmss(text: str) -> float:
    """Parse 'mm:ss' into seconds; plain numbers pass through."""
    text = text.strip()
    if ":" in text:
        minutes, seconds = text.split(":", 1)
        return int(minutes) * 60 + float(seconds)
    return float(text)


def format_mmss(seconds: float) -> str:
    whole = int(round(seconds))
    return f"{whole // 60:02d}:{whole % 60:02d}"


def aggregate(records: list[TaskRecord], umux: list[UmuxRecord]) -> SummaryTable:
    """Per-task means plus the global method-usage split and mean UMUX-Lite."""
    if not records:
        raise EmptyInput("no task records")
    by_task: dict[str, list[TaskRecord]] = defaultdict(list)
    for record in records:
        by_task[record.task_id].append(record)

    rows = []
    for task_id in TASK_IDS:
        group = by_task.get(task_id)
        if not group:
            continue
        n = len(group)
        rows.append(
            TaskSummaryRow(
                task_id=task_id,
                avg_time_seconds=sum(r.time_seconds for r in group) / n,
                avg_messages=sum(r.messages for r in group) / n,
                avg_user_errors=sum(r.user_errors for r in group) / n,
                avg_system_errors=sum(r.system_errors for r in group) / n,
                success_rate_pct=100.0 * sum(r.success for r in group) / n,
            )
        )

    method_counts = Counter(r.method for r in records)
    usage = {
        method: 100.0 * method_counts.get(method, 0) / len(records) for method in METHODS
    }

    mean_umux = None
    umux_grade = None
    if umux:
        mean_umux = sum(umux_lite(r.q1, r.q2) for r in umux) / len(umux)
        umux_grade = grade(mean_umux)
    return SummaryTable(
        rows=tuple(rows),
        method_usage_pct=usage,
        mean_umux=mean_umux,
        umux_grade=umux_grade,
    )


def check_message_budget(
    records: list[TaskRecord],
    estimates: dict[str, int] | None = None,
) -> dict[str, bool]:
    """Flag tasks whose average message count strictly exceeds the estimate."""
    if not records:
        raise EmptyInput("no task records")
    estimates = estimates or MESSAGE_ESTIMATES
    by_task: dict[str, list[int]] = defaultdict(list)
    for record in records:
        by_task[record.task_id].append(record.messages)
    return {
        task_id: (sum(counts) / len(counts)) > estimates[task_id]
        for task_id, counts in sorted(by_task.items())
    }


def load_task_records(path: str | Path) -> list[TaskRecord]:
    """Read the task CSV: task,time,messages,user_errors,system_errors,success,method."""
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(
                TaskRecord(
                    task_id=row["task"].strip(),
                    time_seconds=parse_mmss(row["time"]),
                    messages=int(row["messages"]),
                    user_errors=int(row["user_errors"]),
                    system_errors=int(row["system_errors"]),
                    success=row["success"].strip().lower() in ("1", "true", "yes"),
                    method=row["method"].strip(),
                )
            )
    return records


def load_umux_records(path: str | Path) -> list[UmuxRecord]:
    """Read the UMUX CSV: user,q1,q2."""
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(UmuxRecord(q1=int(row["q1"]), q2=int(row["q2"])))
    return records


def render_summary(table: SummaryTable) -> str:
    """Plain-text table at the reporting precision: 2-decimal scores, whole-percent rates."""
    lines = ["Task  AvgTime  Msgs  UE    SE    SR"]
    for row in table.rows:
        lines.append(
            f"{row.task_id:<5} {format_mmss(row.avg_time_seconds):>7}  "
            f"{row.avg_messages:<5.2f} {row.avg_user_errors:<5.2f} "
            f"{row.avg_system_errors:<5.2f} {row.success_rate_pct:.0f}%"
        )
    lines.append("")
    lines.append(
        "Method usage: "
        + ", ".join(f"{m} {p:.0f}%" for m, p in table.method_usage_pct.items())
    )
    if table.mean_umux is not None:
        lines.append(f"Mean UMUX-Lite: {table.mean_umux:.2f} ({table.umux_grade})")
    return "\n".join(lines)
