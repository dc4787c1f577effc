"""Utility gaps and the payment-interval sweep."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import fmt_rational
from .engine import Protocol, StrategyProfile, score_family

CSV_FIELDS = ["instance_id", "protocol", "best_utility", "best_wrong_utility", "gap",
              "decision", "intervals"]

CONSTANT_GAP = Fraction(1, 6)


def alpha_class(gap: Fraction | None, size: int, constant: Fraction = CONSTANT_GAP) -> str:
    """Coarse label for a measured gap on an input of the given size.

    "constant" means gap >= ``constant``; "1/poly" means gap >= 1/size^2.
    """
    if gap is None:
        return "none"
    if gap >= constant:
        return "constant"
    if gap >= Fraction(1, max(size, 1) ** 2):
        return "1/poly"
    return "smaller"


@dataclass
class GapReport:
    instance_id: str
    protocol: str
    best_utility: Fraction
    best_wrong_utility: Fraction | None
    gap: Fraction | None
    alpha_class: str
    family_size: int

    def row(self) -> dict:
        none = "none"
        return {"instance_id": self.instance_id, "protocol": self.protocol,
                "best_utility": fmt_rational(self.best_utility),
                "best_wrong_utility": none if self.best_wrong_utility is None
                else fmt_rational(self.best_wrong_utility),
                "gap": none if self.gap is None else fmt_rational(self.gap)}


def gap_from_scored(scored: Sequence[tuple[StrategyProfile, Fraction]], ground_truth: int,
                    instance_id: str = "", protocol: str = "", size: int = 1) -> GapReport:
    best = max(u for _, u in scored)
    wrong = [u for prof, u in scored if prof.output_bit != ground_truth]
    best_wrong = max(wrong) if wrong else None
    gap = None if best_wrong is None else best - best_wrong
    return GapReport(instance_id, protocol, best, best_wrong, gap,
                     alpha_class(gap, size), len(scored))


def utility_gap(protocol: Protocol, x, family: Sequence[StrategyProfile], ground_truth: int,
                instance_id: str = "", size: int | None = None, mode: str = "auto") -> GapReport:
    """Best utility minus the best utility among profiles reporting the wrong bit."""
    if size is None:
        size = _input_size(x)
    scored = score_family(protocol, x, family, mode)
    return gap_from_scored(scored, ground_truth, instance_id, protocol.name, size)


def _input_size(x) -> int:
    if hasattr(x, "size") and callable(x.size):
        variables, clauses = x.size()
        return variables + clauses
    try:
        return len(x)
    except TypeError:
        return 1


# -- interval sweep ---------------------------------------------------------------

class SweepError(ValueError):
    pass


def interval_index(u: Fraction, num_intervals: int) -> int | None:
    """Half-open [i/K, (i+1)/K); the last interval also holds 1.  None below 0."""
    if u < 0 or u > 1:
        return None
    return min(int(u * num_intervals), num_intervals - 1)


def sweep_queries(num_intervals: int) -> list[tuple[int, int]]:
    """All queries, fixed before any answer is known."""
    return [(i, b) for i in range(num_intervals) for b in (0, 1)]


def min_spacing(utilities) -> Fraction | None:
    values = sorted(set(utilities))
    if len(values) < 2:
        return None
    return min(b - a for a, b in zip(values, values[1:]))


@dataclass
class SweepReport:
    num_intervals: int
    queries: list[tuple[int, int]]
    answers: dict[tuple[int, int], bool]
    chosen_interval: int
    decision: int
    ambiguous: bool
    min_spacing: Fraction | None
    width_ok: bool = field(default=False)

    def to_json(self) -> dict:
        return {"intervals": self.num_intervals, "chosen_interval": self.chosen_interval,
                "decision": self.decision, "ambiguous": self.ambiguous,
                "min_spacing": None if self.min_spacing is None else fmt_rational(self.min_spacing),
                "width_ok": self.width_ok}


def sweep_from_scored(scored: Sequence[tuple[StrategyProfile, Fraction]],
                      num_intervals: int) -> SweepReport:
    if num_intervals < 1:
        raise ValueError("need at least one interval")
    queries = sweep_queries(num_intervals)
    buckets: dict[int, set[int]] = {}
    for prof, u in scored:
        i = interval_index(u, num_intervals)
        if i is not None:
            buckets.setdefault(i, set()).add(prof.output_bit)
    answers = {}
    for i, b in queries:
        bits = buckets.get(i, set())
        answers[(i, b)] = bool(bits) if b == 0 else 1 in bits
    nonempty = [i for i in range(num_intervals) if answers[(i, 0)]]
    if not nonempty:
        raise SweepError("no profile has utility in [0, 1]: the family violates u >= 0")
    top = max(nonempty)
    spacing = min_spacing(u for _, u in scored)
    width = Fraction(1, num_intervals)
    return SweepReport(num_intervals, queries, answers, top, int(answers[(top, 1)]),
                       len(buckets[top]) > 1, spacing,
                       spacing is None or width < spacing)


def interval_sweep(protocol: Protocol, x, family: Sequence[StrategyProfile],
                   num_intervals: int, mode: str = "auto") -> SweepReport:
    """Answer every (interval, bit) existence query by exhaustive search and
    decide by the c = 1 query at the highest non-empty interval."""
    return sweep_from_scored(score_family(protocol, x, family, mode), num_intervals)


# -- rows -----------------------------------------------------------------------------

def report_row(gap: GapReport, sweep: SweepReport | None = None, decision: int | None = None) -> dict:
    row = gap.row()
    row["decision"] = "" if decision is None and sweep is None else (
        str(sweep.decision if sweep is not None else decision))
    row["intervals"] = "" if sweep is None else str(sweep.num_intervals)
    if sweep is not None and sweep.ambiguous:
        row["decision"] += " ambiguous"
    return row


def rows_to_csv(rows: Sequence[dict], fields: Sequence[str] = CSV_FIELDS, header: str = "") -> str:
    buf = io.StringIO()
    if header:
        for line in header.splitlines():
            buf.write(f"# {line}\n")
    writer = csv.DictWriter(buf, fieldnames=list(fields), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
