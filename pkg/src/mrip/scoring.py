"""Brier's scoring rule on the outcome space {0, 1}, in exact arithmetic."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class BinaryDistribution:
    p1: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p1", Fraction(self.p1))
        if not 0 <= self.p1 <= 1:
            raise ValueError(f"p1 = {self.p1} outside [0, 1]")

    @property
    def p0(self) -> Fraction:
        return 1 - self.p1

    def prob(self, outcome: int) -> Fraction:
        return self.p1 if outcome else self.p0


def brier_score(report: BinaryDistribution, outcome: int) -> Fraction:
    """2 D(w) - sum D^2 - 1, in [-2, 0]."""
    return 2 * report.prob(outcome) - (report.p1 ** 2 + report.p0 ** 2) - 1


def protocol_score(report: BinaryDistribution, b: int) -> Fraction:
    """Shifted and scaled variant paid by the scoring protocol, in [0, 2/11]."""
    return (2 * report.prob(b) - (report.p1 ** 2 + report.p0 ** 2) + 1) / 11


def expected_protocol_score(report: BinaryDistribution, truth: BinaryDistribution) -> Fraction:
    q = truth.p1
    return q * protocol_score(report, 1) + (1 - q) * protocol_score(report, 0)


def grid(denominator: int) -> list[BinaryDistribution]:
    return [BinaryDistribution(Fraction(k, denominator)) for k in range(denominator + 1)]
