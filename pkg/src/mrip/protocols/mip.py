"""Desk-scale stand-ins for a multi-prover interactive proof of Oracle-3SAT.

Both variants talk to the provers in the committed-oracle message format:
the verifier sends a list of s-bit query points, the prover replies with one
bit per point.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from ..core import (Oracle3SatInstance, OracleTable, WAssignment, _satisfied,
                    satisfying_mask)
from ..engine import int_bits


def _points_msg(points, s: int) -> str:
    return "".join(int_bits(b, s) for b in points)


class MipSubroutine:
    name = "mip"

    def coin_space(self, instance: Oracle3SatInstance):
        raise NotImplementedError

    def coin_count(self, instance: Oracle3SatInstance) -> int:
        raise NotImplementedError

    def queries(self, instance: Oracle3SatInstance, coin) -> tuple[str, str]:
        raise NotImplementedError

    def accepts(self, instance: Oracle3SatInstance, coin, ans1: str, ans2: str) -> bool:
        raise NotImplementedError

    def accept_probability(self, instance: Oracle3SatInstance, oracle1: OracleTable,
                           oracle2: OracleTable | None = None) -> Fraction:
        """Exact acceptance probability against committed-oracle provers."""
        raise NotImplementedError

    def params(self, instance: Oracle3SatInstance | None = None) -> dict:
        return {"mip": self.name}


class ExhaustiveMip(MipSubroutine):
    """Prover 1 sends the whole oracle table; the verifier checks every w."""

    name = "exhaustive"

    def coin_space(self, instance):
        return [((), Fraction(1))]

    def coin_count(self, instance):
        return 1

    def queries(self, instance, coin):
        return _points_msg(range(1 << instance.s), instance.s), ""

    def accepts(self, instance, coin, ans1, ans2):
        if len(ans1) != 1 << instance.s:
            return False
        table = OracleTable.from_bits(instance.s, ans1)
        return all(satisfying_mask(instance, table))

    def accept_probability(self, instance, oracle1, oracle2=None):
        return Fraction(int(all(satisfying_mask(instance, oracle1))))


def default_repetitions(num_w: int) -> int:
    """Smallest m with (1 - 1/num_w)^m <= 1/3."""
    f, m = Fraction(num_w - 1, num_w), 1
    while f ** m > Fraction(1, 3):
        m += 1
    return m


class SampledMip(MipSubroutine):
    """m independent uniform w spot-checked against prover 1's answers, plus
    one of the 3m query points cross-checked with prover 2."""

    name = "sampled"

    def __init__(self, m: int | None = None):
        self.m = m

    def repetitions(self, instance) -> int:
        return self.m if self.m is not None else default_repetitions(instance.num_w)

    def coin_count(self, instance):
        m = self.repetitions(instance)
        return instance.num_w ** m * 3 * m

    def coin_space(self, instance):
        m = self.repetitions(instance)
        weight = Fraction(1, self.coin_count(instance))
        for ws in product(range(instance.num_w), repeat=m):
            for slot in range(3 * m):
                yield (ws, slot), weight

    def _points(self, instance, ws):
        out = []
        for value in ws:
            out.extend(WAssignment.from_int(instance.r, instance.s, value).points())
        return out

    def queries(self, instance, coin):
        ws, slot = coin
        points = self._points(instance, ws)
        return _points_msg(points, instance.s), int_bits(points[slot], instance.s)

    def accepts(self, instance, coin, ans1, ans2):
        ws, slot = coin
        if len(ans1) != 3 * len(ws) or len(ans2) != 1:
            return False
        bits = [int(ch) for ch in ans1]
        for t, value in enumerate(ws):
            w = WAssignment.from_int(instance.r, instance.s, value)
            if not _satisfied(instance.clauses, (0,) + w.bits + tuple(bits[3 * t:3 * t + 3])):
                return False
        return ans2 == ans1[slot]

    def accept_probability(self, instance, oracle1, oracle2=None):
        oracle2 = oracle1 if oracle2 is None else oracle2
        m, n = self.repetitions(instance), instance.num_w
        mask = satisfying_mask(instance, oracle1)
        f = Fraction(sum(mask), n)
        agree = Fraction(0)
        for value in range(n):
            if not mask[value]:
                continue
            points = WAssignment.from_int(instance.r, instance.s, value).points()
            agree += sum(oracle1(b) == oracle2(b) for b in points)
        # the cross-checked slot sits in one of the m rounds; the rest must just pass
        return f ** (m - 1) * agree / (3 * n)

    def params(self, instance=None):
        out = {"mip": self.name}
        if instance is not None:
            out["m"] = self.repetitions(instance)
        elif self.m is not None:
            out["m"] = self.m
        return out


def make_mip(name: str, m: int | None = None) -> MipSubroutine:
    if name in ("A", "exhaustive"):
        return ExhaustiveMip()
    if name in ("B", "sampled"):
        return SampledMip(m)
    raise ValueError(f"unknown MIP variant {name!r}")

