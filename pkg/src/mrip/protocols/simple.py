"""Wrapping an MIP: c = 0 is paid a flat 1/2, c = 1 is paid by the MIP verdict."""
from __future__ import annotations

from fractions import Fraction

from ..core import DEFAULT_BOUNDS, Oracle3SatInstance, all_oracles, decide_oracle3sat
from ..engine import Protocol, answer_bit
from ..profiles import CommittedOracleProfile
from .mip import ExhaustiveMip, MipSubroutine

HALF = Fraction(1, 2)


class FigSimple(Protocol):
    name = "simple"
    num_provers = 2
    num_rounds = 3

    def __init__(self, instance: Oracle3SatInstance, mip: MipSubroutine | None = None):
        self.input = instance
        self.mip = mip or ExhaustiveMip()

    def coin_space(self, x):
        return self.mip.coin_space(x)

    def coin_count(self, x):
        return self.mip.coin_count(x)

    def query(self, x, coins, transcripts, rnd):
        if rnd != 2 or answer_bit(transcripts) == 0:
            return None
        return self.mip.queries(x, coins)

    def payment(self, x, coins, transcripts):
        if answer_bit(transcripts) == 0:
            return HALF
        return Fraction(int(self.mip.accepts(x, coins, transcripts[0][2], transcripts[1][2])))

    def grouped(self, x, profile):
        if not isinstance(profile, CommittedOracleProfile):
            return None
        if profile.c == 0:
            return [(Fraction(1), HALF)]
        accept = self.mip.accept_probability(x, profile.oracle, profile.p2_oracle)
        return [(accept, Fraction(1)), (1 - accept, Fraction(0))]

    def params(self):
        return self.mip.params(self.input)


def make_fig_simple(instance: Oracle3SatInstance, mip: MipSubroutine | None = None) -> FigSimple:
    instance.check_bounds(DEFAULT_BOUNDS)
    return FigSimple(instance, mip)


def honest_simple_profile(instance: Oracle3SatInstance) -> CommittedOracleProfile:
    decision = decide_oracle3sat(instance)
    return CommittedOracleProfile(decision.member, decision.witness)


def simple_family(instance: Oracle3SatInstance, cross: bool = False) -> list[CommittedOracleProfile]:
    """c in {0, 1} times every oracle; ``cross`` adds every (A1, A2) pair for c = 1."""
    oracles = list(all_oracles(instance.s))
    family = [CommittedOracleProfile(c, A) for c in (0, 1) for A in oracles]
    if cross:
        family += [CommittedOracleProfile(1, A, p2_oracle=B)
                   for A in oracles for B in oracles if A != B]
    return family
