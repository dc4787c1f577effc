"""The scoring protocol for Oracle-3SAT.

P1 opens with c and a claimed count a of satisfying assignments.  The verifier
draws (w, w', k), asks P1 for the six oracle bits of w and w', cross-checks
one of them with P2, and pays by Brier's rule on p1 = a / 2^{r+3s}.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from ..core import (DEFAULT_BOUNDS, Oracle3SatInstance, OracleTable, WAssignment,
                    _satisfied, all_oracles, decide_oracle3sat, satisfying_mask)
from ..engine import Protocol, int_bits
from ..profiles import CommittedOracleProfile
from ..scoring import BinaryDistribution, protocol_score

PENALTY = Fraction(-1)


class FigScoring(Protocol):
    name = "scoring"
    num_provers = 2
    num_rounds = 3

    def __init__(self, instance: Oracle3SatInstance):
        self.input = instance
        self.N = instance.num_w
        self.a_width = self.N.bit_length()
        self._masks: dict[tuple[int, ...], tuple[int, ...]] = {}

    # -- header -------------------------------------------------------------

    def header(self, transcripts) -> tuple[int, int] | None:
        """(c, a) from P1's first message, or None if malformed or rejected in step 2."""
        first = transcripts[0][0] if transcripts[0] else ""
        if len(first) != 1 + self.a_width:
            return None
        c, a = int(first[0]), int(first[1:], 2)
        if a > self.N or (c == 1 and a < self.N) or (c == 0 and a == self.N):
            return None
        return c, a

    # -- protocol -------------------------------------------------------------

    def coin_space(self, x):
        weight = Fraction(1, self.coin_count(x))
        for w in range(self.N):
            for w2 in range(self.N):
                for k in range(1, 7):
                    yield (w, w2, k), weight

    def coin_count(self, x):
        return 6 * self.N * self.N

    def points(self, coins) -> list[int]:
        w, w2, _ = coins
        r, s = self.input.r, self.input.s
        return (list(WAssignment.from_int(r, s, w).points())
                + list(WAssignment.from_int(r, s, w2).points()))

    def query(self, x, coins, transcripts, rnd):
        if rnd != 2 or self.header(transcripts) is None:
            return None
        pts = self.points(coins)
        s = x.s
        return "".join(int_bits(b, s) for b in pts), int_bits(pts[coins[2] - 1], s)

    def _outcome(self, x, coins, transcripts) -> tuple[str, Fraction]:
        head = self.header(transcripts)
        if head is None:
            return "step2", PENALTY
        _, a = head
        w, w2, k = coins
        ans1, ans2 = transcripts[0][2], transcripts[1][2]
        if len(ans1) != 6 or len(ans2) != 1:
            return "malformed", PENALTY
        if ans1[k - 1] != ans2:
            return "caught", PENALTY
        bits = [int(ch) for ch in ans1]
        wa = WAssignment.from_int(x.r, x.s, w)
        if not _satisfied(x.clauses, (0,) + wa.bits + tuple(bits[:3])):
            return "unsat", Fraction(0)
        wb = WAssignment.from_int(x.r, x.s, w2)
        b = _satisfied(x.clauses, (0,) + wb.bits + tuple(bits[3:]))
        return "scored", protocol_score(BinaryDistribution(Fraction(a, self.N)), b)

    def payment(self, x, coins, transcripts):
        return self._outcome(x, coins, transcripts)[1]

    def flags(self, x, coins, transcripts):
        return (self._outcome(x, coins, transcripts)[0],)

    # -- closed form for committed provers -------------------------------------

    def mask(self, oracle: OracleTable) -> tuple[int, ...]:
        key = oracle.table
        if key not in self._masks:
            self._masks[key] = satisfying_mask(self.input, oracle)
        return self._masks[key]

    def grouped(self, x, profile):
        if not isinstance(profile, CommittedOracleProfile) or profile.a_width != self.a_width:
            return None
        if profile.a > self.N or profile.c not in (0, 1):
            return None
        c, a = profile.c, profile.a
        if (c == 1 and a < self.N) or (c == 0 and a == self.N):
            return [(Fraction(1), PENALTY)]
        A1, A2 = profile.oracle, profile.table_for(2)
        mask = self.mask(A1)
        N, r, s = self.N, x.r, x.s
        report = BinaryDistribution(Fraction(a, N))
        pay1, pay0 = protocol_score(report, 1), protocol_score(report, 0)
        f = Fraction(sum(mask), N)  # P1's chance of satisfying a fresh uniform w
        if profile.consistent:
            # never caught; the checked w satisfies w.p. f, the scored w' has b = 1 w.p. f
            return [(1 - f, Fraction(0)), (f * f, pay1), (f * (1 - f), pay0)]
        pts = [WAssignment.from_int(r, s, w).points() for w in range(N)]
        differs = [[int(A1(b) != A2(b)) for b in trio] for trio in pts]
        dist: dict[Fraction, Fraction] = defaultdict(Fraction)
        unit = Fraction(1, 6 * N)
        for w in range(N):
            for t in range(3):
                # k = t + 1: w is checked and must satisfy, w' is scored
                if differs[w][t]:
                    dist[PENALTY] += unit
                elif mask[w]:
                    dist[pay1] += unit * f
                    dist[pay0] += unit * (1 - f)
                else:
                    dist[Fraction(0)] += unit
                # k = t + 4: read the loop variable as w', which is checked and scored
                if differs[w][t]:
                    dist[PENALTY] += unit
                else:
                    dist[Fraction(0)] += unit * (1 - f)
                    dist[pay1 if mask[w] else pay0] += unit * f
        return [(weight, pay) for pay, weight in sorted(dist.items())]

    def params(self):
        x = self.input
        return {"r": x.r, "s": x.s, "N": self.N}


def make_fig_scoring(instance: Oracle3SatInstance) -> FigScoring:
    instance.check_bounds(DEFAULT_BOUNDS)
    return FigScoring(instance)


def honest_scoring_profile(instance: Oracle3SatInstance) -> CommittedOracleProfile:
    d = decide_oracle3sat(instance)
    return CommittedOracleProfile(d.member, d.witness, a=d.a_star,
                                  a_width=instance.num_w.bit_length())


def scoring_family(instance: Oracle3SatInstance, counts=None,
                   cross: bool = False) -> list[CommittedOracleProfile]:
    """Committed-oracle profiles: every c, every a in ``counts`` (default 0..N)
    and every oracle.  ``cross`` adds P2 tables differing from P1's."""
    N = instance.num_w
    width = N.bit_length()
    counts = range(N + 1) if counts is None else counts
    oracles = list(all_oracles(instance.s))
    family = [CommittedOracleProfile(c, A, a=a, a_width=width)
              for c in (0, 1) for a in counts for A in oracles]
    if cross:
        family += [CommittedOracleProfile(c, A, a=a, a_width=width, p2_oracle=B)
                   for c in (0, 1) for a in counts for A in oracles for B in oracles if A != B]
    return family
