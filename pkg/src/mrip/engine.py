"""Generic execution of multi-prover rational protocols.

Rounds are numbered from 1.  Odd rounds carry prover messages, even rounds
carry verifier messages.  Messages are bit strings; an empty verifier message
means the prover is not addressed and stays silent in the next round.  The
answer bit ``c`` is the first bit of prover 1's first message.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Sequence

from .core import fmt_rational

DEFAULT_MAX_ENUM = 1 << 22

Transcripts = tuple[tuple[str, ...], ...]
Coin = Hashable


class PartialStrategyError(LookupError):
    def __init__(self, prover: int, rnd: int, transcript: tuple[str, ...]):
        self.prover, self.round, self.transcript = prover, rnd, transcript
        super().__init__(
            f"partial strategy: prover {prover} has no message for round {rnd} "
            f"after transcript {transcript!r}")


class PaymentRangeError(ValueError):
    pass


class EnumerationRefused(ValueError):
    def __init__(self, what: str, size: int, cap: int):
        self.size, self.cap = size, cap
        super().__init__(f"refusing to enumerate {size} {what} (cap {cap}; set MRIP_MAX_ENUM)")


def enumeration_cap() -> int:
    return int(os.environ.get("MRIP_MAX_ENUM", DEFAULT_MAX_ENUM))


# -- bit helpers ---------------------------------------------------------------

def int_bits(value: int, width: int) -> str:
    if not 0 <= value < 1 << width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


def split_bits(msg: str, width: int) -> list[int] | None:
    """Cut msg into width-bit integers; None if the length does not divide."""
    if width <= 0 or len(msg) % width:
        return None
    return [int(msg[k:k + width], 2) for k in range(0, len(msg), width)]


def flip_first(msg: str) -> str:
    if not msg:
        return msg
    return ("1" if msg[0] == "0" else "0") + msg[1:]


def answer_bit(transcripts: Transcripts) -> int:
    first = transcripts[0][0] if transcripts and transcripts[0] else ""
    return 1 if first[:1] == "1" else 0


# -- protocols and profiles ------------------------------------------------------

class Protocol:
    """Verifier side of an interactive protocol.

    Subclasses implement ``coin_space``, ``query`` and ``payment``; they may
    implement ``grouped`` to give an exact closed-form payment distribution for
    structured profiles whose raw coin space is too large to walk.
    """

    name = "protocol"
    num_provers = 2
    num_rounds = 3
    opening: tuple[int, ...] = (1,)
    input: Any = None

    def coin_space(self, x) -> Iterable[tuple[Coin, Fraction]]:
        raise NotImplementedError

    def coin_count(self, x) -> int:
        return sum(1 for _ in self.coin_space(x))

    def query(self, x, coins: Coin, transcripts: Transcripts, rnd: int) -> Sequence[str] | None:
        """Verifier messages for even round ``rnd``; None ends the protocol."""
        raise NotImplementedError

    def payment(self, x, coins: Coin, transcripts: Transcripts) -> Fraction:
        raise NotImplementedError

    def flags(self, x, coins: Coin, transcripts: Transcripts) -> tuple[str, ...]:
        return ()

    def grouped(self, x, profile: "StrategyProfile") -> list[tuple[Fraction, Fraction]] | None:
        return None

    def params(self) -> dict:
        return {}

    def descriptor(self, x=None) -> dict:
        x = self.input if x is None else x
        return {"name": self.name, "provers": self.num_provers, "rounds": self.num_rounds,
                "params": self.params(), "coin_space_size": self.coin_count(x)}


class StrategyProfile:
    """One deterministic transcript -> message map per prover and round."""

    def respond(self, prover: int, rnd: int, transcript: tuple[str, ...]) -> str:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    @property
    def output_bit(self) -> int:
        """The answer bit c; it never depends on the verifier's coins."""
        first = self.respond(1, 1, ())
        return 1 if first[:1] == "1" else 0

    def key(self) -> str:
        return json.dumps(self.descriptor(), sort_keys=True)


@dataclass(frozen=True)
class ProtocolOutcome:
    transcript: Transcripts
    payment: Fraction
    c: int
    flags: tuple[str, ...] = ()


def _check_bits(msg, who: str) -> str:
    if not isinstance(msg, str) or set(msg) - {"0", "1"}:
        raise ValueError(f"{who} produced a non-bit-string message {msg!r}")
    return msg


def run_protocol(protocol: Protocol, x, coins: Coin, profile: StrategyProfile) -> ProtocolOutcome:
    t, p = protocol.num_provers, protocol.num_rounds
    transcripts: list[list[str]] = [[] for _ in range(t)]
    addressed = set(protocol.opening)
    for rnd in range(1, p + 1):
        if rnd % 2:
            for i in range(1, t + 1):
                msg = ""
                if i in addressed:
                    msg = _check_bits(profile.respond(i, rnd, tuple(transcripts[i - 1])),
                                      f"prover {i} in round {rnd}")
                transcripts[i - 1].append(msg)
        else:
            frozen = tuple(tuple(m) for m in transcripts)
            msgs = protocol.query(x, coins, frozen, rnd)
            if msgs is None:
                break
            if len(msgs) != t:
                raise ValueError(f"verifier addressed {len(msgs)} provers, protocol has {t}")
            addressed = set()
            for i, msg in enumerate(msgs, start=1):
                transcripts[i - 1].append(_check_bits(msg, "verifier"))
                if msg:
                    addressed.add(i)
    for row in transcripts:
        row.extend("" for _ in range(p - len(row)))
    frozen = tuple(tuple(m) for m in transcripts)
    payment = Fraction(protocol.payment(x, coins, frozen))
    if not -1 <= payment <= 1:
        raise PaymentRangeError(f"{protocol.name}: payment {payment} outside [-1, 1]")
    return ProtocolOutcome(frozen, payment, answer_bit(frozen), protocol.flags(x, coins, frozen))


def per_coin_payments(protocol: Protocol, x, profile: StrategyProfile,
                      cap: int | None = None) -> list[tuple[Coin, Fraction, Fraction]]:
    cap = enumeration_cap() if cap is None else cap
    count = protocol.coin_count(x)
    if count > cap:
        raise EnumerationRefused("coin outcomes", count, cap)
    return [(coin, Fraction(w), run_protocol(protocol, x, coin, profile).payment)
            for coin, w in protocol.coin_space(x)]


def conditional_utility(protocol: Protocol, x, profile: StrategyProfile, condition,
                        cap: int | None = None) -> Fraction:
    """E[payment | condition(coin)] by raw enumeration."""
    total, weight = Fraction(0), Fraction(0)
    for coin, w, pay in per_coin_payments(protocol, x, profile, cap):
        if condition(coin):
            total += w * pay
            weight += w
    if weight == 0:
        raise ValueError("conditioning event has probability 0")
    return total / weight


def expected_utility(protocol: Protocol, x, profile: StrategyProfile,
                     mode: str = "auto", cap: int | None = None) -> Fraction:
    """Exact expected payment.

    mode "raw" walks every coin outcome, "grouped" insists on the protocol's
    closed-form distribution, "auto" prefers grouped when it applies.
    """
    if mode not in ("auto", "raw", "grouped"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "raw":
        dist = protocol.grouped(x, profile)
        if dist is not None:
            total_w = sum(w for w, _ in dist)
            if total_w != 1:
                raise ValueError(f"{protocol.name}: grouped weights sum to {total_w}")
            for _, pay in dist:
                if not -1 <= pay <= 1:
                    raise PaymentRangeError(f"{protocol.name}: payment {pay} outside [-1, 1]")
            return sum((w * pay for w, pay in dist), Fraction(0))
        if mode == "grouped":
            raise ValueError(f"{protocol.name} has no grouped evaluation for {profile.descriptor()}")
    total, weight = Fraction(0), Fraction(0)
    for _, w, pay in per_coin_payments(protocol, x, profile, cap):
        total += w * pay
        weight += w
    if weight != 1:
        raise ValueError(f"{protocol.name}: coin weights sum to {weight}")
    return total


@dataclass
class BestResult:
    max_utility: Fraction
    maximizers: list[StrategyProfile]
    scored: list[tuple[StrategyProfile, Fraction]] = field(repr=False)


def score_family(protocol: Protocol, x, family: Sequence[StrategyProfile],
                 mode: str = "auto", cap: int | None = None) -> list[tuple[StrategyProfile, Fraction]]:
    cap = enumeration_cap() if cap is None else cap
    family = list(family)
    if len(family) > cap:
        raise EnumerationRefused("strategy profiles", len(family), cap)
    if not family:
        raise ValueError("empty strategy family")
    return [(prof, expected_utility(protocol, x, prof, mode, cap)) for prof in family]


def best_of(scored: Sequence[tuple[StrategyProfile, Fraction]]) -> BestResult:
    top = max(u for _, u in scored)
    winners = sorted((prof for prof, u in scored if u == top), key=StrategyProfile.key)
    return BestResult(top, winners, list(scored))


def enumerate_best(protocol: Protocol, x, family: Sequence[StrategyProfile],
                   mode: str = "auto", cap: int | None = None) -> BestResult:
    return best_of(score_family(protocol, x, family, mode, cap))


@dataclass
class MripCheck:
    cond1: bool
    cond2: bool
    max_utility: Fraction
    maximizers: list[StrategyProfile]
    ground_truth: int

    @property
    def passed(self) -> bool:
        return self.cond1 and self.cond2

    def to_json(self) -> dict:
        return {"max_utility": fmt_rational(self.max_utility),
                "maximizers": [m.descriptor() for m in self.maximizers],
                "cond1": self.cond1, "cond2": self.cond2}


def check_from_best(best: BestResult, ground_truth: int) -> MripCheck:
    cond1 = best.max_utility >= 0
    cond2 = all(m.output_bit == ground_truth for m in best.maximizers)
    return MripCheck(cond1, cond2, best.max_utility, best.maximizers, ground_truth)


def check_mrip(protocol: Protocol, x, family: Sequence[StrategyProfile], ground_truth: int,
               mode: str = "auto", cap: int | None = None) -> MripCheck:
    """Both conditions of the MRIP definition, restricted to ``family``."""
    return check_from_best(enumerate_best(protocol, x, family, mode, cap), ground_truth)
