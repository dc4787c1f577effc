"""Protocol transformers: complement, 2-prover/5-round simulation, sign flip."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

from ..engine import (Protocol, StrategyProfile, flip_first, int_bits, run_protocol)
from ..profiles import CommittedOracleProfile


# -- complement ------------------------------------------------------------------

def _flip_p1(transcripts):
    if not transcripts or not transcripts[0]:
        return transcripts
    first = (flip_first(transcripts[0][0]),) + tuple(transcripts[0][1:])
    return (first,) + tuple(transcripts[1:])


class ComplementProfile(StrategyProfile):
    """The bijection s -> s': P1's first message has its first bit flipped,
    and P1 reads its own first message back unflipped."""

    def __init__(self, base: StrategyProfile):
        self.base = base

    def respond(self, prover, rnd, transcript):
        if prover == 1 and transcript:
            transcript = (flip_first(transcript[0]),) + tuple(transcript[1:])
        msg = self.base.respond(prover, rnd, transcript)
        return flip_first(msg) if prover == 1 and rnd == 1 else msg

    def descriptor(self):
        return {"kind": "complement", "base": self.base.descriptor()}


def complement_of(profile: StrategyProfile) -> StrategyProfile:
    """ComplementProfile with the obvious simplifications."""
    if isinstance(profile, ComplementProfile):
        return profile.base
    if isinstance(profile, CommittedOracleProfile):
        # committed provers never look at P1's opening again
        return replace(profile, c=1 - profile.c)
    return ComplementProfile(profile)


class ComplementWrap(Protocol):
    def __init__(self, base: Protocol):
        self.base = base
        self.name = f"complement({base.name})"
        self.num_provers, self.num_rounds = base.num_provers, base.num_rounds
        self.opening, self.input = base.opening, base.input

    def coin_space(self, x):
        return self.base.coin_space(x)

    def coin_count(self, x):
        return self.base.coin_count(x)

    def query(self, x, coins, transcripts, rnd):
        return self.base.query(x, coins, _flip_p1(transcripts), rnd)

    def payment(self, x, coins, transcripts):
        return self.base.payment(x, coins, _flip_p1(transcripts))

    def flags(self, x, coins, transcripts):
        return self.base.flags(x, coins, _flip_p1(transcripts))

    def grouped(self, x, profile):
        # running s under the wrap is running complement(s) under the base
        return self.base.grouped(x, complement_of(profile))

    def params(self):
        return {"base": self.base.descriptor()}


def complement_wrap(protocol: Protocol) -> ComplementWrap:
    return ComplementWrap(protocol)


# -- negative control ---------------------------------------------------------------

class NegatedPayment(Protocol):
    """Deliberately broken: the base protocol with its payment sign flipped."""

    def __init__(self, base: Protocol):
        self.base = base
        self.name = f"negated({base.name})"
        self.num_provers, self.num_rounds = base.num_provers, base.num_rounds
        self.opening, self.input = base.opening, base.input

    def coin_space(self, x):
        return self.base.coin_space(x)

    def coin_count(self, x):
        return self.base.coin_count(x)

    def query(self, x, coins, transcripts, rnd):
        return self.base.query(x, coins, transcripts, rnd)

    def payment(self, x, coins, transcripts):
        return -self.base.payment(x, coins, transcripts)

    def grouped(self, x, profile):
        dist = self.base.grouped(x, profile)
        return None if dist is None else [(w, -pay) for w, pay in dist]

    def params(self):
        return {"base": self.base.descriptor()}


# -- two provers, five rounds --------------------------------------------------------

LEN_BITS = 16


def encode_messages(msgs: Iterable[str]) -> str:
    out = []
    for m in msgs:
        if len(m) >= 1 << LEN_BITS:
            raise ValueError("message too long for the length prefix")
        out.append(int_bits(len(m), LEN_BITS) + m)
    return "".join(out)


def decode_messages(bits: str) -> list[str] | None:
    out, pos = [], 0
    while pos < len(bits):
        if pos + LEN_BITS > len(bits):
            return None
        size = int(bits[pos:pos + LEN_BITS], 2)
        pos += LEN_BITS
        if pos + size > len(bits):
            return None
        out.append(bits[pos:pos + size])
        pos += size
    return out


def encode_transcript(transcripts) -> str:
    return encode_messages(m for row in transcripts for m in row)


def decode_transcript(bits: str, t: int, p: int):
    msgs = decode_messages(bits)
    if msgs is None or len(msgs) != t * p:
        return None
    return tuple(tuple(msgs[k * p:(k + 1) * p]) for k in range(t))


class TwoFiveWrap(Protocol):
    """V' coins are (r, (j, k)): r is the base verifier's coin outcome,
    (j, k) picks one prover message slot to cross-check with P2'."""

    num_provers = 2
    num_rounds = 5

    def __init__(self, base: Protocol):
        self.base = base
        self.name = f"two_five({base.name})"
        self.input = base.input
        x = base.input
        self._coins = list(base.coin_space(x))
        self._index = {coin: n for n, (coin, _) in enumerate(self._coins)}
        self.r_bits = max(1, (len(self._coins) - 1).bit_length())
        self.t, self.p = base.num_provers, base.num_rounds
        self.j_bits, self.k_bits = self.p.bit_length(), self.t.bit_length()

    @property
    def scale(self) -> int:
        return 2 * self.p * self.t

    def coin_space(self, x):
        share = Fraction(1, self.p * self.t)
        for coin, w in self._coins:
            for j in range(1, self.p + 1):
                for k in range(1, self.t + 1):
                    yield (coin, (j, k)), w * share

    def coin_count(self, x):
        return len(self._coins) * self.p * self.t

    def encode_r(self, coin) -> str:
        return int_bits(self._index[coin], self.r_bits)

    def decode_r(self, bits: str):
        if len(bits) != self.r_bits or int(bits, 2) >= len(self._coins):
            return None
        return self._coins[int(bits, 2)][0]

    def encode_jk(self, j: int, k: int, prefix) -> str:
        return int_bits(j, self.j_bits) + int_bits(k, self.k_bits) + encode_messages(prefix)

    def decode_jk(self, bits: str):
        head = self.j_bits + self.k_bits
        if len(bits) < head:
            return None
        j, k = int(bits[:self.j_bits], 2), int(bits[self.j_bits:head], 2)
        prefix = decode_messages(bits[head:])
        if prefix is None or not (1 <= j <= self.p and 1 <= k <= self.t) or len(prefix) != j - 1:
            return None
        return j, k, tuple(prefix)

    def query(self, x, coins, transcripts, rnd):
        r, (j, k) = coins
        if rnd == 2:
            return self.encode_r(r), ""
        if rnd == 4:
            claimed = decode_transcript(transcripts[0][2], self.t, self.p)
            prefix = claimed[k - 1][:j - 1] if claimed else ("",) * (j - 1)
            return "", self.encode_jk(j, k, prefix)
        return None

    def replay_ok(self, x, r, claimed) -> bool:
        """Do the claimed verifier messages match what V sends on r given the
        claimed prover messages, and do unaddressed provers stay silent?"""
        base, t, p = self.base, self.t, self.p
        addressed = set(base.opening)
        ended = False
        for rnd in range(1, p + 1):
            col = [claimed[i][rnd - 1] for i in range(t)]
            if rnd % 2:
                if any(col[i] for i in range(t) if ended or (i + 1) not in addressed):
                    return False
                continue
            if ended:
                if any(col):
                    return False
                continue
            prefix = tuple(tuple(row[:rnd - 1]) for row in claimed)
            expect = base.query(x, r, prefix, rnd)
            if expect is None:
                ended = True
                if any(col):
                    return False
                continue
            if tuple(col) != tuple(expect):
                return False
            addressed = {i + 1 for i, m in enumerate(expect) if m}
        return True

    def slot_is_prover_message(self, claimed, j: int, k: int) -> bool:
        if j % 2 == 0:
            return False
        if j == 1:
            return k in self.base.opening
        return bool(claimed[k - 1][j - 2])

    def _outcome(self, x, coins, transcripts) -> tuple[str, Fraction]:
        r, (j, k) = coins
        c = transcripts[0][0][:1]
        claimed = decode_transcript(transcripts[0][2], self.t, self.p)
        if len(c) != 1 or len(transcripts[0][0]) != 1 or claimed is None:
            return "malformed", Fraction(-1)
        if not self.replay_ok(x, r, claimed):
            return "malformed", Fraction(-1)
        answer = transcripts[1][4]
        if j == 1 and k == 1 and answer[:1] != c:
            return "7a", Fraction(-1)
        if self.slot_is_prover_message(claimed, j, k) and answer != claimed[k - 1][j - 1]:
            return "7b", Fraction(-1)
        pay = Fraction(self.base.payment(x, r, claimed))
        return "7c", pay / self.scale

    def payment(self, x, coins, transcripts):
        return self._outcome(x, coins, transcripts)[1]

    def flags(self, x, coins, transcripts):
        return (self._outcome(x, coins, transcripts)[0],)

    def grouped(self, x, profile):
        # exact type: a LyingLift is an HonestLift subclass but is not honest
        if type(profile) is HonestLift and profile.wrap is self:
            dist = self.base.grouped(x, profile.base)
            if dist is not None:
                return [(w, pay / self.scale) for w, pay in dist]
        return None

    def params(self):
        return {"base": self.base.descriptor(), "t": self.t, "p": self.p,
                "len_bits": LEN_BITS}


def two_five_wrap(protocol: Protocol) -> TwoFiveWrap:
    return TwoFiveWrap(protocol)


# -- lifted strategies --------------------------------------------------------------

def _alter(msg: str) -> str:
    return flip_first(msg) if msg else "1"


@dataclass(frozen=True, eq=False)
class HonestLift(StrategyProfile):
    """P1' simulates the base profile on r and reports the transcript truthfully;
    P2' answers as the base profile would."""

    wrap: TwoFiveWrap
    base: StrategyProfile

    def simulate(self, r):
        return run_protocol(self.wrap.base, self.wrap.input, r, self.base).transcript

    def first_bit(self) -> str:
        return self.base.respond(1, 1, ())[:1] or "0"

    def respond(self, prover, rnd, transcript):
        wrap = self.wrap
        if prover == 1:
            if rnd == 1:
                return self.first_bit()
            if rnd == 3:
                r = wrap.decode_r(transcript[1])
                return encode_transcript(self.simulate(r)) if r is not None else ""
            return ""
        if rnd == 5:
            decoded = wrap.decode_jk(transcript[3])
            if decoded is None:
                return ""
            j, k, prefix = decoded
            if j % 2 == 0:
                return ""
            if j == 1 and k not in wrap.base.opening:
                return ""
            if j > 1 and not prefix[j - 2]:
                return ""
            return self.base.respond(k, j, prefix)
        return ""

    def descriptor(self):
        return {"kind": "honest-lift", "base": self.base.descriptor()}


@dataclass(frozen=True, eq=False)
class LyingLift(HonestLift):
    """P1' alters the prover messages at ``lies`` (pairs (k, j), j odd) on every
    r, then continues the simulation on the altered transcript.  Slots after the
    base protocol has ended are altered too, so y = len(lies) on every r.
    P2' stays honest."""

    lies: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        t, p = self.wrap.t, self.wrap.p
        for k, j in self.lies:
            if not (1 <= k <= t and 1 <= j <= p and j % 2):
                raise ValueError(f"lie ({k}, {j}) is not a prover message slot")

    @property
    def y(self) -> int:
        return len(self.lies)

    def simulate(self, r):
        base, x = self.wrap.base, self.wrap.input
        t, p = base.num_provers, base.num_rounds
        rows: list[list[str]] = [[] for _ in range(t)]
        addressed = set(base.opening)
        for rnd in range(1, p + 1):
            if rnd % 2:
                for i in range(1, t + 1):
                    msg = self.base.respond(i, rnd, tuple(rows[i - 1])) if i in addressed else ""
                    if (i, rnd) in self.lies:
                        msg = _alter(msg)
                    rows[i - 1].append(msg)
            else:
                msgs = base.query(x, r, tuple(tuple(row) for row in rows), rnd)
                if msgs is None:
                    break
                addressed = {i for i, m in enumerate(msgs, start=1) if m}
                for i, m in enumerate(msgs, start=1):
                    rows[i - 1].append(m)
        reached = len(rows[0])
        for row in rows:
            row.extend("" for _ in range(p - len(row)))
        for k, j in self.lies:
            if j > reached:
                rows[k - 1][j - 1] = _alter("")
        return tuple(tuple(row) for row in rows)

    def descriptor(self):
        return {"kind": "lying-lift", "base": self.base.descriptor(),
                "lies": sorted(list(pair) for pair in self.lies)}
