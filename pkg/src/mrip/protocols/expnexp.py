"""Four-prover protocol for a three-level circuit with NEXP gates.

P1/P2 play the gate-checking game over all g + q + g' gates.  When the sampled
gate is an NEXP gate, P3/P4 run the c/MIP protocol on the block P1 claims feeds
it, and the payment is rescaled to 2R'/(p+1).

Rounds: 1 c | 2 gate i | 3 P1's claim | 4 i' to P2 | 5 P2's value |
6 x' to P3, P4 | 7 c' | 8 MIP queries | 9 MIP answers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from ..circuits import (AND, INPUT, NEXP, NOT, OR, BlockDecodeError, ThreeLevelCircuit,
                        apply_gate, eval_circuit, eval_three_level)
from ..core import OracleTable, all_oracles, decide_oracle3sat
from ..engine import Protocol, StrategyProfile, int_bits, split_bits
from .mip import ExhaustiveMip, MipSubroutine

TYPE_CODES = {AND: 0, OR: 1, NOT: 2, INPUT: 3, NEXP: 4}
CODE_TYPES = {v: k for k, v in TYPE_CODES.items()}
HALF = Fraction(1, 2)


def gate_choices(inputs: Sequence[int], i: int) -> list[tuple[int, int]]:
    """(gate, position in P1's value list) for {i} union inputs(i), first occurrence wins."""
    out, seen = [(i, 0)], {i}
    for pos, j in enumerate(inputs, start=1):
        if j not in seen:
            seen.add(j)
            out.append((j, pos))
    return out


@dataclass(frozen=True)
class ClaimLayout:
    """P1's round-3 answer: type, p gate slots, p wire slots, p + 1 values."""

    size: int
    p: int
    max_wire: int

    @property
    def gate_bits(self) -> int:
        return self.size.bit_length()

    @property
    def wire_bits(self) -> int:
        return self.max_wire.bit_length()

    @property
    def width(self) -> int:
        return 3 + self.p * (self.gate_bits + self.wire_bits) + self.p + 1

    def encode(self, t: str, gates: Sequence[int], wires: Sequence[int],
               values: Sequence[int]) -> str:
        pad = self.p - len(gates)
        return (int_bits(TYPE_CODES[t], 3)
                + "".join(int_bits(i, self.gate_bits) for i in list(gates) + [0] * pad)
                + "".join(int_bits(h, self.wire_bits) for h in list(wires) + [0] * pad)
                + "".join(str(v) for v in list(values) + [0] * (self.p + 1 - len(values))))

    def decode(self, msg: str):
        if len(msg) != self.width or int(msg[:3], 2) not in CODE_TYPES:
            return None
        t = CODE_TYPES[int(msg[:3], 2)]
        gates = split_bits(msg[3:3 + self.p * self.gate_bits], self.gate_bits)
        start = 3 + self.p * self.gate_bits
        wires = split_bits(msg[start:start + self.p * self.wire_bits], self.wire_bits)
        values = tuple(int(ch) for ch in msg[start + self.p * self.wire_bits:])
        return t, tuple(gates), tuple(wires), values


class FigExpNexp(Protocol):
    name = "expnexp"
    num_provers = 4
    num_rounds = 9

    def __init__(self, tlc: ThreeLevelCircuit, x: Sequence[int], mip: MipSubroutine | None = None):
        mip = mip or ExhaustiveMip()
        if not isinstance(mip, ExhaustiveMip):
            raise ValueError("the three-level protocol supports only the exhaustive MIP")
        if len(x) != tlc.n:
            raise ValueError(f"input has {len(x)} bits, circuit expects {tlc.n}")
        self.tlc = tlc
        self.input = tuple(int(b) for b in x)
        self.mip = mip
        self.size = tlc.size
        max_wire = 2 * tlc.g + tlc.q * tlc.p + 2 * tlc.level3.g
        self.layout = ClaimLayout(self.size, tlc.p, max_wire)
        self._info = {i: tlc.info(i) for i in range(1, self.size + 1)}
        self._choices = {i: gate_choices(self._info[i].inputs, i) for i in self._info}

    # -- coins --------------------------------------------------------------------

    def coin_space(self, x):
        for i in range(1, self.size + 1):
            choices = self._choices[i]
            weight = Fraction(1, self.size * len(choices))
            for idx in range(len(choices)):
                yield (i, idx), weight

    def coin_count(self, x):
        return sum(len(c) for c in self._choices.values())

    # -- verifier -----------------------------------------------------------------

    def step4(self, x, i: int, c: int, decoded) -> bool:
        if decoded is None:
            return False
        t, gates, wires, values = decoded
        info = self._info[i]
        k = len(info.inputs)
        if t != info.type or gates[:k] != info.inputs or wires[:k] != info.wires:
            return False
        vi = values[0]
        if t == INPUT:
            bit = self.tlc.x_input_bit(i)
            if bit is not None and vi != x[bit - 1]:
                return False
            if bit is None and vi != values[1]:
                return False
        elif t != NEXP:
            if vi != apply_gate(t, values[1:1 + k]):
                return False
        return i != self.size or vi == c

    def _state(self, x, coins, transcripts):
        """Walk the verifier's decisions; returns (stage, data)."""
        i, idx = coins
        c = int(transcripts[0][0][:1] == "1")
        decoded = self.layout.decode(transcripts[0][2]) if len(transcripts[0]) > 2 else None
        if not self.step4(x, i, c, decoded):
            return "step4", None
        target, pos = self._choices[i][idx]
        ans2 = transcripts[1][4] if len(transcripts[1]) > 4 else ""
        if ans2 != str(decoded[3][pos]):
            return "inconsistent", decoded
        if decoded[0] != NEXP:
            return "plain", decoded
        return "nexp", decoded

    def sub_instance(self, decoded):
        block = "".join(str(v) for v in decoded[3][1:1 + self.tlc.p])
        try:
            return block, self.tlc.codec.decode(block)
        except BlockDecodeError:
            return block, None

    def query(self, x, coins, transcripts, rnd):
        i, idx = coins
        gb = self.layout.gate_bits
        if rnd == 2:
            return int_bits(i, gb), "", "", ""
        stage, decoded = self._state(x, coins, transcripts) if rnd >= 4 else (None, None)
        if rnd == 4:
            if stage == "step4":
                return None
            return "", int_bits(self._choices[i][idx][0], gb), "", ""
        if stage != "nexp":
            return None
        block, instance = self.sub_instance(decoded)
        if rnd == 6:
            return "", "", block, block
        if rnd == 8:
            c_sub = int(transcripts[2][6][:1] == "1")
            if c_sub == 0 or instance is None:
                return None
            q1, q2 = self.mip.queries(instance, ())
            return "", "", q1, q2
        return None

    def _sub_payment(self, decoded, transcripts) -> tuple[int, Fraction]:
        _, instance = self.sub_instance(decoded)
        c_sub = int(transcripts[2][6][:1] == "1")
        if c_sub == 0:
            return 0, HALF
        if instance is None:
            # a block that is not a well-formed instance is a non-member
            return 1, Fraction(0)
        ok = self.mip.accepts(instance, (), transcripts[2][8], transcripts[3][8])
        return 1, Fraction(int(ok))

    def _outcome(self, x, coins, transcripts) -> tuple[str, Fraction]:
        stage, decoded = self._state(x, coins, transcripts)
        if stage == "step4":
            return stage, Fraction(0)
        if stage == "inconsistent":
            return stage, Fraction(-1)
        if stage == "plain":
            return stage, Fraction(1)
        c_sub, r_sub = self._sub_payment(decoded, transcripts)
        if c_sub != decoded[3][0]:
            return "nexp-mismatch", Fraction(-1)
        return "nexp", 2 * r_sub / (self.tlc.p + 1)

    def payment(self, x, coins, transcripts):
        return self._outcome(x, coins, transcripts)[1]

    def flags(self, x, coins, transcripts):
        return (self._outcome(x, coins, transcripts)[0],)

    def params(self):
        tlc = self.tlc
        return {"n": tlc.n, "g": tlc.g, "q": tlc.q, "p": tlc.p, "g3": tlc.level3.g,
                "x": "".join(map(str, self.input)), "mip": self.mip.name}


def make_fig_expnexp(tlc: ThreeLevelCircuit, x: Sequence[int],
                     mip: MipSubroutine | None = None) -> FigExpNexp:
    return FigExpNexp(tlc, x, mip)


# -- strategies -------------------------------------------------------------------

SubChoice = tuple[int, OracleTable | None]


def honest_sub_choice(block: str, codec) -> SubChoice:
    try:
        instance = codec.decode(block)
    except BlockDecodeError:
        return 0, None
    d = decide_oracle3sat(instance)
    return (1, d.witness) if d.member else (0, None)


@dataclass(frozen=True, eq=False)
class ThreeLevelProfile(StrategyProfile):
    """P1/P2 answer gate values from tables; P3/P4 pick (c', oracle) per block.

    Blocks missing from ``sub`` are played honestly.  Topology answers are
    truthful except on gates in ``topology_lies``.
    """

    tlc: ThreeLevelCircuit
    c: int
    values: Mapping[int, int]
    p2_values: Mapping[int, int] | None = None
    sub: Mapping[str, SubChoice] = field(default_factory=dict)
    topology_lies: frozenset = field(default_factory=frozenset)
    label: str = ""

    def value(self, prover: int, i: int) -> int:
        table = self.values if prover == 1 or self.p2_values is None else self.p2_values
        return int(table.get(i, 0))

    def sub_choice(self, block: str) -> SubChoice:
        if block in self.sub:
            return self.sub[block]
        return honest_sub_choice(block, self.tlc.codec)

    def respond(self, prover, rnd, transcript):
        tlc = self.tlc
        if rnd == 1:
            return str(self.c) if prover == 1 else ""
        query = transcript[-1] if transcript else ""
        if not query:
            return ""
        if prover == 1:
            i = int(query, 2)
            if not 1 <= i <= tlc.size:
                return ""
            info = tlc.info(i)
            t = info.type
            if i in self.topology_lies:
                t = OR if t == AND else AND
            layout = ClaimLayout(tlc.size, tlc.p, 2 * tlc.g + tlc.q * tlc.p + 2 * tlc.level3.g)
            vals = [self.value(1, i)] + [self.value(1, j) for j in info.inputs]
            return layout.encode(t, info.inputs, info.wires, vals)
        if prover == 2:
            return str(self.value(2, int(query, 2)))
        if rnd == 7:
            return str(self.sub_choice(query)[0]) if prover == 3 else ""
        if rnd == 9:
            _, oracle = self.sub_choice(transcript[5])
            if oracle is None:
                return ""
            points = split_bits(query, oracle.width) or []
            return "".join(str(oracle(b)) for b in points)
        return ""

    def descriptor(self):
        size = self.tlc.size
        out = {"kind": "three-level", "c": self.c,
               "values": "".join(str(self.value(1, i)) for i in range(1, size + 1))}
        if self.p2_values is not None:
            out["p2_values"] = "".join(str(self.value(2, i)) for i in range(1, size + 1))
        if self.sub:
            out["sub"] = {b: [cs, A.bits() if A else None] for b, (cs, A) in sorted(self.sub.items())}
        if self.topology_lies:
            out["topology_lies"] = sorted(self.topology_lies)
        if self.label:
            out["label"] = self.label
        return out


def propagated_values(tlc: ThreeLevelCircuit, x: Sequence[int], claims: Sequence[int]) -> dict[int, int]:
    """Level 1 honest, NEXP outputs set to ``claims``, level 3 computed from them."""
    values = dict(eval_circuit(tlc.level1, x))
    for k, bit in enumerate(claims, start=1):
        values[tlc.g + k] = bit
    v3 = eval_circuit(tlc.level3, list(x) + list(claims))
    offset = tlc.g + tlc.q
    values.update({j + offset: b for j, b in v3.items()})
    return values


def honest_three_level_profile(tlc: ThreeLevelCircuit, x: Sequence[int]) -> ThreeLevelProfile:
    result = eval_three_level(tlc, x)
    return ThreeLevelProfile(tlc, result.final, result.values, label="honest")


def three_level_family(tlc: ThreeLevelCircuit, x: Sequence[int]) -> list[ThreeLevelProfile]:
    """Gate-oracle x subroutine profiles.

    Every (c, NEXP claim vector) with level 3 propagated, crossed with the
    honest subroutine and every single-block subroutine deviation; plus
    single-gate flips and P1/P2-inconsistent variants of the honest table.
    """
    result = eval_three_level(tlc, x)
    blocks = ["".join(str(result.values[j]) for j in tlc.block_gates(k)) for k in range(1, tlc.q + 1)]
    subs: list[dict] = [{}]
    for block in sorted(set(blocks)):
        honest = honest_sub_choice(block, tlc.codec)
        width = tlc.codec.decode(block).s
        options = [(0, None)] + [(1, A) for A in all_oracles(width)]
        subs += [{block: opt} for opt in options if opt != honest]
    family = []
    for claims in product((0, 1), repeat=tlc.q):
        values = propagated_values(tlc, x, claims)
        for c in (0, 1):
            for sub in subs:
                family.append(ThreeLevelProfile(tlc, c, values, sub=sub,
                                                label=f"claims={''.join(map(str, claims))}"))
    honest = result.values
    for i in range(1, tlc.size + 1):
        flipped = dict(honest)
        flipped[i] ^= 1
        family.append(ThreeLevelProfile(tlc, result.final, flipped, label=f"flip {i}"))
        family.append(ThreeLevelProfile(tlc, result.final, honest, p2_values=flipped,
                                        label=f"p2 flip {i}"))
    return family
