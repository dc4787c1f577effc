"""Gate-by-gate spot check of an explicit circuit behind a DC oracle.

Round 2 sends a gate i to P1; round 3 returns type, input gates, input wires
and three values; round 4 sends one of {i, i1, i2} to P2; round 5 returns its
value.  The payment is 1 when all checks pass and 0 otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..circuits import AND, INPUT, NOT, OR, Circuit, DcOracle, apply_gate, eval_circuit
from ..engine import Protocol, StrategyProfile, int_bits

TYPE_CODES = {AND: 0, OR: 1, NOT: 2, INPUT: 3}
CODE_TYPES = {v: k for k, v in TYPE_CODES.items()}


@dataclass(frozen=True)
class GateLayout:
    """Bit layout of P1's round-3 answer."""

    g: int

    @property
    def gate_bits(self) -> int:
        return self.g.bit_length()

    @property
    def wire_bits(self) -> int:
        return (2 * self.g).bit_length()

    @property
    def width(self) -> int:
        return 2 + 2 * self.gate_bits + 2 * self.wire_bits + 3

    def encode(self, t: str, gates: Sequence[int], wires: Sequence[int],
               values: Sequence[int]) -> str:
        gates = list(gates) + [0] * (2 - len(gates))
        wires = list(wires) + [0] * (2 - len(wires))
        return (int_bits(TYPE_CODES[t], 2)
                + "".join(int_bits(i, self.gate_bits) for i in gates)
                + "".join(int_bits(h, self.wire_bits) for h in wires)
                + "".join(str(v) for v in values))

    def decode(self, msg: str):
        if len(msg) != self.width:
            return None
        pos, gb, wb = 2, self.gate_bits, self.wire_bits
        t = CODE_TYPES[int(msg[:2], 2)]
        i1, i2 = int(msg[pos:pos + gb], 2), int(msg[pos + gb:pos + 2 * gb], 2)
        pos += 2 * gb
        h1, h2 = int(msg[pos:pos + wb], 2), int(msg[pos + wb:pos + 2 * wb], 2)
        pos += 2 * wb
        values = tuple(int(ch) for ch in msg[pos:pos + 3])
        return t, (i1, i2), (h1, h2), values


def used_gates(i: int, n: int, claimed_type: str, claimed: Sequence[int]) -> list[int]:
    """The gates P2 may be asked about; an input gate has no inputs and NOT has one."""
    if i <= n:
        return [i]
    used = [i, claimed[0]]
    if claimed_type != NOT:
        used.append(claimed[1])
    return used


class FigExpMrip(Protocol):
    name = "expmrip"
    num_provers = 2
    num_rounds = 5

    def __init__(self, dc: DcOracle, x: Sequence[int]):
        if len(x) != dc.n:
            raise ValueError(f"input has {len(x)} bits, circuit expects {dc.n}")
        self.dc = dc
        self.input = tuple(int(b) for b in x)
        self.g = dc.size()
        self.layout = GateLayout(self.g)

    def coin_space(self, x):
        weight = Fraction(1, 3 * self.g)
        for i in range(1, self.g + 1):
            for slot in range(3):
                yield (i, slot), weight

    def coin_count(self, x):
        return 3 * self.g

    def _target(self, coins, decoded) -> int:
        i, slot = coins
        t, gates, _, _ = decoded
        used = used_gates(i, self.dc.n, t, gates)
        return used[slot] if slot < len(used) else i

    def _value_of(self, coins, decoded) -> int:
        """P1's claimed value for the gate sent to P2."""
        i, slot = coins
        t, gates, _, values = decoded
        used = used_gates(i, self.dc.n, t, gates)
        return values[slot] if slot < len(used) else values[0]

    def query(self, x, coins, transcripts, rnd):
        gb = self.layout.gate_bits
        if rnd == 2:
            return int_bits(coins[0], gb), ""
        if rnd == 4:
            decoded = self.layout.decode(transcripts[0][2])
            target = self._target(coins, decoded) if decoded else coins[0]
            return "", int_bits(target, gb)
        return None

    def checks(self, x, coins, transcripts) -> dict[str, bool]:
        i, _ = coins
        c = int(transcripts[0][0][:1] == "1")
        decoded = self.layout.decode(transcripts[0][2])
        if decoded is None:
            return {"format": False}
        t, (i1, i2), (h1, h2), (vi, v1, v2) = decoded
        dc, n = self.dc, self.dc.n
        out = {"format": True}
        if i > n:
            ok = (dc.safe("TYPE", i, t) == 1
                  and dc.safe("INPUT", h1, i) == 1 and dc.safe("OUTPUT", h1, i1) == 1)
            if ok and t != NOT:
                ok = dc.safe("INPUT", h2, i) == 1 and dc.safe("OUTPUT", h2, i2) == 1
            out["6a"] = ok
            if t in (AND, OR, NOT):
                out["6b"] = vi == apply_gate(t, [v1] if t == NOT else [v1, v2])
            else:
                out["6b"] = False
        else:
            out["6c"] = vi == x[i - 1]
        if i == self.g:
            out["6d"] = vi == c
        ans2 = transcripts[1][4]
        out["6e"] = len(ans2) == 1 and int(ans2) == self._value_of(coins, decoded)
        return out

    def payment(self, x, coins, transcripts):
        return Fraction(int(all(self.checks(x, coins, transcripts).values())))

    def flags(self, x, coins, transcripts):
        return tuple(sorted(k for k, ok in self.checks(x, coins, transcripts).items() if not ok))

    def params(self):
        return {"n": self.dc.n, "g": self.g, "x": "".join(map(str, self.input))}


def make_fig_expmrip(dc: DcOracle, x: Sequence[int]) -> FigExpMrip:
    return FigExpMrip(dc, x)


@dataclass(frozen=True, eq=False)
class GateOracleProfile(StrategyProfile):
    """P1 answers from ``gate_values``; P2 from ``p2_values`` (default the same).

    With ``topology_honest`` P1 reports each gate's true type, inputs and
    wires; gates listed in ``topology_lies`` get a wrong type instead.
    """

    circuit: Circuit
    c: int
    gate_values: Mapping[int, int]
    p2_values: Mapping[int, int] | None = None
    topology_honest: bool = True
    topology_lies: frozenset = field(default_factory=frozenset)

    def value(self, prover: int, i: int) -> int:
        table = self.gate_values if prover == 1 or self.p2_values is None else self.p2_values
        return int(table.get(i, 0))

    def _claim(self, i: int):
        gate = self.circuit.gate(i)
        t, inputs, wires = gate.type, gate.inputs, gate.wires
        if not self.topology_honest or i in self.topology_lies:
            t = {AND: OR, OR: AND, NOT: AND, INPUT: AND}[t]
        return t, inputs, wires

    def respond(self, prover, rnd, transcript):
        g = self.circuit.g
        layout = GateLayout(g)
        if rnd == 1:
            return str(self.c) if prover == 1 else ""
        query = transcript[-1] if transcript else ""
        if not query:
            return ""
        i = int(query, 2)
        if not 1 <= i <= g:
            return "0" if prover == 2 else layout.encode(INPUT, (), (), (0, 0, 0))
        if prover == 2:
            return str(self.value(2, i))
        t, inputs, wires = self._claim(i)
        values = [self.value(1, i)] + [self.value(1, j) for j in inputs]
        values += [0] * (3 - len(values))
        return layout.encode(t, inputs, wires, values)

    def descriptor(self):
        g = self.circuit.g
        out = {"kind": "gate-oracle", "c": self.c,
               "gate_values": "".join(str(self.value(1, i)) for i in range(1, g + 1)),
               "topology_honest": self.topology_honest and not self.topology_lies}
        if self.p2_values is not None:
            out["p2_values"] = "".join(str(self.value(2, i)) for i in range(1, g + 1))
        if self.topology_lies:
            out["topology_lies"] = sorted(self.topology_lies)
        return out


def honest_gate_profile(circuit: Circuit, x: Sequence[int]) -> GateOracleProfile:
    v = eval_circuit(circuit, x)
    return GateOracleProfile(circuit, v[circuit.g], v)


def gate_oracle_family(circuit: Circuit) -> list[GateOracleProfile]:
    """Every value table over gates 1..g with both answer bits, topology honest."""
    g = circuit.g
    family = []
    for index in range(1 << g):
        table = {i: (index >> (g - i)) & 1 for i in range(1, g + 1)}
        for c in (0, 1):
            family.append(GateOracleProfile(circuit, c, table))
    return family
