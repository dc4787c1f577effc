"""Explicit Boolean circuits behind a direct-connect (DC) query interface.

Gates are numbered 1..g, gates 1..n are the inputs and gate g is the output.
The input wire feeding slot ``k`` (k = 0, 1) of gate ``i`` has id ``2*i - k``,
so every wire id lies in 1..2g.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from pathlib import Path
from typing import Callable, Sequence

from .core import (DEFAULT_BOUNDS, DeskBounds, Oracle3SatInstance, decide_oracle3sat)

AND, OR, NOT, INPUT, NEXP = "AND", "OR", "NOT", "INPUT", "NEXP"
GATE_TYPES = (AND, OR, NOT, INPUT)
ARITY = {AND: 2, OR: 2, NOT: 1, INPUT: 0}


class CircuitError(ValueError):
    pass


class DcQueryError(ValueError):
    pass


def wire_id(dest: int, slot: int) -> int:
    return 2 * dest - slot


@dataclass(frozen=True)
class Gate:
    type: str
    inputs: tuple[int, ...] = ()
    wires: tuple[int, ...] = ()


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...]
    order: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = len(self.gates)
        if not 0 <= self.n <= g or g == 0:
            raise CircuitError(f"need 0 <= n <= g and g >= 1, got n={self.n}, g={g}")
        gates = []
        for i, gate in enumerate(self.gates, start=1):
            if gate.type not in ARITY:
                raise CircuitError(f"gate {i}: unknown type {gate.type!r}")
            if (i <= self.n) != (gate.type == INPUT):
                raise CircuitError(f"gate {i}: gates 1..n must be exactly the INPUT gates")
            if len(gate.inputs) != ARITY[gate.type]:
                raise CircuitError(
                    f"gate {i}: {gate.type} takes {ARITY[gate.type]} inputs, got {len(gate.inputs)}")
            for src in gate.inputs:
                if not 1 <= src <= g:
                    raise CircuitError(f"gate {i}: input gate {src} outside 1..{g}")
            wires = gate.wires or tuple(wire_id(i, k) for k in range(len(gate.inputs)))
            if len(wires) != len(gate.inputs):
                raise CircuitError(f"gate {i}: {len(wires)} wires for {len(gate.inputs)} inputs")
            gates.append(Gate(gate.type, tuple(gate.inputs), tuple(wires)))
        seen: set[int] = set()
        for i, gate in enumerate(gates, start=1):
            for h in gate.wires:
                if not 1 <= h <= 2 * g or h in seen:
                    raise CircuitError(f"gate {i}: wire {h} out of range or reused")
                seen.add(h)
        object.__setattr__(self, "gates", tuple(gates))
        graph = {i: set(gate.inputs) for i, gate in enumerate(gates, start=1)}
        try:
            order = tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise CircuitError(f"cyclic wiring through gates {exc.args[1]}") from None
        object.__setattr__(self, "order", order)

    @property
    def g(self) -> int:
        return len(self.gates)

    def gate(self, i: int) -> Gate:
        return self.gates[i - 1]

    def wiring(self) -> dict[int, tuple[int, int]]:
        """wire id -> (source gate, destination gate)."""
        return {h: (src, i)
                for i, gate in enumerate(self.gates, start=1)
                for src, h in zip(gate.inputs, gate.wires)}

    def to_json(self) -> dict:
        return {"n": self.n,
                "gates": [{"type": gate.type, "in": list(gate.inputs), "wires": list(gate.wires)}
                          for gate in self.gates]}

    @classmethod
    def from_json(cls, data: dict) -> "Circuit":
        gates = tuple(Gate(item["type"], tuple(item.get("in", ())), tuple(item.get("wires", ())))
                      for item in data["gates"])
        return cls(int(data["n"]), gates)


def build(n: int, rows: Sequence[tuple]) -> Circuit:
    """Circuit from (type, *inputs) rows for the non-input gates n+1..g."""
    gates = [Gate(INPUT)] * n + [Gate(row[0], tuple(row[1:])) for row in rows]
    return Circuit(n, tuple(gates))


def eval_circuit(circuit: Circuit, x: Sequence[int]) -> dict[int, int]:
    """Value of every gate on input x, as {gate: bit}."""
    if len(x) != circuit.n:
        raise ValueError(f"input has {len(x)} bits, circuit expects {circuit.n}")
    v: dict[int, int] = {}
    for i in circuit.order:
        gate = circuit.gate(i)
        if gate.type == INPUT:
            v[i] = int(x[i - 1])
        else:
            v[i] = apply_gate(gate.type, [v[j] for j in gate.inputs])
    return dict(sorted(v.items()))


def apply_gate(kind: str, values: Sequence[int]) -> int:
    if kind == AND:
        return values[0] & values[1]
    if kind == OR:
        return values[0] | values[1]
    if kind == NOT:
        return 1 - values[0]
    raise ValueError(f"no Boolean rule for gate type {kind}")


# -- DC query interface -------------------------------------------------------

class DcOracle:
    """Answers SIZE / INPUT / OUTPUT / TYPE for one circuit.

    ``backing`` is either a Circuit or a callable n -> Circuit.
    """

    def __init__(self, backing: Circuit | Callable[[int], Circuit], n: int | None = None):
        if isinstance(backing, Circuit):
            self.circuit = backing
        else:
            if n is None:
                raise ValueError("a generator-backed oracle needs the input length n")
            self.circuit = backing(n)
        self._wiring = self.circuit.wiring()

    @property
    def n(self) -> int:
        return self.circuit.n

    def _gate(self, i: int) -> Gate:
        if not 1 <= i <= self.circuit.g:
            raise DcQueryError(f"gate {i} outside 1..{self.circuit.g}")
        return self.circuit.gate(i)

    def _wire(self, h: int) -> tuple[int, int] | None:
        if not 1 <= h <= 2 * self.circuit.g:
            raise DcQueryError(f"wire {h} outside 1..{2 * self.circuit.g}")
        return self._wiring.get(h)

    def size(self) -> int:
        return self.circuit.g

    def input(self, h: int, i: int) -> int:
        """Is wire h an input to gate i?"""
        self._gate(i)
        ends = self._wire(h)
        return int(ends is not None and ends[1] == i)

    def output(self, h: int, i: int) -> int:
        """Is wire h the output of gate i?"""
        self._gate(i)
        ends = self._wire(h)
        return int(ends is not None and ends[0] == i)

    def type(self, i: int, t: str) -> int:
        if t not in GATE_TYPES:
            raise DcQueryError(f"unknown gate type {t!r}")
        return int(self._gate(i).type == t)

    def safe(self, name: str, *args) -> int:
        """Like dc_query but out-of-range questions answer 0 instead of raising."""
        try:
            return dc_query(self, (name, *args))
        except DcQueryError:
            return 0


def dc_query(oracle: DcOracle, query: tuple) -> int:
    name, *args = query
    if name == "SIZE":
        return oracle.size()
    if name == "INPUT":
        return oracle.input(*args)
    if name == "OUTPUT":
        return oracle.output(*args)
    if name == "TYPE":
        return oracle.type(*args)
    raise DcQueryError(f"unknown query {name!r}")


# -- NEXP-gate block encoding --------------------------------------------------

class BlockDecodeError(ValueError):
    pass


@dataclass(frozen=True)
class BlockCodec:
    """Fixed-width encoding of a small Oracle-3SAT instance.

    Layout: r (r_bits) | s - 1 (s_bits) | clause count (count_bits) | clause slots.
    Every clause slot holds three literals, each a sign bit then index - 1.
    Slots past the clause count are padding.
    """

    r_bits: int = 1
    s_bits: int = 0
    count_bits: int = 1
    index_bits: int = 3

    @property
    def max_clauses(self) -> int:
        return (1 << self.count_bits) - 1

    @property
    def literal_bits(self) -> int:
        return 1 + self.index_bits

    @property
    def width(self) -> int:
        return self.r_bits + self.s_bits + self.count_bits + 3 * self.max_clauses * self.literal_bits

    def encode(self, instance: Oracle3SatInstance) -> str:
        fields = [(instance.r, self.r_bits), (instance.s - 1, self.s_bits),
                  (len(instance.clauses), self.count_bits)]
        for clause in instance.clauses:
            for lit in clause:
                fields += [(int(lit < 0), 1), (abs(lit) - 1, self.index_bits)]
        out = []
        for value, width in fields:
            if value < 0 or value >= 1 << width:
                raise ValueError(f"value {value} does not fit in {width} bits")
            out.append(format(value, f"0{width}b") if width else "")
        bits = "".join(out)
        return bits + "0" * (self.width - len(bits))

    def decode(self, bits: str, bounds: DeskBounds = DEFAULT_BOUNDS) -> Oracle3SatInstance:
        if len(bits) != self.width or set(bits) - {"0", "1"}:
            raise BlockDecodeError(f"block must be {self.width} bits")
        pos = 0

        def take(width: int) -> int:
            nonlocal pos
            chunk = bits[pos:pos + width]
            pos += width
            return int(chunk, 2) if chunk else 0

        r, s, count = take(self.r_bits), take(self.s_bits) + 1, take(self.count_bits)
        clauses = []
        for _ in range(count):
            clause = []
            for _ in range(3):
                negative, index = take(1), take(self.index_bits) + 1
                clause.append(-index if negative else index)
            clauses.append(tuple(clause))
        try:
            instance = Oracle3SatInstance(r, s, tuple(clauses))
            instance.check_bounds(bounds)
        except ValueError as exc:
            raise BlockDecodeError(str(exc)) from None
        return instance

    def to_json(self) -> dict:
        return {"r_bits": self.r_bits, "s_bits": self.s_bits,
                "count_bits": self.count_bits, "index_bits": self.index_bits}


# -- three-level circuits -------------------------------------------------------

class ThreeLevelError(ValueError):
    pass


@dataclass(frozen=True)
class GateInfo:
    type: str
    inputs: tuple[int, ...]
    wires: tuple[int, ...]


@dataclass(frozen=True)
class ThreeLevelCircuit:
    """Level 1 (gates 1..g) computes q blocks of p bits on gates n+1..n+q*p;
    NEXP gates g+1..g+q decide each block; level 3 (gates g+q+1..g+q+g')
    reads x and the q NEXP outputs and produces the final bit."""

    level1: Circuit
    q: int
    level3: Circuit
    codec: BlockCodec = BlockCodec()

    def __post_init__(self):
        n, p = self.level1.n, self.codec.width
        if self.q < 1:
            raise ThreeLevelError("need at least one NEXP gate")
        if self.level1.g < n + self.q * p:
            raise ThreeLevelError(
                f"level 1 has {self.level1.g} gates, needs at least n + q*p = {n + self.q * p}")
        if self.level3.n != n + self.q:
            raise ThreeLevelError(f"level 3 must have n + q = {n + self.q} inputs")

    @property
    def n(self) -> int:
        return self.level1.n

    @property
    def p(self) -> int:
        return self.codec.width

    @property
    def g(self) -> int:
        return self.level1.g

    @property
    def size(self) -> int:
        return self.level1.g + self.q + self.level3.g

    @property
    def output_gate(self) -> int:
        return self.size

    def nexp_gates(self) -> range:
        return range(self.g + 1, self.g + self.q + 1)

    def block_gates(self, k: int) -> tuple[int, ...]:
        """Level-1 output gates feeding NEXP gate g+k (k = 1..q)."""
        start = self.n + (k - 1) * self.p + 1
        return tuple(range(start, start + self.p))

    def info(self, i: int) -> GateInfo:
        g, q, p = self.g, self.q, self.p
        if 1 <= i <= g:
            gate = self.level1.gate(i)
            return GateInfo(gate.type, gate.inputs, gate.wires)
        if g < i <= g + q:
            k = i - g
            wires = tuple(2 * g + (k - 1) * p + t for t in range(1, p + 1))
            return GateInfo(NEXP, self.block_gates(k), wires)
        if g + q < i <= self.size:
            local = i - g - q
            gate = self.level3.gate(local)
            offset = 2 * g + q * p
            if local <= self.n:
                return GateInfo(INPUT, (), ())
            if local <= self.n + q:
                # level-3 input fed by an NEXP gate
                return GateInfo(INPUT, (g + local - self.n,), (offset + wire_id(local, 0),))
            return GateInfo(gate.type, tuple(j + g + q for j in gate.inputs),
                            tuple(h + offset for h in gate.wires))
        raise ThreeLevelError(f"gate {i} outside 1..{self.size}")

    def x_input_bit(self, i: int) -> int | None:
        """Index (1-based) of the bit of x an x-connected input gate copies."""
        if 1 <= i <= self.n:
            return i
        local = i - self.g - self.q
        if 1 <= local <= self.n:
            return local
        return None

    def to_json(self, x: Sequence[int] | None = None) -> dict:
        data = {"q": self.q, "p": self.p, "codec": self.codec.to_json(),
                "level1": self.level1.to_json(), "level3": self.level3.to_json()}
        if x is not None:
            result = eval_three_level(self, x)
            data["x"] = "".join(map(str, x))
            data["instances"] = [inst.to_json() for inst in result.instances]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "ThreeLevelCircuit":
        tlc = cls(Circuit.from_json(data["level1"]), int(data["q"]),
                  Circuit.from_json(data["level3"]), BlockCodec(**data.get("codec", {})))
        if "p" in data and int(data["p"]) != tlc.p:
            raise ThreeLevelError(f"declared p = {data['p']} but codec width is {tlc.p}")
        if "x" in data and "instances" in data:
            x = [int(ch) for ch in data["x"]]
            found = [inst.to_json() for inst in eval_three_level(tlc, x).instances]
            if found != data["instances"]:
                raise ThreeLevelError("embedded instances disagree with level 1 on the stored x")
        return tlc


@dataclass(frozen=True)
class ThreeLevelResult:
    final: int
    values: dict[int, int]
    instances: tuple[Oracle3SatInstance, ...]


def eval_three_level(tlc: ThreeLevelCircuit, x: Sequence[int],
                     bounds: DeskBounds = DEFAULT_BOUNDS) -> ThreeLevelResult:
    v1 = eval_circuit(tlc.level1, x)
    values = dict(v1)
    instances = []
    for k in range(1, tlc.q + 1):
        block = "".join(str(v1[j]) for j in tlc.block_gates(k))
        try:
            instance = tlc.codec.decode(block, bounds)
        except BlockDecodeError as exc:
            raise ThreeLevelError(f"NEXP gate block {k} does not decode: {exc}") from None
        instances.append(instance)
        values[tlc.g + k] = decide_oracle3sat(instance, bounds).member
    answers = [values[tlc.g + k] for k in range(1, tlc.q + 1)]
    v3 = eval_circuit(tlc.level3, list(x) + answers)
    offset = tlc.g + tlc.q
    values.update({j + offset: bit for j, bit in v3.items()})
    return ThreeLevelResult(values[tlc.size], values, tuple(instances))


# -- files ---------------------------------------------------------------------

def load_circuit(path: str | Path) -> Circuit:
    return Circuit.from_json(json.loads(Path(path).read_text()))


def load_three_level(path: str | Path) -> ThreeLevelCircuit:
    return ThreeLevelCircuit.from_json(json.loads(Path(path).read_text()))


# -- small named circuits and generators ------------------------------------------

def identity_circuit() -> Circuit:
    return build(1, [])


def not_circuit() -> Circuit:
    return build(1, [(NOT, 1)])


def xor2_circuit() -> Circuit:
    return build(2, [(OR, 1, 2), (AND, 1, 2), (NOT, 4), (AND, 3, 5)])


def majority3_circuit() -> Circuit:
    # maj(a, b, c) = (a AND b) OR (c AND (a OR b))
    return build(3, [(AND, 1, 2), (OR, 1, 2), (AND, 3, 5), (OR, 4, 6)])


def random_circuit(rng: random.Random, n: int, g: int) -> Circuit:
    if g <= n:
        raise ValueError("need at least one non-input gate")
    rows = []
    for i in range(n + 1, g + 1):
        kind = rng.choice((AND, OR, NOT))
        if kind == NOT:
            rows.append((NOT, rng.randint(1, i - 1)))
        else:
            rows.append((kind, rng.randint(1, i - 1), rng.randint(1, i - 1)))
    return build(n, rows)


def random_block_instance(rng: random.Random, codec: BlockCodec) -> Oracle3SatInstance:
    """A random instance the codec can carry, decodable under the default bounds."""
    while True:
        r = rng.randrange(1 << codec.r_bits)
        s = rng.randrange(1 << codec.s_bits) + 1
        top = min(r + 3 * s + 3, 1 << codec.index_bits)
        if r + 3 * s + 3 > 1 << codec.index_bits or r + 3 * s > DEFAULT_BOUNDS.max_w_bits:
            continue
        count = rng.randint(0, codec.max_clauses)
        clauses = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, top) for _ in range(3))
                        for _ in range(count))
        return Oracle3SatInstance(r, s, clauses)


def random_three_level(rng: random.Random, n: int = 2, q: int = 2,
                       codec: BlockCodec = BlockCodec(), extra3: int = 3,
                       x_dependent_signs: bool = True,
                       blocks: Sequence[Oracle3SatInstance] | None = None) -> ThreeLevelCircuit:
    """Random three-level circuit whose blocks decode for every input x.

    Header and index bits of each block are constants; sign bits may copy or
    negate an input bit, so block membership can depend on x.  ``blocks``
    fixes the instances the blocks encode (before any sign rewiring).
    """
    p = codec.width
    if blocks is None:
        blocks = [random_block_instance(rng, codec) for _ in range(q)]
    if len(blocks) != q:
        raise ValueError(f"need {q} block instances, got {len(blocks)}")
    targets = [codec.encode(inst) for inst in blocks]
    sign_positions = set()
    pos = codec.r_bits + codec.s_bits + codec.count_bits
    for _ in range(3 * codec.max_clauses):
        sign_positions.add(pos)
        pos += codec.literal_bits
    helper = n + q * p + 1  # NOT x1, used to build constants
    rows = []
    for block in targets:
        for k, bit in enumerate(block):
            if x_dependent_signs and k in sign_positions and rng.random() < 0.5:
                a = rng.randint(1, n)
                rows.append((AND, a, a) if rng.random() < 0.5 else (NOT, a))
            elif bit == "1":
                rows.append((OR, 1, helper))
            else:
                rows.append((AND, 1, helper))
    rows.append((NOT, 1))
    level1 = build(n, rows)

    m = n + q
    rows3 = []
    for i in range(m + 1, m + extra3 + 1):
        kind = rng.choice((AND, OR, NOT))
        if kind == NOT:
            rows3.append((NOT, rng.randint(1, i - 1)))
        else:
            rows3.append((kind, rng.randint(1, i - 1), rng.randint(1, i - 1)))
    last = m + extra3
    # tie the output to an NEXP answer so the final bit is not x-only
    rows3.append((rng.choice((AND, OR)), last, rng.randint(n + 1, m)))
    level3 = build(m, rows3)
    return ThreeLevelCircuit(level1, q, level3, codec)
