"""Oracle-3SAT instances, exact rationals and brute-force deciders.

Variables of an instance are numbered 1..r+3s+3.  The first r+3s of them form
the assignment ``w = (z, b1, b2, b3)``; the last three stand for the oracle
answers ``A(b1), A(b2), A(b3)``.  Literals are DIMACS-style signed integers.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterator, Sequence

Rational = Fraction


def fmt_rational(value: Fraction) -> str:
    """Render as ``"num/den"``, also for integers (``"1/1"``)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep:
        raise ValueError(f"expected 'num/den', got {text!r}")
    return Fraction(int(num), int(den))


@dataclass(frozen=True)
class DeskBounds:
    """Feasibility caps.  These are policy, not part of the problem."""

    max_w_bits: int = 6  # r + 3s
    max_s: int = 4


DEFAULT_BOUNDS = DeskBounds()


class InstanceTooLarge(ValueError):
    pass


class InstanceFormatError(ValueError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = f"{path or '<string>'}:{line}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Oracle3SatInstance:
    r: int
    s: int
    clauses: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.r < 0 or self.s < 1:
            raise ValueError(f"need r >= 0 and s >= 1, got r={self.r}, s={self.s}")
        top = self.num_vars
        for k, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise ValueError(f"clause {k} has {len(clause)} literals, expected 3")
            for lit in clause:
                if not 1 <= abs(lit) <= top:
                    raise ValueError(f"clause {k}: literal {lit} outside 1..{top}")

    @property
    def w_bits(self) -> int:
        return self.r + 3 * self.s

    @property
    def num_vars(self) -> int:
        return self.r + 3 * self.s + 3

    @property
    def num_w(self) -> int:
        return 1 << self.w_bits

    def size(self) -> tuple[int, int]:
        """(variable count, clause count)."""
        return self.num_vars, len(self.clauses)

    def check_bounds(self, bounds: DeskBounds = DEFAULT_BOUNDS) -> None:
        if self.w_bits > bounds.max_w_bits:
            raise InstanceTooLarge(
                f"r+3s = {self.w_bits} exceeds desk bound {bounds.max_w_bits}")
        if self.s > bounds.max_s:
            raise InstanceTooLarge(f"s = {self.s} exceeds desk bound {bounds.max_s}")

    def to_json(self) -> dict:
        return {"r": self.r, "s": self.s, "clauses": [list(c) for c in self.clauses]}

    @classmethod
    def from_json(cls, data: dict) -> "Oracle3SatInstance":
        return cls(int(data["r"]), int(data["s"]), tuple(tuple(c) for c in data["clauses"]))


@dataclass(frozen=True)
class OracleTable:
    """Truth table of A: {0,1}^s -> {0,1}; entry b is A(b), b read MSB first."""

    width: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != 1 << self.width:
            raise ValueError(f"table length {len(self.table)} != 2^{self.width}")
        if any(v not in (0, 1) for v in self.table):
            raise ValueError("oracle table entries must be bits")

    def __call__(self, b: int) -> int:
        return self.table[b]

    @classmethod
    def from_index(cls, width: int, index: int) -> "OracleTable":
        """The index-th table in lexicographic order (entry 0 is the top bit)."""
        size = 1 << width
        return cls(width, tuple((index >> (size - 1 - b)) & 1 for b in range(size)))

    @classmethod
    def from_bits(cls, width: int, bits: str) -> "OracleTable":
        return cls(width, tuple(int(ch) for ch in bits))

    def bits(self) -> str:
        return "".join(map(str, self.table))


def all_oracles(width: int) -> Iterator[OracleTable]:
    for index in range(1 << (1 << width)):
        yield OracleTable.from_index(width, index)


@dataclass(frozen=True)
class WAssignment:
    z: tuple[int, ...]
    b1: tuple[int, ...]
    b2: tuple[int, ...]
    b3: tuple[int, ...]

    @property
    def bits(self) -> tuple[int, ...]:
        return self.z + self.b1 + self.b2 + self.b3

    @classmethod
    def from_int(cls, r: int, s: int, value: int) -> "WAssignment":
        n = r + 3 * s
        bits = tuple((value >> (n - 1 - k)) & 1 for k in range(n))
        return cls(bits[:r], bits[r:r + s], bits[r + s:r + 2 * s], bits[r + 2 * s:])

    def points(self) -> tuple[int, int, int]:
        """The three oracle query points as integers."""
        return bits_to_int(self.b1), bits_to_int(self.b2), bits_to_int(self.b3)


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for bit in bits:
        value = (value << 1) | bit
    return value


def _satisfied(clauses, values) -> int:
    # values is indexed by variable number; values[0] is unused
    for clause in clauses:
        for lit in clause:
            if (values[lit] if lit > 0 else 1 - values[-lit]):
                break
        else:
            return 0
    return 1


def eval_cnf(instance: Oracle3SatInstance, w: WAssignment, answers: Sequence[int]) -> int:
    """1 iff every clause has a true literal under (w, answers)."""
    values = (0,) + w.bits + tuple(answers)
    return _satisfied(instance.clauses, values)


def satisfying_mask(instance: Oracle3SatInstance, oracle: OracleTable) -> tuple[int, ...]:
    """Per-w satisfaction bits, w enumerated as integers 0..2^{r+3s}-1."""
    if oracle.width != instance.s:
        raise ValueError(f"oracle width {oracle.width} != s = {instance.s}")
    r, s, clauses = instance.r, instance.s, instance.clauses
    out = []
    for value in range(instance.num_w):
        w = WAssignment.from_int(r, s, value)
        b1, b2, b3 = w.points()
        out.append(_satisfied(clauses, (0,) + w.bits + (oracle(b1), oracle(b2), oracle(b3))))
    return tuple(out)


def count_satisfying(instance: Oracle3SatInstance, oracle: OracleTable) -> int:
    return sum(satisfying_mask(instance, oracle))


@dataclass(frozen=True)
class Decision:
    member: int
    a_star: int
    witness: OracleTable


def decide_oracle3sat(instance: Oracle3SatInstance,
                      bounds: DeskBounds = DEFAULT_BOUNDS) -> Decision:
    """Exhaustive search over all 2^{2^s} oracles.

    Ties on the maximal count go to the lexicographically smallest table.
    """
    if instance.s > bounds.max_s:
        raise InstanceTooLarge(f"instance too large for exact decision: s = {instance.s}")
    best, witness = -1, None
    for oracle in all_oracles(instance.s):
        count = count_satisfying(instance, oracle)
        if count > best:
            best, witness = count, oracle
            if best == instance.num_w:
                break
    return Decision(int(best == instance.num_w), best, witness)


# -- instance files ---------------------------------------------------------

_TRIPLE = re.compile(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def loads_instance(text: str, path: str | None = None,
                   bounds: DeskBounds | None = DEFAULT_BOUNDS) -> Oracle3SatInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(exc.msg, path, exc.lineno) from None
    if not isinstance(data, dict) or not {"r", "s", "clauses"} <= data.keys():
        raise InstanceFormatError("expected an object with keys r, s, clauses", path, 1)
    r, s, clauses = data["r"], data["s"], data["clauses"]
    if not (isinstance(r, int) and isinstance(s, int) and r >= 0 and s >= 1):
        raise InstanceFormatError(f"bad r/s: r={r!r}, s={s!r}", path, 1)
    top = r + 3 * s + 3
    start = text.find('"clauses"')
    matches = list(_TRIPLE.finditer(text, max(start, 0)))
    for k, clause in enumerate(clauses):
        line = _line_of(text, matches[k].start()) if k < len(matches) else None
        if not (isinstance(clause, list) and len(clause) == 3
                and all(isinstance(v, int) for v in clause)):
            raise InstanceFormatError(f"clause {k} is not a triple of integers", path, line)
        for lit in clause:
            if not 1 <= abs(lit) <= top:
                raise InstanceFormatError(
                    f"clause {k}: literal {lit} outside 1..{top}", path, line)
    instance = Oracle3SatInstance(r, s, tuple(tuple(c) for c in clauses))
    if bounds is not None:
        try:
            instance.check_bounds(bounds)
        except InstanceTooLarge as exc:
            raise InstanceFormatError(str(exc), path, 1) from None
    return instance


def load_instance(path: str | Path, bounds: DeskBounds | None = DEFAULT_BOUNDS) -> Oracle3SatInstance:
    path = Path(path)
    return loads_instance(path.read_text(), str(path), bounds)


def dumps_instance(instance: Oracle3SatInstance) -> str:
    """One clause per line so parse errors point at the offending clause."""
    body = ",\n    ".join(json.dumps(list(c)) for c in instance.clauses)
    clauses = f"[\n    {body}\n  ]" if instance.clauses else "[]"
    return f'{{\n  "r": {instance.r},\n  "s": {instance.s},\n  "clauses": {clauses}\n}}\n'


def all_assignments(instance: Oracle3SatInstance) -> Iterator[WAssignment]:
    for bits in product((0, 1), repeat=instance.w_bits):
        yield WAssignment.from_int(instance.r, instance.s, bits_to_int(bits))
