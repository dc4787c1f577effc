"""Concrete strategy-profile representations shared by several protocols."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .core import OracleTable
from .engine import PartialStrategyError, StrategyProfile, int_bits, split_bits

Key = tuple[int, int, tuple[str, ...]]


class TableProfile(StrategyProfile):
    """Explicit function table (prover, round, transcript) -> message."""

    def __init__(self, entries: Mapping[Key, str], name: str = "table"):
        self.entries = dict(entries)
        self.name = name

    def respond(self, prover, rnd, transcript):
        try:
            return self.entries[(prover, rnd, tuple(transcript))]
        except KeyError:
            raise PartialStrategyError(prover, rnd, tuple(transcript)) from None

    def descriptor(self):
        return {"kind": "table", "name": self.name, "entries": len(self.entries)}


class Deviation(StrategyProfile):
    """A base profile with finitely many (prover, round, transcript) entries overridden."""

    def __init__(self, base: StrategyProfile, overrides: Mapping[Key, str], label: str = ""):
        self.base = base
        self.overrides = dict(overrides)
        self.label = label

    def respond(self, prover, rnd, transcript):
        key = (prover, rnd, tuple(transcript))
        if key in self.overrides:
            return self.overrides[key]
        return self.base.respond(prover, rnd, transcript)

    def descriptor(self):
        return {"kind": "deviation", "base": self.base.descriptor(), "label": self.label,
                "overrides": sorted([p, r, list(t), m] for (p, r, t), m in self.overrides.items())}


@dataclass(frozen=True, eq=False)
class CommittedOracleProfile(StrategyProfile):
    """Prover 1 opens with c (and a, when ``a_width`` > 0); afterwards every
    prover answers each s-bit query point from a fixed oracle table.

    ``p2_oracle`` lets prover 2 commit to a different table than prover 1.
    """

    c: int
    oracle: OracleTable
    a: int = 0
    a_width: int = 0
    p2_oracle: OracleTable | None = None

    def opening(self) -> str:
        return str(self.c) + int_bits(self.a, self.a_width)

    def table_for(self, prover: int) -> OracleTable:
        if prover != 1 and self.p2_oracle is not None:
            return self.p2_oracle
        return self.oracle

    @property
    def consistent(self) -> bool:
        return self.p2_oracle is None or self.p2_oracle == self.oracle

    def respond(self, prover, rnd, transcript):
        if rnd == 1:
            return self.opening() if prover == 1 else ""
        points = split_bits(transcript[-1], self.oracle.width) if transcript else None
        if not points:
            return ""
        table = self.table_for(prover)
        return "".join(str(table(b)) for b in points)

    def descriptor(self):
        out = {"kind": "committed-oracle", "c": self.c, "oracle": self.oracle.bits()}
        if self.a_width:
            out["a"], out["a_width"] = self.a, self.a_width
        if not self.consistent:
            out["p2_oracle"] = self.p2_oracle.bits()
        return out
