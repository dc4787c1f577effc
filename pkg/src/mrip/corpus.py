"""Seeded instance corpora and the small named instances used throughout."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .circuits import (BlockCodec, ThreeLevelCircuit, random_block_instance, random_three_level)
from .core import DEFAULT_BOUNDS, DeskBounds, InstanceTooLarge, Oracle3SatInstance, decide_oracle3sat

DEFAULT_SEED = 20170612

# (r, s, how many) per level of the standard corpus
STANDARD_LEVELS = ((0, 1, 16), (1, 1, 16), (2, 1, 14), (0, 2, 8))


def random_instance(rng: random.Random, r: int, s: int, clauses: int,
                    bounds: DeskBounds = DEFAULT_BOUNDS) -> Oracle3SatInstance:
    if s > bounds.max_s:
        raise InstanceTooLarge(f"s = {s} exceeds desk bound {bounds.max_s}")
    top = r + 3 * s + 3
    inst = Oracle3SatInstance(r, s, tuple(
        tuple(rng.choice((1, -1)) * rng.randint(1, top) for _ in range(3))
        for _ in range(clauses)))
    inst.check_bounds(bounds)
    return inst


def tautology(r: int = 1, s: int = 1) -> Oracle3SatInstance:
    return Oracle3SatInstance(r, s, ())


def contradiction(r: int = 1, s: int = 1) -> Oracle3SatInstance:
    """(v1) and (not v1), each padded to three literals."""
    return Oracle3SatInstance(r, s, ((1, 1, 1), (-1, -1, -1)))


def two_clause_example() -> Oracle3SatInstance:
    """r = 1, s = 1: (z or A(b1) or not b2) and (not z or not A(b3) or b1)."""
    return Oracle3SatInstance(1, 1, ((1, 5, -3), (-1, -7, 2)))


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    instance: Oracle3SatInstance
    member: int
    a_star: int


def standard_corpus(seed: int = DEFAULT_SEED, levels=STANDARD_LEVELS,
                    max_clauses: int = 5) -> list[CorpusEntry]:
    """Random instances, clause count uniform in 1..max_clauses.  Nothing is
    rejected: membership comes out mixed on its own and is recorded."""
    rng = random.Random(seed)
    out = []
    for r, s, count in levels:
        for k in range(count):
            inst = random_instance(rng, r, s, rng.randint(1, max_clauses))
            d = decide_oracle3sat(inst)
            out.append(CorpusEntry(f"r{r}s{s}-{k:02d}", inst, d.member, d.a_star))
    return out


def gap_trend_corpus(seed: int = DEFAULT_SEED, per_level: int = 6,
                     max_clauses: int = 5) -> dict[int, list[CorpusEntry]]:
    """Instances with s = 1 and r = 0, 1, 2, keyed by r + 3s (3, 4, 5)."""
    rng = random.Random(seed + 1)
    out: dict[int, list[CorpusEntry]] = {}
    for r in (0, 1, 2):
        entries = []
        for k in range(per_level):
            inst = random_instance(rng, r, 1, rng.randint(1, max_clauses))
            d = decide_oracle3sat(inst)
            entries.append(CorpusEntry(f"trend-r{r}-{k:02d}", inst, d.member, d.a_star))
        out[r + 3] = entries
    return out


@dataclass(frozen=True)
class ThreeLevelEntry:
    id: str
    tlc: ThreeLevelCircuit
    x: tuple[int, ...]


def _block_with(rng: random.Random, codec: BlockCodec, member: int) -> Oracle3SatInstance:
    # explicit rejection on membership; the rates are reported by scripts/corpus_report.py
    while True:
        inst = random_block_instance(rng, codec)
        if decide_oracle3sat(inst).member == member:
            return inst


def three_level_corpus(seed: int = DEFAULT_SEED, count: int = 6) -> list[ThreeLevelEntry]:
    """Three-level circuits with q <= 2; block pairs alternate between
    (member, non-member) patterns so both NEXP payments show up."""
    rng = random.Random(seed + 2)
    codec = BlockCodec()
    patterns = [(1, 0), (0, 1), (0, 0), (1, 1), (1,), (0,)]
    out = []
    for k in range(count):
        pattern = patterns[k % len(patterns)]
        blocks = [_block_with(rng, codec, m) for m in pattern]
        tlc = random_three_level(rng, n=2, q=len(pattern), codec=codec, blocks=blocks)
        x = (rng.randint(0, 1), rng.randint(0, 1))
        out.append(ThreeLevelEntry(f"tl-{k:02d}", tlc, x))
    return out
