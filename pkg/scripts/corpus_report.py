"""Summarize the seeded corpora: membership mix, a* = 0 cases, block rejection rates."""
import argparse
import random
from collections import Counter

from mrip.circuits import BlockCodec, eval_three_level, random_block_instance
from mrip.core import decide_oracle3sat
from mrip.corpus import DEFAULT_SEED, gap_trend_corpus, standard_corpus, three_level_corpus


def block_membership_rate(seed: int, draws: int = 400) -> float:
    rng = random.Random(seed)
    codec = BlockCodec()
    hits = sum(decide_oracle3sat(random_block_instance(rng, codec)).member for _ in range(draws))
    return hits / draws


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args()

    entries = standard_corpus(args.seed)
    levels = Counter((e.instance.r, e.instance.s) for e in entries)
    members = Counter((e.instance.r, e.instance.s) for e in entries if e.member)
    print(f"standard corpus: {len(entries)} instances, seed {args.seed}")
    for key in sorted(levels):
        print(f"  r={key[0]} s={key[1]}: {levels[key]} instances, {members[key]} satisfiable")
    zero = [e.id for e in entries if e.a_star == 0]
    print(f"  a* = 0 instances: {zero or 'none'}")

    for level, items in gap_trend_corpus(args.seed).items():
        print(f"gap-trend level r+3s={level}: {sum(e.member for e in items)}/{len(items)} satisfiable")

    rate = block_membership_rate(args.seed)
    print(f"random block instances: {rate:.2%} members; rejection keeps about "
          f"{rate:.0%} of draws for member slots and {1 - rate:.0%} for non-member slots")
    for e in three_level_corpus(args.seed):
        res = eval_three_level(e.tlc, e.x)
        blocks = [res.values[g] for g in e.tlc.nexp_gates()]
        print(f"  {e.id}: q={e.tlc.q} x={''.join(map(str, e.x))} NEXP={blocks} final={res.final}")


if __name__ == "__main__":
    main()
