"""Command line: generate instances, verify MRIP conditions, sweep, gap, run."""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .analysis import (CSV_FIELDS, SweepError, gap_from_scored, report_row, rows_to_csv,
                       sweep_from_scored)
from .circuits import (Circuit, DcOracle, ThreeLevelCircuit, eval_circuit, eval_three_level,
                       random_circuit, random_three_level)
from .core import (DEFAULT_BOUNDS, InstanceFormatError, InstanceTooLarge, OracleTable,
                   decide_oracle3sat, dumps_instance, fmt_rational, load_instance)
from .corpus import DEFAULT_SEED, random_instance, standard_corpus, three_level_corpus
from .engine import EnumerationRefused, best_of, check_from_best, run_protocol, score_family
from .profiles import CommittedOracleProfile, Deviation
from .protocols import (GateOracleProfile, HonestLift, LyingLift, NegatedPayment, complement_wrap, gate_oracle_family,
                        honest_gate_profile, honest_scoring_profile, honest_simple_profile,
                        honest_three_level_profile, make_fig_expmrip, make_fig_expnexp,
                        make_fig_scoring, make_fig_simple, make_mip, scoring_family,
                        simple_family, three_level_family, two_five_wrap)

PROTOCOLS = ("simple", "scoring", "expmrip", "expnexp")
WRAPS = ("complement", "two-five", "negate")
VERIFY_FIELDS = CSV_FIELDS[:5] + ["max_utility", "cond1", "cond2", "maximizer_bits"]


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    protocol: str = "scoring"
    inputs: list[str] = field(default_factory=list)
    corpus: str | None = None
    family: str = "default"
    mip: str = "A"
    wrap: list[str] = field(default_factory=list)
    seed: int = DEFAULT_SEED
    intervals: int | None = None
    x: str | None = None
    out: str | None = None
    format: str = "csv"

    def header(self) -> dict:
        return {"mrip_version": __version__, "config": asdict(self)}


# -- loading cases -------------------------------------------------------------------

@dataclass
class Case:
    id: str
    protocol: object
    x: object
    family: list
    truth: int
    size: int


def _x_bits(text: str | None, n: int, where: str) -> tuple[int, ...]:
    if text is None:
        raise UsageError(f"{where}: no input x given (use --x or an embedded \"x\")")
    if len(text) != n or set(text) - {"0", "1"}:
        raise UsageError(f"{where}: x must be {n} bits, got {text!r}")
    return tuple(int(ch) for ch in text)


def _deviation_family(protocol, x, honest, count: int, rng: random.Random) -> list:
    """Honest plus ``count`` single-entry deviations at reachable transcripts."""
    coins = [c for c, _ in protocol.coin_space(x)]
    family = [honest]
    for k in range(count):
        coin = rng.choice(coins)
        out = run_protocol(protocol, x, coin, honest)
        slots = [(i + 1, j + 1) for i, row in enumerate(out.transcript)
                 for j in range(0, len(row), 2) if row[j]]
        prover, rnd = rng.choice(slots)
        row = out.transcript[prover - 1]
        msg = row[rnd - 1]
        flipped = ("1" if msg[0] == "0" else "0") + msg[1:]
        family.append(Deviation(honest, {(prover, rnd, tuple(row[:rnd - 1])): flipped},
                                label=f"dev{k}"))
    return family


def _family_from_file(path: str, circuit=None) -> list:
    data = json.loads(Path(path).read_text())
    out = []
    for item in data:
        kind = item.get("kind")
        if kind == "committed-oracle":
            bits = item["oracle"]
            width = (len(bits) - 1).bit_length()
            p2 = item.get("p2_oracle")
            a_width = int(item.get("a_width", 0))
            out.append(CommittedOracleProfile(
                int(item["c"]), OracleTable.from_bits(width, bits), int(item.get("a", 0)),
                a_width, OracleTable.from_bits(width, p2) if p2 else None))
        elif kind == "gate-oracle" and circuit is not None:
            values = {i + 1: int(ch) for i, ch in enumerate(item["gate_values"])}
            out.append(GateOracleProfile(circuit, int(item["c"]), values))
        else:
            raise UsageError(f"{path}: unsupported profile kind {kind!r}")
    return out


def _base_case(cfg: ExperimentConfig, cid: str, obj, x_text: str | None, rng: random.Random) -> Case:
    proto = cfg.protocol
    fam = cfg.family
    if proto in ("simple", "scoring"):
        inst = obj
        d = decide_oracle3sat(inst)
        if proto == "simple":
            protocol = make_fig_simple(inst, make_mip(cfg.mip))
            honest = honest_simple_profile(inst)
            default = simple_family(inst)
            cross = simple_family(inst, cross=True)
        else:
            protocol = make_fig_scoring(inst)
            honest = honest_scoring_profile(inst)
            default = scoring_family(inst)
            cross = scoring_family(inst, cross=True) if inst.s == 1 else default
        size = sum(inst.size())
        if fam in ("default", "committed-oracle"):
            family = default
        elif fam == "committed-oracle+cross":
            family = cross
        elif fam.startswith("deviations"):
            family = _deviation_family(protocol, inst, honest, _dev_count(fam), rng)
        elif fam.startswith("file:"):
            family = _family_from_file(fam[5:])
        else:
            raise UsageError(f"family {fam!r} does not apply to {proto}")
        return Case(cid, protocol, inst, family, d.member, size)
    if proto == "expmrip":
        circuit = obj
        x = _x_bits(x_text, circuit.n, cid)
        protocol = make_fig_expmrip(DcOracle(circuit), x)
        truth = eval_circuit(circuit, x)[circuit.g]
        if fam in ("default", "gate-oracle"):
            if circuit.g > 16:
                raise UsageError(f"{cid}: g = {circuit.g} is too large for the full gate-oracle family")
            family = gate_oracle_family(circuit)
        elif fam.startswith("deviations"):
            family = _deviation_family(protocol, x, honest_gate_profile(circuit, x),
                                       _dev_count(fam), rng)
        elif fam.startswith("file:"):
            family = _family_from_file(fam[5:], circuit)
        else:
            raise UsageError(f"family {fam!r} does not apply to expmrip")
        return Case(cid, protocol, x, family, truth, circuit.g)
    if proto == "expnexp":
        tlc = obj
        x = _x_bits(x_text, tlc.n, cid)
        protocol = make_fig_expnexp(tlc, x, make_mip(cfg.mip))
        truth = eval_three_level(tlc, x).final
        if fam in ("default", "gate-oracle", "three-level"):
            family = three_level_family(tlc, x)
        elif fam.startswith("deviations"):
            family = _deviation_family(protocol, x, honest_three_level_profile(tlc, x),
                                       _dev_count(fam), rng)
        else:
            raise UsageError(f"family {fam!r} does not apply to expnexp")
        return Case(cid, protocol, x, family, truth, tlc.size)
    raise UsageError(f"unknown protocol {proto!r}")


def _dev_count(text: str) -> int:
    _, _, count = text.partition("=")
    try:
        return int(count)
    except ValueError:
        raise UsageError(f"expected deviations n=K, got {text!r}") from None


def _apply_wraps(cfg: ExperimentConfig, case: Case) -> Case:
    for wrap in cfg.wrap:
        if wrap == "complement":
            case = Case(case.id, complement_wrap(case.protocol), case.x, case.family,
                        1 - case.truth, case.size)
        elif wrap == "negate":
            case = Case(case.id, NegatedPayment(case.protocol), case.x, case.family,
                        case.truth, case.size)
        elif wrap == "two-five":
            w = two_five_wrap(case.protocol)
            family = [HonestLift(w, prof) for prof in case.family]
            best_base = best_of(score_family(case.protocol, case.x, case.family)).maximizers[0]
            family += [LyingLift(w, best_base, lies=frozenset({(1, 1)})),
                       LyingLift(w, best_base, lies=frozenset({(1, 3)}))]
            case = Case(case.id, w, case.x, family, case.truth, case.size)
        else:
            raise UsageError(f"unknown wrap {wrap!r}")
    return case


def load_cases(cfg: ExperimentConfig) -> list[Case]:
    rng = random.Random(cfg.seed)
    raw: list[tuple[str, object, str | None]] = []
    if cfg.corpus:
        if cfg.corpus != "standard":
            raise UsageError(f"unknown corpus {cfg.corpus!r}")
        if cfg.protocol in ("simple", "scoring"):
            raw += [(e.id, e.instance, None) for e in standard_corpus(cfg.seed)]
        elif cfg.protocol == "expnexp":
            raw += [(e.id, e.tlc, "".join(map(str, e.x))) for e in three_level_corpus(cfg.seed)]
        else:
            raise UsageError("the standard corpus holds Oracle-3SAT instances and three-level circuits")
    for path in cfg.inputs:
        raw.append(_load_input(cfg, path))
    if not raw:
        raise UsageError("no inputs: pass files or --corpus standard")
    cases = [_apply_wraps(cfg, _base_case(cfg, cid, obj, xt, rng)) for cid, obj, xt in raw]
    return sorted(cases, key=lambda c: c.id)


def _load_input(cfg: ExperimentConfig, path: str):
    cid = Path(path).stem
    if cfg.protocol in ("simple", "scoring"):
        return cid, load_instance(path), None
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(exc.msg, path, exc.lineno) from None
    x_text = cfg.x if cfg.x is not None else data.get("x")
    if cfg.protocol == "expmrip":
        return cid, Circuit.from_json(data), x_text
    return cid, ThreeLevelCircuit.from_json(data), x_text


# -- commands ---------------------------------------------------------------------------

def _emit(cfg: ExperimentConfig, rows: list[dict], fields: Sequence[str], extra: dict | None = None):
    header = cfg.header()
    if cfg.format == "json":
        payload = dict(header)
        payload["rows"] = rows
        if extra:
            payload.update(extra)
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = rows_to_csv(rows, fields, json.dumps(header, sort_keys=True))
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(cfg: ExperimentConfig) -> int:
    rows, failures = [], 0
    for case in load_cases(cfg):
        scored = score_family(case.protocol, case.x, case.family)
        check = check_from_best(best_of(scored), case.truth)
        gap = gap_from_scored(scored, case.truth, case.id, case.protocol.name, case.size)
        row = gap.row()
        row.update(check.to_json())
        row["max_utility"] = fmt_rational(check.max_utility)
        row["maximizer_bits"] = "".join(sorted({str(m.output_bit) for m in check.maximizers}))
        if cfg.format == "csv":
            row["cond1"], row["cond2"] = str(check.cond1).lower(), str(check.cond2).lower()
            row.pop("maximizers")
        failures += not check.passed
        rows.append(row)
    _emit(cfg, rows, VERIFY_FIELDS, {"failures": failures})
    return 1 if failures else 0


def cmd_gap(cfg: ExperimentConfig) -> int:
    rows = []
    for case in load_cases(cfg):
        scored = score_family(case.protocol, case.x, case.family)
        gap = gap_from_scored(scored, case.truth, case.id, case.protocol.name, case.size)
        row = gap.row()
        row["alpha_class"] = gap.alpha_class
        rows.append(row)
    _emit(cfg, rows, CSV_FIELDS[:5] + ["alpha_class"])
    return 0


def cmd_sweep(cfg: ExperimentConfig) -> int:
    if not cfg.intervals or cfg.intervals < 1:
        raise UsageError("sweep needs --intervals K with K >= 1")
    rows, status = [], 0
    for case in load_cases(cfg):
        scored = score_family(case.protocol, case.x, case.family)
        gap = gap_from_scored(scored, case.truth, case.id, case.protocol.name, case.size)
        try:
            sweep = sweep_from_scored(scored, cfg.intervals)
        except SweepError as exc:
            row = gap.row()
            row.update(decision=f"error: {exc}", intervals=str(cfg.intervals))
            rows.append(row)
            status = 1
            continue
        row = report_row(gap, sweep)
        row["agrees"] = str(sweep.decision == best_of(scored).maximizers[0].output_bit).lower()
        row["width_ok"] = str(sweep.width_ok).lower()
        status |= sweep.ambiguous
        rows.append(row)
    _emit(cfg, rows, CSV_FIELDS + ["agrees", "width_ok"])
    return status


def cmd_run(cfg: ExperimentConfig, coins_text: str, profile: str) -> int:
    cases = load_cases(cfg)
    if len(cases) != 1:
        raise UsageError("run takes exactly one input")
    case = cases[0]
    coins = _as_tuple(json.loads(coins_text))
    if profile == "honest":
        chosen = best_of(score_family(case.protocol, case.x, case.family)).maximizers[0]
    else:
        matches = [p for p in case.family if p.key() == json.dumps(json.loads(profile), sort_keys=True)]
        if not matches:
            raise UsageError("profile descriptor not found in the family")
        chosen = matches[0]
    out = run_protocol(case.protocol, case.x, coins, chosen)
    result = {"coins": coins_text, "profile": chosen.descriptor(),
              "transcript": [list(row) for row in out.transcript],
              "payment": fmt_rational(out.payment), "c": out.c, "flags": list(out.flags)}
    text = json.dumps(dict(cfg.header(), run=result), indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _as_tuple(value):
    if isinstance(value, list):
        return tuple(_as_tuple(v) for v in value)
    return value


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    if args.kind == "instance":
        if args.s > DEFAULT_BOUNDS.max_s:
            raise UsageError(f"s = {args.s} exceeds the desk bound s <= {DEFAULT_BOUNDS.max_s}")
        text = dumps_instance(random_instance(rng, args.r, args.s, args.clauses))
    elif args.kind == "circuit":
        circuit = random_circuit(rng, args.n, args.g)
        data = circuit.to_json()
        if args.x is not None:
            data["x"] = "".join(map(str, _x_bits(args.x, circuit.n, "gen")))
        text = json.dumps(data, indent=1) + "\n"
    else:
        if args.q > 4:
            raise UsageError("q <= 4 NEXP gates at desk scale")
        tlc = random_three_level(rng, n=args.n, q=args.q)
        x = _x_bits(args.x, tlc.n, "gen") if args.x is not None else tuple(
            rng.randint(0, 1) for _ in range(tlc.n))
        text = json.dumps(tlc.to_json(x), indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrip", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a seeded instance, circuit or three-level circuit")
    gen.add_argument("kind", choices=("instance", "circuit", "three-level"))
    gen.add_argument("--r", type=int, default=1)
    gen.add_argument("--s", type=int, default=1)
    gen.add_argument("--clauses", type=int, default=3)
    gen.add_argument("--n", type=int, default=2)
    gen.add_argument("--g", type=int, default=6)
    gen.add_argument("--q", type=int, default=2)
    gen.add_argument("--x", default=None, help="input bits to embed")
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--out")

    for name, text in (("verify", "check both MRIP conditions per input"),
                       ("gap", "measure utility gaps"),
                       ("sweep", "payment-interval sweep"),
                       ("run", "one execution with explicit coins")):
        p = sub.add_parser(name, help=text)
        p.add_argument("inputs", nargs="*", help="instance / circuit JSON files")
        p.add_argument("--protocol", choices=PROTOCOLS, default="scoring")
        p.add_argument("--corpus", choices=("standard",))
        p.add_argument("--family", default="default",
                       help="committed-oracle | committed-oracle+cross | gate-oracle | "
                            "three-level | deviations n=K | file:PATH")
        p.add_argument("--mip", default="A", choices=("A", "B"))
        p.add_argument("--wrap", action="append", default=[], choices=WRAPS)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--intervals", type=int)
        p.add_argument("--x", help="input bits for circuit protocols")
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "run":
            p.add_argument("--coins", required=True, help="JSON coin outcome, e.g. [3, 5, 1]")
            p.add_argument("--profile", default="honest",
                           help="'honest' (first maximizer) or a JSON profile descriptor")
    return parser


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(protocol=args.protocol, inputs=list(args.inputs), corpus=args.corpus,
                            family=args.family, mip=args.mip, wrap=list(args.wrap), seed=args.seed,
                            intervals=args.intervals, x=args.x, out=args.out, format=args.format)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return cmd_gen(args)
        cfg = _config(args)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "gap":
            return cmd_gap(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        return cmd_run(cfg, args.coins, args.profile)
    except UsageError as exc:
        parser.error(str(exc))
    except (InstanceFormatError, InstanceTooLarge) as exc:
        print(f"mrip: {exc}", file=sys.stderr)
        return 2
    except EnumerationRefused as exc:
        print(f"mrip: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"mrip: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
