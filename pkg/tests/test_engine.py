import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mrip.core import OracleTable
from mrip.corpus import two_clause_example
from mrip.engine import (EnumerationRefused, PartialStrategyError, PaymentRangeError, Protocol,
                         check_mrip, enumerate_best, expected_utility, per_coin_payments,
                         run_protocol, score_family, split_bits)
from mrip.profiles import CommittedOracleProfile, Deviation, TableProfile
from mrip.protocols import make_fig_scoring, make_fig_simple, scoring_family, simple_family


class Guess(Protocol):
    """Toy: P1 says c, the verifier asks P2 for a bit; pays +1 on match with the coin."""
    name = "guess"
    num_provers = 2
    num_rounds = 3

    def __init__(self, scale=1):
        self.scale = scale

    def coin_space(self, x):
        return [(0, Fraction(1, 2)), (1, Fraction(1, 2))]

    def query(self, x, coins, transcripts, rnd):
        return ("", str(coins))

    def payment(self, x, coins, transcripts):
        return Fraction(self.scale) * (1 if transcripts[1][2] == str(coins) else -1)


def echo_profile():
    entries = {(1, 1, ()): "1", (2, 1, ()): ""}
    for b in "01":
        entries[(1, 3, ("1", ""))] = ""
        entries[(2, 3, ("", b))] = b
    return TableProfile(entries, "echo")


def test_toy_protocol_utility():
    assert expected_utility(Guess(), None, echo_profile(), mode="raw") == 1
    stubborn = Deviation(echo_profile(), {(2, 3, ("", "1")): "0"}, "stubborn")
    assert expected_utility(Guess(), None, stubborn, mode="raw") == 0


def test_partial_strategy_raises():
    prof = TableProfile({(1, 1, ()): "1"})
    with pytest.raises(PartialStrategyError) as info:
        run_protocol(Guess(), None, 0, prof)
    # P2 is first addressed in round 3
    assert info.value.prover == 2 and info.value.round == 3


def test_payment_range_enforced():
    with pytest.raises(PaymentRangeError):
        run_protocol(Guess(scale=2), None, 0, echo_profile())


def test_rows_padded_to_round_count():
    out = run_protocol(make_fig_simple(two_clause_example()), two_clause_example(), None,
                       CommittedOracleProfile(0, OracleTable(1, (0, 0))))
    assert all(len(row) == 3 for row in out.transcript)
    assert out.payment == Fraction(1, 2) and out.c == 0


def test_run_is_deterministic():
    inst = two_clause_example()
    proto = make_fig_scoring(inst)
    prof = scoring_family(inst)[40]
    coins = list(proto.coin_space(inst))[17][0]
    assert run_protocol(proto, inst, coins, prof) == run_protocol(proto, inst, coins, prof)


@given(st.integers(0, 2 ** 31))
def test_order_independence(seed):
    inst = two_clause_example()
    proto = make_fig_scoring(inst)
    family = scoring_family(inst)[::7]
    shuffled = list(family)
    random.Random(seed).shuffle(shuffled)
    a = enumerate_best(proto, inst, family)
    b = enumerate_best(proto, inst, shuffled)
    assert a.max_utility == b.max_utility
    assert [m.key() for m in a.maximizers] == [m.key() for m in b.maximizers]


def test_grouped_equals_raw_scoring():
    inst = two_clause_example()
    proto = make_fig_scoring(inst)
    fam = scoring_family(inst, counts=[7, 16], cross=True)[::3]
    for prof in fam:
        assert expected_utility(proto, inst, prof, "grouped") == expected_utility(proto, inst, prof, "raw")


def test_grouped_equals_raw_simple():
    inst = two_clause_example()
    proto = make_fig_simple(inst)
    for prof in simple_family(inst, cross=True):
        assert expected_utility(proto, inst, prof, "grouped") == expected_utility(proto, inst, prof, "raw")


def test_per_coin_weights_sum_to_one():
    inst = two_clause_example()
    rows = per_coin_payments(make_fig_scoring(inst), inst, scoring_family(inst)[5])
    assert sum(w for _, w, _ in rows) == 1


def test_cap_refusal(monkeypatch):
    inst = two_clause_example()
    proto = make_fig_scoring(inst)
    with pytest.raises(EnumerationRefused):
        expected_utility(proto, inst, scoring_family(inst)[0], mode="raw", cap=100)
    monkeypatch.setenv("MRIP_MAX_ENUM", "10")
    with pytest.raises(EnumerationRefused):
        score_family(proto, inst, scoring_family(inst))


def test_grouped_mode_refuses_unsupported():
    with pytest.raises(ValueError):
        expected_utility(Guess(), None, echo_profile(), mode="grouped")


def test_check_mrip_reports_conditions():
    check = check_mrip(Guess(), None, [echo_profile()], ground_truth=0)
    assert check.cond1 and not check.cond2


def test_split_bits():
    assert split_bits("0110", 2) == [1, 2]
    assert split_bits("011", 2) is None
