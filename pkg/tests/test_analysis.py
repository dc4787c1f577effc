from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mrip.analysis import (SweepError, alpha_class, gap_from_scored, interval_index,
                           interval_sweep, min_spacing, report_row, rows_to_csv,
                           sweep_from_scored, sweep_queries, utility_gap)
from mrip.core import OracleTable
from mrip.corpus import tautology, two_clause_example
from mrip.profiles import CommittedOracleProfile
from mrip.protocols import make_fig_scoring, make_fig_simple, scoring_family, simple_family


def fake(c):
    return CommittedOracleProfile(c, OracleTable(1, (0, 0)))


@given(st.fractions(min_value=0, max_value=1), st.integers(1, 64))
def test_interval_index_half_open(u, K):
    i = interval_index(u, K)
    assert 0 <= i < K
    if u < 1:
        assert Fraction(i, K) <= u < Fraction(i + 1, K)
    else:
        assert i == K - 1


def test_interval_index_outside():
    assert interval_index(Fraction(-1, 3), 4) is None


def test_queries_fixed_in_advance():
    assert sweep_queries(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_sweep_decision_and_ambiguity():
    scored = [(fake(1), Fraction(3, 4)), (fake(0), Fraction(1, 2)), (fake(0), Fraction(-1))]
    rep = sweep_from_scored(scored, 8)
    assert rep.decision == 1 and not rep.ambiguous and rep.width_ok
    coarse = sweep_from_scored(scored, 1)
    assert coarse.ambiguous and not coarse.width_ok


def test_sweep_requires_nonnegative_profile():
    with pytest.raises(SweepError):
        sweep_from_scored([(fake(1), Fraction(-1, 2))], 4)


def test_min_spacing():
    assert min_spacing([Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1)]) == Fraction(1, 6)
    assert min_spacing([Fraction(1)]) is None


@pytest.mark.parametrize("gap,size,label", [
    (Fraction(1, 2), 10, "constant"), (Fraction(1, 6), 10, "constant"),
    (Fraction(1, 100), 10, "1/poly"), (Fraction(1, 101), 10, "smaller"), (None, 3, "none")])
def test_alpha_class(gap, size, label):
    assert alpha_class(gap, size) == label


def test_simple_gap_is_constant_on_member():
    inst = tautology()
    rep = utility_gap(make_fig_simple(inst), inst, simple_family(inst), 1)
    assert rep.gap == Fraction(1, 2) and rep.alpha_class == "constant"


def test_scoring_gap_on_satisfiable_closed_form():
    # best wrong profile is c = 0, a = N - 1 with a full oracle: gap 2/(11 N^2)
    inst = tautology(1, 1)
    N = inst.num_w
    rep = utility_gap(make_fig_scoring(inst), inst, scoring_family(inst), 1)
    assert rep.gap == Fraction(2, 11 * N * N)


def test_interval_sweep_matches_best():
    inst = two_clause_example()
    proto = make_fig_scoring(inst)
    fam = scoring_family(inst)
    from mrip.engine import score_family
    spacing = min_spacing(u for _, u in score_family(proto, inst, fam))
    K = int(1 / spacing) + 1
    rep = interval_sweep(proto, inst, fam, K)
    assert rep.width_ok and not rep.ambiguous and rep.decision == 0


def test_csv_output_has_header_comments():
    rep = gap_from_scored([(fake(1), Fraction(1)), (fake(0), Fraction(1, 2))], 1, "id0", "simple")
    text = rows_to_csv([report_row(rep, decision=1)], header="seed 1")
    lines = text.splitlines()
    assert lines[0] == "# seed 1"
    assert lines[1].startswith("instance_id,protocol")
    assert lines[2] == "id0,simple,1/1,1/2,1/2,1,"


def test_scoring_gap_closed_forms_on_trend_corpus():
    from mrip.corpus import gap_trend_corpus
    for entries in gap_trend_corpus().values():
        for e in entries[:3]:
            inst, N = e.instance, e.instance.num_w
            rep = utility_gap(make_fig_scoring(inst), inst, scoring_family(inst), e.member)
            q = Fraction(e.a_star, N)
            expect = Fraction(2, 11 * N * N) if e.member else 2 * q * (1 - q) ** 2 / 11
            assert rep.gap == expect
