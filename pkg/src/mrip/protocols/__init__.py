"""Concrete protocol constructions and their strategy families."""
from .brier import FigScoring, honest_scoring_profile, make_fig_scoring, scoring_family
from .expmrip import (FigExpMrip, GateOracleProfile, gate_oracle_family, honest_gate_profile,
                      make_fig_expmrip)
from .expnexp import (FigExpNexp, ThreeLevelProfile, honest_three_level_profile,
                      make_fig_expnexp, three_level_family)
from .mip import ExhaustiveMip, MipSubroutine, SampledMip, default_repetitions, make_mip
from .simple import FigSimple, honest_simple_profile, make_fig_simple, simple_family
from .wrappers import (ComplementProfile, ComplementWrap, HonestLift, LyingLift, NegatedPayment,
                       TwoFiveWrap, complement_of, complement_wrap, two_five_wrap)

__all__ = [
    "FigScoring", "honest_scoring_profile", "make_fig_scoring", "scoring_family",
    "FigExpMrip", "GateOracleProfile", "gate_oracle_family", "honest_gate_profile",
    "make_fig_expmrip",
    "FigExpNexp", "ThreeLevelProfile", "honest_three_level_profile", "make_fig_expnexp",
    "three_level_family",
    "ExhaustiveMip", "MipSubroutine", "SampledMip", "default_repetitions", "make_mip",
    "FigSimple", "honest_simple_profile", "make_fig_simple", "simple_family",
    "ComplementProfile", "ComplementWrap", "HonestLift", "LyingLift", "NegatedPayment",
    "TwoFiveWrap", "complement_of", "complement_wrap", "two_five_wrap",
]
