"""Belief-function profiling and aggregation of crowdsourced answers."""

from ._crowdbelief import (
    CrowdBeliefError,
    MassFunction,
    classify_profile,
    combine_conjunctive,
    combine_yager,
    decide,
    discount,
    make_simple_support,
    mean_mass,
    pignistic,
    profile_campaign,
    profile_mass,
    qualification_mass,
    reflection_mass,
    run_cli,
    simulate,
    vacuous,
    vacuous_extend,
)

__all__ = [
    "CrowdBeliefError",
    "MassFunction",
    "classify_profile",
    "combine_conjunctive",
    "combine_yager",
    "decide",
    "discount",
    "make_simple_support",
    "mean_mass",
    "pignistic",
    "profile_campaign",
    "profile_mass",
    "qualification_mass",
    "reflection_mass",
    "run_cli",
    "simulate",
    "vacuous",
    "vacuous_extend",
]
