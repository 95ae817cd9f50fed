"""Assertion-based risk-limiting audits for party-list elections.

Reported outcomes of Hamiltonian (largest remainder) free-list contests and
highest-averages contests are reduced to sets of linear assertions, each
compiled into an assorter and tested with a Kaplan-Kolmogorov ballot-polling
audit.
"""

from .assertions import (
    AssertionSet,
    LinearAssertion,
    dhondt_assertions,
    hamilton_abr_assertions,
    hamilton_all_seats_assertions,
    pairwise_assertion,
    pairwise_diff_assertion,
    plurality_assertions,
    supermajority_assertion,
    within_party_assertions,
)
from .assorters import (
    Assorter,
    VoteBounds,
    aggregate_mean,
    assorter_mean_margin,
    assorterize,
    dhondt_assorter,
    proto_lower_bound,
    proto_value,
)
from .core import (
    ContestSpec,
    InterpretedBallot,
    PartyList,
    ReportedOutcome,
    Tallies,
    dhondt_divisors,
    sainte_lague_divisors,
    tallies_from_ballots,
)
from .errors import (
    AuditError,
    BallotOutOfBounds,
    DomainError,
    InputFormatError,
    ParseError,
    TieError,
    ValidationError,
)
from .hesse import RawBallot, RawHesseBallot, interpret, interpret_all
from .io import ElectionProfile, load_profile, render_report
from .risk import RiskParams, estimate_asn, kk_pvalue, run_audit
from .social_choice import (
    HamiltonAllocation,
    HighestAveragesAllocation,
    hamilton_allocate,
    highest_averages_allocate,
    plurality_winner,
    supermajority_met,
    within_party_winners,
)

__version__ = "0.1.0"

__all__ = [
    "AssertionSet",
    "Assorter",
    "AuditError",
    "BallotOutOfBounds",
    "ContestSpec",
    "DomainError",
    "ElectionProfile",
    "HamiltonAllocation",
    "HighestAveragesAllocation",
    "InputFormatError",
    "InterpretedBallot",
    "LinearAssertion",
    "ParseError",
    "PartyList",
    "RawBallot",
    "RawHesseBallot",
    "ReportedOutcome",
    "RiskParams",
    "Tallies",
    "TieError",
    "ValidationError",
    "VoteBounds",
    "aggregate_mean",
    "assorter_mean_margin",
    "assorterize",
    "dhondt_assertions",
    "dhondt_assorter",
    "dhondt_divisors",
    "estimate_asn",
    "hamilton_abr_assertions",
    "hamilton_all_seats_assertions",
    "hamilton_allocate",
    "highest_averages_allocate",
    "interpret",
    "interpret_all",
    "kk_pvalue",
    "load_profile",
    "pairwise_assertion",
    "pairwise_diff_assertion",
    "plurality_assertions",
    "plurality_winner",
    "proto_lower_bound",
    "proto_value",
    "render_report",
    "run_audit",
    "sainte_lague_divisors",
    "supermajority_assertion",
    "supermajority_met",
    "tallies_from_ballots",
    "within_party_assertions",
    "within_party_winners",
]
