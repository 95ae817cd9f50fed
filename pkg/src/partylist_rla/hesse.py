"""Interpretation of Hesse free-list ballot markings.

A voter may give up to three votes to any candidate on any list, cross out
candidates, and select one party. Votes left over after the direct marks go
to the selected party and are dealt one at a time down its list, skipping
crossed-out names and wrapping to the top, until none remain.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .core import ContestSpec, InterpretedBallot
from .errors import InputFormatError

# Reason tags for spoiled ballots.
OVER_VOTE_PER_CANDIDATE = "over_vote_per_candidate"
OVER_VOTE_BALLOT = "over_vote_ballot"
VOTE_FOR_CROSSED_OUT = "vote_for_crossed_out"
UNKNOWN_PARTY = "unknown_party"


@dataclass(frozen=True)
class RawBallot:
    """Markings on one paper ballot, before interpretation."""

    ballot_id: str
    direct_votes: Mapping[str, int] = field(default_factory=dict)
    crossed_out: frozenset = frozenset()
    party_selection: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "direct_votes", dict(self.direct_votes))
        object.__setattr__(self, "crossed_out", frozenset(self.crossed_out))


RawHesseBallot = RawBallot


@dataclass
class InterpretationReport:
    valid: int = 0
    invalid: int = 0
    reasons: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return self.valid + self.invalid


def _check_record(raw: RawBallot, spec: ContestSpec):
    known = spec.party_of
    for c, v in raw.direct_votes.items():
        if c not in known:
            raise InputFormatError(f"ballot {raw.ballot_id!r}: unknown candidate {c!r}")
        if not isinstance(v, int) or v < 0:
            raise InputFormatError(f"ballot {raw.ballot_id!r}: bad vote count {v!r} for {c!r}")
    for c in raw.crossed_out:
        if c not in known:
            raise InputFormatError(f"ballot {raw.ballot_id!r}: unknown crossed-out candidate {c!r}")


def spoil_reason(raw: RawBallot, spec: ContestSpec) -> Optional[str]:
    """The first validity rule ``raw`` breaks, or None for a valid ballot."""
    if any(v > spec.max_votes_per_candidate for v in raw.direct_votes.values()):
        return OVER_VOTE_PER_CANDIDATE
    if sum(raw.direct_votes.values()) > spec.seats:
        return OVER_VOTE_BALLOT
    if any(raw.direct_votes.get(c, 0) > 0 for c in raw.crossed_out):
        return VOTE_FOR_CROSSED_OUT
    if raw.party_selection is not None and raw.party_selection not in spec.party_ids:
        return UNKNOWN_PARTY
    return None


def interpret(raw: RawBallot, spec: ContestSpec) -> InterpretedBallot:
    """Turn ballot markings into per-candidate votes.

    Direct marks are capped by ``spec.max_votes_per_candidate`` (3 in Hesse).

    A ballot breaking a validity rule is spoiled as a whole and comes back
    with ``valid=False``. Remainder votes lapse when every candidate of the
    selected party is crossed out.
    """
    _check_record(raw, spec)
    if spoil_reason(raw, spec) is not None:
        return InterpretedBallot.invalid(raw.ballot_id)

    votes = {c: v for c, v in raw.direct_votes.items() if v}
    if raw.party_selection is not None:
        remaining = spec.seats - sum(votes.values())
        receivers = [
            c for c in spec.party(raw.party_selection).candidates if c not in raw.crossed_out
        ]
        if receivers and remaining > 0:
            rounds, extra = divmod(remaining, len(receivers))
            for i, c in enumerate(receivers):
                share = rounds + (1 if i < extra else 0)
                if share:
                    votes[c] = votes.get(c, 0) + share
    return InterpretedBallot(raw.ballot_id, votes, valid=True)


def interpret_all(raws: Iterable[RawBallot], spec: ContestSpec):
    """Interpret a stream of ballots in order.

    Returns ``(ballots, report)``; the report counts valid and spoiled
    ballots and why each spoiled ballot was rejected.
    """
    report = InterpretationReport()
    out = []
    for raw in raws:
        if not isinstance(raw, RawBallot):
            raise InputFormatError(f"expected a RawBallot, got {type(raw).__name__}")
        _check_record(raw, spec)
        reason = spoil_reason(raw, spec)
        if reason is None:
            report.valid += 1
        else:
            report.invalid += 1
            report.reasons[reason] += 1
        out.append(interpret(raw, spec))
    return out, report
