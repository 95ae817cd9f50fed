"""Outcome computation for the supported social choice functions.

Ties at a decision boundary raise :class:`TieError` rather than being broken:
an outcome decided by a tie has zero margin and cannot be audited.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Mapping, Optional, Sequence

from .core import ReportedOutcome, Tallies
from .errors import DomainError, TieError, ValidationError


@dataclass(frozen=True)
class HamiltonAllocation:
    floor_seats: dict[str, int]
    remainders: dict[str, Fraction]
    leftover_seats: int
    final_seats: dict[str, int]
    remainder_winners: frozenset

    def reported(self) -> ReportedOutcome:
        return ReportedOutcome(dict(self.final_seats), floor_seats=dict(self.floor_seats))


@dataclass(frozen=True)
class HighestAveragesAllocation:
    """Seats plus, per party, the last seat won (W) and first seat lost (L).

    ``W[e]`` is None when ``e`` won nothing; ``L[e]`` is None when ``e`` won
    every seat in its row of the table.
    """

    seats: dict[str, int]
    W: dict[str, Optional[int]]
    L: dict[str, Optional[int]]
    winning_set: frozenset

    def reported(self) -> ReportedOutcome:
        return ReportedOutcome(dict(self.seats))

    @classmethod
    def from_seats(cls, seats: Mapping[str, int], total_seats: int) -> "HighestAveragesAllocation":
        """W/L bookkeeping for a (possibly wrong) reported seat allocation."""
        if sum(seats.values()) != total_seats:
            raise ValidationError(f"seats sum to {sum(seats.values())}, expected {total_seats}")
        W = {e: (s if s > 0 else None) for e, s in seats.items()}
        L = {e: (s + 1 if s < total_seats else None) for e, s in seats.items()}
        winning = frozenset((e, i) for e, s in seats.items() for i in range(1, s + 1))
        return cls(dict(seats), W, L, winning)


def hamilton_allocate(tallies: Tallies, seats: int) -> HamiltonAllocation:
    """Largest-remainder apportionment of ``seats`` by party tallies."""
    total = tallies.total_votes
    if total <= 0:
        raise DomainError("Hamilton allocation needs at least one vote")
    quotas = {e: Fraction(seats * t, total) for e, t in tallies.per_party.items()}
    floors = {e: floor(q) for e, q in quotas.items()}
    remainders = {e: q - floors[e] for e, q in quotas.items()}
    k = seats - sum(floors.values())

    ranked = sorted(remainders, key=remainders.get, reverse=True)
    if 0 < k < len(ranked) and remainders[ranked[k - 1]] == remainders[ranked[k]]:
        raise TieError(
            f"remainder tie across the cut: {ranked[k - 1]!r} and {ranked[k]!r} "
            f"both have {remainders[ranked[k]]}"
        )
    winners = frozenset(ranked[:k])
    final = {e: floors[e] + (1 if e in winners else 0) for e in quotas}
    return HamiltonAllocation(floors, remainders, k, final, winners)


def highest_averages_allocate(
    tallies: Tallies, seats: int, divisors: Sequence[Fraction]
) -> HighestAveragesAllocation:
    """Highest-averages apportionment.

    Seats are handed out one at a time to the largest current quotient
    ``T_e / d(s_e + 1)``; this picks the same entries as taking the ``seats``
    largest values of the full quotient table.
    """
    if tallies.total_votes <= 0:
        raise DomainError("highest-averages allocation needs at least one vote")
    if len(divisors) < seats:
        raise DomainError(f"need at least {seats} divisors, got {len(divisors)}")
    divisors = [Fraction(d) for d in divisors[:seats]]
    if any(d <= 0 for d in divisors):
        raise DomainError("divisors must be strictly positive")

    per_party = tallies.per_party
    won = {e: 0 for e in per_party}

    def quotient(e):
        return Fraction(per_party[e]) / divisors[won[e]] if won[e] < seats else None

    last = None
    for _ in range(seats):
        best, best_q = None, None
        for e in per_party:
            q = quotient(e)
            if q is not None and (best_q is None or q > best_q):
                best, best_q = e, q
        won[best] += 1
        last = best_q

    runner_up = [q for q in map(quotient, per_party) if q is not None]
    if runner_up and max(runner_up) == last:
        raise TieError(f"the last seat and the first losing entry tie at {last}")
    return HighestAveragesAllocation.from_seats(won, seats)


def within_party_winners(candidate_tallies: Mapping[str, int], seats: int) -> frozenset:
    """The ``seats`` candidates with the highest tallies."""
    if seats > len(candidate_tallies):
        raise DomainError(f"{seats} seats but only {len(candidate_tallies)} candidates")
    ranked = sorted(candidate_tallies, key=candidate_tallies.get, reverse=True)
    if 0 < seats < len(ranked) and candidate_tallies[ranked[seats - 1]] == candidate_tallies[ranked[seats]]:
        raise TieError(f"candidates {ranked[seats - 1]!r} and {ranked[seats]!r} tie for the last seat")
    return frozenset(ranked[:seats])


def plurality_winner(tallies: Tallies) -> str:
    per_party = tallies.per_party
    if tallies.total_votes <= 0:
        raise DomainError("no votes cast")
    top = max(per_party.values())
    leaders = [e for e, t in per_party.items() if t == top]
    if len(leaders) > 1:
        raise TieError(f"tied maximum between {leaders}")
    return leaders[0]


def supermajority_met(tallies: Tallies, winner: str, threshold) -> bool:
    t = Fraction(threshold)
    if not 0 < t < 1:
        raise DomainError("threshold must lie strictly between 0 and 1")
    return tallies.per_party[winner] > t * tallies.total_votes
