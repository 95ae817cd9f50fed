"""Contest descriptions, ballots, tallies and reported outcomes.

Everything here uses exact integer or :class:`fractions.Fraction`
arithmetic. Floating point only appears in :mod:`partylist_rla.risk`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import BallotOutOfBounds, ValidationError

SCF_KINDS = ("plurality", "supermajority", "hamilton_free_list", "highest_averages")


def dhondt_divisors(seats: int) -> list[Fraction]:
    """D'Hondt divisors 1, 2, 3, ..."""
    return [Fraction(i) for i in range(1, seats + 1)]


def sainte_lague_divisors(seats: int) -> list[Fraction]:
    """Sainte-Laguë divisors 1, 3, 5, ..."""
    return [Fraction(2 * i - 1) for i in range(1, seats + 1)]


DIVISOR_SCHEMES = {"dhondt": dhondt_divisors, "sainte_lague": sainte_lague_divisors}


@dataclass(frozen=True)
class PartyList:
    party_id: str
    candidates: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))


@dataclass(frozen=True)
class ContestSpec:
    """Static description of one contest.

    ``max_votes_per_candidate`` is ``m`` and ``max_votes_per_ballot`` is
    ``m_L``: the most votes a ballot may give one entity and the most it may
    carry in total.
    """

    name: str
    scf_kind: str
    seats: int
    max_votes_per_candidate: int
    max_votes_per_ballot: int
    parties: tuple[PartyList, ...]
    divisors: Optional[tuple[Fraction, ...]] = None
    threshold: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "parties", tuple(self.parties))
        if self.divisors is not None:
            object.__setattr__(self, "divisors", tuple(Fraction(d) for d in self.divisors))
        if self.threshold is not None:
            object.__setattr__(self, "threshold", Fraction(self.threshold))
        self._validate()

    def _validate(self):
        if self.scf_kind not in SCF_KINDS:
            raise ValidationError(f"scf_kind must be one of {SCF_KINDS}, got {self.scf_kind!r}")
        if not isinstance(self.seats, int) or self.seats < 1:
            raise ValidationError(f"seats must be a positive integer, got {self.seats!r}")
        if self.max_votes_per_candidate < 1 or self.max_votes_per_ballot < 1:
            raise ValidationError("vote bounds must be positive")
        if self.max_votes_per_candidate > self.max_votes_per_ballot:
            raise ValidationError("max_votes_per_candidate must not exceed max_votes_per_ballot")
        if not self.parties:
            raise ValidationError("a contest needs at least one party")

        party_ids = [p.party_id for p in self.parties]
        if len(set(party_ids)) != len(party_ids):
            raise ValidationError("party identifiers must be unique")
        cands = [c for p in self.parties for c in p.candidates]
        if len(set(cands)) != len(cands):
            raise ValidationError("candidate identifiers must be unique across parties")
        if self.scf_kind == "hamilton_free_list":
            for p in self.parties:
                if len(p.candidates) > self.seats:
                    raise ValidationError(
                        f"party {p.party_id!r} lists {len(p.candidates)} candidates, "
                        f"more than the {self.seats} seats"
                    )

        if self.scf_kind == "highest_averages" and self.divisors is None:
            raise ValidationError("highest_averages contests need divisors")
        if self.divisors is not None:
            if len(self.divisors) != self.seats:
                raise ValidationError(
                    f"divisor list must have exactly {self.seats} entries, got {len(self.divisors)}"
                )
            if any(d <= 0 for d in self.divisors):
                raise ValidationError("divisors must be strictly positive")
            if any(a > b for a, b in zip(self.divisors, self.divisors[1:])):
                raise ValidationError("divisors must be nondecreasing")

        if self.scf_kind == "supermajority" and self.threshold is None:
            raise ValidationError("supermajority contests need a threshold")
        if self.threshold is not None and not 0 < self.threshold < 1:
            raise ValidationError("threshold must lie strictly between 0 and 1")

    @property
    def party_ids(self) -> list[str]:
        return [p.party_id for p in self.parties]

    @property
    def candidates(self) -> list[str]:
        return [c for p in self.parties for c in p.candidates]

    @property
    def party_of(self) -> dict[str, str]:
        return {c: p.party_id for p in self.parties for c in p.candidates}

    def party(self, party_id: str) -> PartyList:
        for p in self.parties:
            if p.party_id == party_id:
                return p
        raise KeyError(party_id)


@dataclass(frozen=True)
class InterpretedBallot:
    """Votes per candidate on one ballot.

    Only nonzero entries are stored. An invalid ballot carries no votes.
    """

    ballot_id: str
    votes: Mapping[str, int] = field(default_factory=dict)
    valid: bool = True

    def __post_init__(self):
        votes = {c: int(v) for c, v in self.votes.items() if v}
        if any(v < 0 for v in votes.values()):
            raise ValidationError(f"ballot {self.ballot_id!r} has a negative vote count")
        if not self.valid and votes:
            raise ValidationError(f"invalid ballot {self.ballot_id!r} must carry no votes")
        object.__setattr__(self, "votes", votes)

    @property
    def total(self) -> int:
        """b_T, the number of votes on the ballot."""
        return sum(self.votes.values())

    def party_votes(self, party_of: Mapping[str, str]) -> dict[str, int]:
        out: dict[str, int] = {}
        for c, v in self.votes.items():
            p = party_of[c]
            out[p] = out.get(p, 0) + v
        return out

    @classmethod
    def invalid(cls, ballot_id: str) -> "InterpretedBallot":
        return cls(ballot_id, {}, valid=False)


@dataclass(frozen=True)
class Tallies:
    per_candidate: Mapping[str, int]
    per_party: Mapping[str, int]
    total_votes: int
    valid_ballots: int
    invalid_ballots: int

    @property
    def ballot_count(self) -> int:
        return self.valid_ballots + self.invalid_ballots

    def proportion(self, party: str) -> Fraction:
        return Fraction(self.per_party[party], self.total_votes)

    @classmethod
    def from_party_totals(cls, per_party: Mapping[str, int], valid_ballots=None, invalid_ballots=0):
        """Tallies for single-candidate parties, handy for aggregate-only work."""
        per_party = dict(per_party)
        total = sum(per_party.values())
        if valid_ballots is None:
            valid_ballots = total
        return cls(dict(per_party), per_party, total, valid_ballots, invalid_ballots)


@dataclass(frozen=True)
class ReportedOutcome:
    party_seats: Mapping[str, int]
    floor_seats: Optional[Mapping[str, int]] = None
    candidate_winners: Optional[Mapping[str, frozenset]] = None

    def __post_init__(self):
        if any(v < 0 for v in self.party_seats.values()):
            raise ValidationError("seat counts must be nonnegative")
        if self.floor_seats is not None:
            for p, a in self.party_seats.items():
                if a - self.floor_seats.get(p, 0) not in (0, 1):
                    raise ValidationError(
                        f"party {p!r}: awarded seats must equal floor seats or floor seats + 1"
                    )
        if self.candidate_winners is not None:
            object.__setattr__(
                self,
                "candidate_winners",
                {p: frozenset(w) for p, w in self.candidate_winners.items()},
            )

    @property
    def total_seats(self) -> int:
        return sum(self.party_seats.values())

    def check_seats(self, seats: int):
        if self.total_seats != seats:
            raise ValidationError(
                f"reported seats sum to {self.total_seats}, contest has {seats}"
            )


def tallies_from_ballots(ballots: Iterable[InterpretedBallot], spec: ContestSpec) -> Tallies:
    """Exact per-candidate and per-party tallies of a ballot collection."""
    party_of = spec.party_of
    per_candidate = {c: 0 for c in spec.candidates}
    valid = invalid = 0
    for b in ballots:
        if not b.valid:
            invalid += 1
            continue
        valid += 1
        if b.total > spec.max_votes_per_ballot:
            raise BallotOutOfBounds(
                f"ballot {b.ballot_id!r} carries {b.total} votes, "
                f"more than the {spec.max_votes_per_ballot} allowed"
            )
        for c, v in b.votes.items():
            if c not in party_of:
                raise BallotOutOfBounds(f"ballot {b.ballot_id!r} votes for unknown candidate {c!r}")
            per_candidate[c] += v
    per_party = {
        p.party_id: sum(per_candidate[c] for c in p.candidates) for p in spec.parties
    }
    total = sum(per_party.values())
    return Tallies(per_candidate, per_party, total, valid, invalid)
