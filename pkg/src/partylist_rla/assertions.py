"""Linear assertions and generators of sufficient assertion sets.

A :class:`LinearAssertion` claims ``sum_e c_e * T_e + c_T * T_L > 0`` where
``T_e`` are entity tallies and ``T_L`` the total number of valid votes.
Claims about proportions (``p_A > p_B + d``) are stored after multiplying
through by ``T_L``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .core import PartyList, ReportedOutcome, Tallies
from .errors import DomainError, ValidationError
from .social_choice import HighestAveragesAllocation

KINDS = ("pairwise", "supermajority", "pairwise_diff", "dhondt_pair", "within_party")
LEVELS = ("party", "candidate")


def _fmt(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class LinearAssertion:
    entity_coeffs: Mapping[str, Fraction]
    total_coeff: Fraction
    label: str
    kind: str
    level: str = "party"

    def __post_init__(self):
        coeffs = {e: Fraction(c) for e, c in self.entity_coeffs.items()}
        object.__setattr__(self, "entity_coeffs", coeffs)
        object.__setattr__(self, "total_coeff", Fraction(self.total_coeff))
        if self.kind not in KINDS:
            raise ValidationError(f"unknown assertion kind {self.kind!r}")
        if self.level not in LEVELS:
            raise ValidationError(f"unknown entity level {self.level!r}")
        if not any(coeffs.values()) and not self.total_coeff:
            raise ValidationError("an assertion needs at least one nonzero coefficient")

    def value(self, tallies: Tallies) -> Fraction:
        """The left-hand side ``sum c_e T_e + c_T T_L`` on ``tallies``."""
        counts = tallies.per_party if self.level == "party" else tallies.per_candidate
        lhs = sum((c * counts.get(e, 0) for e, c in self.entity_coeffs.items()), Fraction(0))
        return lhs + self.total_coeff * tallies.total_votes

    def sign(self, tallies: Tallies) -> int:
        v = self.value(tallies)
        return (v > 0) - (v < 0)

    def holds(self, tallies: Tallies) -> bool:
        return self.value(tallies) > 0


@dataclass
class AssertionSet:
    assertions: list[LinearAssertion] = field(default_factory=list)
    sufficiency_note: str = ""

    def __post_init__(self):
        labels = [a.label for a in self.assertions]
        if len(set(labels)) != len(labels):
            dupes = sorted({lab for lab in labels if labels.count(lab) > 1})
            raise ValidationError(f"duplicate assertion labels: {dupes}")

    def __iter__(self) -> Iterator[LinearAssertion]:
        return iter(self.assertions)

    def __len__(self) -> int:
        return len(self.assertions)

    def all_hold(self, tallies: Tallies) -> bool:
        return all(a.holds(tallies) for a in self.assertions)

    def failing(self, tallies: Tallies) -> list[LinearAssertion]:
        return [a for a in self.assertions if not a.holds(tallies)]

    def __add__(self, other: "AssertionSet") -> "AssertionSet":
        notes = "; ".join(n for n in (self.sufficiency_note, other.sufficiency_note) if n)
        return AssertionSet(self.assertions + other.assertions, notes)


def pairwise_assertion(a: str, b: str, *, level="party", kind="pairwise") -> LinearAssertion:
    """``T_A - T_B > 0``."""
    if a == b:
        raise DomainError("a pairwise assertion needs two different entities")
    return LinearAssertion({a: 1, b: -1}, 0, f"{a} > {b}", kind, level)


def supermajority_assertion(e: str, t, *, level="party", check_domain=True) -> LinearAssertion:
    """``T_e - t T_L > 0``, i.e. ``p_e > t``.

    ABR sets pass ``check_domain=False`` because a party holding every vote
    gets ``t = 1``, an assertion that is well formed but can never hold.
    """
    t = Fraction(t)
    if check_domain and not 0 < t < 1:
        raise DomainError(f"threshold must lie in (0, 1), got {t}")
    return LinearAssertion({e: 1}, -t, f"p_{e} > {_fmt(t)}", "supermajority", level)


def pairwise_diff_assertion(a: str, b: str, d, *, level="party", check_domain=True) -> LinearAssertion:
    """``T_A - T_B - d T_L > 0``, i.e. ``p_A > p_B + d``.

    Generated All-Seats sets may need ``d <= -1``; they pass
    ``check_domain=False``. The algebra is the same either way.
    """
    d = Fraction(d)
    if a == b:
        raise DomainError("a pairwise difference assertion needs two different entities")
    if check_domain and d <= -1:
        raise DomainError(f"difference must exceed -1, got {d}")
    if d == 0:
        return pairwise_assertion(a, b, level=level)
    sign = "+" if d > 0 else "-"
    return LinearAssertion(
        {a: 1, b: -1}, -d, f"p_{a} > p_{b} {sign} {_fmt(abs(d))}", "pairwise_diff", level
    )


def plurality_assertions(winner: str, losers: Iterable[str]) -> AssertionSet:
    return AssertionSet(
        [pairwise_assertion(winner, l) for l in losers if l != winner],
        f"{winner} has the most votes",
    )


def hamilton_all_seats_assertions(reported: ReportedOutcome, seats: int) -> AssertionSet:
    """One difference assertion per ordered pair of parties.

    For parties ``m != n`` with awarded seats ``a_m, a_n`` the assertion is
    ``p_m > p_n + (a_m - a_n - 1) / S``.
    """
    reported.check_seats(seats)
    parties = list(reported.party_seats)
    out = []
    for m in parties:
        for n in parties:
            if m == n:
                continue
            d = Fraction(reported.party_seats[m] - reported.party_seats[n] - 1, seats)
            out.append(pairwise_diff_assertion(m, n, d, check_domain=False))
    return AssertionSet(out, "every party deserved exactly its awarded seats (Hamilton)")


def abr_threshold(tallies: Tallies, party: str, seats: int) -> Fraction:
    """``t = q * floor(T_e / q) / T_L`` with quota ``q = T_L / S``."""
    q = Fraction(tallies.total_votes, seats)
    delta = floor(tallies.per_party[party] / q)
    return q * delta / tallies.total_votes


def hamilton_abr_assertions(tallies: Tallies, seats: int) -> AssertionSet:
    """All-But-Remainder: each party earned at least its floor seats.

    Parties whose floor is zero get no assertion.
    """
    if tallies.total_votes <= 0:
        raise DomainError("ABR assertions need at least one vote")
    out = []
    for e in tallies.per_party:
        t = abr_threshold(tallies, e, seats)
        if t > 0:
            out.append(supermajority_assertion(e, t, check_domain=False))
    return AssertionSet(out, "every party deserved its floor seats (All-But-Remainder)")


def dhondt_assertions(alloc: HighestAveragesAllocation, divisors: Sequence) -> AssertionSet:
    """``T_A / d(W_A) - T_B / d(L_B) > 0`` for each eligible ordered pair."""
    divisors = [Fraction(x) for x in divisors]
    out = []
    for a, wa in alloc.W.items():
        if wa is None:
            continue
        for b, lb in alloc.L.items():
            if b == a or lb is None:
                continue
            out.append(
                LinearAssertion(
                    {a: 1 / divisors[wa - 1], b: -1 / divisors[lb - 1]},
                    0,
                    f"f({a},{wa}) > f({b},{lb})",
                    "dhondt_pair",
                )
            )
    return AssertionSet(out, "the reported winning set holds the largest quotients")


def within_party_assertions(
    party: PartyList,
    reported_winners: Iterable[str],
    candidate_tallies: Optional[Mapping[str, int]] = None,
) -> AssertionSet:
    """Every reported winner of ``party`` beats every reported loser."""
    winners = [c for c in party.candidates if c in set(reported_winners)]
    unknown = set(reported_winners) - set(party.candidates)
    if unknown:
        raise ValidationError(f"winners {sorted(unknown)} are not on list {party.party_id!r}")
    if candidate_tallies is not None:
        missing = [c for c in party.candidates if c not in candidate_tallies]
        if missing:
            raise ValidationError(f"no tallies recorded for {missing}")
    losers = [c for c in party.candidates if c not in winners]
    out = [
        pairwise_assertion(w, l, level="candidate", kind="within_party")
        for w in winners
        for l in losers
    ]
    return AssertionSet(out, f"the reported candidates of {party.party_id} won its seats")
