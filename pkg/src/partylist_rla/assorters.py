"""Turning linear assertions into assorters.

For an assertion ``sum_e c_e T_e + c_T T_L > 0`` the proto-assorter of a
ballot is ``g(b) = sum_e c_e b_e + c_T b_T``; the assertion holds iff the
population sum of ``g`` is positive. Given a lower bound ``a <= g(b)`` the
assorter is ``h(b) = c g(b) + 1/2`` with ``c = 1`` when ``a >= -1/2`` and
``c = -1/(2a)`` otherwise, so ``h >= 0`` and ``mean(h) > 1/2`` iff the
assertion holds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .assertions import AssertionSet, LinearAssertion
from .core import ContestSpec, InterpretedBallot, Tallies
from .errors import DomainError, ValidationError
from .social_choice import HighestAveragesAllocation

HALF = Fraction(1, 2)


class AggregateMeanWarning(UserWarning):
    """The closed-form ABR mean disagrees with the recipe-built assorter."""


@dataclass(frozen=True)
class VoteBounds:
    """Per-ballot vote limits used to bound the proto-assorter.

    ``per_entity`` maps an entity to the most votes one ballot can give it;
    entities not listed default to ``ballot_total`` (``m_L``). ``groups``
    maps a party to its candidates so party-level coefficients can be
    applied to candidate-level ballots.
    """

    ballot_total: int
    per_entity: Mapping[str, int] = field(default_factory=dict)
    groups: Mapping[str, tuple] = field(default_factory=dict)

    def bound(self, entity: str) -> int:
        return self.per_entity.get(entity, self.ballot_total)

    @classmethod
    def for_contest(cls, spec: ContestSpec, per_entity: Optional[Mapping[str, int]] = None):
        groups = {p.party_id: tuple(p.candidates) for p in spec.parties}
        return cls(spec.max_votes_per_ballot, dict(per_entity or {}), groups)


def entity_votes(ballot: InterpretedBallot, entity: str, level: str, bounds: Optional[VoteBounds]) -> int:
    if level == "party" and bounds is not None and entity in bounds.groups:
        return sum(ballot.votes.get(c, 0) for c in bounds.groups[entity])
    return ballot.votes.get(entity, 0)


def proto_value(
    assertion: LinearAssertion, ballot: InterpretedBallot, bounds: Optional[VoteBounds] = None
) -> Fraction:
    """``g(b)``; zero for an invalid ballot."""
    if not ballot.valid:
        return Fraction(0)
    g = assertion.total_coeff * ballot.total
    for e, c in assertion.entity_coeffs.items():
        g += c * entity_votes(ballot, e, assertion.level, bounds)
    return g


def _difference_shape(assertion: LinearAssertion):
    """``(A, B, d)`` when the assertion reads ``T_A - T_B - d T_L > 0``."""
    coeffs = {e: c for e, c in assertion.entity_coeffs.items() if c}
    if len(coeffs) != 2:
        return None
    pos = [e for e, c in coeffs.items() if c == 1]
    neg = [e for e, c in coeffs.items() if c == -1]
    if len(pos) != 1 or len(neg) != 1:
        return None
    return pos[0], neg[0], -assertion.total_coeff


def proto_lower_bound(assertion: LinearAssertion, bounds: VoteBounds) -> Fraction:
    """A value ``a <= g(b)`` for every admissible ballot, capped at 0.

    Sets every negatively weighted vote to its bound and every other vote to
    zero. Difference assertions with ``-1 < d < 0`` use the sharper
    ``-s_B (1 + d)``, valid because ``b_T >= b_B``.
    """
    shape = _difference_shape(assertion)
    if shape is not None and -1 < shape[2] < 0:
        _, b, d = shape
        return min(-bounds.bound(b) * (1 + d), Fraction(0))
    a = sum(
        (c * bounds.bound(e) for e, c in assertion.entity_coeffs.items() if c < 0), Fraction(0)
    )
    if assertion.total_coeff < 0:
        a += assertion.total_coeff * bounds.ballot_total
    return min(a, Fraction(0))


def proto_upper_bound(assertion: LinearAssertion, bounds: VoteBounds) -> Fraction:
    g = sum((c * bounds.bound(e) for e, c in assertion.entity_coeffs.items() if c > 0), Fraction(0))
    if assertion.total_coeff > 0:
        g += assertion.total_coeff * bounds.ballot_total
    return max(g, Fraction(0))


@dataclass(frozen=True)
class Assorter:
    """``h(b) = scale * g(b) + 1/2``, taking values in ``[0, upper_bound]``."""

    assertion: LinearAssertion
    lower_bound: Fraction
    scale: Fraction
    upper_bound: Fraction
    vote_bounds: VoteBounds

    def __post_init__(self):
        # h * den = sum_e w_e b_e + w_T b_T + w_0, all integers.
        a = self.assertion
        scaled = [self.scale * c for c in a.entity_coeffs.values()] + [self.scale * a.total_coeff, HALF]
        den = lcm(*(q.denominator for q in scaled))
        object.__setattr__(self, "_den", den)
        object.__setattr__(
            self, "_weights", {e: int(self.scale * c * den) for e, c in a.entity_coeffs.items()}
        )
        object.__setattr__(self, "_w_total", int(self.scale * a.total_coeff * den))
        object.__setattr__(self, "_w_zero", den // 2)

    @property
    def label(self) -> str:
        return self.assertion.label

    def proto(self, ballot: InterpretedBallot) -> Fraction:
        return proto_value(self.assertion, ballot, self.vote_bounds)

    def _numerator(self, ballot: InterpretedBallot) -> int:
        if not ballot.valid:
            return self._w_zero
        level, bounds = self.assertion.level, self.vote_bounds
        n = self._w_zero + self._w_total * ballot.total
        for e, w in self._weights.items():
            n += w * entity_votes(ballot, e, level, bounds)
        return n

    def value(self, ballot: InterpretedBallot) -> Fraction:
        return Fraction(self._numerator(ballot), self._den)

    def float_value(self, ballot: InterpretedBallot) -> float:
        return self._numerator(ballot) / self._den

    def values(self, ballots: Iterable[InterpretedBallot]) -> list[Fraction]:
        return [self.value(b) for b in ballots]

    def float_values(self, ballots: Iterable[InterpretedBallot]) -> np.ndarray:
        nums = np.array([self._numerator(b) for b in ballots], dtype=float)
        return nums / self._den

    def mean(self, ballots: Sequence[InterpretedBallot]) -> Fraction:
        if not ballots:
            raise DomainError("the mean of an empty ballot set is undefined")
        return Fraction(sum(self._numerator(b) for b in ballots), self._den * len(ballots))


def assorterize(assertion: LinearAssertion, bounds: VoteBounds) -> Assorter:
    a = proto_lower_bound(assertion, bounds)
    c = Fraction(1) if a >= -HALF else -1 / (2 * a)
    upper = c * proto_upper_bound(assertion, bounds) + HALF
    return Assorter(assertion, a, c, upper, bounds)


def assorterize_set(assertions: AssertionSet, bounds: VoteBounds) -> list[Assorter]:
    return [assorterize(a, bounds) for a in assertions]


def dhondt_assorter(
    pair: tuple[str, str],
    alloc: HighestAveragesAllocation,
    divisors: Sequence,
    m: int,
    groups: Optional[Mapping[str, tuple]] = None,
) -> Assorter:
    """``h(b) = (b_A d(L_B)/d(W_A) - b_B + m) / (2m)``.

    ``m`` bounds the votes one ballot can give a single party. With ``m = 1``
    an A vote scores ``(d(L_B)/d(W_A) + 1)/2``, a B vote 0, anything else 1/2.
    The scale is always ``d(L_B)/(2m)``, even when ``m/d(L_B) <= 1/2``.
    """
    a, b = pair
    wa, lb = alloc.W.get(a), alloc.L.get(b)
    if a == b or wa is None or lb is None:
        raise DomainError(f"pair {pair} is not eligible: need W_A and L_B defined")
    d_w, d_l = Fraction(divisors[wa - 1]), Fraction(divisors[lb - 1])
    assertion = LinearAssertion(
        {a: 1 / d_w, b: -1 / d_l}, 0, f"f({a},{wa}) > f({b},{lb})", "dhondt_pair"
    )
    bounds = VoteBounds(m, {a: m, b: m}, dict(groups or {}))
    lower = Fraction(-m) / d_l
    scale = d_l / (2 * m)
    upper = scale * m / d_w + HALF
    return Assorter(assertion, lower, scale, upper, bounds)


def assorter_mean_margin(assorter: Assorter, ballots: Sequence[InterpretedBallot]):
    """``(mean, margin)`` with ``margin = 2 * mean - 1``, both exact."""
    mean = assorter.mean(ballots)
    return mean, 2 * mean - 1


def aggregate_mean(
    kind: str,
    tallies: Tallies,
    *,
    entity: Optional[str] = None,
    other: Optional[str] = None,
    d=None,
    seats: Optional[int] = None,
    t=None,
    max_votes_per_ballot: Optional[int] = None,
) -> Fraction:
    """Assorter mean computed from contest totals alone.

    ``kind="all_seats"`` gives the mean of the multi-vote difference assorter
    for ``p_entity > p_other + d`` with ``m_L = seats``; ``kind="abr"`` gives
    ``(T_e/(2t) - T_L/2 + (V+I)/2) / (V+I)``. The ABR form scales as if each
    ballot held one vote; with ``max_votes_per_ballot > 1`` it differs from
    the recipe-built assorter and a warning is issued.
    """
    n = tallies.valid_ballots + tallies.invalid_ballots
    if n <= 0:
        raise DomainError("no ballots")
    V, I, T_L = tallies.valid_ballots, tallies.invalid_ballots, tallies.total_votes
    if kind == "abr":
        t = Fraction(t)
        if t <= 0:
            raise DomainError(f"ABR threshold must be positive, got {t}")
        if max_votes_per_ballot is not None and max_votes_per_ballot > 1:
            warnings.warn(
                "closed-form ABR mean assumes one vote per ballot; it differs from the "
                "recipe-built assorter when ballots carry several votes",
                AggregateMeanWarning,
                stacklevel=2,
            )
        T_e = tallies.per_party[entity]
        return (Fraction(T_e) / (2 * t) - Fraction(T_L, 2) + Fraction(n, 2)) / n
    if kind == "all_seats":
        d = Fraction(d)
        if d <= -1:
            raise DomainError(f"closed form needs d > -1, got {d}")
        S = seats
        T_A, T_B = tallies.per_party[entity], tallies.per_party[other]
        valid_part = (T_A - T_B - T_L * d + V * S * (1 + d)) / (2 * S * (1 + d))
        return (valid_part + Fraction(I, 2)) / n
    raise ValidationError(f"unknown aggregate mean kind {kind!r}")
