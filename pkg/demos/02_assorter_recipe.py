"""
From assertion to assorter
==========================

Every claim the audit checks is linear in the vote totals. Each one is turned
into a per-ballot score whose average exceeds one half exactly when the claim
is true. This script shows the scores for a few small cases.
"""

from fractions import Fraction

from partylist_rla import (
    InterpretedBallot,
    VoteBounds,
    assorter_mean_margin,
    assorterize,
    pairwise_assertion,
    pairwise_diff_assertion,
    supermajority_assertion,
)

one_vote = VoteBounds(1)
kinds = {
    "vote for W": InterpretedBallot("w", {"W": 1}),
    "vote for L": InterpretedBallot("l", {"L": 1}),
    "no vote": InterpretedBallot("n", {}),
}

# W got more votes than L.
h = assorterize(pairwise_assertion("W", "L"), one_vote)
print("W > L:", {k: str(h.value(b)) for k, b in kinds.items()})

# W cleared two thirds of the vote. The raw score can fall to -2/3, so it is
# rescaled by 3/4 to stay nonnegative.
h = assorterize(supermajority_assertion("W", Fraction(2, 3)), one_vote)
print("p_W > 2/3:", {k: str(h.value(b)) for k, b in kinds.items()}, "scale", h.scale)

# With several votes per ballot, a difference claim p_A > p_B + d is scored by
# (b_A - b_B - d*b_T + m(1+d)) / (2m(1+d)) for a ballot limit of m votes.
h = assorterize(pairwise_diff_assertion("A", "B", Fraction(1, 5)), VoteBounds(5))
for votes in ({"A": 5}, {"B": 5}, {"A": 2, "B": 1, "C": 2}):
    print("p_A > p_B + 1/5 on", votes, "->", h.value(InterpretedBallot("x", votes)))

# The margin is twice the mean minus one: positive iff the claim holds.
ballots = [kinds["vote for W"]] * 3 + [kinds["vote for L"]]
mean, margin = assorter_mean_margin(assorterize(pairwise_assertion("W", "L"), one_vote), ballots)
print("mean", mean, "margin", margin)
