"""
Reading a free-list ballot
==========================

A voter in a twelve-seat council contest marks three votes for Beatrix and
three for Fox, crosses out Charles and ticks the Greens list. This script
walks through how that ballot becomes vote counts.
"""

from partylist_rla import ContestSpec, PartyList, RawBallot, interpret, interpret_all

spec = ContestSpec(
    name="council",
    scf_kind="hamilton_free_list",
    seats=12,
    max_votes_per_candidate=3,
    max_votes_per_ballot=12,
    parties=[
        PartyList("Greens", ("Arnold", "Beatrix", "Charles", "Debra", "Emma")),
        PartyList("Blue", ("Fox", "Gina")),
        PartyList("Red", ("Hal",)),
    ],
)

ballot = RawBallot("b1", {"Beatrix": 3, "Fox": 3}, crossed_out={"Charles"}, party_selection="Greens")

# Six votes are marked directly, so six of the twelve are still unassigned.
# They go down the Greens list one at a time, skipping Charles and wrapping
# back to the top: Arnold, Beatrix, Debra, Emma, Arnold, Beatrix.
result = interpret(ballot, spec)
print("interpreted:", result.votes, "total", result.total)

# Per-party totals are what the seat allocation sees.
print("per party:", result.party_votes(spec.party_of))

# A ballot that breaks a rule is spoiled as a whole rather than repaired.
spoiled = [
    RawBallot("b2", {"Arnold": 4}),
    RawBallot("b3", {"Hal": 3, "Fox": 3, "Gina": 3, "Emma": 3, "Debra": 1}),
    RawBallot("b4", {"Charles": 1}, crossed_out={"Charles"}),
]
_, report = interpret_all([ballot] + spoiled, spec)
print(f"valid={report.valid} invalid={report.invalid}", dict(report.reasons))
