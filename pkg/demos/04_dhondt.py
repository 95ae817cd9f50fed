"""
Highest-averages contests
=========================

For D'Hondt and Sainte-Lague the reported seats are correct exactly when
each party's last won quotient beats every other party's first lost
quotient. The scores for these claims can exceed one.
"""

from partylist_rla import (
    InterpretedBallot,
    RiskParams,
    Tallies,
    dhondt_assertions,
    dhondt_assorter,
    dhondt_divisors,
    estimate_asn,
    highest_averages_allocate,
    sainte_lague_divisors,
)

tallies = Tallies.from_party_totals({"A": 100, "B": 80, "C": 30})
S = 8

for name, divisors in (("D'Hondt", dhondt_divisors(S)), ("Sainte-Lague", sainte_lague_divisors(S))):
    alloc = highest_averages_allocate(tallies, S, divisors)
    print(name, "seats", alloc.seats, "last won", alloc.W, "first lost", alloc.L)

divisors = dhondt_divisors(S)
alloc = highest_averages_allocate(tallies, S, divisors)
aset = dhondt_assertions(alloc, divisors)
print(len(aset), "pairwise quotient claims")

# One vote per ballot. Build the population once and score it per claim.
ballots = [InterpretedBallot(f"{p}{i}", {p: 1}) for p, n in tallies.per_party.items() for i in range(n)]
for claim in aset:
    a, b = claim.entity_coeffs
    h = dhondt_assorter((a, b), alloc, divisors, m=1)
    values = h.float_values(ballots)
    asn = estimate_asn(values, RiskParams(0.05), "deterministic").asn
    print(f"{claim.label:16s} vote for {a} scores {h.value(InterpretedBallot('x', {a: 1}))}, "
          f"max {h.upper_bound}, mean {h.mean(ballots)}, ASN {asn}")
