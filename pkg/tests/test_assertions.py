from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from partylist_rla import (
    AssertionSet,
    DomainError,
    LinearAssertion,
    PartyList,
    ReportedOutcome,
    Tallies,
    ValidationError,
    dhondt_assertions,
    dhondt_divisors,
    hamilton_abr_assertions,
    hamilton_all_seats_assertions,
    highest_averages_allocate,
    pairwise_assertion,
    pairwise_diff_assertion,
    plurality_assertions,
    sainte_lague_divisors,
    supermajority_assertion,
    within_party_assertions,
)
from partylist_rla.social_choice import HighestAveragesAllocation
from oracles import Tie, compositions, hamilton_oracle, table_oracle

T = Tallies.from_party_totals


def by_label(aset):
    return {a.label: a for a in aset}


def test_pairwise_and_supermajority_values():
    t = T({"A": 60, "B": 40})
    a = pairwise_assertion("A", "B")
    assert a.value(t) == 20 and a.holds(t) and a.sign(t) == 1
    s = supermajority_assertion("A", Fraction(2, 3))
    assert s.value(t) == 60 - Fraction(200, 3)
    assert not s.holds(t) and s.sign(t) == -1
    assert pairwise_assertion("B", "A").sign(T({"A": 5, "B": 5})) == 0


def test_pairwise_diff_forms():
    d = pairwise_diff_assertion("A", "B", Fraction(1, 5))
    assert d.entity_coeffs == {"A": 1, "B": -1} and d.total_coeff == Fraction(-1, 5)
    assert d.label == "p_A > p_B + 1/5"
    assert pairwise_diff_assertion("A", "B", 0).kind == "pairwise"
    with pytest.raises(DomainError):
        pairwise_diff_assertion("A", "B", -1)
    assert pairwise_diff_assertion("A", "B", -1, check_domain=False).total_coeff == 1


def test_assertion_validation():
    with pytest.raises(ValidationError):
        LinearAssertion({}, 0, "empty", "pairwise")
    with pytest.raises(ValidationError):
        LinearAssertion({"A": 1}, 0, "x", "made_up")
    with pytest.raises(ValidationError):
        AssertionSet([pairwise_assertion("A", "B"), pairwise_assertion("A", "B")])
    with pytest.raises(DomainError):
        supermajority_assertion("A", 1)
    with pytest.raises(DomainError):
        pairwise_assertion("A", "A")


def test_plurality_set():
    aset = plurality_assertions("A", ["A", "B", "C"])
    assert sorted(by_label(aset)) == ["A > B", "A > C"]
    assert aset.all_hold(T({"A": 3, "B": 2, "C": 1}))
    assert [a.label for a in aset.failing(T({"A": 3, "B": 3, "C": 1}))] == ["A > B"]


def test_all_seats_worked():
    reported = ReportedOutcome({"A": 3, "B": 1, "C": 1})
    aset = hamilton_all_seats_assertions(reported, 5)
    assert len(aset) == 6
    labels = by_label(aset)
    assert labels["p_A > p_B + 1/5"].total_coeff == Fraction(-1, 5)
    assert labels["p_B > p_A - 3/5"].total_coeff == Fraction(3, 5)
    assert aset.all_hold(T({"A": 53, "B": 30, "C": 17}))


def test_all_seats_pair_count():
    reported = ReportedOutcome({f"P{i}": 1 for i in range(8)})
    assert len(hamilton_all_seats_assertions(reported, 8)) == 56


def test_abr_worked():
    aset = hamilton_abr_assertions(T({"A": 53, "B": 30, "C": 17}), 5)
    labels = by_label(aset)
    assert set(labels) == {"p_A > 2/5", "p_B > 1/5"}
    assert aset.all_hold(T({"A": 53, "B": 30, "C": 17}))


def test_abr_exact_quota_is_strict():
    # quota 40, each party holds exactly one quota: p_e > 1/2 is false
    aset = hamilton_abr_assertions(T({"A": 40, "B": 40}), 2)
    assert len(aset) == 2 and not aset.all_hold(T({"A": 40, "B": 40}))


def test_dhondt_worked():
    alloc = highest_averages_allocate(T({"A": 100, "B": 80, "C": 30}), 8, dhondt_divisors(8))
    aset = dhondt_assertions(alloc, dhondt_divisors(8))
    assert len(aset) == 6
    labels = by_label(aset)
    assert labels["f(A,4) > f(B,4)"].entity_coeffs == {"A": Fraction(1, 4), "B": Fraction(-1, 4)}
    assert labels["f(C,1) > f(A,5)"].entity_coeffs == {"C": 1, "A": Fraction(-1, 5)}
    assert aset.all_hold(T({"A": 100, "B": 80, "C": 30}))


def test_dhondt_skips_absent_bounds():
    alloc = HighestAveragesAllocation.from_seats({"A": 3, "B": 0}, 3)
    labels = by_label(dhondt_assertions(alloc, dhondt_divisors(3)))
    # A holds every seat (no L_A); B holds none (no W_B)
    assert list(labels) == ["f(A,3) > f(B,1)"]


def test_within_party():
    party = PartyList("P", ("w1", "w2", "l1", "l2"))
    aset = within_party_assertions(party, ["w1", "w2"], {"w1": 9, "w2": 8, "l1": 3, "l2": 1})
    assert len(aset) == 4
    assert all(a.level == "candidate" and a.kind == "within_party" for a in aset)
    t = Tallies({"w1": 9, "w2": 8, "l1": 3, "l2": 1}, {"P": 21}, 21, 5, 0)
    assert aset.all_hold(t)
    tied = Tallies({"w1": 9, "w2": 3, "l1": 3, "l2": 1}, {"P": 16}, 16, 5, 0)
    assert [a.label for a in aset.failing(tied)] == ["w2 > l1"]
    with pytest.raises(ValidationError):
        within_party_assertions(party, ["stranger"])
    with pytest.raises(ValidationError):
        within_party_assertions(party, ["w1"], {"w1": 1})


party_tallies = st.lists(st.integers(0, 40), min_size=2, max_size=4).map(
    lambda xs: {f"E{i}": x for i, x in enumerate(xs)}
)


@settings(max_examples=200, deadline=None)
@given(party_tallies, st.integers(1, 6))
def test_all_seats_holds_exactly_for_the_hamilton_outcome(per_party, seats):
    assume(sum(per_party.values()) > 0)
    try:
        truth = hamilton_oracle(per_party, seats)
    except Tie:
        truth = None
    t = T(per_party)
    parties = list(per_party)
    for combo in compositions(seats, len(parties)):
        reported = ReportedOutcome(dict(zip(parties, combo)))
        holds = hamilton_all_seats_assertions(reported, seats).all_hold(t)
        assert holds == (reported.party_seats == truth)


@settings(max_examples=200, deadline=None)
@given(party_tallies, st.integers(1, 6))
def test_abr_holds_for_true_floors_off_exact_quotas(per_party, seats):
    total = sum(per_party.values())
    assume(total > 0)
    assume(all((seats * x) % total for x in per_party.values() if x))
    assert hamilton_abr_assertions(T(per_party), seats).all_hold(T(per_party))


@settings(max_examples=150, deadline=None)
@given(party_tallies, st.integers(1, 6), st.sampled_from(["dhondt", "sainte_lague"]))
def test_dhondt_holds_exactly_for_the_true_allocation(per_party, seats, scheme):
    assume(sum(per_party.values()) > 0)
    divisors = dhondt_divisors(seats) if scheme == "dhondt" else sainte_lague_divisors(seats)
    try:
        truth = table_oracle(per_party, seats, divisors)
    except Tie:
        truth = None
    t = T(per_party)
    parties = list(per_party)
    for combo in compositions(seats, len(parties)):
        seats_map = dict(zip(parties, combo))
        alloc = HighestAveragesAllocation.from_seats(seats_map, seats)
        holds = dhondt_assertions(alloc, divisors).all_hold(t)
        assert holds == (seats_map == truth)


def test_abr_with_a_single_voted_party():
    t = T({"A": 12, "B": 0})
    aset = hamilton_abr_assertions(t, 3)
    (only,) = aset
    assert only.total_coeff == -1 and not aset.all_hold(t)
