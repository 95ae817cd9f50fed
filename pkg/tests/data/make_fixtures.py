"""Regenerate the hesse_small fixtures.

    python3 tests/data/make_fixtures.py            # ballots, profile, golden tallies
    python3 tests/data/make_fixtures.py --report   # also refresh the golden report

Golden tallies come from a standalone free-list interpreter written out below,
not from the package.
"""

import json
import random
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent

SEATS, PER_CANDIDATE = 5, 3
PARTIES = {
    "Green": ["g1", "g2", "g3", "g4"],
    "Blue": ["b1", "b2", "b3"],
    "Red": ["r1", "r2"],
    "Gold": ["o1"],
}
SEED, N_BALLOTS = 20240917, 200


def make_ballots(rng):
    cands = [c for cs in PARTIES.values() for c in cs]
    lean = ["Green"] * 9 + ["Blue"] * 6 + ["Red"] * 3 + ["Gold"] * 2
    lines = []
    for i in range(N_BALLOTS):
        direct = {}
        for c in rng.sample(cands, rng.choice([0, 0, 1, 1, 2])):
            direct[c] = rng.randint(1, PER_CANDIDATE)
        if rng.random() < 0.03:
            direct[rng.choice(cands)] = PER_CANDIDATE + 1
        crossed = sorted(c for c in cands if c not in direct and rng.random() < 0.08)
        party = rng.choice(lean) if rng.random() < 0.85 else ""
        votes = ",".join(f"{c}={n}" for c, n in direct.items())
        fields = [f"h{i:03d}", votes, ",".join(crossed), party]
        while len(fields) > 1 and not fields[-1]:
            fields.pop()
        lines.append(";".join(fields))
    return lines


def oracle_interpret(line):
    parts = (line.split(";") + ["", "", ""])[:4]
    _, votes, crossed, party = parts
    direct = {}
    for item in filter(None, votes.split(",")):
        c, n = item.split("=")
        direct[c] = int(n)
    crossed = set(filter(None, crossed.split(",")))
    if any(n > PER_CANDIDATE for n in direct.values()):
        return None
    if sum(direct.values()) > SEATS:
        return None
    if any(direct.get(c, 0) > 0 for c in crossed):
        return None
    if party and party not in PARTIES:
        return None
    out = dict(direct)
    if party:
        left = SEATS - sum(direct.values())
        order = [c for c in PARTIES[party] if c not in crossed]
        k = 0
        while left > 0 and order:
            out[order[k % len(order)]] = out.get(order[k % len(order)], 0) + 1
            left -= 1
            k += 1
    return out


def golden_tallies(lines):
    per_cand = {c: 0 for cs in PARTIES.values() for c in cs}
    valid = invalid = 0
    for line in lines:
        got = oracle_interpret(line)
        if got is None:
            invalid += 1
            continue
        valid += 1
        for c, n in got.items():
            per_cand[c] += n
    per_party = {p: sum(per_cand[c] for c in cs) for p, cs in PARTIES.items()}
    return {
        "per_candidate": per_cand,
        "per_party": per_party,
        "total_votes": sum(per_party.values()),
        "valid_ballots": valid,
        "invalid_ballots": invalid,
    }


def main():
    lines = make_ballots(random.Random(SEED))
    (HERE / "hesse_small.ballots").write_text(
        "# id;direct votes;crossed out;party selection\n" + "\n".join(lines) + "\n"
    )
    profile = {
        "contest": {
            "name": "hesse_small",
            "scf_kind": "hamilton_free_list",
            "seats": SEATS,
            "max_votes_per_candidate": PER_CANDIDATE,
            "max_votes_per_ballot": SEATS,
            "parties": [{"party_id": p, "candidates": cs} for p, cs in PARTIES.items()],
        },
        "ballot_file": "hesse_small.ballots",
    }
    (HERE / "hesse_small.profile").write_text(json.dumps(profile, indent=2) + "\n")
    (HERE / "hesse_small.tallies.json").write_text(json.dumps(golden_tallies(lines), indent=2) + "\n")
    if "--report" in sys.argv:
        subprocess.run(
            [sys.executable, "-m", "partylist_rla", "report", str(HERE / "hesse_small.profile"),
             "--risk", "0.05", "--risk", "0.1", "--output", str(HERE / "hesse_small.report")],
            check=True,
            stdout=subprocess.DEVNULL,
        )


if __name__ == "__main__":
    main()
