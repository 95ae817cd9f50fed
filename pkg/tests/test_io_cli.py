import json
from fractions import Fraction
from pathlib import Path

import pytest

from partylist_rla import (
    InputFormatError,
    ParseError,
    ValidationError,
    load_profile,
    render_report,
)
from partylist_rla.cli import build_assertions, main
from partylist_rla.io import (
    ReportRow,
    dump_profile,
    dumps_assertions,
    format_ballot_line,
    format_number,
    loads_assertions,
    parse_ballot_line,
    profile_from_dict,
    read_ballot_lines,
)

DATA = Path(__file__).parent / "data"
HESSE = DATA / "hesse_small.profile"


def plurality_dict(**contest):
    c = {
        "name": "mayor",
        "scf_kind": "plurality",
        "seats": 1,
        "max_votes_per_candidate": 1,
        "max_votes_per_ballot": 1,
        "parties": [{"party_id": "A", "candidates": ["a"]}, {"party_id": "B", "candidates": ["b"]}],
    }
    c.update(contest)
    return {"contest": c, "ballots": ["1;a=1", "2;a=1", "3;b=1", "4;a=1,b=1", "5"]}


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_minimal_plurality_profile(tmp_path):
    prof = load_profile(write_json(tmp_path / "p.json", plurality_dict()))
    t = prof.tallies
    assert t.per_party == {"A": 2, "B": 1}
    assert (t.valid_ballots, t.invalid_ballots) == (4, 1)
    assert prof.interpretation.reasons["over_vote_ballot"] == 1
    assert prof.outcome().party_seats == {"A": 1, "B": 0}


def test_zero_seats_rejected(tmp_path):
    with pytest.raises(ValidationError):
        load_profile(write_json(tmp_path / "p.json", plurality_dict(seats=0)))


def test_missing_keys_and_bad_json(tmp_path):
    bad = plurality_dict()
    del bad["contest"]["seats"]
    with pytest.raises(ParseError):
        load_profile(write_json(tmp_path / "a.json", bad))
    (tmp_path / "b.json").write_text("{\n  \"contest\": ,\n}")
    with pytest.raises(ParseError) as err:
        load_profile(tmp_path / "b.json")
    assert err.value.line == 2


def test_ballot_line_errors_carry_location():
    with pytest.raises(ParseError) as err:
        read_ballot_lines(["# header", "ok;a=1", "bad;a=x"], source="f.ballots")
    assert err.value.line == 3 and err.value.field == "votes"
    assert "f.ballots" in str(err.value)
    for line in (";a=1", "x;a", "x;a=-1", "x;a=1,a=2", "x;;;;extra"):
        with pytest.raises(ParseError):
            parse_ballot_line(line)


def test_ballot_line_round_trip():
    for line in ("h1", "h2;g1=2,b1=1", "h3;;g2,g3;Green", "h4;r1=1;;Red"):
        assert format_ballot_line(parse_ballot_line(line)) == line


def test_plain_contest_rejects_free_list_markings(tmp_path):
    data = plurality_dict()
    data["ballots"] = ["1;;;A"]
    with pytest.raises(InputFormatError):
        load_profile(write_json(tmp_path / "p.json", data))


def test_duplicate_ids_and_bad_report(tmp_path):
    data = plurality_dict()
    data["ballots"] = ["1;a=1", "1;b=1"]
    with pytest.raises(ValidationError):
        profile_from_dict(data)
    data = plurality_dict()
    data["reported"] = {"party_seats": {"A": 1, "B": 1}}
    with pytest.raises(ValidationError):
        profile_from_dict(data)


def test_hesse_fixture_matches_golden_tallies():
    prof = load_profile(HESSE)
    golden = json.loads((DATA / "hesse_small.tallies.json").read_text())
    t = prof.tallies
    assert len(prof.ballots) == 200
    assert t.per_candidate == golden["per_candidate"]
    assert t.per_party == golden["per_party"]
    assert t.total_votes == golden["total_votes"]
    assert (t.valid_ballots, t.invalid_ballots) == (golden["valid_ballots"], golden["invalid_ballots"])


def test_profile_round_trip(tmp_path):
    prof = load_profile(HESSE)
    prof.reported = prof.computed_outcome()
    dump_profile(prof, tmp_path / "copy.json")
    again = load_profile(tmp_path / "copy.json")
    assert again == prof
    dump_profile(again, tmp_path / "copy2.json")
    assert (tmp_path / "copy.json").read_text() == (tmp_path / "copy2.json").read_text()


def test_highest_averages_profile_round_trip(tmp_path):
    data = plurality_dict(scf_kind="highest_averages", seats=3, divisors="sainte_lague", max_votes_per_ballot=2)
    data["ballots"] = ["1;a=1,b=1", "2;a=1", "3;b=1"]
    src = write_json(tmp_path / "ha.json", data)
    prof = load_profile(src)
    assert list(prof.contest.divisors) == [1, 3, 5]
    dump_profile(prof, tmp_path / "ha2.json")
    assert load_profile(tmp_path / "ha2.json") == prof


def test_assertion_file_round_trip():
    prof = load_profile(HESSE)
    aset = build_assertions(prof, "all")
    text = dumps_assertions(aset, "hesse_small")
    back = loads_assertions(text)
    assert [a for a in back] == [a for a in aset]
    assert back.sufficiency_note == aset.sufficiency_note
    with pytest.raises(ParseError):
        loads_assertions("{not json")


def test_format_number():
    assert format_number(float("inf")) == "inf"
    assert format_number(33.0) == "33"
    assert format_number(12.5) == "12.5"
    assert format_number(Fraction(1, 3)) == "1/3"


def test_render_report_shapes():
    text, csv_text = render_report([], [0.05])
    assert text.count("\n") == 1 and csv_text.count("\n") == 1
    assert csv_text.strip().endswith("ASN@0.05")
    row = ReportRow("X", 3, 10, 2, 9, "abr", 2, {0.05: 7.0, 0.1: float("inf")})
    text, csv_text = render_report([row], [0.05, 0.1])
    header, line = csv_text.strip().split("\n")
    assert header.split(",")[-2:] == ["ASN@0.05", "ASN@0.1"]
    assert line.split(",")[-2:] == ["7", "inf"]


def test_report_matches_golden(tmp_path, capsys):
    out = tmp_path / "rep"
    assert main(["report", str(HESSE), "--risk", "0.05", "--risk", "0.1", "--output", str(out)]) == 0
    assert (tmp_path / "rep.txt").read_bytes() == (DATA / "hesse_small.report.txt").read_bytes()
    assert (tmp_path / "rep.csv").read_bytes() == (DATA / "hesse_small.report.csv").read_bytes()
    assert capsys.readouterr().out == (DATA / "hesse_small.report.txt").read_text()


def test_margins_closed_form_matches_per_ballot(capsys):
    assert main(["margins", str(HESSE), "--mode", "all-seats", "--format", "csv"]) == 0
    rows = capsys.readouterr().out.strip().split("\n")[1:]
    checked = 0
    for row in rows:
        label, kind, mean, margin, _, closed = row.split(",")
        assert Fraction(margin) == 2 * Fraction(mean) - 1
        if closed != "-":
            assert Fraction(closed) == Fraction(mean)
            checked += 1
    assert checked > 0


def test_cli_commands_run(capsys, tmp_path):
    assert main(["interpret", str(HESSE)]) == 0
    out = capsys.readouterr()
    assert out.out.count("\n") == 200 and "invalid=11" in out.err
    assert main(["tabulate", str(HESSE), "--format", "csv"]) == 0
    assert "party,Green,364" in capsys.readouterr().out
    assert main(["allocate", str(HESSE)]) == 0
    assert "175/201" in capsys.readouterr().out
    path = tmp_path / "a.json"
    assert main(["assertions", str(HESSE), "--mode", "abr", "-o", str(path)]) == 0
    assert len(loads_assertions(path.read_text())) == 2
    assert main(["asn", str(HESSE), "--assertions", str(path), "--risk", "0.05", "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("assertion,kind,margin,ASN@0.05")


def test_cli_exit_codes(tmp_path, capsys):
    log = tmp_path / "log.jsonl"
    assert main(["audit", str(HESSE), "--seed", "1", "--risk", "0.1", "--mode", "abr", "--log", str(log)]) == 0
    first = json.loads(log.read_text().splitlines()[0])
    assert first["round"] == 1 and len(first["drawn"]) == 1
    # a reported outcome that is wrong can never certify
    data = json.loads(HESSE.read_text())
    data["ballot_file"] = str(DATA / "hesse_small.ballots")
    data["reported"] = {"party_seats": {"Green": 3, "Blue": 1, "Red": 0, "Gold": 1}}
    wrong = write_json(tmp_path / "wrong.json", data)
    assert main(["audit", str(wrong), "--seed", "1", "--mode", "all-seats", "--round-size", "20"]) == 2
    assert "full_count" in capsys.readouterr().err
    assert main(["tabulate", str(tmp_path / "missing.json")]) == 1
    assert main(["assertions", str(HESSE), "--mode", "dhondt"]) == 1
    with pytest.raises(SystemExit):
        main(["asn", str(HESSE), "--method", "sim"])
    with pytest.raises(SystemExit):
        main(["audit", str(HESSE)])


def test_seeded_commands_are_repeatable(capsys):
    outs = []
    for _ in range(2):
        main(["audit", str(HESSE), "--seed", "7", "--format", "csv"])
        main(["asn", str(HESSE), "--method", "sim", "--reps", "5", "--seed", "3", "--format", "csv"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
