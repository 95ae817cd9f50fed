"""Profile, ballot, assertion and report file formats.

Profiles and assertion files are JSON. Exact rationals are written as
strings such as ``"2/5"``. Ballot files hold one ballot per line::

    id;candidate=count,candidate=count;crossed,crossed;party

Trailing fields may be omitted; blank lines and lines starting with ``#``
are ignored.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .assertions import AssertionSet, LinearAssertion
from .core import (
    DIVISOR_SCHEMES,
    ContestSpec,
    InterpretedBallot,
    PartyList,
    ReportedOutcome,
    Tallies,
    tallies_from_ballots,
)
from .errors import InputFormatError, ParseError, TieError, ValidationError
from .hesse import InterpretationReport, RawBallot, interpret_all
from .social_choice import (
    hamilton_allocate,
    highest_averages_allocate,
    plurality_winner,
    within_party_winners,
)

# --- ballot lines ---------------------------------------------------------


def parse_ballot_line(line: str, *, source=None, lineno=None) -> RawBallot:
    parts = [p.strip() for p in line.split(";")]
    if len(parts) > 4:
        raise ParseError("too many fields", source=source, line=lineno)
    parts += [""] * (4 - len(parts))
    ballot_id, votes, crossed, party = parts
    if not ballot_id:
        raise ParseError("missing ballot id", source=source, line=lineno, field="id")
    direct = {}
    for item in filter(None, (v.strip() for v in votes.split(","))):
        cand, sep, count = item.partition("=")
        cand = cand.strip()
        if not sep or not cand:
            raise ParseError(f"expected candidate=count, got {item!r}", source=source, line=lineno, field="votes")
        try:
            n = int(count)
        except ValueError:
            raise ParseError(f"bad vote count {count!r}", source=source, line=lineno, field="votes") from None
        if n < 0:
            raise ParseError(f"negative vote count for {cand!r}", source=source, line=lineno, field="votes")
        if cand in direct:
            raise ParseError(f"candidate {cand!r} listed twice", source=source, line=lineno, field="votes")
        direct[cand] = n
    crossed_out = frozenset(filter(None, (c.strip() for c in crossed.split(","))))
    return RawBallot(ballot_id, direct, crossed_out, party or None)


def format_ballot_line(raw: RawBallot) -> str:
    votes = ",".join(f"{c}={n}" for c, n in raw.direct_votes.items())
    crossed = ",".join(sorted(raw.crossed_out))
    fields = [raw.ballot_id, votes, crossed, raw.party_selection or ""]
    while len(fields) > 1 and not fields[-1]:
        fields.pop()
    return ";".join(fields)


def read_ballot_lines(lines: Iterable[str], source=None) -> list[RawBallot]:
    out = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_ballot_line(line, source=source, lineno=lineno))
    return out


def format_interpreted(ballot: InterpretedBallot) -> str:
    votes = ",".join(f"{c}={n}" for c, n in ballot.votes.items())
    return f"{ballot.ballot_id};{'valid' if ballot.valid else 'invalid'};{votes}"


def interpret_plain(raws: Sequence[RawBallot], spec: ContestSpec):
    """Interpretation for contests without free-list rules.

    A ballot is spoiled when it gives some candidate more than ``m`` votes
    or carries more than ``m_L`` in total.
    """
    known = spec.party_of
    report = InterpretationReport()
    out = []
    for raw in raws:
        if raw.crossed_out or raw.party_selection:
            raise InputFormatError(
                f"ballot {raw.ballot_id!r}: crossing out and party selection only apply to free lists"
            )
        unknown = [c for c in raw.direct_votes if c not in known]
        if unknown:
            raise InputFormatError(f"ballot {raw.ballot_id!r}: unknown candidates {unknown}")
        reason = None
        if any(v > spec.max_votes_per_candidate for v in raw.direct_votes.values()):
            reason = "over_vote_per_candidate"
        elif sum(raw.direct_votes.values()) > spec.max_votes_per_ballot:
            reason = "over_vote_ballot"
        if reason:
            report.invalid += 1
            report.reasons[reason] += 1
            out.append(InterpretedBallot.invalid(raw.ballot_id))
        else:
            report.valid += 1
            out.append(InterpretedBallot(raw.ballot_id, raw.direct_votes))
    return out, report


# --- profiles -------------------------------------------------------------


def _fraction(value, where) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {value!r}", field=where) from None


def _to_str(q: Fraction) -> str:
    return str(Fraction(q))


@dataclass
class ElectionProfile:
    contest: ContestSpec
    raw_ballots: list[RawBallot]
    reported: Optional[ReportedOutcome] = None
    ballots: list[InterpretedBallot] = field(default_factory=list, compare=False, repr=False)
    interpretation: InterpretationReport = field(
        default_factory=InterpretationReport, compare=False, repr=False
    )

    def __post_init__(self):
        if self.contest.scf_kind == "hamilton_free_list":
            self.ballots, self.interpretation = interpret_all(self.raw_ballots, self.contest)
        else:
            self.ballots, self.interpretation = interpret_plain(self.raw_ballots, self.contest)
        ids = [b.ballot_id for b in self.raw_ballots]
        if len(set(ids)) != len(ids):
            raise ValidationError("ballot ids must be unique")
        if self.reported is not None:
            self.reported.check_seats(self.contest.seats)
            unknown = set(self.reported.party_seats) - set(self.contest.party_ids)
            if unknown:
                raise ValidationError(f"reported outcome names unknown parties {sorted(unknown)}")
        self._tallies = None

    @property
    def tallies(self) -> Tallies:
        if self._tallies is None:
            self._tallies = tallies_from_ballots(self.ballots, self.contest)
        return self._tallies

    def computed_outcome(self) -> ReportedOutcome:
        """The outcome the ballots actually produce, with candidate winners
        for every party whose within-party ranking is not tied."""
        spec, tallies = self.contest, self.tallies
        if spec.scf_kind == "hamilton_free_list":
            alloc = hamilton_allocate(tallies, spec.seats)
            seats, floors = alloc.final_seats, alloc.floor_seats
        elif spec.scf_kind == "highest_averages":
            seats = highest_averages_allocate(tallies, spec.seats, spec.divisors).seats
            floors = None
        else:
            winner = plurality_winner(tallies)
            return ReportedOutcome({p: int(p == winner) for p in spec.party_ids})
        winners = {}
        for p in spec.parties:
            cands = {c: tallies.per_candidate[c] for c in p.candidates}
            if seats[p.party_id] > len(cands):
                continue
            try:
                winners[p.party_id] = within_party_winners(cands, seats[p.party_id])
            except TieError:
                pass
        return ReportedOutcome(dict(seats), floors, winners)

    def outcome(self) -> ReportedOutcome:
        return self.reported if self.reported is not None else self.computed_outcome()


def contest_from_dict(data: dict) -> ContestSpec:
    try:
        parties = [PartyList(p["party_id"], tuple(p["candidates"])) for p in data["parties"]]
        seats = data["seats"]
        divisors = data.get("divisors")
        if isinstance(divisors, str):
            if divisors not in DIVISOR_SCHEMES:
                raise ParseError(f"unknown divisor scheme {divisors!r}", field="divisors")
            divisors = DIVISOR_SCHEMES[divisors](seats)
        elif divisors is not None:
            divisors = [_fraction(d, "divisors") for d in divisors]
        threshold = data.get("threshold")
        if threshold is not None:
            threshold = _fraction(threshold, "threshold")
        return ContestSpec(
            name=data["name"],
            scf_kind=data["scf_kind"],
            seats=seats,
            max_votes_per_candidate=data["max_votes_per_candidate"],
            max_votes_per_ballot=data["max_votes_per_ballot"],
            parties=parties,
            divisors=divisors,
            threshold=threshold,
        )
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}", field="contest") from None
    except TypeError as exc:
        raise ParseError(str(exc), field="contest") from None


def contest_to_dict(spec: ContestSpec) -> dict:
    out = {
        "name": spec.name,
        "scf_kind": spec.scf_kind,
        "seats": spec.seats,
        "max_votes_per_candidate": spec.max_votes_per_candidate,
        "max_votes_per_ballot": spec.max_votes_per_ballot,
        "parties": [{"party_id": p.party_id, "candidates": list(p.candidates)} for p in spec.parties],
    }
    if spec.divisors is not None:
        out["divisors"] = [_to_str(d) for d in spec.divisors]
    if spec.threshold is not None:
        out["threshold"] = _to_str(spec.threshold)
    return out


def reported_from_dict(data: dict) -> ReportedOutcome:
    winners = data.get("candidate_winners")
    return ReportedOutcome(
        dict(data["party_seats"]),
        dict(data["floor_seats"]) if data.get("floor_seats") is not None else None,
        {p: frozenset(w) for p, w in winners.items()} if winners is not None else None,
    )


def reported_to_dict(rep: ReportedOutcome) -> dict:
    out = {"party_seats": dict(rep.party_seats)}
    if rep.floor_seats is not None:
        out["floor_seats"] = dict(rep.floor_seats)
    if rep.candidate_winners is not None:
        out["candidate_winners"] = {p: sorted(w) for p, w in rep.candidate_winners.items()}
    return out


def profile_from_dict(data: dict, base_dir: Optional[Path] = None, source=None) -> ElectionProfile:
    if "contest" not in data:
        raise ParseError("missing key 'contest'", source=source)
    contest = contest_from_dict(data["contest"])
    if "ballots" in data:
        raws = read_ballot_lines(data["ballots"], source=source)
    elif "ballot_file" in data:
        path = Path(data["ballot_file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        with open(path, encoding="utf-8") as fh:
            raws = read_ballot_lines(fh, source=path)
    else:
        raise ParseError("profile needs 'ballots' or 'ballot_file'", source=source)
    reported = reported_from_dict(data["reported"]) if data.get("reported") else None
    return ElectionProfile(contest, raws, reported)


def profile_to_dict(profile: ElectionProfile) -> dict:
    out = {"contest": contest_to_dict(profile.contest)}
    if profile.reported is not None:
        out["reported"] = reported_to_dict(profile.reported)
    out["ballots"] = [format_ballot_line(b) for b in profile.raw_ballots]
    return out


def load_profile(path) -> ElectionProfile:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=path, line=exc.lineno) from None
    return profile_from_dict(data, base_dir=path.parent, source=path)


def dump_profile(profile: ElectionProfile, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(profile_to_dict(profile), fh, indent=2)
        fh.write("\n")


# --- assertion files ------------------------------------------------------


def assertion_to_dict(a: LinearAssertion) -> dict:
    return {
        "label": a.label,
        "kind": a.kind,
        "level": a.level,
        "entity_coeffs": {e: _to_str(c) for e, c in a.entity_coeffs.items()},
        "total_coeff": _to_str(a.total_coeff),
    }


def assertion_from_dict(data: dict) -> LinearAssertion:
    try:
        return LinearAssertion(
            {e: _fraction(c, "entity_coeffs") for e, c in data["entity_coeffs"].items()},
            _fraction(data["total_coeff"], "total_coeff"),
            data["label"],
            data["kind"],
            data.get("level", "party"),
        )
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}", field="assertions") from None


def dumps_assertions(aset: AssertionSet, contest: str = "") -> str:
    data = {
        "contest": contest,
        "sufficiency_note": aset.sufficiency_note,
        "assertions": [assertion_to_dict(a) for a in aset],
    }
    return json.dumps(data, indent=2) + "\n"


def loads_assertions(text: str, source=None) -> AssertionSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=source, line=exc.lineno) from None
    return AssertionSet(
        [assertion_from_dict(a) for a in data.get("assertions", [])],
        data.get("sufficiency_note", ""),
    )


# --- reports --------------------------------------------------------------


def format_number(x) -> str:
    """Machine-stable rendering: ``inf`` for infinity, integers without a
    decimal point, other floats by ``repr``."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        if x.is_integer():
            return str(int(x))
        return repr(x)
    return str(x)


def _human(x) -> str:
    if isinstance(x, float) and not math.isinf(x) and not x.is_integer():
        return f"{x:,.1f}"
    if isinstance(x, float) and x.is_integer():
        return f"{int(x):,}"
    return format_number(x)


REPORT_COLUMNS = ["contest", "S", "ballots", "parties", "valid", "mode", "assertions"]


@dataclass
class ReportRow:
    contest: str
    seats: int
    ballots: int
    parties: int
    valid: int
    mode: str
    assertions: int
    asn: dict  # risk limit -> ASN

    def cells(self, risks):
        return [self.contest, self.seats, self.ballots, self.parties, self.valid, self.mode,
                self.assertions] + [self.asn.get(r, math.inf) for r in risks]


def render_table(header: Sequence[str], rows: Sequence[Sequence], fmt=format_number) -> str:
    """Right-aligned text table; first column left-aligned."""
    cells = [list(header)] + [[fmt(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    for row in cells:
        parts = [
            row[i].ljust(widths[i]) if i == 0 else row[i].rjust(widths[i]) for i in range(len(row))
        ]
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines) + "\n"


def render_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_number(c) for c in row])
    return buf.getvalue()


def render_report(rows: Sequence[ReportRow], risks: Optional[Sequence[float]] = None):
    """Text and CSV renderings of a sample-size table.

    Rows are sorted by contest name then mode. Returns ``(text, csv_text)``.
    """
    if risks is None:
        risks = sorted({r for row in rows for r in row.asn})
    header = REPORT_COLUMNS + [f"ASN@{format_number(float(r))}" for r in risks]
    ordered = sorted(rows, key=lambda r: (r.contest, r.mode))
    body = [r.cells(risks) for r in ordered]
    return render_table(header, body, fmt=_human), render_csv(header, body)


def round_log_lines(result) -> list[str]:
    """One JSON object per audit round."""
    return [
        json.dumps(
            {"round": r.number, "drawn": r.drawn, "p_values": r.p_values}, sort_keys=False
        )
        for r in result.rounds
    ]
