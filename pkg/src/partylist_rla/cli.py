"""Command-line interface.

Exit status is 0 on success (or a certified audit), 2 when an audit ends in
a full hand count, and 1 on any error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .assertions import (
    AssertionSet,
    hamilton_abr_assertions,
    hamilton_all_seats_assertions,
    plurality_assertions,
    supermajority_assertion,
    within_party_assertions,
    dhondt_assertions,
)
from .assorters import VoteBounds, aggregate_mean, assorter_mean_margin, assorterize
from .errors import AuditError, ValidationError
from .io import (
    ElectionProfile,
    ReportRow,
    dumps_assertions,
    format_interpreted,
    load_profile,
    loads_assertions,
    render_csv,
    render_report,
    render_table,
    round_log_lines,
)
from .risk import RiskParams, contest_asn, estimate_asn, run_audit
from .social_choice import (
    HighestAveragesAllocation,
    hamilton_allocate,
    highest_averages_allocate,
)

MODES = ("all-seats", "abr", "dhondt", "within-party", "plurality", "supermajority", "all")
EXIT_OK, EXIT_ERROR, EXIT_FULL_COUNT = 0, 1, 2


def default_modes(kind: str) -> tuple[str, ...]:
    return {
        "hamilton_free_list": ("abr", "all-seats"),
        "highest_averages": ("dhondt",),
        "plurality": ("plurality",),
        "supermajority": ("supermajority",),
    }[kind]


def build_assertions(profile: ElectionProfile, mode: str) -> AssertionSet:
    """Assertions certifying the profile's reported (or computed) outcome."""
    spec = profile.contest
    kind = spec.scf_kind
    outcome = profile.outcome()
    if mode == "all":
        extra = ("within-party",) if kind in ("hamilton_free_list", "highest_averages") else ()
        out = AssertionSet()
        for m in default_modes(kind) + extra:
            out = out + build_assertions(profile, m)
        return out
    if mode == "all-seats" and kind == "hamilton_free_list":
        return hamilton_all_seats_assertions(outcome, spec.seats)
    if mode == "abr" and kind == "hamilton_free_list":
        return hamilton_abr_assertions(profile.tallies, spec.seats)
    if mode == "dhondt" and kind == "highest_averages":
        alloc = HighestAveragesAllocation.from_seats(outcome.party_seats, spec.seats)
        return dhondt_assertions(alloc, spec.divisors)
    if mode == "plurality" and kind == "plurality":
        (winner,) = [p for p, s in outcome.party_seats.items() if s]
        return plurality_assertions(winner, spec.party_ids)
    if mode == "supermajority" and kind == "supermajority":
        (winner,) = [p for p, s in outcome.party_seats.items() if s]
        return AssertionSet(
            [supermajority_assertion(winner, spec.threshold)], f"{winner} cleared the threshold"
        )
    if mode == "within-party" and kind in ("hamilton_free_list", "highest_averages"):
        winners = outcome.candidate_winners
        if winners is None:
            winners = profile.computed_outcome().candidate_winners
        out = AssertionSet()
        for p in spec.parties:
            if p.party_id in winners:
                out = out + within_party_assertions(p, winners[p.party_id], profile.tallies.per_candidate)
        return out
    raise ValidationError(f"mode {mode!r} does not apply to {kind} contests")


def _risks(args) -> list[float]:
    return args.risk or [0.05]


def _emit(args, header, rows):
    if args.format == "csv":
        sys.stdout.write(render_csv(header, rows))
    else:
        sys.stdout.write(render_table(header, rows))


# --- commands -------------------------------------------------------------


def cmd_interpret(args) -> int:
    profile = load_profile(args.profile)
    for b in profile.ballots:
        print(format_interpreted(b))
    rep = profile.interpretation
    reasons = ", ".join(f"{k}={v}" for k, v in sorted(rep.reasons.items()))
    print(f"# valid={rep.valid} invalid={rep.invalid}" + (f" ({reasons})" if reasons else ""),
          file=sys.stderr)
    return EXIT_OK


def cmd_tabulate(args) -> int:
    profile = load_profile(args.profile)
    t = profile.tallies
    rows = [("party", p, n) for p, n in t.per_party.items()]
    rows += [("candidate", c, n) for c, n in t.per_candidate.items()]
    rows += [
        ("total", "T_L", t.total_votes),
        ("total", "valid_ballots", t.valid_ballots),
        ("total", "invalid_ballots", t.invalid_ballots),
    ]
    _emit(args, ["level", "entity", "votes"], rows)
    return EXIT_OK


def cmd_allocate(args) -> int:
    profile = load_profile(args.profile)
    spec, t = profile.contest, profile.tallies
    if spec.scf_kind == "hamilton_free_list":
        alloc = hamilton_allocate(t, spec.seats)
        rows = [
            (p, t.per_party[p], alloc.floor_seats[p], alloc.remainders[p],
             int(p in alloc.remainder_winners), alloc.final_seats[p])
            for p in spec.party_ids
        ]
        header = ["party", "votes", "floor", "remainder", "extra", "seats"]
    elif spec.scf_kind == "highest_averages":
        alloc = highest_averages_allocate(t, spec.seats, spec.divisors)
        rows = [
            (p, t.per_party[p], alloc.seats[p], _opt(alloc.W[p]), _opt(alloc.L[p]))
            for p in spec.party_ids
        ]
        header = ["party", "votes", "seats", "W", "L"]
    else:
        raise ValidationError(f"allocate applies to seat-allocation contests, not {spec.scf_kind}")
    _emit(args, header, rows)
    return EXIT_OK


def _opt(x):
    return "-" if x is None else x


def cmd_assertions(args) -> int:
    profile = load_profile(args.profile)
    aset = build_assertions(profile, args.mode)
    text = dumps_assertions(aset, profile.contest.name)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _assertions_for(args, profile) -> AssertionSet:
    if getattr(args, "assertions", None):
        path = Path(args.assertions)
        return loads_assertions(path.read_text(encoding="utf-8"), source=path)
    return build_assertions(profile, args.mode)


def cmd_margins(args) -> int:
    profile = load_profile(args.profile)
    spec, tallies = profile.contest, profile.tallies
    bounds = VoteBounds.for_contest(spec)
    rows = []
    for a in _assertions_for(args, profile):
        mean, margin = assorter_mean_margin(assorterize(a, bounds), profile.ballots)
        closed = "-"
        if a.kind == "supermajority" and spec.scf_kind == "hamilton_free_list":
            (e,) = a.entity_coeffs
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                closed = aggregate_mean("abr", tallies, entity=e, t=-a.total_coeff,
                                        max_votes_per_ballot=spec.max_votes_per_ballot)
            for w in caught:
                print(f"warning: {a.label}: {w.message}", file=sys.stderr)
        elif a.kind in ("pairwise_diff", "pairwise") and spec.scf_kind == "hamilton_free_list":
            d = -a.total_coeff
            if d > -1 and spec.max_votes_per_ballot == spec.seats:
                pos, neg = sorted(a.entity_coeffs, key=lambda e: -a.entity_coeffs[e])
                closed = aggregate_mean("all_seats", tallies, entity=pos, other=neg, d=d, seats=spec.seats)
        rows.append((a.label, a.kind, mean, margin, float(margin), closed))
    _emit(args, ["assertion", "kind", "mean", "margin", "margin_float", "closed_form_mean"], rows)
    return EXIT_OK


def _asn_for_assertions(profile, aset, risks, args):
    bounds = VoteBounds.for_contest(profile.contest)
    N = len(profile.ballots)
    method = "simulate" if args.method == "sim" else "deterministic"
    out = []
    for a in aset:
        values = assorterize(a, bounds).float_values(profile.ballots)
        per_risk = {}
        for r in risks:
            est = estimate_asn(values, RiskParams(r, g_shift=args.g, population_size=N), method,
                               reps=args.reps, seed=args.seed, workers=args.workers)
            per_risk[r] = est
        out.append((a, values, per_risk))
    return out


def cmd_asn(args) -> int:
    profile = load_profile(args.profile)
    risks = _risks(args)
    aset = _assertions_for(args, profile)
    rows = []
    for a, values, per_risk in _asn_for_assertions(profile, aset, risks, args):
        rows.append([a.label, a.kind, 2 * float(values.mean()) - 1] + [per_risk[r].asn for r in risks])
    header = ["assertion", "kind", "margin"] + [f"ASN@{r!r}" for r in risks]
    _emit(args, header, rows)
    return EXIT_OK


def cmd_audit(args) -> int:
    profile = load_profile(args.profile)
    aset = _assertions_for(args, profile)
    params = RiskParams(args.risk, g_shift=args.g)
    result = run_audit(profile.ballots, aset, VoteBounds.for_contest(profile.contest), params,
                       seed=args.seed, round_size=args.round_size, max_rounds=args.max_rounds)
    if args.log:
        Path(args.log).write_text("".join(line + "\n" for line in round_log_lines(result)),
                                  encoding="utf-8")
    rows = [(label, p, "certified" if label in result.certified_at else "open",
             result.certified_at.get(label, "-"))
            for label, p in result.p_values.items()]
    _emit(args, ["assertion", "p_value", "status", "certified_after"], rows)
    print(f"# outcome={result.outcome} ballots_examined={result.ballots_examined} "
          f"rounds={len(result.rounds)}", file=sys.stderr)
    return EXIT_OK if result.certified else EXIT_FULL_COUNT


def report_rows(profile: ElectionProfile, risks, args) -> list[ReportRow]:
    spec = profile.contest
    rows = []
    for mode in args.mode or default_modes(spec.scf_kind):
        aset = build_assertions(profile, mode)
        per_risk = {r: [] for r in risks}
        for _, _, ests in _asn_for_assertions(profile, aset, risks, args):
            for r in risks:
                per_risk[r].append(ests[r])
        rows.append(ReportRow(
            spec.name, spec.seats, len(profile.ballots), len(spec.parties),
            profile.tallies.valid_ballots, mode, len(aset),
            {r: contest_asn(per_risk[r]) for r in risks},
        ))
    return rows


def cmd_report(args) -> int:
    risks = _risks(args)
    rows = []
    for path in args.profiles:
        rows.extend(report_rows(load_profile(path), risks, args))
    text, csv_text = render_report(rows, risks)
    if args.output:
        Path(args.output + ".txt").write_text(text, encoding="utf-8")
        Path(args.output + ".csv").write_text(csv_text, encoding="utf-8")
    sys.stdout.write(csv_text if args.format == "csv" else text)
    return EXIT_OK


# --- parser ---------------------------------------------------------------


def _add_format(p):
    p.add_argument("--format", choices=("text", "csv"), default="text")


def _add_mode(p, required=True):
    p.add_argument("--mode", choices=MODES, default="all" if required else None)


def _add_risk(p):
    p.add_argument("--g", type=float, default=0.1, help="Kaplan-Kolmogorov shift (default 0.1)")


def _add_asn_options(p):
    p.add_argument("--risk", type=float, action="append", help="risk limit; repeatable")
    p.add_argument("--method", choices=("sim", "det"), default="det")
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    _add_risk(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partylist-rla", description="Assertion-based risk-limiting audits of party-list elections."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interpret", help="interpret raw ballots")
    p.add_argument("profile")
    p.set_defaults(func=cmd_interpret)

    p = sub.add_parser("tabulate", help="tally votes")
    p.add_argument("profile")
    _add_format(p)
    p.set_defaults(func=cmd_tabulate)

    p = sub.add_parser("allocate", help="compute the seat allocation")
    p.add_argument("profile")
    _add_format(p)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("assertions", help="generate an assertion file")
    p.add_argument("profile")
    _add_mode(p)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_assertions)

    p = sub.add_parser("margins", help="assorter means and margins")
    p.add_argument("profile")
    _add_mode(p)
    p.add_argument("--assertions", help="assertion file to use instead of --mode")
    _add_format(p)
    p.set_defaults(func=cmd_margins)

    p = sub.add_parser("asn", help="estimate sample sizes per assertion")
    p.add_argument("profile")
    _add_mode(p)
    p.add_argument("--assertions")
    _add_asn_options(p)
    _add_format(p)
    p.set_defaults(func=cmd_asn)

    p = sub.add_parser("audit", help="run a ballot-polling audit on the profile's ballots")
    p.add_argument("profile")
    _add_mode(p)
    p.add_argument("--assertions")
    p.add_argument("--risk", type=float, default=0.05)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--round-size", type=int, default=1)
    p.add_argument("--max-rounds", type=int, default=None)
    p.add_argument("--log", help="write the round log (JSON lines) here")
    _add_risk(p)
    _add_format(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("report", help="sample-size table for one or more contests")
    p.add_argument("profiles", nargs="+")
    p.add_argument("--mode", choices=MODES, action="append")
    p.add_argument("--output", help="also write OUTPUT.txt and OUTPUT.csv")
    _add_asn_options(p)
    _add_format(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "method", None) == "sim" and args.seed is None:
        parser.error("--method sim needs an explicit --seed")
    try:
        return args.func(args)
    except (AuditError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
