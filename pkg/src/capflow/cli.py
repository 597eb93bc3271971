"""Batch front door: validate, report, allocate, preview, export, serve.

All output is deterministic for a fixed snapshot. Tables are aligned
plain text; ``--json`` switches to canonical JSON so scripts never parse
tables. Only ``--write`` mutates the snapshot file.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from typing import Sequence

from . import allocator, balance, ballots, oracle, store, workflow
from .errors import CapflowError


def _fmt_ratio(ratio: float | None) -> str:
    return "n/a" if ratio is None else f"{ratio:.3f}"


def _balance_table(semester) -> str:
    report = balance.coverage(semester.proposals.values(), semester.students.values(), semester.config)
    lines = [f"{'program':<10}{'students':>10}{'necessary':>11}{'seats':>8}{'coverage':>10}"]
    for code in semester.config.program_codes():
        row = report.per_program[code]
        lines.append(
            f"{code:<10}{row.enrolled_students:>10}{row.necessary_projects:>11}"
            f"{row.supplied_seats:>8}{_fmt_ratio(row.coverage_ratio):>10}"
        )
    t = report.total
    lines.append(
        f"total: students: {t.enrolled_students}, necessary projects: {t.necessary_projects}, "
        f"seats: {t.supplied_seats}, coverage: {_fmt_ratio(t.coverage_ratio)}"
    )
    gaps = balance.sourcing_gaps(semester.students.values(), semester.proposals.values())
    flagged = [g for g in gaps if g.gap_flag]
    if flagged:
        lines.append("sourcing gaps (student interest without any proposal):")
        for g in flagged:
            lines.append(f"  {g.area}: {g.student_interest_count} interested, 0 proposals")
    return "\n".join(lines)


def _demand_table(semester) -> str:
    approved = [pid for pid, p in semester.proposals.items() if p.status == "approved"]
    stats = ballots.demand_stats(semester.ballots.values(), approved)
    lines = [f"{'proposal':<12}{'first':>7}{'top3':>7}{'mentions':>10}"]
    for s in stats:
        lines.append(f"{s.proposal_id:<12}{s.first_choice_count:>7}{s.top3_count:>7}{s.total_mentions:>10}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="capflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="schema + integrity check, exit 0/1")
    p.add_argument("snapshot")

    p = sub.add_parser("balance", help="per-program demand/supply report")
    p.add_argument("snapshot")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("demand", help="per-proposal ballot demand")
    p.add_argument("snapshot")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("allocate", help="run the group-formation heuristic")
    p.add_argument("snapshot")
    p.add_argument("--seed", type=int, default=None, help="rng seed override (default policy ignores it)")
    p.add_argument("--write", action="store_true", help="store the allocation into the snapshot")

    p = sub.add_parser("whatif", help="preview a manual move")
    p.add_argument("snapshot")
    p.add_argument("--student", required=True)
    p.add_argument("--to", required=True, help="target proposal id, or 'unassigned'")

    p = sub.add_parser("oracle", help="exact optimum for small instances")
    p.add_argument("snapshot")

    p = sub.add_parser("export", help="canonical allocation export")
    p.add_argument("snapshot")
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("snapshot")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--ui", default=None, help="built frontend directory to mount at /ui")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except CapflowError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "validate":
        store.load(args.snapshot)
        print("ok")
        return 0

    if args.command == "balance":
        semester = store.load(args.snapshot)
        if args.json:
            report = balance.coverage(semester.proposals.values(), semester.students.values(), semester.config)
            print(store.canonical_json(asdict(report)), end="")
        else:
            print(_balance_table(semester))
        return 0

    if args.command == "demand":
        semester = store.load(args.snapshot)
        if args.json:
            approved = [pid for pid, p in semester.proposals.items() if p.status == "approved"]
            stats = ballots.demand_stats(semester.ballots.values(), approved)
            print(store.canonical_json([asdict(s) for s in stats]), end="")
        else:
            print(_demand_table(semester))
        return 0

    if args.command == "allocate":
        semester = store.load(args.snapshot)
        config = semester.config
        if args.seed is not None:
            from dataclasses import replace

            config = replace(config, rng_seed=args.seed)
        allocation = allocator.allocate(semester.instance(), config)
        print(store.canonical_json(store.allocation_to_dict(allocation)), end="")
        if args.write:
            workflow.require_gate("allocate", semester.phase)
            semester.allocation = allocation
            semester.bump()
            store.save(semester, args.snapshot)
        return 0

    if args.command == "whatif":
        semester = store.load(args.snapshot)
        if semester.allocation is None:
            semester.allocation = allocator.allocate(semester.instance(), semester.config)
        target = None if args.to == "unassigned" else args.to
        preview = allocator.what_if_move(
            semester.allocation, args.student, target, semester.instance(), semester.config
        )
        print(store.canonical_json(asdict(preview)), end="")
        return 0

    if args.command == "oracle":
        semester = store.load(args.snapshot)
        best = oracle.exact_allocate(semester.instance(), semester.config)
        print(store.canonical_json(store.allocation_to_dict(best)), end="")
        return 0

    if args.command == "export":
        semester = store.load(args.snapshot)
        payload = store.export_allocation(semester)
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
        print(f"wrote {args.out}")
        return 0

    if args.command == "serve":
        from .api import serve

        serve(args.snapshot, args.bind, args.ui)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
