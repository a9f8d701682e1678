"""Command-line surface.

Subcommands:

- ``stats <perm>``: every statistic of one permutation.
- ``verify --n N [--from R --to R] [--jobs J] [--census]``: audit a rank
  range of S_N; exit 1 when a counterexample turns up.
- ``word <perm>``: the canonical reduced word, with a round-trip check.
- ``witness <perm>``: blocking-pattern occurrences at the top level and the
  sub-occurrences certifying the strict count gap.
- ``oracle --max-n N``: recheck support well-definedness against every
  reduced word of every permutation up to N.

Exit codes: 0 verified/ok, 1 counterexample found, 2 usage or parse error.
Output is text by default; ``--format json`` (and ``csv`` for verify) emits
the machine schema.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

from . import enumerate as sweeps
from .bijection import phi_witness, verify_level, verify_main, xi
from .patterns import PHI, occurrences, patt_321_3412
from .perm_core import MalformedPermutationError, Permutation
from .reduced_words import (
    DEFAULT_ORACLE_BOUND,
    canonical_word,
    check_support_well_defined,
    evaluate,
    format_word,
)

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2


def _parse_perm_or_exit(text: str) -> Permutation:
    # MalformedPermutationError is translated to exit code 2 in main()
    return Permutation.parse(text)


def _emit(doc: dict, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def cmd_stats(args) -> int:
    w = _parse_perm_or_exit(args.perm)
    n = len(w)
    total, per_top = patt_321_3412(w)
    main = verify_main(w)
    doc = {
        "w": str(w),
        "n": n,
        "length": w.length(),
        "support": sorted(w.support()),
        "rep": w.rep(),
        "patt": total,
        "patt_by_top": {str(k): v for k, v in per_top.items()},
        "count_321": main.count_321,
        "count_3412": main.count_3412,
        "avoids_phi": main.avoids_phi,
        "verdict": main.verdict,
        "ok": main.ok,
    }
    lines = [
        f"w          : {w}",
        f"length     : {doc['length']}",
        f"support    : {{{', '.join(map(str, doc['support']))}}}",
        f"rep        : {doc['rep']}",
        f"[321;3412] : {total} (by top: "
        + ", ".join(f"{k}->{v}" for k, v in per_top.items())
        + (")" if per_top else "none)"),
        f"avoids phi : {main.avoids_phi}",
        f"verdict    : rep {'=' if main.verdict == 'equal' else '<'} patt",
    ]
    if n >= 2:
        level = verify_level(w)
        doc["repeat"] = list(level.repeat)
        doc["xi"] = list(level.xi_rows)
        doc["level_ok"] = level.ok
        lines.append(f"repeat     : {{{', '.join(map(str, level.repeat))}}}")
        for row in level.xi_rows:
            vals = "".join(map(str, row["values"])) if n <= 9 else str(row["values"])
            lines.append(f"  xi {row['k']} -> {vals}  (case {row['case']})")
    _emit(doc, args.format, lines)
    return EXIT_OK if main.ok else EXIT_COUNTEREXAMPLE


def cmd_verify(args) -> int:
    try:
        report = sweeps.run_campaign(
            args.n, jobs=args.jobs, from_rank=args.from_rank, to_rank=args.to_rank
        )
    except (sweeps.RankRangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.format == "csv":
        buf = io.StringIO()
        sweeps.write_census_csv([report], buf)
        print(buf.getvalue(), end="")
    else:
        doc = report.to_json()
        lines = [
            f"n={report.n} checked={report.checked} "
            f"range=[{report.from_rank},{report.to_rank})",
            f"equal={report.equal_count} strict={report.strict_count}",
            f"failures={len(report.failures)}",
            f"wall_time={report.wall_time:.2f}s",
        ]
        if args.census:
            lines.insert(1, f"avoiders={report.avoider_count}")
        else:
            doc.pop("avoider_count", None)
        _emit(doc, args.format, lines)
    if report.failures:
        first = report.failures[0]
        print(
            f"counterexample: w={first['w']} check={first['check']} "
            f"detail={first['detail']}",
            file=sys.stderr,
        )
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_word(args) -> int:
    w = _parse_perm_or_exit(args.perm)
    word = canonical_word(w)
    round_trip = evaluate(word) == w
    doc = {
        "w": str(w),
        "word": format_word(word),
        "length": len(word),
        "round_trip": round_trip,
    }
    _emit(doc, args.format, [format_word(word)])
    if not round_trip:  # unreachable unless the library is broken
        print("error: canonical word does not evaluate back", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_witness(args) -> int:
    w = _parse_perm_or_exit(args.perm)
    n = len(w)
    image = xi(w).image() if n >= 2 else frozenset()
    rows = []
    for p in PHI:
        for occ in occurrences(w, p):
            if occ.top != n:
                continue
            wit = phi_witness(w, occ)
            rows.append(
                {
                    "phi": "".join(map(str, p.values)),
                    "occurrence": list(occ.values),
                    "witness": list(wit.values),
                    "witness_pattern": "".join(map(str, wit.pattern)),
                    "outside_image": wit.values not in image,
                }
            )
            break  # first occurrence per pattern is enough
    doc = {"w": str(w), "n": n, "has_phi_top": bool(rows), "witnesses": rows}
    if rows:
        lines = [
            f"{r['phi']}: occurrence {r['occurrence']} -> witness {r['witness']}"
            f" (outside xi image: {r['outside_image']})"
            for r in rows
        ]
    else:
        lines = [f"no blocking pattern occurrence topped by {n}"]
    _emit(doc, args.format, lines)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.max_n > args.bound:
        print(
            f"error: --max-n {args.max_n} exceeds the oracle bound {args.bound}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    results = []
    for n in range(1, args.max_n + 1):
        checked = 0
        for w in sweeps.iter_sn(n):
            if not check_support_well_defined(w, bound=args.bound):
                print(f"counterexample: {w}", file=sys.stderr)
                return EXIT_COUNTEREXAMPLE
            checked += 1
        results.append({"n": n, "checked": checked, "ok": True})
    doc = {"max_n": args.max_n, "results": results, "ok": True}
    _emit(
        doc,
        args.format,
        [f"n={r['n']}: {r['checked']} permutations ok" for r in results],
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permstat",
        description="Repeated letters in reduced words versus 321/3412 patterns.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("text", "json", "csv"),
        default="text",
        help="output format (csv applies to verify only)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[common], help="statistics of one permutation")
    p.add_argument("perm")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", parents=[common], help="audit a rank range of S_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--from", dest="from_rank", type=int, default=0)
    p.add_argument("--to", dest="to_rank", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument(
        "--census", action="store_true", help="include the avoider census in the output"
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("word", parents=[common], help="canonical reduced word")
    p.add_argument("perm")
    p.set_defaults(func=cmd_word)

    p = sub.add_parser(
        "witness", parents=[common], help="top-level blocking occurrences and witnesses"
    )
    p.add_argument("perm")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser(
        "oracle", parents=[common], help="support well-definedness, all words"
    )
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--bound", type=int, default=DEFAULT_ORACLE_BOUND)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MalformedPermutationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
