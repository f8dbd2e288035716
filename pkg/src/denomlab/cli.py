"""Command-line verifier.

Subcommands run one scenario each and write a report (text, json or csv).
Exit codes: 0 all checks passed, 1 a verification check failed (the report
carries a replayable witness), 2 configuration or usage error, 3 internal
consistency failure (a bug, not a refuted conjecture).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .errors import DenomlabError, InternalConsistencyError
from . import verify

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _load_surface(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"cannot read surface file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SystemExit(f"surface file {path} must hold an object")
    return data


def render_text(report: dict) -> str:
    lines = [f"scenario: {report['scenario']}",
             f"config: {json.dumps(report['config_echo'], sort_keys=True)}",
             f"counts: {json.dumps(report['counts'], sort_keys=True)}"]
    for flag in report.get("flags", []):
        lines.append(f"flag: {flag}")
    for check in report["checks"]:
        verdict = "PASS" if check["pass"] else "FAIL"
        lines.append(f"[{verdict}] {check['name']} ({check['cases']} cases)")
        if not check["pass"] and "witness" in check:
            lines.append(f"    witness: {json.dumps(check['witness'], sort_keys=True)}")
    lines.append(f"verdict: {'PASS' if report['pass'] else 'FAIL'}")
    lines.append(f"duration_ms: {report['duration_ms']}")
    return "\n".join(lines) + "\n"


def render_csv(report: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["scenario", "check", "pass", "cases", "witness"])
    for check in report["checks"]:
        writer.writerow([
            report["scenario"], check["name"], check["pass"], check["cases"],
            json.dumps(check.get("witness"), sort_keys=True)
            if check.get("witness") is not None else "",
        ])
    return out.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return render_csv(report)
    return render_text(report)


def _emit(report: dict, args) -> int:
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if report["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="denomlab",
        description="Exact verification lab for denominator vectors of "
                    "surface cluster algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, surface=True):
        if surface:
            p.add_argument("--surface", required=True,
                           help="JSON file with {genus, boundary, punctures}")
        p.add_argument("--format", choices=("text", "json", "csv"),
                       default="text")
        p.add_argument("--out", default=None, help="write the report here")

    p = sub.add_parser("check-injectivity",
                       help="denominator vectors distinguish cluster monomials")
    common(p)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--depth", type=int, default=None,
                   help="mutation depth bound (infinite-type surfaces)")

    p = sub.add_parser("check-oracle",
                       help="denominator vectors equal intersection vectors")
    common(p)

    p = sub.add_parser("check-lemmas",
                       help="wrapping-loop and projection identities")
    common(p)
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--cap", type=int, default=verify.LEMMA_CASE_CAP)

    p = sub.add_parser("check-segments",
                       help="segment multisets determine arc multisets")
    common(p)
    p.add_argument("--max-degree", type=int, default=2)

    p = sub.add_parser("build-strong",
                       help="randomized strong-admissible construction")
    common(p)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("negative-control",
                       help="weakened vectors must collide (harness self-test)")
    common(p, surface=False)

    p = sub.add_parser("report", help="re-render a saved JSON report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        if args.command == "check-injectivity":
            report = verify.run_injectivity(_load_surface(args.surface),
                                            max_degree=args.max_degree,
                                            depth=args.depth)
        elif args.command == "check-oracle":
            report = verify.run_oracle(_load_surface(args.surface))
        elif args.command == "check-lemmas":
            report = verify.run_lemma_suite(_load_surface(args.surface),
                                            max_degree=args.max_degree,
                                            cap=args.cap)
        elif args.command == "check-segments":
            report = verify.run_segments(_load_surface(args.surface),
                                         max_degree=args.max_degree)
        elif args.command == "build-strong":
            report = verify.run_build_strong(_load_surface(args.surface),
                                             count=args.count,
                                             rng_seed=args.seed)
        elif args.command == "negative-control":
            report = verify.run_negative_control()
        elif args.command == "report":
            try:
                with open(args.infile, "r", encoding="utf-8") as handle:
                    report = json.load(handle)
            except (OSError, json.JSONDecodeError) as exc:
                sys.stderr.write(f"cannot read report: {exc}\n")
                return EXIT_USAGE
            text = render(report, args.format)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return EXIT_PASS
        else:  # pragma: no cover
            return EXIT_USAGE
    except SystemExit as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except InternalConsistencyError as exc:
        sys.stderr.write(f"internal consistency failure: {exc}\n")
        return EXIT_INTERNAL
    except DenomlabError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_USAGE
    return _emit(report, args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
