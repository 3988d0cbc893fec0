"""Command-line interface: validate, run, compare, serve.

Exit codes: 0 success, 1 scenario validation failure, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .decision import STRATEGIES
from .errors import ErmcdaError, ScenarioError
from .fusion import RULES
from .pipeline import (
    compare_rules,
    compare_to_csv,
    compare_to_text,
    load_scenario,
    report_to_csv,
    report_to_text,
    run,
    serialize_report,
)

_SCHEMA_HINT = (
    "scenario documents follow the published JSON schema; "
    "see `GET /api/schema` on a running service or "
    "ermcda.pipeline.scenario_schema()"
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ermcda",
        description="Evidential multi-criteria decision analysis pipeline.",
        epilog=_SCHEMA_HINT,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario document")
    p.add_argument("file", help="scenario JSON file")

    p = sub.add_parser("run", help="run a scenario end to end")
    p.add_argument("file", help="scenario JSON file")
    p.add_argument("--rule", choices=sorted(RULES), help="override the fusion rule")
    p.add_argument(
        "--strategy", choices=STRATEGIES, help="override the decision strategy"
    )
    p.add_argument("--out", help="write the output to this file instead of stdout")
    p.add_argument(
        "--format", choices=("json", "csv", "text"), default="text",
        help="output format (default text)",
    )
    p.add_argument(
        "--lean", action="store_true",
        help="trim intermediate artifacts and the audit log from JSON reports",
    )

    p = sub.add_parser("compare", help="run several fusion rules side by side")
    p.add_argument("file", help="scenario JSON file")
    p.add_argument(
        "--rules", required=True,
        help="comma-separated rules, e.g. dempster,pcr6",
    )
    p.add_argument("--out", help="write the output to this file instead of stdout")
    p.add_argument(
        "--format", choices=("json", "csv", "text"), default="text",
        help="output format (default text)",
    )

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--port", type=int, default=8080, help="listen port (default 8080)")
    p.add_argument("--host", default="127.0.0.1", help="bind address")
    p.add_argument(
        "--data-dir", help="directory for scenarios saved to disk", default=None
    )

    return parser


def _load_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_scenario_errors(exc: ScenarioError) -> None:
    print("scenario validation failed:", file=sys.stderr)
    for path, message in exc.errors:
        print(f"  {path}: {message}", file=sys.stderr)
    print(f"hint: {_SCHEMA_HINT}", file=sys.stderr)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            doc = _load_file(args.file)
            scenario = load_scenario(doc)
            print(
                f"OK: {args.file} ({len(scenario.leaf_ids())} leaves, "
                f"{len(scenario.sources)} sources, "
                f"{len(scenario.evaluations)} evaluations)"
            )
            return 0

        if args.command == "run":
            doc = _load_file(args.file)
            if args.rule:
                doc.setdefault("fusion", {})["rule"] = args.rule
            if args.strategy:
                doc.setdefault("decision", {})["strategy"] = args.strategy
            scenario = load_scenario(doc)
            report = run(scenario, lean=args.lean)
            if args.format == "json":
                _emit(serialize_report(report), args.out)
            elif args.format == "csv":
                _emit(report_to_csv(report), args.out)
            else:
                _emit(report_to_text(report), args.out)
            return 0

        if args.command == "compare":
            doc = _load_file(args.file)
            rules = [r.strip() for r in args.rules.split(",") if r.strip()]
            scenario = load_scenario(doc)
            comparison = compare_rules(scenario, rules)
            if args.format == "json":
                _emit(
                    json.dumps(comparison, sort_keys=True, indent=2, ensure_ascii=False)
                    + "\n",
                    args.out,
                )
            elif args.format == "csv":
                _emit(compare_to_csv(comparison), args.out)
            else:
                _emit(compare_to_text(comparison), args.out)
            return 0

        if args.command == "serve":
            from .service import serve

            serve(host=args.host, port=args.port, data_dir=args.data_dir)
            return 0

    except ScenarioError as exc:
        _print_scenario_errors(exc)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        if args.command == "serve":
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return 1
    except ErmcdaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
