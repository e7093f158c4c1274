"""Command-line entry points: serve, import-tm, ingest, analyze."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analytics import (
    agreement_report,
    edit_type_frequencies,
    pearson_rho,
    selection_rates,
    time_edits_series,
)
from .editlog import LogFormatError, import_xml
from .store import UnknownProjectError, Workbench
from .suggestions import Origin


def _add_data_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="workbench data directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tmbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    _add_data_arg(serve)
    serve.add_argument("--listen", default="127.0.0.1:8077", help="host:port to bind")
    serve.add_argument("--ir-candidates", type=int, default=20, help="IR pruning depth k")
    serve.add_argument("--suggestions", type=int, default=5, help="TM suggestions served n")
    serve.add_argument("--min-similarity", type=float, default=0.0)

    import_tm = sub.add_parser("import-tm", help="load a TM file into a project")
    _add_data_arg(import_tm)
    import_tm.add_argument("--project", required=True, help="project id or name")
    import_tm.add_argument("--file", required=True)

    ingest = sub.add_parser("ingest", help="load an MT or APE translation table")
    _add_data_arg(ingest)
    ingest.add_argument("--origin", required=True, choices=["mt", "ape"])
    ingest.add_argument("--project", required=True, help="project id or name")
    ingest.add_argument("--file", required=True)

    analyze = sub.add_parser("analyze", help="compute statistics over a session log")
    analyze.add_argument("--log", required=True, help="session XML file")
    analyze.add_argument(
        "--report",
        required=True,
        choices=["selection", "kappa", "pearson", "edits", "series"],
    )
    analyze.add_argument("--out", required=True, help="JSON report path")
    analyze.add_argument(
        "--csv", help="CSV path for the series report (default: --out with .csv)"
    )
    return parser


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.listen.rpartition(":")
    workbench = Workbench(
        args.data,
        ir_candidates=args.ir_candidates,
        suggestions=args.suggestions,
        min_similarity=args.min_similarity,
    )
    app = create_app(workbench)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="info")
    return 0


def _cmd_import_tm(args) -> int:
    workbench = Workbench(args.data)
    project = workbench.find_project(args.project)
    text = Path(args.file).read_text("utf-8")
    added, warnings = workbench.upload_tm(project.project_id, text)
    workbench.close()
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"added {added} TM entries to project {project.project_id}")
    return 0


def _cmd_ingest(args) -> int:
    workbench = Workbench(args.data)
    project = workbench.find_project(args.project)
    origin = Origin(args.origin.upper())
    text = Path(args.file).read_text("utf-8")
    count, warnings = workbench.ingest_table(project.project_id, origin, text)
    workbench.close()
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"ingested {count} {origin.value} records into project {project.project_id}")
    return 0


def _analyze_payload(records, report: str):
    if report == "selection":
        table = selection_rates(records)
        return {
            "report": "selection",
            "translators": {
                t: {
                    "counts": {o.value: c for o, c in sorted(table.counts[t].items(), key=lambda kv: kv[0].value)},
                    "rates": {o.value: r for o, r in table.rates[t].items()},
                    "total": table.totals[t],
                }
                for t in sorted(table.totals)
            },
        }
    if report == "kappa":
        out = {"report": "kappa", "variables": {}}
        for variable in ("selection", "time", "edits"):
            rep = agreement_report(records, variable)
            out["variables"][variable] = {
                "translators": list(rep.translators),
                "pairs": [
                    {"a": a, "b": b, "kappa": v}
                    for (a, b), v in sorted(rep.kappa.items())
                    if a < b
                ],
            }
        return out
    if report == "pearson":
        series = time_edits_series(records)
        edits = [float(e) for e, _ in series]
        times = [float(t) for _, t in series]
        return {
            "report": "pearson",
            "x": "totalEdits",
            "y": "timeMs",
            "rho": pearson_rho(edits, times),
            "points": len(series),
        }
    if report == "edits":
        freq = edit_type_frequencies(records)
        return {
            "report": "edits",
            "counts": freq.as_dict(),
            "perRecordTotals": list(freq.per_record_totals),
        }
    series = time_edits_series(records)
    return {"report": "series", "series": [[e, t] for e, t in series]}


def _cmd_analyze(args) -> int:
    session = import_xml(Path(args.log).read_bytes())
    try:
        payload = _analyze_payload(session.records, args.report)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")
    if args.report == "series":
        csv_path = Path(args.csv) if args.csv else out.with_suffix(".csv")
        csv_path.write_text(
            "".join(f"{e},{t}\n" for e, t in payload["series"]), "utf-8"
        )
        print(f"wrote {out} and {csv_path}")
    else:
        print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "import-tm":
            return _cmd_import_tm(args)
        if args.command == "ingest":
            return _cmd_ingest(args)
        return _cmd_analyze(args)
    except (UnknownProjectError, FileNotFoundError, LogFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
