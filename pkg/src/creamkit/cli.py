"""Command-line front door.

Exit codes: 0 success, 1 validation failure, 2 I/O or parse failure.
Outputs for identical inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import reporting
from .extended import analyze, demand_profile, rank_critical
from .hta import (HtaParseError, collect_assignments, count_nodes, parse_hta,
                  serialize_hta, validate_hta)
from .reporting import (Provenance, ReportBundle, content_digest, fmt_prob,
                        fmt_short, histogram_svg, markdown_report, report_json,
                        result_csv)
from .screening import assessment_from_dict, screen
from .taxonomy import Taxonomy, TaxonomyError, default_taxonomy, load_taxonomy
from .whatif import best_improvement, single_cpc_sweep

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO)


def _load_taxonomy(arg_path: str | None) -> Taxonomy:
    path = arg_path or os.environ.get("CREAMKIT_TAXONOMY")
    if not path:
        return default_taxonomy()
    try:
        return load_taxonomy(Path(path))
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO)
    except TaxonomyError as exc:
        raise CliError("invalid taxonomy:\n  " + "\n  ".join(exc.errors),
                       EXIT_VALIDATION)


def _parse_tree(path: str):
    try:
        return parse_hta(_read_text(path), name=Path(path).stem)
    except HtaParseError as exc:
        raise CliError("parse failed:\n  " +
                       "\n  ".join(str(d) for d in exc.diagnostics), EXIT_IO)


def _load_assessment(path: str, taxonomy: Taxonomy):
    text = _read_text(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"cannot parse {path}: {exc}", EXIT_IO)
    try:
        return assessment_from_dict(doc, taxonomy)
    except Exception as exc:
        raise CliError(f"invalid assessment: {exc}", EXIT_VALIDATION)


def _validated_tree(path: str, taxonomy: Taxonomy):
    tree = _parse_tree(path)
    report = validate_hta(tree, taxonomy)
    if not report.ok:
        raise CliError("validation failed:\n  " +
                       "\n  ".join(str(v) for v in report.violations),
                       EXIT_VALIDATION)
    return tree


def cmd_validate(args, out) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    tree = _validated_tree(args.hta, taxonomy)
    print(f"OK: {count_nodes(tree)} nodes, {len(collect_assignments(tree))} "
          f"assignments", file=out)
    return EXIT_OK


def cmd_screen(args, out) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    assessment = _load_assessment(args.assessment, taxonomy)
    result = screen(assessment, taxonomy)
    lo, hi = result.hep_interval
    print(f"{result.mode.value} [{fmt_short(lo)}, {fmt_short(hi)}]", file=out)
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    tree = _validated_tree(args.hta, taxonomy)
    assessment = _load_assessment(args.assessment, taxonomy)
    result = analyze(tree, assessment, taxonomy)
    scr = screen(assessment, taxonomy)
    lo, hi = scr.hep_interval
    print(f"mode: {scr.mode.value} [{fmt_short(lo)}, {fmt_short(hi)}]", file=out)
    print(f"aggregate failure probability: {fmt_prob(result.aggregate_failure_p)}",
          file=out)
    for r in rank_critical(result, args.top):
        print(f"  {r.node}  {r.function.value}:{r.cff}  "
              f"{fmt_prob(r.adjusted_cfp)}  ({r.source})", file=out)
    if args.out:
        bundle = _bundle(tree, assessment, taxonomy, args)
        Path(args.out).write_text(report_json(bundle), encoding="utf-8")
        print(f"wrote {args.out}", file=out)
    return EXIT_OK


def cmd_profile(args, out) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    tree = _validated_tree(args.hta, taxonomy)
    try:
        profile = demand_profile(tree, args.scope)
    except KeyError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    for fn, count in profile.counts.items():
        print(f"{fn.value}: {count}", file=out)
    if args.out:
        label = args.scope or (tree.meta.name or "all")
        Path(args.out).write_text(histogram_svg([profile], [label]),
                                  encoding="utf-8")
        print(f"wrote {args.out}", file=out)
    return EXIT_OK


def cmd_whatif(args, out) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    tree = _validated_tree(args.hta, taxonomy)
    assessment = _load_assessment(args.assessment, taxonomy)
    sweep = single_cpc_sweep(tree, assessment, taxonomy)
    for d in sweep:
        marker = "=" if d.mode_after is d.mode_before else ">"
        print(f"CPC {d.cpc_id}: {d.from_state} -> {d.to_state}  "
              f"mode {d.mode_before.value} {marker} {d.mode_after.value}  "
              f"aggregate {fmt_prob(d.aggregate_after)}", file=out)
    best = best_improvement(sweep)
    if best is None:
        print("no strict improvement available", file=out)
    else:
        print(f"best improvement: CPC {best.cpc_id} -> {best.to_state}", file=out)
    if args.out:
        from .whatif import delta_to_dict
        Path(args.out).write_text(
            json.dumps({"deltas": [delta_to_dict(d) for d in sweep]}, indent=2)
            + "\n", encoding="utf-8")
        print(f"wrote {args.out}", file=out)
    return EXIT_OK


def _bundle(tree, assessment, taxonomy, args, sweep=None) -> ReportBundle:
    result = analyze(tree, assessment, taxonomy)
    scr = screen(assessment, taxonomy)
    profiles = [(f"step {root.number}", demand_profile(tree, root.number))
                for root in tree.roots]
    profiles.append(("all", demand_profile(tree)))
    provenance = Provenance(
        taxonomy_version=taxonomy.version,
        input_digest=content_digest(serialize_hta(tree),
                                    json.dumps(sorted(assessment.choices.items()))),
    )
    return ReportBundle(screening=scr, extended=result,
                        profiles=tuple(profiles), provenance=provenance,
                        taxonomy=taxonomy, sweep=sweep,
                        top_k=getattr(args, "top", 5))


def cmd_report(args, out) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    tree = _validated_tree(args.hta, taxonomy)
    assessment = _load_assessment(args.assessment, taxonomy)
    sweep = tuple(single_cpc_sweep(tree, assessment, taxonomy))
    bundle = _bundle(tree, assessment, taxonomy, args, sweep=sweep)

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(report_json(bundle), encoding="utf-8")
        (out_dir / "report.csv").write_text(result_csv(bundle.extended),
                                            encoding="utf-8")
        (out_dir / "profile.svg").write_text(
            histogram_svg([p for _, p in bundle.profiles],
                          [label for label, _ in bundle.profiles]),
            encoding="utf-8")
        (out_dir / "report.md").write_text(markdown_report(bundle),
                                           encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {out_dir}: {exc.strerror or exc}", EXIT_IO)
    print(f"wrote report.json, report.csv, profile.svg, report.md to {out_dir}",
          file=out)
    return EXIT_OK


def cmd_serve(args, out) -> int:
    import uvicorn

    from .api import create_app, resolve_base_taxonomy

    taxonomy = _load_taxonomy(args.taxonomy)
    app = create_app(taxonomy=taxonomy, projects_dir=args.projects)
    print(f"serving on port {args.port}", file=out)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="creamkit",
        description="CREAM-based human reliability assessment toolkit")
    parser.add_argument("--taxonomy", metavar="PATH",
                        help="taxonomy JSON (default: CREAMKIT_TAXONOMY or built-in)")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("validate", help="parse and validate an HTA file")
    p.add_argument("hta")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("screen", help="basic-mode screening of a CPC assessment")
    p.add_argument("--assessment", required=True, metavar="JSON")
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("analyze", help="extended-mode analysis")
    p.add_argument("hta")
    p.add_argument("--assessment", required=True, metavar="JSON")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--out", metavar="PATH", help="write report JSON here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("profile", help="cognitive demand profile")
    p.add_argument("hta")
    p.add_argument("--scope", metavar="NODE")
    p.add_argument("--out", metavar="PATH", help="write SVG here")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("whatif", help="single-CPC sensitivity sweep")
    p.add_argument("hta")
    p.add_argument("--assessment", required=True, metavar="JSON")
    p.add_argument("--out", metavar="PATH", help="write delta JSON here")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("report", help="write report.json/.csv/.md and profile.svg")
    p.add_argument("hta")
    p.add_argument("--assessment", required=True, metavar="JSON")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the analyst console service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--projects", metavar="DIR",
                   default=os.environ.get("CREAMKIT_PROJECTS", "projects"))
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None,
         out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which matches our I/O-failure code
        return EXIT_IO if exc.code else EXIT_OK
    if not getattr(args, "func", None):
        parser.print_usage(err)
        return EXIT_IO
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=err)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
