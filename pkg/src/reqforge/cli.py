"""``reqforge`` command line.

Exit codes: 0 success, 1 validation errors (or uncovered requirements for
``check``), 2 usage or I/O error. Warnings never fail a command unless
``--strict-warnings`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from . import analysis, docgen
from .csvio import import_requirements_csv
from .diagnostics import Diagnostic, Severity, has_errors, sort_diagnostics
from .diagram import all_diagrams
from .dsl import parse, serialize
from .model import Level, Model, merge_models, stats
from .validate import validate

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _color_enabled(stream) -> bool:
    return not os.environ.get("REQFORGE_NO_COLOR") and hasattr(stream, "isatty") and stream.isatty()


def _paint(text: str, severity: Severity, stream) -> str:
    if not _color_enabled(stream):
        return text
    code = "31" if severity is Severity.ERROR else "33"
    return f"\033[{code}m{text}\033[0m"


def print_diagnostics(diags, stream, fmt="text"):
    if fmt == "json":
        stream.write(json.dumps([d.to_dict() for d in diags], indent=2) + "\n")
        return
    for d in diags:
        stream.write(_paint(d.format(), d.severity, stream) + "\n")


def expand_paths(paths) -> list[Path]:
    """Files as given, directories expanded to their ``*.req`` files; sorted by path."""
    files = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files.extend(sorted(p.glob("*.req")))
        elif p.is_file():
            files.append(p)
        else:
            raise UsageError(f"no such file or directory: {raw}")
    return sorted(set(files), key=str)


def read_text(path: Path) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def load(paths, relaxed_levels=False) -> tuple[Model | None, list[Diagnostic], list[tuple[Path, Model]]]:
    """Parse and merge model files, then validate the merged model."""
    files = expand_paths(paths)
    diags: list[Diagnostic] = []
    per_file = []
    for f in files:
        result = parse(read_text(f), str(f))
        diags += result.diagnostics
        if result.model is not None:
            per_file.append((f, result.model))
    if has_errors(diags):
        return None, sort_diagnostics(diags), per_file
    model = merge_models([m for _, m in per_file])
    diags = sort_diagnostics(diags + validate(model, relaxed_levels))
    return (None if has_errors(diags) else model), diags, per_file


def atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_valid(args, out, err):
    model, diags, _ = load(args.paths, getattr(args, "relaxed_levels", False))
    if model is None:
        print_diagnostics([d for d in diags if d.is_error], err)
        return None
    return model


# commands

def cmd_validate(args, out, err) -> int:
    model, diags, _ = load(args.paths, args.relaxed_levels)
    print_diagnostics(diags, out, args.format)
    if has_errors(diags):
        return EXIT_INVALID
    if args.strict_warnings and diags:
        return EXIT_INVALID
    return EXIT_OK


def cmd_check(args, out, err) -> int:
    model = _load_valid(args, out, err)
    if model is None:
        return EXIT_INVALID
    strictness = analysis.Strictness.STRICT if args.strict else analysis.Strictness.LENIENT
    report = analysis.gap_analysis(model, strictness)
    if args.format == "json":
        out.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        rows = [(c, "covered") for c in report.covered]
        rows += [(e.case_study_req, e.reason.value) for e in report.entries]
        for ident, state in sorted(rows):
            out.write(f"{ident} {state}\n")
        total = report.covered_count + report.uncovered_count
        out.write(f"covered {report.covered_count} of {total} case study requirements ({strictness.value})\n")
    return EXIT_INVALID if report.uncovered_count else EXIT_OK


def cmd_gen(args, out, err) -> int:
    model = _load_valid(args, out, err)
    if model is None:
        return EXIT_INVALID
    targets = set(args.target or ["all"])
    if "all" in targets:
        targets = {"srs", "roadmap", "diagrams"}
    outputs: dict[str, str] = {}
    if "srs" in targets:
        outputs["srs.md"] = docgen.render_markdown(docgen.generate_srs(model))
    if "roadmap" in targets:
        outputs["roadmap.md"] = docgen.render_markdown(docgen.generate_roadmap_doc(model))
    if "diagrams" in targets:
        for name, text in all_diagrams(model).items():
            outputs[f"diagrams/{name}"] = text
    root = Path(args.out)
    for rel in sorted(outputs):
        atomic_write(root / rel, outputs[rel])
    if args.verbose:
        for rel in sorted(outputs):
            out.write(f"wrote {root / rel}\n")
    return EXIT_OK


def _stats_rows(st):
    comps = sum(ps.components for ps in st.per_package.values())
    ifaces = sum(ps.interfaces for ps in st.per_package.values())
    nodes = sum(ps.nodes for ps in st.per_package.values())
    rows = [("model", "", st.requirement_count, st.architecture_element_count,
             comps, ifaces, nodes, st.total_element_count)]
    for cid, n in st.per_container.items():
        rows.append(("container", cid, n, 0, 0, 0, 0, n))
    for pid, ps in st.per_package.items():
        rows.append(("package", pid, 0, ps.elements, ps.components, ps.interfaces, ps.nodes, ps.elements))
    return rows


_STATS_HEADER = ("scope", "id", "requirements", "architecture_elements", "components", "interfaces", "nodes",
                 "total_elements")


def _stats_csv(st) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_STATS_HEADER)
    writer.writerows(_stats_rows(st))
    return buf.getvalue()


def cmd_stats(args, out, err) -> int:
    model = _load_valid(args, out, err)
    if model is None:
        return EXIT_INVALID
    st = stats(model)
    if args.format == "json":
        out.write(json.dumps(st.to_dict(), indent=2) + "\n")
    elif args.format == "csv":
        out.write(_stats_csv(st))
    else:
        out.write(f"requirements: {st.requirement_count}\n")
        out.write(f"architecture elements: {st.architecture_element_count}\n")
        out.write(f"total elements: {st.total_element_count}\n")
        for cid, n in st.per_container.items():
            out.write(f"container {cid}: {n} requirements\n")
        for pid, ps in st.per_package.items():
            out.write(f"package {pid}: {ps.elements} elements "
                      f"({ps.components} components, {ps.interfaces} interfaces, {ps.nodes} nodes)\n")
    if args.figures:
        from .figures import write_figures

        fig_dir = Path(args.figures)
        atomic_write(fig_dir / "stats.csv", _stats_csv(st))
        write_figures(model, fig_dir)
    return EXIT_OK


def cmd_matrix(args, out, err) -> int:
    model = _load_valid(args, out, err)
    if model is None:
        return EXIT_INVALID
    mx = analysis.matrix(model, Level(args.from_level), Level(args.to_level))
    if args.format == "json":
        out.write(json.dumps(mx.to_dict(), indent=2) + "\n")
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([f"{mx.from_level.value}\\{mx.to_level.value}", *mx.cols])
        for r, cells in zip(mx.rows, mx.cells):
            writer.writerow([r, *("1" if c else "0" for c in cells)])
    else:
        width = max([len(r) for r in mx.rows] + [0])
        out.write(" " * width + "".join(f" {c}" for c in mx.cols) + "\n")
        for r, cells in zip(mx.rows, mx.cells):
            marks = "".join(" " + ("X" if v else ".").ljust(len(c)) for c, v in zip(mx.cols, cells))
            out.write(r.ljust(width) + marks.rstrip() + "\n")
    return EXIT_OK


def cmd_import_csv(args, out, err) -> int:
    model, diags, per_file = load(args.paths, args.relaxed_levels)
    if model is None:
        print_diagnostics([d for d in diags if d.is_error], err)
        return EXIT_INVALID
    csv_text = read_text(Path(args.csv))
    merged = import_requirements_csv(csv_text, args.container, model, str(args.csv), args.relaxed_levels)
    if merged.model is None:
        print_diagnostics([d for d in merged.diagnostics if d.is_error], err)
        return EXIT_INVALID
    # rewrite only the file that declares the container
    path, file_model = next((f, m) for f, m in per_file if any(c.id == args.container for c in m.containers))
    updated = next(c for c in merged.model.containers if c.id == args.container)
    file_model = replace(file_model, containers=[updated if c.id == args.container else c
                                                 for c in file_model.containers])
    text = serialize(file_model)
    if args.in_place:
        atomic_write(path, text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_fmt(args, out, err) -> int:
    files = expand_paths(args.paths)
    failed = False
    changed = []
    for f in files:
        text = read_text(f)
        result = parse(text, str(f))
        if result.model is None:
            print_diagnostics([d for d in result.diagnostics if d.is_error], err)
            failed = True
            continue
        canonical = serialize(result.model)
        if canonical != text:
            changed.append(f)
            if not args.check:
                atomic_write(f, canonical)
    for f in changed:
        out.write(f"{'would reformat' if args.check else 'reformatted'} {f}\n")
    if failed or (args.check and changed):
        return EXIT_INVALID
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reqforge", description="Model-based requirements toolchain.")
    sub = parser.add_subparsers(dest="command", required=True)

    def paths(p):
        p.add_argument("paths", nargs="+", help=".req files or directories of .req files")

    def relaxed(p):
        p.add_argument("--relaxed-levels", action="store_true",
                       help="allow same-level traces (the trace graph must stay acyclic)")

    p = sub.add_parser("validate", help="check a model against the metamodel")
    paths(p)
    relaxed(p)
    p.add_argument("--strict-warnings", action="store_true", help="fail on warnings too")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="gap analysis of case study requirements")
    paths(p)
    relaxed(p)
    p.add_argument("--strict", action="store_true", help="only done tool requirements cover")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate SRS, roadmap and diagrams")
    paths(p)
    relaxed(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--target", action="append", choices=("srs", "roadmap", "diagrams", "all"),
                   help="what to generate (repeatable, default all)")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="model element counts")
    paths(p)
    relaxed(p)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--figures", metavar="DIR", help="also write stats.csv and PNG charts to DIR")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("matrix", help="traceability matrix between two levels")
    paths(p)
    relaxed(p)
    levels = [lvl.value for lvl in Level]
    p.add_argument("--from", dest="from_level", choices=levels, required=True)
    p.add_argument("--to", dest="to_level", choices=levels, required=True)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("import-csv", help="merge a requirements CSV into a container")
    p.add_argument("csv", help="CSV file with header id,definition,criticality,release,status,comments")
    paths(p)
    relaxed(p)
    p.add_argument("--container", required=True, help="target container id")
    p.add_argument("--in-place", action="store_true", help="rewrite the .req file declaring the container")
    p.set_defaults(func=cmd_import_csv)

    p = sub.add_parser("fmt", help="rewrite files in canonical form")
    paths(p)
    p.add_argument("--check", action="store_true", help="report files that are not canonical, write nothing")
    p.set_defaults(func=cmd_fmt)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out, err)
    except UsageError as exc:
        err.write(f"reqforge: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"reqforge: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
