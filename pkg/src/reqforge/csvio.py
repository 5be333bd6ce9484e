"""Tabular view of a requirements container as CSV.

Dialect: comma separated, double-quote escaping, UTF-8 without BOM, LF
line ends. The header row is mandatory and fixed.
"""

from __future__ import annotations

import copy
import csv
import io

from .diagnostics import ReqforgeError, error, has_errors, sort_diagnostics
from .dsl import ParseResult
from .model import (
    Criticality,
    Model,
    Release,
    Requirement,
    SourceSpan,
    Status,
    is_identifier,
)
from .validate import validate

HEADER = ("id", "definition", "criticality", "release", "status", "comments")


def _find_container(model: Model, container_id: str):
    for cont in model.containers:
        if cont.id == container_id:
            return cont
    return None


def export_requirements_csv(model: Model, container_id: str) -> str:
    cont = _find_container(model, container_id)
    if cont is None:
        raise ReqforgeError("E033", f"unknown container '{container_id}'", container_id)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    # minimal quoting ignores a bare CR once the terminator is LF
    quoted = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_ALL)
    writer.writerow(HEADER)
    for req in cont.requirements:
        row = [req.id, req.definition, req.criticality.value, req.release.value,
               req.status.value, req.comments or ""]
        if any("\0" in cell for cell in row):
            raise ReqforgeError("E034", f"requirement '{req.id}' contains a NUL character", req.id)
        (quoted if any("\r" in cell for cell in row) else writer).writerow(row)
    return buf.getvalue()


def import_requirements_csv(csv_text: str, container_id: str, model: Model,
                            file_name: str = "<csv>", relaxed_levels: bool = False) -> ParseResult:
    """Merge CSV rows into a container, returning a new, revalidated model.

    Rows whose id already exists in the container replace that requirement
    in place; other rows are appended in file order. The input model is
    left untouched.
    """
    new_model = copy.deepcopy(model)
    cont = _find_container(new_model, container_id)
    if cont is None:
        return ParseResult(None, [error("E033", f"unknown container '{container_id}'", container_id)])

    reader = csv.reader(io.StringIO(csv_text, newline=""))
    try:
        header = next(reader, None)
    except csv.Error as exc:
        return ParseResult(None, [error("E030", f"unreadable header: {exc}", None, SourceSpan(file_name, 1, 1))])
    if header is None or tuple(header) != HEADER:
        found = ",".join(header) if header else "nothing"
        return ParseResult(None, [error("E030", f"expected header {','.join(HEADER)}, found {found}",
                                        None, SourceSpan(file_name, 1, 1))])

    own = {id(cont)} | {id(r) for r in cont.requirements}
    outside = {el.id for el in new_model.elements() if id(el) not in own}
    diags = []
    rows: list[Requirement] = []
    seen_in_csv = set()
    row_no = 1
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            diags.append(error("E034", f"row {row_no + 1}: {exc}", None, SourceSpan(file_name, reader.line_num or 1, 1)))
            break
        row_no += 1
        where = SourceSpan(file_name, max(reader.line_num, 1), 1)
        if len(row) != len(HEADER):
            diags.append(error("E034", f"row {row_no}: expected {len(HEADER)} cells, found {len(row)}", None, where))
            continue
        ident, definition, crit, rel, stat, comments = row
        if not is_identifier(ident):
            diags.append(error("E034", f"row {row_no}: invalid identifier {ident!r}", None, where))
            continue
        if ident in seen_in_csv:
            diags.append(error("E034", f"row {row_no}: identifier '{ident}' repeated in CSV", ident, where))
            continue
        seen_in_csv.add(ident)
        if ident in outside:
            diags.append(error("E032", f"row {row_no}: identifier '{ident}' already declared outside "
                                       f"container '{container_id}'", ident, where))
            continue
        values = {}
        for col, enum, cell in (("criticality", Criticality, crit), ("release", Release, rel), ("status", Status, stat)):
            try:
                values[col] = enum(cell)
            except ValueError:
                diags.append(error("E031", f"row {row_no}: invalid {col} {cell!r}", ident, where))
        if len(values) != 3:
            continue
        rows.append(Requirement(ident, definition, values["criticality"], values["release"],
                                values["status"], comments or None, span=where))

    if has_errors(diags):
        return ParseResult(None, sort_diagnostics(diags))

    position = {req.id: i for i, req in enumerate(cont.requirements)}
    for req in rows:
        if req.id in position:
            cont.requirements[position[req.id]] = req
        else:
            position[req.id] = len(cont.requirements)
            cont.requirements.append(req)

    diags = validate(new_model, relaxed_levels)
    return ParseResult(None if has_errors(diags) else new_model, diags)

