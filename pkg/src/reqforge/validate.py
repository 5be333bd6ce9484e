"""Structural validation of a loaded model."""

from __future__ import annotations

from .diagnostics import Diagnostic, error, sort_diagnostics, warning
from .graphs import adjacency, cycles
from .model import (
    Component,
    Criticality,
    Interface,
    Level,
    Model,
    Node,
    Release,
    Requirement,
    Status,
    is_identifier,
    walk_components,
)


def validate(model: Model, relaxed_levels: bool = False) -> list[Diagnostic]:
    """Check every metamodel invariant; return diagnostics sorted by (file, line, code).

    An empty list means the model is valid. Violations never raise.
    """
    diags: list[Diagnostic] = []
    diags += _check_identifiers(model)
    diags += _check_requirements(model)
    diags += _check_components(model)
    diags += _check_traces(model, relaxed_levels)
    diags += _check_satisfies(model)
    return sort_diagnostics(diags)


def _where(element):
    return getattr(element, "span", None)


def _check_identifiers(model: Model) -> list[Diagnostic]:
    diags = []
    first_seen = {}
    for element in model.elements():
        ident = element.id
        if not is_identifier(ident):
            diags.append(error("E002", f"invalid identifier {ident!r}", None, _where(element)))
            continue
        if ident in first_seen:
            prev = first_seen[ident]
            at = f" (first declared at {prev.span})" if prev.span else ""
            diags.append(error("E001", f"duplicate identifier '{ident}'{at}", ident, _where(element)))
        else:
            first_seen[ident] = element
    return diags


def _check_requirements(model: Model) -> list[Diagnostic]:
    diags = []
    for container in model.containers:
        if not isinstance(container.kind, Level):
            diags.append(error("E020", f"invalid container kind {container.kind!r}",
                               container.id, container.span))
        if not container.requirements:
            diags.append(warning("W001", f"container '{container.id}' is empty",
                                 container.id, container.span))
        for req in container.requirements:
            if not isinstance(req.definition, str) or not req.definition.strip():
                diags.append(error("E003", f"requirement '{req.id}' has an empty definition",
                                   req.id, req.span))
            for prop, enum in (("criticality", Criticality), ("release", Release), ("status", Status)):
                value = getattr(req, prop)
                if not isinstance(value, enum):
                    allowed = ", ".join(e.value for e in enum)
                    diags.append(error("E020", f"invalid {prop} {value!r} on '{req.id}' (expected one of {allowed})",
                                       req.id, req.span))
    return diags


def _check_components(model: Model) -> list[Diagnostic]:
    diags = []
    index = model.index()
    for package in model.packages:
        if not (package.components or package.interfaces or package.nodes):
            diags.append(warning("W001", f"package '{package.id}' is empty", package.id, package.span))
        diags += _containment_cycles(package.components)
        for comp in walk_components(package.components):
            for ref in comp.provided + comp.consumed:
                if not isinstance(index.get(ref), Interface):
                    diags.append(error("E008", f"component '{comp.id}' references unknown interface '{ref}'",
                                       comp.id, comp.span))
            for ref in comp.deployed_on:
                if not isinstance(index.get(ref), Node):
                    diags.append(error("E009", f"component '{comp.id}' is deployed on unknown node '{ref}'",
                                       comp.id, comp.span))
    return diags


def _containment_cycles(roots: list[Component]) -> list[Diagnostic]:
    diags = []
    stack = [(comp, ()) for comp in reversed(roots)]
    while stack:
        comp, path = stack.pop()
        path = path + (comp,)
        on_path = {id(c) for c in path}
        for child in reversed(comp.sub_components):
            if id(child) in on_path:
                chain = " -> ".join(c.id for c in path[[id(c) for c in path].index(id(child)):])
                diags.append(error("E014", f"component containment cycle: {chain} -> {child.id}",
                                   child.id, comp.span))
            else:
                stack.append((child, path))
    return diags


def _check_traces(model: Model, relaxed: bool) -> list[Diagnostic]:
    diags = []
    index = model.index()
    levels = model.level_of()
    seen = set()
    legal_edges = []
    for link in model.traces:
        bad = [e for e in (link.source, link.target) if not isinstance(index.get(e), Requirement)]
        if bad:
            names = ", ".join(f"'{e}'" for e in bad)
            diags.append(error("E005", f"trace {link.source} -> {link.target}: {names} is not a requirement",
                               link.source, link.span))
            continue
        if link.key in seen:
            diags.append(error("E012", f"duplicate trace {link.source} -> {link.target}", link.source, link.span))
            continue
        seen.add(link.key)
        src, dst = levels[link.source], levels[link.target]
        if not (isinstance(src, Level) and isinstance(dst, Level)):
            continue
        ok = src.rank <= dst.rank if relaxed else src.rank < dst.rank
        if not ok:
            diags.append(error("E010", f"trace {link.source} ({src.value}) -> {link.target} ({dst.value}) "
                               "violates level order tool < framework < case_study",
                               link.source, link.span))
            continue
        legal_edges.append(link)

    if relaxed:
        succ = adjacency(link.key for link in legal_edges)
        for members in cycles(succ):
            member_set = set(members)
            first = next(link for link in legal_edges
                         if link.source in member_set and link.target in member_set)
            diags.append(error("E011", "trace cycle among " + ", ".join(members), members[0], first.span))
    return diags


def _check_satisfies(model: Model) -> list[Diagnostic]:
    diags = []
    index = model.index()
    seen = set()
    for link in model.satisfies:
        failed = False
        if not isinstance(index.get(link.source), Component):
            diags.append(error("E006", f"satisfy {link.source} -> {link.target}: '{link.source}' is not a component",
                               link.source, link.span))
            failed = True
        if not isinstance(index.get(link.target), Requirement):
            diags.append(error("E007", f"satisfy {link.source} -> {link.target}: '{link.target}' is not a requirement",
                               link.target, link.span))
            failed = True
        if failed:
            continue
        if link.key in seen:
            diags.append(error("E013", f"duplicate satisfy {link.source} -> {link.target}", link.source, link.span))
        seen.add(link.key)
    return diags
