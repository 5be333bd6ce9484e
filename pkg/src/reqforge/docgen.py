"""SRS and roadmap documents generated from a model, rendered to Markdown.

The SRS generator walks the model from its root: one chapter per
package, a Common Interfaces section, then one section per component
(sub-components included) with four fixed subsections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .analysis import Strictness, gap_analysis, roadmap, trace_closure
from .diagram import diagram_file_name
from .model import Component, Level, Model, Release, Requirement, stats, walk_components

COMPONENT_SUBSECTIONS = ("Requirements", "Services", "Structure", "Deployment")
REQUIREMENT_COLUMNS = ("Id", "Definition", "Criticality", "Release", "Status")
LEVEL_TITLES = {Level.CASE_STUDY: "case study", Level.FRAMEWORK: "framework", Level.TOOL: "tool"}


@dataclass
class Paragraph:
    text: str


@dataclass
class Table:
    headers: tuple[str, ...]
    rows: list[tuple[str, ...]] = field(default_factory=list)


@dataclass
class DiagramRef:
    path: str
    caption: str


Block = Union[Paragraph, Table, DiagramRef]


@dataclass
class Section:
    level: int
    heading: str
    blocks: list[Block] = field(default_factory=list)
    children: list["Section"] = field(default_factory=list)

    def add(self, heading: str) -> "Section":
        child = Section(self.level + 1, heading)
        self.children.append(child)
        return child


@dataclass
class Document:
    title: Optional[str] = None
    blocks: list[Block] = field(default_factory=list)
    sections: list[Section] = field(default_factory=list)

    def walk(self):
        stack = list(reversed(self.sections))
        while stack:
            sec = stack.pop()
            yield sec
            stack.extend(reversed(sec.children))


def check_document(doc: Document) -> None:
    """Raise ValueError if heading levels jump or a table is ragged."""

    def visit(sec: Section, parent_level: int):
        if sec.level < 1 or sec.level > parent_level + 1:
            raise ValueError(f"heading {sec.heading!r} at level {sec.level} under level {parent_level}")
        for block in sec.blocks:
            _check_block(block)
        for child in sec.children:
            visit(child, sec.level)

    for block in doc.blocks:
        _check_block(block)
    for sec in doc.sections:
        visit(sec, 0)


def _check_block(block: Block):
    if isinstance(block, Table):
        for row in block.rows:
            if len(row) != len(block.headers):
                raise ValueError(f"table row {row!r} has {len(row)} cells, expected {len(block.headers)}")


# Markdown

def _cell(text: str) -> str:
    return " ".join(str(text).split()).replace("|", "\\|")


def _render_block(block: Block) -> str:
    if isinstance(block, Paragraph):
        return block.text
    if isinstance(block, DiagramRef):
        return f"Diagram: [{block.caption}]({block.path})"
    lines = ["| " + " | ".join(_cell(h) for h in block.headers) + " |",
             "|" + "|".join(" --- " for _ in block.headers) + "|"]
    lines += ["| " + " | ".join(_cell(c) for c in row) + " |" for row in block.rows]
    return "\n".join(lines)


def render_markdown(doc: Document) -> str:
    check_document(doc)
    chunks = []
    if doc.title:
        chunks.append(f"# {doc.title}")
    chunks += [_render_block(b) for b in doc.blocks]
    for sec in doc.walk():
        chunks.append("#" * sec.level + " " + sec.heading)
        chunks += [_render_block(b) for b in sec.blocks]
    return "\n\n".join(chunks) + "\n" if chunks else ""


# SRS

def _req_row(req: Requirement) -> tuple[str, ...]:
    return (f"`{req.id}`", req.definition, req.criticality.value, req.release.value, req.status.value)


def _front_matter(model: Model) -> list[Block]:
    st = stats(model)
    blocks: list[Block] = [
        Paragraph(f"Generated from the requirements model \"{model.name or 'unnamed'}\"."),
        Table(("Metric", "Value"), [
            ("Requirements", str(st.requirement_count)),
            ("Architecture elements", str(st.architecture_element_count)),
            ("Total model elements", str(st.total_element_count)),
        ]),
    ]
    if model.containers:
        blocks.append(Table(("Requirements container", "Level", "Requirements"), [
            (f"{c.name} (`{c.id}`)", LEVEL_TITLES[c.kind], str(st.per_container[c.id])) for c in model.containers
        ]))
    if model.packages:
        blocks.append(Table(("Package", "Components", "Interfaces", "Nodes"), [
            (f"{p.name} (`{p.id}`)", str(ps.components), str(ps.interfaces), str(ps.nodes))
            for p, ps in ((p, st.per_package[p.id]) for p in model.packages)
        ]))
    return blocks


def generate_srs(model: Model, diagram_dir: str = "diagrams") -> Document:
    """Software Requirements Specification for a valid model."""
    reqs = {r.id: r for _, r in model.requirements()}
    interfaces = {i.id: i for p in model.packages for i in p.interfaces}
    nodes = {n.id: n for p in model.packages for n in p.nodes}
    satisfied_by: dict[str, list[str]] = {}
    for s in sorted(model.satisfies, key=lambda s: s.key):
        satisfied_by.setdefault(s.source, []).append(s.target)
    parents = {}
    for _, comp in model.components():
        for sub in comp.sub_components:
            parents[sub.id] = comp

    title = f"{model.name} Software Requirements Specification" if model.name else "Software Requirements Specification"
    doc = Document(title, _front_matter(model))

    for pkg in model.packages:
        chapter = Section(1, pkg.name)
        n_comp = sum(1 for _ in walk_components(pkg.components))
        chapter.blocks.append(Paragraph(
            f"Package `{pkg.id}` groups {n_comp} component(s), "
            f"{len(pkg.interfaces)} common interface(s) and {len(pkg.nodes)} platform node(s)."))
        common = chapter.add("Common Interfaces")
        if pkg.interfaces:
            common.blocks.append(Table(("Interface", "Name", "Description"), [
                (f"`{i.id}`", i.name, i.description or "") for i in pkg.interfaces]))
        else:
            common.blocks.append(Paragraph("This package declares no common interfaces."))
        for comp in walk_components(pkg.components):
            _component_section(chapter, comp, parents.get(comp.id), satisfied_by.get(comp.id, []),
                               reqs, interfaces, nodes, diagram_dir)
        if pkg.nodes:
            plat = chapter.add("Platform Nodes")
            plat.blocks.append(Table(("Node", "Name", "Description"), [
                (f"`{n.id}`", n.name, n.description or "") for n in pkg.nodes]))
        doc.sections.append(chapter)

    if model.containers:
        doc.sections.append(_catalogue(model, set(s.target for s in model.satisfies)))
        doc.sections.append(_traceability(model))
    return doc


def _component_section(chapter, comp: Component, parent, targets, reqs, interfaces, nodes, diagram_dir):
    sec = chapter.add(f"Component: {comp.name}")
    intro = f"Component `{comp.id}`"
    if comp.owner:
        intro += f", owned by {comp.owner}"
    sec.blocks.append(Paragraph(intro + "."))

    req_sec = sec.add("Requirements")
    if targets:
        req_sec.blocks.append(Table(REQUIREMENT_COLUMNS, [_req_row(reqs[t]) for t in targets]))
    else:
        req_sec.blocks.append(Paragraph("No requirement is satisfied by this component yet."))
    req_sec.blocks.append(DiagramRef(f"{diagram_dir}/{diagram_file_name('requirement', comp.id)}",
                                     f"requirements of {comp.name}"))

    svc = sec.add("Services")
    rows = [("provided", f"`{i}`", interfaces[i].name, interfaces[i].description or "") for i in comp.provided]
    rows += [("consumed", f"`{i}`", interfaces[i].name, interfaces[i].description or "") for i in comp.consumed]
    if rows:
        svc.blocks.append(Table(("Direction", "Interface", "Name", "Description"), rows))
    else:
        svc.blocks.append(Paragraph("This component neither provides nor consumes interfaces."))

    struct = sec.add("Structure")
    if parent is not None:
        struct.blocks.append(Paragraph(f"Part of `{parent.id}` ({parent.name})."))
    if comp.sub_components:
        struct.blocks.append(Table(("Sub-component", "Name", "Owner"), [
            (f"`{c.id}`", c.name, c.owner or "") for c in comp.sub_components]))
    else:
        struct.blocks.append(Paragraph("This component has no sub-components."))

    dep = sec.add("Deployment")
    if comp.deployed_on:
        dep.blocks.append(Table(("Node", "Name", "Description"), [
            (f"`{n}`", nodes[n].name, nodes[n].description or "") for n in comp.deployed_on]))
    else:
        dep.blocks.append(Paragraph("No deployment platform is declared for this component."))


def _catalogue(model: Model, satisfied: set[str]) -> Section:
    chapter = Section(1, "Requirements Catalogue")
    for cont in model.containers:
        sec = chapter.add(f"{cont.name} ({LEVEL_TITLES[cont.kind]} requirements)")
        owner = f", maintained by {cont.owner}" if cont.owner else ""
        sec.blocks.append(Paragraph(f"Container `{cont.id}`{owner}."))
        if cont.requirements:
            sec.blocks.append(Table(REQUIREMENT_COLUMNS + ("Comments",), [
                _req_row(r) + (r.comments or "",) for r in cont.requirements]))
        else:
            sec.blocks.append(Paragraph("This container holds no requirements yet."))
        unalloc = sec.add("Unallocated requirements")
        loose = [r for r in cont.requirements if r.id not in satisfied]
        if loose:
            unalloc.blocks.append(Paragraph("No component satisfies the following requirements: "
                                            + ", ".join(f"`{r.id}`" for r in loose) + "."))
        else:
            unalloc.blocks.append(Paragraph("Every requirement of this container is satisfied by a component."))
    return chapter


def _traceability(model: Model) -> Section:
    closure = trace_closure(model)
    level = model.level_of()
    chapter = Section(1, "Traceability")
    gaps = gap_analysis(model, Strictness.LENIENT, closure)
    chapter.blocks.append(Paragraph(
        f"{gaps.covered_count} case study requirement(s) are covered by a satisfied tool requirement; "
        f"{gaps.uncovered_count} are not."))
    rows = []
    for cs in sorted(r.id for c, r in model.requirements() if c.kind is Level.CASE_STUDY):
        preds = closure.predecessors(cs)
        fw = [p for p in preds if level.get(p) is Level.FRAMEWORK]
        tl = [p for p in preds if level.get(p) is Level.TOOL]
        rows.append((f"`{cs}`", ", ".join(fw) or "-", ", ".join(tl) or "-"))
    if rows:
        chapter.blocks.append(Table(("Case study requirement", "Framework requirements", "Tool requirements"), rows))
    else:
        chapter.blocks.append(Paragraph("The model declares no case study requirements."))
    return chapter


# roadmap

def generate_roadmap_doc(model: Model) -> Document:
    closure = trace_closure(model)
    entries = roadmap(model, closure)
    gaps = gap_analysis(model, Strictness.LENIENT, closure)
    title = f"{model.name} Development Roadmap" if model.name else "Development Roadmap"
    doc = Document(title, [Paragraph(
        "Case study requirements are listed under the milestone at which a covering, satisfied "
        "tool requirement first becomes available.")])
    for release in Release:
        sec = Section(1, f"Milestone: {release.value}")
        rows = []
        for e in entries:
            if e.first_available is not release:
                continue
            now = ", ".join(t.id for t in e.covering_tool_reqs if t.release is release)
            every = ", ".join(f"{t.id} ({t.release.value}, {t.status.value})" for t in e.covering_tool_reqs)
            rows.append((f"`{e.case_study_req}`", now, every, e.fully_available.value))
        sec.blocks.append(Table(("Case study requirement", "Available tool requirements",
                                 "All covering tool requirements", "Fully available"), rows))
        doc.sections.append(sec)
    gap_sec = Section(1, "Not yet covered")
    gap_sec.blocks.append(Table(("Case study requirement", "Reason"), [
        (f"`{g.case_study_req}`", g.reason.value) for g in gaps.entries]))
    doc.sections.append(gap_sec)
    return doc
