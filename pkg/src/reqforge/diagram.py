"""Graphviz DOT emission for requirement, component and deployment diagrams.

Output is byte-stable: nodes are emitted sorted by id, edges by
(from, to), clusters by id. No layout is computed here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagnostics import ReqforgeError
from .graphs import adjacency, reachable_from
from .model import Model, walk_components

SHAPES = {
    "requirement": "note",
    "component": "component",
    "interface": "ellipse",
    "node": "box3d",
}

STYLES = {
    "satisfy": "dashed",
    "trace": "solid",
    "provides": "solid",
    "consumes": "dashed",
    "deployed_on": "solid",
}


def dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


@dataclass
class DotGraph:
    name: str
    nodes: dict[str, tuple[str, str]] = field(default_factory=dict)  # id -> (label, shape class)
    edges: set[tuple[str, str, str]] = field(default_factory=set)  # (from, to, style class)
    clusters: dict[str, tuple[str, list[str]]] = field(default_factory=dict)  # id -> (label, members)

    def add_node(self, ident: str, label: str, shape_class: str):
        self.nodes[ident] = (label, shape_class)

    def add_edge(self, src: str, dst: str, style_class: str):
        self.edges.add((src, dst, style_class))

    def check(self):
        for src, dst, _ in self.edges:
            if src not in self.nodes or dst not in self.nodes:
                raise ValueError(f"edge {src} -> {dst} has an undeclared endpoint")

    def emit(self) -> str:
        self.check()
        clustered = {m for _, members in self.clusters.values() for m in members}
        out = [f"digraph {dot_quote(self.name)} {{", "  rankdir=LR;", '  node [fontname="Helvetica"];']
        nested = {m for cid, (_, members) in self.clusters.items() for m in members if m != cid}
        for cid in sorted(self.clusters):
            if cid not in nested:
                self._emit_cluster(cid, 1, out)
        for ident in sorted(self.nodes):
            if ident not in clustered:
                out.append("  " + self._node_line(ident))
        for src, dst, style in sorted(self.edges):
            out.append(f"  {dot_quote(src)} -> {dot_quote(dst)} "
                       f"[style={STYLES[style]}, label={dot_quote(style)}];")
        out.append("}")
        return "\n".join(out) + "\n"

    def _emit_cluster(self, cid: str, depth: int, out: list[str]):
        pad = "  " * depth
        label, members = self.clusters[cid]
        out.append(f"{pad}subgraph {dot_quote('cluster_' + cid)} {{")
        out.append(f"{pad}  label={dot_quote(label)};")
        for m in sorted(members):
            if m != cid and m in self.clusters:
                self._emit_cluster(m, depth + 1, out)
            else:
                out.append(f"{pad}  " + self._node_line(m))
        out.append(f"{pad}}}")

    def _node_line(self, ident: str) -> str:
        label, shape_class = self.nodes[ident]
        return f"{dot_quote(ident)} [label={dot_quote(label)}, shape={SHAPES[shape_class]}];"


def _find_component(model: Model, component_id: str):
    for _, comp in model.components():
        if comp.id == component_id:
            return comp
    return None


def requirement_diagram(model: Model, component_id: str) -> DotGraph:
    """Component, the requirements it satisfies, and everything they trace to."""
    comp = _find_component(model, component_id)
    if comp is None:
        raise ReqforgeError("E040", f"unknown component '{component_id}'", component_id)
    reqs = {r.id: r for _, r in model.requirements()}
    graph = DotGraph(f"requirement_{comp.id}")
    graph.add_node(comp.id, comp.name, "component")
    satisfied = sorted({s.target for s in model.satisfies if s.source == comp.id})
    succ = adjacency(t.key for t in model.traces)
    reached = set(satisfied)
    for target in satisfied:
        graph.add_edge(comp.id, target, "satisfy")
        reached |= reachable_from(succ, target)
    for ident in reached:
        req = reqs.get(ident)
        graph.add_node(ident, ident if req is None else f"{ident}\n{_short(req.definition)}", "requirement")
    for t in model.traces:
        if t.source in reached and t.target in reached:
            graph.add_edge(t.source, t.target, "trace")
    return graph


def _short(text: str, limit: int = 40) -> str:
    text = " ".join(text.split())
    return text if len(text) <= limit else text[: limit - 3] + "..."


def component_diagram(model: Model, package_id: str) -> DotGraph:
    """Components of a package (sub-components clustered in their parent) and interfaces."""
    pkg = next((p for p in model.packages if p.id == package_id), None)
    if pkg is None:
        raise ReqforgeError("E041", f"unknown package '{package_id}'", package_id)
    interfaces = {i.id: i for p in model.packages for i in p.interfaces}
    graph = DotGraph(f"component_{pkg.id}")
    for i in pkg.interfaces:
        graph.add_node(i.id, i.name, "interface")
    for comp in walk_components(pkg.components):
        graph.add_node(comp.id, comp.name, "component")
        if comp.sub_components:
            graph.clusters[comp.id] = (comp.name, [comp.id] + [c.id for c in comp.sub_components])
        for kind, refs in (("provides", comp.provided), ("consumes", comp.consumed)):
            for ref in refs:
                if ref not in graph.nodes:
                    # interface declared in another package
                    graph.add_node(ref, interfaces[ref].name if ref in interfaces else ref, "interface")
                graph.add_edge(comp.id, ref, kind)
    return graph


def deployment_diagram(model: Model) -> DotGraph:
    graph = DotGraph("deployment_model")
    for p in model.packages:
        for n in p.nodes:
            graph.add_node(n.id, n.name, "node")
    for _, comp in model.components():
        for ref in comp.deployed_on:
            graph.add_node(comp.id, comp.name, "component")
            graph.add_edge(comp.id, ref, "deployed_on")
    return graph


def diagram_file_name(kind: str, root_id: str) -> str:
    return f"{kind}_{root_id}.dot"


def all_diagrams(model: Model) -> dict[str, str]:
    """File name -> DOT text for every diagram the model supports."""
    files = {}
    for _, comp in model.components():
        files[diagram_file_name("requirement", comp.id)] = requirement_diagram(model, comp.id).emit()
    for pkg in model.packages:
        files[diagram_file_name("component", pkg.id)] = component_diagram(model, pkg.id).emit()
    files[diagram_file_name("deployment", "model")] = deployment_diagram(model).emit()
    return dict(sorted(files.items()))


# minimal DOT checker, enough for the subset emitted above

_DOT_TOKEN = re.compile(r'\s*(?:(?P<str>"(?:[^"\\]|\\.)*")|(?P<arrow>->)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<p>[{}\[\];,=]))')


def check_dot(text: str) -> bool:
    """True when ``text`` is a syntactically valid digraph (statement subset).

    Accepts: digraph header, attribute statements, node statements,
    edge statements with attribute lists and subgraphs. Raises
    ValueError with position on the first problem.
    """
    toks = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _DOT_TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad DOT token at offset {pos}")
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
        pos = m.end()
    toks.append(("eof", ""))
    i = 0

    def peek(k=0):
        return toks[i + k]

    def take(kind=None, value=None):
        nonlocal i
        tk = toks[i]
        if (kind and tk[0] != kind) or (value and tk[1] != value):
            raise ValueError(f"DOT: expected {value or kind}, found {tk[1]!r} (token {i})")
        i += 1
        return tk

    def is_id():
        return peek()[0] in ("str", "id")

    def attr_list():
        take("p", "[")
        while peek()[1] != "]":
            if not is_id():
                raise ValueError(f"DOT: bad attribute at token {i}")
            take()
            take("p", "=")
            if not is_id():
                raise ValueError(f"DOT: bad attribute value at token {i}")
            take()
            if peek()[1] in (",", ";"):
                take()
        take("p", "]")

    def stmt_list():
        while peek()[1] != "}":
            if peek()[0] == "eof":
                raise ValueError("DOT: unexpected end, missing '}'")
            if peek()[1] == "subgraph":
                take()
                if is_id():
                    take()
                take("p", "{")
                stmt_list()
                take("p", "}")
            elif peek()[1] in ("node", "edge", "graph") and peek(1)[1] == "[":
                take()
                attr_list()
            elif is_id() and peek(1)[1] == "=":
                take()
                take()
                if not is_id():
                    raise ValueError(f"DOT: bad value at token {i}")
                take()
            elif is_id():
                take()
                while peek()[0] == "arrow":
                    take()
                    if not is_id():
                        raise ValueError(f"DOT: bad edge target at token {i}")
                    take()
                if peek()[1] == "[":
                    attr_list()
            else:
                raise ValueError(f"DOT: unexpected {peek()[1]!r} at token {i}")
            if peek()[1] == ";":
                take()

    take("id", "digraph")
    if is_id():
        take()
    take("p", "{")
    stmt_list()
    take("p", "}")
    take("eof")
    return True
