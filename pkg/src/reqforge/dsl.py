"""Textual concrete syntax for requirement/architecture models (``.req`` files).

The grammar is a keyword block language; see docs/grammar.md for the EBNF.
Parsing never raises on bad input: problems become diagnostics, and the
parser resynchronises at the next top-level keyword that starts a line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Diagnostic, error, has_errors, sort_diagnostics, warning
from .model import (
    Component,
    Criticality,
    Interface,
    Level,
    Model,
    Node,
    Package,
    Release,
    Requirement,
    RequirementsContainer,
    SatisfyLink,
    SourceSpan,
    Status,
    TraceLink,
)

HEADER = "# reqforge model\n"

TOP_LEVEL = frozenset({"model", "case_study", "framework", "tool", "package", "trace", "satisfy"})

IDENT, STRING, LBRACE, RBRACE, COLON, COMMA, ARROW, EOF = (
    "identifier", "string", "'{'", "'}'", "':'", "','", "'->'", "end of file",
)

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*(?:-[A-Za-z0-9]+)*")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


@dataclass
class ParseResult:
    model: Optional[Model]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.model is not None


@dataclass
class Token:
    kind: str
    value: str
    line: int
    column: int
    first_on_line: bool = False

    def describe(self) -> str:
        if self.kind in (IDENT, STRING):
            return f"{self.kind} {self.value!r}"
        return self.kind


def tokenize(text: str, file_name: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    i, line, col = 0, 1, 1
    n = len(text)
    last_line = 0

    def emit(kind, value, tl, tc):
        nonlocal last_line
        tokens.append(Token(kind, value, tl, tc, first_on_line=tl != last_line))
        last_line = tl

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r\f\v\ufeff":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch == '"':
            value, j, problem = _scan_string(text, i)
            if problem:
                diags.append(error("E022", problem, None, SourceSpan(file_name, line, start_col)))
            emit(STRING, value, line, start_col)
            col += j - i
            i = j
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            emit(IDENT, m.group(), line, start_col)
            col += m.end() - i
            i = m.end()
            continue
        if text.startswith("->", i):
            emit(ARROW, "->", line, start_col)
            i += 2
            col += 2
            continue
        single = {"{": LBRACE, "}": RBRACE, ":": COLON, ",": COMMA}.get(ch)
        if single:
            emit(single, ch, line, start_col)
        else:
            diags.append(error("E022", f"unexpected character {ch!r}", None, SourceSpan(file_name, line, start_col)))
        i += 1
        col += 1
    tokens.append(Token(EOF, "", line, col, first_on_line=True))
    return tokens, diags


def _scan_string(text: str, start: int) -> tuple[str, int, Optional[str]]:
    """Scan a quoted string starting at ``start``; stop at the closing quote or end of line."""
    out = []
    i = start + 1
    n = len(text)
    problem = None
    while i < n:
        ch = text[i]
        if ch == '"':
            return "".join(out), i + 1, problem
        if ch == "\n":
            break
        if ch == "\\" and i + 1 < n:
            esc = text[i + 1]
            if esc in _ESCAPES:
                out.append(_ESCAPES[esc])
                i += 2
                continue
            if esc == "u" and re.fullmatch(r"[0-9a-fA-F]{4}", text[i + 2:i + 6]):
                out.append(chr(int(text[i + 2:i + 6], 16)))
                i += 6
                continue
            problem = problem or f"invalid escape sequence '\\{esc}'"
            i += 1
            continue
        out.append(ch)
        i += 1
    return "".join(out), i, "unterminated string"


class _Sync(Exception):
    """Abort the current top-level item and resynchronise."""


class Parser:
    def __init__(self, text: str, file_name: str):
        self.file = file_name
        self.tokens, self.diags = tokenize(text, file_name)
        self.pos = 0
        self.model = Model()

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def span(self, tok: Optional[Token] = None) -> SourceSpan:
        tok = tok or self.tok
        return SourceSpan(self.file, tok.line, tok.column)

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        return self.tok.kind == kind and (value is None or self.tok.value == value)

    def fail(self, message: str, tok: Optional[Token] = None):
        self.diags.append(error("E021", message, None, self.span(tok)))
        raise _Sync()

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {what or kind}, found {self.tok.describe()}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.at(IDENT, word):
            self.fail(f"expected '{word}', found {self.tok.describe()}")
        return self.advance()

    # grammar

    def parse(self) -> ParseResult:
        while not self.at(EOF):
            start = self.pos
            try:
                self.item()
            except _Sync:
                self.resync(start)
        diags = sort_diagnostics(self.diags)
        return ParseResult(None if has_errors(diags) else self.model, diags)

    def resync(self, start: int):
        while not self.at(EOF):
            tok = self.tok
            if self.pos != start and tok.first_on_line and tok.kind == IDENT and tok.value in TOP_LEVEL:
                return
            self.advance()

    def item(self):
        tok = self.tok
        if tok.kind != IDENT:
            self.fail(f"expected a declaration, found {tok.describe()}")
        word = tok.value
        if word == "model":
            self.advance()
            name = self.expect(STRING, "model name string").value
            if self.model.name and self.model.name != name:
                self.diags.append(warning("W002", f"model renamed from {self.model.name!r} to {name!r}",
                                          None, self.span(tok)))
            self.model.name = name
        elif word in ("case_study", "framework", "tool"):
            self.model.containers.append(self.container())
        elif word == "package":
            self.model.packages.append(self.package())
        elif word == "trace":
            self.advance()
            src, dst = self.link()
            self.model.traces.append(TraceLink(src, dst, self.span(tok)))
        elif word == "satisfy":
            self.advance()
            src, dst = self.link()
            self.model.satisfies.append(SatisfyLink(src, dst, self.span(tok)))
        else:
            self.fail(f"unknown keyword '{word}'")

    def link(self) -> tuple[str, str]:
        src = self.expect(IDENT, "identifier").value
        self.expect(ARROW)
        dst = self.expect(IDENT, "identifier").value
        return src, dst

    def container(self) -> RequirementsContainer:
        kind_tok = self.advance()
        self.expect_keyword("container")
        if self.at(IDENT):
            ident = self.advance().value
            name = self.expect(STRING, "container name string").value
        else:
            name = self.expect(STRING, "container identifier or name").value
            ident = derive_identifier(name)
        cont = RequirementsContainer(ident, name, Level(kind_tok.value), span=self.span(kind_tok))
        self.expect(LBRACE)
        seen = set()
        while not self.at(RBRACE):
            if self.at(IDENT, "requirement"):
                cont.requirements.append(self.requirement())
            elif self.at(IDENT, "owner"):
                cont.owner = self.string_property(seen)
            else:
                self.unknown_member("container")
        self.advance()
        return cont

    def requirement(self) -> Requirement:
        kw = self.advance()
        ident = self.expect(IDENT, "requirement identifier").value
        self.expect(LBRACE)
        props: dict = {}
        seen: set = set()
        enums = {"criticality": Criticality, "release": Release, "status": Status}
        while not self.at(RBRACE):
            key = self.tok.value if self.tok.kind == IDENT else None
            if key in ("definition", "comments"):
                props[key] = self.string_property(seen)
            elif key in enums:
                props[key] = self.enum_property(seen, enums[key], ident)
            else:
                self.unknown_member("requirement")
        self.advance()
        missing = [k for k in ("definition", "criticality", "release", "status") if k not in props]
        if missing:
            self.diags.append(error("E023", f"requirement '{ident}' is missing {', '.join(missing)}",
                                    ident, self.span(kw)))
        return Requirement(
            ident,
            props.get("definition", ""),
            props.get("criticality"),
            props.get("release"),
            props.get("status"),
            props.get("comments") or None,
            span=self.span(kw),
        )

    def package(self) -> Package:
        kw = self.advance()
        ident = self.expect(IDENT, "package identifier").value
        name = self.expect(STRING, "package name string").value
        pkg = Package(ident, name, span=self.span(kw))
        self.expect(LBRACE)
        while not self.at(RBRACE):
            if self.at(IDENT, "component"):
                pkg.components.append(self.component())
            elif self.at(IDENT, "interface"):
                kw2 = self.advance()
                i, nm, desc = self.described()
                pkg.interfaces.append(Interface(i, nm, desc, span=self.span(kw2)))
            elif self.at(IDENT, "node"):
                kw2 = self.advance()
                i, nm, desc = self.described()
                pkg.nodes.append(Node(i, nm, desc, span=self.span(kw2)))
            else:
                self.unknown_member("package")
        self.advance()
        return pkg

    def described(self) -> tuple[str, str, Optional[str]]:
        ident = self.expect(IDENT, "identifier").value
        name = self.expect(STRING, "name string").value
        desc = None
        if self.at(LBRACE):
            self.advance()
            seen: set = set()
            while not self.at(RBRACE):
                if self.at(IDENT, "description"):
                    desc = self.string_property(seen) or None
                else:
                    self.unknown_member("interface/node")
            self.advance()
        return ident, name, desc

    def component(self) -> Component:
        kw = self.advance()
        ident = self.expect(IDENT, "component identifier").value
        name = self.expect(STRING, "component name string").value
        comp = Component(ident, name, span=self.span(kw))
        self.expect(LBRACE)
        seen: set = set()
        while not self.at(RBRACE):
            key = self.tok.value if self.tok.kind == IDENT else None
            if key == "component":
                comp.sub_components.append(self.component())
            elif key == "owner":
                comp.owner = self.string_property(seen)
            elif key in ("provides", "consumes", "deployed_on"):
                self.advance()
                self.expect(COLON)
                refs = [self.expect(IDENT, "identifier").value]
                while self.at(COMMA):
                    self.advance()
                    refs.append(self.expect(IDENT, "identifier").value)
                target = {"provides": comp.provided, "consumes": comp.consumed, "deployed_on": comp.deployed_on}[key]
                target.extend(refs)
            else:
                self.unknown_member("component")
        self.advance()
        return comp

    def string_property(self, seen: set) -> str:
        key_tok = self.advance()
        self.check_duplicate(key_tok, seen)
        self.expect(COLON)
        return self.expect(STRING, f"string value for '{key_tok.value}'").value

    def enum_property(self, seen: set, enum, subject: str):
        key_tok = self.advance()
        self.check_duplicate(key_tok, seen)
        self.expect(COLON)
        tok = self.tok
        if tok.kind not in (IDENT, STRING):
            self.fail(f"expected {key_tok.value} value, found {tok.describe()}")
        self.advance()
        try:
            return enum(tok.value)
        except ValueError:
            allowed = ", ".join(e.value for e in enum)
            self.diags.append(error("E020", f"invalid {key_tok.value} literal {tok.value!r} (expected one of {allowed})",
                                    subject, self.span(tok)))
            return tok.value

    def check_duplicate(self, key_tok: Token, seen: set):
        if key_tok.value in seen:
            self.diags.append(error("E024", f"property '{key_tok.value}' given more than once",
                                    None, self.span(key_tok)))
        seen.add(key_tok.value)

    def unknown_member(self, where: str):
        tok = self.tok
        if tok.kind == EOF:
            self.fail("unexpected end of file, missing '}'")
        if tok.kind == IDENT and tok.value in TOP_LEVEL and tok.first_on_line:
            self.fail(f"missing '}}' before '{tok.value}'")
        if tok.kind == IDENT and self.tokens[self.pos + 1].kind == COLON:
            # unknown property: report it and skip its value locally
            self.diags.append(error("E021", f"unknown {where} property '{tok.value}'", None, self.span(tok)))
            self.advance()
            self.advance()
            if self.tok.kind in (IDENT, STRING):
                self.advance()
                while self.at(COMMA):
                    self.advance()
                    if self.tok.kind in (IDENT, STRING):
                        self.advance()
            return
        if tok.kind == IDENT:
            self.fail(f"unknown keyword '{tok.value}' in {where}")
        self.fail(f"unexpected {tok.describe()} in {where}")


def derive_identifier(name: str) -> str:
    """Identifier for a container declared by display name only."""
    slug = re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_")
    if not slug or not slug[0].isalpha():
        slug = "C_" + slug if slug else "C"
    return slug


def parse(text: str, file_name: str = "<input>") -> ParseResult:
    return Parser(text, file_name).parse()


# serializer

def quote(text: str) -> str:
    out = ['"']
    for ch in text:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20 or ch in "\x7f\ufeff":
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _value(v) -> str:
    return v.value if hasattr(v, "value") else str(v)


def serialize(model: Model) -> str:
    """Canonical text: 2-space indentation, declaration order, links sorted last."""
    blocks: list[list[str]] = []
    if model.name:
        blocks.append([f"model {quote(model.name)}"])
    for cont in model.containers:
        lines = [f"{_value(cont.kind)} container {cont.id} {quote(cont.name)} {{"]
        if cont.owner is not None:
            lines.append(f"  owner: {quote(cont.owner)}")
        for req in cont.requirements:
            lines.append(f"  requirement {req.id} {{")
            lines.append(f"    definition: {quote(req.definition)}")
            lines.append(f"    criticality: {_value(req.criticality)}")
            lines.append(f"    release: {_value(req.release)}")
            lines.append(f"    status: {_value(req.status)}")
            if req.comments:
                lines.append(f"    comments: {quote(req.comments)}")
            lines.append("  }")
        lines.append("}")
        blocks.append(lines)
    for pkg in model.packages:
        lines = [f"package {pkg.id} {quote(pkg.name)} {{"]
        for comp in pkg.components:
            _component_lines(comp, 1, lines)
        for kw, items in (("interface", pkg.interfaces), ("node", pkg.nodes)):
            for it in items:
                head = f"  {kw} {it.id} {quote(it.name)}"
                if it.description:
                    lines += [head + " {", f"    description: {quote(it.description)}", "  }"]
                else:
                    lines.append(head)
        lines.append("}")
        blocks.append(lines)
    links = [f"trace {t.source} -> {t.target}" for t in sorted(model.traces, key=lambda t: t.key)]
    links += [f"satisfy {s.source} -> {s.target}" for s in sorted(model.satisfies, key=lambda s: s.key)]
    if links:
        blocks.append(links)
    body = "\n\n".join("\n".join(b) for b in blocks)
    return HEADER + ("\n" + body + "\n" if body else "")


def _component_lines(comp: Component, depth: int, lines: list[str]):
    pad = "  " * depth
    head = f"{pad}component {comp.id} {quote(comp.name)} {{"
    inner = []
    if comp.owner is not None:
        inner.append(f"{pad}  owner: {quote(comp.owner)}")
    for kw, refs in (("provides", comp.provided), ("consumes", comp.consumed), ("deployed_on", comp.deployed_on)):
        if refs:
            inner.append(f"{pad}  {kw}: {', '.join(refs)}")
    for sub in comp.sub_components:
        _component_lines(sub, depth + 1, inner)
    if inner:
        lines += [head, *inner, f"{pad}}}"]
    else:
        lines.append(head + "}")
