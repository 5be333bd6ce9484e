"""In-memory requirements/architecture model.

Elements are plain dataclasses. A loaded model is treated as immutable:
analyses never mutate it and loaders always build a fresh instance.
Source spans are carried for diagnostics but excluded from equality so
that two models parsed from differently laid out text compare equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Optional, Union

IDENTIFIER_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*(?:-[A-Za-z0-9]+)*")


def is_identifier(text: object) -> bool:
    return isinstance(text, str) and IDENTIFIER_RE.fullmatch(text) is not None


class Criticality(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class Release(str, Enum):
    BASELINE = "baseline"
    INITIAL = "initial"
    INTERMEDIATE = "intermediate"
    FINAL = "final"

    @property
    def rank(self) -> int:
        return _RELEASE_ORDER.index(self)

    def __lt__(self, other):
        if not isinstance(other, Release):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other):
        if not isinstance(other, Release):
            return NotImplemented
        return self.rank <= other.rank

    def __gt__(self, other):
        if not isinstance(other, Release):
            return NotImplemented
        return self.rank > other.rank

    def __ge__(self, other):
        if not isinstance(other, Release):
            return NotImplemented
        return self.rank >= other.rank


_RELEASE_ORDER = (Release.BASELINE, Release.INITIAL, Release.INTERMEDIATE, Release.FINAL)


class Status(str, Enum):
    PLANNED = "planned"
    IN_PROGRESS = "in_progress"
    DONE = "done"
    POSTPONED = "postponed"
    CANCELLED = "cancelled"


class Level(str, Enum):
    """Requirement level, carried by the container kind."""

    CASE_STUDY = "case_study"
    FRAMEWORK = "framework"
    TOOL = "tool"

    @property
    def rank(self) -> int:
        # traces must go from lower to higher rank
        return _LEVEL_ORDER.index(self)


_LEVEL_ORDER = (Level.TOOL, Level.FRAMEWORK, Level.CASE_STUDY)


@dataclass(frozen=True, order=True)
class SourceSpan:
    file: str
    line: int = 1
    column: int = 1

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"span line/column must be >= 1, got {self.line}:{self.column}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass
class Requirement:
    id: str
    definition: str
    criticality: Criticality
    release: Release
    status: Status
    comments: Optional[str] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class RequirementsContainer:
    id: str
    name: str
    kind: Level
    owner: Optional[str] = None
    requirements: list[Requirement] = field(default_factory=list)
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def level(self) -> Level:
        return self.kind


@dataclass
class Interface:
    id: str
    name: str
    description: Optional[str] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class Node:
    id: str
    name: str
    description: Optional[str] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class Component:
    id: str
    name: str
    owner: Optional[str] = None
    sub_components: list[Component] = field(default_factory=list)
    provided: list[str] = field(default_factory=list)
    consumed: list[str] = field(default_factory=list)
    deployed_on: list[str] = field(default_factory=list)
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class Package:
    id: str
    name: str
    components: list[Component] = field(default_factory=list)
    interfaces: list[Interface] = field(default_factory=list)
    nodes: list[Node] = field(default_factory=list)
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)


@dataclass
class TraceLink:
    source: str
    target: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def key(self) -> tuple[str, str]:
        return (self.source, self.target)


@dataclass
class SatisfyLink:
    source: str
    target: str
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    @property
    def key(self) -> tuple[str, str]:
        return (self.source, self.target)


Element = Union[RequirementsContainer, Requirement, Package, Component, Interface, Node]


@dataclass
class Model:
    name: str = ""
    containers: list[RequirementsContainer] = field(default_factory=list)
    packages: list[Package] = field(default_factory=list)
    traces: list[TraceLink] = field(default_factory=list)
    satisfies: list[SatisfyLink] = field(default_factory=list)

    def requirements(self) -> Iterator[tuple[RequirementsContainer, Requirement]]:
        for container in self.containers:
            for req in container.requirements:
                yield container, req

    def components(self) -> Iterator[tuple[Package, Component]]:
        """All components depth-first in declaration order, sub-components included."""
        for package in self.packages:
            for comp in walk_components(package.components):
                yield package, comp

    def elements(self) -> Iterator[Element]:
        """Every named element, in declaration order."""
        for container in self.containers:
            yield container
            yield from container.requirements
        for package in self.packages:
            yield package
            yield from walk_components(package.components)
            yield from package.interfaces
            yield from package.nodes

    def index(self) -> dict[str, Element]:
        # first declaration wins on duplicates; validate() reports the rest
        table: dict[str, Element] = {}
        for element in self.elements():
            table.setdefault(element.id, element)
        return table

    def level_of(self) -> dict[str, Level]:
        return {req.id: container.kind for container, req in self.requirements()}

    def normalized(self) -> Model:
        """Copy with links in canonical (source, target) order."""
        return replace(
            self,
            traces=sorted(self.traces, key=lambda t: t.key),
            satisfies=sorted(self.satisfies, key=lambda s: s.key),
        )


def walk_components(components: list[Component]) -> Iterator[Component]:
    """Pre-order walk of a component forest.

    Guarded against containment cycles: a component already on the
    current path is not descended into again.
    """
    stack: list[tuple[Component, frozenset[int]]] = [
        (comp, frozenset()) for comp in reversed(components)
    ]
    while stack:
        comp, ancestors = stack.pop()
        yield comp
        path = ancestors | {id(comp)}
        for child in reversed(comp.sub_components):
            if id(child) not in path:
                stack.append((child, path))


def structurally_equal(a: Model, b: Model) -> bool:
    """Equality ignoring source spans and link declaration order."""
    return a.normalized() == b.normalized()


def resolve(model: Model, ident: str) -> Optional[Element]:
    """Return the element declared with ``ident``, or None."""
    for element in model.elements():
        if element.id == ident:
            return element
    return None


def merge_models(models: list[Model]) -> Model:
    """Concatenate several models into one, keeping the first non-empty name."""
    merged = Model()
    for m in models:
        if not merged.name and m.name:
            merged.name = m.name
        merged.containers.extend(m.containers)
        merged.packages.extend(m.packages)
        merged.traces.extend(m.traces)
        merged.satisfies.extend(m.satisfies)
    return merged


@dataclass(frozen=True)
class PackageStats:
    components: int
    interfaces: int
    nodes: int

    @property
    def elements(self) -> int:
        # the package itself counts as an architecture element
        return 1 + self.components + self.interfaces + self.nodes


@dataclass(frozen=True)
class ModelStats:
    requirement_count: int
    architecture_element_count: int
    total_element_count: int
    per_container: dict[str, int]
    per_package: dict[str, PackageStats]

    def to_dict(self) -> dict:
        return {
            "requirement_count": self.requirement_count,
            "architecture_element_count": self.architecture_element_count,
            "total_element_count": self.total_element_count,
            "per_container": dict(self.per_container),
            "per_package": {
                pid: {
                    "components": ps.components,
                    "interfaces": ps.interfaces,
                    "nodes": ps.nodes,
                    "elements": ps.elements,
                }
                for pid, ps in self.per_package.items()
            },
        }


def stats(model: Model) -> ModelStats:
    per_container = {c.id: len(c.requirements) for c in model.containers}
    per_package = {
        p.id: PackageStats(
            components=sum(1 for _ in walk_components(p.components)),
            interfaces=len(p.interfaces),
            nodes=len(p.nodes),
        )
        for p in model.packages
    }
    reqs = sum(per_container.values())
    arch = sum(ps.elements for ps in per_package.values())
    return ModelStats(
        requirement_count=reqs,
        architecture_element_count=arch,
        total_element_count=reqs + arch,
        per_container=per_container,
        per_package=per_package,
    )
