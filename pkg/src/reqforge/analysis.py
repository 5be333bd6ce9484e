"""Traceability analyses over a valid model.

Every function here is pure and returns plain data with deterministic,
lexicographic ordering. ``to_dict`` methods give the JSON shape used by
the CLI (key order is part of the contract).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .graphs import adjacency, reachable_from
from .model import Level, Model, Release, Requirement, Status


@dataclass(frozen=True)
class TraceClosure:
    pairs: frozenset[tuple[str, str]]

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def successors(self, ident: str) -> list[str]:
        return sorted(b for a, b in self.pairs if a == ident)

    def predecessors(self, ident: str) -> list[str]:
        return sorted(a for a, b in self.pairs if b == ident)

    def to_dict(self) -> dict:
        return {"pairs": [list(p) for p in sorted(self.pairs)]}


def trace_closure(model: Model) -> TraceClosure:
    """All (from, to) pairs joined by one or more trace links."""
    succ = adjacency(t.key for t in model.traces)
    pairs = set()
    for start in succ:
        for end in reachable_from(succ, start):
            pairs.add((start, end))
    return TraceClosure(frozenset(pairs))


def witness_chain(model: Model, source: str, target: str) -> Optional[list[str]]:
    """A shortest trace path source -> ... -> target, or None."""
    succ = adjacency(t.key for t in model.traces)
    parent = {source: None}
    frontier = [source]
    while frontier:
        nxt = []
        for node in frontier:
            for child in succ.get(node, ()):
                if child in parent:
                    continue
                parent[child] = node
                if child == target:
                    chain = [child]
                    while parent[chain[-1]] is not None:
                        chain.append(parent[chain[-1]])
                    return chain[::-1]
                nxt.append(child)
        frontier = nxt
    return None


def _requirements_at(model: Model, level: Level) -> list[Requirement]:
    return sorted((r for c, r in model.requirements() if c.kind == level), key=lambda r: r.id)


@dataclass(frozen=True)
class TraceabilityMatrix:
    from_level: Level
    to_level: Level
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    cells: tuple[tuple[bool, ...], ...]

    def cell(self, row: str, col: str) -> bool:
        return self.cells[self.rows.index(row)][self.cols.index(col)]

    def to_dict(self) -> dict:
        return {
            "from_level": self.from_level.value,
            "to_level": self.to_level.value,
            "rows": list(self.rows),
            "cols": list(self.cols),
            "cells": [list(r) for r in self.cells],
        }


def matrix(model: Model, from_level: Level, to_level: Level,
           closure: Optional[TraceClosure] = None) -> TraceabilityMatrix:
    closure = closure or trace_closure(model)
    rows = tuple(r.id for r in _requirements_at(model, Level(from_level)))
    cols = tuple(r.id for r in _requirements_at(model, Level(to_level)))
    cells = tuple(tuple((r, c) in closure for c in cols) for r in rows)
    return TraceabilityMatrix(Level(from_level), Level(to_level), rows, cols, cells)


class Strictness(str, Enum):
    LENIENT = "lenient"
    STRICT = "strict"


class GapReason(str, Enum):
    NO_INCOMING_TRACE = "no_incoming_trace"
    TRACED_BUT_UNSATISFIED = "traced_but_unsatisfied"


@dataclass(frozen=True)
class GapEntry:
    case_study_req: str
    reason: GapReason


@dataclass(frozen=True)
class GapReport:
    strictness: Strictness
    entries: tuple[GapEntry, ...]
    covered: tuple[str, ...]

    @property
    def covered_count(self) -> int:
        return len(self.covered)

    @property
    def uncovered_count(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {
            "strictness": self.strictness.value,
            "covered_count": self.covered_count,
            "uncovered_count": self.uncovered_count,
            "covered": list(self.covered),
            "entries": [{"case_study_req": e.case_study_req, "reason": e.reason.value} for e in self.entries],
        }


def _satisfied(model: Model) -> set[str]:
    return {s.target for s in model.satisfies}


def _counts_for_coverage(req: Requirement, strictness: Strictness) -> bool:
    if strictness is Strictness.STRICT:
        return req.status is Status.DONE
    return req.status is not Status.CANCELLED


def _tool_reaching(model: Model, closure: TraceClosure) -> dict[str, list[Requirement]]:
    """Case-study id -> tool requirements that reach it, sorted by id."""
    tool = {r.id: r for r in _requirements_at(model, Level.TOOL)}
    reaching: dict[str, list[Requirement]] = {}
    for a, b in sorted(closure.pairs):
        if a in tool:
            reaching.setdefault(b, []).append(tool[a])
    return reaching


def gap_analysis(model: Model, strictness: Strictness = Strictness.LENIENT,
                 closure: Optional[TraceClosure] = None) -> GapReport:
    """Which case-study requirements are reached by a satisfied tool requirement.

    Covered means some tool requirement T reaches the case-study
    requirement through traces, at least one component satisfies T, and
    T's status qualifies (lenient: not cancelled; strict: done).
    """
    strictness = Strictness(strictness)
    closure = closure or trace_closure(model)
    satisfied = _satisfied(model)
    reaching = _tool_reaching(model, closure)
    covered, entries = [], []
    for cs in _requirements_at(model, Level.CASE_STUDY):
        tools = reaching.get(cs.id, [])
        if any(t.id in satisfied and _counts_for_coverage(t, strictness) for t in tools):
            covered.append(cs.id)
        elif tools:
            entries.append(GapEntry(cs.id, GapReason.TRACED_BUT_UNSATISFIED))
        else:
            entries.append(GapEntry(cs.id, GapReason.NO_INCOMING_TRACE))
    return GapReport(strictness, tuple(entries), tuple(covered))


@dataclass(frozen=True)
class CoveringTool:
    id: str
    release: Release
    status: Status


@dataclass(frozen=True)
class RoadmapEntry:
    case_study_req: str
    covering_tool_reqs: tuple[CoveringTool, ...]
    first_available: Optional[Release]
    fully_available: Optional[Release]

    def to_dict(self) -> dict:
        return {
            "case_study_req": self.case_study_req,
            "covering_tool_reqs": [
                {"id": t.id, "release": t.release.value, "status": t.status.value}
                for t in self.covering_tool_reqs
            ],
            "first_available": self.first_available.value if self.first_available else None,
            "fully_available": self.fully_available.value if self.fully_available else None,
        }


def roadmap(model: Model, closure: Optional[TraceClosure] = None) -> list[RoadmapEntry]:
    """Per case-study requirement, the milestones at which its coverage arrives.

    Only satisfied, non-cancelled tool requirements count. first_available
    is the earliest of their releases, fully_available the latest.
    """
    closure = closure or trace_closure(model)
    satisfied = _satisfied(model)
    reaching = _tool_reaching(model, closure)
    entries = []
    for cs in _requirements_at(model, Level.CASE_STUDY):
        tools = tuple(
            CoveringTool(t.id, t.release, t.status)
            for t in reaching.get(cs.id, [])
            if t.id in satisfied and t.status is not Status.CANCELLED
        )
        releases = [t.release for t in tools]
        entries.append(RoadmapEntry(
            cs.id,
            tools,
            min(releases) if releases else None,
            max(releases) if releases else None,
        ))
    return entries


@dataclass(frozen=True)
class StatusCounts:
    counts: dict[Status, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def completion(self) -> Fraction:
        denom = self.total - self.counts[Status.CANCELLED]
        if denom == 0:
            return Fraction(0)
        return Fraction(self.counts[Status.DONE], denom)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "counts": {s.value: self.counts[s] for s in Status},
            "completion": float(self.completion),
        }


def _tally(reqs) -> StatusCounts:
    counts = {s: 0 for s in Status}
    for r in reqs:
        counts[r.status] += 1
    return StatusCounts(counts)


@dataclass(frozen=True)
class StatusRollup:
    per_container: dict[str, StatusCounts] = field(default_factory=dict)
    per_level: dict[Level, StatusCounts] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "per_container": {cid: sc.to_dict() for cid, sc in self.per_container.items()},
            "per_level": {lvl.value: sc.to_dict() for lvl, sc in self.per_level.items()},
        }


def status_rollup(model: Model) -> StatusRollup:
    per_container = {c.id: _tally(c.requirements) for c in model.containers}
    per_level = {
        lvl: _tally(r for c, r in model.requirements() if c.kind == lvl)
        for lvl in (Level.TOOL, Level.FRAMEWORK, Level.CASE_STUDY)
    }
    return StatusRollup(per_container, per_level)
