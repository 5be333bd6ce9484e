"""Independent, deliberately naive oracles for the analysis functions."""

import numpy as np

from reqforge.analysis import Strictness
from reqforge.model import Level, Status


def floyd_warshall(model):
    ids = sorted({x for t in model.traces for x in t.key})
    reach = {(a, b): False for a in ids for b in ids}
    for t in model.traces:
        reach[t.key] = True
    for k in ids:
        for i in ids:
            if reach[(i, k)]:
                for j in ids:
                    if reach[(k, j)]:
                        reach[(i, j)] = True
    return {p for p, v in reach.items() if v}


def matrix_power_closure(model):
    """Pairs (a, b) with a path of length >= 1, from powers of the adjacency matrix."""
    ids = sorted({r.id for _, r in model.requirements()} | {x for t in model.traces for x in t.key})
    n = len(ids)
    if n == 0:
        return set()
    pos = {x: i for i, x in enumerate(ids)}
    adj = np.zeros((n, n), dtype=np.int64)
    for t in model.traces:
        adj[pos[t.source], pos[t.target]] = 1
    reach = np.zeros_like(adj)
    power = adj.copy()
    for _ in range(n):
        reach |= power > 0
        power = np.minimum(power @ adj, 1)
    return {(ids[i], ids[j]) for i, j in zip(*np.nonzero(reach))}


def path_ends(model, start):
    """Every end point of every simple trace path from ``start`` (length >= 1)."""
    out = {}
    for t in model.traces:
        out.setdefault(t.source, []).append(t.target)
    ends = set()

    def go(node, seen):
        for nxt in out.get(node, []):
            ends.add(nxt)
            if nxt not in seen:
                go(nxt, seen | {nxt})

    go(start, {start})
    return ends


def gap_oracle(model, strictness):
    """Case-study id -> "covered" or the gap reason, by exhaustive path enumeration."""
    levels = {r.id: c.kind for c, r in model.requirements()}
    reqs = {r.id: r for _, r in model.requirements()}
    satisfied = {s.target for s in model.satisfies}
    if Strictness(strictness) is Strictness.STRICT:
        def counts(r):
            return r.status is Status.DONE
    else:
        def counts(r):
            return r.status is not Status.CANCELLED
    reached_any, reached_good = set(), set()
    for rid, lvl in levels.items():
        if lvl is not Level.TOOL:
            continue
        ends = path_ends(model, rid)
        reached_any |= ends
        if rid in satisfied and counts(reqs[rid]):
            reached_good |= ends
    result = {}
    for rid, lvl in levels.items():
        if lvl is Level.CASE_STUDY:
            if rid in reached_good:
                result[rid] = "covered"
            elif rid in reached_any:
                result[rid] = "traced_but_unsatisfied"
            else:
                result[rid] = "no_incoming_trace"
    return result


def gap_as_dict(report):
    out = {c: "covered" for c in report.covered}
    out.update({e.case_study_req: e.reason.value for e in report.entries})
    return out
