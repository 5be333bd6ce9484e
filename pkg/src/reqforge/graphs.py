"""Small directed-graph helpers over adjacency dicts keyed by identifier."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, TypeVar

T = TypeVar("T", bound=Hashable)


def adjacency(edges: Iterable[tuple[T, T]]) -> dict[T, list[T]]:
    """Successor lists, each sorted, keys sorted; duplicates collapsed."""
    succ: dict[T, set[T]] = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())
    return {k: sorted(succ[k]) for k in sorted(succ)}


def reachable_from(succ: Mapping[T, list[T]], start: T) -> set[T]:
    """Nodes reachable from ``start`` by one or more edges."""
    seen: set[T] = set()
    stack = list(succ.get(start, ()))
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(succ.get(node, ()))
    return seen


def strongly_connected_components(succ: Mapping[T, list[T]]) -> list[list[T]]:
    """Tarjan's algorithm, iterative. Components come out in reverse topological order."""
    index: dict[T, int] = {}
    low: dict[T, int] = {}
    on_stack: set[T] = set()
    stack: list[T] = []
    result: list[list[T]] = []
    counter = 0

    for root in succ:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, i = work[-1]
            if i == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            children = succ.get(node, ())
            if i < len(children):
                work[-1] = (node, i + 1)
                child = children[i]
                if child not in index:
                    work.append((child, 0))
                elif child in on_stack:
                    low[node] = min(low[node], index[child])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                result.append(comp)
    return result


def cycles(succ: Mapping[T, list[T]]) -> list[list[T]]:
    """Non-trivial strongly connected components (incl. self-loops), members sorted."""
    found = []
    for comp in strongly_connected_components(succ):
        if len(comp) > 1 or comp[0] in succ.get(comp[0], ()):
            found.append(sorted(comp))
    return sorted(found)
