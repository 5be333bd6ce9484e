import copy
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import corpus_files, load_fixture
from randmodels import random_model
from reqforge.dsl import parse
from reqforge.graphs import adjacency
from reqforge.model import (
    Component,
    Criticality,
    Interface,
    Level,
    Model,
    Package,
    Release,
    Requirement,
    RequirementsContainer,
    SatisfyLink,
    Status,
    TraceLink,
)
from reqforge.validate import validate


def _req(ident):
    return Requirement(ident, "text", Criticality.HIGH, Release.INITIAL, Status.PLANNED)


def _codes(diags):
    return [d.code for d in diags]


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_corpus_is_valid(path):
    result = parse(path.read_text(encoding="utf-8"), str(path))
    assert result.diagnostics == []
    assert validate(result.model) == []


def test_duplicate_requirement_id():
    m = Model(containers=[RequirementsContainer("C", "c", Level.TOOL, requirements=[_req("R-1"), _req("R-1")])])
    assert _codes(validate(m)) == ["E001"]


def test_wrong_trace_direction(fig3):
    fig3.traces.append(TraceLink("SYS-020201", "MODELIO-030"))
    diags = validate(fig3)
    assert _codes(diags) == ["E010"]
    assert diags[0].subject == "SYS-020201"


def _two_tool_reqs():
    return Model(containers=[RequirementsContainer("C", "c", Level.TOOL, requirements=[_req("A"), _req("B")])],
                 traces=[TraceLink("A", "B"), TraceLink("B", "A")])


def _has_cycle_dfs(edges):
    """Plain recursive DFS with colouring; independent of the SCC code."""
    succ = adjacency(edges)
    colour = {}

    def visit(n):
        colour[n] = "grey"
        for m in succ[n]:
            if colour.get(m) == "grey" or (m not in colour and visit(m)):
                return True
        colour[n] = "black"
        return False

    return any(n not in colour and visit(n) for n in succ)


def test_relaxed_two_node_cycle():
    m = _two_tool_reqs()
    assert _has_cycle_dfs([t.key for t in m.traces])
    assert _codes(validate(m, relaxed_levels=True)) == ["E011"]


def test_same_level_trace_default_mode_is_level_error():
    m = _two_tool_reqs()
    m.traces = [TraceLink("A", "B")]
    assert _codes(validate(m)) == ["E010"]
    assert validate(m, relaxed_levels=True) == []


def test_backward_trace_still_rejected_in_relaxed_mode(fig3):
    fig3.traces.append(TraceLink("NOK-02", "MODELIO-030"))
    assert _codes(validate(fig3, relaxed_levels=True)) == ["E010"]


def test_self_loop():
    m = _two_tool_reqs()
    m.traces = [TraceLink("A", "A")]
    assert _codes(validate(m)) == ["E010"]
    assert _codes(validate(m, relaxed_levels=True)) == ["E011"]


def test_empty_container_and_package_warn():
    m = Model(containers=[RequirementsContainer("C", "c", Level.TOOL)], packages=[Package("P", "p")])
    diags = validate(m)
    assert _codes(diags) == ["W001", "W001"]
    assert all(not d.is_error for d in diags)


def test_diagnostics_sorted_by_file_line_code():
    text = (
        'tool container T "t" {\n'
        '  requirement R-1 { definition: "x" criticality: low release: final status: done }\n'
        '  requirement R-1 { definition: " " criticality: low release: final status: done }\n'
        '}\n'
        'trace R-1 -> NOPE\n'
    )
    m = parse(text, "f.req").model
    diags = validate(m)
    assert [(d.location.line, d.code) for d in diags] == [(3, "E001"), (3, "E003"), (5, "E005")]


# mutation catalogue: every entry must yield exactly its paired code

def _mut_duplicate_id(m):
    m.containers[0].requirements.append(_req("MODELIO-030"))


def _mut_duplicate_across_categories(m):
    m.packages[0].interfaces.append(Interface("NOK-02", "clash"))


def _mut_invalid_identifier(m):
    m.packages[0].components[0].id = "9bad id"
    m.satisfies = []


def _mut_empty_definition(m):
    m.containers[0].requirements[0].definition = "   "


def _mut_bad_enum(m):
    m.containers[0].requirements[0].status = "onhold"


def _mut_bad_kind(m):
    m.containers[1].kind = "platform"


def _mut_dangling_trace(m):
    m.traces.append(TraceLink("MODELIO-030", "NOK-99"))


def _mut_trace_to_component(m):
    m.traces.append(TraceLink("MODELIO-030", "MODELIO"))


def _mut_satisfy_from_requirement(m):
    m.satisfies.append(SatisfyLink("SYS-020201", "MODELIO-030"))


def _mut_satisfy_dangling_target(m):
    m.satisfies.append(SatisfyLink("MODELIO", "MISSING-1"))


def _mut_dangling_interface(m):
    m.packages[0].components[0].consumed.append("NO-SUCH-IF")


def _mut_dangling_node(m):
    m.packages[0].components[0].deployed_on.append("XMI-EXPORT")


def _mut_direction_flip(m):
    t = m.traces[0]
    m.traces[0] = TraceLink(t.target, t.source)


def _mut_duplicate_trace(m):
    m.traces.append(TraceLink("MODELIO-030", "SYS-020201"))


def _mut_duplicate_satisfy(m):
    m.satisfies.append(SatisfyLink("MODELIO", "MODELIO-030"))


def _mut_containment_cycle(m):
    top = m.packages[0].components[0]
    child = Component("CHILD", "child")
    top.sub_components.append(child)
    child.sub_components.append(top)


MUTATIONS = [
    (_mut_duplicate_id, "E001"),
    (_mut_duplicate_across_categories, "E001"),
    (_mut_invalid_identifier, "E002"),
    (_mut_empty_definition, "E003"),
    (_mut_bad_enum, "E020"),
    (_mut_bad_kind, "E020"),
    (_mut_dangling_trace, "E005"),
    (_mut_trace_to_component, "E005"),
    (_mut_satisfy_from_requirement, "E006"),
    (_mut_satisfy_dangling_target, "E007"),
    (_mut_dangling_interface, "E008"),
    (_mut_dangling_node, "E009"),
    (_mut_direction_flip, "E010"),
    (_mut_duplicate_trace, "E012"),
    (_mut_duplicate_satisfy, "E013"),
    (_mut_containment_cycle, "E014"),
]


@pytest.mark.parametrize("mutate, code", MUTATIONS, ids=lambda x: getattr(x, "__name__", x))
def test_mutation_yields_paired_code(mutate, code):
    m = load_fixture("fig3.req")
    assert validate(m) == []
    mutate(m)
    diags = validate(m)
    assert _codes(diags) == [code]
    assert diags[0].is_error


def test_validate_does_not_mutate(fig3):
    before = copy.deepcopy(fig3)
    validate(fig3, relaxed_levels=True)
    assert fig3 == before


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_valid_default_models_are_acyclic(seed):
    m = random_model(random.Random(seed), 30, density=random.Random(seed).uniform(0, 0.5))
    assert not any(d.is_error for d in validate(m))
    assert not _has_cycle_dfs([t.key for t in m.traces])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_relaxed_cycle_detection_matches_dfs(seed):
    rng = random.Random(seed)
    ids = [f"R{i}" for i in range(rng.randint(1, 8))]
    m = Model(containers=[RequirementsContainer("C", "c", Level.FRAMEWORK, requirements=[_req(i) for i in ids])])
    pairs = {(a, b) for a in ids for b in ids if rng.random() < 0.2}
    m.traces = [TraceLink(a, b) for a, b in sorted(pairs)]
    has_e011 = "E011" in _codes(validate(m, relaxed_levels=True))
    assert has_e011 == _has_cycle_dfs(sorted(pairs))
