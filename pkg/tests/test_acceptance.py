"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import io
import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import DATA, FIXTURES, corpus_files  # noqa: E402
from oracles import gap_as_dict, gap_oracle, matrix_power_closure  # noqa: E402
from randmodels import random_model  # noqa: E402
from reqforge.analysis import Strictness, gap_analysis, trace_closure  # noqa: E402
from reqforge.cli import main  # noqa: E402
from reqforge.csvio import export_requirements_csv, import_requirements_csv  # noqa: E402
from reqforge.diagram import requirement_diagram  # noqa: E402
from reqforge.dsl import parse, serialize  # noqa: E402
from reqforge.model import structurally_equal  # noqa: E402

RESULTS: dict[int, str] = {}

RANDOM_MODELS = 200
SRS_PAGES = 125  # size of the generated SRS for the large project
CHARS_PER_PAGE = 2500  # ~250k characters for a 100-page equivalent
SRS_TOLERANCE = 0.20
LAYOUT_COLUMNS, LAYOUT_LINES = 80, 66  # printed page used as a cross-check


def report(n: int, ok: bool, detail: str):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    assert ok, RESULTS[n]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def _tree(root: Path) -> dict:
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


# 1

def test_criterion_1_fig3(tmp_path):
    start = time.perf_counter()
    path = FIXTURES / "fig3.req"
    text = path.read_text(encoding="utf-8")
    model = parse(text, str(path)).model
    problems = []

    names = {c.name for c in model.containers} | {c.name for _, c in model.components()}
    if "Modelio (SOFT)" not in names:
        problems.append("missing 'Modelio (SOFT)'")
    ids = {r.id for _, r in model.requirements()}
    if ids != {"MODELIO-030", "SYS-020201", "NOK-02"}:
        problems.append(f"requirements {sorted(ids)}")

    code, out, _ = run("check", path)
    if code != 0 or "NOK-02 covered\n" not in out:
        problems.append(f"check: exit {code}, {out!r}")

    g = requirement_diagram(model, "MODELIO")
    if len(g.nodes) != 4 or len(g.edges) != 3:
        problems.append(f"diagram {len(g.nodes)} nodes, {len(g.edges)} edges")
    if g.edges != {("MODELIO", "MODELIO-030", "satisfy"), ("MODELIO-030", "SYS-020201", "trace"),
                   ("SYS-020201", "NOK-02", "trace")}:
        problems.append("diagram edges differ")

    cut = tmp_path / "no_satisfy.req"
    cut.write_text(text.replace("satisfy MODELIO -> MODELIO-030\n", ""), encoding="utf-8")
    code, out, _ = run("check", cut)
    if code != 1 or "NOK-02 traced_but_unsatisfied\n" not in out:
        problems.append(f"without satisfy: exit {code}, {out!r}")

    elapsed = time.perf_counter() - start
    if elapsed >= 1.0:
        problems.append(f"took {elapsed:.2f} s")
    report(1, not problems, f"({elapsed * 1000:.0f} ms) " + "; ".join(problems))


# 2

def _layout_pages(text: str) -> float:
    lines = sum(max(1, -(-len(line) // LAYOUT_COLUMNS)) for line in text.split("\n"))
    return lines / LAYOUT_LINES


def test_criterion_2_scale(tmp_path):
    model_path = tmp_path / "megamart_scale.req"
    gen = subprocess.run([sys.executable, "-m", "reqforge.synth", "--out", str(model_path)],
                         capture_output=True, text=True)
    problems = [] if gen.returncode == 0 else [f"generator failed: {gen.stderr}"]

    code, out, _ = run("stats", "--format", "json", model_path)
    data = json.loads(out) if code == 0 else {}
    counts = (data.get("requirement_count"), data.get("architecture_element_count"), data.get("total_element_count"))
    if counts != (458, 3444, 3902):
        problems.append(f"stats {counts}")

    start = time.perf_counter()
    v_code = run("validate", model_path)[0]
    g_code = run("gen", model_path, "--out", tmp_path / "out")[0]
    elapsed = time.perf_counter() - start
    if (v_code, g_code) != (0, 0):
        problems.append(f"validate/gen exit {v_code}/{g_code}")
    if elapsed >= 10.0:
        problems.append(f"validate + gen all took {elapsed:.2f} s")

    srs = (tmp_path / "out" / "srs.md").read_text(encoding="utf-8")
    target = SRS_PAGES * CHARS_PER_PAGE
    deviation = len(srs) / target - 1
    if abs(deviation) > SRS_TOLERANCE:
        problems.append(f"SRS {len(srs)} chars is {deviation:+.1%} from {target}")
    layout = _layout_pages(srs)
    if abs(layout / SRS_PAGES - 1) > SRS_TOLERANCE:
        problems.append(f"layout estimate {layout:.1f} pages")
    report(2, not problems,
           f"(total {counts[2]}, {elapsed:.2f} s, SRS {len(srs)} chars = {len(srs) / CHARS_PER_PAGE:.1f} pages "
           f"[{deviation:+.1%}], layout {layout:.1f} pages) " + "; ".join(problems))


# 3 and 4

def _random_models():
    rng = random.Random(20200101)
    return [random_model(rng, max_reqs=50) for _ in range(RANDOM_MODELS)]


def test_criterion_3_closure_oracle():
    mismatches = sum(set(trace_closure(m).pairs) != matrix_power_closure(m) for m in _random_models())
    report(3, mismatches == 0, f"({RANDOM_MODELS} models, {mismatches} mismatches)")


def test_criterion_4_gap_oracle():
    mismatches = not_subset = checked = 0
    for m in _random_models():
        reports = {}
        for strictness in Strictness:
            reports[strictness] = gap_analysis(m, strictness)
            mismatches += gap_as_dict(reports[strictness]) != gap_oracle(m, strictness)
            checked += 1
        not_subset += not set(reports[Strictness.STRICT].covered) <= set(reports[Strictness.LENIENT].covered)
    report(4, mismatches == 0 and not_subset == 0,
           f"({checked} analyses, {mismatches} mismatches, {not_subset} strict-not-subset)")


# 5

def test_criterion_5_round_trip():
    problems = []
    files = corpus_files() + sorted((DATA / "split").glob("*.req"))
    containers = 0
    for path in files:
        first = parse(path.read_text(encoding="utf-8"), str(path)).model
        text = serialize(first)
        second = parse(text, "again").model
        if second is None or not structurally_equal(first, second):
            problems.append(f"{path.name}: parse-serialize-parse differs")
        elif serialize(second) != text:
            problems.append(f"{path.name}: serializer not idempotent")
        for cont in first.containers:
            containers += 1
            once = export_requirements_csv(first, cont.id)
            back = import_requirements_csv(once, cont.id, first).model
            if back is None or export_requirements_csv(back, cont.id) != once:
                problems.append(f"{path.name}: CSV fixed point fails for {cont.id}")
    report(5, not problems, f"({len(files)} files, {containers} containers) " + "; ".join(problems))


# 6

def _add(text):
    return lambda t: t + text


def _sub(old, new):
    return lambda t: t.replace(old, new, 1)


def _then(*steps):
    def apply(text):
        for step in steps:
            text = step(text)
        return text
    return apply


MUTATIONS = [
    ("E001", "identifier reused by an interface", _sub("  node ECLIPSE-RCP", '  interface NOK-02 "clash" {}\n  node ECLIPSE-RCP')),
    ("E003", "blank definition", _sub('definition: "Design models', 'definition: "   "\n    comments: "Design models')),
    ("E005", "trace to a node", _add("trace MODELIO-030 -> ECLIPSE-RCP\n")),
    ("E006", "satisfy from a requirement", _add("satisfy NOK-02 -> MODELIO-030\n")),
    ("E007", "satisfy of an interface", _add("satisfy MODELIO -> XMI-EXPORT\n")),
    ("E008", "unknown provided interface", _sub("provides: XMI-EXPORT", "provides: XMI-EXPRT")),
    ("E009", "unknown deployment node", _sub("deployed_on: ECLIPSE-RCP", "deployed_on: ECLIPSE")),
    ("E010", "downward trace", _add("trace NOK-02 -> SYS-020201\n")),
    ("E011", "same-level cycle (relaxed levels)", _then(
        _sub("framework container MEGAMART_FRAMEWORK \"MegaM@Rt2 framework\" {\n",
             "framework container MEGAMART_FRAMEWORK \"MegaM@Rt2 framework\" {\n"
             "  requirement SYS-020202 {\n    definition: \"Loop.\"\n    criticality: low\n"
             "    release: final\n    status: planned\n  }\n"),
        _add("trace SYS-020201 -> SYS-020202\ntrace SYS-020202 -> SYS-020201\n"),
    ), ["--relaxed-levels"]),
    ("E012", "duplicate trace", _add("trace SYS-020201 -> NOK-02\n")),
    ("E013", "duplicate satisfy", _add("satisfy MODELIO -> MODELIO-030\n")),
    ("E020", "unknown criticality literal", _sub("criticality: high", "criticality: urgent")),
    ("E021", "missing closing brace", _sub("    status: planned\n  }\n}\n\ncase_study", "    status: planned\n  }\n\ncase_study")),
    ("E022", "stray character", _sub("criticality: medium", "criticality: medium %")),
    ("E023", "missing status", _sub("    release: final\n    status: planned\n", "    release: final\n")),
    ("E024", "repeated property", _sub("    criticality: medium\n", "    criticality: medium\n    criticality: low\n")),
]


def _mutate(entry, base):
    return entry[2](base)


def test_criterion_6_mutations(tmp_path):
    base = (FIXTURES / "fig3.req").read_text(encoding="utf-8")
    failures = []
    for entry in MUTATIONS:
        code, what = entry[0], entry[1]
        extra = entry[3] if len(entry) > 3 else []
        text = _mutate(entry, base)
        if text == base:
            failures.append(f"{code}: mutation did not apply")
            continue
        path = tmp_path / f"{code}.req"
        path.write_text(text, encoding="utf-8")
        exit_code, out, _ = run("validate", "--format", "json", *extra, path)
        codes = sorted({d["code"] for d in json.loads(out) if d["severity"] == "error"})
        if exit_code != 1 or codes != [code]:
            failures.append(f"{code} ({what}): exit {exit_code}, codes {codes}")
    ok = len(MUTATIONS) >= 10 and not failures
    report(6, ok, f"({len(MUTATIONS)} mutations) " + "; ".join(failures))


@pytest.mark.parametrize("entry", MUTATIONS, ids=[m[0] for m in MUTATIONS])
def test_mutation_applies_and_baseline_is_clean(entry):
    base = (FIXTURES / "fig3.req").read_text(encoding="utf-8")
    assert _mutate(entry, base) != base
    assert parse(base, "fig3").diagnostics == []


# 7

def test_criterion_7_determinism(tmp_path):
    inputs = [p for p in corpus_files()] + [DATA / "split"]
    differing = []
    for i, src in enumerate(inputs):
        a, b = tmp_path / f"{i}a", tmp_path / f"{i}b"
        codes = (run("gen", src, "--out", a)[0], run("gen", src, "--out", b)[0])
        if codes != (0, 0) or _tree(a) != _tree(b) or not _tree(a):
            differing.append(f"{src.name}: exit {codes}")
    report(7, not differing, f"({len(inputs)} inputs) " + "; ".join(differing))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
