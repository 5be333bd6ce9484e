"""Model-based requirements engineering toolchain.

Parse ``.req`` models, validate them against the metamodel, analyse
traceability and coverage, and generate SRS/roadmap documents and DOT
diagrams.
"""

from .analysis import (
    GapReason,
    Strictness,
    gap_analysis,
    matrix,
    roadmap,
    status_rollup,
    trace_closure,
)
from .csvio import export_requirements_csv, import_requirements_csv
from .diagnostics import Diagnostic, ReqforgeError, Severity
from .diagram import component_diagram, deployment_diagram, requirement_diagram
from .docgen import generate_roadmap_doc, generate_srs, render_markdown
from .dsl import ParseResult, parse, serialize
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
    Status,
    TraceLink,
    merge_models,
    resolve,
    stats,
    structurally_equal,
)
from .validate import validate

__version__ = "0.1.0"

__all__ = [
    "Component",
    "component_diagram",
    "Criticality",
    "deployment_diagram",
    "Diagnostic",
    "export_requirements_csv",
    "gap_analysis",
    "GapReason",
    "generate_roadmap_doc",
    "generate_srs",
    "import_requirements_csv",
    "Interface",
    "Level",
    "matrix",
    "merge_models",
    "Model",
    "Node",
    "Package",
    "parse",
    "ParseResult",
    "Release",
    "render_markdown",
    "ReqforgeError",
    "Requirement",
    "requirement_diagram",
    "RequirementsContainer",
    "resolve",
    "roadmap",
    "SatisfyLink",
    "serialize",
    "Severity",
    "stats",
    "Status",
    "status_rollup",
    "Strictness",
    "structurally_equal",
    "trace_closure",
    "TraceLink",
    "validate",
]
