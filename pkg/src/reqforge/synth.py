"""Synthetic models at the scale of a large collaborative project.

``megamart_scale_model`` builds a valid model with exactly 458
requirements and 3444 architecture elements (3902 model elements in
total), the figures reported for MegaM@Rt2. Content is pseudo-random but
fully determined by the seed.

Run as a script to write the model as a ``.req`` file::

    python -m reqforge.synth --out megamart_scale.req
"""

from __future__ import annotations

import argparse
import random
import sys

from .dsl import serialize
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
)

REQUIREMENTS = 458
ARCHITECTURE_ELEMENTS = 3444

CASE_STUDIES = 9
CASE_STUDY_REQS = 12  # per case study
FRAMEWORK_REQS = 60
TOOLS = 29
TOOL_REQS = 10  # per tool

PACKAGES = 4
NODES = 24
SUBS_PER_TOOL = 3  # direct sub-components of every tool component
SUB_SUBS = 1  # parts of the first module of every tool

_VERBS = ["provide", "support", "export", "import", "validate", "monitor", "trace", "generate",
          "synchronise", "analyse", "simulate", "visualise", "store", "query", "transform", "verify"]
_OBJECTS = ["system models", "runtime logs", "test verdicts", "design constraints", "timing properties",
            "traceability links", "deployment descriptors", "model differences", "safety cases",
            "architecture views", "performance metrics", "variability models", "code skeletons",
            "requirement baselines", "execution traces", "configuration files"]
_QUALIFIERS = ["for the design-time tool chain", "at runtime with bounded overhead",
               "through a documented interchange format", "for every partner tool in the framework",
               "with full provenance of the involved artefacts", "within the continuous integration loop",
               "in a way that can be audited by the case study provider",
               "without manual re-entry of model content"]
_PLATFORMS = ["Eclipse RCP", "Java virtual machine", "Linux server", "Windows workstation", "Docker host",
              "Web browser", "Kubernetes cluster", "Embedded ARM board"]


def _sentence(rng: random.Random, subject: str) -> str:
    text = f"{subject} shall {rng.choice(_VERBS)} {rng.choice(_OBJECTS)} {rng.choice(_QUALIFIERS)}"
    if rng.random() < 0.3:
        text += f", and shall {rng.choice(_VERBS)} {rng.choice(_OBJECTS)}"
    return text + "."


def _req(rng: random.Random, ident: str, subject: str) -> Requirement:
    return Requirement(
        ident,
        _sentence(rng, subject),
        rng.choice(list(Criticality)),
        rng.choice(list(Release)),
        rng.choices(list(Status), weights=[4, 3, 4, 1, 1])[0],
    )


def megamart_scale_model(seed: int = 2020) -> Model:
    rng = random.Random(seed)
    model = Model(name="MegaM@Rt2 (synthetic scale model)")

    case_ids = []
    for c in range(CASE_STUDIES):
        cont = RequirementsContainer(f"CS{c + 1:02d}", f"Case study {c + 1}", Level.CASE_STUDY,
                                     owner=f"Industrial partner {c + 1}")
        for r in range(CASE_STUDY_REQS):
            ident = f"CS{c + 1:02d}-{r + 1:02d}"
            cont.requirements.append(_req(rng, ident, "The case study"))
            case_ids.append(ident)
        model.containers.append(cont)

    fw = RequirementsContainer("FRAMEWORK", "Framework requirements", Level.FRAMEWORK, owner="Technical coordination")
    fw_ids = []
    for r in range(FRAMEWORK_REQS):
        ident = f"SYS-{r + 1:04d}"
        fw.requirements.append(_req(rng, ident, "The framework"))
        fw_ids.append(ident)
    model.containers.append(fw)

    tool_req_ids = []
    for t in range(TOOLS):
        cont = RequirementsContainer(f"TOOL{t + 1:02d}_REQS", f"Tool {t + 1}", Level.TOOL, owner=f"Partner {t + 1}")
        ids = []
        for r in range(TOOL_REQS):
            ident = f"T{t + 1:02d}-{(r + 1) * 10:03d}"
            cont.requirements.append(_req(rng, ident, f"Tool {t + 1}"))
            ids.append(ident)
        tool_req_ids.append(ids)
        model.containers.append(cont)

    # traces: tool -> framework (1-2 each), framework -> case study (1-3 each);
    # a few case study requirements are deliberately left without incoming traces
    for ids in tool_req_ids:
        for ident in ids:
            for target in sorted(rng.sample(fw_ids, rng.randint(1, 2))):
                model.traces.append(TraceLink(ident, target))
    reachable_cs = [c for c in case_ids if rng.random() > 0.08]
    for ident in fw_ids:
        for target in sorted(rng.sample(reachable_cs, rng.randint(1, 3))):
            model.traces.append(TraceLink(ident, target))

    packages = [Package(f"PKG{p + 1}", f"Tool set {p + 1}") for p in range(PACKAGES)]
    n_components = TOOLS * (1 + SUBS_PER_TOOL + SUB_SUBS)
    n_interfaces = ARCHITECTURE_ELEMENTS - PACKAGES - NODES - n_components
    if n_interfaces < TOOLS:
        raise ValueError("architecture budget too small for the component layout")

    for i in range(NODES):
        pkg = packages[i % PACKAGES]
        platform = _PLATFORMS[i % len(_PLATFORMS)]
        pkg.nodes.append(Node(f"NODE-{i + 1:02d}", f"{platform} {i // len(_PLATFORMS) + 1}",
                              f"Deployment platform: {platform.lower()}."))
    node_ids = [f"NODE-{i + 1:02d}" for i in range(NODES)]

    iface_ids = []
    for i in range(n_interfaces):
        pkg = packages[i % PACKAGES]
        ident = f"IF-{i + 1:04d}"
        # only the shared, framework-level services carry a description
        desc = f"Service to {rng.choice(_VERBS)} {rng.choice(_OBJECTS)}." if i % 20 == 0 else None
        pkg.interfaces.append(Interface(ident, rng.choice(_OBJECTS).capitalize(), desc))
        iface_ids.append(ident)

    for t in range(TOOLS):
        pkg = packages[t % PACKAGES]
        tool = Component(f"TOOL{t + 1:02d}", f"Tool {t + 1}", owner=f"Partner {t + 1}",
                         provided=sorted(rng.sample(iface_ids, 2)), consumed=sorted(rng.sample(iface_ids, 2)),
                         deployed_on=sorted(rng.sample(node_ids, 2)))
        for s in range(SUBS_PER_TOOL):
            sub = Component(f"TOOL{t + 1:02d}_M{s + 1}", f"Tool {t + 1} module {s + 1}",
                            provided=[rng.choice(iface_ids)])
            for p in range(SUB_SUBS if s == 0 else 0):
                sub.sub_components.append(Component(f"TOOL{t + 1:02d}_M{s + 1}_P{p + 1}",
                                                    f"Tool {t + 1} module {s + 1} part {p + 1}"))
            tool.sub_components.append(sub)
        pkg.components.append(tool)
        # most tool requirements are satisfied by the tool or one of its modules
        for ident in tool_req_ids[t]:
            if rng.random() < 0.85:
                owner = tool if rng.random() < 0.5 else rng.choice(tool.sub_components)
                model.satisfies.append(SatisfyLink(owner.id, ident))

    model.packages = packages
    return model


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python -m reqforge.synth", description=__doc__.splitlines()[0])
    parser.add_argument("--out", help="output .req file (default: stdout)")
    parser.add_argument("--seed", type=int, default=2020)
    args = parser.parse_args(argv)
    text = serialize(megamart_scale_model(args.seed))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
