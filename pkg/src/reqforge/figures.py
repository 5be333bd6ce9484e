"""Report figures for ``reqforge stats --figures DIR``.

Figures are written with the Agg backend and without software/date
metadata so reruns give identical PNG bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .analysis import status_rollup  # noqa: E402
from .model import Level, Model, Status, stats  # noqa: E402

_STATUS_COLORS = {
    Status.DONE: "#2a9d8f",
    Status.IN_PROGRESS: "#e9c46a",
    Status.PLANNED: "#8ab6d6",
    Status.POSTPONED: "#f4a261",
    Status.CANCELLED: "#b0b0b0",
}

_RC = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "reqforge",
}


def _save(fig, path: Path):
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def plot_element_counts(model: Model, path: Path):
    st = stats(model)
    with plt.rc_context(_RC):
        fig, (ax_req, ax_arch) = plt.subplots(1, 2, figsize=(10, 4))
        ids = list(st.per_container)
        ax_req.barh(ids, [st.per_container[i] for i in ids], color="#457b9d")
        ax_req.invert_yaxis()
        ax_req.set_xlabel("requirements")
        ax_req.set_title(f"Requirements level ({st.requirement_count})")

        pids = list(st.per_package)
        left = [0] * len(pids)
        for label, attr, color in (("components", "components", "#1d3557"),
                                   ("interfaces", "interfaces", "#a8dadc"),
                                   ("nodes", "nodes", "#e63946")):
            vals = [getattr(st.per_package[p], attr) for p in pids]
            ax_arch.barh(pids, vals, left=left, label=label, color=color)
            left = [a + b for a, b in zip(left, vals)]
        ax_arch.invert_yaxis()
        ax_arch.set_xlabel("elements")
        ax_arch.set_title(f"Architecture level ({st.architecture_element_count})")
        if pids:
            ax_arch.legend(loc="lower right", frameon=False)
        fig.suptitle(f"{model.name or 'model'}: {st.total_element_count} model elements")
        _save(fig, path)


def plot_status_rollup(model: Model, path: Path):
    roll = status_rollup(model)
    levels = [Level.TOOL, Level.FRAMEWORK, Level.CASE_STUDY]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 3))
        left = [0] * len(levels)
        for status in Status:
            vals = [roll.per_level[lvl].counts[status] for lvl in levels]
            ax.barh([lvl.value for lvl in levels], vals, left=left, label=status.value,
                    color=_STATUS_COLORS[status])
            left = [a + b for a, b in zip(left, vals)]
        for y, lvl in enumerate(levels):
            ax.text(left[y], y, f"  {float(roll.per_level[lvl].completion):.0%} done", va="center")
        ax.invert_yaxis()
        ax.set_xlabel("requirements")
        ax.legend(ncol=5, loc="upper center", bbox_to_anchor=(0.5, -0.25), frameon=False)
        _save(fig, path)


def write_figures(model: Model, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / "element_counts.png", out_dir / "status_rollup.png"]
    plot_element_counts(model, paths[0])
    plot_status_rollup(model, paths[1])
    return paths
