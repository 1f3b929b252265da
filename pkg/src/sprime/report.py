"""matplotlib renderings written next to the JSON output."""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bits import indices_of  # noqa: E402
from .substructures import submodule_masks  # noqa: E402

_PNG_META = {"Software": None}


def theorem_summary(reports, path):
    """Instances checked per statement (log scale), failing ones in red."""
    ids = [r.theorem for r in reports]
    inst = [max(r.instances, 1) for r in reports]
    colors = ["tab:green" if r.passed else "tab:red" for r in reports]
    fig, ax = plt.subplots(figsize=(7, 0.32 * len(ids) + 1.2))
    y = range(len(ids))
    ax.barh(y, inst, color=colors)
    ax.set_yticks(list(y), ids)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlim(left=0.8)
    ax.set_xlabel("instances checked")
    for yi, r in zip(y, reports):
        if r.violation_count:
            ax.text(inst[yi], yi, f" {r.violation_count} violations", va="center", fontsize=8)
    ax.set_title("theorem sweep")
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)
    return path


def submodule_lattice(m, path, highlight=None, title=None):
    """Hasse diagram of the submodule lattice; ``highlight`` maps label -> bitmask."""
    subs = submodule_masks(m)
    highlight = highlight or {}
    covers = {b: [a for a in subs if a != b and a & ~b == 0
                  and not any(c not in (a, b) and a & ~c == 0 and c & ~b == 0 for c in subs)]
              for b in subs}
    # level = length of the longest chain up from the zero submodule
    height = {}
    for b in sorted(subs, key=lambda x: bin(x).count("1")):
        height[b] = 1 + max((height[a] for a in covers[b]), default=-1)
    levels = {}
    for b in subs:
        levels.setdefault(height[b], []).append(b)
    rows = sorted(levels)
    pos = {}
    for row in rows:
        row_subs = levels[row]
        for j, b in enumerate(row_subs):
            pos[b] = (j - (len(row_subs) - 1) / 2, row)
    fig, ax = plt.subplots(figsize=(max(4, 1.6 * max(len(v) for v in levels.values())),
                                    1 + 0.9 * len(rows)))
    for b in subs:
        for a in covers[b]:
            (x0, y0), (x1, y1) = pos[a], pos[b]
            ax.plot([x0, x1], [y0, y1], color="0.7", lw=0.8, zorder=1)
    marks = {}
    for name, bits in highlight.items():
        marks.setdefault(bits, []).append(name)
    for b, (x, y) in pos.items():
        hit = b in marks
        ax.scatter([x], [y], s=60 if hit else 25, color="tab:orange" if hit else "tab:blue",
                   zorder=2)
        if len(subs) <= 16 or hit:
            label = _short(m, b)
            if hit:
                label = ",".join(marks[b]) + ": " + label
            ax.annotate(label, (x, y), textcoords="offset points", xytext=(5, 4), fontsize=7)
    ax.set_yticks(rows)
    ax.set_ylabel("height")
    ax.set_xticks([])
    ax.set_title(title or f"submodules of {m.label}")
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)
    return path


def _short(m, bits):
    el = indices_of(bits)
    if len(el) > 6:
        return "{" + ",".join(m.render(x) for x in el[:5]) + f",..}} ({len(el)})"
    return "{" + ",".join(m.render(x) for x in el) + "}"


def write_verify_figures(reports, directory):
    os.makedirs(directory, exist_ok=True)
    return [theorem_summary(reports, os.path.join(directory, "theorem_summary.png"))]

