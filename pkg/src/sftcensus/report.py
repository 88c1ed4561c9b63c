"""Census reports: plain text with a machine-readable summary block, and
figures rendered to files."""

from __future__ import annotations

import os

from .census import SIG_COMPONENTS, summarize
from .intmat import poly_to_str
from .invariants import BF_POLYNOMIALS


def _component_label(name):
    if name.startswith("bf"):
        idx = int(name[2:]) - 1
        return f"{name} ({poly_to_str(BF_POLYNOMIALS[idx])})"
    return name


def render_report(state):
    """Deterministic plain-text report; ends with a [summary] block of
    key=value lines for scripting."""
    s = summarize(state)
    u = state.universe
    lines = ["census report", "=" * 13]
    excluded = (u.max_sum - 1) * u.max_sum // 2 if u.primitive_only else 0
    lines.append(f"universe: {u.params()}")
    if u.primitive_only:
        lines.append(f"  (irreducible count would be {s['matrices'] + excluded}; "
                     f"the {excluded} period-2 antidiagonal matrices are excluded)")
    lines.append(f"budget: {state.budget.stamp()}")
    lines.append(f"matrices: {s['matrices']}")
    lines.append(f"pairs: {s['pairs']}")
    lines.append(f"decided: {s['decided']} ({s['decided_percent']:.7f}%)")
    lines.append(f"  distinct by signature: {s['distinct_by_signature']}")
    for name in SIG_COMPONENTS:
        cnt = s[f"separator_{name}"]
        if cnt:
            lines.append(f"    {_component_label(name)}: {cnt}")
    lines.append("  distinct by pairwise BMT, Thm 1(ii) route: "
                 f"{s['distinct_by_bmt_pic_pairwise']}")
    lines.append(f"  equivalent (verified certificates): {s['equivalent']}")
    lines.append(f"open at this budget: {s['open']}")
    lines.append(f"pairs where BMT is the only separator: {s['bmt_only_separator']}")
    lines.append(f"sse ball exhaustions (node limit): {s['sse_ball_exhaustions']}")
    lines.append("")
    lines.append("[summary]")
    for k, v in s.items():
        lines.append(f"{k}={v}")
    return "\n".join(lines) + "\n"


def render_figures(state, outdir):
    """Write census figures as PNG files into outdir; returns the paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    s = summarize(state)
    paths = []

    names = [n for n in SIG_COMPONENTS if s[f"separator_{n}"]]
    names += ["bmt pairwise", "equivalent", "open"]
    values = ([s[f"separator_{n}"] for n in SIG_COMPONENTS if s[f"separator_{n}"]]
              + [s["distinct_by_bmt_pic_pairwise"], s["equivalent"], s["open"]])
    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.bar(range(len(names)), values, color="steelblue")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.set_yscale("symlog")
    ax.set_ylabel("pairs")
    ax.set_title("pair outcomes by first separating invariant")
    fig.tight_layout()
    p = os.path.join(outdir, "separators.png")
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)

    sizes = sorted(len(m) for m in state.buckets.values())
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if sizes:
        ax.hist(sizes, bins=range(1, max(sizes) + 2), color="darkseagreen",
                edgecolor="black")
    ax.set_yscale("symlog")
    ax.set_xlabel("bucket size (matrices sharing a full signature)")
    ax.set_ylabel("buckets")
    ax.set_title("signature bucket sizes")
    fig.tight_layout()
    p = os.path.join(outdir, "buckets.png")
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)
    return paths
