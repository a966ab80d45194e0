"""Matplotlib figures written next to the text reports (``--plot FILE``)."""

from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .lts import Lts  # noqa: E402
from .net import System, fire  # noqa: E402


def plot_lattice(labels: Sequence[str], points, regions=(), path: str = "lattice.png",
                 missing: Optional[Sequence[int]] = None) -> str:
    """Two-label state sets: points, arcs between unit neighbours and the
    boundary line of every region."""
    if len(labels) != 2:
        raise ValueError("lattice plots need exactly two labels")
    fig, ax = plt.subplots(figsize=(6, 5))
    pts = sorted(points)
    for x, y in pts:
        for dx, dy in ((1, 0), (0, 1)):
            if (x + dx, y + dy) in points:
                ax.annotate("", (x + dx, y + dy), (x, y), arrowprops=dict(arrowstyle="->", color="0.6"))
    ax.scatter([p[0] for p in pts], [p[1] for p in pts], color="black", zorder=3)
    xmax = max(p[0] for p in pts) + 1
    ymax = max(p[1] for p in pts) + 1
    for r in regions:
        # k + h*x_gain - l*x_loss = 0
        coeff = {labels[0]: 0, labels[1]: 0}
        coeff[r.loss_label] -= r.l
        if r.gain_label is not None:
            coeff[r.gain_label] += r.h
        cx, cy = coeff[labels[0]], coeff[labels[1]]
        if cy != 0:
            xs = [-0.5, xmax]
            ax.plot(xs, [-(r.k + cx * x) / cy for x in xs], "--", label=str(r))
        else:
            ax.axvline(-r.k / cx, linestyle="--", label=str(r))
    if missing is not None:
        ax.scatter([missing[0]], [missing[1]], marker="*", s=200, color="red", zorder=4, label="missing point")
    ax.set_xlim(-0.5, xmax)
    ax.set_ylim(-0.5, ymax)
    ax.set_xlabel(f"#{labels[0]}")
    ax.set_ylabel(f"#{labels[1]}")
    ax.set_aspect("equal")
    if regions or missing is not None:
        ax.legend(fontsize="small", loc="upper left")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_marking_trace(system: System, word: Sequence[str], path: str = "trace.png") -> str:
    """Token count of every place along one traversal of ``word``."""
    marking = system.marking
    rows = [dict(marking)]
    for t in word:
        marking = fire(system.net, marking, t)
        rows.append(dict(marking))
    fig, ax = plt.subplots(figsize=(max(6, len(word) * 0.4), 4))
    for p in system.net.places:
        ax.step(range(len(rows)), [r[p] for r in rows], where="post", label=p)
    ax.set_xticks(range(len(word) + 1))
    ax.set_xticklabels(["."] + list(word))
    ax.set_ylabel("tokens")
    if system.net.places:
        ax.legend(fontsize="small", ncol=2)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_lts(lts: Lts, path: str = "lts.png") -> str:
    g = nx.MultiDiGraph()
    g.add_nodes_from(sorted(lts.states))
    for a, t, b in sorted(lts.arcs):
        g.add_edge(a, b, label=t)
    pos = nx.kamada_kawai_layout(nx.DiGraph(g)) if len(g) > 2 else nx.circular_layout(g)
    fig, ax = plt.subplots(figsize=(6, 6))
    colors = ["tab:red" if s == lts.initial else "tab:blue" for s in g.nodes]
    nx.draw_networkx_nodes(g, pos, node_color=colors, node_size=80, ax=ax)
    nx.draw_networkx_edges(g, pos, ax=ax, arrows=True)
    labels = {}
    for a, b, data in g.edges(data=True):
        labels.setdefault((a, b), []).append(data["label"])
    nx.draw_networkx_edge_labels(g, pos, {k: ",".join(v) for k, v in labels.items()}, ax=ax, font_size=7)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
