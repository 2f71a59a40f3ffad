"""Message sequence charts of global traces, rendered with matplotlib."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .fsm import MultiPortFsm  # noqa: E402


def sequence_chart(m: MultiPortFsm, trace, title=None):
    """A figure with one lifeline per port and the system under test in the middle.

    Inputs travel from a port's lifeline to the system; outputs travel back
    to the port that observes them.
    """
    ports = m.n_ports
    half = ports // 2
    # system lifeline sits between the left and right halves of the ports
    xs = {p: (p - 1 if p <= half else p) for p in range(1, ports + 1)}
    sut = half
    rows = sum(1 + sum(z is not None for z in outs) for _, outs in trace)
    fig, ax = plt.subplots(figsize=(1.6 * (ports + 1) + 1, 0.45 * rows + 1.6))
    top, bottom = 0.0, -(rows + 1)
    for p, x in xs.items():
        ax.plot([x, x], [top, bottom], color="0.6", lw=1)
        ax.text(x, top + 0.4, f"port {p}", ha="center", va="bottom", fontsize=9)
    ax.plot([sut, sut], [top, bottom], color="black", lw=2)
    ax.text(sut, top + 0.4, "SUT", ha="center", va="bottom", fontsize=9, weight="bold")

    y = -0.5
    arrow = dict(arrowstyle="->", lw=1)
    for i, (x_in, outs) in enumerate(trace, start=1):
        src = xs[m.input_port[x_in] + 1]
        ax.annotate("", xy=(sut, y), xytext=(src, y), arrowprops=dict(arrow, color="tab:blue"))
        ax.text((src + sut) / 2, y + 0.08, f"{i}: {x_in}", ha="center", va="bottom",
                fontsize=8, color="tab:blue")
        y -= 1
        for p, z in enumerate(outs, start=1):
            if z is None:
                continue
            ax.annotate("", xy=(xs[p], y), xytext=(sut, y), arrowprops=dict(arrow, color="tab:red"))
            ax.text((xs[p] + sut) / 2, y + 0.08, z, ha="center", va="bottom",
                    fontsize=8, color="tab:red")
            y -= 1
    ax.set_xlim(-0.7, ports + 0.7)
    ax.set_ylim(bottom, top + 1.2)
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    return fig


def save_chart(fig, path):
    """Write a PNG without timestamp or software metadata so bytes are reproducible."""
    fig.savefig(path, format="png", dpi=100, metadata={"Software": None})
    plt.close(fig)
