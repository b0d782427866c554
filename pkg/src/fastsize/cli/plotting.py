"""Mission history plots.

Five stacked panels share the time axis: altitude, true airspeed, mass,
thrust and the cumulative energy drawn from each source. The SVG is rendered
with the Agg-compatible SVG backend; the hash salt and the date metadata are
pinned so identical histories give identical bytes.
"""

from __future__ import annotations

import io

import matplotlib as mpl

mpl.use("agg")

import matplotlib.pyplot as plt  # noqa: E402

from ..exceptions import InputError  # noqa: E402
from ..mission import MissionHistory  # noqa: E402

HASH_SALT = "fastsize"
PANEL_HEIGHT_IN = 2.2
FIGURE_WIDTH_IN = 8.0

_PANELS: tuple[tuple[str, str, float], ...] = (
    ("altitude_m", "altitude [m]", 1.0),
    ("tas_ms", "TAS [m/s]", 1.0),
    ("mass_kg", "mass [kg]", 1.0),
    ("thrust_n", "thrust [kN]", 1e-3),
)


def render_history_svg(history: MissionHistory, title: str | None = None) -> bytes:
    """Render a mission history as a multi-panel SVG.

    Args:
        history: Flown history.
        title: Figure title.

    Returns:
        SVG document.

    Raises:
        InputError: The history has no samples.
    """
    if not history.samples:
        msg = "no samples to plot"
        raise InputError(msg)

    minutes = history.column("time_s") / 60.0
    with mpl.rc_context({"svg.hashsalt": HASH_SALT, "svg.fonttype": "path"}):
        fig, axes = plt.subplots(
            len(_PANELS) + 1,
            1,
            sharex=True,
            figsize=(FIGURE_WIDTH_IN, PANEL_HEIGHT_IN * (len(_PANELS) + 1)),
        )
        try:
            for ax, (column, label, scale) in zip(axes, _PANELS, strict=False):
                ax.plot(minutes, history.column(column) * scale, color="#1f4e79", linewidth=1.2)
                ax.set_ylabel(label)
                ax.grid(visible=True, linestyle="--", alpha=0.6)

            energy_ax = axes[-1]
            for source_id in history.source_ids:
                energy = history.column(f"e_{source_id}_j") / 1e9
                energy_ax.plot(minutes, energy, linewidth=1.2, label=source_id)
            energy_ax.set_ylabel("energy [GJ]")
            energy_ax.set_xlabel("time [min]")
            energy_ax.grid(visible=True, linestyle="--", alpha=0.6)
            if history.source_ids:
                energy_ax.legend(loc="upper left")
            if title:
                fig.suptitle(title)
            fig.tight_layout()

            buffer = io.BytesIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buffer.getvalue()
