"""
Static SVG line plot of a spectrum scan: R2 and X_EF against the detuning,
with dashed vertical markers at the hyperfine resonances.
"""

import io
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from src.models.level_scheme import LevelScheme  # noqa: E402
from src.models.spectrum_record import SpectrumRecord  # noqa: E402
from src.physics.atom import resonance_positions  # noqa: E402

# fixed id salt keeps reruns byte-identical
plt.rcParams["svg.hashsalt"] = "cbs-antiloc"


def render_spectrum_svg(records: Sequence[SpectrumRecord], scheme: LevelScheme, title: str = "") -> str:
    deltas = [record.delta for record in records]
    figure, axis = plt.subplots(figsize=(7.0, 4.0))
    try:
        axis.plot(deltas, [record.R2 for record in records], marker="o", markersize=3, label="R2")
        axis.plot(deltas, [record.X_EF for record in records], marker="s", markersize=3, label="X_EF")
        axis.axhline(1.0, color="grey", linewidth=0.6)
        lower, upper = min(deltas), max(deltas)
        for Fe, position in resonance_positions(scheme):
            if lower <= position <= upper:
                axis.axvline(position, color="black", linestyle="--", linewidth=0.8)
                axis.annotate(f"F={Fe}", (position, 1.0), textcoords="offset points", xytext=(3, 4), fontsize=7)
        axis.set_xlabel("detuning (units of gamma)")
        axis.set_ylabel("backscattering ratio")
        if title:
            axis.set_title(title)
        axis.legend(loc="best")
        figure.tight_layout()

        buffer = io.StringIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None, "Creator": None})
    finally:
        plt.close(figure)
    return buffer.getvalue()


def write_spectrum_svg(
    path, provenance: str, records: Sequence[SpectrumRecord], scheme: LevelScheme, title: str = ""
) -> Path:
    """Writes the plot with the provenance as the first line, an XML comment."""
    svg = render_spectrum_svg(records, scheme, title)
    if svg.startswith("<?xml"):
        svg = svg.split("\n", 1)[1]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(f"<!-- {provenance} -->\n")
        f.write(svg)
    return path
