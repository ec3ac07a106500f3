"""SVG plots of the curves kept by the suites."""

from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from conelab.models.base import Series, SuiteResult  # noqa: E402
from conelab.utils.logger import logger  # noqa: E402

# fixed hash salt and no date keep the SVG bytes reproducible
mpl.rcParams["svg.hashsalt"] = "conelab"
mpl.rcParams["figure.figsize"] = (5.0, 3.5)
mpl.rcParams["axes.grid"] = True
mpl.rcParams["grid.alpha"] = 0.3


def _points(series: Series) -> tuple[list[float], list[float]]:
    """Drop points a logarithmic axis cannot show."""
    pairs = [
        (x, y)
        for x, y in zip(series.x, series.y, strict=True)
        if (not series.logx or x > 0.0) and (not series.logy or y > 0.0)
    ]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def plot_series(name: str, series: Series, path: Path) -> bool:
    """Write one curve; False when nothing is left to draw."""
    x, y = _points(series)
    if not x:
        logger.warning(f"Curve {name} has no drawable points, skipped")
        return False
    fig, ax = plt.subplots()
    try:
        ax.plot(x, y, marker="o", markersize=3, linewidth=1)
        ax.set_xscale("log" if series.logx else "linear")
        ax.set_yscale("log" if series.logy else "linear")
        ax.set_xlabel(series.xlabel)
        ax.set_ylabel(series.ylabel)
        ax.set_title(name)
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return True


def plot_suite(result: SuiteResult, directory: Path) -> list[Path]:
    """One SVG per curve under directory/suite/."""
    written = []
    for name, series in sorted(result.series.items()):
        path = directory / result.suite / f"{name}.svg"
        if plot_series(name, series, path):
            written.append(path)
    return written
