"""File emission for run artifacts: CSV tables, VTK legacy snapshots,
gnuplot scripts and a checksummed manifest.

Output is deterministic: no timestamps, fixed CSV float formatting, sorted
manifest. Snapshots go through the VTK legacy writer in ASCII mode.
"""

import hashlib
import json
import logging
from collections import defaultdict
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np
import pandas as pd
from vtk import VTK_DOUBLE, vtkImageData, vtkStructuredPointsWriter
from vtk.util import numpy_support as vn

from src.cli.config_file import format_config
from src.config import settings
from src.engine.runner import Artifacts, PlotSpec, Snapshot
from src.models.grid import Field, Grid, Layout
from src.models.run_config import RunConfig

logger = logging.getLogger(__name__)

PACKAGE = "seqexp-solvers"


def code_version() -> str:
    try:
        return version(PACKAGE)
    except PackageNotFoundError:
        return "0.1.0"


class ArtifactWriter:
    """Writes every file of one invocation below `out_dir` and remembers it."""

    def __init__(self, out_dir: str | Path, config: RunConfig) -> None:
        self.out_dir = Path(out_dir)
        self.config = config
        self.written: list[Path] = []
        self.fmt = f"%.{settings.csv_precision}g"

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        self.written.append(path)
        return path

    def metadata(self) -> list[str]:
        lines = [f"{PACKAGE} {code_version()}"]
        lines += [f"{k} = {v}" for k, v in self.config.echo()]
        return lines

    def write_config(self) -> Path:
        path = self._path("config.txt")
        path.write_text(format_config(self.config), encoding="utf-8")
        return path

    def write_table(self, name: str, table: pd.DataFrame) -> Path:
        path = self._path(f"{name}.csv")
        with path.open("w", encoding="utf-8", newline="") as handle:
            for line in self.metadata():
                handle.write(f"# {line}\n")
            table.to_csv(handle, index=False, float_format=self.fmt, lineterminator="\n")
        logger.info("Wrote %s (%d rows)", path, len(table))
        return path

    def write_snapshot(self, snapshot: Snapshot) -> list[Path]:
        """One VTK file per sample layout; fields sharing a layout share a file."""
        groups: dict[Layout, dict[str, Field]] = defaultdict(dict)
        for name, f in snapshot.fields.items():
            groups[f.layout][name] = f
        paths = []
        for layout, fields in groups.items():
            suffix = "" if len(groups) == 1 else f"_{layout.name.lower()}"
            path = self._path(f"{snapshot.name}{suffix}.vtk")
            write_vtk(path, snapshot.name, vtk_image(snapshot.grid, layout, fields))
            paths.append(path)
        return paths

    def write_plot(self, plot: PlotSpec, table: pd.DataFrame) -> Path:
        path = self._path(f"{plot.table}.plt")
        path.write_text(gnuplot_script(plot, list(table.columns)), encoding="utf-8")
        return path

    def write_all(self, artifacts: Artifacts) -> None:
        self.write_config()
        for name, table in artifacts.tables.items():
            self.write_table(name, table)
        for snapshot in artifacts.snapshots:
            self.write_snapshot(snapshot)
        for plot in artifacts.plots:
            self.write_plot(plot, artifacts.tables[plot.table])
        self.write_manifest()

    def write_manifest(self) -> Path:
        entries = [
            {"path": p.name, "bytes": p.stat().st_size, "sha256": sha256(p)}
            for p in sorted(set(self.written))
        ]
        path = self.out_dir / "manifest.json"
        path.write_text(json.dumps({"files": entries}, indent=2, sort_keys=True) + "\n")
        logger.info("Wrote %d files to %s", len(entries) + 1, self.out_dir)
        return path


def sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def vtk_image(grid: Grid, layout: Layout, fields: dict[str, Field]) -> vtkImageData:
    """Image data on the layout's sample points; 2D grids only.

    The first field becomes the active scalars, the rest are extra point arrays.
    """
    if grid.ndim != 2:
        raise ValueError(f"VTK snapshots are written for 2D grids, got {grid.ndim}D")
    nx, ny = grid.cells
    x, y = grid.coordinates(layout)
    image = vtkImageData()
    image.SetDimensions(nx, ny, 1)
    image.SetOrigin(float(x[0]), float(y[0]), 0.0)
    image.SetSpacing(grid.dx, grid.dy, 1.0)
    point_data = image.GetPointData()
    for k, (name, f) in enumerate(fields.items()):
        # VTK point order has x varying fastest
        values = np.asarray(f.interior(grid), dtype=float).T.ravel()
        array = vn.numpy_to_vtk(values, deep=True, array_type=VTK_DOUBLE)
        array.SetName(name)
        if k == 0:
            point_data.SetScalars(array)
        else:
            point_data.AddArray(array)
    return image


def write_vtk(path: Path, title: str, image: vtkImageData) -> None:
    writer = vtkStructuredPointsWriter()
    writer.SetFileName(str(path))
    writer.SetInputData(image)
    writer.SetHeader(title)
    writer.SetFileTypeToASCII()
    if not writer.Write():
        raise OSError(f"VTK writer failed on {path}")


def gnuplot_script(plot: PlotSpec, columns: list[str]) -> str:
    index = {c: k + 1 for k, c in enumerate(columns)}
    missing = [c for c in (plot.x, *plot.ys) if c not in index]
    if missing:
        raise ValueError(f"Plot {plot.title!r} refers to unknown columns {missing}")
    series = ", \\\n     ".join(
        f'"{plot.table}.csv" using {index[plot.x]}:{index[y]} with linespoints title "{y}"'
        for y in plot.ys
    )
    lines = [
        'set datafile separator ","',
        "set datafile commentschars \"#\"",
        "set terminal pngcairo size 900,600",
        f'set output "{plot.table}.png"',
        f'set title "{plot.title}"',
        f'set xlabel "{plot.x}"',
        "set key top left",
    ]
    if plot.logscale:
        lines.append(f"set logscale {plot.logscale}")
    # the header row does not parse as numbers and is skipped
    lines.append(f"plot {series}")
    return "\n".join(lines) + "\n"
