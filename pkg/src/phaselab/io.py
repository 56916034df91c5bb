"""Snapshot persistence and CSV emission.

Snapshots are versioned structured text.  Values are stored as hexadecimal
floats (bit-exact round trip) with decimal mirrors for human inspection.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .fields import Field
from .grids import circle_grid, interval_grid, torus_grid
from .nodal import DecayFit, NodalSet
from .reports import ExperimentReport, canonicalize
from .solvers import FlowTrace

__all__ = [
    "save_snapshot",
    "load_snapshot",
    "load_snapshot_with_meta",
    "emit_plotdata",
    "SnapshotError",
    "UnsupportedSnapshotVersion",
    "CorruptSnapshotError",
]

SNAPSHOT_NAME = "phaselab-snapshot"
SNAPSHOT_VERSION = 1


class SnapshotError(ValueError):
    pass


class UnsupportedSnapshotVersion(SnapshotError):
    pass


class CorruptSnapshotError(SnapshotError):
    pass


def save_snapshot(f: Field, path, potential: dict | None = None, config_hash: str | None = None) -> None:
    g = f.grid
    lines = [f"{SNAPSHOT_NAME} {SNAPSHOT_VERSION}"]
    if g.kind == "interval":
        lines.append(f"grid: interval {g.shape[0]} {g.lengths[0].hex()} # half_length {g.lengths[0]!r}")
    elif g.kind == "circle":
        lines.append(f"grid: circle {g.shape[0]} {g.lengths[0].hex()} # circumference {g.lengths[0]!r}")
    else:
        lines.append(
            f"grid: torus {g.shape[0]} {g.shape[1]} {g.lengths[0].hex()} {g.lengths[1].hex()} "
            f"# circumferences {g.lengths[0]!r} {g.lengths[1]!r}"
        )
    lines.append(f"epsilon: {float(f.epsilon).hex()} # {float(f.epsilon)!r}")
    lines.append("potential: " + json.dumps(canonicalize(potential) if potential else None, sort_keys=True))
    lines.append(f"config: {config_hash or '-'}")
    flat = f.values.ravel()
    lines.append(f"values: {flat.size}")
    for x in flat:
        xf = float(x)
        lines.append(f"{xf.hex()} {xf!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_header_line(lines, i, key):
    if i >= len(lines) or not lines[i].startswith(key + ":"):
        raise CorruptSnapshotError(f"missing '{key}:' line in snapshot header")
    body = lines[i][len(key) + 1 :].split("#", 1)[0].strip()
    return body


def load_snapshot_with_meta(path):
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CorruptSnapshotError("empty snapshot file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != SNAPSHOT_NAME:
        raise CorruptSnapshotError(f"not a {SNAPSHOT_NAME} file: {lines[0]!r}")
    version = int(head[1])
    if version != SNAPSHOT_VERSION:
        raise UnsupportedSnapshotVersion(
            f"snapshot version {version} unsupported; this build reads version {SNAPSHOT_VERSION}"
        )

    grid_body = _parse_header_line(lines, 1, "grid").split()
    kind = grid_body[0]
    if kind == "interval":
        grid = interval_grid(int(grid_body[1]), float.fromhex(grid_body[2]))
    elif kind == "circle":
        grid = circle_grid(int(grid_body[1]), float.fromhex(grid_body[2]))
    elif kind == "torus":
        grid = torus_grid(
            int(grid_body[1]),
            int(grid_body[2]),
            (float.fromhex(grid_body[3]), float.fromhex(grid_body[4])),
        )
    else:
        raise CorruptSnapshotError(f"unknown grid kind {kind!r}")

    epsilon = float.fromhex(_parse_header_line(lines, 2, "epsilon"))
    pot_line = lines[3]
    if not pot_line.startswith("potential:"):
        raise CorruptSnapshotError("missing 'potential:' line")
    potential = json.loads(pot_line[len("potential:") :].strip())
    config_hash = _parse_header_line(lines, 4, "config")

    count_body = _parse_header_line(lines, 5, "values")
    expected = int(count_body)
    value_lines = lines[6:]
    if len(value_lines) != expected:
        raise CorruptSnapshotError(
            f"value count mismatch: expected {expected} values, found {len(value_lines)}"
        )
    vals = np.array([float.fromhex(ln.split()[0]) for ln in value_lines])
    if expected != grid.npoints:
        raise CorruptSnapshotError(
            f"value count {expected} does not match grid size {grid.npoints}"
        )
    field = Field(grid, vals.reshape(grid.shape), epsilon)
    meta = {"potential": potential, "config_hash": config_hash, "version": version}
    return field, meta


def load_snapshot(path) -> Field:
    field, _ = load_snapshot_with_meta(path)
    return field


# ---------------------------------------------------------------------------
# CSV emission


def emit_plotdata(obj, path) -> None:
    """Write plain CSV for external plotting tools.

    Fields become coordinate/value rows, decay fits distance/log-gap/fitted
    rows (with the fitted constants in a comment header), flow traces
    step/energy(/angles) rows, experiment reports one census row per run.
    """
    path = Path(path)
    if isinstance(obj, Field):
        _emit_field(obj, path)
    elif isinstance(obj, DecayFit):
        raise TypeError("decay fits need the field for distances; pass (fit, field, nodal_set)")
    elif isinstance(obj, tuple) and len(obj) == 3 and isinstance(obj[0], DecayFit):
        _emit_decay(obj[0], obj[1], obj[2], path)
    elif isinstance(obj, FlowTrace):
        _emit_trace(obj, path)
    elif isinstance(obj, ExperimentReport):
        _emit_report(obj, path)
    elif isinstance(obj, NodalSet):
        _emit_nodal(obj, path)
    else:
        raise TypeError(f"no CSV emitter for {type(obj).__name__}")


def _emit_field(f: Field, path: Path) -> None:
    g = f.grid
    if g.kind == "torus":
        th, yy = g.axis(0), g.axis(1)
        rows = ["theta,y,value"]
        for i in range(g.shape[0]):
            for j in range(g.shape[1]):
                rows.append(f"{th[i]!r},{yy[j]!r},{f.values[i, j]!r}")
    else:
        name = "theta" if g.kind == "circle" else "x"
        rows = [f"{name},value"]
        coords = g.axis(0)
        for c, v in zip(coords, f.values):
            rows.append(f"{c!r},{v!r}")
    path.write_text("\n".join(rows) + "\n")


def _emit_decay(fit: DecayFit, f: Field, ns, path: Path) -> None:
    from .grids import circle_distance

    coords = f.grid.axis(0)
    if f.grid.kind == "circle":
        d = circle_distance(coords[:, None], ns.angles[None, :], f.grid.lengths[0]).min(axis=1)
    else:
        d = np.abs(coords[:, None] - ns.angles[None, :]).min(axis=1)
    gap = np.abs(f.values**2 - 1.0)
    rows = [
        f"# amplitude={fit.amplitude!r} kappa={fit.kappa!r} rms_residual={fit.rms_residual!r}",
        "distance,log_gap,fitted",
    ]
    logC = np.log(fit.amplitude)
    for di, gi in zip(d, gap):
        lg = repr(float(np.log(gi))) if gi > 0 else ""
        rows.append(f"{di!r},{lg},{float(logC - fit.kappa * di)!r}")
    path.write_text("\n".join(rows) + "\n")


def _emit_trace(trace: FlowTrace, path: Path) -> None:
    if trace.angle_samples:
        width = max(len(a) for _, a in trace.angle_samples)
        header = "step,energy," + ",".join(f"angle{i}" for i in range(width))
        rows = [header]
        for step, angles in trace.angle_samples:
            e = trace.energies[step]
            cells = [repr(float(a)) for a in angles] + [""] * (width - len(angles))
            rows.append(f"{step},{float(e)!r}," + ",".join(cells))
    else:
        rows = ["step,energy"]
        for i, e in enumerate(trace.energies):
            rows.append(f"{i},{float(e)!r}")
    path.write_text("\n".join(rows) + "\n")


def _emit_report(report: ExperimentReport, path: Path) -> None:
    keys = sorted({k for r in report.runs for k in r})
    rows = [",".join(keys)]
    for r in report.runs:
        cells = []
        for k in keys:
            v = r.get(k, "")
            if isinstance(v, float):
                cells.append(repr(v))
            elif isinstance(v, (list, tuple)):
                cells.append('"' + ";".join(repr(float(x)) for x in v) + '"')
            else:
                cells.append(str(v))
        rows.append(",".join(cells))
    path.write_text("\n".join(rows) + "\n")


def _emit_nodal(ns: NodalSet, path: Path) -> None:
    if ns.kind == "torus" and ns.points is not None:
        rows = ["theta,y,sign,axis"]
        for (t, y), s, ax in zip(ns.points, ns.point_signs, ns.point_axes):
            rows.append(f"{t!r},{y!r},{int(s)},{int(ax)}")
    else:
        rows = ["position,direction"]
        for a, d in zip(ns.angles, ns.directions):
            rows.append(f"{float(a)!r},{int(d)}")
    path.write_text("\n".join(rows) + "\n")
