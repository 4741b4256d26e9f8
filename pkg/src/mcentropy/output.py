"""CSV and JSON emission for runs, and reading snapshots back for re-verification.

Layout of an output directory::

    solution.csv          final field
    monitors.csv          one row per step per monitor
    report.json           config echo, summary, all_monitors_passed
    snapshots/index.csv   step, t, dt, file
    snapshots/step_NNNNNN.csv

Numbers are written with 17 significant digits so doubles round-trip.
Nothing time- or host-dependent is written, so reruns are byte-identical.
"""

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import ConfigError, MCEntropyError
from .fv_solver import Field1D, Grid1D
from .runner import summarize
from .thermo import conservative_from_primitive, primitive_from_conservative, thermo_eval


class OutputError(MCEntropyError, OSError):
    def __init__(self, message, path):
        super().__init__(message)
        self.path = str(path)


def fmt(x):
    return f"{float(x):.17g}"


def solution_header(n_species):
    return ["x"] + [f"rho_{k + 1}" for k in range(n_species)] + ["u", "T", "p", "s"]


def solution_table(fld, mix):
    Z = primitive_from_conservative(fld.states, mix)
    th = thermo_eval(Z, mix)
    x = fld.grid.centers()
    return np.column_stack([x, Z, th.p, th.s])


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path, text):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}", path) from None


def solution_csv(fld, mix):
    table = solution_table(fld, mix)
    return _csv_text(solution_header(mix.n_species), ([fmt(v) for v in row] for row in table))


def monitors_csv(rows):
    return _csv_text(
        ["step", "t", "monitor", "label", "worst", "passed"],
        ([r.step, fmt(r.t), r.monitor, r.label, fmt(r.worst), str(r.passed).lower()]
         for r in rows),
    )


def report_dict(result):
    cfg = result.config
    fld = result.final
    summary = summarize(result.rows)
    return {
        "config": cfg.to_dict(),
        "summary": {
            "steps": len(result.steps),
            "t_final": result.t_final,
            "dx": fld.grid.dx,
            "snapshots": len(result.snapshots),
            "initial_totals": cfg.case.initial_field(cfg.n_cells).totals().tolist(),
            "final_totals": fld.totals().tolist(),
            "monitors": list(summary.values()),
        },
        "all_monitors_passed": result.all_passed,
    }


def write_outputs(result, path):
    """Write every output file for ``result`` under directory ``path``."""
    path = Path(path)
    mix = result.config.mixture
    _write(path / "solution.csv", solution_csv(result.final, mix))
    _write(path / "monitors.csv", monitors_csv(result.rows))
    index = []
    for snap in result.snapshots:
        name = f"step_{snap.step:06d}.csv"
        _write(path / "snapshots" / name, solution_csv(snap.field, mix))
        index.append([snap.step, fmt(snap.t), fmt(snap.dt), name])
    _write(path / "snapshots" / "index.csv", _csv_text(["step", "t", "dt", "file"], index))
    _write(path / "report.json", json.dumps(report_dict(result), indent=2) + "\n")
    return path


def _read_text(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc.strerror}", path) from None


def read_snapshot(path, mix, grid):
    """Field from a solution CSV; conservative states rebuilt from ``rho_k, u, T``."""
    rows = list(csv.reader(io.StringIO(_read_text(path))))
    header, body = rows[0], rows[1:]
    if header != solution_header(mix.n_species):
        raise ConfigError(f"unexpected header {header}", path=str(path))
    table = np.array(body, dtype=float)
    if table.shape[0] != grid.n_cells:
        raise ConfigError(f"expected {grid.n_cells} rows", path=str(path))
    Z = table[:, 1:mix.n_species + 3]
    return Field1D(grid, conservative_from_primitive(Z, mix))


def read_run(path):
    """Load ``(config, [(step, t, dt, field), ...])`` from an output directory."""
    from .config import run_config_from_dict

    path = Path(path)
    try:
        report = json.loads(_read_text(path / "report.json"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}",
                          path=str(path / "report.json")) from None
    config = run_config_from_dict(report["config"])
    grid = Grid1D(config.n_cells, config.case.length / config.n_cells, config.case.bc)
    index = list(csv.DictReader(io.StringIO(_read_text(path / "snapshots" / "index.csv"))))
    snaps = []
    for row in index:
        fld = read_snapshot(path / "snapshots" / row["file"], config.mixture, grid)
        snaps.append((int(row["step"]), float(row["t"]), float(row["dt"]), fld))
    return config, snaps
