"""Report serialization: solver JSON, long-form CSV, ECDF files.

JSON floats are written with 17 significant digits (lossless for float64)
and CSV floats with shortest round-trip ``repr``; both are fixed formats,
so identical inputs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .closed_form import ClosedFormSolution
from .gradient import GdReport
from .simulation import ComparisonReport
from .taylor import TaylorReport


def fmt17(x: float) -> str:
    return f"{float(x):.17g}"


def fmt_gamma(g: float) -> str:
    return f"{float(g):g}"


def dumps_json(obj, indent: int = 2) -> str:
    """Serialize nested dict/list/scalar data with 17-digit floats."""
    return _dumps(obj, indent, 0) + "\n"


def _dumps(obj, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}"{key}": {_dumps(value, indent, level + 1)}'
            for key, value in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{_dumps(value, indent, level + 1)}" for value in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt17(obj)
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    raise TypeError(f"cannot serialize {type(obj)!r}")


def analytical_report_dict(sol: ClosedFormSolution) -> dict:
    return {
        "weights": [float(x) for x in sol.weights],
        "c": sol.c,
        "J": sol.J,
        "D": sol.D,
        "gamma": sol.gamma,
        "mean_excess": sol.expected_excess_return,
        "variance": sol.variance,
        "foc_residual": sol.foc_residual,
        "method": "analytical",
    }


def gd_report_dict(rep: GdReport) -> dict:
    return {
        "weights": [float(x) for x in rep.weights],
        "iterations": rep.iterations,
        "grad_norm": rep.final_gradient_norm,
        "objective": rep.objective,
        "converged": rep.converged,
        "method": "gd",
    }


def taylor_report_dict(rep: TaylorReport) -> dict:
    return {
        "weights": [float(x) for x in rep.weights],
        "iterations": rep.iterations,
        "converged": rep.converged,
        "method": "taylor",
    }


def comparison_report_dict(report: ComparisonReport) -> dict:
    """Nested gamma -> method -> {weights, stats, infeasible_count}."""
    from .simulation import METHODS

    results: dict = {}
    for g in report.gammas:
        row: dict = {}
        for method in METHODS:
            cell = report.cells[(g, method)]
            if cell.failed:
                row[method] = {"error": cell.error}
                continue
            row[method] = {
                "weights": [float(x) for x in cell.weights],
                "stats": {
                    "mean": cell.stats.mean,
                    "sd": cell.stats.sd,
                    "median": cell.stats.median,
                    "mad": cell.stats.mad,
                },
                "infeasible_count": cell.infeasible_count,
            }
        results[fmt_gamma(g)] = row
    return {
        "n": report.n,
        "seed": report.seed,
        "gammas": list(report.gammas),
        "results": results,
    }


def write_text(path, text: str) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_comparison_csv(report: ComparisonReport, path) -> None:
    """Long-form CSV with columns gamma,method,stat,value."""
    from .simulation import METHODS

    lines = ["gamma,method,stat,value"]
    for g in report.gammas:
        for method in METHODS:
            cell = report.cells[(g, method)]
            if cell.failed:
                lines.append(f"{fmt_gamma(g)},{method},error,{cell.error}")
                continue
            stats = cell.stats
            for stat, value in (
                ("mean", stats.mean), ("sd", stats.sd),
                ("median", stats.median), ("mad", stats.mad),
            ):
                lines.append(f"{fmt_gamma(g)},{method},{stat},{value!r}")
    write_text(path, "\n".join(lines) + "\n")


def ecdf_filename(kind: str, gamma: float, method: str) -> str:
    return f"ecdf_{kind}_gamma{fmt_gamma(gamma)}_{method}.csv"


def write_ecdf_files(report: ComparisonReport, outdir) -> list[Path]:
    """One ``x,F`` CSV per (gamma, method, kind); returns written paths."""
    outdir = Path(outdir)
    written: list[Path] = []
    for (g, method, kind), table in report.ecdfs.items():
        lines = ["x,F"]
        for x, f in table:
            lines.append(f"{float(x)!r},{float(f)!r}")
        path = outdir / ecdf_filename(kind, g, method)
        write_text(path, "\n".join(lines) + "\n")
        written.append(path)
    return written


def human_comparison_table(report: ComparisonReport) -> str:
    """Per-gamma blocks with one row per statistic, 6 significant digits."""
    from .simulation import METHODS

    col = 16
    lines: list[str] = []
    header = "stat".ljust(10) + "".join(m.rjust(col) for m in METHODS)
    for g in report.gammas:
        lines.append(f"gamma = {fmt_gamma(g)}")
        lines.append(header)
        for stat in ("mean", "sd", "median", "mad"):
            row = stat.ljust(10)
            for method in METHODS:
                cell = report.cells[(g, method)]
                if cell.failed:
                    row += "failed".rjust(col)
                else:
                    row += f"{getattr(cell.stats, stat):.6g}".rjust(col)
            lines.append(row)
        infeasible = [
            str(report.cells[(g, m)].infeasible_count) for m in METHODS
        ]
        lines.append("infeasible".ljust(10) + "".join(v.rjust(col) for v in infeasible))
        lines.append("")
    return "\n".join(lines)
