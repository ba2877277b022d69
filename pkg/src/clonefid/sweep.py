"""Parameter sweeps behind the fidelity figures, plus a large-N limit study.

Each sweep returns a :class:`SweepTable`; CSV emission is deterministic
(fixed row order, 12 significant digits, no timestamps).
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import cloner
from .cloner import CloneParams
from .errors import DomainError

__all__ = [
    "SweepTable",
    "FIG2_KAPPAS",
    "sweep_fig2",
    "sweep_fig3",
    "limit_study",
    "neville_limit",
    "min_err_for_target",
    "format_number",
]

FIG2_KAPPAS = (2, 3, 4, 8)
DEFAULT_LIMIT_GRID = (10**3, 10**4, 10**5)


def format_number(x) -> str:
    """Integers verbatim, everything else with 12 significant digits."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return f"{float(x):.12g}"


@dataclass
class SweepTable:
    columns: tuple
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        for row in self.rows:
            if len(row) != len(self.columns):
                raise DomainError(f"row {row!r} does not match columns {self.columns}")

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def select(self, **where) -> "SweepTable":
        idx = {self.columns.index(k): v for k, v in where.items()}
        rows = [r for r in self.rows if all(r[i] == v for i, v in idx.items())]
        return SweepTable(self.columns, rows, dict(self.metadata))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(format_number(x) for x in row) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [dict(zip(self.columns, (x if isinstance(x, int) else float(x) for x in r))) for r in self.rows]
        return json.dumps({"columns": list(self.columns), "rows": rows, "metadata": self.metadata}, sort_keys=True)

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    def to_svg(self, x: str, y: str, group: Optional[str] = None, width: int = 640, height: int = 400) -> str:
        """Bare line plot: one polyline per ``group`` value, linear axes."""
        xi, yi = self.columns.index(x), self.columns.index(y)
        gi = self.columns.index(group) if group else None
        series: dict = {}
        for r in self.rows:
            series.setdefault(r[gi] if gi is not None else "", []).append((float(r[xi]), float(r[yi])))
        xs = [p[0] for s in series.values() for p in s]
        ys = [p[1] for s in series.values() for p in s]
        pad = 40
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        sx = (width - 2 * pad) / ((x1 - x0) or 1.0)
        sy = (height - 2 * pad) / ((y1 - y0) or 1.0)
        palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
            'fill="none" stroke="#000"/>',
            f'<text x="{width / 2:.0f}" y="{height - 8}" text-anchor="middle" font-size="12">{x}</text>',
            f'<text x="12" y="{height / 2:.0f}" font-size="12" transform="rotate(-90 12 {height / 2:.0f})">{y}</text>',
            f'<text x="{pad}" y="{height - pad + 14}" font-size="10">{format_number(x0)}</text>',
            f'<text x="{width - pad}" y="{height - pad + 14}" font-size="10" text-anchor="end">{format_number(x1)}</text>',
            f'<text x="{pad - 4}" y="{height - pad}" font-size="10" text-anchor="end">{y0:.4g}</text>',
            f'<text x="{pad - 4}" y="{pad + 4}" font-size="10" text-anchor="end">{y1:.4g}</text>',
        ]
        for i, (key, pts) in enumerate(series.items()):
            color = palette[i % len(palette)]
            coords = " ".join(f"{pad + (px - x0) * sx:.2f},{height - pad - (py - y0) * sy:.2f}" for px, py in pts)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
            if gi is not None:
                out.append(
                    f'<text x="{width - pad - 4}" y="{pad + 14 * (i + 1)}" font-size="11" '
                    f'text-anchor="end" fill="{color}">{group}={key}</text>'
                )
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _float(x) -> float:
    return float(x) if isinstance(x, Fraction) else x


def sweep_fig2(kappas: Iterable[int] = FIG2_KAPPAS, n_values: Iterable[int] = range(1, 101),
               backend: str = "log") -> SweepTable:
    """Block fidelity F(N, kappa N) on a grid; rows ordered by (N, kappa)."""
    kappas = sorted(set(int(k) for k in kappas))
    n_values = sorted(set(int(n) for n in n_values))
    if any(k < 2 for k in kappas) or any(n < 1 for n in n_values):
        raise DomainError("need kappa >= 2 and N >= 1")
    rows = [
        (N, k, _float(cloner.fidelity(CloneParams.from_kappa(N, k), backend)))
        for N in n_values
        for k in kappas
    ]
    meta = {"sweep": "fig2", "kappas": kappas, "N": [n_values[0], n_values[-1], len(n_values)], "backend": backend}
    return SweepTable(("N", "kappa", "F"), rows, meta)


def sweep_fig3(N: int = 1000, kappas: Iterable[int] = FIG2_KAPPAS, err_values: Iterable[int] = range(1, 11),
               backend: str = "log") -> SweepTable:
    """Information fidelity at fixed N over tolerated-error counts; rows ordered by (kappa, Err)."""
    kappas = sorted(set(int(k) for k in kappas))
    err_values = sorted(set(int(e) for e in err_values))
    if any(e < 0 or e > N for e in err_values):
        raise DomainError(f"Err values must lie in 0..{N}")
    rows = []
    for k in kappas:
        p = CloneParams.from_kappa(N, k)
        for e in err_values:
            rows.append((k, e, _float(cloner.info_fidelity(p, e, backend))))
    meta = {"sweep": "fig3", "N": N, "kappas": kappas, "Err": err_values, "backend": backend}
    return SweepTable(("kappa", "Err", "infoF"), rows, meta)


def neville_limit(hs: Sequence[float], values: Sequence[float]) -> float:
    """Polynomial extrapolation of ``values(h)`` to ``h = 0`` (Richardson via Neville)."""
    if len(hs) != len(values) or not hs:
        raise DomainError("need matching, nonempty step and value lists")
    p = [float(v) for v in values]
    h = [float(x) for x in hs]
    n = len(p)
    for level in range(1, n):
        for i in range(n - level):
            p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i])
    return p[0]


def limit_study(kappa: int, n_grid: Iterable[int] = DEFAULT_LIMIT_GRID) -> SweepTable:
    """F(N, kappa N) along a grid with a running extrapolation in ``1/N``.

    Row ``i`` extrapolates from grid points ``0..i``; the last row carries the
    best estimate of the large-N limit.
    """
    grid = sorted(set(int(n) for n in n_grid))
    if kappa < 2 or not grid or grid[0] < 1:
        raise DomainError("need kappa >= 2 and a nonempty grid of positive N")
    Fs = [cloner.fidelity(CloneParams.from_kappa(N, kappa), "log") for N in grid]
    hs = [1.0 / N for N in grid]
    rows = [(N, F, neville_limit(hs[: i + 1], Fs[: i + 1])) for i, (N, F) in enumerate(zip(grid, Fs))]
    meta = {"sweep": "limit", "kappa": kappa, "N": grid, "backend": "log"}
    return SweepTable(("N", "F", "extrapolated_limit"), rows, meta)


def min_err_for_target(N: int, kappa: int, target: float = 0.98) -> int:
    """Smallest Err with information fidelity at least ``target``."""
    p = CloneParams.from_kappa(N, kappa)
    for e in range(N + 1):
        if cloner.info_fidelity(p, e, "log") >= target:
            return e
    return N
