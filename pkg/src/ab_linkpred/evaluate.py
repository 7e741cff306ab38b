"""Confusion counting, precision/recall/F1, experiment runner, grid sweeps.

A sweep cell is one full pipeline run: featurize, balance, stratified
split, train, score the test rows, count. Cells are independent and every
random choice derives from the cell's seed, so a sweep is reproducible
regardless of worker count or completion order.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from ._seeds import derive_seed
from .centrality import CentralityTable, Strategy, table_for
from .featurize import FeatureConfig, balanced_dataset, build_dataset, split
from .graph import Graph
from .model import predict_scores, train


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f1: float
    counts: ConfusionCounts


def confusion(y_true, y_pred) -> ConfusionCounts:
    """Standard binary confusion counts; inputs must be equal-length 0/1 vectors."""
    t = np.asarray(y_true, dtype=np.int64)
    p = np.asarray(y_pred, dtype=np.int64)
    if t.shape != p.shape or t.ndim != 1:
        raise ValueError(f"label vectors must match, got shapes {t.shape} and {p.shape}")
    for name, arr in (("y_true", t), ("y_pred", p)):
        if len(arr) and not np.isin(arr, (0, 1)).all():
            raise ValueError(f"{name} must contain only 0/1 labels")
    tp = int(((t == 1) & (p == 1)).sum())
    fp = int(((t == 0) & (p == 1)).sum())
    fn = int(((t == 1) & (p == 0)).sum())
    tn = int(((t == 0) & (p == 0)).sum())
    return ConfusionCounts(tp, fp, fn, tn)


def metrics(c: ConfusionCounts) -> MetricsReport:
    """Precision, recall, F1 from exact counts.

    Zero denominators (all-negative predictions or truths) yield 0 rather
    than an error so degenerate sweep cells still produce a record. F1 is
    computed as 2tp / (2tp + fp + fn), never from rounded precision/recall.
    """
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    f1 = 2.0 * c.tp / (2.0 * c.tp + c.fp + c.fn) if 2 * c.tp + c.fp + c.fn else 0.0
    return MetricsReport(precision, recall, f1, c)


def format_report(r: MetricsReport) -> str:
    """Aligned text block for terminal output."""
    c = r.counts
    lines = [
        f"tp         {c.tp:>10d}",
        f"fp         {c.fp:>10d}",
        f"fn         {c.fn:>10d}",
        f"tn         {c.tn:>10d}",
        f"precision  {r.precision:>10.6f}",
        f"recall     {r.recall:>10.6f}",
        f"f1         {r.f1:>10.6f}",
    ]
    return "\n".join(lines)


def run_experiment(
    g: Graph,
    config: FeatureConfig,
    *,
    classifier: str = "forest",
    classifier_params: dict | None = None,
    balance_ratio: float | None = 1.0,
    test_fraction: float = 0.25,
    threshold: float = 0.5,
    table: CentralityTable | None = None,
) -> MetricsReport:
    """One full pipeline run, fully determined by config.seed.

    balance_ratio None skips balancing and keeps every candidate pair.
    Balancing happens before feature extraction (the kept-row choice only
    needs labels), which is output-identical to extracting everything first
    and then subsampling.
    """
    if table is None:
        table = table_for(g, config.strategy)
    if balance_ratio is None:
        data = build_dataset(g, config, table=table)
    else:
        data = balanced_dataset(g, config, balance_ratio, config.seed, table=table)
    parts = split(data, test_fraction, config.seed)
    clf = train(
        parts.Xtrain,
        parts.ytrain,
        kind=classifier,
        params=classifier_params,
        seed=derive_seed(config.seed, "train"),
    )
    scores = predict_scores(clf, parts.Xtest)
    y_pred = (scores >= threshold).astype(np.int8)
    return metrics(confusion(parts.ytest, y_pred))


@dataclass
class SweepCell:
    """Result of one (a, b, strategy, seed) cell, or its failure."""

    a: int
    b: int
    strategy: str
    seed: int
    report: MetricsReport | None
    wall_ms: float
    error: str | None = None


@dataclass
class SweepResult:
    cells: list[SweepCell]


def sweep(
    g: Graph,
    a_max: int,
    b_max: int,
    strategies,
    seeds,
    *,
    classifier: str = "forest",
    classifier_params: dict | None = None,
    balance_ratio: float | None = 1.0,
    test_fraction: float = 0.25,
    threshold: float = 0.5,
    mask_pair_edge: bool = False,
    threads: int = 1,
) -> SweepResult:
    """Run every cell of the grid a in 1..a_max, b in 0..b_max.

    Cell failures are recorded in place and the sweep continues. Records
    are ordered canonically by (a, b, strategy, seed) whatever the worker
    schedule; centrality tables are computed once per measure and shared.
    """
    if a_max < 1:
        raise ValueError(f"a_max must be >= 1, got {a_max}")
    if b_max < 0:
        raise ValueError(f"b_max must be >= 0, got {b_max}")
    strategies = list(strategies)
    seeds = list(seeds)
    tables = {kind: table_for(g, Strategy(kind)) for kind in set(strategies) if kind != "random"}

    grid = sorted(product(range(1, a_max + 1), range(0, b_max + 1), strategies, seeds))

    def run_cell(cell) -> SweepCell:
        a, b, kind, seed = cell
        strategy = Strategy(kind, seed=seed if kind == "random" else None)
        config = FeatureConfig(a=a, b=b, strategy=strategy, mask_pair_edge=mask_pair_edge, seed=seed)
        start = time.perf_counter()
        try:
            report = run_experiment(
                g,
                config,
                classifier=classifier,
                classifier_params=classifier_params,
                balance_ratio=balance_ratio,
                test_fraction=test_fraction,
                threshold=threshold,
                table=tables.get(kind),
            )
            error = None
        except Exception as err:  # cell isolation: any stage failure is recorded
            report = None
            error = str(err)
        wall_ms = (time.perf_counter() - start) * 1000.0
        return SweepCell(a, b, kind, seed, report, wall_ms, error)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(run_cell, grid))
    else:
        cells = [run_cell(cell) for cell in grid]
    return SweepResult(cells=cells)


CSV_HEADER = ["a", "b", "strategy", "seed", "precision", "recall", "f1", "tp", "fp", "fn", "tn", "wall_ms"]


def csv_cell_row(cell: SweepCell) -> list[str]:
    base = [str(cell.a), str(cell.b), cell.strategy, str(cell.seed)]
    if cell.report is None:
        body = [""] * 7
    else:
        r = cell.report
        c = r.counts
        body = [repr(r.precision), repr(r.recall), repr(r.f1), str(c.tp), str(c.fp), str(c.fn), str(c.tn)]
    return base + body + [f"{cell.wall_ms:.3f}"]


def export_csv(result: SweepResult, sink) -> None:
    """Fixed-column CSV, one row per cell; failed cells keep their slot with
    empty metric fields so the grid stays complete."""
    if not result.cells:
        raise ValueError("cannot export an empty sweep result")
    stream = sink
    opened = False
    if isinstance(sink, (str, os.PathLike)):
        stream = open(sink, "w", encoding="utf-8", newline="")
        opened = True
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for cell in result.cells:
            writer.writerow(csv_cell_row(cell))
    finally:
        if opened:
            stream.close()


def _ramp(t: float) -> str:
    """Sequential light-to-dark blue ramp over [0, 1]."""
    t = min(1.0, max(0.0, t))
    lo = (247, 251, 255)
    hi = (8, 48, 107)
    r, g, b = (round(lo[i] + t * (hi[i] - lo[i])) for i in range(3))
    return f"rgb({r},{g},{b})"


def render_heatmap(result: SweepResult, metric: str = "f1", sink=None) -> str:
    """SVG grid of the chosen metric: rows are a ascending top to bottom,
    columns are b ascending left to right, one panel per strategy.

    Cell values are means over seeds; each cell is one rectangle annotated
    with the value to 2 decimals on a color ramp fixed to [0, 1]. Returns
    the SVG text and writes it when a sink is given.
    """
    if not result.cells:
        raise ValueError("cannot render an empty sweep result")
    if metric not in ("precision", "recall", "f1"):
        raise ValueError(f"metric must be precision, recall, or f1, got {metric!r}")
    a_values = sorted({c.a for c in result.cells})
    b_values = sorted({c.b for c in result.cells})
    strategies = sorted({c.strategy for c in result.cells})

    sums: dict[tuple[str, int, int], list[float]] = {}
    for cell in result.cells:
        if cell.report is not None:
            sums.setdefault((cell.strategy, cell.a, cell.b), []).append(getattr(cell.report, metric))

    cell_w, cell_h = 64, 40
    left, top, gap = 58, 52, 30
    panel_w = left + len(b_values) * cell_w + 12
    panel_h = top + len(a_values) * cell_h + 12
    width = len(strategies) * panel_w + (len(strategies) - 1) * gap
    height = panel_h
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="12">'
    ]
    for p, strategy in enumerate(strategies):
        ox = p * (panel_w + gap)
        parts.append(f'<text x="{ox + left}" y="16" font-size="14">{strategy} ({metric})</text>')
        for j, b in enumerate(b_values):
            parts.append(
                f'<text x="{ox + left + j * cell_w + cell_w // 2}" y="{top - 8}" text-anchor="middle">b={b}</text>'
            )
        for i, a in enumerate(a_values):
            parts.append(
                f'<text x="{ox + left - 8}" y="{top + i * cell_h + cell_h // 2 + 4}" text-anchor="end">a={a}</text>'
            )
            for j, b in enumerate(b_values):
                x = ox + left + j * cell_w
                y = top + i * cell_h
                got = sums.get((strategy, a, b))
                if got:
                    val = sum(got) / len(got)
                    fill = _ramp(val)
                    text_fill = "#ffffff" if val > 0.55 else "#1a1a1a"
                    label = f"{val:.2f}"
                else:
                    val = None
                    fill = "#dddddd"
                    text_fill = "#1a1a1a"
                    label = ""
                parts.append(
                    f'<rect x="{x}" y="{y}" width="{cell_w}" height="{cell_h}" '
                    f'fill="{fill}" stroke="#ffffff"/>'
                )
                if label:
                    parts.append(
                        f'<text x="{x + cell_w // 2}" y="{y + cell_h // 2 + 4}" '
                        f'text-anchor="middle" fill="{text_fill}">{label}</text>'
                    )
    parts.append("</svg>")
    svg = "\n".join(parts) + "\n"
    if sink is not None:
        if isinstance(sink, (str, os.PathLike)):
            with open(sink, "w", encoding="utf-8") as f:
                f.write(svg)
        else:
            sink.write(svg)
    return svg
