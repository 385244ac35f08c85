#!/usr/bin/env python3
"""CSV reports and the console results table"""
import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Union

from ..controllers.evaluator import MetricValues, MetricsReport
from ..controllers.experiment_controller import ExperimentResult
from ..models.synthetic import TrendReport
from ..utils.constants import ABLATION_RESULTS, REFERENCE_RESULTS, REPORT_COLUMNS
from ..utils.formatters import format_mean_std, format_metric
from ..utils.logger import logger

CSV_COLUMNS = ('solver', 'seed', 'N', 'precision', 'recall', 'f1', 'ndcg')
ABLATION_COLUMNS = ('F-score@5', 'F-score@15', 'NDCG@5', 'NDCG@15')


def _metric_row(label: str, seed, n: int, values: MetricValues) -> List[str]:
    return [label, str(seed), str(n), repr(values.precision), repr(values.recall),
            repr(values.f1), repr(values.ndcg)]


def write_report_csv(results: Sequence[ExperimentResult], path: Union[str, Path]) -> Path:
    """Per-seed rows, then a summary block of mean and std rows per solver"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for result in results:
            for seed, report in sorted(result.per_seed.items()):
                for n, values in report.as_rows():
                    writer.writerow(_metric_row(result.label, seed, n, values))
        writer.writerow([])
        writer.writerow(['# summary'])
        writer.writerow(CSV_COLUMNS)
        for result in results:
            for stat, report in (('mean', result.mean), ('std', result.std)):
                for n, values in report.as_rows():
                    writer.writerow(_metric_row(result.label, stat, n, values))
    logger.info(f"Wrote report to {path}")
    return path


def table_cells(report: MetricsReport) -> Dict[str, Optional[float]]:
    """Map a report onto the published column layout (missing cutoffs stay empty)"""
    cells: Dict[str, Optional[float]] = {}
    for column in REPORT_COLUMNS:
        name, n = column.split('@')
        values = report.by_n.get(int(n))
        attribute = {'R': 'recall', 'P': 'precision', 'F-score': 'f1', 'NDCG': 'ndcg'}[name]
        cells[column] = getattr(values, attribute) if values else None
    return cells


def published_rows(dataset: str) -> Dict[str, List[Optional[float]]]:
    """Reference rows in REPORT_COLUMNS order; the outlier ablation only fills its own columns"""
    rows = {solver: list(values) for solver, values in REFERENCE_RESULTS.get(dataset, {}).items()}
    for solver, values in ABLATION_RESULTS.get(dataset, {}).items():
        if solver not in rows:
            cells = dict(zip(ABLATION_COLUMNS, values))
            rows[solver] = [cells.get(column) for column in REPORT_COLUMNS]
    return rows


def render_table(results: Sequence[ExperimentResult], dataset: str = "",
                 stream: Optional[TextIO] = None) -> str:
    """Results table in the published layout; reference rows are added for known datasets"""
    width = max([len('Algorithm')] + [len(r.label) + 12 for r in results])
    lines = ["Algorithm".ljust(width) + " " + " ".join(c.rjust(10) for c in REPORT_COLUMNS)]
    lines.append("-" * len(lines[0]))
    references = published_rows(dataset)
    for result in results:
        if result.solver in references and not result.setting:
            row = references[result.solver]
            lines.append(f"{result.solver} (published)".ljust(width) + " "
                         + " ".join(format_metric(v).rjust(10) for v in row))
        cells = table_cells(result.mean)
        lines.append(result.label.ljust(width) + " "
                     + " ".join(format_metric(cells[c]).rjust(10) for c in REPORT_COLUMNS))
    std_lines = []
    for result in results:
        if len(result.per_seed) > 1:
            for n, values in result.mean.as_rows():
                spread = result.std.by_n[n]
                std_lines.append(f"  {result.label} NDCG@{n} {format_mean_std(values.ndcg, spread.ndcg)}"
                                 f"  F@{n} {format_mean_std(values.f1, spread.f1)}")
    text = "\n".join(lines + ([""] + std_lines if std_lines else []))
    if stream is not None:
        stream.write(text + "\n")
    return text


def render_metrics(report: MetricsReport) -> str:
    """One line per cutoff for a single evaluation"""
    return "\n".join(f"N={n:>3}  P={format_metric(v.precision)}  R={format_metric(v.recall)}  "
                     f"F1={format_metric(v.f1)}  NDCG={format_metric(v.ndcg)}"
                     for n, v in report.as_rows())


def render_trend(report: TrendReport) -> str:
    lines = [f"alpha={report.alpha:g}"]
    for (n, m), loss in sorted(report.mean_loss.items(), key=lambda item: item[0][0] * item[0][1]):
        lines.append(f"{n}x{m}: loss/entry vs A {format_metric(loss)}  "
                     f"vs Y {format_metric(report.mean_truth_loss[(n, m)])}")
    lines.append(f"non-increasing with size: {'yes' if report.decreasing else 'no'}")
    return "\n".join(lines)
