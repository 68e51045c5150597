"""
Report emission: `report.json`, one plot-ready `curve_<kind>_<variant>.csv`
per fold-averaged SAFE curve, and the prettytable `summary.txt`.

Nothing here records wall-clock time, so identical experiments produce
byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import pandas as pd
from prettytable import PrettyTable

from ..base.errors import IoFailure
from ..evaluation import PROFILE_METRICS, SAFE_CURVES, ExperimentReport
from ..log.logger import get_logger

log = get_logger(__name__)

REPORT_FILE = "report.json"
SUMMARY_FILE = "summary.txt"

METRIC_LABELS = {
    "f1_macro": "F1-macro",
    "accuracy": "Accuracy",
    "mse": "MSE",
    "rga": "RGA",
    "aurga": "AURGA",
    "aurgr_noise": "AURGR",
    "aurgr_fgsm": "AURGR-FGSM",
    "aurge": "AURGE",
}


def _json_safe(value):
    """NaN and infinities become null; everything else passes through"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _write_text(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e
    return path


def curve_file_name(kind_value: str, variant: str) -> str:
    return f"curve_{kind_value}_{variant}.csv"


def curve_frame(curve) -> pd.DataFrame:
    """Two string columns so floats keep their shortest round-trip form; missing scores are empty"""
    return pd.DataFrame({
        "level": [repr(float(v)) for v in curve.levels],
        "score": [repr(float(v)) if math.isfinite(v) else "" for v in curve.scores],
    })


def emit_report(report: ExperimentReport, out_dir: str | Path) -> list[Path]:
    """Write report.json plus every fold-mean curve CSV; returns the written paths"""
    out_dir = Path(out_dir)
    document = json.dumps(_json_safe(report.to_dict()), indent=2, allow_nan=False)
    written = [_write_text(out_dir / REPORT_FILE, document + "\n")]

    for (kind, variant), curve in report.mean_curves().items():
        path = out_dir / curve_file_name(kind.value, variant)
        try:
            curve_frame(curve).to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
        except OSError as e:
            raise IoFailure(f"cannot write {path}: {e}") from e
        written.append(path)

    log.info(f"📝 Wrote {len(written)} result files to {out_dir}")
    return written


def parse_report(path: str | Path) -> ExperimentReport:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise IoFailure(f"{path} is not valid JSON: {e}") from e
    try:
        return ExperimentReport.from_dict(payload)
    except (KeyError, TypeError, ValueError) as e:
        raise IoFailure(f"{path} is not an experiment report: {e}") from e


def _cell(entry: dict, metric: str) -> str:
    if metric not in entry:
        return "N/A"
    return f"{entry[metric]['mean']:.4f} ± {entry[metric]['std']:.4f}"


def _metric_table(report: ExperimentReport, metrics: tuple[str, ...]) -> PrettyTable:
    table = PrettyTable()
    table.field_names = ["Model", *(METRIC_LABELS[m] for m in metrics)]
    for kind in report.kinds:
        entry = report.aggregates.get(kind.value, {})
        table.add_row([kind.label, *(_cell(entry, m) for m in metrics)])
    return table


def summary_tables(report: ExperimentReport) -> str:
    """Predictive table, SAFE table, FGSM table and the normalized profile as plain text"""
    sections = [
        ("PREDICTIVE PERFORMANCE (mean ± std over folds)", ("f1_macro", "accuracy", "mse")),
        ("SAFE METRICS (mean ± std over folds)", ("rga", "aurga", "aurgr_noise", "aurge")),
        ("ADVERSARIAL ROBUSTNESS", ("aurgr_fgsm",)),
    ]
    lines = [
        "=" * 80,
        f"SAFE EVALUATION SUMMARY  |  {report.k}-fold CV  |  seed {report.seed}",
        f"config {report.config_hash or '-'}",
        "=" * 80,
        "",
    ]
    for title, metrics in sections:
        lines += [title, "-" * 80, _metric_table(report, metrics).get_string(), ""]

    if report.profile:
        profile = PrettyTable()
        profile.field_names = ["Model", *(METRIC_LABELS[m] for m in PROFILE_METRICS)]
        for kind in report.kinds:
            entry = report.profile.get(kind.value, {})
            profile.add_row([kind.label, *(f"{entry[m]:.3f}" if m in entry else "N/A" for m in PROFILE_METRICS)])
        lines += ["SAFE PROFILE (min-max normalized across models)", "-" * 80, profile.get_string(), ""]

    curve_names = ", ".join(info['name'] for info in SAFE_CURVES.values())
    lines.append(f"Curves: {curve_names}")
    return "\n".join(lines) + "\n"


def write_summary(report: ExperimentReport, out_dir: str | Path) -> Path:
    return _write_text(Path(out_dir) / SUMMARY_FILE, summary_tables(report))
