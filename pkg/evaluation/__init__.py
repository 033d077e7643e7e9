"""
Evaluation module: drowsiness detection metrics (precision, detection rate,
F-measure, accuracy), ROC/AUC and per-scenario reports with scene-head
validation accuracies.
"""

from evaluation.metrics import confusion, metrics
from evaluation.render import render_text, report_from_json, report_to_json, roc_to_csv, write_roc_csv
from evaluation.roc import UndefinedAucError, roc_auc
from evaluation.schema import Confusion, MetricsReport, RateMetrics, RocCurve, RocPoint, ScenarioMetrics
from evaluation.service import build_report, per_scenario_report

__all__ = [
    "Confusion",
    "RateMetrics",
    "RocPoint",
    "RocCurve",
    "ScenarioMetrics",
    "MetricsReport",
    "confusion",
    "metrics",
    "roc_auc",
    "UndefinedAucError",
    "build_report",
    "per_scenario_report",
    "render_text",
    "report_to_json",
    "report_from_json",
    "roc_to_csv",
    "write_roc_csv",
]
