"""Report output: JSON, an aligned text table and the ROC CSV."""

import csv
import io
from pathlib import Path

from evaluation.schema import MetricsReport, RateMetrics, RocCurve
from network.schema import CONDITION_NAMES, SCENE_KINDS, GlassesIllumination, LabelKind
from tensorCore.serialization import atomic_write_text

HEAD_TITLES = {
    LabelKind.GLASSES_ILLUM: "glasses",
    LabelKind.HEAD: "head",
    LabelKind.MOUTH: "mouth",
    LabelKind.EYE: "eye",
}


def report_to_json(report: MetricsReport) -> str:
    return report.model_dump_json(indent=2)


def report_from_json(text: str) -> MetricsReport:
    return MetricsReport.model_validate_json(text)


def _scenario_title(name: str) -> str:
    if name in GlassesIllumination.__members__:
        return CONDITION_NAMES[LabelKind.GLASSES_ILLUM][GlassesIllumination[name]]
    return name.capitalize()


def _rates(m: RateMetrics) -> list[str]:
    return [f"{m.precision:.4f}", f"{m.detection_rate:.4f}", f"{m.f_measure:.4f}", f"{m.accuracy:.4f}"]


def render_text(report: MetricsReport) -> str:
    header = ["Scenario", "Clips", "Precision", "DR", "F", "Accuracy", "F(non)"]
    header += [HEAD_TITLES[k] for k in SCENE_KINDS] + ["scenes"]

    def scene_cells(accuracy: dict[LabelKind, float], total: float) -> list[str]:
        return [f"{accuracy[k]:.4f}" for k in SCENE_KINDS] + [f"{total:.4f}"]

    rows = [header]
    for g in report.scenarios:
        rows.append(
            [_scenario_title(g.scenario), str(g.clips), *_rates(g.metrics), f"{g.non_drowsy_f_measure:.4f}"]
            + scene_cells(g.scene_accuracy, g.scene_accuracy_total)
        )
    rows.append(
        ["Average", "", *_rates(report.average), f"{report.average_non_drowsy_f_measure:.4f}"]
        + scene_cells(report.average_scene_accuracy, report.average_scene_accuracy_total)
    )
    o = report.overall
    rows.append(
        ["All clips", str(o.clips), *_rates(o.metrics), f"{o.non_drowsy_f_measure:.4f}"]
        + scene_cells(o.scene_accuracy, o.scene_accuracy_total)
    )

    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells))
        if i == 0 or i == len(rows) - 3:
            lines.append("  ".join("-" * w for w in widths))
    lines.append(f"AUC: {report.roc.auc:.4f}" if report.roc else "AUC: undefined (one class)")
    if report.skipped:
        lines.append("Skipped scenarios: " + ", ".join(_scenario_title(s) for s in report.skipped))
    if report.average.degenerate:
        lines.append("Zero-denominator rates (reported as 0): " + ", ".join(report.average.degenerate))
    return "\n".join(lines) + "\n"


def roc_to_csv(curve: RocCurve) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["threshold", "fpr", "tpr"])
    for p in curve.points:
        writer.writerow([repr(p.threshold), repr(p.fpr), repr(p.tpr)])
    return buffer.getvalue()


def write_roc_csv(curve: RocCurve, path: str | Path) -> None:
    atomic_write_text(path, roc_to_csv(curve))
