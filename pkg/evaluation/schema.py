"""
Evaluation schema: confusion counts, detection rates, ROC and the
per-scenario report.

Positive class = drowsy. Rates whose denominator is zero are reported as 0
and listed in `degenerate`.
"""

from pydantic import BaseModel, ConfigDict, Field

from network.schema import LabelKind

UNIT = dict(ge=0.0, le=1.0)


class Confusion(BaseModel):
    model_config = ConfigDict(frozen=True)

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


class RateMetrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    precision: float = Field(default=0.0, **UNIT)
    detection_rate: float = Field(default=0.0, **UNIT, description="TP / (TP + FN), a.k.a. recall")
    f_measure: float = Field(default=0.0, **UNIT)
    accuracy: float = Field(default=0.0, **UNIT)
    degenerate: list[str] = Field(default_factory=list, description="rates with a zero denominator")


class RocPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    threshold: float = Field(description="clips scoring >= threshold are called drowsy")
    fpr: float = Field(**UNIT)
    tpr: float = Field(**UNIT)


class RocCurve(BaseModel):
    points: list[RocPoint]
    auc: float = Field(**UNIT)


class ScenarioMetrics(BaseModel):
    scenario: str
    clips: int = Field(ge=0)
    confusion: Confusion
    metrics: RateMetrics
    non_drowsy_f_measure: float = Field(
        default=0.0, **UNIT, description="F-measure with non-drowsy as the positive class"
    )
    scene_accuracy: dict[LabelKind, float] = Field(
        default_factory=dict, description="validation accuracy of each scene head"
    )
    scene_accuracy_total: float = Field(default=0.0, **UNIT, description="mean over the four scene heads")


class MetricsReport(BaseModel):
    """Per-scenario detection metrics, their unweighted average, pooled totals and ROC."""

    scenarios: list[ScenarioMetrics]
    average: RateMetrics
    average_non_drowsy_f_measure: float = Field(default=0.0, **UNIT)
    average_scene_accuracy: dict[LabelKind, float] = Field(default_factory=dict)
    average_scene_accuracy_total: float = Field(default=0.0, **UNIT)
    overall: ScenarioMetrics
    roc: RocCurve | None = None
    skipped: list[str] = Field(default_factory=list, description="scenarios without clips")
