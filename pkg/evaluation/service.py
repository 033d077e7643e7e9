"""
Per-scenario evaluation.

Clips are grouped by their glasses/illumination scenario. Each group gets its
own confusion counts, detection rates and scene-head accuracies; the average
is the plain arithmetic mean over non-empty groups, whatever their sizes.
"""

import logging
from statistics import fmean
from typing import Sequence

from dataPipeline.schema import Dataset, LabeledClip
from evaluation.metrics import confusion, metrics
from evaluation.roc import UndefinedAucError, roc_auc
from evaluation.schema import MetricsReport, RateMetrics, ScenarioMetrics
from network.model import Network
from network.schema import SCENE_KINDS, ClipPrediction, Drowsiness, GlassesIllumination
from network.service import DetectionService

logger = logging.getLogger(__name__)

RATE_FIELDS = ("precision", "detection_rate", "f_measure", "accuracy")
OVERALL = "overall"


def scenario_metrics(
    name: str, clips: Sequence[LabeledClip], predictions: Sequence[ClipPrediction]
) -> ScenarioMetrics:
    calls = [int(p.drowsy_class) for p in predictions]
    truths = [int(clip.labels.drowsy) for clip in clips]
    c = confusion(calls, truths)
    non_drowsy = metrics(confusion(calls, truths, positive=Drowsiness.NON_DROWSY))
    scene_accuracy = {
        kind: sum(p.scene[kind] == int(clip.labels.category(kind)) for clip, p in zip(clips, predictions))
        / len(clips)
        for kind in SCENE_KINDS
    }
    return ScenarioMetrics(
        scenario=name,
        clips=len(clips),
        confusion=c,
        metrics=metrics(c),
        non_drowsy_f_measure=non_drowsy.f_measure,
        scene_accuracy=scene_accuracy,
        scene_accuracy_total=fmean(scene_accuracy.values()),
    )


def build_report(clips: Sequence[LabeledClip], predictions: Sequence[ClipPrediction]) -> MetricsReport:
    """Report from clips and their predictions, in the same order."""
    if len(clips) != len(predictions):
        raise ValueError(f"{len(predictions)} predictions for {len(clips)} clips")
    if not clips:
        raise ValueError("cannot evaluate an empty dataset")

    groups: list[ScenarioMetrics] = []
    skipped: list[str] = []
    for scenario in GlassesIllumination:
        members = [i for i, clip in enumerate(clips) if clip.scenario == scenario]
        if not members:
            logger.warning("no clips for scenario %s, skipped", scenario.name)
            skipped.append(scenario.name)
            continue
        groups.append(
            scenario_metrics(
                scenario.name, [clips[i] for i in members], [predictions[i] for i in members]
            )
        )

    average = RateMetrics(
        **{field: fmean(getattr(g.metrics, field) for g in groups) for field in RATE_FIELDS},
        degenerate=sorted({d for g in groups for d in g.metrics.degenerate}),
    )
    average_scene = {kind: fmean(g.scene_accuracy[kind] for g in groups) for kind in SCENE_KINDS}

    try:
        roc = roc_auc(
            [p.drowsy_probability for p in predictions], [int(c.labels.drowsy) for c in clips]
        )
    except UndefinedAucError as e:
        logger.warning("ROC skipped: %s", e)
        roc = None

    return MetricsReport(
        scenarios=groups,
        average=average,
        average_non_drowsy_f_measure=fmean(g.non_drowsy_f_measure for g in groups),
        average_scene_accuracy=average_scene,
        average_scene_accuracy_total=fmean(average_scene.values()),
        overall=scenario_metrics(OVERALL, clips, predictions),
        roc=roc,
        skipped=skipped,
    )


def per_scenario_report(dataset: Dataset, net: Network) -> MetricsReport:
    predictions = DetectionService(net).predict_many(c.clip for c in dataset.clips)
    report = build_report(dataset.clips, predictions)
    logger.info(
        "evaluated %d clips: accuracy %.4f, average over scenarios %.4f",
        len(dataset),
        report.overall.metrics.accuracy,
        report.average.accuracy,
    )
    return report
