import csv
import io

import numpy as np
import pytest

from evaluation import (
    Confusion,
    UndefinedAucError,
    build_report,
    confusion,
    metrics,
    per_scenario_report,
    render_text,
    report_from_json,
    report_to_json,
    roc_auc,
    roc_to_csv,
    write_roc_csv,
)
from network import SCENE_KINDS, ClipPrediction, Drowsiness, LabelKind, Network, condition_name


def prediction_for(clip, drowsy: int, probability: float, scene_correct: bool = True) -> ClipPrediction:
    scene = {}
    for kind in SCENE_KINDS:
        value = int(clip.labels.category(kind))
        scene[kind] = value if scene_correct else (value % 2) + 1
    return ClipPrediction(
        scene=scene,
        scene_names={kind: condition_name(clip.labels.category(kind)) for kind in SCENE_KINDS},
        drowsy_class=Drowsiness(drowsy),
        drowsy_probability=probability,
        probabilities=(1.0 - probability, probability),
    )


def honest_predictions(clips, wrong: set[int] = frozenset()):
    """Correct drowsiness calls except for the listed positions."""
    out = []
    for i, clip in enumerate(clips):
        truth = int(clip.labels.drowsy)
        drowsy = 1 - truth if i in wrong else truth
        out.append(prediction_for(clip, drowsy, 0.8 if drowsy else 0.2))
    return out


# -- confusion and rates -------------------------------------------------------


def test_confusion_hand_case():
    c = confusion([1, 0, 1, 1, 0, 0], [1, 1, 0, 1, 0, 0])
    assert c == Confusion(tp=2, fp=1, fn=1, tn=2)
    assert c.total == 6


def test_confusion_positive_class_swap():
    predictions, truths = [1, 0, 1, 1, 0, 0, 1], [1, 1, 0, 1, 0, 0, 0]
    c = confusion(predictions, truths)
    inverted = confusion(predictions, truths, positive=Drowsiness.NON_DROWSY)
    assert (inverted.tp, inverted.fp, inverted.fn, inverted.tn) == (c.tn, c.fn, c.fp, c.tp)


def test_confusion_matches_counting(rng):
    for _ in range(50):
        n = int(rng.integers(1, 30))
        predictions = rng.integers(0, 2, size=n).tolist()
        truths = rng.integers(0, 2, size=n).tolist()
        pairs = list(zip(predictions, truths))
        expected = Confusion(
            tp=pairs.count((1, 1)), fp=pairs.count((1, 0)), fn=pairs.count((0, 1)), tn=pairs.count((0, 0))
        )
        assert confusion(predictions, truths) == expected


def test_confusion_edge_cases():
    assert confusion([], []) == Confusion()
    assert confusion([1, 1], [1, 1]) == Confusion(tp=2)
    with pytest.raises(ValueError):
        confusion([1, 0], [1])
    with pytest.raises(ValueError):
        confusion([2, 0], [1, 0])


def test_rates_example():
    m = metrics(Confusion(tp=8, fp=2, fn=2, tn=8))
    assert m.precision == pytest.approx(0.8)
    assert m.detection_rate == pytest.approx(0.8)
    assert m.f_measure == pytest.approx(0.8)
    assert m.accuracy == pytest.approx(0.8)
    assert m.degenerate == []


def test_rates_f_measure_is_harmonic_mean():
    m = metrics(Confusion(tp=3, fp=1, fn=5, tn=4))
    assert m.precision == pytest.approx(0.75)
    assert m.detection_rate == pytest.approx(3 / 8)
    assert m.f_measure == pytest.approx(2 * 0.75 * 0.375 / (0.75 + 0.375))
    assert m.accuracy == pytest.approx(7 / 13)


def test_rates_zero_denominators_are_flagged():
    m = metrics(Confusion(tn=5))
    assert (m.precision, m.detection_rate, m.f_measure, m.accuracy) == (0.0, 0.0, 0.0, 1.0)
    assert m.degenerate == ["precision", "detection_rate", "f_measure"]
    empty = metrics(Confusion())
    assert empty.degenerate == ["precision", "detection_rate", "f_measure", "accuracy"]


def test_rates_match_hand_formulas_on_random_tables(rng):
    for _ in range(1000):
        tp, fp, fn, tn = (int(v) for v in rng.integers(0, 40, size=4))
        m = metrics(Confusion(tp=tp, fp=fp, fn=fn, tn=tn))
        precision = tp / (tp + fp) if tp + fp else 0.0
        detection_rate = tp / (tp + fn) if tp + fn else 0.0
        both = precision + detection_rate
        f = 2 * precision * detection_rate / both if both else 0.0
        accuracy = (tp + tn) / (tp + fp + fn + tn) if tp + fp + fn + tn else 0.0
        assert m.precision == pytest.approx(precision)
        assert m.detection_rate == pytest.approx(detection_rate)
        assert m.f_measure == pytest.approx(f)
        assert m.accuracy == pytest.approx(accuracy)
        low, high = sorted((m.precision, m.detection_rate))
        assert low - 1e-12 <= m.f_measure <= high + 1e-12


# -- ROC --------------------------------------------------------------------------


def test_auc_perfect_inverted_and_tied():
    assert roc_auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]).auc == 1.0
    assert roc_auc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]).auc == 0.0
    tied = roc_auc([0.5] * 6, [0, 1, 0, 1, 0, 1])
    assert tied.auc == 0.5
    assert [(p.fpr, p.tpr) for p in tied.points] == [(0.0, 0.0), (1.0, 1.0)]


def test_roc_points_run_from_origin_to_corner():
    curve = roc_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
    first, last = curve.points[0], curve.points[-1]
    assert (first.fpr, first.tpr) == (0.0, 0.0)
    assert first.threshold == pytest.approx(1.8)
    assert (last.fpr, last.tpr) == (1.0, 1.0)
    thresholds = [p.threshold for p in curve.points]
    assert thresholds == sorted(thresholds, reverse=True)
    assert curve.auc == pytest.approx(0.75)


def test_auc_equals_pairwise_ranking(rng):
    scores = rng.integers(0, 6, size=60) / 5.0
    truths = rng.integers(0, 2, size=60)
    truths[:2] = [0, 1]
    pos, neg = scores[truths == 1], scores[truths == 0]
    wins = sum((p > n) + 0.5 * (p == n) for p in pos for n in neg)
    assert roc_auc(scores.tolist(), truths.tolist()).auc == pytest.approx(wins / (len(pos) * len(neg)), abs=1e-12)


@pytest.mark.parametrize(
    "transform",
    [np.sqrt, lambda s: s**3, lambda s: np.expm1(2.0 * s) / np.expm1(2.0)],
    ids=["sqrt", "cube", "exp"],
)
def test_auc_is_invariant_under_monotone_rescoring(rng, transform):
    scores = rng.integers(0, 20, size=80) / 19.0
    truths = rng.integers(0, 2, size=80)
    truths[:2] = [0, 1]
    before = roc_auc(scores.tolist(), truths.tolist()).auc
    after = roc_auc(np.clip(transform(scores), 0.0, 1.0).tolist(), truths.tolist()).auc
    assert after == pytest.approx(before, abs=1e-12)


def test_random_scores_give_chance_auc(rng):
    scores = rng.random(4000)
    truths = rng.integers(0, 2, size=4000)
    assert roc_auc(scores.tolist(), truths.tolist()).auc == pytest.approx(0.5, abs=0.03)


def test_roc_errors():
    with pytest.raises(UndefinedAucError):
        roc_auc([0.2, 0.9], [1, 1])
    with pytest.raises(ValueError):
        roc_auc([0.2], [0, 1])
    with pytest.raises(ValueError):
        roc_auc([0.2, 1.5], [0, 1])


def test_roc_csv(tmp_path):
    curve = roc_auc([0.1, 0.9], [0, 1])
    rows = list(csv.reader(io.StringIO(roc_to_csv(curve))))
    assert rows[0] == ["threshold", "fpr", "tpr"]
    assert [(float(r[1]), float(r[2])) for r in rows[1:]] == [(p.fpr, p.tpr) for p in curve.points]
    path = tmp_path / "roc.csv"
    write_roc_csv(curve, path)
    assert path.read_text() == roc_to_csv(curve)


# -- per-scenario reports -----------------------------------------------------------


def test_scenario_average_is_unweighted(tiny_dataset):
    c = tiny_dataset.clips
    # four DAY_BARE_FACE clips, all right; two DAY_GLASSES clips, one wrong
    clips = [c[0], c[1], c[0], c[1], c[2], c[3]]
    report = build_report(clips, honest_predictions(clips, wrong={5}))
    by_name = {g.scenario: g for g in report.scenarios}
    assert set(by_name) == {"DAY_BARE_FACE", "DAY_GLASSES"}
    assert by_name["DAY_BARE_FACE"].metrics.accuracy == 1.0
    assert by_name["DAY_GLASSES"].metrics.accuracy == 0.5
    assert report.average.accuracy == pytest.approx(0.75)
    assert report.overall.metrics.accuracy == pytest.approx(5 / 6)
    assert report.overall.clips == 6
    assert report.skipped == ["NIGHT_GLASSES", "NIGHT_BARE_FACE", "DAY_SUNGLASSES"]
    assert report.average_scene_accuracy == {kind: 1.0 for kind in SCENE_KINDS}


def test_scene_accuracy_counts_each_head(tiny_dataset):
    clips = tiny_dataset.clips[:4]
    predictions = honest_predictions(clips)
    predictions[0] = prediction_for(clips[0], int(clips[0].labels.drowsy), 0.3, scene_correct=False)
    report = build_report(clips, predictions)
    first = report.scenarios[0]
    assert first.scenario == "DAY_BARE_FACE"
    assert first.scene_accuracy == {kind: 0.5 for kind in SCENE_KINDS}
    assert report.overall.scene_accuracy[LabelKind.EYE] == 0.75


def test_non_drowsy_f_measure_swaps_the_positive_class(tiny_dataset):
    clips = tiny_dataset.clips
    report = build_report(clips, honest_predictions(clips, wrong={0, 3, 6}))
    o = report.overall.confusion
    # with non-drowsy positive, true negatives become the hits
    expected = 2 * o.tn / (2 * o.tn + o.fn + o.fp)
    assert report.overall.non_drowsy_f_measure == pytest.approx(expected)
    assert report.average_non_drowsy_f_measure == pytest.approx(
        np.mean([g.non_drowsy_f_measure for g in report.scenarios])
    )


def test_scene_accuracy_total_averages_the_heads(tiny_dataset):
    clips = tiny_dataset.clips[:4]
    predictions = honest_predictions(clips)
    predictions[0] = prediction_for(clips[0], int(clips[0].labels.drowsy), 0.3, scene_correct=False)
    report = build_report(clips, predictions)
    assert report.scenarios[0].scene_accuracy_total == 0.5
    assert report.scenarios[1].scene_accuracy_total == 1.0
    assert report.overall.scene_accuracy_total == 0.75
    assert report.average_scene_accuracy_total == pytest.approx(0.75)


def test_single_class_report_has_no_roc(tiny_dataset):
    clips = [tiny_dataset.clips[i] for i in (0, 2, 4)]
    report = build_report(clips, honest_predictions(clips))
    assert report.roc is None
    assert "AUC: undefined" in render_text(report)


def test_report_input_errors(tiny_dataset):
    clips = tiny_dataset.clips[:2]
    with pytest.raises(ValueError):
        build_report(clips, honest_predictions(clips[:1]))
    with pytest.raises(ValueError):
        build_report([], [])


def test_report_json_round_trip(tiny_dataset):
    clips = tiny_dataset.clips
    report = build_report(clips, honest_predictions(clips, wrong={1, 4}))
    assert report_from_json(report_to_json(report)) == report


def test_render_text_table(tiny_dataset):
    clips = tiny_dataset.clips[:4]
    text = render_text(build_report(clips, honest_predictions(clips, wrong={2})))
    lines = text.splitlines()
    assert lines[0].split()[:6] == ["Scenario", "Clips", "Precision", "DR", "F", "Accuracy"]
    assert lines[0].split()[6] == "F(non)"
    assert lines[0].split()[-1] == "scenes"
    assert set(lines[1]) <= {"-", " "}
    assert lines[2].startswith("Day bare face")
    assert lines[3].startswith("Day glasses")
    assert lines[5].startswith("Average")
    assert lines[6].startswith("All clips")
    assert "AUC: " in text
    assert "Skipped scenarios: Night glasses, Night bare face, Day sunglasses" in text
    # columns line up
    assert len({len(line) for line in lines[:7]}) == 1


def test_zero_network_report(tiny_config, tiny_dataset):
    report = per_scenario_report(tiny_dataset, Network.zeros(tiny_config))
    assert len(report.scenarios) == 5
    assert all(g.metrics.accuracy == 0.5 for g in report.scenarios)
    assert report.roc is not None and report.roc.auc == 0.5
    glasses = {g.scenario: g.scene_accuracy[LabelKind.GLASSES_ILLUM] for g in report.scenarios}
    assert glasses["DAY_BARE_FACE"] == 1.0
    assert glasses["NIGHT_GLASSES"] == 0.0
    assert np.isclose(report.average.accuracy, 0.5)
