"""
Two-phase trainer.

Phase 1 runs the first `phase1_steps` SGD updates on the scene objective and
touches only the representation and scene heads. Phase 2 updates every
parameter under the joint objective. Batches come from one seeded permutation
per epoch, so runs with the same seed and config are identical.

Each accepted step is logged as a tab-separated line on the `training.steps`
logger: step, phase, joint loss, E_su, E_det.
"""

import logging
import math
import time
from typing import Callable, Iterator

import numpy as np

from dataPipeline.schema import Dataset, LabeledClip
from network.model import Network
from tensorCore import NonFiniteError, ShapeError
from training.objective import LossResult, joint_loss
from training.optimizer import phase_filter, sgd_step
from training.schema import Phase, StepRecord, TrainConfig, TrainReport

logger = logging.getLogger(__name__)
step_logger = logging.getLogger("training.steps")

MAX_NONFINITE_STEPS = 3


class DivergenceError(RuntimeError):
    """The loss stayed non-finite for MAX_NONFINITE_STEPS consecutive steps."""


def _finite(result: LossResult) -> bool:
    if not math.isfinite(result.loss):
        return False
    return all(g.is_finite() for g in (result.gradients or {}).values())


class Trainer:
    """
    on_step: optional callback(record, net) after every accepted update.
    """

    def __init__(
        self,
        config: TrainConfig,
        on_step: Callable[[StepRecord, Network], None] | None = None,
    ):
        self.config = config
        self._on_step = on_step

    def batches(self, clips: list[LabeledClip], rng: np.random.Generator) -> Iterator[list[LabeledClip]]:
        order = rng.permutation(len(clips))
        size = self.config.batch_size
        for start in range(0, len(clips), size):
            yield [clips[i] for i in order[start : start + size]]

    def phase_at(self, step: int) -> Phase:
        return Phase.SCENE_PRETRAIN if step < self.config.phase1_steps else Phase.JOINT

    def train(self, dataset: Dataset, net: Network) -> tuple[Network, TrainReport]:
        if len(dataset) == 0:
            raise ValueError("cannot train on an empty dataset")
        if dataset.extents != net.config.input_shape:
            raise ShapeError(
                f"dataset clips {list(dataset.extents)} do not match network input "
                f"{list(net.config.input_shape)}"
            )
        cfg = self.config
        rng = np.random.default_rng(cfg.seed)
        report = TrainReport()
        started = time.perf_counter()
        step = 0
        bad_streak = 0
        for epoch in range(cfg.epochs):
            for batch in self.batches(dataset.clips, rng):
                phase = self.phase_at(step)
                try:
                    result = joint_loss(batch, net, cfg, phase)
                except NonFiniteError as e:
                    logger.debug("step %d: %s", step, e)
                    result = None
                if result is None or not _finite(result):
                    bad_streak += 1
                    logger.warning("step %d: non-finite loss, update skipped (%d in a row)", step, bad_streak)
                    if bad_streak >= MAX_NONFINITE_STEPS:
                        raise DivergenceError(
                            f"loss non-finite for {bad_streak} consecutive steps (last step {step})"
                        )
                    step += 1
                    continue
                bad_streak = 0
                net = sgd_step(net, result.gradients, cfg.lr, phase_filter(phase))
                record = StepRecord(
                    step=step, phase=phase, loss=result.loss, e_su=result.e_su, e_det=result.e_det
                )
                report.steps.append(record)
                step_logger.info(record.to_tsv())
                if self._on_step:
                    self._on_step(record, net)
                step += 1
            report.epochs_run = epoch + 1
            logger.debug("epoch %d done, last loss %.6f", epoch + 1, report.steps[-1].loss if report.steps else float("nan"))

        report.final_checksum = net.checksum()
        report.wall_time = time.perf_counter() - started
        logger.info(
            "trained %d steps over %d epochs in %.1fs", len(report.steps), report.epochs_run, report.wall_time
        )
        return net, report


def train(dataset: Dataset, net: Network, cfg: TrainConfig) -> tuple[Network, TrainReport]:
    return Trainer(cfg).train(dataset, net)
