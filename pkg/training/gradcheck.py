"""
Finite-difference gradient check.

Central differences with h = 1e-5 against analytic gradients, relative error
|g_a - g_fd| / max(|g_a|, |g_fd|, 1e-8), maximum per parameter group.
"""

import logging
import math
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from pydantic import BaseModel, Field

from dataPipeline.schema import LabeledClip, SynthConfig
from dataPipeline.sources.synthetic import synth_generate
from network.detection import detect
from network.fusion import fuse
from network.model import Network, group_of, parameter_specs
from network.representation import rep_forward
from network.scene import scene_forward
from network.schema import SCENE_KINDS, NetworkConfig
from tensorCore import Tensor
from training.objective import joint_loss
from training.schema import Phase, TrainConfig

logger = logging.getLogger(__name__)

STEP = 1e-5
FLOOR = 1e-8
DEFAULT_TOLERANCE = 1e-4

KINK_MARGIN = 1e-3
MAX_DRAWS = 100
BIAS_RANGE = (0.05, 0.2)
# magnitude of each one-hot code projection entry
CODE_SCALE = (0.5, 1.5)
FEATURE_WEIGHT = "fusion.feature.weight"
CODE_WEIGHTS = frozenset(f"fusion.{kind.value}.weight" for kind in SCENE_KINDS)

Problem = tuple[Network, list[LabeledClip]]
GradientFn = Callable[[Sequence[LabeledClip], Network], Mapping[str, Tensor]]


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), FLOOR)
    return np.abs(analytic - numeric) / scale


def numeric_gradient(
    loss_fn: Callable[[Mapping[str, np.ndarray]], float],
    params: Mapping[str, np.ndarray],
    name: str,
    h: float = STEP,
) -> np.ndarray:
    """Central-difference gradient of loss_fn with respect to params[name]."""
    base = params[name]
    grad = np.zeros(base.shape)
    for idx in np.ndindex(base.shape):
        shifted = base.copy()
        shifted[idx] = base[idx] + h
        plus = loss_fn({**params, name: shifted})
        shifted[idx] = base[idx] - h
        minus = loss_fn({**params, name: shifted})
        grad[idx] = (plus - minus) / (2.0 * h)
    return grad


def check_gradients(
    loss_fn: Callable[[Mapping[str, np.ndarray]], float],
    params: Mapping[str, np.ndarray],
    analytic: Mapping[str, np.ndarray],
    h: float = STEP,
) -> dict[str, float]:
    """Maximum relative error per parameter name."""
    errors = {}
    for name in params:
        numeric = numeric_gradient(loss_fn, params, name, h)
        errors[name] = float(relative_error(np.asarray(analytic[name]), numeric).max())
    return errors


class GradCheckReport(BaseModel):
    tolerance: float
    seeds: list[int]
    max_rel_error: dict[str, float] = Field(description="per parameter group, worst over seeds")
    worst_parameter: dict[str, str] = Field(default_factory=dict)

    @property
    def failing_groups(self) -> list[str]:
        return [g for g, err in self.max_rel_error.items() if not err < self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failing_groups

    def render(self) -> str:
        lines = [f"{'group':<24}{'max rel error':>16}  worst parameter"]
        for group, err in self.max_rel_error.items():
            flag = "" if err < self.tolerance else "  FAIL"
            lines.append(f"{group:<24}{err:>16.3e}  {self.worst_parameter.get(group, '')}{flag}")
        lines.append(f"tolerance {self.tolerance:.1e}: {'ok' if self.passed else 'FAILED'}")
        return "\n".join(lines)


def _pool_gap(act: np.ndarray, window: tuple[int, int, int]) -> float:
    """Smallest lead of a positive pooling winner over its runner-up."""
    c, d, h, w = act.shape
    wd, wh, ww = window
    if wd * wh * ww == 1:
        return math.inf
    blocks = (
        act.reshape(c, d // wd, wd, h // wh, wh, w // ww, ww)
        .transpose(0, 1, 3, 5, 2, 4, 6)
        .reshape(-1, wd * wh * ww)
    )
    ranked = -np.sort(-blocks, axis=1)
    live = ranked[:, 0] > 0
    if not live.any():
        return math.inf
    return float((ranked[live, 0] - ranked[live, 1]).min())


def kink_margin(net: Network, batch: Sequence[LabeledClip]) -> float:
    """
    Distance of the batch's forward pass from the nearest non-differentiable
    point: the smallest |ReLU input| anywhere, or the smallest lead of a max
    pooling winner. Central differences are only valid well above STEP.
    """
    config = net.config
    gaps: list[float] = []
    for sample in batch:
        a, rep_cache = rep_forward(sample.clip, net)
        gaps.extend(float(np.abs(z.array).min()) for z in rep_cache.pre_activations)
        for i, act in enumerate(rep_cache.activations, start=1):
            if i in config.pool_after:
                gaps.append(_pool_gap(act.array, config.pool_window))
        _, scene_cache = scene_forward(a, net)
        hidden = [z for stack in scene_cache.stacks.values() for z in stack.pre_activations[:-1]]
        v, _ = fuse(a, sample.labels.scene_codes(), net)
        _, det_cache = detect(v, net)
        hidden.extend(det_cache.pre_activations[:-1])
        gaps.extend(float(np.abs(z.array).min()) for z in hidden)
    return min(gaps)


def _draw_network(config: NetworkConfig, rng: np.random.Generator) -> Network:
    params = {}
    for spec in parameter_specs(config):
        if spec.is_bias:
            params[spec.name] = Tensor._wrap(rng.uniform(*BIAS_RANGE, size=spec.shape))
        elif spec.name in CODE_WEIGHTS:
            magnitude = rng.uniform(*CODE_SCALE, size=spec.shape)
            params[spec.name] = Tensor._wrap(magnitude * rng.choice([-1.0, 1.0], size=spec.shape))
        else:
            bound = math.sqrt(6.0 / (spec.fan_in + spec.fan_out))
            params[spec.name] = Tensor.uniform(spec.shape, bound, rng)
    return Network(config, params)


def _unit_feature_projection(net: Network, batch: Sequence[LabeledClip]) -> Network | None:
    weight = net[FEATURE_WEIGHT]
    z = np.stack([weight.array @ rep_forward(s.clip, net)[0].array.ravel() for s in batch])
    rms = float(np.sqrt(np.mean(z**2)))
    if rms < KINK_MARGIN:
        return None
    return net.with_params({FEATURE_WEIGHT: weight.scale(1.0 / rms)})


def tiny_problem(seed: int = 0) -> Problem:
    """
    Tiny network and a two-clip (non-drowsy, drowsy) batch, drawn so that
    finite differences are meaningful: positive biases, every factor of the
    fusion product of order one, and every kink at least KINK_MARGIN away.
    Draws that miss the margin are replaced by the next draw of the seed.
    """
    config = NetworkConfig.tiny(seed)
    batch = synth_generate(2, seed, SynthConfig(height=config.height, width=config.width)).clips
    for attempt in range(MAX_DRAWS):
        net = _unit_feature_projection(_draw_network(config, np.random.default_rng([seed, attempt])), batch)
        if net is None:
            continue
        margin = kink_margin(net, batch)
        if margin >= KINK_MARGIN:
            logger.debug("seed %d: draw %d accepted, kink margin %.2e", seed, attempt, margin)
            return net, batch
    raise RuntimeError(f"no draw of seed {seed} keeps every kink {KINK_MARGIN} away")


def grad_check(
    builder: Callable[[int], Problem] = tiny_problem,
    tolerance: float = DEFAULT_TOLERANCE,
    seeds: Iterable[int] = (0,),
    cfg: TrainConfig = TrainConfig(),
    phase: Phase = Phase.JOINT,
    gradient_fn: GradientFn | None = None,
) -> GradCheckReport:
    """
    Compare analytic joint-loss gradients with central differences for every
    parameter of the networks produced by `builder`.

    gradient_fn replaces the analytic gradients (used to check the harness).
    """
    seeds = list(seeds)
    worst: dict[str, float] = {}
    worst_name: dict[str, str] = {}
    for seed in seeds:
        net, batch = builder(seed)
        if gradient_fn is None:
            analytic = joint_loss(batch, net, cfg, phase).gradients
        else:
            analytic = gradient_fn(batch, net)

        base = {name: t.array for name, t in net.params.items()}

        def loss_fn(arrays: Mapping[str, np.ndarray]) -> float:
            candidate = net.with_params({n: Tensor(a) for n, a in arrays.items() if a is not base[n]})
            return joint_loss(batch, candidate, cfg, phase, with_gradients=False).loss

        for name in net.names():
            numeric = numeric_gradient(loss_fn, base, name)
            err = float(relative_error(analytic[name].array, numeric).max())
            group = group_of(name)
            if err > worst.get(group, -1.0):
                worst[group] = err
                worst_name[group] = name
        logger.debug("seed %d checked (%d parameters)", seed, net.parameter_count())

    report = GradCheckReport(
        tolerance=tolerance, seeds=seeds, max_rel_error=worst, worst_parameter=worst_name
    )
    for group in report.failing_groups:
        logger.error(
            "gradient check failed for %s: max relative error %.3e (%s)",
            group,
            worst[group],
            worst_name[group],
        )
    return report
