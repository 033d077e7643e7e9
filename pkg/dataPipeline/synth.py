"""
Procedural stand-in for in-cabin driver footage.

Every scene-condition category has its own visual signature on a bright elliptical
face blob:

- night scenarios: low base luminance and a dimmer face
- glasses: dark rims around both eyes; sunglasses: a dark band over the eyes
- head nodding: vertical oscillation of the face; looking aside: horizontal
- sleepiness eye: a bright eye pair that shrinks over the clip
- talking: the mouth alternates open/closed; yawning: the mouth opens wider
  frame after frame

Generative table (clip level):

    drowsy      = index % 2
    scenario    = (index // 2) % 5 + 1
    drowsy clip     -> one of {sleepiness eye, yawning, nodding} is forced,
                       the other two streams carry a drowsy cue with p = 0.3
    non-drowsy clip -> eye normal, mouth in {normal, talking},
                       head in {normal, looking aside}

so drowsiness holds exactly when at least one drowsy cue is present and the
classes alternate clip by clip. Up to `max_noisy_frames` frames per stream
carry a different value, which the temporal-IOU rule votes away.
"""

import math

import numpy as np

from dataPipeline.schema import CLIP_LENGTH, FrameSequence, SynthConfig
from network.schema import (
    CATEGORY_ENUMS,
    Drowsiness,
    EyeCondition,
    GlassesIllumination,
    HeadCondition,
    LabelKind,
    MouthCondition,
)
from tensorCore import Tensor

NIGHT = (GlassesIllumination.NIGHT_GLASSES, GlassesIllumination.NIGHT_BARE_FACE)
GLASSES = (GlassesIllumination.DAY_GLASSES, GlassesIllumination.NIGHT_GLASSES)

DAY_BACKGROUND = 0.55
NIGHT_BACKGROUND = 0.15
SECONDARY_CUE_PROBABILITY = 0.3

# (cue stream, drowsy value)
DROWSY_CUES: tuple[tuple[LabelKind, int], ...] = (
    (LabelKind.EYE, EyeCondition.SLEEPINESS),
    (LabelKind.MOUTH, MouthCondition.YAWNING),
    (LabelKind.HEAD, HeadCondition.NODDING),
)
ALERT_CHOICES: dict[LabelKind, tuple[int, ...]] = {
    LabelKind.EYE: (EyeCondition.NORMAL,),
    LabelKind.MOUTH: (MouthCondition.NORMAL, MouthCondition.TALKING_LAUGHING),
    LabelKind.HEAD: (HeadCondition.NORMAL, HeadCondition.LOOKING_ASIDE),
}


def clip_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream per (seed, clip index); clips can be generated in any order."""
    return np.random.default_rng([seed, index])


def sample_clip_labels(index: int, rng: np.random.Generator) -> dict[LabelKind, int]:
    drowsy = index % 2
    labels: dict[LabelKind, int] = {
        LabelKind.GLASSES_ILLUM: (index // 2) % len(GlassesIllumination) + 1,
        LabelKind.DROWSY: drowsy,
    }
    if drowsy:
        forced = int(rng.integers(len(DROWSY_CUES)))
        for i, (kind, cue) in enumerate(DROWSY_CUES):
            if i == forced or rng.random() < SECONDARY_CUE_PROBABILITY:
                labels[kind] = int(cue)
            else:
                choices = ALERT_CHOICES[kind]
                labels[kind] = int(choices[rng.integers(len(choices))])
    else:
        for kind, choices in ALERT_CHOICES.items():
            labels[kind] = int(choices[rng.integers(len(choices))])
    return labels


def frame_streams(
    clip_labels: dict[LabelKind, int], rng: np.random.Generator, max_noisy_frames: int
) -> dict[LabelKind, tuple[int, ...]]:
    """Per-frame streams whose majority value is the clip label."""
    streams = {}
    for kind in LabelKind:
        value = clip_labels[kind]
        stream = [value] * CLIP_LENGTH
        others = [int(c) for c in CATEGORY_ENUMS[kind] if c != value]
        n_noisy = int(rng.integers(max_noisy_frames + 1))
        for t in rng.choice(CLIP_LENGTH, size=n_noisy, replace=False):
            stream[int(t)] = others[rng.integers(len(others))]
        streams[kind] = tuple(stream)
    return streams


def _ellipse(yy: np.ndarray, xx: np.ndarray, cy: float, cx: float, ry: float, rx: float) -> np.ndarray:
    if ry <= 0 or rx <= 0:
        return np.zeros_like(yy, dtype=bool)
    return ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0


def render_frame(
    t: int,
    glasses_illum: int,
    head: int,
    mouth: int,
    eye: int,
    height: int,
    width: int,
) -> np.ndarray:
    """One noiseless [H, W] frame at time t (0..4) for the given frame labels."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    yy /= height - 1
    xx /= width - 1
    night = glasses_illum in NIGHT
    background = NIGHT_BACKGROUND if night else DAY_BACKGROUND
    face_level = background + (0.15 if night else 0.25)
    contrast = 0.2 if night else 0.3
    progress = t / (CLIP_LENGTH - 1)
    swing = math.sin(2.0 * math.pi * progress)

    cy, cx = 0.5, 0.5
    if head == HeadCondition.NODDING:
        cy += 0.12 * swing
    elif head == HeadCondition.LOOKING_ASIDE:
        cx += 0.12 * swing

    img = np.full((height, width), background)
    img[_ellipse(yy, xx, cy, cx, 0.38, 0.3)] = face_level

    eye_y = cy - 0.1
    opening = max(0.0, 1.0 - 0.85 * progress) if eye == EyeCondition.SLEEPINESS else 1.0
    for ex in (cx - 0.12, cx + 0.12):
        if glasses_illum in GLASSES:
            rim = _ellipse(yy, xx, eye_y, ex, 0.1, 0.1) & ~_ellipse(yy, xx, eye_y, ex, 0.07, 0.07)
            img[rim] -= 0.8 * contrast
        img[_ellipse(yy, xx, eye_y, ex, 0.06 * opening, 0.07)] = face_level + contrast

    if glasses_illum == GlassesIllumination.DAY_SUNGLASSES:
        band = (np.abs(yy - eye_y) < 0.08) & (np.abs(xx - cx) < 0.26)
        img[band] *= 0.5

    mouth_height = 0.025
    if mouth == MouthCondition.TALKING_LAUGHING:
        mouth_height = 0.07 if t % 2 else 0.025
    elif mouth == MouthCondition.YAWNING:
        mouth_height = 0.04 + 0.1 * progress
    img[_ellipse(yy, xx, cy + 0.18, cx, mouth_height, 0.12)] -= contrast
    return img


def render_sequence(
    index: int, seed: int, config: SynthConfig = SynthConfig()
) -> FrameSequence:
    """The index-th synthetic sequence of the `seed` family."""
    rng = clip_rng(seed, index)
    streams = frame_streams(sample_clip_labels(index, rng), rng, config.max_noisy_frames)
    frames = np.stack(
        [
            render_frame(
                t,
                streams[LabelKind.GLASSES_ILLUM][t],
                streams[LabelKind.HEAD][t],
                streams[LabelKind.MOUTH][t],
                streams[LabelKind.EYE][t],
                config.height,
                config.width,
            )
            for t in range(CLIP_LENGTH)
        ]
    )
    if config.noise > 0:
        frames = frames + rng.normal(0.0, config.noise, size=frames.shape)
    return FrameSequence(
        frames=Tensor._wrap(np.clip(frames, 0.0, 1.0)),
        labels=streams,
        source_id=f"synth:{seed}:{index}",
    )


def expected_drowsiness(eye: int, mouth: int, head: int) -> Drowsiness:
    """Drowsiness implied by the generative table."""
    cue = (
        eye == EyeCondition.SLEEPINESS
        or mouth == MouthCondition.YAWNING
        or head == HeadCondition.NODDING
    )
    return Drowsiness.DROWSY if cue else Drowsiness.NON_DROWSY
