"""
Subcommands: synth, train, eval, predict, gradcheck.

Exit codes: 0 success, 1 usage, 2 data error, 3 divergence, 4 check failure.
Every output file is written atomically, so a failing command leaves none behind.
"""

import argparse
import logging
import re
import sys
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from cli.config import load_run_config
from dataPipeline import (
    ClipAssemblyService,
    FrameFolderSource,
    SynthConfig,
    augment_dataset,
    load_dataset,
    save_dataset,
    synth_generate,
)
from dataPipeline.schema import Dataset
from evaluation import per_scenario_report, render_text, report_to_json, roc_to_csv
from network import Network, load_checkpoint
from network.checkpoint import encode_checkpoint
from network.schema import LabelKind
from network.service import DetectionService
from tensorCore import ShapeError, Tensor
from tensorCore.serialization import atomic_write_all
from training import DivergenceError, Trainer, grad_check
from training.gradcheck import DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DIVERGED = 3
EXIT_CHECK_FAILED = 4

STREAM_TITLES = {
    LabelKind.GLASSES_ILLUM: "glasses/illumination",
    LabelKind.HEAD: "head",
    LabelKind.MOUTH: "mouth",
    LabelKind.EYE: "eye",
}


class UsageError(Exception):
    """Bad command-line arguments."""


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def parse_size(text: str) -> tuple[int, int]:
    match = re.fullmatch(r"(\d+)x(\d+)", text.strip().lower())
    if not match:
        raise UsageError(f"--size must look like HxW, got {text!r}")
    height, width = int(match.group(1)), int(match.group(2))
    if height < 2 or width < 2:
        raise UsageError(f"--size extents must be >= 2, got {text!r}")
    return height, width


def require_same_extents(dataset: Dataset, net: Network) -> None:
    if dataset.extents != net.config.input_shape:
        raise ShapeError(
            f"dataset clips {list(dataset.extents or ())} do not match checkpoint input "
            f"{list(net.config.input_shape)}"
        )


def cmd_synth(args: argparse.Namespace) -> int:
    if args.clips < 1:
        raise UsageError(f"--clips must be >= 1, got {args.clips}")
    height, width = parse_size(args.size)
    try:
        config = SynthConfig(height=height, width=width, noise=args.noise)
    except ValidationError as e:
        raise UsageError(str(e)) from e
    dataset = synth_generate(args.clips, args.seed, config)
    save_dataset(dataset, args.out)
    balance = dataset.class_balance()
    print(f"wrote {len(dataset)} clips {list(dataset.extents)} to {args.out}")
    for group, counts in balance.items():
        print(f"  {group}: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.data)
    if len(dataset) == 0:
        raise ValueError(f"{args.data} holds no clips")
    _, frames, height, width = dataset.extents
    try:
        config = load_run_config(
            args.config,
            overrides={
                "network": {"seed": args.seed},
                "training": {
                    "epochs": args.epochs,
                    "phase1_steps": args.phase1_steps,
                    "lam": args.lam,
                    "beta_reg": args.beta,
                    "lr": args.lr,
                    "batch_size": args.batch_size,
                    "seed": args.seed,
                },
            },
            defaults={"network": {"frames": frames, "height": height, "width": width}},
        )
    except ValidationError as e:
        raise UsageError(f"invalid configuration: {e}") from e
    out = Path(args.out)
    log_path = out.with_suffix(".tsv")
    if log_path == out:
        raise UsageError(f"--out {out} would collide with its step log; use another suffix")
    train_set = augment_dataset(dataset) if args.augment else dataset
    net = Network.initialize(config.network)
    require_same_extents(train_set, net)

    net, report = Trainer(config.training).train(train_set, net)

    accuracy = per_scenario_report(dataset, net).overall.metrics.accuracy
    atomic_write_all({out: encode_checkpoint(net), log_path: report.to_tsv().encode("utf-8")})
    logger.info("wrote checkpoint %s (%d parameters)", out, net.parameter_count())
    print(f"checkpoint: {out}")
    print(f"step log: {log_path}")
    print(f"steps: {len(report.steps)}  epochs: {report.epochs_run}  wall time: {report.wall_time:.1f}s")
    print(f"final checksum: {report.final_checksum}")
    print(f"train accuracy: {accuracy:.4f}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    net = load_checkpoint(args.checkpoint)
    dataset = load_dataset(args.data)
    require_same_extents(dataset, net)
    report = per_scenario_report(dataset, net)

    out = Path(args.report)
    text = render_text(report)
    files = {out: report_to_json(report), out.with_suffix(".txt"): text}
    if args.roc:
        if report.roc is None:
            logger.warning("ROC undefined for a single-class dataset, %s not written", args.roc)
        else:
            files[Path(args.roc)] = roc_to_csv(report.roc)
    atomic_write_all({path: payload.encode("utf-8") for path, payload in files.items()})
    print(text, end="")
    return EXIT_OK


def _clips_for_prediction(spec: str, net: Network) -> list[tuple[str, Tensor]]:
    path = Path(spec)
    if path.is_dir():
        source = FrameFolderSource(ClipAssemblyService(net.config.height, net.config.width), path)
        return [(f"{path}#{i}", clip.clip) for i, clip in enumerate(source.clips())]
    index = None
    if not path.exists():
        head, sep, tail = spec.rpartition(":")
        if sep and tail.isdigit():
            path, index = Path(head), int(tail)
    dataset = load_dataset(path)
    require_same_extents(dataset, net)
    if index is None:
        return [(f"{path}:{i}", clip.clip) for i, clip in enumerate(dataset.clips)]
    if not 0 <= index < len(dataset):
        raise ValueError(f"clip index {index} outside 0..{len(dataset) - 1}")
    return [(f"{path}:{index}", dataset.clips[index].clip)]


def cmd_predict(args: argparse.Namespace) -> int:
    net = load_checkpoint(args.checkpoint)
    service = DetectionService(net)
    for label, clip in _clips_for_prediction(args.clip, net):
        prediction = service.predict(clip)
        print(label)
        for kind, title in STREAM_TITLES.items():
            print(f"  {title}: {prediction.scene_names[kind]}")
        drowsy = "Drowsy" if prediction.drowsy_class else "Non-drowsy"
        print(f"  drowsiness: {drowsy} (probability {prediction.drowsy_probability:.6f})")
    return EXIT_OK


def cmd_gradcheck(args: argparse.Namespace) -> int:
    seeds = list(range(args.seed, args.seed + args.seeds))
    report = grad_check(tolerance=args.tolerance, seeds=seeds)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = ArgumentParser(prog="python -m cli", description="Condition-adaptive drowsiness detection")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic clip dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--clips", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", default="32x32", help="frame extents HxW")
    p.add_argument("--noise", type=float, default=SynthConfig().noise)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("train", parents=[common], help="train all models on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="checkpoint path; the step log goes next to it as .tsv")
    p.add_argument("--config", help="JSON file with 'network' and 'training' sections")
    p.add_argument("--epochs", type=int)
    p.add_argument("--phase1-steps", dest="phase1_steps", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--lr", type=float)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--augment", action="store_true", help="flip + Gaussian pyramid (x8 clips)")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("eval", parents=[common], help="per-scenario metrics for a checkpoint")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--report", required=True, help="JSON report path; the text table goes next to it as .txt")
    p.add_argument("--roc", help="optional ROC CSV path")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("predict", parents=[common], help="scene conditions and drowsiness for clips")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--clip", required=True, help="DATASET[:INDEX] or a frame folder")
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("gradcheck", parents=[common], help="finite-difference check on the tiny network")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(handler=cmd_gradcheck)
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stdout,
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as e:
        logger.error("training diverged: %s", e)
        return EXIT_DIVERGED
    except (OSError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_DATA
