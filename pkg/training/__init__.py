"""
Training module: joint objective with analytic gradients, plain SGD, the
two-phase trainer and the finite-difference gradient check.
"""

from training.gradcheck import GradCheckReport, check_gradients, grad_check, tiny_problem
from training.objective import LossResult, joint_loss, loss_weights
from training.optimizer import RegistryMismatchError, phase_filter, sgd_step
from training.schema import Phase, StepRecord, TrainConfig, TrainReport
from training.service import DivergenceError, Trainer, train

__all__ = [
    "TrainConfig",
    "TrainReport",
    "StepRecord",
    "Phase",
    "LossResult",
    "joint_loss",
    "loss_weights",
    "sgd_step",
    "phase_filter",
    "RegistryMismatchError",
    "Trainer",
    "train",
    "DivergenceError",
    "grad_check",
    "check_gradients",
    "tiny_problem",
    "GradCheckReport",
]
