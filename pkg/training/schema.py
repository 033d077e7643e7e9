"""
Training schema: hyper-parameters, per-step log records and the run report.

Joint objective per batch (mean over clips):
    (1 - lam) * beta_reg * (E_gl + E_h + E_m + E_e) + lam * E_det
Phase 1 (the first phase1_steps updates) trains only the representation and
scene heads on beta_reg * (E_gl + E_h + E_m + E_e).
"""

from enum import IntEnum

from pydantic import BaseModel, ConfigDict, Field

STEP_LOG_COLUMNS = ("step", "phase", "loss", "e_su", "e_det")


class Phase(IntEnum):
    SCENE_PRETRAIN = 1
    JOINT = 2


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    lam: float = Field(default=0.5, ge=0.0, le=1.0, description="balance between E_su and E_det")
    beta_reg: float = Field(default=0.25, gt=0.0, description="weight of the summed scene losses")
    lr: float = Field(default=0.01, ge=0.0, description="SGD learning rate")
    batch_size: int = Field(default=8, ge=1)
    phase1_steps: int = Field(default=200, ge=0, description="scene pretraining updates")
    epochs: int = Field(default=200, ge=1)
    seed: int = Field(default=0, description="shuffle seed")


class StepRecord(BaseModel):
    """One SGD update."""

    model_config = ConfigDict(frozen=True)

    step: int = Field(ge=0)
    phase: Phase
    loss: float
    e_su: float
    e_det: float

    def to_tsv(self) -> str:
        return f"{self.step}\t{int(self.phase)}\t{self.loss!r}\t{self.e_su!r}\t{self.e_det!r}"


class TrainReport(BaseModel):
    steps: list[StepRecord] = Field(default_factory=list)
    epochs_run: int = 0
    final_checksum: str = ""
    wall_time: float = Field(default=0.0, ge=0.0, description="seconds")

    def losses(self) -> list[float]:
        return [s.loss for s in self.steps]

    def to_tsv(self) -> str:
        header = "\t".join(STEP_LOG_COLUMNS)
        return "\n".join([header, *(s.to_tsv() for s in self.steps)]) + "\n"
