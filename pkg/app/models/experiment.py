"""
Data models for experiment configuration and results
"""

from dataclasses import dataclass, field
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import settings
from app.models.models import Algorithm, DecisionRule, EnvName, RewardMode


class ExperimentConfig(BaseModel):
    """One (environment x algorithm x reward mode) run over several seeds"""
    env: EnvName = Field(..., description="Environment name")
    algo: Algorithm = Field(..., description="Learning algorithm")
    reward: RewardMode = Field(RewardMode.STANDARD, description="Reward mode for numeric learners")
    episodes: int = Field(400, ge=1, description="Training episodes per seed")
    seeds: Optional[List[int]] = Field(None, description="Run seeds; defaults depend on the algorithm")
    eval_every: Optional[int] = Field(None, ge=1, description="Greedy evaluation and reporting interval")
    out: Optional[str] = Field(None, description="Per-episode CSV path")

    alpha: float = Field(settings.Q_ALPHA, ge=0.0, le=1.0)
    gamma: float = Field(settings.GAMMA, ge=0.0, lt=1.0)
    epsilon_floor: float = Field(settings.EPSILON_FLOOR, ge=0.0, le=1.0)
    decision_rule: DecisionRule = DecisionRule.MAXIMUM

    lr: float = Field(settings.DQN_LR, gt=0.0)
    memory: int = Field(settings.REPLAY_MEMORY, ge=1)
    batch_size: int = Field(settings.BATCH_SIZE, ge=1)
    sync_every: int = Field(settings.SYNC_EVERY, ge=1)
    hidden: List[int] = Field(default_factory=lambda: list(settings.HIDDEN_SIZES))

    workers: int = Field(settings.WORKERS, ge=1)
    timing: bool = Field(True, description="Record wall-clock milliseconds per episode")
    checkpoint_dir: Optional[str] = Field(None, description="Directory for trained network checkpoints")

    @field_validator("seeds")
    @classmethod
    def _validate_seeds(cls, seeds: Optional[List[int]]) -> Optional[List[int]]:
        if seeds is None:
            return None
        if not seeds:
            raise ValueError("seeds must not be empty")
        if len(set(seeds)) != len(seeds):
            raise ValueError("seeds must be distinct")
        if any(seed < 0 for seed in seeds):
            raise ValueError("seeds must be non-negative")
        return seeds

    @field_validator("hidden")
    @classmethod
    def _validate_hidden(cls, hidden: List[int]) -> List[int]:
        if any(size < 1 for size in hidden):
            raise ValueError("hidden layer sizes must be at least 1")
        return hidden

    @model_validator(mode="after")
    def _fill_defaults(self) -> "ExperimentConfig":
        if self.seeds is None:
            seeds = settings.DEEP_SEEDS if self.algo.is_deep else settings.TABULAR_SEEDS
            self.seeds = list(seeds)
        if self.eval_every is None:
            self.eval_every = max(1, self.episodes // 20)
        if self.eval_every > self.episodes:
            raise ValueError(f"eval_every ({self.eval_every}) exceeds episodes ({self.episodes})")
        return self


@dataclass
class EpisodeRecord:
    """Metrics of one training episode"""
    seed: int
    episode: int                    # 1-based
    score: float                    # sum of environment rewards
    win: bool
    greedy_score: Optional[float]   # only on evaluation episodes
    margin: float                   # mean value margin over visited states
    epsilon: float
    wall_ms: float


@dataclass
class RunResult:
    """All episodes of one seed"""
    seed: int
    records: List[EpisodeRecord] = field(default_factory=list)
    wall_seconds: float = 0.0


@dataclass
class SummaryRow:
    """Final-window summary of one (algorithm, environment, reward mode) run"""
    algo: str
    env: str
    reward: str
    runs: int
    episodes: int
    final_score: float
    final_win_rate: float
    final_greedy_score: Optional[float]
    mean_wall_seconds: float
    time_ratio: Optional[float] = None  # ordinal / numeric counterpart
