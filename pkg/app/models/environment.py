"""
Data models for environments
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np


class WinCondition(str, Enum):
    SURVIVE = "survive"     # reach the time limit without failing
    TERMINATE = "terminate" # reach a terminal state before the time limit


@dataclass
class StepResult:
    """Feedback of one environment step"""
    next_state: np.ndarray
    reward: float
    terminal: bool
    truncated: bool


@dataclass(frozen=True)
class EnvSpec:
    """Static description of an environment"""
    name: str
    state_dim: int
    n_actions: int
    reward_set: Tuple[float, ...]
    max_steps: int
    win_condition: WinCondition
    win_description: str
    parameters: Dict[str, float] = field(default_factory=dict)

    def is_win(self, last: StepResult) -> bool:
        if self.win_condition == WinCondition.SURVIVE:
            return last.truncated and not last.terminal
        return last.terminal

    def describe(self) -> Dict[str, Any]:
        """JSON-ready summary for run metadata."""
        return {
            "name": self.name,
            "state_dim": self.state_dim,
            "n_actions": self.n_actions,
            "reward_set": list(self.reward_set),
            "max_steps": self.max_steps,
            "win_condition": self.win_condition.value,
            "win_description": self.win_description,
            "parameters": dict(self.parameters),
        }


@dataclass(frozen=True)
class FiniteMdp:
    """Tabular MDP used by the exact oracles"""
    transitions: np.ndarray     # (S, k, S) transition probabilities
    rewards: np.ndarray         # (S, k) numeric rewards
    terminal_states: Tuple[int, ...]
    start_state: int = 0

    @property
    def n_states(self) -> int:
        return self.transitions.shape[0]

    @property
    def n_actions(self) -> int:
        return self.transitions.shape[1]
