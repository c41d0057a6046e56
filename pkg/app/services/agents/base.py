"""
Common learner interface used by the experiment runner
"""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np


class BaseAgent(ABC):
    """A learner that acts epsilon-greedily and learns from single transitions"""

    n_actions: int

    @abstractmethod
    def scores(self, state: np.ndarray) -> np.ndarray:
        """Per-action decision scores (Q-values or superiority scores)."""

    @abstractmethod
    def act(self, state: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
        """Choose an action with exploration rate epsilon."""

    @abstractmethod
    def observe(
        self,
        state: np.ndarray,
        action: int,
        reward: float,
        next_state: np.ndarray,
        terminal: bool,
    ) -> Optional[float]:
        """Learn from one transition; returns a fitting loss when one was computed."""

    @abstractmethod
    def value_margin(self, state: np.ndarray) -> float:
        """Gap between the best and second-best action value in a state."""

    def greedy_action(self, state: np.ndarray, rng: np.random.Generator) -> int:
        return self.act(state, 0.0, rng)
