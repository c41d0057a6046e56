"""
Environment base class
Shared reset/step bookkeeping (seeding, step counter, time-limit truncation).
"""

from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from app.models.environment import EnvSpec, StepResult


class Environment(ABC):
    """Deterministic environment with a seeded initial-state distribution"""

    def __init__(self, seed: Optional[int] = None) -> None:
        self._rng = np.random.default_rng(seed)
        self._state: Optional[np.ndarray] = None
        self._steps = 0

    @abstractmethod
    def spec(self) -> EnvSpec:
        """Static description of the environment."""

    @abstractmethod
    def _initial_state(self, rng: np.random.Generator) -> np.ndarray:
        """Draw an internal start state."""

    @abstractmethod
    def _transition(self, state: np.ndarray, action: int) -> Tuple[np.ndarray, float, bool]:
        """Apply one action to an internal state: (next_state, reward, terminal)."""

    def observe(self, state: np.ndarray) -> np.ndarray:
        """Map an internal state to the exposed observation."""
        return state.copy()

    @property
    def state(self) -> Optional[np.ndarray]:
        return None if self._state is None else self._state.copy()

    def set_state(self, state: np.ndarray) -> None:
        """Place the environment in an arbitrary internal state."""
        self._state = np.asarray(state, dtype=float).copy()
        self._steps = 0

    def reset(self, seed: Optional[int] = None) -> np.ndarray:
        """Start a new episode; a seed restarts the initial-state stream."""
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        self._state = self._initial_state(self._rng)
        self._steps = 0
        return self.observe(self._state)

    def step(self, action: int) -> StepResult:
        if self._state is None:
            raise RuntimeError("reset() must be called before step()")
        spec = self.spec()
        if not (isinstance(action, (int, np.integer)) and 0 <= action < spec.n_actions):
            raise ValueError(f"invalid action {action!r} for {spec.name}")

        next_state, reward, terminal = self._transition(self._state, int(action))
        self._state = next_state
        self._steps += 1
        truncated = not terminal and self._steps >= spec.max_steps
        return StepResult(
            next_state=self.observe(next_state),
            reward=reward,
            terminal=terminal,
            truncated=truncated,
        )
