"""
Experience replay memory shared by the deep learners
"""

from dataclasses import dataclass
from typing import List

import numpy as np


@dataclass(frozen=True, eq=False)
class Experience:
    """One transition; reward is numeric for the baseline and a tier for ordinal learners"""
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    terminal: bool


class ReplayBuffer:
    """Fixed-capacity ring of experiences; the oldest record is evicted first"""

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError("replay capacity must be at least 1")
        self.capacity = capacity
        self._records: List[Experience] = []
        self._next = 0

    def __len__(self) -> int:
        return len(self._records)

    def push(self, experience: Experience) -> None:
        if len(self._records) < self.capacity:
            self._records.append(experience)
        else:
            self._records[self._next] = experience
        self._next = (self._next + 1) % self.capacity

    def sample(self, batch: int, rng: np.random.Generator) -> List[Experience]:
        """Uniform sample of min(batch, size) distinct records."""
        if not self._records:
            raise ValueError("nothing to sample")
        count = min(batch, len(self._records))
        indices = rng.choice(len(self._records), size=count, replace=False)
        return [self._records[i] for i in indices]


def stack_batch(batch: List[Experience]):
    """Column arrays (states, actions, rewards, next_states, terminals) of a sample."""
    states = np.stack([e.state for e in batch]).astype(float)
    actions = np.array([e.action for e in batch], dtype=int)
    rewards = np.array([e.reward for e in batch], dtype=float)
    next_states = np.stack([e.next_state for e in batch]).astype(float)
    terminals = np.array([e.terminal for e in batch], dtype=bool)
    return states, actions, rewards, next_states, terminals
