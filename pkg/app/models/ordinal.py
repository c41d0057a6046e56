"""
Data models for ordinal reward representation
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

# 1-based reward tier (1 = worst reward, n = best reward)
OrdinalTier = int

# Accumulated, possibly unnormalized tier masses D(s, a); length n, entries >= 0
OrdinalDistribution = np.ndarray

# Normalized tier probabilities P(s, a); entries in [0, 1] summing to 1
ProbabilityVector = np.ndarray


@dataclass(frozen=True)
class TierMap:
    """Order-preserving map from an environment's numeric rewards to tiers 1..n"""
    sorted_rewards: Tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.sorted_rewards:
            raise ValueError("no rewards")
        for low, high in zip(self.sorted_rewards, self.sorted_rewards[1:]):
            if not low < high:
                raise ValueError("tier map rewards must be strictly ascending")

    @property
    def n(self) -> int:
        return len(self.sorted_rewards)


@dataclass(frozen=True)
class EpsilonSchedule:
    """Linear exploration decay reaching its floor after half of the episodes"""
    total_episodes: int
    floor: float = 0.0

    def __post_init__(self) -> None:
        if self.total_episodes < 1:
            raise ValueError("total_episodes must be at least 1")
        if not (0.0 <= self.floor <= 1.0) or math.isnan(self.floor):
            raise ValueError(f"epsilon floor must be in [0, 1], got {self.floor}")
