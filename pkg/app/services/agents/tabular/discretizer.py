"""
Equal-width state discretization for table-based learners
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from app.models.models import EnvName


@dataclass(frozen=True)
class Discretizer:
    """Per-dimension clip bounds and bucket counts, combined by mixed radix"""
    lows: Tuple[float, ...]
    highs: Tuple[float, ...]
    buckets: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not (len(self.lows) == len(self.highs) == len(self.buckets)) or not self.buckets:
            raise ValueError("discretizer bounds and bucket counts must have equal, non-zero length")
        for low, high, count in zip(self.lows, self.highs, self.buckets):
            if count < 1:
                raise ValueError("bucket count must be at least 1")
            if not low < high:
                raise ValueError(f"lower bound {low} must be below upper bound {high}")

    @property
    def dimension(self) -> int:
        return len(self.buckets)

    @property
    def n_states(self) -> int:
        return math.prod(self.buckets)

    def bucket(self, dim: int, value: float) -> int:
        low, high, count = self.lows[dim], self.highs[dim], self.buckets[dim]
        clipped = min(max(float(value), low), high)
        return min(int((clipped - low) / (high - low) * count), count - 1)

    def discretize(self, state: Sequence[float]) -> int:
        """Mixed-radix index of a state, first dimension most significant."""
        if len(state) != self.dimension:
            raise ValueError(f"state has {len(state)} components, expected {self.dimension}")
        index = 0
        for dim, value in enumerate(state):
            index = index * self.buckets[dim] + self.bucket(dim, value)
        return index


def cartpole_discretizer() -> Discretizer:
    # position, velocity, angle (rad), angular velocity (rad/s)
    return Discretizer(
        lows=(-2.4, -3.0, -0.21, -3.5),
        highs=(2.4, 3.0, 0.21, 3.5),
        buckets=(10, 10, 10, 10),
    )


def acrobot_discretizer() -> Discretizer:
    # cos/sin of both angles, then both angular velocities
    return Discretizer(
        lows=(-1.0, -1.0, -1.0, -1.0, -4 * math.pi, -9 * math.pi),
        highs=(1.0, 1.0, 1.0, 1.0, 4 * math.pi, 9 * math.pi),
        buckets=(6, 6, 6, 6, 6, 6),
    )


def chain_discretizer() -> Discretizer:
    return Discretizer(lows=(-0.5,), highs=(4.5,), buckets=(5,))


DISCRETIZERS = {
    EnvName.CARTPOLE: cartpole_discretizer,
    EnvName.ACROBOT: acrobot_discretizer,
    EnvName.CHAIN: chain_discretizer,
}


def discretizer_for(env: EnvName) -> Discretizer:
    return DISCRETIZERS[EnvName(env)]()
