"""
Reward shaping between an environment and a learner
"""

from app.models.environment import EnvSpec
from app.models.models import RewardMode
from app.services.ordinal_core import change_rewards, tier_map_from_rewards, to_ordinal


class RewardShaper:
    """
    Converts environment rewards into what a learner consumes.

    Ordinal learners always receive tiers 1..n, whatever the reward mode.
    Numeric learners receive the raw reward (standard), the changed reward
    (r - min) / 100 (cr) or the tier index as a plain number (tier).
    """

    def __init__(self, spec: EnvSpec, mode: RewardMode, ordinal: bool) -> None:
        self.mode = RewardMode(mode)
        self.ordinal = ordinal
        self.tier_map = tier_map_from_rewards(spec.reward_set)
        self._changed = change_rewards(spec.reward_set)

    @property
    def n_tiers(self) -> int:
        return self.tier_map.n

    def __call__(self, reward: float) -> float:
        if self.ordinal:
            return to_ordinal(self.tier_map, reward)
        if self.mode == RewardMode.STANDARD:
            return float(reward)
        if self.mode == RewardMode.CR:
            # validates membership the same way the tier lookup does
            tier = to_ordinal(self.tier_map, reward)
            return self._changed[self.tier_map.sorted_rewards[tier - 1]]
        return float(to_ordinal(self.tier_map, reward))
