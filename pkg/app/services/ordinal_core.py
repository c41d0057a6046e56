"""
Ordinal reward core
Tier mapping, reward transforms, the measure of statistical superiority and the
action-selection policies shared by the tabular and deep learners.
"""

import math
from bisect import bisect_left
from typing import Dict, Iterable, List, Sequence

import numpy as np

from app.logging.logging_config import get_logger
from app.models.models import DecisionRule
from app.models.ordinal import (
    EpsilonSchedule,
    OrdinalDistribution,
    OrdinalTier,
    ProbabilityVector,
    TierMap,
)

logger = get_logger(__name__)

REWARD_TOLERANCE = 1e-9
TIE_TOLERANCE = 1e-12


def _finite_rewards(rewards: Iterable[float]) -> List[float]:
    values = [float(r) for r in rewards]
    if not values:
        raise ValueError("no rewards")
    for value in values:
        if not math.isfinite(value):
            raise ValueError("invalid reward")
    return values


def tier_map_from_rewards(rewards: Iterable[float]) -> TierMap:
    """
    Rank an environment's numeric reward set.

    The lowest reward becomes tier 1, the highest tier n.

    Args:
        rewards: Non-empty collection of finite reward values

    Returns:
        TierMap over the distinct, ascending reward values
    """
    values = sorted(set(_finite_rewards(rewards)))
    return TierMap(sorted_rewards=tuple(values))


def to_ordinal(tier_map: TierMap, reward: float) -> OrdinalTier:
    """Return the 1-based tier of a reward that belongs to the tier map."""
    rewards = tier_map.sorted_rewards
    position = bisect_left(rewards, reward - REWARD_TOLERANCE)
    if position < len(rewards) and abs(rewards[position] - reward) <= REWARD_TOLERANCE:
        return position + 1
    raise ValueError(f"reward not in tier map: {reward!r}")


def change_rewards(rewards: Iterable[float]) -> Dict[float, float]:
    """Map every reward r_i to (r_i - min(r)) / 100."""
    values = _finite_rewards(rewards)
    lowest = min(values)
    return {value: (value - lowest) / 100.0 for value in sorted(set(values))}


def normalize(d: OrdinalDistribution) -> ProbabilityVector:
    """
    Turn accumulated tier masses into probabilities.

    An all-zero distribution yields the uniform vector, so unvisited
    state-actions score 0.5 under the superiority measure.
    """
    mass = np.asarray(d, dtype=float)
    total = mass.sum()
    if total > 0.0:
        return mass / total
    return np.full(mass.shape, 1.0 / mass.shape[-1])


def decision_probabilities(raw: np.ndarray) -> np.ndarray:
    """
    Clamp predicted distributions at zero and normalize the last axis.

    Network outputs can dip negative; the clamp only applies to decision
    inputs, never to regression targets.
    """
    mass = np.maximum(np.asarray(raw, dtype=float), 0.0)
    totals = mass.sum(axis=-1, keepdims=True)
    uniform = np.full(mass.shape, 1.0 / mass.shape[-1])
    safe_totals = np.where(totals > 0.0, totals, 1.0)
    return np.where(totals > 0.0, mass / safe_totals, uniform)


def win_probability(p_a: ProbabilityVector, p_b: ProbabilityVector) -> float:
    """
    Probability that a draw from p_a beats a draw from p_b, ties counting half.

    Args:
        p_a: Tier probabilities of the first action
        p_b: Tier probabilities of the alternative action

    Returns:
        Winning probability in [0, 1]
    """
    p_a = np.asarray(p_a, dtype=float)
    p_b = np.asarray(p_b, dtype=float)
    if p_a.shape != p_b.shape:
        raise ValueError("tier count mismatch")
    below_b = np.cumsum(p_b) - p_b
    return float(np.dot(p_a, below_b + 0.5 * p_b))


def win_matrix(all_probs: Sequence[ProbabilityVector]) -> np.ndarray:
    """Pairwise matrix W[i, j] = win_probability(all_probs[i], all_probs[j])."""
    probs = np.asarray(all_probs, dtype=float)
    if probs.ndim != 2:
        raise ValueError("tier count mismatch")
    reference = np.cumsum(probs, axis=1) - 0.5 * probs
    return probs @ reference.T


def batch_win_matrix(probs: np.ndarray) -> np.ndarray:
    """win_matrix for a stack of (k, n) probability arrays shaped (B, k, n)."""
    reference = np.cumsum(probs, axis=2) - 0.5 * probs
    return np.einsum("bin,bjn->bij", probs, reference)


def scores_from_matrix(wins: np.ndarray) -> np.ndarray:
    """Average each row of a win matrix over the k - 1 alternatives."""
    k = wins.shape[-1]
    if k < 2:
        raise ValueError("need at least two actions")
    diagonal = np.diagonal(wins, axis1=-2, axis2=-1)
    return (wins.sum(axis=-1) - diagonal) / (k - 1)


def superiority_scores(all_probs: Sequence[ProbabilityVector]) -> np.ndarray:
    """
    Averaged winning probability of every action against all other actions.

    Scores lie in [0, 1] and sum to k / 2.
    """
    if len(all_probs) < 2:
        raise ValueError("need at least two actions")
    return scores_from_matrix(win_matrix(all_probs))


def check_rates(alpha: float, gamma: float) -> None:
    """Learning rate in [0, 1] and discount in [0, 1)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must be in [0, 1), got {gamma}")


def ordinal_update(
    d: OrdinalDistribution,
    tier: OrdinalTier,
    d_next: OrdinalDistribution,
    alpha: float,
    gamma: float,
    terminal: bool,
) -> OrdinalDistribution:
    """
    Interpolate D towards e_tier + gamma * D_next with learning rate alpha.

    The continuation term is dropped for terminal transitions.
    """
    check_rates(alpha, gamma)
    d = np.asarray(d, dtype=float)
    if np.shape(d_next) != d.shape:
        raise ValueError("tier count mismatch")
    if not 1 <= tier <= d.shape[0]:
        raise ValueError(f"tier {tier} outside 1..{d.shape[0]}")

    target = np.zeros_like(d) if terminal else gamma * np.asarray(d_next, dtype=float)
    target[tier - 1] += 1.0
    return d + alpha * (target - d)


def greedy_action(scores: Sequence[float], rng: np.random.Generator) -> int:
    """Index of a maximal score, ties broken uniformly at random."""
    values = np.asarray(scores, dtype=float)
    if values.size == 0:
        raise ValueError("no actions to choose from")
    best = np.flatnonzero(values >= values.max() - TIE_TOLERANCE)
    if best.size == 1:
        return int(best[0])
    return int(rng.choice(best))


def epsilon_greedy_action(
    scores: Sequence[float], epsilon: float, rng: np.random.Generator
) -> int:
    """Uniformly random action with probability epsilon, greedy otherwise."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if rng.random() < epsilon:
        return int(rng.integers(len(scores)))
    return greedy_action(scores, rng)


def epsilon_at(schedule: EpsilonSchedule, episode: int) -> float:
    """Linear decay from 1.0 at episode 0 to the floor at half the episodes."""
    if episode < 0:
        raise ValueError("episode must be non-negative")
    half = schedule.total_episodes / 2.0
    if episode >= half:
        return schedule.floor
    return 1.0 - (1.0 - schedule.floor) * (episode / half)


def _pairwise_winner(wins: np.ndarray, a: int, b: int, rng: np.random.Generator) -> int:
    edge = wins[a, b] - 0.5
    if edge > TIE_TOLERANCE:
        return a
    if edge < -TIE_TOLERANCE:
        return b
    return a if rng.random() < 0.5 else b


def decide(
    all_probs: Sequence[ProbabilityVector],
    rule: DecisionRule,
    rng: np.random.Generator,
) -> int:
    """
    Pick an action from per-action tier probabilities.

    Args:
        all_probs: k probability vectors of equal length
        rule: Decision rule applied to the pairwise win matrix
        rng: Random generator used for tie-breaking

    Returns:
        Chosen action index
    """
    wins = win_matrix(all_probs)
    k = wins.shape[0]
    scores = scores_from_matrix(wins)

    if rule == DecisionRule.MAXIMUM:
        return greedy_action(scores, rng)

    if rule == DecisionRule.CONTINGENT:
        first = greedy_action(scores, rng)
        rest = [a for a in range(k) if a != first]
        second = rest[greedy_action(scores[rest], rng)]
        return _pairwise_winner(wins, first, second, rng)

    if rule == DecisionRule.RUNOFF:
        remaining = list(range(k))
        while len(remaining) > 2:
            sub_scores = scores_from_matrix(wins[np.ix_(remaining, remaining)])
            remaining.pop(greedy_action(-sub_scores, rng))
        if len(remaining) == 1:
            return remaining[0]
        return _pairwise_winner(wins, remaining[0], remaining[1], rng)

    if rule == DecisionRule.COPELAND:
        edge = wins - 0.5
        np.fill_diagonal(edge, 0.0)
        won = (edge > TIE_TOLERANCE).sum(axis=1)
        lost = (edge < -TIE_TOLERANCE).sum(axis=1)
        # ties add half a win and half a loss, so they cancel in the difference
        return greedy_action(won - lost, rng)

    raise ValueError(f"unknown decision rule '{rule}'")


def epsilon_greedy_decision(
    all_probs: Sequence[ProbabilityVector],
    rule: DecisionRule,
    epsilon: float,
    rng: np.random.Generator,
) -> int:
    """epsilon_greedy_action generalized to any decision rule."""
    if rule == DecisionRule.MAXIMUM:
        return epsilon_greedy_action(superiority_scores(all_probs), epsilon, rng)
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if rng.random() < epsilon:
        return int(rng.integers(len(all_probs)))
    return decide(all_probs, rule, rng)


def superiority_margin(scores: Sequence[float]) -> float:
    """Gap between the best and second-best superiority score."""
    values = np.sort(np.asarray(scores, dtype=float))
    if values.size < 2:
        raise ValueError("need at least two actions")
    return float(values[-1] - values[-2])


def relative_margin(q_values: Sequence[float]) -> float:
    """Gap between the two largest Q-values relative to the largest one."""
    values = np.sort(np.asarray(q_values, dtype=float))
    if values.size < 2:
        raise ValueError("need at least two actions")
    return float((values[-1] - values[-2]) / (abs(values[-1]) + 1e-12))
