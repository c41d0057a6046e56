"""
Exact oracles for small deterministic MDPs
Value iteration for the numeric learners and exact fixed-point reward
distributions plus exhaustive policy enumeration for the ordinal learners.
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.logging.logging_config import get_logger
from app.models.environment import FiniteMdp
from app.models.ordinal import TierMap
from app.services.ordinal_core import normalize, superiority_scores, to_ordinal

logger = get_logger(__name__)


@dataclass
class PolicyRanking:
    """One deterministic policy scored against all others"""
    policy: Tuple[int, ...]
    start_distribution: np.ndarray
    score: float
    self_consistent: bool


def _next_states(mdp: FiniteMdp) -> np.ndarray:
    transitions = mdp.transitions
    one_hot = np.isclose(transitions, 1.0) | np.isclose(transitions, 0.0)
    if not (one_hot.all() and np.allclose(transitions.sum(axis=2), 1.0)
            and np.isclose(transitions, 1.0).sum(axis=2).min() == 1):
        raise ValueError("transition model is not deterministic")
    return transitions.argmax(axis=2)


def value_iteration(
    mdp: FiniteMdp, gamma: float, tolerance: float = 1e-10, max_iterations: int = 100000
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Optimal Q-values by value iteration.

    Terminal states carry zero value.

    Returns:
        (Q table shaped (S, k), greedy policy shaped (S,))
    """
    continuing = np.ones(mdp.n_states)
    continuing[list(mdp.terminal_states)] = 0.0
    q = np.zeros((mdp.n_states, mdp.n_actions))
    for iteration in range(max_iterations):
        values = q.max(axis=1) * continuing
        updated = mdp.rewards + gamma * mdp.transitions @ values
        updated[list(mdp.terminal_states)] = 0.0
        delta = np.abs(updated - q).max()
        q = updated
        if delta < tolerance:
            logger.debug(f"Value iteration converged after {iteration + 1} sweeps")
            break
    return q, q.argmax(axis=1)


def exact_policy_distributions(
    mdp: FiniteMdp,
    tier_map: TierMap,
    policy: Sequence[int],
    gamma: float,
    horizon: Optional[int] = None,
) -> np.ndarray:
    """
    Exact fixed point D(s, a) = e_tier(s, a) + gamma * D(s', policy(s')).

    Without a horizon this is the infinite-horizon fixed point, so a policy
    that never terminates carries mass 1 / (1 - gamma). With a horizon H only
    the first H rewards count and that mass is sum(gamma^t for t < H), the
    amount an episode cut off after H steps actually accumulates.

    Args:
        mdp: Deterministic finite MDP
        tier_map: Tiering of the MDP's reward set
        policy: Action per state (entries for terminal states are ignored)
        gamma: Discount factor in [0, 1)
        horizon: Optional number of steps counted from (s, a), at least 1

    Returns:
        Array shaped (S, k, n); terminal states hold zero mass
    """
    if horizon is not None and horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    next_states = _next_states(mdp)
    n_states, n_actions, n_tiers = mdp.n_states, mdp.n_actions, tier_map.n
    terminal = np.zeros(n_states, dtype=bool)
    terminal[list(mdp.terminal_states)] = True

    immediate = np.zeros((n_states, n_actions, n_tiers))
    for s in range(n_states):
        if terminal[s]:
            continue
        for a in range(n_actions):
            immediate[s, a, to_ordinal(tier_map, mdp.rewards[s, a]) - 1] = 1.0

    # V(s) = D(s, policy(s)) solves (I - gamma * P_policy) V = E_policy
    follow = np.zeros((n_states, n_states))
    own = np.zeros((n_states, n_tiers))
    for s in range(n_states):
        if terminal[s]:
            continue
        a = policy[s]
        successor = next_states[s, a]
        if not terminal[successor]:
            follow[s, successor] = 1.0
        own[s] = immediate[s, a]
    if horizon is None:
        values = np.linalg.solve(np.eye(n_states) - gamma * follow, own)
    else:
        # V over the H - 1 steps left after the first action
        values = np.zeros((n_states, n_tiers))
        for _ in range(horizon - 1):
            values = own + gamma * follow @ values

    distributions = np.zeros_like(immediate)
    for s in range(n_states):
        if terminal[s]:
            continue
        for a in range(n_actions):
            successor = next_states[s, a]
            continuation = 0.0 if terminal[successor] else gamma * values[successor]
            distributions[s, a] = immediate[s, a] + continuation
    return distributions


def is_self_consistent(
    mdp: FiniteMdp, distributions: np.ndarray, policy: Sequence[int]
) -> bool:
    """True when the policy is greedy with respect to its own distributions."""
    for s in range(mdp.n_states):
        if s in mdp.terminal_states:
            continue
        scores = superiority_scores([normalize(d) for d in distributions[s]])
        if scores[policy[s]] < scores.max() - 1e-12:
            return False
    return True


def rank_policies(mdp: FiniteMdp, tier_map: TierMap, gamma: float) -> List[PolicyRanking]:
    """
    Enumerate every deterministic policy and rank them by averaged statistical
    superiority of their start-state distributions, best first.
    """
    free_states = [s for s in range(mdp.n_states) if s not in mdp.terminal_states]
    rankings: List[PolicyRanking] = []
    starts: List[np.ndarray] = []
    for choice in itertools.product(range(mdp.n_actions), repeat=len(free_states)):
        policy = [0] * mdp.n_states
        for s, a in zip(free_states, choice):
            policy[s] = a
        distributions = exact_policy_distributions(mdp, tier_map, policy, gamma)
        start = normalize(distributions[mdp.start_state, policy[mdp.start_state]])
        starts.append(start)
        rankings.append(PolicyRanking(
            policy=tuple(policy),
            start_distribution=start,
            score=0.0,
            self_consistent=is_self_consistent(mdp, distributions, policy),
        ))

    scores = superiority_scores(starts)
    for ranking, score in zip(rankings, scores):
        ranking.score = float(score)
    # stable sort keeps enumeration order among equal scores
    rankings.sort(key=lambda r: (-round(r.score, 12), not r.self_consistent))
    return rankings


def superiority_optimal_policy(mdp: FiniteMdp, tier_map: TierMap, gamma: float) -> Tuple[int, ...]:
    """Best-ranked policy from exhaustive enumeration."""
    return rank_policies(mdp, tier_map, gamma)[0].policy
