"""
Ordinal Q-learning
Keeps a reward-tier distribution D(s, a) per state-action pair instead of a
Q-value and ranks actions by statistical superiority.
"""

from typing import Optional

import numpy as np

from app.logging.logging_config import get_logger
from app.models.models import DecisionRule
from app.models.ordinal import OrdinalTier
from app.services.agents.base import BaseAgent
from app.services.agents.tabular.discretizer import Discretizer
from app.services.ordinal_core import (
    check_rates,
    decide,
    epsilon_greedy_decision,
    normalize,
    ordinal_update,
    superiority_margin,
    superiority_scores,
)

logger = get_logger(__name__)


class OrdinalQTable:
    """Dense D(s, a) table of tier masses, initialized to zero mass"""

    def __init__(self, n_states: int, n_actions: int, n_tiers: int) -> None:
        self.d = np.zeros((n_states, n_actions, n_tiers))

    @property
    def n_actions(self) -> int:
        return self.d.shape[1]

    @property
    def n_tiers(self) -> int:
        return self.d.shape[2]

    def probabilities(self, s: int) -> np.ndarray:
        return np.array([normalize(mass) for mass in self.d[s]])


def ordinal_q_step(
    table: OrdinalQTable,
    s: int,
    a: int,
    tier: OrdinalTier,
    s_next: int,
    terminal: bool,
    alpha: float,
    gamma: float,
    rng: np.random.Generator,
    rule: DecisionRule = DecisionRule.MAXIMUM,
) -> OrdinalQTable:
    """
    D(s,a) <- D(s,a) + alpha [e_tier + gamma D(s', pi*(s')) - D(s,a)]

    pi*(s') is chosen from the normalized distributions at s'; terminal
    transitions skip the continuation and the choice.
    """
    if terminal:
        d_next = np.zeros(table.n_tiers)
    else:
        best = decide(table.probabilities(s_next), rule, rng)
        d_next = table.d[s_next, best]
    table.d[s, a] = ordinal_update(table.d[s, a], tier, d_next, alpha, gamma, terminal)
    return table


class OrdinalQAgent(BaseAgent):
    """Table-based ordinal learner; rewards arrive as tiers 1..n"""

    def __init__(
        self,
        discretizer: Discretizer,
        n_actions: int,
        n_tiers: int,
        alpha: float,
        gamma: float,
        rng: np.random.Generator,
        rule: DecisionRule = DecisionRule.MAXIMUM,
    ) -> None:
        check_rates(alpha, gamma)
        self.discretizer = discretizer
        self.n_actions = n_actions
        self.alpha = alpha
        self.gamma = gamma
        self.rule = DecisionRule(rule)
        self.rng = rng
        self.table = OrdinalQTable(discretizer.n_states, n_actions, n_tiers)
        self.logger = logger
        self.logger.debug(
            f"D-table with {discretizer.n_states} states x {n_actions} actions x {n_tiers} tiers"
        )

    def scores(self, state: np.ndarray) -> np.ndarray:
        return superiority_scores(self.table.probabilities(self.discretizer.discretize(state)))

    def act(self, state: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
        probs = self.table.probabilities(self.discretizer.discretize(state))
        return epsilon_greedy_decision(probs, self.rule, epsilon, rng)

    def observe(
        self,
        state: np.ndarray,
        action: int,
        reward: float,
        next_state: np.ndarray,
        terminal: bool,
    ) -> Optional[float]:
        ordinal_q_step(
            self.table,
            self.discretizer.discretize(state),
            action,
            int(reward),
            self.discretizer.discretize(next_state),
            terminal,
            self.alpha,
            self.gamma,
            self.rng,
            self.rule,
        )
        return None

    def value_margin(self, state: np.ndarray) -> float:
        return superiority_margin(self.scores(state))
