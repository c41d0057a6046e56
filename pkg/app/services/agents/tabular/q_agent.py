"""
Standard Q-learning over a discretized state space
"""

from typing import Optional

import numpy as np

from app.logging.logging_config import get_logger
from app.services.agents.base import BaseAgent
from app.services.agents.tabular.discretizer import Discretizer
from app.services.ordinal_core import check_rates, epsilon_greedy_action, relative_margin

logger = get_logger(__name__)


class NumericQTable:
    """Dense Q(s, a) table initialized to zero"""

    def __init__(self, n_states: int, n_actions: int) -> None:
        self.q = np.zeros((n_states, n_actions))

    @property
    def n_actions(self) -> int:
        return self.q.shape[1]


def numeric_q_update(
    table: NumericQTable,
    s: int,
    a: int,
    r: float,
    s_next: int,
    terminal: bool,
    alpha: float,
    gamma: float,
) -> NumericQTable:
    """Q(s,a) <- Q(s,a) + alpha [r + gamma max_a' Q(s',a') - Q(s,a)]; no bootstrap at terminals."""
    check_rates(alpha, gamma)
    target = r if terminal else r + gamma * table.q[s_next].max()
    table.q[s, a] += alpha * (target - table.q[s, a])
    return table


class QAgent(BaseAgent):
    """Table-based numeric baseline"""

    def __init__(self, discretizer: Discretizer, n_actions: int, alpha: float, gamma: float) -> None:
        check_rates(alpha, gamma)
        self.discretizer = discretizer
        self.n_actions = n_actions
        self.alpha = alpha
        self.gamma = gamma
        self.table = NumericQTable(discretizer.n_states, n_actions)
        self.logger = logger
        self.logger.debug(f"Q-table with {discretizer.n_states} states x {n_actions} actions")

    def scores(self, state: np.ndarray) -> np.ndarray:
        return self.table.q[self.discretizer.discretize(state)]

    def act(self, state: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
        return epsilon_greedy_action(self.scores(state), epsilon, rng)

    def observe(
        self,
        state: np.ndarray,
        action: int,
        reward: float,
        next_state: np.ndarray,
        terminal: bool,
    ) -> Optional[float]:
        numeric_q_update(
            self.table,
            self.discretizer.discretize(state),
            action,
            reward,
            self.discretizer.discretize(next_state),
            terminal,
            self.alpha,
            self.gamma,
        )
        return None

    def value_margin(self, state: np.ndarray) -> float:
        return relative_margin(self.scores(state))
