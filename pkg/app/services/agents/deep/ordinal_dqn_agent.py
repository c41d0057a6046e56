"""
Ordinal Deep Q-Network
An array of k networks, one per action, each predicting the n-tier reward
distribution of its action, with one target copy per network.
"""

from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from app.logging.logging_config import get_logger
from app.models.models import DecisionRule
from app.services.agents.base import BaseAgent
from app.services.agents.deep.dqn_agent import StateEncoder, identity_encoder
from app.services.agents.deep.replay_buffer import Experience, ReplayBuffer, stack_batch
from app.services.neural import adam_new, clone, copy_parameters, fit, forward, mlp_new
from app.services.ordinal_core import (
    batch_win_matrix,
    decide,
    decision_probabilities,
    epsilon_greedy_decision,
    greedy_action,
    scores_from_matrix,
    superiority_margin,
    superiority_scores,
)
from app.utils.checkpoint import read_checkpoint, write_checkpoint

logger = get_logger(__name__)


class OrdinalDqnAgent(BaseAgent):
    """Per-action distribution networks; rewards arrive as tiers 1..n"""

    def __init__(
        self,
        state_dim: int,
        n_actions: int,
        n_tiers: int,
        rng: np.random.Generator,
        hidden: Sequence[int] = (64, 64),
        lr: float = 5e-4,
        gamma: float = 0.9,
        memory: int = 200000,
        batch_size: int = 64,
        sync_every: int = 300,
        rule: DecisionRule = DecisionRule.MAXIMUM,
        encoder: StateEncoder = identity_encoder,
    ) -> None:
        if not 0.0 <= gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {gamma}")
        if n_actions < 2:
            raise ValueError("need at least two actions")
        if batch_size < 1 or sync_every < 1:
            raise ValueError("batch size and sync period must be at least 1")
        self.n_actions = n_actions
        self.n_tiers = n_tiers
        self.gamma = gamma
        self.batch_size = batch_size
        self.sync_every = sync_every
        self.rule = DecisionRule(rule)
        self.encoder = encoder
        self.rng = rng
        self.buffer = ReplayBuffer(memory)
        self.fit_count = 0

        self.eval_nets = [mlp_new(state_dim, hidden, n_tiers, rng) for _ in range(n_actions)]
        self.target_nets = [clone(net) for net in self.eval_nets]
        self.adams = [adam_new(net, lr=lr) for net in self.eval_nets]
        self.logger = logger

    def _raw(self, nets, inputs: np.ndarray) -> np.ndarray:
        # (B, k, n) raw distribution outputs
        return np.stack([forward(net, inputs) for net in nets], axis=1)

    def probabilities(self, state: np.ndarray) -> np.ndarray:
        """Decision-time tier probabilities of every action, shape (k, n)."""
        raw = self._raw(self.eval_nets, self.encoder(state)[None, :])[0]
        return decision_probabilities(raw)

    def scores(self, state: np.ndarray) -> np.ndarray:
        return superiority_scores(self.probabilities(state))

    def act(self, state: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
        return epsilon_greedy_decision(self.probabilities(state), self.rule, epsilon, rng)

    def value_margin(self, state: np.ndarray) -> float:
        return superiority_margin(self.scores(state))

    def _next_actions(self, next_inputs: np.ndarray) -> np.ndarray:
        probs = decision_probabilities(self._raw(self.eval_nets, next_inputs))
        if self.rule == DecisionRule.MAXIMUM:
            scores = scores_from_matrix(batch_win_matrix(probs))
            return np.array([greedy_action(row, self.rng) for row in scores], dtype=int)
        return np.array([decide(p, self.rule, self.rng) for p in probs], dtype=int)

    def compute_targets(self, batch: List[Experience]) -> Tuple[np.ndarray, np.ndarray]:
        """
        Distribution targets e_tier + gamma * D_target(s', pi*(s')).

        pi*(s') comes from the evaluation networks, the bootstrapped
        distribution from the target network of that action.

        Returns:
            ((B, n) targets, next actions pi*(s'))
        """
        _, _, tiers, next_states, terminals = stack_batch(batch)
        next_inputs = np.stack([self.encoder(s) for s in next_states])
        next_actions = self._next_actions(next_inputs)
        bootstrap = self._raw(self.target_nets, next_inputs)[np.arange(len(batch)), next_actions]

        targets = np.where(terminals[:, None], 0.0, self.gamma * bootstrap)
        targets[np.arange(len(batch)), tiers.astype(int) - 1] += 1.0
        return targets, next_actions

    def replay(self) -> float:
        """Fit each action's network on its share of one sampled batch."""
        batch = self.buffer.sample(self.batch_size, self.rng)
        states, actions, _, _, _ = stack_batch(batch)
        targets, _ = self.compute_targets(batch)
        inputs = np.stack([self.encoder(s) for s in states])

        total = 0.0
        for action in range(self.n_actions):
            rows = actions == action
            if rows.any():
                loss = fit(self.eval_nets[action], self.adams[action], inputs[rows], targets[rows])
                total += loss * rows.sum()

        self.fit_count += 1
        if self.fit_count % self.sync_every == 0:
            self.sync()
        return total / len(batch)

    def sync(self) -> None:
        for eval_net, target_net in zip(self.eval_nets, self.target_nets):
            copy_parameters(eval_net, target_net)
        self.logger.debug(f"Target networks synced after {self.fit_count} fits")

    def observe(
        self,
        state: np.ndarray,
        action: int,
        reward: float,
        next_state: np.ndarray,
        terminal: bool,
    ) -> Optional[float]:
        tier = int(reward)
        if not 1 <= tier <= self.n_tiers:
            raise ValueError(f"tier {tier} outside 1..{self.n_tiers}")
        self.buffer.push(Experience(np.asarray(state, dtype=float), int(action), tier,
                                    np.asarray(next_state, dtype=float), bool(terminal)))
        if len(self.buffer) < self.batch_size:
            return None
        return self.replay()

    def save_checkpoint(self, path: Union[str, Path]) -> None:
        entries = []
        for action, (eval_net, target_net) in enumerate(zip(self.eval_nets, self.target_nets)):
            entries.append(({"action": str(action), "role": "eval"}, eval_net))
            entries.append(({"action": str(action), "role": "target"}, target_net))
        write_checkpoint(path, entries)

    def load_checkpoint(self, path: Union[str, Path]) -> None:
        for fields, net in read_checkpoint(path):
            action = int(fields["action"])
            if not 0 <= action < self.n_actions:
                raise ValueError(f"checkpoint action {action} outside 0..{self.n_actions - 1}")
            nets = self.eval_nets if fields.get("role") == "eval" else self.target_nets
            copy_parameters(net, nets[action])
        self.logger.info(f"Loaded ordinal DQN checkpoint from {path}")
