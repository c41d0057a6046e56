"""
Numeric Double DQN baseline
One evaluation network with k outputs and a periodically synced target copy.
"""

from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.logging.logging_config import get_logger
from app.services.agents.base import BaseAgent
from app.services.agents.deep.replay_buffer import Experience, ReplayBuffer, stack_batch
from app.services.neural import adam_new, clone, copy_parameters, fit, forward, mlp_new
from app.services.ordinal_core import epsilon_greedy_action, relative_margin
from app.utils.checkpoint import read_checkpoint, write_checkpoint

logger = get_logger(__name__)

StateEncoder = Callable[[np.ndarray], np.ndarray]


def identity_encoder(state: np.ndarray) -> np.ndarray:
    return np.asarray(state, dtype=float)


class NumericDqnAgent(BaseAgent):
    """Double DQN: the evaluation network picks a', the target network values it"""

    def __init__(
        self,
        state_dim: int,
        n_actions: int,
        rng: np.random.Generator,
        hidden: Sequence[int] = (64, 64),
        lr: float = 5e-4,
        gamma: float = 0.9,
        memory: int = 200000,
        batch_size: int = 64,
        sync_every: int = 300,
        encoder: StateEncoder = identity_encoder,
    ) -> None:
        if not 0.0 <= gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {gamma}")
        if batch_size < 1 or sync_every < 1:
            raise ValueError("batch size and sync period must be at least 1")
        self.n_actions = n_actions
        self.gamma = gamma
        self.batch_size = batch_size
        self.sync_every = sync_every
        self.encoder = encoder
        self.rng = rng
        self.buffer = ReplayBuffer(memory)
        self.fit_count = 0

        self.eval_net = mlp_new(state_dim, hidden, n_actions, rng)
        self.target_net = clone(self.eval_net)
        self.adam = adam_new(self.eval_net, lr=lr)
        self.logger = logger

    def q_values(self, state: np.ndarray) -> np.ndarray:
        return forward(self.eval_net, self.encoder(state))

    def scores(self, state: np.ndarray) -> np.ndarray:
        return self.q_values(state)

    def act(self, state: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
        return epsilon_greedy_action(self.q_values(state), epsilon, rng)

    def value_margin(self, state: np.ndarray) -> float:
        return relative_margin(self.q_values(state))

    def compute_targets(self, batch: List[Experience]) -> Tuple[np.ndarray, np.ndarray]:
        """
        Regression targets r + gamma * Q_target(s', argmax_a' Q_eval(s', a')).

        Returns:
            (targets, next actions chosen by the evaluation network)
        """
        _, _, rewards, next_states, terminals = stack_batch(batch)
        next_inputs = np.stack([self.encoder(s) for s in next_states])
        next_actions = np.argmax(forward(self.eval_net, next_inputs), axis=1)
        bootstrap = forward(self.target_net, next_inputs)[np.arange(len(batch)), next_actions]
        targets = rewards + np.where(terminals, 0.0, self.gamma * bootstrap)
        return targets, next_actions

    def replay(self) -> float:
        """Fit one sampled batch; returns its mean loss."""
        batch = self.buffer.sample(self.batch_size, self.rng)
        states, actions, _, _, _ = stack_batch(batch)
        targets, _ = self.compute_targets(batch)

        inputs = np.stack([self.encoder(s) for s in states])
        full_targets = np.zeros((len(batch), self.n_actions))
        full_targets[np.arange(len(batch)), actions] = targets
        mask = np.zeros_like(full_targets, dtype=bool)
        mask[np.arange(len(batch)), actions] = True
        loss = fit(self.eval_net, self.adam, inputs, full_targets, mask)

        self.fit_count += 1
        if self.fit_count % self.sync_every == 0:
            self.sync()
        return loss

    def sync(self) -> None:
        copy_parameters(self.eval_net, self.target_net)
        self.logger.debug(f"Target network synced after {self.fit_count} fits")

    def observe(
        self,
        state: np.ndarray,
        action: int,
        reward: float,
        next_state: np.ndarray,
        terminal: bool,
    ) -> Optional[float]:
        self.buffer.push(Experience(np.asarray(state, dtype=float), int(action), float(reward),
                                    np.asarray(next_state, dtype=float), bool(terminal)))
        if len(self.buffer) < self.batch_size:
            return None
        return self.replay()

    def save_checkpoint(self, path: Union[str, Path]) -> None:
        write_checkpoint(path, [
            ({"action": "all", "role": "eval"}, self.eval_net),
            ({"action": "all", "role": "target"}, self.target_net),
        ])

    def load_checkpoint(self, path: Union[str, Path]) -> None:
        for fields, net in read_checkpoint(path):
            if fields.get("action") != "all":
                raise ValueError(f"unexpected checkpoint entry {fields}")
            copy_parameters(net, self.eval_net if fields.get("role") == "eval" else self.target_net)
        self.logger.info(f"Loaded DQN checkpoint from {path}")
