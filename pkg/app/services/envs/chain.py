"""
Chain environment
Five states in a line with a rewarding terminal state at the right end.
Small enough for exact value-iteration and policy-enumeration oracles.
"""

from typing import Optional, Tuple

import numpy as np

from app.models.environment import EnvSpec, FiniteMdp, WinCondition
from app.services.envs.base import Environment

N_STATES = 5
GOAL = N_STATES - 1
LEFT, RIGHT = 0, 1
MAX_STEPS = 20

REWARD_STEP = -1.0
REWARD_GOAL = 10.0

CHAIN_SPEC = EnvSpec(
    name="chain",
    state_dim=1,
    n_actions=2,
    reward_set=(REWARD_STEP, REWARD_GOAL),
    max_steps=MAX_STEPS,
    win_condition=WinCondition.TERMINATE,
    win_description="reach the right end before 20 steps",
    parameters={"n_states": float(N_STATES)},
)


def chain_move(position: int, action: int) -> Tuple[int, float, bool]:
    next_position = min(position + 1, GOAL) if action == RIGHT else max(position - 1, 0)
    reached = next_position == GOAL
    return next_position, (REWARD_GOAL if reached else REWARD_STEP), reached


def chain_mdp() -> FiniteMdp:
    """The chain as an explicit transition table."""
    transitions = np.zeros((N_STATES, 2, N_STATES))
    rewards = np.zeros((N_STATES, 2))
    for position in range(N_STATES):
        for action in (LEFT, RIGHT):
            if position == GOAL:
                transitions[position, action, position] = 1.0
                continue
            next_position, reward, _ = chain_move(position, action)
            transitions[position, action, next_position] = 1.0
            rewards[position, action] = reward
    return FiniteMdp(transitions=transitions, rewards=rewards, terminal_states=(GOAL,))


def one_hot(state: np.ndarray) -> np.ndarray:
    """One-hot encoding of a chain observation for network inputs."""
    encoded = np.zeros(N_STATES)
    encoded[int(round(float(state[0])))] = 1.0
    return encoded


class Chain(Environment):
    """Observation: (position,) with position in 0..4; always starts at 0"""

    def __init__(self, seed: Optional[int] = None) -> None:
        super().__init__(seed)

    def spec(self) -> EnvSpec:
        return CHAIN_SPEC

    def _initial_state(self, rng: np.random.Generator) -> np.ndarray:
        return np.array([0.0])

    def _transition(self, state: np.ndarray, action: int) -> Tuple[np.ndarray, float, bool]:
        next_position, reward, terminal = chain_move(int(state[0]), action)
        return np.array([float(next_position)]), reward, terminal
