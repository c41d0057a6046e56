"""
CartPole environment
Classic cart-pole balancing with Euler integration and a 200-step limit.
"""

import math
from typing import Optional, Tuple

import numpy as np

from app.models.environment import EnvSpec, WinCondition
from app.services.envs.base import Environment

GRAVITY = 9.8
MASS_CART = 1.0
MASS_POLE = 0.1
TOTAL_MASS = MASS_CART + MASS_POLE
HALF_LENGTH = 0.5
POLE_MASS_LENGTH = MASS_POLE * HALF_LENGTH
FORCE_MAG = 10.0
TAU = 0.02

ANGLE_LIMIT = 12 * 2 * math.pi / 360
POSITION_LIMIT = 2.4
MAX_STEPS = 200

REWARD_ALIVE = 1.0
REWARD_FAILURE = 0.0

CARTPOLE_SPEC = EnvSpec(
    name="cartpole",
    state_dim=4,
    n_actions=2,
    reward_set=(REWARD_FAILURE, REWARD_ALIVE),
    max_steps=MAX_STEPS,
    win_condition=WinCondition.SURVIVE,
    win_description="balance for 200 steps (score 200)",
    parameters={"angle_limit_rad": ANGLE_LIMIT, "position_limit": POSITION_LIMIT},
)


def cartpole_failed(state: np.ndarray) -> bool:
    x, _, theta, _ = state
    return abs(x) > POSITION_LIMIT or abs(theta) > ANGLE_LIMIT


def cartpole_transition(state: np.ndarray, action: int) -> Tuple[np.ndarray, float, bool]:
    """One Euler step; action 0 pushes left, 1 pushes right."""
    x, x_dot, theta, theta_dot = state
    force = FORCE_MAG if action == 1 else -FORCE_MAG
    cos_theta = math.cos(theta)
    sin_theta = math.sin(theta)

    temp = (force + POLE_MASS_LENGTH * theta_dot ** 2 * sin_theta) / TOTAL_MASS
    theta_acc = (GRAVITY * sin_theta - cos_theta * temp) / (
        HALF_LENGTH * (4.0 / 3.0 - MASS_POLE * cos_theta ** 2 / TOTAL_MASS)
    )
    x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos_theta / TOTAL_MASS

    next_state = np.array([
        x + TAU * x_dot,
        x_dot + TAU * x_acc,
        theta + TAU * theta_dot,
        theta_dot + TAU * theta_acc,
    ])
    terminal = cartpole_failed(next_state)
    return next_state, (REWARD_FAILURE if terminal else REWARD_ALIVE), terminal


class CartPole(Environment):
    """State: (position, velocity, angle, angular velocity)"""

    def __init__(self, seed: Optional[int] = None) -> None:
        super().__init__(seed)

    def spec(self) -> EnvSpec:
        return CARTPOLE_SPEC

    def _initial_state(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-0.05, 0.05, size=4)

    def _transition(self, state: np.ndarray, action: int) -> Tuple[np.ndarray, float, bool]:
        return cartpole_transition(state, action)
