"""
Acrobot environment
Two-link underactuated pendulum integrated with fourth-order Runge-Kutta.
Internal state is (theta1, theta2, omega1, omega2); observations expose
(cos theta1, sin theta1, cos theta2, sin theta2, omega1, omega2).
"""

import math
from typing import Optional, Tuple

import numpy as np

from app.models.environment import EnvSpec, WinCondition
from app.services.envs.base import Environment

LINK_LENGTH_1 = 1.0
LINK_MASS_1 = 1.0
LINK_MASS_2 = 1.0
LINK_COM_POS_1 = 0.5
LINK_COM_POS_2 = 0.5
LINK_MOI = 1.0
GRAVITY = 9.8
DT = 0.2

MAX_VEL_1 = 4 * math.pi
MAX_VEL_2 = 9 * math.pi
TORQUES = (-1.0, 0.0, 1.0)
MAX_STEPS = 500

REWARD_STEP = -1.0
REWARD_GOAL = 0.0

ACROBOT_SPEC = EnvSpec(
    name="acrobot",
    state_dim=6,
    n_actions=3,
    reward_set=(REWARD_STEP, REWARD_GOAL),
    max_steps=MAX_STEPS,
    win_condition=WinCondition.TERMINATE,
    win_description="swing the tip above the bar before 500 steps",
    parameters={"dt": DT, "max_vel_1": MAX_VEL_1, "max_vel_2": MAX_VEL_2},
)


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2 * math.pi) - math.pi


def acrobot_derivatives(y: np.ndarray, torque: float) -> np.ndarray:
    """Time derivative of (theta1, theta2, omega1, omega2) under a joint-2 torque."""
    m1, m2 = LINK_MASS_1, LINK_MASS_2
    l1 = LINK_LENGTH_1
    lc1, lc2 = LINK_COM_POS_1, LINK_COM_POS_2
    i1 = i2 = LINK_MOI
    g = GRAVITY
    theta1, theta2, dtheta1, dtheta2 = y

    d1 = m1 * lc1 ** 2 + m2 * (l1 ** 2 + lc2 ** 2 + 2 * l1 * lc2 * math.cos(theta2)) + i1 + i2
    d2 = m2 * (lc2 ** 2 + l1 * lc2 * math.cos(theta2)) + i2
    phi2 = m2 * lc2 * g * math.cos(theta1 + theta2 - math.pi / 2.0)
    phi1 = (
        -m2 * l1 * lc2 * dtheta2 ** 2 * math.sin(theta2)
        - 2 * m2 * l1 * lc2 * dtheta2 * dtheta1 * math.sin(theta2)
        + (m1 * lc1 + m2 * l1) * g * math.cos(theta1 - math.pi / 2)
        + phi2
    )
    ddtheta2 = (
        torque + d2 / d1 * phi1 - m2 * l1 * lc2 * dtheta1 ** 2 * math.sin(theta2) - phi2
    ) / (m2 * lc2 ** 2 + i2 - d2 ** 2 / d1)
    ddtheta1 = -(d2 * ddtheta2 + phi1) / d1
    return np.array([dtheta1, dtheta2, ddtheta1, ddtheta2])


def rk4_step(y: np.ndarray, torque: float, dt: float = DT) -> np.ndarray:
    k1 = acrobot_derivatives(y, torque)
    k2 = acrobot_derivatives(y + dt / 2.0 * k1, torque)
    k3 = acrobot_derivatives(y + dt / 2.0 * k2, torque)
    k4 = acrobot_derivatives(y + dt * k3, torque)
    return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def acrobot_energy(y: np.ndarray) -> float:
    """Total mechanical energy, potential measured from the pivot height."""
    m1, m2 = LINK_MASS_1, LINK_MASS_2
    l1, lc1, lc2 = LINK_LENGTH_1, LINK_COM_POS_1, LINK_COM_POS_2
    theta1, theta2, w1, w2 = y
    kinetic = (
        0.5 * (m1 * lc1 ** 2 + LINK_MOI) * w1 ** 2
        + 0.5 * m2 * (
            l1 ** 2 * w1 ** 2
            + lc2 ** 2 * (w1 + w2) ** 2
            + 2 * l1 * lc2 * w1 * (w1 + w2) * math.cos(theta2)
        )
        + 0.5 * LINK_MOI * (w1 + w2) ** 2
    )
    potential = -GRAVITY * (
        m1 * lc1 * math.cos(theta1)
        + m2 * (l1 * math.cos(theta1) + lc2 * math.cos(theta1 + theta2))
    )
    return kinetic + potential


def acrobot_reached_goal(y: np.ndarray) -> bool:
    theta1, theta2 = y[0], y[1]
    return -math.cos(theta1) - math.cos(theta2 + theta1) > 1.0


def acrobot_transition(state: np.ndarray, action: int) -> Tuple[np.ndarray, float, bool]:
    """One RK4 step with angles wrapped to [-pi, pi) and velocities clipped."""
    y = rk4_step(np.asarray(state, dtype=float), TORQUES[action])
    next_state = np.array([
        _wrap(y[0]),
        _wrap(y[1]),
        min(max(y[2], -MAX_VEL_1), MAX_VEL_1),
        min(max(y[3], -MAX_VEL_2), MAX_VEL_2),
    ])
    terminal = acrobot_reached_goal(next_state)
    return next_state, (REWARD_GOAL if terminal else REWARD_STEP), terminal


class Acrobot(Environment):
    """Actions: torque -1, 0, +1 on the second joint"""

    def __init__(self, seed: Optional[int] = None) -> None:
        super().__init__(seed)

    def spec(self) -> EnvSpec:
        return ACROBOT_SPEC

    def _initial_state(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-0.1, 0.1, size=4)

    def _transition(self, state: np.ndarray, action: int) -> Tuple[np.ndarray, float, bool]:
        return acrobot_transition(state, action)

    def observe(self, state: np.ndarray) -> np.ndarray:
        theta1, theta2, w1, w2 = state
        return np.array([
            math.cos(theta1), math.sin(theta1), math.cos(theta2), math.sin(theta2), w1, w2
        ])
