from typing import Optional

from app.models.models import EnvName
from app.services.envs.acrobot import Acrobot
from app.services.envs.base import Environment
from app.services.envs.cartpole import CartPole
from app.services.envs.chain import Chain

ENVIRONMENTS = {
    EnvName.CARTPOLE: CartPole,
    EnvName.ACROBOT: Acrobot,
    EnvName.CHAIN: Chain,
}


def make_env(name: EnvName, seed: Optional[int] = None) -> Environment:
    """Build an environment by name."""
    return ENVIRONMENTS[EnvName(name)](seed)


__all__ = ["Acrobot", "CartPole", "Chain", "Environment", "make_env"]
