from .base import BaseAgent
from .tabular.q_agent import QAgent
from .tabular.ordinal_q_agent import OrdinalQAgent
from .deep.dqn_agent import NumericDqnAgent
from .deep.ordinal_dqn_agent import OrdinalDqnAgent

__all__ = ["BaseAgent", "QAgent", "OrdinalQAgent", "NumericDqnAgent", "OrdinalDqnAgent"]
