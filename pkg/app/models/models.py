from enum import Enum


class EnvName(str, Enum):
    CARTPOLE = "cartpole"
    ACROBOT = "acrobot"
    CHAIN = "chain"


class Algorithm(str, Enum):
    Q = "q"
    ORDINAL_Q = "ordinal-q"
    DQN = "dqn"
    ORDINAL_DQN = "ordinal-dqn"

    @property
    def is_ordinal(self) -> bool:
        return self in (Algorithm.ORDINAL_Q, Algorithm.ORDINAL_DQN)

    @property
    def is_deep(self) -> bool:
        return self in (Algorithm.DQN, Algorithm.ORDINAL_DQN)

    @property
    def numeric_counterpart(self) -> "Algorithm":
        return {
            Algorithm.ORDINAL_Q: Algorithm.Q,
            Algorithm.ORDINAL_DQN: Algorithm.DQN,
        }.get(self, self)


class RewardMode(str, Enum):
    STANDARD = "standard"
    CR = "cr"      # change of rewards: (r - min) / 100
    TIER = "tier"  # ordinal tier index fed as a number


class DecisionRule(str, Enum):
    MAXIMUM = "maximum"
    CONTINGENT = "contingent"
    RUNOFF = "runoff"
    COPELAND = "copeland"
