"""
Experiment config files and command-line tokens

A config file holds one `key = value` pair per line; `#` starts a comment and
blank lines are ignored. Keys are the `run` flag names, with dashes or
underscores (`eval-every` and `eval_every` are the same key).
"""

from pathlib import Path
from typing import Any, Callable, Dict, List, Union

from app.models.models import Algorithm, DecisionRule, EnvName, RewardMode


class ConfigFileError(ValueError):
    """A config file line that cannot be parsed"""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _enum_parser(enum_cls, label: str) -> Callable[[str], Any]:
    def parse(token: str):
        try:
            return enum_cls(token.strip().lower())
        except ValueError:
            choices = ", ".join(member.value for member in enum_cls)
            raise ValueError(f"unknown {label} '{token}' (expected one of: {choices})") from None
    parse.__name__ = label
    return parse


parse_env = _enum_parser(EnvName, "environment")
parse_algo = _enum_parser(Algorithm, "algorithm")
parse_reward = _enum_parser(RewardMode, "reward mode")
parse_rule = _enum_parser(DecisionRule, "decision rule")


def parse_int_list(token: str) -> List[int]:
    """'0,1,2' -> [0, 1, 2]; 'a-b' expands to the inclusive range."""
    values: List[int] = []
    for part in token.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            low, high = part.split("-", 1)
            values.extend(range(int(low), int(high) + 1))
        else:
            values.append(int(part))
    if not values:
        raise ValueError(f"empty list '{token}'")
    return values


def parse_bool(token: str) -> bool:
    lowered = token.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: '{token}'")


# config key -> (ExperimentConfig field, value parser)
CONFIG_KEYS: Dict[str, tuple] = {
    "env": ("env", parse_env),
    "algo": ("algo", parse_algo),
    "reward": ("reward", parse_reward),
    "episodes": ("episodes", int),
    "seeds": ("seeds", parse_int_list),
    "eval_every": ("eval_every", int),
    "out": ("out", str),
    "alpha": ("alpha", float),
    "gamma": ("gamma", float),
    "epsilon_floor": ("epsilon_floor", float),
    "decision_rule": ("decision_rule", parse_rule),
    "lr": ("lr", float),
    "memory": ("memory", int),
    "batch_size": ("batch_size", int),
    "sync_every": ("sync_every", int),
    "hidden": ("hidden", parse_int_list),
    "workers": ("workers", int),
    "no_timing": ("timing", lambda token: not parse_bool(token)),
    "checkpoint_dir": ("checkpoint_dir", str),
}


def parse_config_text(text: str) -> Dict[str, Any]:
    """Parse config text into ExperimentConfig keyword arguments."""
    options: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigFileError(number, f"expected 'key = value', got '{line}'")
        key, value = (part.strip() for part in line.split("=", 1))
        normalized = key.replace("-", "_").lower()
        if normalized not in CONFIG_KEYS:
            raise ConfigFileError(number, f"unknown key '{key}'")
        if not value:
            raise ConfigFileError(number, f"missing value for '{key}'")
        field_name, parser = CONFIG_KEYS[normalized]
        try:
            options[field_name] = parser(value)
        except ValueError as e:
            raise ConfigFileError(number, str(e)) from e
    return options


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))
