import os
from typing import List

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _int_list(raw: str) -> List[int]:
    return [int(part) for part in raw.split(",") if part.strip()]


class Settings:
    """Toolkit configuration settings."""

    # Application
    APP_NAME: str = os.getenv("APP_NAME", "Ordinal-RL")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_DIR: str = os.getenv("LOG_DIR", "logs")
    ENABLE_FILE_LOGGING: bool = os.getenv("ENABLE_FILE_LOGGING", "false").lower() == "true"

    # Tabular learners
    Q_ALPHA: float = float(os.getenv("Q_ALPHA", "0.1"))
    GAMMA: float = float(os.getenv("GAMMA", "0.9"))
    EPSILON_FLOOR: float = float(os.getenv("EPSILON_FLOOR", "0.0"))

    # Deep learners
    DQN_LR: float = float(os.getenv("DQN_LR", "0.0005"))
    REPLAY_MEMORY: int = int(os.getenv("REPLAY_MEMORY", "200000"))
    BATCH_SIZE: int = int(os.getenv("BATCH_SIZE", "64"))
    SYNC_EVERY: int = int(os.getenv("SYNC_EVERY", "300"))
    HIDDEN_SIZES: List[int] = _int_list(os.getenv("HIDDEN_SIZES", "64,64"))

    # Harness
    WORKERS: int = int(os.getenv("WORKERS", "1"))
    TABULAR_SEEDS: List[int] = list(range(10))
    DEEP_SEEDS: List[int] = list(range(5))


# Global settings instance
settings = Settings()
