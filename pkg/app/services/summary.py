"""
Run summaries
Final-window scores, win rates and wall times per (algorithm, environment),
plus the ordinal / numeric wall-time ratio.
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.logging.logging_config import get_logger
from app.models.experiment import EpisodeRecord, SummaryRow
from app.models.models import Algorithm, RewardMode
from app.utils.csv_io import meta_path, read_episode_csv, read_meta, write_rows

logger = get_logger(__name__)

SUMMARY_COLUMNS = [
    "algo", "env", "reward", "runs", "episodes",
    "final_score", "final_win_rate", "final_greedy_score",
    "mean_wall_seconds", "time_ratio",
]


def summarize_records(
    records: List[EpisodeRecord],
    algo: str,
    env: str,
    reward: str,
    window: int,
    wall_seconds: Dict[int, float],
) -> SummaryRow:
    """
    Summarize one run's records.

    The final window is the last `window` episodes of every seed; seed
    means are then averaged across seeds.
    """
    if not records:
        raise ValueError("no records to summarize")
    by_seed: Dict[int, List[EpisodeRecord]] = {}
    for record in records:
        by_seed.setdefault(record.seed, []).append(record)

    scores, wins, greedy = [], [], []
    for seed_records in by_seed.values():
        seed_records.sort(key=lambda r: r.episode)
        final = seed_records[-window:]
        scores.append(np.mean([r.score for r in final]))
        wins.append(np.mean([r.win for r in final]))
        evaluated = [r.greedy_score for r in final if r.greedy_score is not None]
        if evaluated:
            greedy.append(np.mean(evaluated))

    walls = [wall_seconds.get(seed, 0.0) for seed in by_seed]
    return SummaryRow(
        algo=algo,
        env=env,
        reward=reward,
        runs=len(by_seed),
        episodes=max(len(v) for v in by_seed.values()),
        final_score=float(np.mean(scores)),
        final_win_rate=float(np.mean(wins)),
        final_greedy_score=float(np.mean(greedy)) if greedy else None,
        mean_wall_seconds=float(np.mean(walls)),
    )


def time_ratio(ordinal_seconds: float, numeric_seconds: float) -> Optional[float]:
    if numeric_seconds <= 0.0:
        return None
    return ordinal_seconds / numeric_seconds


def _attach_ratios(rows: List[SummaryRow]) -> None:
    # prefer the standard-reward numeric run as the reference
    numeric: Dict[Tuple[str, str], SummaryRow] = {}
    for row in rows:
        algo = Algorithm(row.algo)
        if algo.is_ordinal:
            continue
        key = (algo.value, row.env)
        if key not in numeric or row.reward == RewardMode.STANDARD.value:
            numeric[key] = row
    for row in rows:
        algo = Algorithm(row.algo)
        if not algo.is_ordinal:
            continue
        reference = numeric.get((algo.numeric_counterpart.value, row.env))
        if reference is not None:
            row.time_ratio = time_ratio(row.mean_wall_seconds, reference.mean_wall_seconds)


def summarize(paths: Sequence[Union[str, Path]]) -> List[SummaryRow]:
    """
    Summarize episode CSVs written by `run`, using their meta sidecars.

    Args:
        paths: Per-episode CSV files

    Returns:
        One SummaryRow per file, ordinal rows carrying the time ratio
    """
    if not paths:
        raise ValueError("no records to summarize")
    rows = []
    for path in paths:
        sidecar = meta_path(path)
        if not sidecar.exists():
            raise ValueError(f"missing meta file {sidecar} for {path}")
        meta = read_meta(sidecar)
        config = meta["config"]
        wall = {int(seed): float(seconds) for seed, seconds in meta.get("wall_seconds", {}).items()}
        records = read_episode_csv(path)
        rows.append(summarize_records(
            records,
            algo=config["algo"],
            env=config["env"],
            reward=config["reward"],
            window=int(config["eval_every"]),
            wall_seconds=wall,
        ))
        logger.debug(f"Summarized {len(records)} records from {path}")
    _attach_ratios(rows)
    return rows


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def format_summary(rows: List[SummaryRow]) -> str:
    """Plain-text table of summary rows."""
    table = [SUMMARY_COLUMNS] + [[_cell(getattr(row, c)) for c in SUMMARY_COLUMNS] for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(SUMMARY_COLUMNS))]
    return "\n".join("  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in table)


def write_summary_csv(path: Union[str, Path], rows: List[SummaryRow]) -> None:
    write_rows(path, SUMMARY_COLUMNS, [{c: getattr(row, c) for c in SUMMARY_COLUMNS} for row in rows])
