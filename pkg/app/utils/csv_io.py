"""
Result files: per-episode CSV, aggregate CSV and the JSON meta sidecar
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from app.models.experiment import EpisodeRecord

EPISODE_COLUMNS = ["seed", "episode", "score", "win", "greedy_score", "margin", "epsilon", "wall_ms"]
AGGREGATE_COLUMNS = [
    "episode",
    "score_mean", "score_std",
    "win_mean", "win_std",
    "greedy_score_mean", "greedy_score_std",
    "margin_mean", "margin_std",
]

PathLike = Union[str, Path]


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def aggregate_path(out: PathLike) -> Path:
    out = Path(out)
    return out.with_name(f"{out.stem}.aggregate.csv")


def meta_path(out: PathLike) -> Path:
    out = Path(out)
    return out.with_name(f"{out.stem}.meta.json")


def write_rows(path: PathLike, columns: Sequence[str], rows: List[Dict[str, Any]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({column: _fmt(row.get(column)) for column in columns})


def write_episode_csv(path: PathLike, records: List[EpisodeRecord]) -> None:
    rows = [{column: getattr(record, column) for column in EPISODE_COLUMNS} for record in records]
    write_rows(path, EPISODE_COLUMNS, rows)


def _optional_float(cell: str) -> Optional[float]:
    return float(cell) if cell != "" else None


def read_episode_csv(path: PathLike) -> List[EpisodeRecord]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        missing = set(EPISODE_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        return [
            EpisodeRecord(
                seed=int(row["seed"]),
                episode=int(row["episode"]),
                score=float(row["score"]),
                win=row["win"] == "1",
                greedy_score=_optional_float(row["greedy_score"]),
                margin=float(row["margin"]),
                epsilon=float(row["epsilon"]),
                wall_ms=float(row["wall_ms"]),
            )
            for row in reader
        ]


def write_aggregate_csv(path: PathLike, rows: List[Dict[str, Any]]) -> None:
    write_rows(path, AGGREGATE_COLUMNS, rows)


def write_meta(path: PathLike, meta: Dict[str, Any]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")


def read_meta(path: PathLike) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
