"""
Ordinal-RL command line

    python -m app.main run --env cartpole --algo ordinal-q --episodes 400 --out results/oq.csv
    python -m app.main summarize --in results/q.csv results/oq.csv
    python -m app.main oracle --env chain
"""

import argparse
import sys
from typing import List, Optional

from app.config import settings
from app.controllers import experiment_controller
from app.logging.logging_config import get_logger, setup_logging
from app.utils.config_file import parse_algo, parse_env, parse_int_list, parse_reward, parse_rule

logger = get_logger(__name__)


def _add_run_parser(subparsers) -> None:
    run = subparsers.add_parser("run", help="Train a learner over several seeds and write metrics")
    run.add_argument("--config", help="Config file with 'key = value' lines; flags override it")
    run.add_argument("--env", type=parse_env, help="cartpole | acrobot | chain")
    run.add_argument("--algo", type=parse_algo, help="q | ordinal-q | dqn | ordinal-dqn")
    run.add_argument("--reward", type=parse_reward, help="standard | cr | tier (numeric learners)")
    run.add_argument("--episodes", type=int)
    run.add_argument("--seeds", type=parse_int_list, help="Comma-separated seeds, ranges as a-b")
    run.add_argument("--eval-every", type=int, help="Greedy evaluation and reporting interval")
    run.add_argument("--out", help="Per-episode CSV path")
    run.add_argument("--alpha", type=float)
    run.add_argument("--gamma", type=float)
    run.add_argument("--epsilon-floor", type=float)
    run.add_argument("--decision-rule", type=parse_rule, help="maximum | contingent | runoff | copeland")
    run.add_argument("--lr", type=float)
    run.add_argument("--memory", type=int)
    run.add_argument("--batch-size", type=int)
    run.add_argument("--sync-every", type=int)
    run.add_argument("--hidden", type=parse_int_list, help="Hidden layer widths, e.g. 64,64")
    run.add_argument("--workers", type=int)
    run.add_argument("--no-timing", action="store_true", default=None,
                     help="Write 0 to wall_ms so the CSV is reproducible byte for byte")
    run.add_argument("--checkpoint-dir", help="Save trained networks of deep learners here")
    run.set_defaults(handler=experiment_controller.handle_run)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordinal-rl", description=f"{settings.APP_NAME} experiment harness")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL)
    subparsers = parser.add_subparsers(dest="command", required=True)

    _add_run_parser(subparsers)

    summary = subparsers.add_parser("summarize", help="Summarize episode CSVs written by run")
    summary.add_argument("--in", dest="inputs", nargs="+", required=True)
    summary.add_argument("--out", help="Also write the summary table as CSV")
    summary.set_defaults(handler=experiment_controller.handle_summarize)

    oracle = subparsers.add_parser("oracle", help="Exact value-iteration and policy-ranking oracles")
    oracle.add_argument("--env", type=parse_env, required=True)
    oracle.add_argument("--gamma", type=float, default=settings.GAMMA)
    oracle.add_argument("--top", type=int, default=8, help="Number of ranked policies to print")
    oracle.set_defaults(handler=experiment_controller.handle_oracle)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(
        log_level=args.log_level,
        enable_file_logging=settings.ENABLE_FILE_LOGGING,
        enable_console_logging=True,
    )
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
