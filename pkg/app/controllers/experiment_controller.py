"""
Command handlers for the run, summarize and oracle subcommands
"""

import argparse
from typing import Any, Dict

import numpy as np
from pydantic import ValidationError

from app.logging.logging_config import get_logger
from app.models.experiment import ExperimentConfig
from app.models.models import EnvName
from app.services.envs.chain import CHAIN_SPEC, chain_mdp
from app.services.envs.oracle import rank_policies, value_iteration
from app.services.experiment_runner import run_experiment
from app.services.ordinal_core import tier_map_from_rewards
from app.services.summary import format_summary, summarize, write_summary_csv
from app.utils.config_file import CONFIG_KEYS, load_config_file

logger = get_logger(__name__)


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge the config file (if any) with command-line flags; flags win.

    Unset flags are None in the namespace and fall back to the file, then to
    the ExperimentConfig defaults.
    """
    options: Dict[str, Any] = load_config_file(args.config) if getattr(args, "config", None) else {}
    for key, (field_name, _) in CONFIG_KEYS.items():
        value = getattr(args, key, None)
        if value is None:
            continue
        if key == "no_timing":
            if value:
                options[field_name] = False
            continue
        options[field_name] = value
    missing = [name for name in ("env", "algo") if name not in options]
    if missing:
        raise ValueError(f"missing required option(s): {', '.join('--' + m for m in missing)}")
    return ExperimentConfig(**options)


def handle_run(args: argparse.Namespace) -> int:
    try:
        config = resolve_config(args)
    except (ValueError, ValidationError, OSError) as e:
        logger.error(f"❌ Invalid configuration: {e}")
        return 2
    try:
        results = run_experiment(config)
    except Exception as e:
        logger.error(f"❌ Run failed: {e}")
        return 1
    if not config.out:
        final = [np.mean([r.score for r in result.records[-config.eval_every:]]) for result in results]
        print(f"final-window score {np.mean(final):.3f} ± {np.std(final):.3f} over {len(results)} seeds")
    return 0


def handle_summarize(args: argparse.Namespace) -> int:
    try:
        rows = summarize(args.inputs)
    except Exception as e:
        logger.error(f"❌ Summary failed: {e}")
        return 1
    print(format_summary(rows))
    if args.out:
        write_summary_csv(args.out, rows)
        logger.info(f"📄 Summary written to {args.out}")
    return 0


def _format_policy(policy, terminal_states) -> str:
    return "".join("." if s in terminal_states else "LR"[a] for s, a in enumerate(policy))


def handle_oracle(args: argparse.Namespace) -> int:
    if args.env != EnvName.CHAIN:
        logger.error(f"❌ Exact oracles are only available for the chain environment, not '{args.env.value}'")
        return 2
    try:
        mdp = chain_mdp()
        tier_map = tier_map_from_rewards(CHAIN_SPEC.reward_set)
        q, greedy = value_iteration(mdp, args.gamma)
        rankings = rank_policies(mdp, tier_map, args.gamma)
    except Exception as e:
        logger.error(f"❌ Oracle failed: {e}")
        return 1

    print(f"Value iteration (gamma={args.gamma})")
    print("state  Q(left)     Q(right)    greedy")
    for s, row in enumerate(q):
        print(f"{s:<5}  {row[0]:<10.6f}  {row[1]:<10.6f}  {'LR'[greedy[s]]}")
    print()
    print("Policies ranked by superiority of start-state distributions (L/R per state)")
    for rank, entry in enumerate(rankings[:args.top], start=1):
        flag = "*" if entry.self_consistent else " "
        print(f"{rank:>3}. {_format_policy(entry.policy, mdp.terminal_states)} {flag} score {entry.score:.6f}")
    print("(* = greedy with respect to its own distributions)")
    return 0
