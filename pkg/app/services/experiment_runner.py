"""
Experiment runner
Trains one learner per seed with a decaying epsilon schedule, runs periodic
greedy evaluation episodes and writes the per-episode metrics.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from app.logging.logging_config import get_logger, log_function_call, log_run_footer, log_run_header
from app.models.environment import EnvSpec
from app.models.experiment import EpisodeRecord, ExperimentConfig, RunResult
from app.models.models import Algorithm, EnvName
from app.models.ordinal import EpsilonSchedule
from app.services.agents import BaseAgent, NumericDqnAgent, OrdinalDqnAgent, OrdinalQAgent, QAgent
from app.services.agents.tabular.discretizer import discretizer_for
from app.services.envs import Environment, make_env
from app.services.envs.chain import N_STATES, one_hot
from app.services.ordinal_core import epsilon_at
from app.services.rewards import RewardShaper
from app.utils.csv_io import aggregate_path, meta_path, write_aggregate_csv, write_episode_csv, write_meta

logger = get_logger(__name__)


def build_agent(config: ExperimentConfig, spec: EnvSpec, n_tiers: int, rng: np.random.Generator) -> BaseAgent:
    """Instantiate the configured learner for an environment."""
    if not config.algo.is_deep:
        discretizer = discretizer_for(config.env)
        if config.algo == Algorithm.ORDINAL_Q:
            return OrdinalQAgent(discretizer, spec.n_actions, n_tiers, config.alpha, config.gamma, rng,
                                 rule=config.decision_rule)
        return QAgent(discretizer, spec.n_actions, config.alpha, config.gamma)

    # the chain position is one-hot encoded for networks
    encoded = config.env == EnvName.CHAIN
    common = dict(
        state_dim=N_STATES if encoded else spec.state_dim,
        n_actions=spec.n_actions,
        rng=rng,
        hidden=config.hidden,
        lr=config.lr,
        gamma=config.gamma,
        memory=config.memory,
        batch_size=config.batch_size,
        sync_every=config.sync_every,
    )
    if encoded:
        common["encoder"] = one_hot
    if config.algo == Algorithm.ORDINAL_DQN:
        return OrdinalDqnAgent(n_tiers=n_tiers, rule=config.decision_rule, **common)
    return NumericDqnAgent(**common)


def play_greedy_episode(env: Environment, agent: BaseAgent, rng: np.random.Generator) -> float:
    """Score of one epsilon = 0 episode; the agent does not learn from it."""
    state = env.reset()
    score = 0.0
    while True:
        result = env.step(agent.greedy_action(state, rng))
        score += result.reward
        state = result.next_state
        if result.terminal or result.truncated:
            return score


def run_seed(config: ExperimentConfig, seed: int) -> RunResult:
    """Train and evaluate one learner; all randomness derives from the seed."""
    env_seq, eval_seq, agent_seq, explore_seq, greedy_seq = np.random.SeedSequence(seed).spawn(5)
    env = make_env(config.env, int(env_seq.generate_state(1)[0]))
    eval_env = make_env(config.env, int(eval_seq.generate_state(1)[0]))
    spec = env.spec()
    shaper = RewardShaper(spec, config.reward, ordinal=config.algo.is_ordinal)
    agent = build_agent(config, spec, shaper.n_tiers, np.random.default_rng(agent_seq))
    explore_rng = np.random.default_rng(explore_seq)
    greedy_rng = np.random.default_rng(greedy_seq)
    schedule = EpsilonSchedule(total_episodes=config.episodes, floor=config.epsilon_floor)

    result = RunResult(seed=seed)
    started = time.perf_counter()
    for episode in range(config.episodes):
        episode_start = time.perf_counter()
        epsilon = epsilon_at(schedule, episode)
        state = env.reset()
        score = 0.0
        margins: List[float] = []
        while True:
            action = agent.act(state, epsilon, explore_rng)
            margins.append(agent.value_margin(state))
            step = env.step(action)
            score += step.reward
            agent.observe(state, action, shaper(step.reward), step.next_state, step.terminal)
            state = step.next_state
            if step.terminal or step.truncated:
                break

        greedy_score: Optional[float] = None
        if (episode + 1) % config.eval_every == 0:
            greedy_score = play_greedy_episode(eval_env, agent, greedy_rng)

        elapsed_ms = (time.perf_counter() - episode_start) * 1000.0
        result.records.append(EpisodeRecord(
            seed=seed,
            episode=episode + 1,
            score=score,
            win=spec.is_win(step),
            greedy_score=greedy_score,
            margin=float(np.mean(margins)),
            epsilon=epsilon,
            wall_ms=elapsed_ms if config.timing else 0.0,
        ))
        logger.debug(f"seed {seed} episode {episode + 1}: score {score} epsilon {epsilon:.3f}")

    result.wall_seconds = time.perf_counter() - started
    final = result.records[-config.eval_every:]
    logger.info(
        f"Seed {seed} done in {result.wall_seconds:.2f}s, "
        f"final-window score {np.mean([r.score for r in final]):.2f}, "
        f"win rate {np.mean([r.win for r in final]):.2f}"
    )

    if config.checkpoint_dir and isinstance(agent, (NumericDqnAgent, OrdinalDqnAgent)):
        agent.save_checkpoint(Path(config.checkpoint_dir) / f"{config.algo.value}-{config.env.value}-seed{seed}.ckpt")
    return result


def _window_stats(values: List[float]) -> tuple:
    if not values:
        return None, None
    return float(np.mean(values)), float(np.std(values))


def aggregate(results: List[RunResult], window: int) -> List[Dict[str, Any]]:
    """
    Across-seed mean and population std of last-window means.

    One row every `window` episodes plus one for the last episode. Greedy
    scores average the evaluations inside the window and stay empty when
    a window holds none.
    """
    episodes = len(results[0].records)
    checkpoints = list(range(window, episodes + 1, window))
    if not checkpoints or checkpoints[-1] != episodes:
        checkpoints.append(episodes)

    rows = []
    for end in checkpoints:
        per_seed: Dict[str, List[float]] = {"score": [], "win": [], "greedy_score": [], "margin": []}
        for result in results:
            chunk = result.records[max(0, end - window):end]
            per_seed["score"].append(float(np.mean([r.score for r in chunk])))
            per_seed["win"].append(float(np.mean([r.win for r in chunk])))
            per_seed["margin"].append(float(np.mean([r.margin for r in chunk])))
            greedy = [r.greedy_score for r in chunk if r.greedy_score is not None]
            if greedy:
                per_seed["greedy_score"].append(float(np.mean(greedy)))

        row: Dict[str, Any] = {"episode": end}
        for name, values in per_seed.items():
            row[f"{name}_mean"], row[f"{name}_std"] = _window_stats(values)
        rows.append(row)
    return rows


def write_outputs(config: ExperimentConfig, results: List[RunResult], spec: EnvSpec) -> None:
    """Per-episode CSV, aggregate CSV and meta sidecar next to config.out."""
    out = Path(config.out)
    write_episode_csv(out, [record for result in results for record in result.records])
    write_aggregate_csv(aggregate_path(out), aggregate(results, config.eval_every))
    write_meta(meta_path(out), {
        "config": config.model_dump(mode="json"),
        "environment": spec.describe(),
        "wall_seconds": {
            str(result.seed): (result.wall_seconds if config.timing else 0.0) for result in results
        },
    })
    logger.info(f"📄 Wrote {out}, {aggregate_path(out).name} and {meta_path(out).name}")


@log_function_call("run_experiment")
def run_experiment(config: ExperimentConfig) -> List[RunResult]:
    """
    Run every configured seed and write the result files when config.out is set.

    Returns:
        Per-seed results in the configured seed order
    """
    spec = make_env(config.env).spec()
    log_run_header(config, spec)
    started = time.perf_counter()
    try:
        if config.workers > 1 and len(config.seeds) > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures = [pool.submit(run_seed, config, seed) for seed in config.seeds]
                results = [future.result() for future in futures]
        else:
            results = [run_seed(config, seed) for seed in config.seeds]
    except Exception as e:
        logger.error(f"❌ Experiment {config.algo.value} on {config.env.value} failed: {e}")
        raise

    if config.out:
        write_outputs(config, results, spec)
    log_run_footer(time.perf_counter() - started)
    return results
