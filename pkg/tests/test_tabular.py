import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.models.models import DecisionRule
from app.services.agents.tabular.discretizer import (
    Discretizer,
    acrobot_discretizer,
    cartpole_discretizer,
    chain_discretizer,
)
from app.services.agents.tabular.ordinal_q_agent import OrdinalQAgent, OrdinalQTable, ordinal_q_step
from app.services.agents.tabular.q_agent import NumericQTable, QAgent, numeric_q_update
from app.services.envs.cartpole import CARTPOLE_SPEC, CartPole
from app.services.envs.chain import CHAIN_SPEC, GOAL, RIGHT, Chain, chain_mdp
from app.services.envs.oracle import exact_policy_distributions, superiority_optimal_policy, value_iteration
from app.services.ordinal_core import normalize, tier_map_from_rewards, to_ordinal


def test_discretizer_mixed_radix():
    grid = Discretizer(lows=(0.0, 0.0), highs=(1.0, 1.0), buckets=(3, 4))
    assert grid.n_states == 12
    assert grid.discretize([0.0, 0.0]) == 0
    assert grid.discretize([0.5, 0.3]) == 1 * 4 + 1
    assert grid.discretize([1.0, 1.0]) == 11
    assert grid.discretize([-7.0, 9.0]) == 3


def test_discretizer_validation():
    with pytest.raises(ValueError):
        Discretizer(lows=(0.0,), highs=(0.0,), buckets=(2,))
    with pytest.raises(ValueError):
        Discretizer(lows=(0.0,), highs=(1.0,), buckets=(0,))
    with pytest.raises(ValueError):
        chain_discretizer().discretize([0.0, 1.0])


def test_chain_discretizer_is_identity():
    grid = chain_discretizer()
    assert [grid.discretize([float(s)]) for s in range(5)] == [0, 1, 2, 3, 4]


@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=4))
def test_cartpole_index_in_range(state):
    grid = cartpole_discretizer()
    assert 0 <= grid.discretize(state) < grid.n_states == 10 ** 4


@given(st.lists(st.floats(-50.0, 50.0), min_size=6, max_size=6))
def test_acrobot_index_in_range(state):
    grid = acrobot_discretizer()
    assert 0 <= grid.discretize(state) < grid.n_states == 6 ** 6


def test_numeric_q_update():
    table = NumericQTable(3, 2)
    table.q[1] = [2.0, 4.0]
    numeric_q_update(table, 0, 1, -1.0, 1, False, 0.5, 0.9)
    assert table.q[0, 1] == pytest.approx(0.5 * (-1.0 + 0.9 * 4.0))
    numeric_q_update(table, 2, 0, 5.0, 1, True, 1.0, 0.9)
    assert table.q[2, 0] == 5.0


def test_ordinal_q_step_terminal_and_bootstrap(rng):
    table = OrdinalQTable(3, 2, 2)
    ordinal_q_step(table, 0, 0, 2, 1, True, 0.5, 0.9, rng)
    np.testing.assert_allclose(table.d[0, 0], [0.0, 0.5])

    table.d[2] = [[1.0, 0.0], [0.0, 2.0]]  # action 1 dominates at state 2
    ordinal_q_step(table, 1, 1, 1, 2, False, 1.0, 0.5, rng)
    np.testing.assert_allclose(table.d[1, 1], [1.0, 1.0])


def test_unvisited_states_are_indifferent(rng):
    agent = OrdinalQAgent(chain_discretizer(), 2, 2, 0.1, 0.9, rng)
    np.testing.assert_allclose(agent.scores(np.array([0.0])), [0.5, 0.5])
    assert agent.value_margin(np.array([0.0])) == 0.0


@pytest.mark.parametrize(
    "alpha, gamma, message",
    [(1.5, 0.9, "alpha must be in"), (-0.1, 0.9, "alpha must be in"), (0.1, 1.0, "gamma must be in")],
)
def test_agents_validate_rates(rng, alpha, gamma, message):
    with pytest.raises(ValueError, match=message):
        QAgent(chain_discretizer(), 2, alpha, gamma)
    with pytest.raises(ValueError, match=message):
        OrdinalQAgent(chain_discretizer(), 2, 2, alpha, gamma, rng)
    with pytest.raises(ValueError, match=message):
        numeric_q_update(NumericQTable(5, 2), 0, 1, -1.0, 1, False, alpha, gamma)
    with pytest.raises(ValueError, match=message):
        ordinal_q_step(OrdinalQTable(5, 2, 2), 0, 1, 1, 1, False, alpha, gamma, rng)


def _cartpole_actions(transform, episodes=30, seed=7):
    env = CartPole(seed=seed)
    tier_map = tier_map_from_rewards([transform(r) for r in CARTPOLE_SPEC.reward_set])
    agent = OrdinalQAgent(cartpole_discretizer(), 2, tier_map.n, 0.1, 0.9, np.random.default_rng(seed))
    explore = np.random.default_rng(seed + 1)
    actions = []
    for episode in range(episodes):
        epsilon = max(0.0, 1.0 - episode / (episodes / 2))
        state = env.reset()
        while True:
            action = agent.act(state, epsilon, explore)
            actions.append(action)
            step = env.step(action)
            tier = to_ordinal(tier_map, transform(step.reward))
            agent.observe(state, action, tier, step.next_state, step.terminal)
            state = step.next_state
            if step.terminal or step.truncated:
                break
    return actions


@pytest.mark.parametrize(
    "transform",
    [lambda r: np.exp(3.0 * r) * 7.0 - 100.0, lambda r: r ** 3 + 5.0 * r, lambda r: np.arctan(r - 0.3)],
)
def test_ordinal_trajectory_ignores_increasing_reward_transforms(transform):
    assert _cartpole_actions(transform) == _cartpole_actions(lambda r: r)


def _train(agent, shaping, episodes, seed, floor=0.1):
    env = Chain(seed=seed)
    rng = np.random.default_rng(seed)
    half = episodes / 2
    for episode in range(episodes):
        epsilon = max(floor, 1.0 - (1.0 - floor) * episode / half)
        state = env.reset()
        while True:
            action = agent.act(state, epsilon, rng)
            result = env.step(action)
            agent.observe(state, action, shaping(result.reward), result.next_state, result.terminal)
            state = result.next_state
            if result.terminal or result.truncated:
                break


def test_q_learning_matches_value_iteration_on_chain():
    agent = QAgent(chain_discretizer(), 2, alpha=0.1, gamma=0.9)
    _train(agent, float, 5000, seed=0)
    q_star, policy = value_iteration(chain_mdp(), 0.9)
    assert np.abs(agent.table.q[:GOAL] - q_star[:GOAL]).max() < 1e-2
    rng = np.random.default_rng(0)
    greedy = [agent.greedy_action(np.array([float(s)]), rng) for s in range(GOAL)]
    assert greedy == list(policy[:GOAL])


@pytest.mark.parametrize("rule", [DecisionRule.MAXIMUM, DecisionRule.COPELAND])
def test_ordinal_q_learning_matches_exact_distributions_on_chain(rule):
    mdp = chain_mdp()
    tier_map = tier_map_from_rewards(CHAIN_SPEC.reward_set)
    agent = OrdinalQAgent(chain_discretizer(), 2, tier_map.n, alpha=0.1, gamma=0.9,
                          rng=np.random.default_rng(1), rule=rule)
    _train(agent, lambda r: to_ordinal(tier_map, r), 5000, seed=1)

    optimal = superiority_optimal_policy(mdp, tier_map, 0.9)
    rng = np.random.default_rng(0)
    greedy = tuple(agent.greedy_action(np.array([float(s)]), rng) for s in range(GOAL))
    assert greedy == optimal[:GOAL] == (RIGHT,) * GOAL

    exact = exact_policy_distributions(mdp, tier_map, optimal, 0.9)
    assert np.abs(agent.table.d[:GOAL] - exact[:GOAL]).max() < 1e-2
    assert normalize(agent.table.d[0, RIGHT])[1] > normalize(agent.table.d[0, 1 - RIGHT])[1]
