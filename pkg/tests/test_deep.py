import numpy as np
import pytest

from app.models.models import DecisionRule
from app.services.agents.deep.dqn_agent import NumericDqnAgent
from app.services.agents.deep.ordinal_dqn_agent import OrdinalDqnAgent
from app.services.agents.deep.replay_buffer import Experience, ReplayBuffer
from app.services.neural import forward


def _experience(i, action=0, reward=1.0, terminal=False, dim=2):
    return Experience(np.full(dim, float(i)), action, reward, np.full(dim, float(i + 1)), terminal)


def _set_constant(net, output):
    """Make a network emit a fixed vector whatever its input."""
    for w in net.weights:
        w[:] = 0.0
    for b in net.biases:
        b[:] = 0.0
    net.biases[-1][:] = output


def _ordinal(**kwargs):
    defaults = dict(state_dim=2, n_actions=2, n_tiers=2, rng=np.random.default_rng(0), hidden=[4],
                    batch_size=4, memory=100, sync_every=1000)
    defaults.update(kwargs)
    return OrdinalDqnAgent(**defaults)


def _numeric(**kwargs):
    defaults = dict(state_dim=2, n_actions=2, rng=np.random.default_rng(0), hidden=[4],
                    batch_size=4, memory=100, sync_every=1000)
    defaults.update(kwargs)
    return NumericDqnAgent(**defaults)


# --- replay buffer -----------------------------------------------------------

def test_buffer_evicts_oldest():
    buffer = ReplayBuffer(2)
    assert len(buffer) == 0
    items = [_experience(i) for i in range(3)]
    for item in items:
        buffer.push(item)
    assert len(buffer) == 2
    sampled = buffer.sample(2, np.random.default_rng(0))
    assert set(map(id, sampled)) == {id(items[1]), id(items[2])}


def test_buffer_sample_single_and_clamped(rng):
    buffer = ReplayBuffer(100)
    only = _experience(0)
    buffer.push(only)
    assert buffer.sample(1, rng) == [only]
    for i in range(1, 10):
        buffer.push(_experience(i))
    sampled = buffer.sample(64, rng)
    assert len(sampled) == 10
    assert len({id(e) for e in sampled}) == 10


def test_buffer_sample_empty(rng):
    with pytest.raises(ValueError, match="nothing to sample"):
        ReplayBuffer(5).sample(1, rng)


def test_buffer_sampling_is_uniform(rng):
    buffer = ReplayBuffer(10)
    for i in range(10):
        buffer.push(_experience(i))
    counts = np.zeros(10)
    for _ in range(10000):
        counts[int(buffer.sample(1, rng)[0].state[0])] += 1
    expected = 1000.0
    assert ((counts - expected) ** 2 / expected).sum() < 27.88  # df = 9, p = 0.001


# --- ordinal DQN -------------------------------------------------------------

def test_zero_networks_are_indifferent(rng):
    agent = _ordinal(n_tiers=3)
    for net in agent.eval_nets:
        _set_constant(net, [0.0, 0.0, 0.0])
    np.testing.assert_allclose(agent.scores(np.zeros(2)), [0.5, 0.5])
    picks = {agent.act(np.zeros(2), 0.0, rng) for _ in range(100)}
    assert picks == {0, 1}


def test_ordinal_act_with_hand_set_networks(rng):
    agent = _ordinal(n_tiers=4)
    _set_constant(agent.eval_nets[0], [0.1, 0.4, 0.1, 0.4])
    _set_constant(agent.eval_nets[1], [0.4, 0.0, 0.1, 0.5])
    np.testing.assert_allclose(agent.scores(np.ones(2)), [0.525, 0.475])
    assert all(agent.act(np.ones(2), 0.0, rng) == 0 for _ in range(20))
    assert agent.value_margin(np.ones(2)) == pytest.approx(0.05)


def test_ordinal_act_clamps_negative_outputs():
    agent = _ordinal()
    _set_constant(agent.eval_nets[0], [-3.0, 1.0])
    _set_constant(agent.eval_nets[1], [1.0, 1.0])
    np.testing.assert_allclose(agent.probabilities(np.zeros(2)), [[0.0, 1.0], [0.5, 0.5]])


def test_ordinal_epsilon_one_is_uniform(rng):
    agent = _ordinal(n_actions=3)
    _set_constant(agent.eval_nets[0], [0.0, 5.0])
    counts = np.bincount([agent.act(np.zeros(2), 1.0, rng) for _ in range(6000)], minlength=3)
    assert counts.min() > 1800


def test_ordinal_terminal_target_is_unit_vector():
    agent = _ordinal(n_tiers=3)
    targets, _ = agent.compute_targets([_experience(0, action=1, reward=2, terminal=True)])
    np.testing.assert_array_equal(targets, [[0.0, 1.0, 0.0]])


def test_ordinal_gamma_zero_ignores_next_state():
    agent = _ordinal(gamma=0.0)
    targets, _ = agent.compute_targets([_experience(0, reward=1), _experience(5, reward=2)])
    np.testing.assert_array_equal(targets, [[1.0, 0.0], [0.0, 1.0]])


def test_ordinal_double_decoupling():
    agent = _ordinal(gamma=0.9)
    # evaluation networks prefer action 1, target networks prefer action 0
    _set_constant(agent.eval_nets[0], [1.0, 0.0])
    _set_constant(agent.eval_nets[1], [0.0, 1.0])
    _set_constant(agent.target_nets[0], [0.0, 1.0])
    _set_constant(agent.target_nets[1], [2.0, 0.0])
    targets, next_actions = agent.compute_targets([_experience(0, action=0, reward=1)])
    assert next_actions.tolist() == [1]
    np.testing.assert_allclose(targets, [[1.0 + 0.9 * 2.0, 0.0]])


@pytest.mark.parametrize("rule", [DecisionRule.RUNOFF, DecisionRule.COPELAND])
def test_ordinal_targets_follow_decision_rule(rule):
    agent = _ordinal(rule=rule)
    _set_constant(agent.eval_nets[0], [1.0, 0.0])
    _set_constant(agent.eval_nets[1], [0.0, 1.0])
    _, next_actions = agent.compute_targets([_experience(0)])
    assert next_actions.tolist() == [1]


def test_ordinal_targets_are_nonnegative():
    agent = _ordinal(gamma=0.9)
    _set_constant(agent.target_nets[0], [0.5, 0.25])
    _set_constant(agent.target_nets[1], [0.5, 0.25])
    batch = [_experience(i, action=i % 2, reward=1 + i % 2, terminal=i % 3 == 0) for i in range(12)]
    targets, _ = agent.compute_targets(batch)
    assert (targets >= 0).all()
    assert np.all((targets.sum(axis=1) >= 1.0) & (targets.sum(axis=1) <= 1.0 + 0.9 * 0.75 + 1e-12))


def test_ordinal_warm_up_and_tier_validation():
    agent = _ordinal(batch_size=3)
    state = np.zeros(2)
    assert agent.observe(state, 0, 1, state, False) is None
    assert agent.observe(state, 1, 2, state, False) is None
    assert agent.observe(state, 0, 1, state, True) is not None
    assert agent.fit_count == 1
    with pytest.raises(ValueError):
        agent.observe(state, 0, 3, state, False)


def test_target_networks_stay_frozen_between_syncs():
    agent = _ordinal(batch_size=2, sync_every=3)
    frozen = [[p.copy() for p in net.parameters()] for net in agent.target_nets]
    rng = np.random.default_rng(4)
    for i in range(2):
        agent.observe(rng.normal(size=2), i % 2, 1 + i % 2, rng.normal(size=2), False)
    agent.replay()
    assert agent.fit_count == 2
    for net, saved in zip(agent.target_nets, frozen):
        for p, q in zip(net.parameters(), saved):
            np.testing.assert_array_equal(p, q)
    assert any(
        not np.array_equal(e, t)
        for eval_net, target_net in zip(agent.eval_nets, agent.target_nets)
        for e, t in zip(eval_net.parameters(), target_net.parameters())
    )
    agent.replay()
    for eval_net, target_net in zip(agent.eval_nets, agent.target_nets):
        for e, t in zip(eval_net.parameters(), target_net.parameters()):
            np.testing.assert_array_equal(e, t)


def test_ordinal_single_transition_converges():
    agent = _ordinal(batch_size=1, lr=1e-2, hidden=[8])
    state = np.array([0.3, -0.2])
    agent.buffer.push(Experience(state, 1, 2, np.zeros(2), True))
    for _ in range(3000):
        agent.replay()
    np.testing.assert_allclose(forward(agent.eval_nets[1], state), [0.0, 1.0], atol=1e-3)


def test_ordinal_checkpoint_roundtrip(tmp_path):
    trained = _ordinal(rng=np.random.default_rng(1))
    fresh = _ordinal(rng=np.random.default_rng(2))
    path = tmp_path / "ordinal.ckpt"
    trained.save_checkpoint(path)
    fresh.load_checkpoint(path)
    x = np.array([0.1, 0.7])
    for a in range(2):
        np.testing.assert_array_equal(forward(fresh.eval_nets[a], x), forward(trained.eval_nets[a], x))
        np.testing.assert_array_equal(forward(fresh.target_nets[a], x), forward(trained.target_nets[a], x))
    assert path.read_bytes().startswith(b"action=0 role=eval\nORLN1")


# --- numeric DQN -------------------------------------------------------------

def test_numeric_terminal_target_is_reward():
    agent = _numeric()
    targets, _ = agent.compute_targets([_experience(0, reward=-1.0, terminal=True)])
    np.testing.assert_array_equal(targets, [-1.0])


def test_numeric_zero_network_gamma_zero():
    agent = _numeric(gamma=0.0)
    _set_constant(agent.target_net, [0.0, 0.0])
    targets, _ = agent.compute_targets([_experience(0, reward=1.0)])
    np.testing.assert_array_equal(targets, [1.0])


def test_numeric_double_decoupling():
    agent = _numeric(gamma=0.5)
    _set_constant(agent.eval_net, [0.0, 1.0])
    _set_constant(agent.target_net, [5.0, 2.0])
    targets, next_actions = agent.compute_targets([_experience(0, reward=1.0)])
    assert next_actions.tolist() == [1]
    np.testing.assert_allclose(targets, [2.0])


def test_numeric_replay_trains_only_taken_action():
    agent = _numeric(hidden=[], batch_size=1)
    untouched = (agent.eval_net.weights[0][:, 1].copy(), agent.eval_net.biases[0][1])
    agent.observe(np.array([1.0, 2.0]), 0, 1.0, np.zeros(2), True)
    np.testing.assert_array_equal(agent.eval_net.weights[0][:, 1], untouched[0])
    assert agent.eval_net.biases[0][1] == untouched[1]


def test_numeric_checkpoint_uses_shared_manifest(tmp_path):
    agent = _numeric()
    path = tmp_path / "dqn.ckpt"
    agent.save_checkpoint(path)
    assert path.read_bytes().startswith(b"action=all role=eval\nORLN1")
    other = _numeric(rng=np.random.default_rng(9))
    other.load_checkpoint(path)
    np.testing.assert_array_equal(other.q_values(np.ones(2)), agent.q_values(np.ones(2)))


def test_determinism_under_fixed_seeds():
    runs = []
    for _ in range(2):
        agent = _ordinal(rng=np.random.default_rng(3), batch_size=4)
        data = np.random.default_rng(5)
        for i in range(30):
            agent.observe(data.normal(size=2), int(data.integers(2)), int(data.integers(1, 3)),
                          data.normal(size=2), bool(data.random() < 0.2))
        runs.append(agent)
    for a, b in zip(runs[0].eval_nets, runs[1].eval_nets):
        for p, q in zip(a.parameters(), b.parameters()):
            np.testing.assert_array_equal(p, q)
