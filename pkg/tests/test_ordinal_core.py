import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.models.models import DecisionRule
from app.models.ordinal import EpsilonSchedule, TierMap
from app.services.ordinal_core import (
    change_rewards,
    decide,
    decision_probabilities,
    epsilon_at,
    epsilon_greedy_action,
    greedy_action,
    normalize,
    ordinal_update,
    superiority_margin,
    superiority_scores,
    tier_map_from_rewards,
    to_ordinal,
    win_matrix,
    win_probability,
)


def probability_vectors(n):
    return st.lists(st.floats(0.0, 10.0), min_size=n, max_size=n).map(lambda m: normalize(np.array(m)))


@st.composite
def vector_pairs(draw):
    n = draw(st.integers(1, 8))
    return draw(probability_vectors(n)), draw(probability_vectors(n))


@st.composite
def vector_sets(draw):
    n = draw(st.integers(1, 6))
    k = draw(st.integers(2, 6))
    return [draw(probability_vectors(n)) for _ in range(k)]


# --- tier map ---------------------------------------------------------------

def test_tier_map_ranks_rewards():
    tier_map = tier_map_from_rewards({100.0, -5.0, 7.5, 0.0, 4.0})
    assert tier_map.sorted_rewards == (-5.0, 0.0, 4.0, 7.5, 100.0)
    assert [to_ordinal(tier_map, r) for r in (-5.0, 0.0, 4.0, 7.5, 100.0)] == [1, 2, 3, 4, 5]


def test_tier_map_singleton_and_pair():
    assert to_ordinal(tier_map_from_rewards({0.0}), 0.0) == 1
    pair = tier_map_from_rewards([0.0, -1.0])
    assert to_ordinal(pair, -1.0) == 1
    assert to_ordinal(pair, 0.0) == 2


def test_tier_map_errors():
    with pytest.raises(ValueError, match="no rewards"):
        tier_map_from_rewards([])
    with pytest.raises(ValueError, match="invalid reward"):
        tier_map_from_rewards([0.0, float("nan")])
    with pytest.raises(ValueError, match="reward not in tier map"):
        to_ordinal(tier_map_from_rewards([-1.0, 0.0]), 0.5)
    with pytest.raises(ValueError):
        TierMap(sorted_rewards=(1.0, 0.0))


def test_to_ordinal_absorbs_representation_noise():
    assert to_ordinal(tier_map_from_rewards([-1.0, 0.0]), 1e-12) == 2


def test_change_rewards():
    assert change_rewards({-1.0, 0.0}) == {-1.0: 0.0, 0.0: 0.01}
    assert change_rewards({0.0}) == {0.0: 0.0}
    changed = change_rewards({-5.0, 0.0, 4.0, 7.5, 100.0})
    assert list(changed.values()) == pytest.approx([0.0, 0.05, 0.09, 0.125, 1.05])


# --- normalization and superiority ------------------------------------------

def test_normalize_examples():
    np.testing.assert_allclose(normalize(np.array([2.0, 2.0])), [0.5, 0.5])
    np.testing.assert_allclose(normalize(np.zeros(3)), [1 / 3, 1 / 3, 1 / 3])
    np.testing.assert_allclose(normalize(np.array([1.0, 4.0, 1.0, 4.0])), [0.1, 0.4, 0.1, 0.4])


@given(st.lists(st.floats(0.0, 1e6), min_size=1, max_size=10))
def test_normalize_sums_to_one(mass):
    assert normalize(np.array(mass)).sum() == pytest.approx(1.0, abs=1e-9)


def test_decision_probabilities_clamps_negative_outputs():
    probs = decision_probabilities(np.array([[-0.5, 1.0, 1.0], [-1.0, -2.0, 0.0]]))
    np.testing.assert_allclose(probs[0], [0.0, 0.5, 0.5])
    np.testing.assert_allclose(probs[1], [1 / 3, 1 / 3, 1 / 3])


@given(vector_pairs())
def test_win_probability_is_antisymmetric(pair):
    a, b = pair
    assert win_probability(a, b) + win_probability(b, a) == pytest.approx(1.0, abs=1e-12)


@given(st.integers(1, 8).flatmap(probability_vectors))
def test_self_comparison_is_one_half(p):
    assert win_probability(p, p) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_unit_vector_dominance(n):
    eye = np.eye(n)
    for i in range(n):
        for j in range(n):
            expected = 1.0 if i > j else (0.0 if i < j else 0.5)
            assert win_probability(eye[i], eye[j]) == pytest.approx(expected, abs=1e-12)


def _brute_force_win(a, b):
    total = 0.0
    for i, pa in enumerate(a):
        for j, pb in enumerate(b):
            total += pa * pb * (1.0 if i > j else 0.5 if i == j else 0.0)
    return total


def test_nontransitive_cycle(nontransitive):
    a1, a2, a3 = nontransitive
    assert win_probability(a1, a2) == pytest.approx(0.525, abs=1e-12)
    assert win_probability(a2, a3) == pytest.approx(0.55, abs=1e-12)
    assert win_probability(a3, a1) == pytest.approx(0.55, abs=1e-12)
    for a in nontransitive:
        for b in nontransitive:
            assert win_probability(a, b) == pytest.approx(_brute_force_win(a, b), abs=1e-12)


def test_win_probability_length_mismatch():
    with pytest.raises(ValueError, match="tier count mismatch"):
        win_probability(np.array([0.5, 0.5]), np.array([1.0, 0.0, 0.0]))


def test_superiority_scores_examples(nontransitive):
    a1, a2, _ = nontransitive
    np.testing.assert_allclose(superiority_scores([a1, a1]), [0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(superiority_scores([a1, a2]), [0.525, 0.475], atol=1e-12)
    with pytest.raises(ValueError, match="need at least two actions"):
        superiority_scores([a1])


@given(vector_sets())
def test_superiority_scores_sum_to_half_k(vectors):
    scores = superiority_scores(vectors)
    assert scores.sum() == pytest.approx(len(vectors) / 2, abs=1e-9)
    assert np.all((scores >= -1e-12) & (scores <= 1 + 1e-12))


@given(vector_sets())
def test_win_matrix_matches_pairwise(vectors):
    wins = win_matrix(vectors)
    for i, a in enumerate(vectors):
        for j, b in enumerate(vectors):
            assert wins[i, j] == pytest.approx(win_probability(a, b), abs=1e-12)


# --- ordinal update ---------------------------------------------------------

def test_ordinal_update_examples():
    np.testing.assert_allclose(
        ordinal_update(np.array([5.0, 5.0]), 2, np.array([3.0, 3.0]), 1.0, 0.0, False), [0.0, 1.0]
    )
    d = np.array([0.3, 0.7])
    np.testing.assert_array_equal(ordinal_update(d, 1, np.array([1.0, 1.0]), 0.0, 0.9, False), d)
    np.testing.assert_allclose(
        ordinal_update(np.zeros(2), 1, np.array([0.0, 1.0]), 0.5, 0.9, False), [0.5, 0.45]
    )


def test_ordinal_update_drops_continuation_at_terminal():
    np.testing.assert_allclose(
        ordinal_update(np.zeros(3), 3, np.array([9.0, 9.0, 9.0]), 1.0, 0.9, True), [0.0, 0.0, 1.0]
    )


def test_ordinal_update_validation():
    with pytest.raises(ValueError):
        ordinal_update(np.zeros(2), 1, np.zeros(2), 1.5, 0.9, False)
    with pytest.raises(ValueError):
        ordinal_update(np.zeros(2), 1, np.zeros(2), 0.5, 1.0, False)
    with pytest.raises(ValueError, match="tier count mismatch"):
        ordinal_update(np.zeros(2), 1, np.zeros(3), 0.5, 0.9, False)
    with pytest.raises(ValueError):
        ordinal_update(np.zeros(2), 3, np.zeros(2), 0.5, 0.9, False)


@given(
    st.lists(st.floats(0.0, 100.0), min_size=3, max_size=3),
    st.lists(st.floats(0.0, 100.0), min_size=3, max_size=3),
    st.integers(1, 3),
    st.floats(0.01, 1.0),
    st.floats(0.0, 0.99),
    st.booleans(),
)
def test_ordinal_update_stays_nonnegative(d, d_next, tier, alpha, gamma, terminal):
    updated = ordinal_update(np.array(d), tier, np.array(d_next), alpha, gamma, terminal)
    assert np.all(updated >= 0.0)


def test_ordinal_update_contracts_to_fixed_target():
    d = np.array([4.0, 0.0])
    d_next = np.array([1.0, 1.0])
    target = np.array([1.9, 0.9])
    errors = []
    for _ in range(20):
        d = ordinal_update(d, 1, d_next, 0.25, 0.9, False)
        errors.append(np.abs(d - target).max())
    ratios = np.array(errors[1:]) / np.array(errors[:-1])
    np.testing.assert_allclose(ratios, 0.75, atol=1e-9)


def test_monotone_transform_leaves_tiers_unchanged():
    rewards = [-1.0, 0.0, 3.0]
    base = tier_map_from_rewards(rewards)
    transformed = tier_map_from_rewards([np.exp(r) * 7 + 2 for r in rewards])
    for r in rewards:
        assert to_ordinal(base, r) == to_ordinal(transformed, np.exp(r) * 7 + 2)
    cr = change_rewards(rewards)
    changed = tier_map_from_rewards(cr.values())
    assert [to_ordinal(changed, cr[r]) for r in rewards] == [1, 2, 3]


# --- action selection -------------------------------------------------------

def test_greedy_action_examples(rng):
    assert greedy_action([0.4, 0.6], rng) == 1
    assert greedy_action([0.525, 0.475, 0.5], rng) == 0
    with pytest.raises(ValueError):
        greedy_action([], rng)


def test_greedy_action_breaks_ties_uniformly(rng):
    picks = [greedy_action([0.5, 0.5], rng) for _ in range(4000)]
    assert 0.45 < np.mean(picks) < 0.55


def test_epsilon_greedy_action(rng):
    assert all(epsilon_greedy_action([0.0, 1.0], 0.0, rng) == 1 for _ in range(100))
    with pytest.raises(ValueError):
        epsilon_greedy_action([0.0, 1.0], 1.5, rng)


def test_epsilon_one_is_uniform(rng):
    counts = np.bincount([epsilon_greedy_action([0.0, 1.0, 2.0, 3.0], 1.0, rng) for _ in range(20000)],
                         minlength=4)
    expected = 20000 / 4
    chi_square = ((counts - expected) ** 2 / expected).sum()
    assert chi_square < 16.27  # df = 3, p = 0.001


def test_epsilon_half_prefers_best(rng):
    picks = np.array([epsilon_greedy_action([1.0, 0.0], 0.5, rng) for _ in range(100000)])
    assert np.mean(picks == 0) == pytest.approx(0.75, abs=0.01)


def test_epsilon_schedule():
    schedule = EpsilonSchedule(total_episodes=400)
    assert epsilon_at(schedule, 0) == 1.0
    assert epsilon_at(schedule, 100) == pytest.approx(0.5)
    assert epsilon_at(schedule, 200) == 0.0
    assert epsilon_at(schedule, 399) == 0.0
    floored = EpsilonSchedule(total_episodes=10, floor=0.1)
    values = [epsilon_at(floored, e) for e in range(10)]
    assert values == sorted(values, reverse=True)
    assert values[5:] == [0.1] * 5
    with pytest.raises(ValueError):
        EpsilonSchedule(total_episodes=0)


# --- decision rules ---------------------------------------------------------

FOUR_ACTIONS = [
    np.array([0.1, 0.4, 0.1, 0.4]),
    np.array([0.4, 0.0, 0.1, 0.5]),
    np.array([0.0, 0.0, 1.0, 0.0]),
    np.array([0.0, 0.6, 0.0, 0.4]),
]


@pytest.mark.parametrize(
    "rule, expected",
    [
        (DecisionRule.MAXIMUM, 2),
        (DecisionRule.CONTINGENT, 1),
        (DecisionRule.RUNOFF, 1),
        (DecisionRule.COPELAND, 2),
    ],
)
def test_decision_rules(rule, expected, rng):
    assert decide(FOUR_ACTIONS, rule, rng) == expected


@pytest.mark.parametrize("rule", list(DecisionRule))
def test_decision_rules_break_ties_randomly(rule, rng):
    same = [np.array([0.5, 0.5])] * 3
    picks = {decide(same, rule, rng) for _ in range(200)}
    assert picks == {0, 1, 2}


def test_superiority_margin():
    assert superiority_margin([0.525, 0.475]) == pytest.approx(0.05)
    assert superiority_margin([0.5, 0.5, 0.5]) == 0.0
