# pylint: disable=missing-docstring
import numpy as np
import pytest

from morl import momdp
from morl.agents import GreedyPolicy, FixedPolicyAgent
from morl.environments import buildOriginal, build3st
from morl.momdp import SeededRng, Transition, rewardVector, sampleOutcome, runEpisode
from morl.shared import MorlError


def test_reward_vector_is_read_only():
    v = rewardVector([1, -2])
    assert v.dtype == np.float64
    with pytest.raises(ValueError):
        v[0] = 3.0


def test_is_terminal():
    assert momdp.isTerminal("$success")
    assert momdp.isTerminal("$failure")
    assert not momdp.isTerminal("A")


def test_action_index_by_name_and_initial():
    env = buildOriginal()
    assert env.actionIndex("A", "Direct") == 1
    assert env.actionIndex("B", "T") == 2


def test_unknown_action():
    env = buildOriginal()
    with pytest.raises(MorlError) as excinfo:
        env.actionIndex("A", "X")
    assert excinfo.value.code == "UNKNOWN_STATE_ACTION"


def test_unknown_state_action_pair():
    env = buildOriginal()
    with pytest.raises(MorlError) as excinfo:
        env.outcomesFor("Z", 0)
    assert excinfo.value.code == "UNKNOWN_STATE_ACTION"


def test_policy_identifier_follows_state_order():
    env = build3st()
    assert env.policyIdentifier({"A": 1, "B": 0, "C": 2}) == "DIT"


def test_mean_reward():
    env = buildOriginal()
    assert np.allclose(env.meanReward("A", 1), [0.0, -5.5])
    assert np.allclose(env.meanReward("B", 2), [0.85, 0.0])


def test_seeded_rng_is_reproducible():
    a = SeededRng(42)
    b = SeededRng(42)
    assert [a.uniform() for _ in range(10)] == [b.uniform() for _ in range(10)]


def test_trial_seed_is_base_plus_index():
    a = SeededRng.forTrial(5, 2)
    b = SeededRng(7)
    assert a.uniform() == b.uniform()


def test_spawned_streams_differ():
    children = SeededRng(3).spawn(2)
    assert children[0].uniform() != children[1].uniform()


def test_deterministic_outcome_ignores_draw():
    env = buildOriginal()
    rng = SeededRng(0)
    for _ in range(20):
        outcome = sampleOutcome(env, "A", 0, rng)
        assert outcome.next == "B"
        assert list(outcome.reward) == [0.0, -12.0]


def test_sample_outcome_frequencies():
    env = buildOriginal()
    rng = SeededRng(1)
    draws = 10000
    successes = sum(1 for _ in range(draws) if sampleOutcome(env, "A", 1, rng).next == "B")
    assert abs(successes / draws - 0.9) < 0.02


def test_run_episode_indirect_indirect():
    env = buildOriginal()
    agent = FixedPolicyAgent(env, GreedyPolicy.fromIdentifier(env, "II"))
    transcript = runEpisode(env, agent, SeededRng(0))
    assert len(transcript) == 2
    assert list(transcript.totalReturn) == [1.0, -22.0]
    assert transcript.terminatedBy == momdp.SUCCESS
    first = transcript.steps[0]
    assert isinstance(first, Transition)
    assert (first.state, first.action, first.nextState) == ("A", 0, "B")


def test_run_episode_teleport_ends_in_terminal():
    env = buildOriginal()
    agent = FixedPolicyAgent(env, GreedyPolicy.fromIdentifier(env, "TT"))
    rng = SeededRng(9)
    for _ in range(50):
        transcript = runEpisode(env, agent, rng)
        assert 1 <= len(transcript) <= env.horizon
        assert transcript.terminatedBy in (momdp.SUCCESS, momdp.FAILURE)
        if transcript.terminatedBy == momdp.SUCCESS:
            assert list(transcript.totalReturn) == [1.0, 0.0]
        else:
            assert list(transcript.totalReturn) == [0.0, 0.0]


def test_run_episode_three_states():
    env = build3st()
    agent = FixedPolicyAgent(env, GreedyPolicy.fromIdentifier(env, "DII"))
    rng = SeededRng(4)
    for _ in range(50):
        transcript = runEpisode(env, agent, rng)
        assert [t.state for t in transcript.steps][:2] == ["A", "C"]
        assert len(transcript) <= env.horizon


class FixedDraw:
    """Stand-in rng whose uniform draw is always the same."""

    def __init__(self, value):
        self.value = value

    def uniform(self):
        return self.value


def test_teleport_draw_below_success_probability():
    outcome = sampleOutcome(buildOriginal(), "B", 2, FixedDraw(0.5))
    assert outcome.next == "$success"
    assert list(outcome.reward) == [1.0, 0.0]


def test_forced_teleport_failure():
    env = buildOriginal()
    agent = FixedPolicyAgent(env, GreedyPolicy.fromIdentifier(env, "TT"))
    transcript = runEpisode(env, agent, FixedDraw(0.95))
    assert len(transcript) == 1
    assert list(transcript.totalReturn) == [0.0, 0.0]
    assert transcript.terminatedBy == momdp.FAILURE


def test_horizon_caps_episode():
    env = momdp.EnvironmentSpec("loop", ["S"], {"S": [("Stay", "S")]},
                                {("S", 0): [(1.0, "S", (0, -1))]}, "S", 1, ["a", "b"])
    agent = FixedPolicyAgent(env, GreedyPolicy.fromIdentifier(env, "S"))
    transcript = runEpisode(env, agent, SeededRng(0))
    assert len(transcript) == 1
    assert transcript.terminatedBy == momdp.HORIZON
