# pylint: disable=missing-docstring
import csv
import io
import json
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morl.agents import GreedyPolicy
from morl.environments import CATALOG, resolveEnvironment
from morl.momdp import EnvironmentSpec, SeededRng
from morl.oracle import (enumeratePolicies, esrValue, evaluateAll, exactExpectedReturn,
                         monteCarloReturn, oracleTable, serOptimal, serOptimalSet,
                         writeOracleCsv, writeOracleJson)
from morl.utility import UtilityOrdering

TOLERANCE = 1e-9

# Mean return of every deterministic policy of the original environment
ORIGINAL_MEANS = {
    "II": (1.0, -22.0),
    "ID": (0.9, -19.9),
    "IT": (0.85, -12.0),
    "DI": (0.9, -14.5),
    "DD": (0.81, -12.61),
    "DT": (0.765, -5.5),
    "TI": (0.85, -8.5),
    "TD": (0.765, -6.715),
    "TT": (0.7225, 0.0),
}

ID_MEANS = {
    "II": (1.0, -22.0),
    "ID": (0.9, -15.5),
    "IT": (0.85, -10.0),
    "DI": (0.9, -18.7),
    "DD": (0.81, -12.85),
    "DT": (0.765, -7.9),
    "TI": (0.85, -10.2),
    "TD": (0.765, -4.675),
    "TT": (0.7225, 0.0),
}


def meanOf(env, identifier):
    return exactExpectedReturn(env, GreedyPolicy.fromIdentifier(env, identifier)).meanReturn


def test_policy_counts():
    assert len(enumeratePolicies(resolveEnvironment("original"))) == 9
    assert len(enumeratePolicies(resolveEnvironment("3st"))) == 27


def test_single_state_single_action():
    env = EnvironmentSpec("one", ["S"], {"S": [("Go", "G")]},
                          {("S", 0): [(1.0, "$success", (1, 0))]}, "S", 1, ["a", "b"])
    policies = enumeratePolicies(env)
    assert [p.identifier for p in policies] == ["G"]
    assert np.allclose(exactExpectedReturn(env, policies[0]).meanReturn, [1.0, 0.0])


@pytest.mark.parametrize("identifier", sorted(ORIGINAL_MEANS))
def test_original_means(identifier):
    env = resolveEnvironment("original")
    assert np.allclose(meanOf(env, identifier), ORIGINAL_MEANS[identifier],
                       rtol=0.0, atol=TOLERANCE)


@pytest.mark.parametrize("identifier", sorted(ID_MEANS))
def test_id_means(identifier):
    env = resolveEnvironment("id")
    assert np.allclose(meanOf(env, identifier), ID_MEANS[identifier], rtol=0.0, atol=TOLERANCE)


def test_mr_means():
    env = resolveEnvironment("mr")
    assert np.allclose(meanOf(env, "DI"), [0.8, -14.5], atol=TOLERANCE)
    assert np.allclose(meanOf(env, "ID"), [0.8, -19.9], atol=TOLERANCE)
    assert abs(meanOf(env, "TT")[0] - 0.445) <= TOLERANCE


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_trajectory_probabilities_sum_to_one(name):
    env = CATALOG[name]()
    for evaluation in evaluateAll(env):
        assert abs(evaluation.totalProbability() - 1.0) <= 1e-12
        mean = sum(t.probability * t.totalReturn for t in evaluation.trajectories)
        assert np.allclose(mean, evaluation.meanReturn, rtol=0.0, atol=1e-12)


def test_return_spread():
    env = resolveEnvironment("original")
    spread = {e.policy.identifier: e.returnStd() for e in evaluateAll(env)}
    assert np.allclose(spread["DI"], [0.3, 4.5], atol=TOLERANCE)
    assert np.allclose(spread["II"], [0.0, 0.0], atol=TOLERANCE)


def test_ser_optimal_original():
    env = resolveEnvironment("original")
    policy, mean = serOptimal(env, UtilityOrdering([0.88]))
    assert policy.identifier == "DI"
    assert np.allclose(mean, [0.9, -14.5], atol=TOLERANCE)


def test_ser_optimal_id():
    env = resolveEnvironment("id")
    policy, mean = serOptimal(env, UtilityOrdering([0.88]))
    assert policy.identifier == "ID"
    assert np.allclose(mean, [0.9, -15.5], atol=TOLERANCE)


def test_ser_optimal_mr():
    policy, _ = serOptimal(resolveEnvironment("mr"), UtilityOrdering([0.76]))
    assert policy.identifier == "DI"


def test_ser_optimal_three_states():
    env = resolveEnvironment("3st")
    ordering = UtilityOrdering([0.76])
    policy, mean = serOptimal(env, ordering)
    assert policy.identifier == "DII"
    assert np.allclose(mean, [0.8, -14.8], atol=TOLERANCE)
    assert [p.identifier for p in serOptimalSet(env, ordering)] == ["DII", "DID", "DIT"]


def test_ser_optimal_delayed_failure():
    env = resolveEnvironment("3st-delayed")
    ordering = UtilityOrdering([0.76])
    _, mean = serOptimal(env, ordering)
    assert np.allclose(mean, [0.8, -14.5], atol=TOLERANCE)
    assert {p.identifier for p in serOptimalSet(env, ordering)} == {"DII", "DID", "DIT"}


def test_optimal_set_of_unique_optimum():
    env = resolveEnvironment("original")
    assert [p.identifier for p in serOptimalSet(env, UtilityOrdering([0.88]))] == ["DI"]


def test_ser_optimal_ignores_enumeration_order():
    env = resolveEnvironment("original")
    ordering = UtilityOrdering([0.88])
    evaluations = list(reversed(evaluateAll(env)))
    policy, _ = serOptimal(env, ordering, evaluations)
    assert policy.identifier == "DI"


def test_esr_of_deterministic_policy():
    env = resolveEnvironment("original")
    policy = GreedyPolicy.fromIdentifier(env, "II")
    assert esrValue(env, policy, lambda r: r[0] * 10 + r[1] ** 2) == 10 + 22 ** 2


def test_esr_linear():
    env = resolveEnvironment("original")
    weights = np.array([1.0, 0.0])
    di = esrValue(env, GreedyPolicy.fromIdentifier(env, "DI"), lambda r: float(weights @ r))
    dd = esrValue(env, GreedyPolicy.fromIdentifier(env, "DD"), lambda r: float(weights @ r))
    assert abs(di - 0.9) <= TOLERANCE
    assert abs(dd - 0.81) <= TOLERANCE


@settings(max_examples=50)
@given(st.sampled_from(sorted(CATALOG)), st.data(),
       st.floats(min_value=-5, max_value=5), st.floats(min_value=-5, max_value=5))
def test_esr_equals_ser_for_linear_utility(name, data, w1, w2):
    env = CATALOG[name]()
    policy = data.draw(st.sampled_from(enumeratePolicies(env)))
    weights = np.array([w1, w2])
    esr = esrValue(env, policy, lambda r: float(weights @ r))
    ser = float(weights @ exactExpectedReturn(env, policy).meanReturn)
    assert abs(esr - ser) <= 1e-12 * max(1.0, abs(ser)) * 10


# Short run, loose bound; the 3-sigma check runs at 10**6 episodes below
@pytest.mark.parametrize("identifier", ["II", "DI", "TT"])
def test_monte_carlo_agrees_with_oracle(identifier):
    env = resolveEnvironment("original")
    policy = GreedyPolicy.fromIdentifier(env, identifier)
    mean, stderr = monteCarloReturn(env, policy, 20000, SeededRng(17))
    exact = exactExpectedReturn(env, policy).meanReturn
    assert np.all(np.abs(mean - exact) <= 5 * stderr + 1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(CATALOG))
def test_monte_carlo_million_episodes(name):
    env = CATALOG[name]()
    rng = SeededRng(1)
    for policy in enumeratePolicies(env)[:3]:
        mean, stderr = monteCarloReturn(env, policy, 10 ** 6, rng)
        exact = exactExpectedReturn(env, policy).meanReturn
        assert np.all(np.abs(mean - exact) <= 3 * stderr + 1e-9)


def test_oracle_csv():
    env = resolveEnvironment("original")
    ordering = UtilityOrdering([0.88])
    out = io.StringIO()
    writeOracleCsv(oracleTable(env, ordering), env.objectiveCount(), out)
    rows = list(csv.reader(io.StringIO(out.getvalue())))
    assert rows[0] == ["policy", "mean_obj1", "mean_obj2", "meets_threshold", "is_ser_optimal"]
    assert [r[0] for r in rows[1:]] == ["II", "ID", "IT", "DI", "DD", "DT", "TI", "TD", "TT"]
    byPolicy = {r[0]: r for r in rows[1:]}
    for identifier, (obj1, obj2) in ORIGINAL_MEANS.items():
        assert abs(float(byPolicy[identifier][1]) - obj1) <= TOLERANCE
        assert abs(float(byPolicy[identifier][2]) - obj2) <= TOLERANCE
    assert byPolicy["DI"][3:] == ["true", "true"]
    assert byPolicy["II"][3:] == ["true", "false"]
    assert byPolicy["TT"][3:] == ["false", "false"]
    assert "\r" not in out.getvalue()


def test_oracle_json():
    env = resolveEnvironment("id")
    ordering = UtilityOrdering([0.88])
    out = io.StringIO()
    writeOracleJson(env, ordering, oracleTable(env, ordering), out)
    document = json.loads(out.getvalue())
    assert document["environment"] == "id"
    assert [p["policy"] for p in document["policies"] if p["is_ser_optimal"]] == ["ID"]
