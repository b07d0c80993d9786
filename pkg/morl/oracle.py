"""Exact evaluation of deterministic policies by exhaustive trajectory expansion."""
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
#

import csv
import json
from collections import namedtuple
import numpy as np
from . import config
from . import momdp
from .agents import allDeterministicPolicies, FixedPolicyAgent
from .momdp import isTerminal, zeroVector
from .shared import formatFloat
from .utility import tloArgbest, tloKey, meetsThresholds

# One leaf of the outcome tree
Trajectory = namedtuple("Trajectory", ["probability", "totalReturn"])


class PolicyEvaluation:
    """Exact outcome distribution and mean return of one policy."""

    def __init__(self, policy, meanReturn, trajectories):
        """Initialise a PolicyEvaluation."""
        self.policy = policy
        self.meanReturn = meanReturn
        self.trajectories = trajectories

    def totalProbability(self):
        """Return the summed probability of all trajectories."""
        return sum(t.probability for t in self.trajectories)

    def returnStd(self):
        """Return the componentwise standard deviation of the episode return."""
        variance = sum(t.probability * (t.totalReturn - self.meanReturn) ** 2
                       for t in self.trajectories)
        return np.sqrt(variance)


def enumeratePolicies(env):
    """Return all deterministic policies of env in lexicographic action-index order."""
    return allDeterministicPolicies(env)


def exactExpectedReturn(env, policy):
    """Expand the outcome tree of policy to the horizon (gamma = 1)."""
    trajectories = []

    def expand(state, probability, totalReturn, depth):
        for outcome in env.outcomesFor(state, policy.action(state)):
            if outcome.probability == 0.0:
                continue
            p = probability * outcome.probability
            r = totalReturn + outcome.reward
            if isTerminal(outcome.next) or depth + 1 >= env.horizon:
                trajectories.append(Trajectory(p, r))
            else:
                expand(outcome.next, p, r, depth + 1)

    expand(env.startState, 1.0, zeroVector(env.objectiveCount()), 0)

    meanReturn = zeroVector(env.objectiveCount())
    for t in trajectories:
        meanReturn += t.probability * t.totalReturn
    return PolicyEvaluation(policy, meanReturn, trajectories)


def evaluateAll(env):
    """Return a PolicyEvaluation for every policy, in enumeration order."""
    return [exactExpectedReturn(env, p) for p in enumeratePolicies(env)]


def serOptimal(env, ordering, evaluations=None):
    """Return (policy, mean return) of the TLO-best policy; ties go to enumeration order."""
    if evaluations is None:
        evaluations = evaluateAll(env)
    best = evaluations[tloArgbest([e.meanReturn for e in evaluations], ordering)]
    return best.policy, best.meanReturn


def serOptimalSet(env, ordering, evaluations=None, tolerance=config.ORACLE_TOLERANCE):
    """Return every policy whose TLO key equals the optimum's within tolerance."""
    if evaluations is None:
        evaluations = evaluateAll(env)
    _, bestReturn = serOptimal(env, ordering, evaluations)
    bestKey = np.array(tloKey(bestReturn, ordering))
    return [e.policy for e in evaluations
            if np.all(np.abs(np.array(tloKey(e.meanReturn, ordering)) - bestKey) <= tolerance)]


def esrValue(env, policy, scalarisation):
    """Expected scalarised return: sum of probability * scalarisation(return)."""
    evaluation = exactExpectedReturn(env, policy)
    return sum(t.probability * scalarisation(t.totalReturn) for t in evaluation.trajectories)


def monteCarloReturn(env, policy, episodes, rng):
    """Return (mean, standard error) of the return of policy over sampled episodes."""
    agent = FixedPolicyAgent(env, policy)
    returns = np.empty((episodes, env.objectiveCount()), dtype=np.float64)
    for i in range(episodes):
        returns[i] = momdp.runEpisode(env, agent, rng).totalReturn
    mean = returns.mean(axis=0)
    if episodes < 2:
        return mean, zeroVector(env.objectiveCount())
    return mean, returns.std(axis=0, ddof=1) / np.sqrt(episodes)


# Oracle table

def oracleTable(env, ordering):
    """Return one row per policy: identifier, mean return, threshold and optimality flags."""
    evaluations = evaluateAll(env)
    optimal = {p.identifier for p in serOptimalSet(env, ordering, evaluations)}
    rows = []
    for e in evaluations:
        rows.append({'policy': e.policy.identifier,
                     'mean': [float(v) for v in e.meanReturn],
                     'meets_threshold': meetsThresholds(e.meanReturn, ordering),
                     'is_ser_optimal': e.policy.identifier in optimal})
    return rows


def meanColumns(objectiveCount):
    """Return column names mean_obj1 ... mean_objN."""
    return ["mean_obj" + str(i + 1) for i in range(objectiveCount)]


def _flag(value):
    return "true" if value else "false"


def writeOracleCsv(rows, objectiveCount, stream):
    """Write the oracle table as CSV to stream."""
    writer = csv.writer(stream, lineterminator=config.CSV_LINE_TERMINATOR)
    writer.writerow(["policy"] + meanColumns(objectiveCount)
                    + ["meets_threshold", "is_ser_optimal"])
    for row in rows:
        writer.writerow([row['policy']] + [formatFloat(v) for v in row['mean']]
                        + [_flag(row['meets_threshold']), _flag(row['is_ser_optimal'])])


def writeOracleJson(env, ordering, rows, stream):
    """Write the oracle table as a JSON document to stream."""
    document = {'environment': env.name,
                'thresholds': ordering.toList(),
                'policies': rows}
    stream.write(json.dumps(document, indent=2))
    stream.write("\n")
