"""MOMDP data model, seeded sampling of environment dynamics and the episode loop."""
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

from collections import namedtuple
import numpy as np
from . import config
from .shared import MorlError

TERMINAL_SUCCESS = config.SUCCESS_SENTINEL
TERMINAL_FAILURE = config.FAILURE_SENTINEL
TERMINALS = (TERMINAL_SUCCESS, TERMINAL_FAILURE)

# Values of EpisodeTranscript.terminatedBy
SUCCESS = "SUCCESS"
FAILURE = "FAILURE"
HORIZON = "HORIZON"

# One entry of the outcome distribution of a (state, action) pair
Outcome = namedtuple("Outcome", ["probability", "next", "reward"])

# One executed step; also what agents observe
Transition = namedtuple("Transition", ["state", "action", "reward", "nextState"])

# Action identifier plus its one-letter initial
Action = namedtuple("Action", ["name", "initial"])


def rewardVector(values):
    """Return values as a read-only float64 reward vector."""
    vector = np.array(values, dtype=np.float64)
    vector.setflags(write=False)
    return vector


def zeroVector(n):
    """Return an all-zero (writable) reward vector with n objectives."""
    return np.zeros(n, dtype=np.float64)


def isTerminal(nextState):
    """Return True if nextState is one of the terminal sentinels."""
    return nextState in TERMINALS


class EnvironmentSpec:
    """Complete definition of a finite-horizon stochastic MOMDP.

    - states: ordered non-terminal state identifiers (this order fixes policy names)
    - actions: dict state -> list of Action
    - outcomes: dict (state, actionIndex) -> list of Outcome
    - startState: single start state
    - horizon: maximum number of steps per episode
    - objectives: list of objective names

    The constructor does not check any invariants; see specvalidator.
    """

    def __init__(self, name, states, actions, outcomes, startState, horizon, objectives):
        """Initialise an EnvironmentSpec."""
        self.name = name
        self.states = tuple(states)
        self.actions = {s: tuple(Action(*a) for a in acts) for s, acts in actions.items()}
        self.outcomes = {}
        for key, outs in outcomes.items():
            self.outcomes[key] = tuple(
                Outcome(float(o[0]), o[1], rewardVector(o[2])) for o in outs)
        self.startState = startState
        self.horizon = horizon
        self.objectives = tuple(objectives)

    def objectiveCount(self):
        """Return number of objectives."""
        return len(self.objectives)

    def actionCount(self, state):
        """Return number of actions available in state."""
        return len(self.actions.get(state, ()))

    def actionIndex(self, state, nameOrInitial):
        """Return index of action in state, looked up by name or initial."""
        for i, action in enumerate(self.actions.get(state, ())):
            if nameOrInitial in (action.name, action.initial):
                return i
        raise MorlError("UNKNOWN_STATE_ACTION",
                        "no action '" + str(nameOrInitial) + "' in state '" + str(state) + "'")

    def outcomesFor(self, state, action):
        """Return the outcome list of (state, action index)."""
        try:
            return self.outcomes[(state, action)]
        except KeyError:
            raise MorlError("UNKNOWN_STATE_ACTION",
                            "(" + str(state) + ", " + str(action) + ") not in spec '"
                            + str(self.name) + "'")

    def policyIdentifier(self, actionIndices):
        """Concatenate action initials over states in canonical order.

        actionIndices: dict state -> action index.
        """
        return "".join(self.actions[s][actionIndices[s]].initial for s in self.states)

    def meanReward(self, state, action):
        """Expected immediate reward of (state, action index)."""
        mean = zeroVector(self.objectiveCount())
        for outcome in self.outcomesFor(state, action):
            mean += outcome.probability * outcome.reward
        return mean

    def toDict(self):
        """Return the spec as a dictionary following the environment file schema."""
        dynamics = []
        for s in self.states:
            for i, action in enumerate(self.actions.get(s, ())):
                outs = [{'p': o.probability, 'next': o.next,
                         'reward': [float(r) for r in o.reward]}
                        for o in self.outcomes.get((s, i), ())]
                dynamics.append({'state': s, 'action': action.name,
                                 'initial': action.initial, 'outcomes': outs})
        return {'name': self.name,
                'states': list(self.states),
                'start_state': self.startState,
                'horizon': self.horizon,
                'objectives': list(self.objectives),
                'dynamics': dynamics}

    def __eq__(self, other):
        if not isinstance(other, EnvironmentSpec):
            return NotImplemented
        return self.toDict() == other.toDict()

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __repr__(self):
        return "EnvironmentSpec(" + repr(self.name) + ")"


class EpisodeTranscript:
    """Record of one episode: steps, undiscounted total return and how it ended."""

    def __init__(self, steps, totalReturn, terminatedBy):
        """Initialise an EpisodeTranscript."""
        self.steps = steps
        self.totalReturn = totalReturn
        self.terminatedBy = terminatedBy

    def __len__(self):
        return len(self.steps)


class SeededRng:
    """Single-owner random stream, bit-exact for a given seed.

    Wraps numpy's PCG64 generator; seed is reduced to a 64 bit unsigned integer.
    """

    def __init__(self, seed, seedSequence=None):
        """Initialise from an integer seed (or a numpy SeedSequence)."""
        self.seed = int(seed) % (2 ** 64)
        if seedSequence is None:
            seedSequence = np.random.SeedSequence(self.seed)
        self.seedSequence = seedSequence
        self.generator = np.random.Generator(np.random.PCG64(seedSequence))

    @classmethod
    def forTrial(cls, baseSeed, trialIndex):
        """Return the stream of trial trialIndex (seed = baseSeed + trialIndex)."""
        return cls(int(baseSeed) + int(trialIndex))

    def spawn(self, n):
        """Return n independent child streams."""
        return [SeededRng(self.seed, child) for child in self.seedSequence.spawn(n)]

    def uniform(self):
        """Draw a float in [0, 1)."""
        return self.generator.random()


def sampleOutcome(spec, state, action, rng):
    """Draw one Outcome of (state, action) by inverse CDF in declaration order."""
    outcomes = spec.outcomesFor(state, action)
    u = rng.uniform()
    cumulative = 0.0
    for outcome in outcomes:
        cumulative += outcome.probability
        if u < cumulative:
            return outcome
    # Only reached when rounding leaves the last cumulative value below u
    for outcome in reversed(outcomes):
        if outcome.probability > 0.0:
            return outcome
    return outcomes[-1]


def runEpisode(spec, agent, rng):
    """Drive agent through one episode of spec and return its transcript.

    The agent contract is beginEpisode(), select(state, rng),
    observe(transition, rng) -> next action (ignored after the last step)
    and endEpisode().
    """
    agent.beginEpisode()
    state = spec.startState
    action = agent.select(state, rng)
    totalReturn = zeroVector(spec.objectiveCount())
    steps = []
    terminatedBy = HORIZON

    while True:
        outcome = sampleOutcome(spec, state, action, rng)
        transition = Transition(state, action, outcome.reward, outcome.next)
        steps.append(transition)
        totalReturn = totalReturn + outcome.reward
        nextAction = agent.observe(transition, rng)

        if outcome.next == TERMINAL_SUCCESS:
            terminatedBy = SUCCESS
            break
        if outcome.next == TERMINAL_FAILURE:
            terminatedBy = FAILURE
            break
        if len(steps) >= spec.horizon:
            break
        state = outcome.next
        action = nextAction

    agent.endEpisode()
    return EpisodeTranscript(steps, totalReturn, terminatedBy)
