"""Value-based multi-objective agents.

Three learners share one contract (beginEpisode, select, observe,
endEpisode, greedyPolicy):

- BaselineAgent: MO Q(lambda) on states augmented with the accumulated
  expected reward of the episode.
- MossAgent: MO Q(lambda) whose action values mix local Q-values with global
  per-episode return statistics.
- OptionsAgent: MO Q(lambda) over policy options, one complete deterministic
  policy chosen per episode.

Each algorithm is written as functions on its tables (baselineStep,
mossUpdateStatistics, mossStep, optionsEpisode); the agent classes wire them
to the episode loop.
"""
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

import itertools
from . import config
from . import momdp
from .momdp import isTerminal, zeroVector
from .shared import MorlError, ConfigError
from .utility import UtilityOrdering, tloArgbest, softmaxT

BASELINE = "baseline"
MOSS = "moss"
OPTIONS = "options"


class Hyperparameters:
    """Learning rate, discount and trace decay in effect for one episode."""

    def __init__(self, alpha=config.DEFAULT_ALPHA, gamma=config.DEFAULT_GAMMA,
                 lam=config.DEFAULT_LAMBDA):
        """Initialise Hyperparameters."""
        for name, value in (("alpha", alpha), ("gamma", gamma), ("lambda", lam)):
            if not 0.0 <= value <= 1.0:
                raise ConfigError(name + " must lie in [0, 1], got " + repr(value))
        self.alpha = float(alpha)
        self.gamma = float(gamma)
        self.lam = float(lam)


class GreedyPolicy:
    """Deterministic policy: one action index per non-terminal state."""

    def __init__(self, env, actions):
        """Initialise from a dict state -> action index."""
        self.actions = {s: actions[s] for s in env.states}
        self.identifier = env.policyIdentifier(self.actions)

    @classmethod
    def fromIdentifier(cls, env, identifier):
        """Return the policy named by a string of action initials."""
        if len(identifier) != len(env.states):
            raise MorlError("UNKNOWN_POLICY", "'" + identifier + "' does not name a policy of '"
                            + str(env.name) + "'")
        actions = {s: env.actionIndex(s, initial) for s, initial in zip(env.states, identifier)}
        return cls(env, actions)

    def action(self, state):
        """Return the action index chosen in state."""
        return self.actions[state]

    def __eq__(self, other):
        if not isinstance(other, GreedyPolicy):
            return NotImplemented
        return self.identifier == other.identifier and self.actions == other.actions

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self.identifier)

    def __repr__(self):
        return "GreedyPolicy(" + self.identifier + ")"


def allDeterministicPolicies(env):
    """Return every deterministic policy of env in lexicographic action-index order."""
    ranges = [range(env.actionCount(s)) for s in env.states]
    return [GreedyPolicy(env, dict(zip(env.states, combo)))
            for combo in itertools.product(*ranges)]


def _lookup(table, key, n):
    value = table.get(key)
    if value is None:
        return zeroVector(n)
    return value


def _watkinsUpdate(Q, e, visited, delta, hyper, n, keepTraces):
    """Apply Q += alpha * delta * e to every traced entry, then decay or cut the traces."""
    e[visited] = 1.0
    step = hyper.alpha * delta
    for key, trace in e.items():
        Q[key] = _lookup(Q, key, n) + step * trace
    if keepTraces:
        decay = hyper.gamma * hyper.lam
        for key in e:
            e[key] *= decay
    else:
        e.clear()


def _uninitialised(name):
    return MorlError("UNINITIALIZED_EPISODE", name + " step called outside an episode")


# Baseline: accumulated expected reward

class BaselineTables:
    """Learned tables of the baseline agent.

    Q is keyed by (augmented key, action); an augmented key is
    (state, trajectory prefix), the prefix being the (state, action) pairs
    taken so far in the episode. I holds the estimated immediate reward per
    (state, action); P is the episode's sum of those estimates.
    """

    def __init__(self, env):
        """Initialise empty tables for env."""
        self.env = env
        self.n = env.objectiveCount()
        self.Q = {}
        self.I = {}
        self.e = {}
        self.P = zeroVector(self.n)
        self.currentKey = None

    def qValue(self, key, action):
        """Return Q(key, action), zero if never updated."""
        return _lookup(self.Q, (key, action), self.n)

    def immediate(self, state, action):
        """Return I(state, action), zero if never updated."""
        return _lookup(self.I, (state, action), self.n)

    def utilities(self, key, P):
        """Return U(a) = P + Q(key, a) for every action of key's state."""
        return [P + self.qValue(key, a) for a in range(self.env.actionCount(key[0]))]

    def augmentedKeys(self):
        """Return the set of augmented keys present in Q."""
        return {key for key, _ in self.Q}


def baselineBeginEpisode(tables):
    """Reset traces and P and return the start key."""
    tables.e.clear()
    tables.P = zeroVector(tables.n)
    tables.currentKey = (tables.env.startState, ())
    return tables.currentKey


def baselineStep(tables, transition, hyper, ordering, temperature, rng):
    """Learn from one transition and return the next (exploratory) action.

    Returns None when the transition ends in a terminal sentinel.
    """
    if tables.currentKey is None:
        raise _uninitialised("baseline")
    s, a, reward, nextState = transition
    keyT = tables.currentKey

    immediateKey = (s, a)
    estimate = tables.immediate(s, a)
    tables.I[immediateKey] = estimate + hyper.alpha * (reward - estimate)
    tables.P = tables.P + tables.I[immediateKey]

    if isTerminal(nextState):
        keyNext = None
        aStar = aPrime = None
        qNext = zeroVector(tables.n)
    else:
        keyNext = (nextState, keyT[1] + ((s, a),))
        utilities = tables.utilities(keyNext, tables.P)
        aStar = tloArgbest(utilities, ordering)
        aPrime = softmaxT(utilities, ordering, temperature, rng)
        qNext = tables.qValue(keyNext, aStar)

    delta = reward + hyper.gamma * qNext - tables.qValue(keyT, a)
    _watkinsUpdate(tables.Q, tables.e, (keyT, a), delta, hyper, tables.n,
                   aPrime is not None and aPrime == aStar)
    tables.currentKey = keyNext
    return aPrime


def baselineGreedyPolicy(tables, ordering):
    """Walk the reachable augmented keys greedily, without learning or exploring."""
    env = tables.env
    chosen = {}
    startKey = (env.startState, ())
    seen = {startKey}
    stack = [(startKey, zeroVector(tables.n), 1)]

    while stack:
        key, P, depth = stack.pop()
        state = key[0]
        action = tloArgbest(tables.utilities(key, P), ordering)
        chosen.setdefault(state, action)
        if depth >= env.horizon:
            continue
        nextP = P + tables.immediate(state, action)
        successors = []
        for outcome in env.outcomesFor(state, action):
            if outcome.probability > 0.0 and not isTerminal(outcome.next):
                nextKey = (outcome.next, key[1] + ((state, action),))
                if nextKey not in seen:
                    seen.add(nextKey)
                    successors.append((nextKey, nextP, depth + 1))
        # Visit successors in declaration order
        stack.extend(reversed(successors))

    return GreedyPolicy(env, {s: chosen.get(s, 0) for s in env.states})


# MOSS: global statistics

class MossTables:
    """Learned tables of the MOSS agent.

    Q is keyed by (base state, action). Ps holds the expected accumulated
    reward on reaching each state, vs the number of episodes visiting it, Es
    the mean return of those episodes; Epi and vpi are the mean return and
    count over all episodes. P accumulates actual rewards within the episode.
    """

    def __init__(self, env):
        """Initialise empty tables for env."""
        self.env = env
        self.n = env.objectiveCount()
        self.Q = {}
        self.Ps = {}
        self.vs = {}
        self.Es = {}
        self.visited = set()
        self.Epi = zeroVector(self.n)
        self.vpi = 0
        self.e = {}
        self.P = zeroVector(self.n)
        self.currentState = None

    def qValue(self, state, action):
        """Return Q(state, action), zero if never updated."""
        return _lookup(self.Q, (state, action), self.n)

    def visitProbability(self, state):
        """Return p(s) = v(s) / v_pi."""
        if self.vpi == 0:
            raise MorlError("ZERO_EPISODES", "no episodes counted yet")
        return self.vs.get(state, 0) / self.vpi

    def complementReturn(self, state):
        """Estimated mean return of the episodes in which state is not visited."""
        p = self.visitProbability(state)
        return (self.Epi - p * _lookup(self.Es, state, self.n)) / (1.0 - p)

    def utilities(self, state):
        """Return U(a) for every action in state from the current statistics."""
        Ps = _lookup(self.Ps, state, self.n)
        actions = range(self.env.actionCount(state))
        if self.vpi == 0 or self.vs.get(state, 0) == self.vpi:
            # States visited in every episode are a special case
            return [Ps + self.qValue(state, a) for a in actions]
        p = self.visitProbability(state)
        eNot = self.complementReturn(state)
        return [p * (Ps + self.qValue(state, a)) + (1.0 - p) * eNot for a in actions]


def mossBeginEpisode(tables):
    """Count the episode and reset per-episode flags, traces and P."""
    tables.vpi += 1
    tables.e.clear()
    tables.visited.clear()
    tables.P = zeroVector(tables.n)
    tables.currentState = tables.env.startState


def mossUpdateStatistics(tables, s, pEpisode, alpha):
    """Update the statistics of state s and return (augmented key, U)."""
    if tables.vpi == 0:
        raise MorlError("ZERO_EPISODES", "update-statistics called before any episode")
    if s not in tables.visited:
        tables.vs[s] = tables.vs.get(s, 0) + 1
        tables.visited.add(s)
    Ps = _lookup(tables.Ps, s, tables.n)
    tables.Ps[s] = Ps + alpha * (pEpisode - Ps)
    return s, tables.utilities(s)


def mossStep(tables, transition, hyper, ordering, temperature, rng):
    """Learn from one transition and return the next (exploratory) action."""
    if tables.currentState is None:
        raise _uninitialised("moss")
    s, a, reward, nextState = transition
    tables.P = tables.P + reward

    if isTerminal(nextState):
        aStar = aPrime = None
        qNext = zeroVector(tables.n)
    else:
        keyNext, utilities = mossUpdateStatistics(tables, nextState, tables.P, hyper.alpha)
        aStar = tloArgbest(utilities, ordering)
        aPrime = softmaxT(utilities, ordering, temperature, rng)
        qNext = tables.qValue(keyNext, aStar)

    delta = reward + hyper.gamma * qNext - tables.qValue(s, a)
    _watkinsUpdate(tables.Q, tables.e, (s, a), delta, hyper, tables.n,
                   aPrime is not None and aPrime == aStar)
    tables.currentState = None if isTerminal(nextState) else nextState
    return aPrime


def mossEndEpisode(tables, alpha):
    """Fold the episode's return into E_pi and into E(s) of every visited state."""
    tables.Epi = tables.Epi + alpha * (tables.P - tables.Epi)
    for s in tables.visited:
        Es = _lookup(tables.Es, s, tables.n)
        tables.Es[s] = Es + alpha * (tables.P - Es)
    tables.currentState = None


def mossGreedyPolicy(tables, ordering):
    """Pick the best action per state from the current statistics, mutating nothing."""
    env = tables.env
    return GreedyPolicy(env, {s: tloArgbest(tables.utilities(s), ordering)
                              for s in env.states})


# Policy options

class OptionTables:
    """Option values Q(state, option) and their traces.

    Each Q entry is a learning-rate weighted average of its update targets:
    the step applied on a visit is alpha divided by the running sum of
    weights (zero initially), so the zero start value carries no weight.
    """

    def __init__(self, env):
        """Initialise tables with one option per deterministic policy of env."""
        self.env = env
        self.n = env.objectiveCount()
        self.options = allDeterministicPolicies(env)
        self.Q = {}
        self.e = {}
        self.weight = {}
        self.squaredWeight = {}
        self.step = {}
        self.currentOption = None

    def qValue(self, state, option):
        """Return Q(state, option), zero if never updated."""
        return _lookup(self.Q, (state, option), self.n)

    def startValues(self):
        """Return Q(start, p) for every option p."""
        start = self.env.startState
        return [self.qValue(start, p) for p in range(len(self.options))]

    def effectiveSamples(self, state, option):
        """Return the effective number of targets averaged into Q(state, option)."""
        squared = self.squaredWeight.get((state, option), 0.0)
        if squared == 0.0:
            return 0.0
        return self.weight[(state, option)] ** 2 / squared

    def visit(self, key, alpha):
        """Record a visit of key under learning rate alpha; return its step size."""
        weight = self.weight.get(key, 0.0)
        if alpha > 0.0:
            weight = weight + alpha * (1.0 - weight)
            self.squaredWeight[key] = ((1.0 - alpha) ** 2 * self.squaredWeight.get(key, 0.0)
                                       + alpha ** 2)
            self.weight[key] = weight
        self.step[key] = alpha / weight if weight > 0.0 else 0.0
        return self.step[key]


def optionsBeginEpisode(tables, ordering, temperature, rng):
    """Reset traces and choose this episode's option by softmax-t over Q(start, .)."""
    tables.e.clear()
    tables.step.clear()
    tables.currentOption = softmaxT(tables.startValues(), ordering, temperature, rng)
    return tables.currentOption


def optionsStep(tables, transition, hyper):
    """Learn from one transition of the current option; return its next action."""
    if tables.currentOption is None:
        raise _uninitialised("options")
    s, _, reward, nextState = transition
    option = tables.currentOption

    if isTerminal(nextState):
        qNext = zeroVector(tables.n)
    else:
        qNext = tables.qValue(nextState, option)
    delta = reward + hyper.gamma * qNext - tables.qValue(s, option)

    tables.e[(s, option)] = 1.0
    tables.visit((s, option), hyper.alpha)
    decay = hyper.gamma * hyper.lam
    for key, trace in tables.e.items():
        tables.Q[key] = _lookup(tables.Q, key, tables.n) + tables.step[key] * delta * trace
        tables.e[key] = decay * trace

    if isTerminal(nextState):
        return None
    return tables.options[option].action(nextState)


def optionsGreedyPolicy(tables, ordering):
    """Return the option with the best start-state value."""
    return tables.options[tloArgbest(tables.startValues(), ordering)]


def optionsEpisode(tables, env, hyper, ordering, temperature, rng):
    """Run one training episode of the options agent; return (transcript, tables)."""
    agent = OptionsAgent(env, ordering, tables)
    agent.setEpisodeParameters(hyper, temperature)
    transcript = momdp.runEpisode(env, agent, rng)
    return transcript, tables


# Agent contract

class Agent:
    """Base class for agents driven by momdp.runEpisode."""

    kind = None

    def __init__(self, env, ordering):
        """Initialise an Agent."""
        if ordering.objectiveCount() != env.objectiveCount():
            raise MorlError("DIMENSION_MISMATCH",
                            "ordering has " + str(ordering.objectiveCount())
                            + " objectives, environment has " + str(env.objectiveCount()))
        self.env = env
        self.ordering = ordering
        self.hyper = Hyperparameters()
        self.temperature = config.DEFAULT_TEMPERATURE_INITIAL

    def setEpisodeParameters(self, hyper, temperature):
        """Set learning rate, discount, trace decay and temperature for the next episode."""
        self.hyper = hyper
        self.temperature = temperature

    def beginEpisode(self):
        """Prepare for a new episode."""

    def select(self, state, rng):
        """Return the first action of the episode in state."""
        raise NotImplementedError

    def observe(self, transition, rng):
        """Learn from transition and return the next action (None after a terminal)."""
        raise NotImplementedError

    def endEpisode(self):
        """Finish the episode."""

    def greedyPolicy(self):
        """Return the current greedy policy without learning or exploring."""
        raise NotImplementedError


class BaselineAgent(Agent):
    """MO Q(lambda) with accumulated expected reward."""

    kind = BASELINE

    def __init__(self, env, ordering, tables=None):
        """Initialise a BaselineAgent."""
        Agent.__init__(self, env, ordering)
        self.tables = tables if tables is not None else BaselineTables(env)

    def beginEpisode(self):
        baselineBeginEpisode(self.tables)

    def select(self, state, rng):
        utilities = self.tables.utilities(self.tables.currentKey, self.tables.P)
        return softmaxT(utilities, self.ordering, self.temperature, rng)

    def observe(self, transition, rng):
        return baselineStep(self.tables, transition, self.hyper, self.ordering,
                            self.temperature, rng)

    def endEpisode(self):
        self.tables.currentKey = None

    def greedyPolicy(self):
        return baselineGreedyPolicy(self.tables, self.ordering)


class MossAgent(Agent):
    """MO stochastic-state Q(lambda)."""

    kind = MOSS

    def __init__(self, env, ordering, tables=None):
        """Initialise a MossAgent."""
        Agent.__init__(self, env, ordering)
        self.tables = tables if tables is not None else MossTables(env)

    def beginEpisode(self):
        mossBeginEpisode(self.tables)

    def select(self, state, rng):
        _, utilities = mossUpdateStatistics(self.tables, state, self.tables.P,
                                            self.hyper.alpha)
        return softmaxT(utilities, self.ordering, self.temperature, rng)

    def observe(self, transition, rng):
        return mossStep(self.tables, transition, self.hyper, self.ordering,
                        self.temperature, rng)

    def endEpisode(self):
        mossEndEpisode(self.tables, self.hyper.alpha)

    def greedyPolicy(self):
        return mossGreedyPolicy(self.tables, self.ordering)


class OptionsAgent(Agent):
    """MO Q(lambda) over policy options."""

    kind = OPTIONS

    def __init__(self, env, ordering, tables=None):
        """Initialise an OptionsAgent."""
        Agent.__init__(self, env, ordering)
        self.tables = tables if tables is not None else OptionTables(env)

    def select(self, state, rng):
        option = optionsBeginEpisode(self.tables, self.ordering, self.temperature, rng)
        return self.tables.options[option].action(state)

    def observe(self, transition, rng):
        return optionsStep(self.tables, transition, self.hyper)

    def endEpisode(self):
        self.tables.currentOption = None

    def greedyPolicy(self):
        return optionsGreedyPolicy(self.tables, self.ordering)


class FixedPolicyAgent(Agent):
    """Follows a given deterministic policy and learns nothing."""

    def __init__(self, env, policy, ordering=None):
        """Initialise a FixedPolicyAgent."""
        if ordering is None:
            ordering = _neutralOrdering(env)
        Agent.__init__(self, env, ordering)
        self.policy = policy

    def select(self, state, rng):
        return self.policy.action(state)

    def observe(self, transition, rng):
        if isTerminal(transition.nextState):
            return None
        return self.policy.action(transition.nextState)

    def greedyPolicy(self):
        return self.policy


def _neutralOrdering(env):
    return UtilityOrdering([float("inf")] * (env.objectiveCount() - 1))


AGENT_CLASSES = {
    BASELINE: BaselineAgent,
    MOSS: MossAgent,
    OPTIONS: OptionsAgent,
}


def makeAgent(kind, env, ordering):
    """Return a fresh agent of kind ('baseline', 'moss' or 'options') for env."""
    try:
        agentClass = AGENT_CLASSES[kind]
    except KeyError:
        raise MorlError("UNKNOWN_AGENT", "'" + str(kind) + "' is not one of "
                        + ", ".join(sorted(AGENT_CLASSES)))
    return agentClass(env, ordering)


def extractGreedyPolicy(agent, env):
    """Return agent's greedy policy for env; tables are left untouched."""
    if agent.env is not env and agent.env != env:
        raise MorlError("DIMENSION_MISMATCH", "agent was built for a different environment")
    return agent.greedyPolicy()
