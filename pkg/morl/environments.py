"""Space Traders environment catalog and the environment file reader/writer.

Environment file schema (JSON object, no other keys allowed):

    name         string
    states       list of state identifiers, canonical order
    start_state  state identifier
    horizon      positive integer
    objectives   list of objective names
    dynamics     list of {state, action, initial, outcomes}, where outcomes is
                 a list of {p, next, reward}; next is a state identifier or
                 "$success" / "$failure", reward a list with one number per
                 objective. Action order within a state is order of appearance.
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

import io
import json
import os
from . import config
from . import momdp
from .momdp import TERMINAL_SUCCESS, TERMINAL_FAILURE
from .shared import MorlError, SpecParseError
from .specvalidator import validateSpec

OBJECTIVES = ["success", "time"]

# Action names and initials, in declaration order
SPACE_TRADERS_ACTIONS = [("Indirect", "I"), ("Direct", "D"), ("Teleport", "T")]

# Success and failure probability of each action (shared by all variants)
SUCCESS_PROBABILITIES = {"I": 1.0, "D": 0.9, "T": 0.85}
FAILURE_PROBABILITIES = {"I": 0.0, "D": 0.1, "T": 0.15}

# Rewards (on success, on failure) per state and action initial
ORIGINAL_REWARDS = {
    ("A", "I"): ((0, -12), None),
    ("A", "D"): ((0, -6), (0, -1)),
    ("A", "T"): ((0, 0), (0, 0)),
    ("B", "I"): ((1, -10), None),
    ("B", "D"): ((1, -8), (0, -7)),
    ("B", "T"): ((1, 0), (0, 0)),
}

MR_REWARDS = {
    ("A", "I"): ((0, -12), None),
    ("A", "D"): ((0, -6), (-1, -1)),
    ("A", "T"): ((0, 0), (-1, 0)),
    ("B", "I"): ((1, -10), None),
    ("B", "D"): ((1, -8), (-1, -7)),
    ("B", "T"): ((1, 0), (-1, 0)),
}

ID_REWARDS = {
    ("A", "I"): ((0, -10), None),
    ("A", "D"): ((0, -8), (0, -7)),
    ("A", "T"): ((0, 0), (0, 0)),
    ("B", "I"): ((1, -12), None),
    ("B", "D"): ((1, -6), (0, -1)),
    ("B", "T"): ((1, 0), (0, 0)),
}

# Successor of a successful action in each state
SUCCESS_TARGETS = {"A": "B", "B": TERMINAL_SUCCESS}


def _spaceTradersActions(states):
    return {s: list(SPACE_TRADERS_ACTIONS) for s in states}


def _twoStateOutcomes(rewards):
    """Build the outcome table of a two-state variant from a rewards table."""
    outcomes = {}
    for state in ("A", "B"):
        for i, (_, initial) in enumerate(SPACE_TRADERS_ACTIONS):
            pSuccess = SUCCESS_PROBABILITIES[initial]
            onSuccess, onFailure = rewards[(state, initial)]
            outs = [(pSuccess, SUCCESS_TARGETS[state], onSuccess)]
            if onFailure is not None:
                outs.append((FAILURE_PROBABILITIES[initial], TERMINAL_FAILURE, onFailure))
            outcomes[(state, i)] = outs
    return outcomes


def _twoStateSpec(name, rewards):
    states = ["A", "B"]
    return momdp.EnvironmentSpec(name, states, _spaceTradersActions(states),
                                 _twoStateOutcomes(rewards), "A", 2, OBJECTIVES)


def buildOriginal():
    """Return the original Space Traders MOMDP."""
    return validateSpec(_twoStateSpec("original", ORIGINAL_REWARDS))


def buildMr():
    """Return Space Traders MR: original dynamics, -1 success reward on failure."""
    return validateSpec(_twoStateSpec("mr", MR_REWARDS))


def buildId():
    """Return Space Traders ID: original dynamics, time penalties swapped between A and B."""
    return validateSpec(_twoStateSpec("id", ID_REWARDS))


def build3st():
    """Return Space Traders 3-State.

    Direct at A moves deterministically to C with reward (0, -3). Every action
    in C resolves the journey: 0.9 to B with (0, -3), 0.1 to failure with
    (-1, -1). All other entries as in MR. This is a reconstruction; the C leg
    keeps the MR totals on the success path and delivers the failure penalty
    one step later than MR.
    """
    states = ["A", "B", "C"]
    outcomes = _twoStateOutcomes(MR_REWARDS)
    direct = 1
    outcomes[("A", direct)] = [(1.0, "C", (0, -3))]
    for i in range(len(SPACE_TRADERS_ACTIONS)):
        outcomes[("C", i)] = [(0.9, "B", (0, -3)), (0.1, TERMINAL_FAILURE, (-1, -1))]
    spec = momdp.EnvironmentSpec("3st", states, _spaceTradersActions(states),
                                 outcomes, "A", 3, OBJECTIVES)
    return validateSpec(spec)


def build3stDelayed():
    """Return the delayed-failure reading of Space Traders 3-State.

    Direct at A reaches B with 0.9 and (0, -6), or C with 0.1 and (0, -1);
    every action in C ends in failure with (-1, 0). Expected objective-1
    reward accumulated on the way to B is therefore 0 for every action at A.
    """
    states = ["A", "B", "C"]
    outcomes = _twoStateOutcomes(MR_REWARDS)
    direct = 1
    outcomes[("A", direct)] = [(0.9, "B", (0, -6)), (0.1, "C", (0, -1))]
    for i in range(len(SPACE_TRADERS_ACTIONS)):
        outcomes[("C", i)] = [(1.0, TERMINAL_FAILURE, (-1, 0))]
    spec = momdp.EnvironmentSpec("3st-delayed", states, _spaceTradersActions(states),
                                 outcomes, "A", 2, OBJECTIVES)
    return validateSpec(spec)


CATALOG = {
    'original': buildOriginal,
    'mr': buildMr,
    '3st': build3st,
    '3st-delayed': build3stDelayed,
    'id': buildId,
}


def shippedSpecPath(name):
    """Return path of the environment file shipped for catalog entry name."""
    return os.path.join(config.ENVIRONMENTS_DIR, name + ".json")


def resolveEnvironment(nameOrPath):
    """Return a validated spec for a catalog name or an environment file path."""
    if nameOrPath in CATALOG:
        return CATALOG[nameOrPath]()
    if os.path.isfile(nameOrPath):
        return loadSpec(nameOrPath)
    raise MorlError("UNKNOWN_ENVIRONMENT",
                    "'" + str(nameOrPath) + "' is neither a catalog environment ("
                    + ", ".join(sorted(CATALOG)) + ") nor an existing file")


def defaultThresholds(nameOrPath):
    """Return the default TLO thresholds for an environment name or file."""
    if nameOrPath in config.DEFAULT_THRESHOLDS:
        return list(config.DEFAULT_THRESHOLDS[nameOrPath])
    return None


# Environment file reading and writing

TOP_LEVEL_KEYS = ["name", "states", "start_state", "horizon", "objectives", "dynamics"]
DYNAMICS_KEYS = ["state", "action", "initial", "outcomes"]
OUTCOME_KEYS = ["p", "next", "reward"]


def _checkKeys(obj, allowed, path):
    """Raise SpecParseError on unknown or missing keys of a JSON object."""
    if not isinstance(obj, dict):
        raise SpecParseError("expected an object", key=path or "<root>")
    for key in obj:
        if key not in allowed:
            raise SpecParseError("unknown key", key=_join(path, key))
    for key in allowed:
        if key not in obj:
            raise SpecParseError("missing key", key=_join(path, key))


def _join(path, key):
    if not path:
        return key
    return path + "." + key


def _expectList(value, path):
    if not isinstance(value, list):
        raise SpecParseError("expected a list", key=path)
    return value


def _expectNumber(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecParseError("expected a number", key=path)
    return value


def _expectString(value, path):
    if not isinstance(value, str):
        raise SpecParseError("expected a string", key=path)
    return value


def specFromDict(data):
    """Build an (unvalidated) EnvironmentSpec from a parsed environment file."""
    _checkKeys(data, TOP_LEVEL_KEYS, "")
    name = _expectString(data["name"], "name")
    states = [_expectString(s, "states[" + str(i) + "]")
              for i, s in enumerate(_expectList(data["states"], "states"))]
    objectives = [_expectString(o, "objectives[" + str(i) + "]")
                  for i, o in enumerate(_expectList(data["objectives"], "objectives"))]
    startState = _expectString(data["start_state"], "start_state")
    dynamics = _expectList(data["dynamics"], "dynamics")

    actions = {}
    outcomes = {}
    for i, entry in enumerate(dynamics):
        path = "dynamics[" + str(i) + "]"
        _checkKeys(entry, DYNAMICS_KEYS, path)
        state = _expectString(entry["state"], path + ".state")
        stateActions = actions.setdefault(state, [])
        actionIndex = len(stateActions)
        stateActions.append((_expectString(entry["action"], path + ".action"),
                             _expectString(entry["initial"], path + ".initial")))
        outs = []
        for j, outcome in enumerate(_expectList(entry["outcomes"], path + ".outcomes")):
            outPath = path + ".outcomes[" + str(j) + "]"
            _checkKeys(outcome, OUTCOME_KEYS, outPath)
            probability = _expectNumber(outcome["p"], outPath + ".p")
            nextState = _expectString(outcome["next"], outPath + ".next")
            reward = [_expectNumber(r, outPath + ".reward")
                      for r in _expectList(outcome["reward"], outPath + ".reward")]
            outs.append((probability, nextState, reward))
        outcomes[(state, actionIndex)] = outs

    return momdp.EnvironmentSpec(name, states, actions, outcomes,
                                 startState, data["horizon"], objectives)


def loadSpec(path):
    """Read, parse and validate an environment file."""
    try:
        with io.open(path, "r", encoding=config.UTF8_ENCODING) as fIn:
            data = json.loads(fIn.read())
    except ValueError as ex:
        # json.JSONDecodeError carries lineno / colno, UnicodeDecodeError does not
        raise SpecParseError(getattr(ex, "msg", str(ex)),
                             line=getattr(ex, "lineno", None),
                             column=getattr(ex, "colno", None))
    return validateSpec(specFromDict(data))


def dumpSpec(spec, path):
    """Write spec to path using the environment file schema."""
    with io.open(path, "w", encoding=config.UTF8_ENCODING, newline="\n") as fOut:
        fOut.write(json.dumps(spec.toDict(), indent=2))
        fOut.write("\n")
