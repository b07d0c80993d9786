"""Validator class for environment specs."""
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
from . import config
from . import momdp
from .shared import SpecValidationError


class Violation(namedtuple("Violation", ["code", "message"])):
    """One failed check."""

    def __str__(self):
        return self.code + " (" + self.message + ")"


class SpecValidator:
    """Runs every check on an EnvironmentSpec and records all failures.

    Validity is derived from the complete list of recorded tests, so a spec
    with several problems reports all of them.
    """

    # Checks, in the order they are run
    checks = ["states", "startState", "horizon", "objectives", "actions", "outcomes"]

    def __init__(self, spec):
        """Initialise a SpecValidator."""
        self.spec = spec
        self.tests = []
        self.isValid = None

    def validate(self):
        """Run all checks and return self."""
        for check in self.checks:
            getattr(self, "validate_" + check)()
        self.isValid = self._isValid()
        return self

    def _isValid(self):
        for _, testResult, _ in self.tests:
            if testResult is False:
                return False
        return True

    def testFor(self, testType, testResult, detail=""):
        """Record the result of one test."""
        self.tests.append((testType, testResult, detail))

    def violations(self):
        """Return list of Violation for all failed tests."""
        return [Violation(t, d) for t, r, d in self.tests if r is False]

    # Validator functions

    def validate_states(self):
        """State set must be non-empty and free of duplicates and sentinels."""
        states = self.spec.states
        self.testFor("EMPTY_STATES", len(states) > 0, "spec declares no states")
        self.testFor("DUPLICATE_STATE", len(set(states)) == len(states),
                     "state identifiers are not unique")
        for s in states:
            self.testFor("RESERVED_STATE", not momdp.isTerminal(s),
                         "state '" + str(s) + "' uses a terminal sentinel name")

    def validate_startState(self):
        """Start state must be declared."""
        start = self.spec.startState
        self.testFor("MISSING_START_STATE", start is not None and start in self.spec.states,
                     "start state '" + str(start) + "' is not a declared state")

    def validate_horizon(self):
        """Horizon must be a positive integer."""
        horizon = self.spec.horizon
        isInt = isinstance(horizon, int) and not isinstance(horizon, bool)
        self.testFor("INVALID_HORIZON", isInt and horizon >= 1,
                     "horizon " + repr(horizon) + " is not a positive integer")

    def validate_objectives(self):
        """At least one objective."""
        self.testFor("NO_OBJECTIVES", self.spec.objectiveCount() >= 1,
                     "spec declares no objectives")

    def validate_actions(self):
        """Every state has actions, with unique initials."""
        for s in self.spec.states:
            actions = self.spec.actions.get(s, ())
            self.testFor("NO_ACTIONS", len(actions) > 0,
                         "state '" + str(s) + "' has no actions")
            initials = [a.initial for a in actions]
            for initial in sorted(set(initials)):
                self.testFor("DUPLICATE_ACTION_INITIAL", initials.count(initial) == 1,
                             "initial '" + initial + "' used more than once in state '"
                             + str(s) + "'")
            for a in actions:
                self.testFor("INVALID_ACTION_INITIAL", len(a.initial) == 1,
                             "initial '" + a.initial + "' of action '" + a.name
                             + "' is not a single character")
        for s in self.spec.actions:
            self.testFor("DANGLING_STATE", s in self.spec.states,
                         "actions declared for unknown state '" + str(s) + "'")

    def validate_outcomes(self):
        """Outcome distributions: probabilities, targets and reward lengths."""
        n = self.spec.objectiveCount()
        knownTargets = set(self.spec.states) | set(momdp.TERMINALS)

        for s in self.spec.states:
            for i, action in enumerate(self.spec.actions.get(s, ())):
                where = "(" + str(s) + ", " + action.name + ")"
                outcomes = self.spec.outcomes.get((s, i))
                self.testFor("MISSING_OUTCOMES", bool(outcomes),
                             where + " has no outcomes")
                if not outcomes:
                    continue
                total = 0.0
                for outcome in outcomes:
                    total += outcome.probability
                    self.testFor("PROBABILITY_RANGE", 0.0 <= outcome.probability <= 1.0,
                                 where + " probability " + repr(outcome.probability)
                                 + " outside [0, 1]")
                    self.testFor("DANGLING_STATE", outcome.next in knownTargets,
                                 where + " refers to unknown state '" + str(outcome.next) + "'")
                    self.testFor("DIMENSION_MISMATCH", len(outcome.reward) == n,
                                 where + " reward has " + str(len(outcome.reward))
                                 + " components, expected " + str(n))
                self.testFor("PROBABILITY_SUM",
                             abs(total - 1.0) <= config.PROBABILITY_TOLERANCE,
                             where + " probabilities sum to " + repr(total))

        for (s, i) in self.spec.outcomes:
            self.testFor("DANGLING_STATE", 0 <= i < self.spec.actionCount(s),
                         "outcomes declared for unknown pair (" + str(s) + ", " + str(i) + ")")


def validateSpec(spec):
    """Return spec unchanged if valid, else raise SpecValidationError with all violations."""
    validator = SpecValidator(spec).validate()
    if not validator.isValid:
        raise SpecValidationError(validator.violations())
    return spec
