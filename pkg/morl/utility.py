"""TLO utility ordering, softmax-t exploration and hyperparameter schedules."""
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

import numpy as np
from .shared import MorlError, ConfigError

CONSTANT = "constant"
LINEAR_DECAY = "linear"


class UtilityOrdering:
    """Thresholded lexicographic ordering.

    thresholds apply to objectives 1..n-1; the last objective is unthresholded.
    """

    def __init__(self, thresholds):
        """Initialise a UtilityOrdering."""
        self.thresholds = tuple(float(t) for t in thresholds)

    def objectiveCount(self):
        """Return the number of objectives this ordering applies to."""
        return len(self.thresholds) + 1

    def toList(self):
        """Return thresholds as a list."""
        return list(self.thresholds)

    def __repr__(self):
        return "UtilityOrdering(" + repr(list(self.thresholds)) + ")"


def tloKey(v, ordering):
    """Return comparable TLO key of reward vector v.

    Thresholded objectives are clamped at their threshold; the final
    objective is kept as is. Keys compare lexicographically.
    """
    if len(v) != ordering.objectiveCount():
        raise MorlError("DIMENSION_MISMATCH",
                        "vector has " + str(len(v)) + " components, ordering expects "
                        + str(ordering.objectiveCount()))
    key = [min(float(v[i]), t) for i, t in enumerate(ordering.thresholds)]
    key.append(float(v[-1]))
    return tuple(key)


def meetsThresholds(v, ordering):
    """Return True if v reaches every threshold of ordering."""
    return all(float(v[i]) >= t for i, t in enumerate(ordering.thresholds))


def tloArgbest(candidates, ordering):
    """Return index of the best candidate; ties go to the lowest index."""
    if len(candidates) == 0:
        raise MorlError("EMPTY_CANDIDATES", "no candidates to choose from")
    bestIndex = 0
    bestKey = tloKey(candidates[0], ordering)
    for i in range(1, len(candidates)):
        key = tloKey(candidates[i], ordering)
        if key > bestKey:
            bestIndex = i
            bestKey = key
    return bestIndex


def softmaxTProbabilities(candidates, ordering, temperature):
    """Return the softmax-t selection distribution over candidates.

    Each candidate scores the number of other candidates it strictly beats
    under the TLO ordering; p(i) is proportional to exp(score(i) / temperature).
    """
    if len(candidates) == 0:
        raise MorlError("EMPTY_CANDIDATES", "no candidates to choose from")
    if not temperature > 0:
        raise MorlError("NON_POSITIVE_TEMPERATURE",
                        "temperature must be > 0, got " + repr(temperature))
    keys = [tloKey(c, ordering) for c in candidates]
    scores = np.array([sum(1 for other in keys if key > other) for key in keys],
                      dtype=np.float64)
    weights = np.exp((scores - scores.max()) / temperature)
    # Keep every candidate selectable when low temperatures underflow
    weights = np.maximum(weights, np.finfo(np.float64).tiny)
    return weights / weights.sum()


def softmaxT(candidates, ordering, temperature, rng):
    """Sample a candidate index from the softmax-t distribution."""
    probabilities = softmaxTProbabilities(candidates, ordering, temperature)
    u = rng.uniform()
    cumulative = 0.0
    for i, p in enumerate(probabilities):
        cumulative += p
        if u < cumulative:
            return i
    return len(probabilities) - 1


class Schedule:
    """Per-episode hyperparameter schedule (constant or linear decay)."""

    def __init__(self, kind, initial, final=None, totalEpisodes=1):
        """Initialise a Schedule."""
        if kind not in (CONSTANT, LINEAR_DECAY):
            raise ConfigError("unknown schedule kind '" + str(kind) + "'")
        self.kind = kind
        self.initial = float(initial)
        self.final = self.initial if final is None else float(final)
        if kind == CONSTANT:
            self.final = self.initial
        self.totalEpisodes = int(totalEpisodes)
        if self.totalEpisodes < 1:
            raise ConfigError("schedule needs at least one episode")

    def toText(self):
        """Return textual form, as accepted by parseSchedule."""
        if self.kind == CONSTANT:
            return CONSTANT + ":" + repr(self.initial)
        return LINEAR_DECAY + ":" + repr(self.initial) + ":" + repr(self.final)

    def __eq__(self, other):
        if not isinstance(other, Schedule):
            return NotImplemented
        return (self.kind, self.initial, self.final, self.totalEpisodes) == \
            (other.kind, other.initial, other.final, other.totalEpisodes)

    def __repr__(self):
        return "Schedule(" + self.toText() + ", " + str(self.totalEpisodes) + ")"


def scheduleValue(s, episode):
    """Return value of schedule s at episode (0-based)."""
    if not 0 <= episode < s.totalEpisodes:
        raise MorlError("EPISODE_OUT_OF_RANGE",
                        "episode " + str(episode) + " outside [0, " + str(s.totalEpisodes) + ")")
    if s.kind == CONSTANT or s.totalEpisodes == 1:
        return s.initial
    if episode == s.totalEpisodes - 1:
        return s.final
    value = s.initial + (s.final - s.initial) * episode / (s.totalEpisodes - 1)
    return min(max(value, min(s.initial, s.final)), max(s.initial, s.final))


def parseSchedule(text, totalEpisodes):
    """Parse 'constant:<v>' or 'linear:<initial>:<final>' into a Schedule."""
    parts = str(text).split(":")
    try:
        if parts[0] == CONSTANT and len(parts) == 2:
            return Schedule(CONSTANT, float(parts[1]), totalEpisodes=totalEpisodes)
        if parts[0] == LINEAR_DECAY and len(parts) == 3:
            return Schedule(LINEAR_DECAY, float(parts[1]), float(parts[2]), totalEpisodes)
    except ValueError:
        pass
    raise ConfigError("cannot parse schedule '" + str(text)
                      + "' (expected constant:<v> or linear:<initial>:<final>)")
