"""Seeded multi-trial experiments and their on-disk artifacts.

An experiment trains one fresh agent per trial, records the agent's greedy
policy after every episode and writes, to the output directory:

    trial_<k>_chart.csv    episode,policy,meets_threshold
    trial_<k>_returns.csv  episode,obj1,obj2
    trial_<k>_qvalues.csv  episode,option,obj1,obj2 (options agent, optional)
    summary.json           config echo, final-policy histogram, success count,
                           oracle reference and per-trial results
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

import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from . import config
from . import momdp
from . import oracle
from .agents import AGENT_CLASSES, OPTIONS, Hyperparameters, makeAgent, extractGreedyPolicy
from .environments import resolveEnvironment, defaultThresholds
from .shared import MorlError, ConfigError, printInfo, printWarning, formatFloat
from .utility import (UtilityOrdering, CONSTANT, LINEAR_DECAY,
                      meetsThresholds, parseSchedule, scheduleValue)

CONFIG_KEYS = ["environment", "agent", "hyper", "thresholds", "trials",
               "episodes_per_trial", "base_seed", "output_dir", "log_q_values"]
HYPER_KEYS = ["alpha", "lambda", "gamma", "temperature"]


class ExperimentConfig:
    """Everything needed to reproduce one experiment.

    Schedules are kept in their textual form; thresholds of None mean the
    environment's default.
    """

    def __init__(self, environment="original", agent="baseline",
                 alphaSchedule=None, lam=config.DEFAULT_LAMBDA,
                 gamma=config.DEFAULT_GAMMA, temperatureSchedule=None,
                 thresholds=None, trials=config.DEFAULT_TRIALS,
                 episodesPerTrial=config.DEFAULT_EPISODES,
                 baseSeed=config.DEFAULT_BASE_SEED,
                 outputDir=config.DEFAULT_OUTPUT_DIR, logQValues=False):
        """Initialise an ExperimentConfig."""
        self.environment = environment
        self.agent = agent
        if alphaSchedule is None:
            alphaSchedule = CONSTANT + ":" + repr(config.DEFAULT_ALPHA)
        if temperatureSchedule is None:
            temperatureSchedule = (LINEAR_DECAY + ":" + repr(config.DEFAULT_TEMPERATURE_INITIAL)
                                   + ":" + repr(config.DEFAULT_TEMPERATURE_FINAL))
        self.alphaSchedule = alphaSchedule
        self.lam = lam
        self.gamma = gamma
        self.temperatureSchedule = temperatureSchedule
        self.thresholds = None if thresholds is None else [float(t) for t in thresholds]
        self.trials = trials
        self.episodesPerTrial = episodesPerTrial
        self.baseSeed = baseSeed
        self.outputDir = outputDir
        self.logQValues = bool(logQValues)

    @classmethod
    def fromDict(cls, data):
        """Build a config from its JSON form; unknown keys are an error."""
        _checkKeys(data, CONFIG_KEYS, "")
        kwargs = {}
        hyper = data.get("hyper", {})
        _checkKeys(hyper, HYPER_KEYS, "hyper")
        if "alpha" in hyper:
            kwargs["alphaSchedule"] = hyper["alpha"]
        if "lambda" in hyper:
            kwargs["lam"] = hyper["lambda"]
        if "gamma" in hyper:
            kwargs["gamma"] = hyper["gamma"]
        if "temperature" in hyper:
            kwargs["temperatureSchedule"] = hyper["temperature"]
        mapping = {"environment": "environment", "agent": "agent",
                   "thresholds": "thresholds", "trials": "trials",
                   "episodes_per_trial": "episodesPerTrial", "base_seed": "baseSeed",
                   "output_dir": "outputDir", "log_q_values": "logQValues"}
        for key, name in mapping.items():
            if key in data:
                kwargs[name] = data[key]
        return cls(**kwargs).validate()

    @classmethod
    def fromFile(cls, path):
        """Read a config from a JSON file."""
        try:
            with io.open(path, "r", encoding=config.UTF8_ENCODING) as fIn:
                data = json.load(fIn)
        except (IOError, OSError) as ex:
            raise ConfigError("cannot read config file '" + path + "' (" + str(ex) + ")")
        except ValueError as ex:
            raise ConfigError("config file '" + path + "' is not valid JSON (" + str(ex) + ")")
        return cls.fromDict(data)

    def toDict(self):
        """Return the config in its JSON form."""
        return {"environment": self.environment,
                "agent": self.agent,
                "hyper": {"alpha": self.alphaSchedule,
                          "lambda": self.lam,
                          "gamma": self.gamma,
                          "temperature": self.temperatureSchedule},
                "thresholds": self.thresholds,
                "trials": self.trials,
                "episodes_per_trial": self.episodesPerTrial,
                "base_seed": self.baseSeed,
                "output_dir": self.outputDir,
                "log_q_values": self.logQValues}

    def withOverrides(self, **overrides):
        """Return a copy with every override that is not None applied."""
        data = dict(self.__dict__)
        for name, value in overrides.items():
            if name not in data:
                raise ConfigError("unknown config field '" + name + "'")
            if value is not None:
                data[name] = value
        return ExperimentConfig(**data).validate()

    def alphaScheduleObject(self):
        """Return the learning-rate Schedule over episodesPerTrial episodes."""
        return parseSchedule(self.alphaSchedule, self.episodesPerTrial)

    def temperatureScheduleObject(self):
        """Return the temperature Schedule over episodesPerTrial episodes."""
        return parseSchedule(self.temperatureSchedule, self.episodesPerTrial)

    def validate(self):
        """Check field ranges; return self or raise ConfigError."""
        if self.agent not in AGENT_CLASSES:
            raise ConfigError("unknown agent '" + str(self.agent) + "' (expected one of "
                              + ", ".join(sorted(AGENT_CLASSES)) + ")")
        for name in ("trials", "episodesPerTrial"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(name + " must be a positive integer, got " + repr(value))
        if isinstance(self.baseSeed, bool) or not isinstance(self.baseSeed, int):
            raise ConfigError("base_seed must be an integer, got " + repr(self.baseSeed))
        alpha = self.alphaScheduleObject()
        if not all(0.0 <= v <= 1.0 for v in (alpha.initial, alpha.final)):
            raise ConfigError("alpha schedule values must lie in [0, 1]")
        temperature = self.temperatureScheduleObject()
        if not (temperature.initial > 0 and temperature.final > 0):
            raise ConfigError("temperature schedule values must be > 0")
        # Range checks on lambda and gamma
        Hyperparameters(alpha.initial, self.gamma, self.lam)
        return self

    def ordering(self, env):
        """Return the TLO ordering for env (explicit thresholds or the catalog default)."""
        thresholds = self.thresholds
        if thresholds is None:
            thresholds = defaultThresholds(self.environment)
        if thresholds is None:
            printWarning("no default thresholds for '" + str(self.environment)
                         + "', using " + repr(config.DEFAULT_THRESHOLD))
            thresholds = [config.DEFAULT_THRESHOLD] * (env.objectiveCount() - 1)
        if len(thresholds) != env.objectiveCount() - 1:
            raise ConfigError("expected " + str(env.objectiveCount() - 1)
                              + " thresholds, got " + str(len(thresholds)))
        return UtilityOrdering(thresholds)


def _checkKeys(obj, allowed, path):
    if not isinstance(obj, dict):
        raise ConfigError("expected an object at '" + (path or "<root>") + "'")
    for key in obj:
        if key not in allowed:
            where = key if not path else path + "." + key
            raise ConfigError("unknown config key '" + where + "'")


class TrialRecord:
    """Outcome of one trial."""

    def __init__(self, trialIndex, seed):
        """Initialise an empty TrialRecord."""
        self.trialIndex = trialIndex
        self.seed = seed
        self.greedyPolicies = []
        self.returns = []
        self.qValues = []
        self.finalStartValues = None
        self.finalStartSamples = None
        self.finalPolicy = None
        self.success = False

    def toDict(self):
        """Return the per-trial entry of summary.json."""
        result = {"index": self.trialIndex,
                  "seed": self.seed,
                  "final_policy": self.finalPolicy,
                  "success": self.success}
        if self.finalStartValues is not None:
            result["final_start_q"] = self.finalStartValues
        return result


def runTrial(experiment, trialIndex):
    """Train a fresh agent for one trial and return its TrialRecord."""
    env = resolveEnvironment(experiment.environment)
    ordering = experiment.ordering(env)
    seed = (int(experiment.baseSeed) + int(trialIndex)) % (2 ** 64)
    rng = momdp.SeededRng.forTrial(experiment.baseSeed, trialIndex)
    agent = makeAgent(experiment.agent, env, ordering)
    alphaSchedule = experiment.alphaScheduleObject()
    temperatureSchedule = experiment.temperatureScheduleObject()
    logQ = experiment.logQValues and agent.kind == OPTIONS

    record = TrialRecord(trialIndex, seed)
    for episode in range(experiment.episodesPerTrial):
        hyper = Hyperparameters(scheduleValue(alphaSchedule, episode),
                                experiment.gamma, experiment.lam)
        agent.setEpisodeParameters(hyper, scheduleValue(temperatureSchedule, episode))
        transcript = momdp.runEpisode(env, agent, rng)
        record.greedyPolicies.append(extractGreedyPolicy(agent, env).identifier)
        record.returns.append([float(v) for v in transcript.totalReturn])
        if logQ:
            record.qValues.append([[float(v) for v in q] for q in agent.tables.startValues()])

    record.finalPolicy = record.greedyPolicies[-1]
    optimal = {p.identifier for p in oracle.serOptimalSet(env, ordering)}
    record.success = record.finalPolicy in optimal
    if agent.kind == OPTIONS:
        record.finalStartValues = {
            option.identifier: [float(v) for v in q]
            for option, q in zip(agent.tables.options, agent.tables.startValues())}
        start = env.startState
        record.finalStartSamples = {
            option.identifier: agent.tables.effectiveSamples(start, p)
            for p, option in enumerate(agent.tables.options)}
    printInfo("trial " + str(trialIndex) + " final policy " + record.finalPolicy)
    return record


def _openCsv(path):
    return io.open(path, "w", encoding=config.UTF8_ENCODING, newline="")


def objectiveColumns(objectiveCount):
    """Return column names obj1 ... objN."""
    return ["obj" + str(i + 1) for i in range(objectiveCount)]


def emitPolicyChart(record, env, ordering, path, evaluations=None):
    """Write episode,policy,meets_threshold for every episode of record.

    meets_threshold uses the policy's exact mean return, not the agent's estimate.
    """
    if evaluations is None:
        evaluations = oracle.evaluateAll(env)
    meets = {e.policy.identifier: meetsThresholds(e.meanReturn, ordering) for e in evaluations}
    with _openCsv(path) as fOut:
        writer = csv.writer(fOut, lineterminator=config.CSV_LINE_TERMINATOR)
        writer.writerow(["episode", "policy", "meets_threshold"])
        for episode, identifier in enumerate(record.greedyPolicies):
            writer.writerow([episode, identifier, "true" if meets[identifier] else "false"])


def emitReturns(record, objectiveCount, path):
    """Write the per-episode returns of record."""
    with _openCsv(path) as fOut:
        writer = csv.writer(fOut, lineterminator=config.CSV_LINE_TERMINATOR)
        writer.writerow(["episode"] + objectiveColumns(objectiveCount))
        for episode, totalReturn in enumerate(record.returns):
            writer.writerow([episode] + [formatFloat(v) for v in totalReturn])


def emitQValues(record, options, objectiveCount, path):
    """Write Q(start, option) after every episode of record."""
    with _openCsv(path) as fOut:
        writer = csv.writer(fOut, lineterminator=config.CSV_LINE_TERMINATOR)
        writer.writerow(["episode", "option"] + objectiveColumns(objectiveCount))
        for episode, values in enumerate(record.qValues):
            for option, q in zip(options, values):
                writer.writerow([episode, option.identifier] + [formatFloat(v) for v in q])


class ExperimentSummary:
    """Final-policy histogram and oracle comparison of an experiment."""

    def __init__(self, experiment, env, ordering, evaluations, records):
        """Initialise an ExperimentSummary."""
        self.experiment = experiment
        self.records = records
        optimalPolicy, optimalReturn = oracle.serOptimal(env, ordering, evaluations)
        self.optimalPolicy = optimalPolicy.identifier
        self.optimalReturn = [float(v) for v in optimalReturn]
        self.equivalentPolicies = [p.identifier for p in
                                   oracle.serOptimalSet(env, ordering, evaluations)]
        self.histogram = {e.policy.identifier: 0 for e in evaluations}
        for record in records:
            self.histogram[record.finalPolicy] += 1
        self.successCount = sum(1 for r in records if r.success)
        self.oracleMeans = {e.policy.identifier: [float(v) for v in e.meanReturn]
                            for e in evaluations}
        self.environmentName = env.name
        self.thresholds = ordering.toList()

    def toDict(self):
        """Return the content of summary.json."""
        echo = self.experiment.toDict()
        echo["thresholds"] = self.thresholds
        # Artifacts must not depend on where they are written
        del echo["output_dir"]
        return {"config": echo,
                "environment": self.environmentName,
                "histogram": self.histogram,
                "success_count": self.successCount,
                "trials": len(self.records),
                "oracle_optimal": {"policy": self.optimalPolicy,
                                   "mean_return": self.optimalReturn,
                                   "equivalent": self.equivalentPolicies},
                "oracle_means": self.oracleMeans,
                "trial_results": [r.toDict() for r in self.records]}


def _prepareOutputDir(path):
    try:
        if not os.path.isdir(path):
            os.makedirs(path)
    except OSError as ex:
        raise MorlError("OUTPUT_DIR_NOT_WRITABLE", "cannot create '" + path + "' (" + str(ex) + ")")
    if not os.access(path, os.W_OK):
        raise MorlError("OUTPUT_DIR_NOT_WRITABLE", "'" + path + "' is not writable")


def runExperiment(experiment, workers=1):
    """Run all trials of experiment, write artifacts and return the ExperimentSummary."""
    outputDir = experiment.outputDir
    _prepareOutputDir(outputDir)
    env = resolveEnvironment(experiment.environment)
    ordering = experiment.ordering(env)
    # Trials reuse the resolved thresholds
    experiment = experiment.withOverrides(thresholds=ordering.toList())
    evaluations = oracle.evaluateAll(env)
    indices = list(range(experiment.trials))

    printInfo("running " + str(experiment.trials) + " trials of " + experiment.agent
              + " on " + str(env.name))
    workers = min(workers, len(indices))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(runTrial, [experiment] * len(indices), indices))
    else:
        records = [runTrial(experiment, i) for i in indices]

    n = env.objectiveCount()
    options = oracle.enumeratePolicies(env)
    try:
        for record in records:
            k = record.trialIndex
            emitPolicyChart(record, env, ordering,
                            os.path.join(outputDir, config.CHART_FILE_PATTERN.format(k)),
                            evaluations)
            emitReturns(record, n,
                        os.path.join(outputDir, config.RETURNS_FILE_PATTERN.format(k)))
            if record.qValues:
                emitQValues(record, options, n,
                            os.path.join(outputDir, config.QVALUES_FILE_PATTERN.format(k)))

        summary = ExperimentSummary(experiment, env, ordering, evaluations, records)
        with io.open(os.path.join(outputDir, config.SUMMARY_FILE), "w",
                     encoding=config.UTF8_ENCODING, newline="\n") as fOut:
            fOut.write(json.dumps(summary.toDict(), indent=2))
            fOut.write("\n")
    except (IOError, OSError) as ex:
        raise MorlError("OUTPUT_DIR_NOT_WRITABLE", "cannot write to '" + outputDir + "' ("
                        + str(ex) + ")")
    return summary


def loadSummary(outputDir):
    """Read summary.json of outputDir and check the per-trial charts exist."""
    path = os.path.join(outputDir, config.SUMMARY_FILE)
    if not os.path.isfile(path):
        raise MorlError("MISSING_ARTIFACTS", "no " + config.SUMMARY_FILE + " in '"
                        + outputDir + "'")
    try:
        with io.open(path, "r", encoding=config.UTF8_ENCODING) as fIn:
            summary = json.load(fIn)
    except ValueError:
        raise MorlError("MISSING_ARTIFACTS", path + " is not valid JSON")
    for trial in summary.get("trial_results", []):
        chart = os.path.join(outputDir, config.CHART_FILE_PATTERN.format(trial["index"]))
        if not os.path.isfile(chart):
            raise MorlError("MISSING_ARTIFACTS", "missing " + chart)
    return summary


def formatSummaryTable(summary):
    """Return the histogram as a two-row table plus the success line."""
    identifiers = list(summary["histogram"])
    width = max([len(i) for i in identifiers] + [5]) + 1
    experiment = summary["config"]
    label = experiment["agent"] + " / " + summary["environment"] + " / alpha " \
        + experiment["hyper"]["alpha"]
    lines = [label,
             "policy".ljust(8) + "".join(i.rjust(width) for i in identifiers),
             "count".ljust(8) + "".join(str(summary["histogram"][i]).rjust(width)
                                        for i in identifiers),
             "success " + str(summary["success_count"]) + "/" + str(summary["trials"])
             + " (SER-optimal: " + summary["oracle_optimal"]["policy"] + ")"]
    return "\n".join(lines) + "\n"


def summarize(outputDir, stream=None):
    """Print the final-policy table of an experiment directory and return its summary."""
    summary = loadSummary(outputDir)
    if stream is None:
        stream = sys.stdout
    stream.write(formatSummaryTable(summary))
    return summary
