#! /usr/bin/env python
"""Morl: multi-objective reinforcement learning under thresholded lexicographic utility.

Subcommands:

    oracle      exact mean return of every deterministic policy
    run         seeded multi-trial learning experiment
    summarize   final-policy table of an experiment directory
    envs        list the shipped environments
"""
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

import sys
import argparse
from . import config
from . import environments
from . import harness
from . import oracle
from . import shared
from .shared import MorlError
from .utility import UtilityOrdering

__version__ = "1.0.0"

# Exit code per error code; anything else maps to ERR_CODE_GENERAL
EXIT_CODES = {
    'PARSE_ERROR': config.ERR_CODE_SPEC,
    'UNKNOWN_ENVIRONMENT': config.ERR_CODE_SPEC,
    'CONFIG_ERROR': config.ERR_CODE_CONFIG,
    'UNKNOWN_AGENT': config.ERR_CODE_CONFIG,
    'OUTPUT_DIR_NOT_WRITABLE': config.ERR_CODE_OUTPUT,
    'MISSING_ARTIFACTS': config.ERR_CODE_MISSING_ARTIFACTS,
}


def buildParser():
    """Return the argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="morl",
        description="Multi-objective RL experiments under thresholded lexicographic ordering")
    parser.add_argument('--version', '-v',
                        action='version',
                        version=__version__)
    parser.add_argument('--verbose',
                        action="store_true",
                        dest="outputVerboseFlag",
                        default=False,
                        help="report progress on stderr")
    subparsers = parser.add_subparsers(dest="command")

    oracleParser = subparsers.add_parser('oracle',
                                         help="print exact mean return of every policy")
    oracleParser.add_argument('--env',
                              action="store",
                              type=str,
                              dest="env",
                              default="original",
                              help="catalog environment or environment file (default: original)")
    oracleParser.add_argument('--threshold',
                              action="store",
                              type=float,
                              nargs='+',
                              dest="thresholds",
                              default=None,
                              help="TLO threshold(s) (default: environment default)")
    oracleParser.add_argument('--json',
                              action="store_true",
                              dest="oracleJsonFlag",
                              default=False,
                              help="print JSON instead of CSV")

    runParser = subparsers.add_parser('run', help="run a seeded multi-trial experiment")
    runParser.add_argument('--config',
                           action="store",
                           type=str,
                           dest="configFile",
                           default=None,
                           help="experiment config file (JSON)")
    runParser.add_argument('--agent',
                           action="store",
                           type=str,
                           dest="agent",
                           default=None,
                           help="baseline, moss or options")
    runParser.add_argument('--env',
                           action="store",
                           type=str,
                           dest="environment",
                           default=None,
                           help="catalog environment or environment file")
    runParser.add_argument('--alpha-schedule',
                           action="store",
                           type=str,
                           dest="alphaSchedule",
                           default=None,
                           help="constant:<v> or linear:<initial>:<final>")
    runParser.add_argument('--temp-schedule',
                           action="store",
                           type=str,
                           dest="temperatureSchedule",
                           default=None,
                           help="constant:<v> or linear:<initial>:<final>")
    runParser.add_argument('--threshold',
                           action="store",
                           type=float,
                           nargs='+',
                           dest="thresholds",
                           default=None,
                           help="TLO threshold(s)")
    runParser.add_argument('--trials',
                           action="store",
                           type=int,
                           dest="trials",
                           default=None,
                           help="number of trials")
    runParser.add_argument('--episodes',
                           action="store",
                           type=int,
                           dest="episodesPerTrial",
                           default=None,
                           help="episodes per trial")
    runParser.add_argument('--seed',
                           action="store",
                           type=int,
                           dest="baseSeed",
                           default=None,
                           help="base seed; trial k uses seed + k")
    runParser.add_argument('--out',
                           action="store",
                           type=str,
                           dest="outputDir",
                           default=None,
                           help="output directory")
    runParser.add_argument('--workers',
                           action="store",
                           type=int,
                           dest="workers",
                           default=config.DEFAULT_WORKERS,
                           help="number of worker processes (default: one per CPU)")
    runParser.add_argument('--log-q',
                           action="store_true",
                           dest="logQValuesFlag",
                           default=False,
                           help="log Q(start, option) per episode (options agent)")

    summarizeParser = subparsers.add_parser('summarize',
                                            help="print the final-policy table of a run")
    summarizeParser.add_argument('--dir',
                                 action="store",
                                 type=str,
                                 dest="outputDir",
                                 required=True,
                                 help="experiment output directory")

    subparsers.add_parser('envs', help="list the shipped environments")
    return parser


PARSER = buildParser()


def parseCommandLine(argv=None):
    """Parse command line arguments."""
    return PARSER.parse_args(argv)


def printHelpAndExit():
    """Print usage message and exit."""
    PARSER.print_help()
    sys.exit(config.ERR_CODE_NO_COMMAND)


def exitCode(error):
    """Return the exit code for a MorlError."""
    if isinstance(error, shared.SpecValidationError):
        return config.ERR_CODE_SPEC
    return EXIT_CODES.get(error.code, config.ERR_CODE_GENERAL)


def commandOracle(args):
    """Print the oracle table of an environment."""
    env = environments.resolveEnvironment(args.env)
    thresholds = args.thresholds
    if thresholds is None:
        thresholds = environments.defaultThresholds(args.env)
    if thresholds is None:
        shared.printWarning("no default thresholds for '" + args.env + "', using "
                            + repr(config.DEFAULT_THRESHOLD))
        thresholds = [config.DEFAULT_THRESHOLD] * (env.objectiveCount() - 1)
    ordering = UtilityOrdering(thresholds)
    rows = oracle.oracleTable(env, ordering)
    if config.ORACLE_JSON_FLAG:
        oracle.writeOracleJson(env, ordering, rows, sys.stdout)
    else:
        oracle.writeOracleCsv(rows, env.objectiveCount(), sys.stdout)


def commandRun(args):
    """Run an experiment and print its summary table."""
    if args.configFile is not None:
        experiment = harness.ExperimentConfig.fromFile(args.configFile)
    else:
        experiment = harness.ExperimentConfig()
    experiment = experiment.withOverrides(
        agent=args.agent,
        environment=args.environment,
        alphaSchedule=args.alphaSchedule,
        temperatureSchedule=args.temperatureSchedule,
        thresholds=args.thresholds,
        trials=args.trials,
        episodesPerTrial=args.episodesPerTrial,
        baseSeed=args.baseSeed,
        outputDir=args.outputDir,
        logQValues=True if config.LOG_Q_VALUES_FLAG else None)
    if args.workers < 1:
        raise shared.ConfigError("--workers must be at least 1")
    summary = harness.runExperiment(experiment, args.workers)
    sys.stdout.write(harness.formatSummaryTable(summary.toDict()))


def commandSummarize(args):
    """Print the final-policy table of an experiment directory."""
    harness.summarize(args.outputDir)


def commandEnvs(args):
    """List catalog environments with their states, horizon and default thresholds."""
    for name in sorted(environments.CATALOG):
        env = environments.CATALOG[name]()
        thresholds = environments.defaultThresholds(name)
        sys.stdout.write(name + "\tstates=" + ",".join(env.states)
                         + "\thorizon=" + str(env.horizon)
                         + "\tthresholds=" + ",".join(repr(t) for t in thresholds) + "\n")


COMMANDS = {
    'oracle': commandOracle,
    'run': commandRun,
    'summarize': commandSummarize,
    'envs': commandEnvs,
}


def main(argv=None):
    """Main command line application."""
    args = parseCommandLine(argv)

    if not args.command:
        printHelpAndExit()

    # Makes user-specified flags available to any module that imports 'config.py'
    config.OUTPUT_VERBOSE_FLAG = args.outputVerboseFlag
    config.ORACLE_JSON_FLAG = getattr(args, "oracleJsonFlag", False)
    config.LOG_Q_VALUES_FLAG = getattr(args, "logQValuesFlag", False)

    try:
        COMMANDS[args.command](args)
    except MorlError as ex:
        shared.errorExit(str(ex), exitCode(ex))


if __name__ == "__main__":
    main()
