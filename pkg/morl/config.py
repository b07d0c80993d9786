"""Morl configuration settings that are shared between sub-modules."""
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
import os

# Flags set from the command line
OUTPUT_VERBOSE_FLAG = False
ORACLE_JSON_FLAG = False
LOG_Q_VALUES_FLAG = False

# Hyperparameter defaults for the Space Traders experiments
DEFAULT_ALPHA = 0.01
DEFAULT_LAMBDA = 0.95
DEFAULT_GAMMA = 1.0
DEFAULT_TEMPERATURE_INITIAL = 10.0
DEFAULT_TEMPERATURE_FINAL = 2.0
DEFAULT_EPISODES = 20000
DEFAULT_TRIALS = 20
DEFAULT_BASE_SEED = 0
DEFAULT_WORKERS = os.cpu_count() or 1
DEFAULT_OUTPUT_DIR = "morl-out"

# TLO thresholds on the success objective, per catalog environment
DEFAULT_THRESHOLD = 0.88
DEFAULT_THRESHOLDS = {
    'original': [0.88],
    'mr': [0.76],
    '3st': [0.76],
    '3st-delayed': [0.76],
    'id': [0.88],
}

# Numeric tolerances
PROBABILITY_TOLERANCE = 1e-12
ORACLE_TOLERANCE = 1e-9

# Terminal sentinels as written in environment files
SUCCESS_SENTINEL = "$success"
FAILURE_SENTINEL = "$failure"

# Artifact names
SUMMARY_FILE = "summary.json"
CHART_FILE_PATTERN = "trial_{}_chart.csv"
RETURNS_FILE_PATTERN = "trial_{}_returns.csv"
QVALUES_FILE_PATTERN = "trial_{}_qvalues.csv"
CSV_LINE_TERMINATOR = "\n"

# Exit codes
ERR_CODE_GENERAL = -1
ERR_CODE_SPEC = -2
ERR_CODE_CONFIG = -3
ERR_CODE_OUTPUT = -4
ERR_CODE_MISSING_ARTIFACTS = -5
ERR_CODE_NO_COMMAND = -7

UTF8_ENCODING = "UTF-8"
DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
ENVIRONMENTS_DIR = os.path.join(DATA_DIR, "environments")
