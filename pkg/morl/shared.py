"""Shared functions and error types for morl sub-modules."""
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

import sys
from . import config


class MorlError(Exception):
    """Base error; code is one of the symbolic error names (e.g. PARSE_ERROR)."""

    def __init__(self, code, msg):
        """Initialise a MorlError."""
        Exception.__init__(self, code + ": " + msg)
        self.code = code
        self.msg = msg


class SpecValidationError(MorlError):
    """Environment spec violates one or more invariants.

    All violations are collected, not only the first one.
    """

    def __init__(self, violations):
        """Initialise from a list of Violation objects."""
        msg = "; ".join(str(v) for v in violations)
        MorlError.__init__(self, violations[0].code if violations else "INVALID_SPEC", msg)
        self.violations = list(violations)

    def codes(self):
        """Return set of violation codes."""
        return {v.code for v in self.violations}


class SpecParseError(MorlError):
    """Environment file cannot be parsed against the documented schema."""

    def __init__(self, msg, line=None, column=None, key=None):
        """Initialise a SpecParseError with optional position or key path."""
        where = ""
        if line is not None:
            where = " (line " + str(line) + ", column " + str(column) + ")"
        elif key is not None:
            where = " (key '" + key + "')"
        MorlError.__init__(self, "PARSE_ERROR", msg + where)
        self.line = line
        self.column = column
        self.key = key


class ConfigError(MorlError):
    """Experiment configuration is invalid."""

    def __init__(self, msg):
        """Initialise a ConfigError."""
        MorlError.__init__(self, "CONFIG_ERROR", msg)


def printWarning(msg):
    """Print warning to stderr."""
    msgString = ("User warning: " + msg + "\n")
    sys.stderr.write(msgString)


def printInfo(msg):
    """Print progress message to stderr, only in verbose mode."""
    if config.OUTPUT_VERBOSE_FLAG:
        sys.stderr.write("Info: " + msg + "\n")


def errorExit(msg, code=None):
    """Print error message to stderr and exit."""
    msgString = ("Error: " + msg + "\n")
    sys.stderr.write(msgString)
    sys.exit(code)


def formatFloat(value):
    """Return shortest round-tripping decimal text for a float."""
    return repr(float(value))
