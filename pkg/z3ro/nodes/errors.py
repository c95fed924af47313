# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Exceptions raised by the nodes

    Copyright 2026 by the z3ro authors, GNU license
"""

from typing import List, Tuple


class Z3roError(Exception):
    """Base class of all package errors"""


class InvalidParameter(Z3roError, ValueError):
    """An argument is non-finite, out of range or has the wrong length"""


class DegenerateChannel(Z3roError, ValueError):
    """The channel is all-zero or has a zero-gain antenna"""


class InvalidSaturatedSet(Z3roError, ValueError):
    """The saturated antenna set is empty, too large or out of range"""


class InfeasibleChannel(Z3roError, RuntimeError):
    """No antenna yields a feasible line-search maximum"""


class InvalidCriticalPoint(Z3roError, ValueError):
    """A point handed to the second-order check violates the constraints"""


class ConfigError(Z3roError, ValueError):
    """Experiment configuration failed validation

    Args:
        errors (List[Tuple[str, str]]): (path, reason) of every violation
    """

    def __init__(self, errors: List[Tuple[str, str]]):
        self.errors = list(errors)
        super().__init__(
            "; ".join(f"{path}: {reason}" for path, reason in self.errors)
        )
