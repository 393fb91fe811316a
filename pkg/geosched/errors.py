# -*- coding: utf-8 -*-

# Copyright (c) 2025 geosched developers

# This library is free software: you can redistribute it and/or
# modify it under the terms of the GNU Lesser General Public
# License as published by the Free Software Foundation version 3.
#
# This library is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public
# License along with this library.  If not, see <http://www.gnu.org/licenses/>.

"""Exceptions raised by geosched.

Every error derives from :class:`GeoSchedError` and from the builtin
exception closest in meaning, so ``except ValueError`` keeps working for
callers that do not know about this package.
"""


class GeoSchedError(Exception):
    """Base class of all geosched errors"""


class NumericError(GeoSchedError):
    """Errors the command line reports with exit code 3"""


class ProcessError(GeoSchedError, ValueError):
    """Invalid noise process parameters"""


class DomainError(GeoSchedError, ValueError):
    """Argument outside the domain of a function"""


class SingularityError(NumericError, ArithmeticError):
    """Quantity diverges at the requested point"""


class IntegrationError(NumericError, ArithmeticError):
    """Quadrature or root bracketing did not converge"""


class ScheduleError(GeoSchedError, ValueError):
    """Schedule invariants violated"""


class CapacityError(NumericError, ValueError):
    """Enumerated state space too large"""


class DistributionError(GeoSchedError, ValueError):
    """Malformed data distribution"""


class AbsoluteContinuityError(NumericError, ValueError):
    """p puts mass where q has none"""


class InconsistentStateError(GeoSchedError, ValueError):
    """No support sequence agrees with the unmasked tokens of a state"""


class PreconditionError(GeoSchedError, ValueError):
    """Caller broke an operation's precondition"""


class RatioUndefinedError(NumericError, ZeroDivisionError):
    """Ratio with a vanishing denominator"""


class ScheduleFileError(GeoSchedError, ValueError):
    """Malformed schedule file"""


class UsageError(GeoSchedError, ValueError):
    """Invalid command line input"""


class UnderflowError(NumericError, ArithmeticError):
    """Survival value underflows to zero before the end of the path"""
