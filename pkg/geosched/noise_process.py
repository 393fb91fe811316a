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

"""Forward masking processes.

A noise process is defined by its masking rate ``beta(t)`` on ``[0, 1]``.
The survival function ``alpha(t) = exp(-F(t))`` with the cumulative rate
``F(t) = integral of beta over [0, t]`` is the probability that a token
is still unmasked at time ``t``.

Three families are available through :func:`make_process`:

* ``linear-alpha``: ``alpha(t) = 1 - t``, ``beta(t) = 1 / (1 - t)``.
  ``F(1)`` is infinite and ``alpha(1) == 0`` by the convention
  ``exp(-inf) == 0``.
* ``constant-beta``: ``beta(t) = c``, ``alpha(t) = exp(-c t)``.
* ``tabulated-beta``: ``beta`` linearly interpolated between knots,
  ``F`` integrated exactly on each linear piece.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import bisect

from geosched.config import BISECT_MAXITER
from geosched.errors import DomainError, IntegrationError, ProcessError

logger = logging.getLogger(__name__)

# Slack allowed when F_inverse is asked for a value just above F(1)
# because -log(alpha_1) was rounded up.
_F_TOP_SLACK = 1e-12


class ProcessKind(Enum):
    LINEAR_ALPHA = 'linear-alpha'
    CONSTANT_BETA = 'constant-beta'
    TABULATED_BETA = 'tabulated-beta'


class NoiseProcess:
    """Base class of noise process families.

    Subclasses implement :meth:`beta`, :meth:`F`, :meth:`alpha`,
    :meth:`one_minus_alpha` and :meth:`_inverse`. All of them accept
    floats or numpy arrays of times in ``[0, 1]``.
    """

    kind = None

    @property
    def params(self):
        """Parameter list accepted back by :func:`make_process`"""
        raise NotImplementedError

    @property
    def alpha_1(self):
        """Terminal survival value"""
        return float(self.alpha(1.0))

    @property
    def F_1(self):
        return float(self.F(1.0))

    def beta(self, t):
        raise NotImplementedError

    def F(self, t):
        raise NotImplementedError

    def alpha(self, t):
        raise NotImplementedError

    def one_minus_alpha(self, t):
        """``1 - alpha(t)`` without cancellation near ``t = 0``"""
        return -np.expm1(-self.F(t))

    def alpha_dot(self, t):
        return -self.beta(t) * self.alpha(t)

    def _inverse(self, y):
        raise NotImplementedError

    def describe(self):
        return {'kind': self.kind.value, 'params': list(self.params)}


@dataclass(frozen=True)
class LinearAlpha(NoiseProcess):

    kind = ProcessKind.LINEAR_ALPHA

    @property
    def params(self):
        return []

    @property
    def alpha_1(self):
        return 0.0

    @property
    def F_1(self):
        return np.inf

    def beta(self, t):
        with np.errstate(divide='ignore'):
            return 1.0 / (1.0 - np.asarray(t, dtype=float))

    def F(self, t):
        with np.errstate(divide='ignore'):
            return -np.log1p(-np.asarray(t, dtype=float))

    def alpha(self, t):
        return 1.0 - np.asarray(t, dtype=float)

    def one_minus_alpha(self, t):
        return np.asarray(t, dtype=float) + 0.0

    def alpha_dot(self, t):
        # Holds at t = 1 as well, where beta diverges.
        return np.full_like(np.asarray(t, dtype=float), -1.0)

    def _inverse(self, y):
        return float(-np.expm1(-y))


@dataclass(frozen=True)
class ConstantBeta(NoiseProcess):

    rate: float

    kind = ProcessKind.CONSTANT_BETA

    def __post_init__(self):
        if not np.isfinite(self.rate) or self.rate <= 0:
            raise ProcessError(
                "constant-beta rate must be positive and finite: %r"
                % self.rate)

    @property
    def params(self):
        return [float(self.rate)]

    def beta(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.rate)

    def F(self, t):
        return self.rate * np.asarray(t, dtype=float)

    def alpha(self, t):
        return np.exp(-self.F(t))

    def _inverse(self, y):
        return float(y / self.rate)


@dataclass(frozen=True, eq=False)
class TabulatedBeta(NoiseProcess):
    """Piecewise-linear rate through ``(knots[i], rates[i])``"""

    knots: np.ndarray
    rates: np.ndarray
    _cumulative: np.ndarray = field(init=False, repr=False)
    _slopes: np.ndarray = field(init=False, repr=False)

    kind = ProcessKind.TABULATED_BETA

    def __post_init__(self):
        knots = np.array(self.knots, dtype=float)
        rates = np.array(self.rates, dtype=float)

        if knots.ndim != 1 or knots.shape != rates.shape:
            raise ProcessError("knots and rates must be 1-D of equal length")
        if len(knots) < 2:
            raise ProcessError("a rate table needs at least 2 knots")
        if np.any(np.diff(knots) <= 0):
            raise ProcessError("table knots must be strictly increasing")
        if knots[0] != 0.0 or knots[-1] != 1.0:
            raise ProcessError("table knots must span [0, 1]")
        if not np.all(np.isfinite(rates)) or np.any(rates <= 0):
            raise ProcessError("table rates must be positive and finite")

        knots.flags.writeable = False
        rates.flags.writeable = False
        cumulative = cumulative_trapezoid(rates, knots, initial=0.0)
        slopes = np.diff(rates) / np.diff(knots)
        cumulative.flags.writeable = False
        slopes.flags.writeable = False

        object.__setattr__(self, 'knots', knots)
        object.__setattr__(self, 'rates', rates)
        object.__setattr__(self, '_cumulative', cumulative)
        object.__setattr__(self, '_slopes', slopes)

    @property
    def params(self):
        return [float(v) for pair in zip(self.knots, self.rates)
                for v in pair]

    def _segment(self, t):
        t = np.asarray(t, dtype=float)
        k = np.searchsorted(self.knots, t, side='right') - 1
        return t, np.clip(k, 0, len(self.knots) - 2)

    def beta(self, t):
        return np.interp(t, self.knots, self.rates)

    def F(self, t):
        t, k = self._segment(t)
        dt = t - self.knots[k]
        return (self._cumulative[k] + self.rates[k] * dt
                + 0.5 * self._slopes[k] * dt * dt)

    def alpha(self, t):
        return np.exp(-self.F(t))

    def _inverse(self, y):
        return bisect(lambda t: float(self.F(t)) - y, 0.0, 1.0,
                      xtol=1e-15, maxiter=BISECT_MAXITER)

    def __eq__(self, other):
        if not isinstance(other, TabulatedBeta):
            return NotImplemented
        return (np.array_equal(self.knots, other.knots)
                and np.array_equal(self.rates, other.rates))

    def __hash__(self):
        return hash((self.knots.tobytes(), self.rates.tobytes()))


def _make_linear(params):
    if len(params):
        raise ProcessError("linear-alpha takes no parameters")
    return LinearAlpha()


def _make_constant(params):
    if len(params) != 1:
        raise ProcessError("constant-beta takes exactly one rate")
    return ConstantBeta(float(params[0]))


def _make_tabulated(params):
    params = np.asarray(params, dtype=float)
    if params.ndim != 1 or len(params) % 2:
        raise ProcessError(
            "tabulated-beta takes interleaved (time, rate) pairs")
    return TabulatedBeta(params[0::2], params[1::2])


_FACTORIES = {
    ProcessKind.LINEAR_ALPHA: _make_linear,
    ProcessKind.CONSTANT_BETA: _make_constant,
    ProcessKind.TABULATED_BETA: _make_tabulated,
}


def make_process(kind, params=()):
    """Create a noise process.

    Args:
        kind: :class:`ProcessKind` or its string value
        params: ``[]`` for linear-alpha, ``[c]`` for constant-beta,
            ``[t0, b0, t1, b1, ...]`` for tabulated-beta
    """
    try:
        kind = ProcessKind(kind)
    except ValueError:
        raise ProcessError("unknown process kind: %r" % (kind,)) from None

    return _FACTORIES[kind](list(params))


def F_inverse(process, y):
    """Time ``t`` in ``[0, 1]`` with ``F(t) == y``.

    ``y == inf`` maps to ``t == 1`` when ``F(1)`` is infinite.
    """
    y = float(y)
    F_1 = process.F_1

    if np.isnan(y) or y < 0:
        raise DomainError("F_inverse undefined for y=%r" % y)
    if y == 0:
        return 0.0
    if y >= F_1:
        if y == F_1 or y <= F_1 * (1 + _F_TOP_SLACK):
            return 1.0
        raise DomainError("y=%r exceeds F(1)=%r" % (y, F_1))

    try:
        t = process._inverse(y)
    except RuntimeError as err:
        raise IntegrationError(str(err)) from err

    return min(max(t, 0.0), 1.0)


def alpha_dot(process, t):
    """Time derivative of the survival function, ``-beta(t) alpha(t)``"""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError("time out of [0, 1]: %r" % t)

    return float(process.alpha_dot(t))


def time_at_alpha(process, alpha):
    """Time at which the survival function reaches ``alpha``.

    Same as ``F_inverse(process, -log(alpha))``; exact for linear-alpha.
    ``alpha == 0`` maps to ``t == 1`` whenever the terminal survival value
    is zero in floating point, including a finite ``F(1)`` beyond the
    underflow threshold of ``exp``.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError("survival value out of [0, 1]: %r" % alpha)
    if isinstance(process, LinearAlpha):
        return 1.0 - alpha
    if alpha == 0.0:
        if process.alpha_1 == 0.0:
            return 1.0
        raise DomainError("survival value 0 is never reached; alpha(1)=%r"
                          % process.alpha_1)
    return F_inverse(process, -np.log(alpha))
