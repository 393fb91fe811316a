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

"""Fisher-Rao geometry of the masked probability path and its schedules.

The path ``t -> q_t`` of a masked process over ``N`` tokens has the scalar
Fisher-Rao metric ``I(t) = N beta(t)^2 alpha(t) / (1 - alpha(t))`` and the
arc length ``Lambda(t) = 2 sqrt(N) (pi/2 - arcsin(sqrt(alpha(t))))``.
A schedule is optimal when consecutive grid points are equally far apart
in arc length, i.e. ``t_i = Lambda^{-1}(Lambda(1) i / T)``.

Two engines compute such schedules:

* the closed form, ``alpha(t_i) = cos^2(i/T (pi/2 - arcsin sqrt(alpha_1)))``
  (:func:`optimal_schedule`, :func:`cosine_schedule`), and
* a generic one for any scalar metric, quadrature plus bisection
  (:func:`arc_length_numeric`, :func:`geodesic_generator_numeric`).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import partial
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect

from geosched.config import BISECT_MAXITER, BISECT_TOL, QUAD_TOL
from geosched.errors import (
    DomainError, IntegrationError, ScheduleError, SingularityError,
    UnderflowError)
from geosched.noise_process import LinearAlpha, time_at_alpha

logger = logging.getLogger(__name__)

_QUAD_LIMIT = 200


class ScheduleTag(Enum):
    GEODESIC_CLOSED = 'geodesic-closed-form'
    GEODESIC_NUMERIC = 'geodesic-numeric'
    UNIFORM_TIME = 'uniform-time'
    UNIFORM_ALPHA = 'uniform-alpha'
    COSINE_OFFSET = 'cosine-offset'
    GENERATED = 'generated'


@dataclass(frozen=True)
class MetricCurve:
    """Scalar metric ``delta(t)`` along a one-dimensional path.

    ``evaluate`` may raise :class:`SingularityError` at the endpoints
    flagged singular. The metric must be integrable in the sense that
    ``sqrt(delta)`` has a finite integral over ``[0, 1]``.
    """

    evaluate: Callable[[float], float]
    singular_at_start: bool = False
    singular_at_end: bool = False

    def __call__(self, t):
        return self.evaluate(t)


@dataclass(frozen=True, eq=False)
class Schedule:
    """Discretisation grid ``0 = t_0 < ... < t_T = 1``.

    ``total_length`` is the arc length of the whole path for a single
    token. Use :meth:`length` for ``N`` tokens.
    """

    times: np.ndarray
    alphas: np.ndarray
    total_length: float
    generator_tag: ScheduleTag

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        alphas = np.array(self.alphas, dtype=float)

        if times.ndim != 1 or times.shape != alphas.shape:
            raise ScheduleError("times and alphas must be 1-D of equal length")
        if len(times) < 2:
            raise ScheduleError("a schedule needs at least one step")
        if times[0] != 0.0 or times[-1] != 1.0:
            raise ScheduleError(
                "schedule must start at 0 and end at 1, got %r and %r"
                % (times[0], times[-1]))
        if np.any(np.diff(times) <= 0):
            raise ScheduleError("schedule times must be strictly increasing")
        if alphas[0] != 1.0:
            raise ScheduleError("schedule must start at alpha=1")
        if np.any(np.diff(alphas) >= 0):
            raise ScheduleError("schedule alphas must be strictly decreasing")

        times.flags.writeable = False
        alphas.flags.writeable = False
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'alphas', alphas)
        object.__setattr__(self, 'total_length', float(self.total_length))
        object.__setattr__(self, 'generator_tag',
                           ScheduleTag(self.generator_tag))

    @property
    def steps(self):
        return len(self.times) - 1

    def length(self, N=1):
        return math.sqrt(N) * self.total_length


def _check_tokens(N):
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise DomainError("token count must be a positive integer: %r" % N)
    return int(N)


def _check_steps(T):
    if isinstance(T, bool) or int(T) != T or T < 1:
        raise ScheduleError("step count must be a positive integer: %r" % T)
    return int(T)


def _check_time(t):
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError("time out of [0, 1]: %r" % t)
    return t


# --------------------------------------------------------------------------
#  Fisher-Rao metric and arc length in closed form


def fisher_rao_metric(process, N, t):
    """Fisher-Rao metric of the masked path, ``N alpha'^2 / (alpha (1-alpha))``

    Diverges where ``alpha`` is 0 or 1, which includes ``t = 0``.
    """
    N = _check_tokens(N)
    t = _check_time(t)

    alpha = float(process.alpha(t))
    masked = float(process.one_minus_alpha(t))
    if masked <= 0.0 or alpha <= 0.0:
        raise SingularityError(
            "Fisher-Rao metric diverges at t=%r (alpha=%r)" % (t, alpha))

    beta = float(process.beta(t))
    return N * beta * beta * alpha / masked


def fisher_rao_curve(process, N):
    """The Fisher-Rao metric of ``process`` over ``N`` tokens as a curve"""
    N = _check_tokens(N)
    return MetricCurve(
        evaluate=partial(fisher_rao_metric, process, N),
        singular_at_start=True,
        singular_at_end=process.alpha_1 == 0.0)


def constant_curve(value):
    """Flat metric ``delta(t) == value``"""
    value = float(value)
    if not value >= 0:
        raise DomainError("metric must be nonnegative: %r" % value)
    return MetricCurve(evaluate=lambda t: value)


def _half_angle(process, t):
    # pi/2 - arcsin(sqrt(alpha)), accurate at both ends
    return np.arctan2(np.sqrt(process.one_minus_alpha(t)),
                      np.sqrt(np.clip(process.alpha(t), 0.0, 1.0)))


def arc_length_closed(process, N, t):
    """``Lambda(t) = 2 sqrt(N) (pi/2 - arcsin(sqrt(alpha_t)))``"""
    N = _check_tokens(N)
    t = _check_time(t)
    return 2.0 * math.sqrt(N) * float(_half_angle(process, t))


# --------------------------------------------------------------------------
#  Generic engine: any integrable scalar metric
#
#  Integrals run in the variable u with r = sin^2(pi u / 2). The Jacobian
#  (pi/2) sin(pi u) vanishes like sqrt(r) and sqrt(1 - r) at the ends,
#  which cancels inverse square root singularities of sqrt(delta).


def _to_u(t):
    return 2.0 / math.pi * math.asin(math.sqrt(t))


def _from_u(u):
    return math.sin(0.5 * math.pi * u) ** 2


def _length_integrand(metric, u):
    r = _from_u(u)
    try:
        value = metric.evaluate(r)
    except SingularityError:
        if r in (0.0, 1.0):
            # endpoint nodes carry zero weight
            return 0.0
        raise

    if not value >= 0.0:
        raise IntegrationError("metric is negative at t=%r: %r" % (r, value))

    return math.sqrt(value) * 0.5 * math.pi * math.sin(math.pi * u)


def _length_in_u(metric, u, tol):
    if u <= 0.0:
        return 0.0

    result = quad(partial(_length_integrand, metric), 0.0, u,
                  epsabs=tol, epsrel=0.0, limit=_QUAD_LIMIT, full_output=1)
    value, abserr, info = result[:3]

    if len(result) > 3 or not math.isfinite(value) or abserr > tol:
        raise IntegrationError(
            "arc length quadrature did not converge (estimate %r, "
            "error %r): the metric may not be integrable" % (value, abserr))

    if info['last'] > _QUAD_LIMIT // 4:
        logger.debug("arc length up to u=%r needed %d subintervals",
                     u, info['last'])

    return value


def arc_length_numeric(metric, t, tol=QUAD_TOL):
    """``Lambda(t)``, the integral of ``sqrt(delta)`` over ``[0, t]``"""
    t = _check_time(t)
    if not tol > 0:
        raise DomainError("tolerance must be positive: %r" % tol)

    return _length_in_u(metric, _to_u(t), tol)


def geodesic_generator_numeric(metric, t, tol=BISECT_TOL, total=None):
    """Constant-speed generator ``phi*(t) = Lambda^{-1}(Lambda(1) t)``.

    Args:
        metric: integrable :class:`MetricCurve`
        t: time in ``[0, 1]``
        tol: bisection tolerance in the integration variable ``u``,
            divided by ``max(1, Lambda(1))``. The arc length reached is
            off by at most ``tol`` times
            ``max dLambda/du / max(1, Lambda(1))``, which is ``tol`` for
            the Fisher-Rao metric of linear-alpha.
        total: ``Lambda(1)`` if already known
    """
    t = _check_time(t)
    if t == 0.0 or t == 1.0:
        return t

    quad_tol = min(QUAD_TOL, 0.1 * tol)
    if total is None:
        total = _length_in_u(metric, 1.0, quad_tol)
    if total == 0.0:
        raise IntegrationError("path has zero length; geodesic undefined")

    target = t * total

    # width of the final bracket in u
    scale = max(1.0, total)
    try:
        u = bisect(lambda u: _length_in_u(metric, u, quad_tol) - target,
                   0.0, 1.0, xtol=tol / scale, maxiter=BISECT_MAXITER)
    except (RuntimeError, ValueError) as err:
        raise IntegrationError(str(err)) from err

    return _from_u(u)


# --------------------------------------------------------------------------
#  Schedules


def _theta(process):
    return float(_half_angle(process, 1.0))


def _cos_squared(x):
    # half-angle form keeps cos^2(pi/4) == 0.5 exactly
    return 0.5 * (1.0 + np.cos(2.0 * np.asarray(x)))


def _pin_alphas(process, alphas):
    alphas[0] = 1.0
    alphas[-1] = process.alpha_1
    if np.any(alphas[1:-1] <= 0.0):
        raise UnderflowError(
            "survival value underflows to 0 before t=1 for %s; use fewer "
            "steps or a smaller rate" % process.kind.value)
    return alphas


def _survival(process, times):
    return _pin_alphas(process, np.array(process.alpha(times), dtype=float))


def _schedule_from_alphas(process, alphas, tag):
    alphas = _pin_alphas(process, np.array(alphas, dtype=float))

    times = np.array([time_at_alpha(process, a) for a in alphas])
    times[0] = 0.0
    times[-1] = 1.0

    return Schedule(times=times, alphas=alphas,
                    total_length=arc_length_closed(process, 1, 1.0),
                    generator_tag=tag)


def optimal_schedule(process, T):
    """Fisher-Rao optimal schedule of a masked process with ``T`` steps.

    ``alpha_i = cos^2(i/T (pi/2 - arcsin sqrt(alpha_1)))`` and
    ``t_i = F^{-1}(-log alpha_i)``. The token count cancels out.
    """
    T = _check_steps(T)
    grid = np.arange(T + 1) / T
    alphas = _cos_squared(grid * _theta(process))

    sched = _schedule_from_alphas(process, alphas,
                                  ScheduleTag.GEODESIC_CLOSED)
    logger.debug("optimal schedule: %s T=%d total length %r",
                 process.kind.value, T, sched.total_length)
    return sched


def geodesic_generator_closed(process, t):
    """Closed form of ``phi*(t)`` for the Fisher-Rao metric"""
    t = _check_time(t)
    if t == 0.0 or t == 1.0:
        return t

    return time_at_alpha(process, float(_cos_squared(t * _theta(process))))


def cosine_schedule(T, offset=0.0):
    """Cosine schedule ``alpha_i = cos^2(i pi / 2T)`` under linear-alpha.

    A positive ``offset`` s gives the shifted family
    ``alpha_i = f(i/T) / f(0)`` with ``f(u) = cos^2((u + s)/(1 + s) pi/2)``,
    which is no longer geodesic.
    """
    T = _check_steps(T)
    process = LinearAlpha()
    if offset == 0:
        return optimal_schedule(process, T)

    if not offset > 0:
        raise DomainError("cosine offset must be nonnegative: %r" % offset)

    grid = np.arange(T + 1) / T
    f = np.cos((grid + offset) / (1.0 + offset) * 0.5 * math.pi) ** 2
    return _schedule_from_alphas(process, f / f[0],
                                 ScheduleTag.COSINE_OFFSET)


def uniform_time_schedule(T, process=None):
    """Baseline ``t_i = i / T``; alphas from ``process`` (linear-alpha)"""
    T = _check_steps(T)
    process = LinearAlpha() if process is None else process

    times = np.arange(T + 1) / T
    times[-1] = 1.0
    alphas = _survival(process, times)

    return Schedule(times=times, alphas=alphas,
                    total_length=arc_length_closed(process, 1, 1.0),
                    generator_tag=ScheduleTag.UNIFORM_TIME)


def uniform_alpha_schedule(process, T):
    """Baseline ``alpha_i = 1 - (i/T)(1 - alpha_1)``"""
    T = _check_steps(T)
    grid = np.arange(T + 1) / T
    alphas = 1.0 - grid * (1.0 - process.alpha_1)
    return _schedule_from_alphas(process, alphas, ScheduleTag.UNIFORM_ALPHA)


def numeric_optimal_schedule(process, T, N=1, tol=BISECT_TOL):
    """Optimal schedule from the generic engine on the Fisher-Rao curve"""
    T = _check_steps(T)
    metric = fisher_rao_curve(process, N)
    total = _length_in_u(metric, 1.0, min(QUAD_TOL, 0.1 * tol))

    times = np.array([geodesic_generator_numeric(metric, i / T, tol, total)
                      for i in range(T + 1)])
    alphas = _survival(process, times)

    return Schedule(times=times, alphas=alphas,
                    total_length=total / math.sqrt(N),
                    generator_tag=ScheduleTag.GEODESIC_NUMERIC)


def generated_schedule(process, phi, T, tag=ScheduleTag.GENERATED):
    """Schedule generated by ``phi``: ``t_i = phi(i / T)``.

    ``phi`` must be strictly increasing with ``phi(0) = 0`` and
    ``phi(1) = 1``; the endpoints are pinned.
    """
    T = _check_steps(T)
    times = np.array([phi(i / T) for i in range(T + 1)], dtype=float)
    times[0] = 0.0
    times[-1] = 1.0
    alphas = _survival(process, times)

    return Schedule(times=times, alphas=alphas,
                    total_length=arc_length_closed(process, 1, 1.0),
                    generator_tag=tag)


def per_step_lengths(process, N, sched):
    """Arc length of each step, ``Lambda(t_{i+1}) - Lambda(t_i)``"""
    N = _check_tokens(N)
    lengths = 2.0 * math.sqrt(N) * _half_angle(process, sched.times)
    return np.diff(lengths)


# --------------------------------------------------------------------------
#  Energy


def schedule_energy(process, N, sched):
    """Discrete energy ``T * sum(l_i^2)`` of a schedule.

    Never below ``Lambda(1)^2``; equal to it exactly when all steps
    have the same arc length.
    """
    lengths = per_step_lengths(process, N, sched)
    return float(len(lengths) * np.sum(lengths ** 2))


def path_energy(metric, phi, dphi, tol=QUAD_TOL):
    """Energy ``integral of delta(phi(s)) phi'(s)^2`` over ``[0, 1]``.

    Returns ``inf`` when the integral diverges, as it does for generators
    leaving a singular endpoint too fast.
    """
    def integrand(s):
        r = phi(s)
        try:
            value = metric.evaluate(r)
        except SingularityError:
            if r in (0.0, 1.0):
                return 0.0
            raise
        return value * dphi(s) ** 2

    result = quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=tol,
                  limit=_QUAD_LIMIT, full_output=1)
    value, abserr = result[:2]

    if len(result) > 3 or not math.isfinite(value):
        logger.debug("energy integral diverges (estimate %r, error %r)",
                     value, abserr)
        return math.inf

    return value


# --------------------------------------------------------------------------
#  Generators by name


def _build_cosine(process, T, offset=0.0):
    if not isinstance(process, LinearAlpha):
        raise ScheduleError(
            "the cosine schedule is defined for the linear-alpha process; "
            "use the geodesic generator for %s" % process.kind.value)
    return cosine_schedule(T, offset)


SCHEDULE_GENERATORS = {
    'geodesic': lambda process, T, offset=0.0: optimal_schedule(process, T),
    'geodesic-numeric':
        lambda process, T, offset=0.0: numeric_optimal_schedule(process, T),
    'cosine': _build_cosine,
    'uniform-time':
        lambda process, T, offset=0.0: uniform_time_schedule(T, process),
    'uniform-alpha':
        lambda process, T, offset=0.0: uniform_alpha_schedule(process, T),
}


def build_schedule(name, process, T, offset=0.0):
    """Schedule from the generator registered under ``name``"""
    try:
        generator = SCHEDULE_GENERATORS[name]
    except KeyError:
        raise ScheduleError(
            "unknown schedule generator %r, expected one of %s"
            % (name, ', '.join(SCHEDULE_GENERATORS))) from None
    return generator(process, T, offset)
