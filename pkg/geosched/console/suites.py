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

"""Checks run by ``geosched verify``.

Each suite compares a closed form against an independent computation
and yields one :class:`CheckResult` per property, carrying the worst
error seen over the whole grid.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from geosched.config import FD_STEP
from geosched.exact_path import (
    marginal, mask_count_distribution, binomial_mask_law, point_mass,
    random_data, score_moments, fisher_score, SequenceState, taylor_ratio)
from geosched.noise_process import make_process
from geosched.path_geometry import (
    arc_length_closed, arc_length_numeric, cosine_schedule,
    fisher_rao_curve, fisher_rao_metric, generated_schedule,
    numeric_optimal_schedule, optimal_schedule, per_step_lengths,
    schedule_energy, uniform_time_schedule)

logger = logging.getLogger(__name__)

TIMES = tuple(i / 10 for i in range(1, 10))
RANDOM_DATA_PER_SIZE = 5


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool

    def format(self):
        status = 'PASS' if self.passed else 'FAIL'
        return '[%s] %s: measured %.3e, tolerance %.1e' % (
            status, self.name, self.measured, self.tolerance)


def at_most(name, measured, tolerance):
    return CheckResult(name, float(measured), tolerance,
                       bool(measured <= tolerance))


def at_least(name, measured, bound):
    return CheckResult(name, float(measured), bound, bool(measured >= bound))


def reference_processes():
    return [make_process('linear-alpha'), make_process('constant-beta', [1.0])]


# --------------------------------------------------------------------------
#  geometry


def geometry_suite(seed=0, max_N=3, max_vocab=3):
    """Closed-form schedules against the generic geodesic engine"""
    results = []
    processes = reference_processes()

    err = 0.0
    for T in (1, 2, 3, 4, 64):
        expected = np.cos(np.arange(T + 1) * math.pi / (2 * T)) ** 2
        err = max(err, np.max(np.abs(cosine_schedule(T).alphas - expected)))
    results.append(at_most("cosine schedule recovered", err, 1e-12))

    spread = 0.0
    for process in processes:
        total = arc_length_closed(process, 1, 1.0)
        for T in (1, 2, 4, 16, 64):
            lengths = per_step_lengths(process, 1, optimal_schedule(process, T))
            spread = max(spread, np.ptp(lengths) / total)
    results.append(at_most("geodesic per-step length spread / length",
                           spread, 1e-8))

    process = processes[0]
    lengths = per_step_lengths(process, 1, uniform_time_schedule(4, process))
    total = arc_length_closed(process, 1, 1.0)
    results.append(at_least("uniform-time spread / (length / T), T=4",
                            np.ptp(lengths) / (total / 4), 0.1))

    err = 0.0
    for process in processes:
        for N in range(1, max_N + 1):
            curve = fisher_rao_curve(process, N)
            for t in (0.05, 0.3, 0.5, 0.8, 1.0):
                err = max(err, abs(arc_length_closed(process, N, t)
                                   - arc_length_numeric(curve, t)))
    results.append(at_most("arc length closed form vs quadrature", err, 1e-8))

    err = 0.0
    for process in processes:
        for T in (4, 16):
            closed = optimal_schedule(process, T).times
            numeric = numeric_optimal_schedule(process, T).times
            err = max(err, np.max(np.abs(closed - numeric)))
    results.append(at_most("closed-form vs numeric geodesic times", err, 1e-7))

    err = 0.0
    for process in processes:
        reference = numeric_optimal_schedule(process, 4, N=1).times
        for N in (2, 16):
            err = max(err, np.max(np.abs(
                numeric_optimal_schedule(process, 4, N=N).times - reference)))
    results.append(at_most("numeric geodesic independent of N", err, 1e-8))

    worst_gap = math.inf
    geodesic_gap = 0.0
    for process in processes:
        for N in (1, max_N):
            bound = arc_length_closed(process, N, 1.0) ** 2
            geodesic_gap = max(geodesic_gap, abs(
                schedule_energy(process, N, optimal_schedule(process, 64))
                - bound))
            for k in (0.5, 1.0, 2.0, 3.0):
                sched = generated_schedule(process, lambda t: t ** k, 64)
                worst_gap = min(worst_gap,
                                schedule_energy(process, N, sched) - bound)
    results.append(at_least("energy minus squared length, power generators",
                            worst_gap, 1e-6))
    results.append(at_most("energy minus squared length, geodesic",
                           geodesic_gap, 1e-6))

    return results


# --------------------------------------------------------------------------
#  fisher


def _sizes(max_N, max_vocab):
    return [(N, m) for N in range(1, max_N + 1)
            for m in range(1, max_vocab + 1)]


def fisher_suite(seed=0, max_N=3, max_vocab=3):
    """Closed-form Fisher-Rao metric against exact enumeration"""
    processes = reference_processes()
    metric_err = mean_err = law_err = norm_err = 0.0

    for N, m in _sizes(max_N, max_vocab):
        for j in range(RANDOM_DATA_PER_SIZE):
            data = random_data(N, m, [seed, N, m, j])
            for process in processes:
                for t in TIMES:
                    closed = fisher_rao_metric(process, N, t)
                    mean, variance = score_moments(data, process, t)
                    metric_err = max(metric_err,
                                     abs(variance - closed) / closed)
                    mean_err = max(mean_err, abs(mean))

                    law = mask_count_distribution(data, process, t)
                    law_err = max(law_err, np.max(np.abs(
                        law - binomial_mask_law(process, N, t))))
                    norm_err = max(norm_err, abs(
                        marginal(data, process, t).probs.sum() - 1.0))

    return [
        at_most("Fisher-Rao metric vs score variance (relative)",
                metric_err, 1e-8),
        at_most("Fisher score mean", mean_err, 1e-10),
        at_most("mask count law vs binomial pmf", law_err, 1e-10),
        at_most("marginal normalization", norm_err, 1e-10),
        at_most("Fisher score vs finite difference (relative)",
                _score_difference_error(seed), 1e-5),
    ]


def _score_difference_error(seed):
    process = make_process('constant-beta', [1.0])
    worst = 0.0
    for N, m in _sizes(2, 2):
        data = random_data(N, m, [seed, N, m])
        for t in (0.3, 0.7):
            upper = marginal(data, process, t + FD_STEP).probs
            lower = marginal(data, process, t - FD_STEP).probs
            q = marginal(data, process, t)
            for index in np.flatnonzero(q.probs > 1e-12):
                fd = (math.log(upper[index]) - math.log(lower[index])) \
                    / (2 * FD_STEP)
                x = SequenceState.from_index(index, N, m)
                score = fisher_score(process, N, x, t)
                worst = max(worst, abs(fd - score) / max(1.0, abs(score)))
    return worst


# --------------------------------------------------------------------------
#  taylor


def fit_taylor_constant(deltas, ratios):
    """Least-squares ``C`` in ``|ratio - 1| ~ C delta``"""
    deltas = np.asarray(deltas)
    gaps = np.abs(np.asarray(ratios) - 1.0)
    return float(np.dot(deltas, gaps) / np.dot(deltas, deltas))


def taylor_suite(seed=0, max_N=3, max_vocab=3):
    """KL between nearby marginals against half the Fisher information"""
    process = make_process('linear-alpha')
    data = point_mass(2, 2)
    deltas = (1e-2, 1e-3, 1e-4)
    ratios = [taylor_ratio(data, process, 0.5, d) for d in deltas]

    results = [
        at_most("KL Taylor ratio - 1, delta=1e-2", abs(ratios[0] - 1), 0.1),
        at_most("KL Taylor ratio - 1, delta=1e-3", abs(ratios[1] - 1), 0.02),
        at_most("KL Taylor ratio - 1, delta=1e-4", abs(ratios[2] - 1), 1e-3),
    ]

    data = random_data(min(2, max_N), min(2, max_vocab), [seed, 0])
    ratios = [taylor_ratio(data, process, 0.25, d) for d in deltas]
    constant = fit_taylor_constant(deltas, ratios)
    logger.info("fitted Taylor constant C=%.4g", constant)
    results.append(at_most("fitted Taylor constant C, random data", constant,
                           100.0))

    return results


SUITES = {
    'geometry': geometry_suite,
    'fisher': fisher_suite,
    'taylor': taylor_suite,
}


def run_suites(names, seed=0, max_N=3, max_vocab=3):
    if 'all' in names:
        names = list(SUITES)

    results = []
    for name in names:
        logger.info("running %s suite", name)
        results.extend(SUITES[name](seed=seed, max_N=max_N,
                                    max_vocab=max_vocab))
    return results
