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

"""Forward masking and ancestral unmasking on small token spaces.

The reverse sampler starts from the all-mask sequence and walks a
schedule backwards. In the step from ``t`` to ``s < t`` every masked
position unmasks with probability ``(alpha_s - alpha_t) / (1 - alpha_t)``
and draws its token from the denoiser's per-position marginal at the
current state. With the exact posterior as denoiser the only error left
is the one made by unmasking positions independently within a step,
which is what a schedule controls.

Simulations are reproducible: trajectories are cut into blocks of
:data:`geosched.config.SAMPLER_BLOCK` and block ``b`` draws from a Philox
stream keyed by the seed with counter ``b``, whichever worker runs it.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import cloudpickle
import numpy as np

from geosched.config import SAMPLER_BLOCK, sampler_config
from geosched.errors import (
    DomainError, InconsistentStateError, PreconditionError)
from geosched.exact_path import (
    SequenceState, enumerate_states, kl_divergence, total_variation)
from geosched.path_geometry import build_schedule, per_step_lengths

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScheduleReport:
    """Sample quality of one schedule"""

    schedule_tag: str
    T: int
    n_samples: int
    seed: int
    tv_distance: float
    kl_estimate: float
    per_step_lengths: tuple
    wall_time: float = field(default=0.0, compare=False)

    @property
    def max_step_length(self):
        return max(self.per_step_lengths)

    @property
    def min_step_length(self):
        return min(self.per_step_lengths)


def block_rng(seed, block):
    """Counter-based stream of trajectory block ``block``"""
    return np.random.Generator(
        np.random.Philox(key=int(seed), counter=int(block) << 128))


# --------------------------------------------------------------------------
#  Forward process


def _mask(states, m, alpha, rng):
    keep = rng.random(states.shape) < alpha
    return np.where(keep, states, m)


def forward_sample(x0, process, t, rng):
    """Mask each token of ``x0`` independently with probability ``1 - alpha_t``"""
    if x0.n_masked:
        raise PreconditionError("forward process starts from a mask-free "
                                "sequence, got %r" % (x0.tokens,))
    if not 0.0 <= t <= 1.0:
        raise PreconditionError("time out of [0, 1]: %r" % t)

    tokens = _mask(np.asarray(x0.tokens), x0.m, float(process.alpha(t)), rng)
    return SequenceState(tokens, x0.m)


def empirical_forward_marginal(data, process, t, n_samples, seed):
    """Frequencies of all states after masking ``n_samples`` draws of ``q_0``"""
    states = enumerate_states(data.N, data.m)
    rng = np.random.default_rng(seed)

    picks = rng.choice(len(data.probs), size=n_samples, p=data.probs)
    noisy = _mask(data.sequences[picks], data.m, float(process.alpha(t)), rng)

    index = np.ravel_multi_index(noisy.T, (data.m + 1,) * data.N)
    return np.bincount(index, minlength=len(states)) / n_samples


# --------------------------------------------------------------------------
#  Denoiser


class OracleDenoiser:
    """Exact per-position posterior ``q_0(x_0^(n) | x_t)`` of a data set.

    Called with a batch of states of shape ``(n, N)``, returns token
    probabilities of shape ``(n, N, m)``. Rows of unmasked positions are
    one-hot on the observed token.

    Independent unmasking within a step can produce states no support
    sequence agrees with. A strict denoiser raises
    :class:`InconsistentStateError` on them; otherwise their masked
    positions get the per-position marginals of the data.
    """

    def __init__(self, data, strict=True):
        self.m = data.m
        self.strict = strict
        self.sequences, self.probs = data.support
        self._onehot = np.eye(data.m)[self.sequences]
        self._prior = np.einsum('k,kjv->jv', self.probs, self._onehot)

    def __call__(self, states):
        states = np.asarray(states)
        masked = states == self.m
        agree = ((states[:, None, :] == self.sequences[None, :, :])
                 | masked[:, None, :]).all(axis=-1)
        weights = agree * self.probs

        total = weights.sum(axis=1)
        orphans = total <= 0
        if np.any(orphans):
            if self.strict:
                bad = states[np.argmax(orphans)]
                raise InconsistentStateError(
                    "no sequence in the data support agrees with %r"
                    % (tuple(bad),))
            logger.debug("%d states outside the data support",
                         np.count_nonzero(orphans))
            total = np.where(orphans, 1.0, total)

        posterior = np.einsum('nk,kjv->njv', weights, self._onehot)
        posterior /= total[:, None, None]

        if np.any(orphans):
            fallback = np.where(masked[:, :, None], self._prior,
                                np.eye(self.m + 1)[states][..., :self.m])
            posterior[orphans] = fallback[orphans]

        return posterior


def oracle_denoiser(data, x):
    """Posterior token distributions, shape ``(N, m)``, of one state"""
    if x.m != data.m or x.N != data.N:
        raise DomainError(
            "state with %d tokens and mask %d does not fit data with %d "
            "tokens and mask %d" % (x.N, x.m, data.N, data.m))
    return OracleDenoiser(data)(np.asarray(x.tokens)[None, :])[0]


# --------------------------------------------------------------------------
#  Reverse process


def _unmask(states, m, unmask_prob, denoiser, rng):
    # Both draws are made for every position so that the stream
    # consumption does not depend on the states.
    reveal = rng.random(states.shape)
    pick = rng.random(states.shape)

    masked = states == m
    active = masked.any(axis=-1)
    if unmask_prob <= 0.0 or not active.any():
        return states

    # fully unmasked rows are final and never shown to the denoiser
    tokens = states.copy()
    cdf = np.cumsum(denoiser(states[active]), axis=-1)
    tokens[active] = np.minimum(
        (pick[active][..., None] > cdf).sum(axis=-1), m - 1)

    return np.where(masked & (reveal < unmask_prob), tokens, states)


def _unmask_probability(alpha_t, alpha_s):
    return (alpha_s - alpha_t) / (1.0 - alpha_t)


def reverse_step(x, t, s, process, denoiser, rng):
    """One ancestral step from time ``t`` back to time ``s <= t``"""
    if not 0.0 <= s <= t <= 1.0:
        raise PreconditionError(
            "reverse step needs 0 <= s <= t <= 1, got s=%r t=%r" % (s, t))

    alpha_t = float(process.alpha(t))
    if alpha_t >= 1.0:
        return x

    prob = _unmask_probability(alpha_t, float(process.alpha(s)))
    states = np.asarray(x.tokens)[None, :]
    return SequenceState(_unmask(states, x.m, prob, denoiser, rng)[0], x.m)


def _run_block(m, N, alphas, denoiser, seed, block, size):
    rng = block_rng(seed, block)
    states = np.full((size, N), m)

    for i in range(len(alphas) - 1, 0, -1):
        prob = _unmask_probability(alphas[i], alphas[i - 1])
        states = _unmask(states, m, prob, denoiser, rng)

    index = np.ravel_multi_index(states.T, (m,) * N)
    return np.bincount(index, minlength=m ** N)


def _run_pickled_block(payload, block, size):
    return _run_block(*cloudpickle.loads(payload), block=block, size=size)


def _blocks(n_samples):
    return [(b, min(SAMPLER_BLOCK, n_samples - b * SAMPLER_BLOCK))
            for b in range(-(-n_samples // SAMPLER_BLOCK))]


def generate(data, process, sched, n_samples, seed, denoiser=None,
             workers=None, tag=None):
    """Draw ``n_samples`` sequences along ``sched`` and score them.

    Returns the empirical distribution over the ``m^N`` sequences and a
    :class:`ScheduleReport` comparing it with ``data``.

    ``workers`` defaults to the ``GEO_SCHED_THREADS`` setting. Results
    do not depend on it.
    """
    if n_samples < 1:
        raise PreconditionError("n_samples must be positive: %r" % n_samples)

    if denoiser is None:
        denoiser = OracleDenoiser(data, strict=False)
    workers = sampler_config().workers if workers is None else workers
    args = (data.m, data.N, np.array(sched.alphas), denoiser, int(seed))
    blocks = _blocks(n_samples)

    start = time.perf_counter()
    counts = np.zeros(data.m ** data.N, dtype=np.int64)

    if workers > 1 and len(blocks) > 1:
        logger.debug("dispatching %d blocks to %d workers",
                     len(blocks), workers)
        payload = cloudpickle.dumps(args)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_pickled_block, payload, b, size)
                       for b, size in blocks]
            for future in futures:
                counts += future.result()
    else:
        for b, size in blocks:
            counts += _run_block(*args, block=b, size=size)

    empirical = counts / n_samples
    smoothed = (counts + 1.0 / len(counts)) / (n_samples + 1.0)

    report = ScheduleReport(
        schedule_tag=tag or sched.generator_tag.value,
        T=sched.steps,
        n_samples=int(n_samples),
        seed=int(seed),
        tv_distance=total_variation(empirical, data.probs),
        kl_estimate=kl_divergence(data.probs, smoothed),
        per_step_lengths=tuple(
            float(v) for v in per_step_lengths(process, data.N, sched)),
        wall_time=time.perf_counter() - start)

    return empirical, report


def compare_schedules(data, process, steps, names, n_samples, seed,
                      workers=None):
    """Paired comparison: every ``(T, name)`` runs with the same seed"""
    reports = []
    for T in steps:
        for name in names:
            sched = build_schedule(name, process, T)
            _, report = generate(data, process, sched, n_samples, seed,
                                 workers=workers, tag=name)
            logger.info("%s T=%d: TV=%.4g KL=%.4g (%.2fs)", name, T,
                        report.tv_distance, report.kl_estimate,
                        report.wall_time)
            reports.append(report)

    return reports

