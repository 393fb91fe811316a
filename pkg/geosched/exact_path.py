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

"""Exact masked probability paths on small token spaces.

Sequences of ``N`` tokens take values in ``{0, ..., m}``, ``m`` being the
mask. All ``(m + 1)^N`` states are enumerated in mixed-radix order with
the first token most significant, so state ``(0, ..., 0)`` has index 0
and the all-mask state has the last index. Data distributions live on
the ``m^N`` mask-free sequences in the same order with radix ``m``.

Everything here is brute force on purpose: these functions are the
reference values the closed forms of :mod:`geosched.path_geometry` are
checked against.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import rel_entr
from scipy.stats import binom

from geosched.config import MAX_STATES
from geosched.errors import (
    AbsoluteContinuityError, CapacityError, DistributionError,
    DomainError, PreconditionError, RatioUndefinedError, SingularityError)

logger = logging.getLogger(__name__)

_NORMALIZATION_TOL = 1e-12


@lru_cache(maxsize=32)
def _states(N, base):
    states = np.indices((base,) * N).reshape(N, -1).T
    states.flags.writeable = False
    return states


def enumerate_states(N, m):
    """All ``(m + 1)^N`` sequence states in canonical order"""
    if (m + 1) ** N > MAX_STATES:
        raise CapacityError(
            "%d^%d states exceed the capacity of %d"
            % (m + 1, N, MAX_STATES))
    return _states(int(N), int(m) + 1)


def mask_counts(states, m):
    """Number of masked tokens ``n_m(x)`` of each state"""
    return np.count_nonzero(np.asarray(states) == m, axis=-1)


@dataclass(frozen=True)
class SequenceState:
    """Token sequence in which ``m`` stands for the mask"""

    tokens: tuple
    m: int

    def __post_init__(self):
        tokens = tuple(int(v) for v in self.tokens)
        if not tokens:
            raise DomainError("a sequence needs at least one token")
        if any(not 0 <= v <= self.m for v in tokens):
            raise DomainError(
                "tokens must lie in [0, %d]: %r" % (self.m, tokens))
        object.__setattr__(self, 'tokens', tokens)

    @classmethod
    def from_index(cls, index, N, m):
        return cls(np.unravel_index(index, (m + 1,) * N), m)

    @property
    def N(self):
        return len(self.tokens)

    @property
    def n_masked(self):
        return sum(v == self.m for v in self.tokens)

    @property
    def index(self):
        return int(np.ravel_multi_index(self.tokens, (self.m + 1,) * self.N))


@dataclass(frozen=True, eq=False)
class DataDistribution:
    """Distribution ``q_0`` over the ``m^N`` mask-free sequences"""

    N: int
    m: int
    probs: np.ndarray

    def __post_init__(self):
        if self.N < 1 or self.m < 1:
            raise DistributionError(
                "need N >= 1 and m >= 1, got N=%r m=%r" % (self.N, self.m))
        if self.m ** self.N > MAX_STATES:
            raise CapacityError("%d^%d sequences exceed the capacity of %d"
                                % (self.m, self.N, MAX_STATES))

        probs = np.array(self.probs, dtype=float).reshape(-1)
        if len(probs) != self.m ** self.N:
            raise DistributionError(
                "expected %d probabilities, got %d"
                % (self.m ** self.N, len(probs)))
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise DistributionError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > _NORMALIZATION_TOL:
            raise DistributionError(
                "probabilities sum to %r, not 1" % probs.sum())

        probs.flags.writeable = False
        object.__setattr__(self, 'probs', probs)

    @property
    def tensor(self):
        return self.probs.reshape((self.m,) * self.N)

    @property
    def sequences(self):
        """All mask-free sequences, aligned with :attr:`probs`"""
        return _states(self.N, self.m)

    @property
    def support(self):
        """Sequences with positive probability and their probabilities"""
        keep = self.probs > 0
        return self.sequences[keep], self.probs[keep]

    def probability(self, tokens):
        return float(self.probs[np.ravel_multi_index(tuple(tokens),
                                                     (self.m,) * self.N)])


@dataclass(frozen=True, eq=False)
class PathMarginal:
    """Marginal ``q_t`` over all states in canonical order"""

    t: float
    N: int
    m: int
    probs: np.ndarray

    @property
    def states(self):
        return _states(self.N, self.m + 1)


def make_data(N, m, probs, normalize=False):
    probs = np.asarray(probs, dtype=float)
    if normalize:
        total = probs.sum()
        if not total > 0:
            raise DistributionError("cannot normalize a zero vector")
        probs = probs / total
    return DataDistribution(int(N), int(m), probs)


def point_mass(N, m, x0=None):
    """All mass on ``x0``, the all-zero sequence by default"""
    x0 = (0,) * N if x0 is None else tuple(x0)
    if len(x0) != N or any(not 0 <= v < m for v in x0):
        raise DistributionError("invalid mask-free sequence %r" % (x0,))
    probs = np.zeros(m ** N)
    probs[np.ravel_multi_index(x0, (m,) * N)] = 1.0
    return DataDistribution(N, m, probs)


def uniform_pair(N, m=2):
    """Half the mass on ``(0, ..., 0)``, half on ``(1, ..., 1)``"""
    if m < 2:
        raise DistributionError("uniform pair needs at least 2 tokens")
    probs = np.zeros(m ** N)
    probs[0] = 0.5
    probs[np.ravel_multi_index((1,) * N, (m,) * N)] = 0.5
    return DataDistribution(N, m, probs)


def random_data(N, m, seed):
    """Flat Dirichlet draw by normalizing exponentials"""
    rng = np.random.default_rng(seed)
    weights = rng.standard_exponential(m ** N)
    return DataDistribution(N, m, weights / weights.sum())


def _agreement_mass(data):
    # Appending the sum over an axis as index m marginalises the
    # positions a state masks, one axis at a time.
    mass = data.tensor
    for axis in range(data.N):
        mass = np.concatenate(
            [mass, mass.sum(axis=axis, keepdims=True)], axis=axis)
    return mass.reshape(-1)


def _check_time(t):
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError("time out of [0, 1]: %r" % t)
    return t


def marginal(data, process, t):
    """Exact ``q_t(x) = (1-alpha)^n_m alpha^(N-n_m) q_0(agree with x)``"""
    t = _check_time(t)
    states = enumerate_states(data.N, data.m)

    alpha = float(process.alpha(t))
    masked = float(process.one_minus_alpha(t))
    n = mask_counts(states, data.m)

    weights = masked ** n * alpha ** (data.N - n)
    return PathMarginal(t, data.N, data.m, weights * _agreement_mass(data))


def _score(process, N, n, t):
    alpha = float(process.alpha(t))
    masked = float(process.one_minus_alpha(t))
    if not (0.0 < alpha and 0.0 < masked):
        raise SingularityError(
            "Fisher score diverges at t=%r (alpha=%r)" % (t, alpha))

    rate = float(process.alpha_dot(t))
    return -n * rate / masked + (N - n) * rate / alpha


def fisher_score(process, N, x, t):
    """``d/dt log q_t(x)``; depends on ``x`` only through ``n_m(x)``"""
    if x.N != N:
        raise DomainError("state has %d tokens, expected %d" % (x.N, N))
    return float(_score(process, N, x.n_masked, _check_time(t)))


def score_moments(data, process, t):
    """Mean and variance of the Fisher score under ``q_t``"""
    q = marginal(data, process, t)
    scores = _score(process, data.N, mask_counts(q.states, data.m), q.t)

    mean = float(np.dot(q.probs, scores))
    variance = float(np.dot(q.probs, scores * scores)) - mean * mean
    return mean, variance


def empirical_fisher(data, process, t):
    """Fisher information ``Var(d/dt log q_t)`` by enumeration"""
    mean, variance = score_moments(data, process, t)
    if abs(mean) > 1e-10:
        logger.warning("Fisher score has mean %r at t=%r", mean, t)
    return variance


def mask_count_distribution(data, process, t):
    """Law of ``n_m(x)`` under ``q_t``, probabilities for ``0..N``"""
    q = marginal(data, process, t)
    return np.bincount(mask_counts(q.states, data.m), weights=q.probs,
                       minlength=data.N + 1)


def binomial_mask_law(process, N, t):
    """``Binomial(N, 1 - alpha_t)`` pmf over ``0..N``"""
    return binom.pmf(np.arange(N + 1), N, float(process.one_minus_alpha(t)))


def _probs(p):
    return np.asarray(getattr(p, 'probs', p), dtype=float)


def kl_divergence(p, q):
    """``KL(p || q)`` in nats over the enumerated states"""
    p, q = _probs(p), _probs(q)
    if p.shape != q.shape:
        raise PreconditionError(
            "distributions differ in size: %d vs %d" % (p.size, q.size))

    if np.any((p > 0) & (q <= 0)):
        raise AbsoluteContinuityError(
            "p is not absolutely continuous with respect to q")

    return max(float(np.sum(rel_entr(p, q))), 0.0)


def total_variation(p, q):
    p, q = _probs(p), _probs(q)
    if p.shape != q.shape:
        raise PreconditionError(
            "distributions differ in size: %d vs %d" % (p.size, q.size))
    return min(0.5 * float(np.abs(p - q).sum()), 1.0)


def taylor_ratio(data, process, t, delta):
    """``KL(q_t || q_{t+delta}) / (I(t) delta^2 / 2)``, tends to 1"""
    if delta == 0:
        raise RatioUndefinedError("delta must be nonzero")

    t = _check_time(t)
    kl = kl_divergence(marginal(data, process, t),
                       marginal(data, process, t + delta))
    return kl / (0.5 * empirical_fisher(data, process, t) * delta * delta)
