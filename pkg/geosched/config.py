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

"""Tolerances and runtime settings"""

import logging
import os
from dataclasses import dataclass

logger = logging.getLogger(__name__)

# Contract constants
QUAD_TOL = 1e-9
BISECT_TOL = 1e-10
BISECT_MAXITER = 200
FD_STEP = 1e-6
MAX_STATES = 10 ** 6

# Trajectories per random substream. Changing it changes every
# simulation result, so it is not configurable.
SAMPLER_BLOCK = 1024

THREADS_ENV = 'GEO_SCHED_THREADS'


@dataclass(frozen=True)
class SamplerConfig:
    workers: int = 1


def sampler_config(environ=None):
    """Read sampler settings from the environment.

    ``GEO_SCHED_THREADS`` caps the number of worker processes used by
    :func:`geosched.sampler.generate`. A missing or invalid value means
    a single in-process worker.
    """
    environ = os.environ if environ is None else environ
    value = environ.get(THREADS_ENV)
    if value is None or not value.strip():
        return SamplerConfig()

    try:
        workers = int(value)
    except ValueError:
        workers = 0

    if workers < 1:
        logger.warning("ignoring %s=%r: expected a positive integer",
                       THREADS_ENV, value)
        return SamplerConfig()

    return SamplerConfig(workers=workers)
