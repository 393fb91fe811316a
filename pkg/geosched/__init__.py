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

"""Fisher-Rao optimal schedules for masked discrete diffusion"""

from ._version import __version__

from .noise_process import make_process, F_inverse, alpha_dot
from .path_geometry import (
    Schedule, fisher_rao_metric, arc_length_closed, arc_length_numeric,
    geodesic_generator_numeric, optimal_schedule, cosine_schedule,
    uniform_time_schedule, uniform_alpha_schedule, per_step_lengths,
    build_schedule)
from .exact_path import (
    DataDistribution, SequenceState, marginal, fisher_score,
    empirical_fisher, mask_count_distribution, kl_divergence, taylor_ratio)
from .sampler import (
    forward_sample, oracle_denoiser, reverse_step, generate,
    compare_schedules)
