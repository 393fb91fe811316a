import math

import numpy as np
import pytest

from geosched.errors import (
    DomainError, InconsistentStateError, PreconditionError)
from geosched.exact_path import (
    SequenceState, make_data, mask_count_distribution, marginal, point_mass,
    random_data, uniform_pair)
from geosched.noise_process import make_process
from geosched.path_geometry import (
    cosine_schedule, optimal_schedule, uniform_time_schedule)
from geosched.sampler import (
    OracleDenoiser, block_rng, compare_schedules, empirical_forward_marginal,
    forward_sample, generate, oracle_denoiser, reverse_step)

LINEAR = make_process('linear-alpha')
CONST1 = make_process('constant-beta', [1.0])


# --------------------------------------------------------------------------
#  Forward process


def test_forward_sample_endpoints():
    rng = np.random.default_rng(0)
    x0 = SequenceState((0, 1, 1), 2)
    assert forward_sample(x0, LINEAR, 0.0, rng) == x0
    assert forward_sample(x0, LINEAR, 1.0, rng).tokens == (2, 2, 2)


def test_forward_sample_preconditions():
    rng = np.random.default_rng(0)
    with pytest.raises(PreconditionError):
        forward_sample(SequenceState((0, 2), 2), LINEAR, 0.5, rng)
    with pytest.raises(PreconditionError):
        forward_sample(SequenceState((0, 1), 2), LINEAR, 1.5, rng)


def test_forward_sample_mask_count_law():
    rng = np.random.default_rng(1)
    x0 = SequenceState((0, 1, 0), 2)
    n = 20000
    counts = np.bincount(
        [forward_sample(x0, LINEAR, 0.5, rng).n_masked for _ in range(n)],
        minlength=4)

    law = mask_count_distribution(point_mass(3, 2), LINEAR, 0.5)
    sigma = np.sqrt(law * (1 - law) / n)
    assert np.all(np.abs(counts / n - law) <= 4 * sigma)


@pytest.mark.parametrize("data", [point_mass(2, 1), random_data(2, 2, 4),
                                  random_data(3, 2, 5)])
def test_forward_marginal_matches_exact(data):
    n = 100000
    exact = marginal(data, CONST1, 0.6).probs
    empirical = empirical_forward_marginal(data, CONST1, 0.6, n, seed=9)

    sigma = np.sqrt(exact * (1 - exact) / n)
    assert np.all(np.abs(empirical - exact) <= 4 * sigma + 1e-12)


# --------------------------------------------------------------------------
#  Denoiser


def test_oracle_denoiser():
    post = oracle_denoiser(point_mass(2, 2, (0, 1)), SequenceState((2, 1), 2))
    np.testing.assert_array_equal(post[0], [1.0, 0.0])

    post = oracle_denoiser(uniform_pair(2), SequenceState((2, 2), 2))
    np.testing.assert_allclose(post, [[0.5, 0.5], [0.5, 0.5]])

    data = make_data(2, 2, [0.75, 0.25, 0.0, 0.0])
    post = oracle_denoiser(data, SequenceState((0, 2), 2))
    np.testing.assert_allclose(post[1], [0.75, 0.25])


def test_oracle_denoiser_inconsistent_state():
    with pytest.raises(InconsistentStateError):
        oracle_denoiser(uniform_pair(2), SequenceState((0, 1), 2))


def test_oracle_denoiser_rejects_mismatched_state():
    data = uniform_pair(2)
    # token 2 is the mask for m=2 but a real token for m=3
    with pytest.raises(DomainError):
        oracle_denoiser(data, SequenceState((2, 0), 3))
    with pytest.raises(DomainError):
        oracle_denoiser(data, SequenceState((2, 2, 2), 2))


def test_lenient_denoiser_uses_data_marginals():
    data = uniform_pair(3)
    denoiser = OracleDenoiser(data, strict=False)
    post = denoiser(np.array([[0, 1, 2], [0, 2, 2]]))

    np.testing.assert_allclose(post[0, 2], [0.5, 0.5])
    np.testing.assert_array_equal(post[0, 0], [1.0, 0.0])
    np.testing.assert_allclose(post[1, 1], [1.0, 0.0])


# --------------------------------------------------------------------------
#  Reverse process


def test_reverse_step_same_time_is_identity():
    rng = np.random.default_rng(0)
    x = SequenceState((2, 2), 2)
    denoiser = OracleDenoiser(uniform_pair(2))
    assert reverse_step(x, 0.5, 0.5, LINEAR, denoiser, rng) == x


def test_reverse_step_full_unmasking():
    rng = np.random.default_rng(0)
    data = point_mass(3, 2, (1, 0, 1))
    x = reverse_step(SequenceState((2, 2, 2), 2), 1.0, 0.0, LINEAR,
                     OracleDenoiser(data), rng)
    assert x.tokens == (1, 0, 1)


def test_reverse_step_keeps_unmasked_tokens():
    rng = np.random.default_rng(3)
    data = random_data(3, 2, 0)
    x = SequenceState((1, 2, 0), 2)
    for _ in range(20):
        y = reverse_step(x, 0.8, 0.3, CONST1, OracleDenoiser(data), rng)
        assert y.tokens[0] == 1 and y.tokens[2] == 0


def test_reverse_step_preconditions():
    rng = np.random.default_rng(0)
    x = SequenceState((2, 2), 2)
    with pytest.raises(PreconditionError):
        reverse_step(x, 0.3, 0.5, LINEAR, OracleDenoiser(uniform_pair(2)),
                     rng)


def test_block_rng_is_counter_based():
    a = block_rng(7, 3).random(4)
    np.testing.assert_array_equal(a, block_rng(7, 3).random(4))
    assert not np.array_equal(a, block_rng(7, 4).random(4))
    assert not np.array_equal(a, block_rng(8, 3).random(4))


# --------------------------------------------------------------------------
#  Generation


def test_point_mass_is_recovered_exactly():
    data = point_mass(2, 3, (2, 0))
    empirical, report = generate(data, LINEAR, cosine_schedule(1), 10000,
                                 seed=0)
    assert report.tv_distance <= 0.01
    np.testing.assert_array_equal(empirical, data.probs)


def test_single_step_loses_correlations():
    _, report = generate(uniform_pair(2), LINEAR, cosine_schedule(1),
                         100000, seed=1)
    assert report.tv_distance == pytest.approx(0.5, abs=0.01)


def test_many_steps_recover_correlations():
    _, report = generate(uniform_pair(2), LINEAR, optimal_schedule(LINEAR, 64),
                         100000, seed=2)
    assert report.tv_distance <= 0.02


@pytest.mark.parametrize("N, m", [(2, 2), (3, 1), (2, 3), (3, 2)])
def test_fine_schedule_recovers_random_data(N, m):
    data = random_data(N, m, [11, N, m])
    T = (m + 1) ** N * 8
    _, report = generate(data, LINEAR, optimal_schedule(LINEAR, T), 100000,
                         seed=N * 10 + m)
    assert report.tv_distance <= 0.03


def test_many_steps_on_longer_sequences():
    # partially unmasked states outside the support appear for N = 3
    _, report = generate(uniform_pair(3), LINEAR,
                         optimal_schedule(LINEAR, 64), 20000, seed=4)
    assert 0.0 <= report.tv_distance <= 0.1


def test_report_fields():
    sched = uniform_time_schedule(4)
    _, report = generate(random_data(2, 2, 0), LINEAR, sched, 3000, seed=5)
    assert report.schedule_tag == 'uniform-time'
    assert report.T == 4
    assert report.n_samples == 3000
    assert len(report.per_step_lengths) == 4
    assert report.kl_estimate > 0 and math.isfinite(report.kl_estimate)
    assert report.wall_time >= 0


def test_generate_is_deterministic_across_workers():
    data = random_data(2, 2, 8)
    sched = optimal_schedule(CONST1, 8)
    n = 3 * 1024 + 17

    first, report = generate(data, CONST1, sched, n, seed=42, workers=1)
    again, report_again = generate(data, CONST1, sched, n, seed=42, workers=1)
    parallel, report_parallel = generate(data, CONST1, sched, n, seed=42,
                                         workers=2)

    np.testing.assert_array_equal(first, again)
    np.testing.assert_array_equal(first, parallel)
    assert report == report_again == report_parallel


def test_generate_accepts_a_custom_denoiser():
    data = uniform_pair(2)
    uniform = lambda states: np.full(states.shape + (2,), 0.5)
    empirical, _ = generate(data, LINEAR, cosine_schedule(2), 4000, seed=0,
                            denoiser=uniform, workers=2)
    assert np.all(empirical > 0.2)


def test_generate_preconditions():
    with pytest.raises(PreconditionError):
        generate(uniform_pair(2), LINEAR, cosine_schedule(2), 0, seed=0)

    with pytest.raises(PreconditionError):
        compare_schedules(uniform_pair(2), LINEAR, [2], ['geodesic'], -5, 0)


def test_compare_schedules():
    data = random_data(2, 2, 0)
    reports = compare_schedules(data, LINEAR, [4],
                                ['geodesic', 'uniform-time'], 2000, seed=3)
    geodesic, uniform = reports
    assert geodesic.schedule_tag == 'geodesic'
    assert geodesic.seed == uniform.seed == 3
    assert np.ptp(geodesic.per_step_lengths) <= 1e-8
    assert np.ptp(uniform.per_step_lengths) > 0

    assert compare_schedules(data, LINEAR, [4],
                             ['geodesic', 'uniform-time'], 2000, 3) == reports


def test_point_mass_every_schedule():
    data = point_mass(2, 2)
    for report in compare_schedules(data, CONST1, [1, 4],
                                    ['geodesic', 'uniform-time',
                                     'uniform-alpha'], 5000, seed=6):
        assert report.tv_distance == 0.0
