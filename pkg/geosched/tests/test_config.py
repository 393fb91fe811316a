import logging

import pytest

from geosched.config import THREADS_ENV, SamplerConfig, sampler_config


def test_default_is_single_worker():
    assert sampler_config({}) == SamplerConfig(workers=1)
    assert sampler_config({THREADS_ENV: '  '}).workers == 1


def test_reads_worker_count():
    assert sampler_config({THREADS_ENV: '4'}).workers == 4


def test_reads_process_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '3')
    assert sampler_config().workers == 3


@pytest.mark.parametrize('value', ['0', '-2', 'many', '1.5'])
def test_invalid_value_falls_back(value, caplog):
    with caplog.at_level(logging.WARNING, logger='geosched.config'):
        config = sampler_config({THREADS_ENV: value})

    assert config.workers == 1
    assert THREADS_ENV in caplog.text
