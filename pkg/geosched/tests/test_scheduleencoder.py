import json

import numpy as np
import pytest

from geosched.errors import ScheduleFileError
from geosched.noise_process import make_process
from geosched.path_geometry import (
    cosine_schedule, optimal_schedule, uniform_alpha_schedule)
from geosched.utility.scheduleencoder import (
    FIELDS, FORMAT_VERSION, ScheduleEncoder, dumps_csv, dumps_json,
    loads_csv, loads_json)
from geosched.utility.typeutil import format_float, to_builtin

PROCESSES = [
    make_process('linear-alpha'),
    make_process('constant-beta', [1.0]),
    make_process('tabulated-beta', [0.0, 0.5, 0.25, 2.0, 1.0, 1.0]),
]


def test_to_builtin():
    value = to_builtin({'a': np.float64(0.5), 'b': np.arange(3),
                        'c': (np.int32(1), np.bool_(True))})
    assert value == {'a': 0.5, 'b': [0, 1, 2], 'c': [1, True]}
    assert type(value['a']) is float
    assert type(value['c'][0]) is int


def test_format_float_is_shortest_round_trip():
    assert format_float(0.1) == '0.1'
    assert format_float(np.float64(1.0)) == '1.0'
    x = 0.8535533905932737
    assert float(format_float(x)) == x


def test_encoder_accepts_numpy():
    text = ScheduleEncoder().encode({'x': np.array([0.5, 1.0])})
    assert json.loads(text) == {'x': [0.5, 1.0]}


def test_json_document():
    doc = json.loads(dumps_json(PROCESSES[1], optimal_schedule(PROCESSES[1],
                                                                4)))
    assert tuple(doc) == FIELDS
    assert doc['format_version'] == FORMAT_VERSION
    assert doc['process'] == {'kind': 'constant-beta', 'params': [1.0]}
    assert doc['steps'] == 4
    assert doc['generator'] == 'geodesic-closed-form'
    assert len(doc['times']) == len(doc['alphas']) == 5


def test_csv_rows():
    text = dumps_csv(PROCESSES[0], cosine_schedule(2))
    lines = text.splitlines()
    assert all(line.startswith('#') for line in lines[:5])
    assert lines[5:] == ['0.0,1.0', '0.5,0.5', '1.0,0.0']
    assert text.endswith('\n') and '\r' not in text


@pytest.mark.parametrize("process", PROCESSES)
@pytest.mark.parametrize("dumps, loads", [(dumps_json, loads_json),
                                          (dumps_csv, loads_csv)])
def test_files_are_byte_stable(process, dumps, loads):
    sched = uniform_alpha_schedule(process, 7)
    text = dumps(process, sched)
    loaded_process, loaded = loads(text)

    assert loaded_process == process
    np.testing.assert_array_equal(loaded.times, sched.times)
    np.testing.assert_array_equal(loaded.alphas, sched.alphas)
    assert loaded.total_length == sched.total_length
    assert loaded.generator_tag is sched.generator_tag
    assert dumps(loaded_process, loaded) == text


def _document(**changes):
    process = PROCESSES[0]
    doc = json.loads(dumps_json(process, cosine_schedule(2)))
    doc.update(changes)
    return json.dumps(doc)


@pytest.mark.parametrize("text", [
    "not json",
    "[1, 2]",
    _document(format_version='geo-sched/2'),
    _document(steps=3),
    _document(times=[0.0, 0.7, 0.5]),
    _document(alphas=[1.0, 0.5]),
    _document(process={'kind': 'cosine', 'params': []}),
    _document(process='linear-alpha'),
    _document(generator='sigmoid'),
])
def test_loads_json_rejects(text):
    with pytest.raises(ScheduleFileError):
        loads_json(text)


def test_loads_json_rejects_missing_key():
    doc = json.loads(_document())
    del doc['generator']
    with pytest.raises(ScheduleFileError):
        loads_json(json.dumps(doc))


def test_loads_csv_rejects():
    text = dumps_csv(PROCESSES[0], cosine_schedule(2))
    with pytest.raises(ScheduleFileError):
        loads_csv(text.replace('geo-sched/1', 'geo-sched/0'))
    with pytest.raises(ScheduleFileError):
        loads_csv(text.replace('0.5,0.5', '0.5,abc'))
    with pytest.raises(ScheduleFileError):
        loads_csv(text.replace('steps=2', 'steps=3'))
    with pytest.raises(ScheduleFileError):
        loads_csv('\n'.join(text.splitlines()[5:]))
