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

"""Schedule files, format ``geo-sched/1``.

JSON documents hold the keys of :data:`FIELDS` in that order. The CSV
form has ``#`` comment lines with the same metadata followed by
``t,alpha`` rows. Floats are written as their shortest round-trip
decimal, so writing, reading and writing again gives identical bytes.
"""

import csv
import io
import json

from geosched.errors import GeoSchedError, ScheduleFileError
from geosched.noise_process import NoiseProcess, make_process
from geosched.path_geometry import Schedule
from geosched.utility.typeutil import format_float, to_builtin

FORMAT_VERSION = 'geo-sched/1'

FIELDS = ('format_version', 'process', 'steps', 'times', 'alphas',
          'total_arc_length_per_sqrtN', 'generator')


class ScheduleEncoder(json.JSONEncoder):
    """JSON encoder accepting numpy scalars and arrays"""
    def encode(self, obj):
        return super(ScheduleEncoder, self).encode(to_builtin(obj))


def schedule_document(process, sched):
    return {
        'format_version': FORMAT_VERSION,
        'process': process.describe(),
        'steps': sched.steps,
        'times': sched.times,
        'alphas': sched.alphas,
        'total_arc_length_per_sqrtN': sched.total_length,
        'generator': sched.generator_tag.value,
    }


def dumps_json(process, sched):
    return ScheduleEncoder(indent=2).encode(
        schedule_document(process, sched)) + '\n'


def dumps_csv(process, sched):
    buffer = io.StringIO()
    kind = process.kind.value
    params = ','.join(format_float(p) for p in process.params)

    buffer.write('# format_version=%s\n' % FORMAT_VERSION)
    buffer.write('# process=%s params=%s\n' % (kind, params))
    buffer.write('# generator=%s steps=%d\n'
                 % (sched.generator_tag.value, sched.steps))
    buffer.write('# total_arc_length_per_sqrtN=%s\n'
                 % format_float(sched.total_length))
    buffer.write('# columns=t,alpha\n')

    writer = csv.writer(buffer, lineterminator='\n')
    for t, a in zip(sched.times, sched.alphas):
        writer.writerow([format_float(t), format_float(a)])

    return buffer.getvalue()


def schedule_hook(obj):
    """Decode ``process`` objects, leave everything else alone"""
    if set(obj) == {'kind', 'params'}:
        return make_process(obj['kind'], obj['params'])
    else:
        return obj


def _build(process, steps, times, alphas, total, generator):
    try:
        sched = Schedule(times=times, alphas=alphas, total_length=total,
                         generator_tag=generator)
    except ValueError as err:
        raise ScheduleFileError(str(err)) from err

    if sched.steps != steps:
        raise ScheduleFileError(
            "file declares %d steps but lists %d" % (steps, sched.steps))
    return process, sched


def loads_json(text):
    """Parse a JSON schedule file into ``(process, schedule)``"""
    try:
        doc = json.loads(text, object_hook=schedule_hook)
    except (json.JSONDecodeError, GeoSchedError) as err:
        raise ScheduleFileError("invalid schedule file: %s" % err) from err

    if not isinstance(doc, dict) or tuple(doc) != FIELDS:
        raise ScheduleFileError("schedule file must hold the keys %s"
                                % ', '.join(FIELDS))
    if doc['format_version'] != FORMAT_VERSION:
        raise ScheduleFileError(
            "unsupported format %r" % (doc['format_version'],))
    if not isinstance(doc['process'], NoiseProcess):
        raise ScheduleFileError("process must hold 'kind' and 'params'")

    return _build(doc['process'], doc['steps'], doc['times'], doc['alphas'],
                  doc['total_arc_length_per_sqrtN'], doc['generator'])


def loads_csv(text):
    """Parse a CSV schedule file into ``(process, schedule)``"""
    meta = {}
    rows = []
    for line in text.splitlines():
        if line.startswith('#'):
            for item in line[1:].split():
                key, _, value = item.partition('=')
                meta[key] = value
        elif line.strip():
            rows.append(line)

    try:
        if meta.get('format_version') != FORMAT_VERSION:
            raise ScheduleFileError("not a %s CSV file" % FORMAT_VERSION)
        params = [float(p) for p in meta.get('params', '').split(',') if p]
        process = make_process(meta['process'], params)
        table = [[float(v) for v in row]
                 for row in csv.reader(rows)]
        times = [row[0] for row in table]
        alphas = [row[1] for row in table]
        steps = int(meta['steps'])
        total = float(meta['total_arc_length_per_sqrtN'])
        generator = meta['generator']
    except ScheduleFileError:
        raise
    except (KeyError, ValueError, IndexError, GeoSchedError) as err:
        raise ScheduleFileError("invalid schedule CSV: %s" % err) from err

    return _build(process, steps, times, alphas, total, generator)
