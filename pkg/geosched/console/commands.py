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

import csv
import io
import logging
import sys

import numpy as np

from geosched.config import MAX_STATES
from geosched.errors import CapacityError, ScheduleFileError, UsageError
from geosched.exact_path import point_mass, random_data, uniform_pair
from geosched.noise_process import make_process
from geosched.path_geometry import build_schedule
from geosched.sampler import compare_schedules
from geosched.console.suites import run_suites
from geosched.utility.scheduleencoder import (
    dumps_csv, dumps_json, loads_csv, loads_json)
from geosched.utility.typeutil import format_float

logger = logging.getLogger(__name__)

SIMULATE_COLUMNS = ('schedule', 'T', 'tv', 'kl', 'max_step_len',
                    'min_step_len', 'wall_time_s')


def parse_process(text):
    """``linear``, ``const-beta=<c>`` or ``table=<path>``"""
    name, _, value = text.partition('=')
    if name == 'linear' and not value:
        return make_process('linear-alpha')
    if name == 'const-beta' and value:
        try:
            rate = float(value)
        except ValueError:
            raise UsageError("invalid rate in %r" % text) from None
        return make_process('constant-beta', [rate])
    if name == 'table' and value:
        return make_process('tabulated-beta', read_rate_table(value))

    raise UsageError("unknown process %r: expected linear, const-beta=<c> "
                     "or table=<path>" % text)


def read_rate_table(path):
    """Interleaved ``[t0, b0, t1, b1, ...]`` from a two-column CSV file"""
    try:
        with open(path, encoding='utf-8') as f:
            lines = [line for line in f
                     if line.strip() and not line.startswith('#')]
        return [float(v) for row in csv.reader(lines) for v in row[:2]]
    except OSError as err:
        raise UsageError("cannot read rate table: %s" % err) from err
    except ValueError as err:
        raise UsageError("invalid rate table %s: %s" % (path, err)) from err


def parse_data(text, N, vocab):
    """``pointmass``, ``uniform-pair`` or ``random=<seed>``"""
    name, _, value = text.partition('=')
    if (vocab + 1) ** N > MAX_STATES:
        raise CapacityError("%d^%d states exceed the capacity of %d"
                            % (vocab + 1, N, MAX_STATES))
    if name == 'pointmass' and not value:
        return point_mass(N, vocab)
    if name == 'uniform-pair' and not value:
        return uniform_pair(N, vocab)
    if name == 'random' and value:
        try:
            return random_data(N, vocab, int(value))
        except ValueError:
            raise UsageError("invalid seed in %r" % text) from None

    raise UsageError("unknown data %r: expected pointmass, uniform-pair or "
                     "random=<seed>" % text)


def read_schedule_file(source):
    """Load a schedule file written by ``geosched schedule``.

    ``source`` is a path or the file contents. JSON and CSV forms are
    both accepted. Returns ``(process, schedule)``.
    """
    text = source
    if not source.lstrip().startswith(('{', '#')):
        try:
            with open(source, encoding='utf-8') as f:
                text = f.read()
        except OSError as err:
            raise ScheduleFileError(
                "cannot read schedule file: %s" % err) from err

    if text.lstrip().startswith('{'):
        return loads_json(text)
    else:
        return loads_csv(text)


def _write(text, path, stdout):
    logger.debug("writing %d characters to %s", len(text), path or "stdout")
    if path is None:
        stdout.write(text)
    else:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)


class ScheduleConsole:
    """Handlers of the ``geosched`` subcommands.

    Each handler takes the parsed arguments and returns the exit code.
    """

    def __init__(self, stdout=None):
        self.stdout = sys.stdout if stdout is None else stdout
        self.handlers = {}

        for command, handler in [
            ('schedule', self.cmd_schedule),
            ('verify', self.cmd_verify),
            ('simulate', self.cmd_simulate)
        ]:
            self.register_handler(command, handler)

    def register_handler(self, command, handler):
        self.handlers[command] = handler

    def dispatch(self, args):
        return self.handlers[args.command](args)

    def cmd_schedule(self, args):
        process = parse_process(args.process)
        generator = args.generator
        if generator == 'cosine' and args.offset:
            generator = 'cosine-offset'

        if generator == 'cosine-offset':
            sched = build_schedule('cosine', process, args.steps,
                                   offset=args.offset)
        else:
            sched = build_schedule(generator, process, args.steps)

        if args.format == 'csv':
            text = dumps_csv(process, sched)
        else:
            text = dumps_json(process, sched)

        _write(text, args.out, self.stdout)
        return 0

    def cmd_verify(self, args):
        results = run_suites(args.suite, seed=args.seed, max_N=args.max_N,
                             max_vocab=args.max_vocab)

        for result in results:
            self.stdout.write(result.format() + '\n')

        failed = sum(not r.passed for r in results)
        self.stdout.write('%d checks, %d failed\n' % (len(results), failed))
        return 1 if failed else 0

    def cmd_simulate(self, args):
        process = parse_process(args.process)
        data = parse_data(args.data, args.N, args.vocab)

        reports = compare_schedules(data, process, args.steps,
                                    args.schedules, args.samples, args.seed)

        buffer = io.StringIO()
        buffer.write('# data=%s N=%d vocab=%d process=%s samples=%d seed=%d\n'
                     % (args.data, args.N, args.vocab, args.process,
                        args.samples, args.seed))
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(SIMULATE_COLUMNS)
        for report in reports:
            writer.writerow([
                report.schedule_tag,
                report.T,
                format_float(report.tv_distance),
                format_float(report.kl_estimate),
                format_float(report.max_step_length),
                format_float(report.min_step_length),
                format_float(np.round(report.wall_time, 3)),
            ])

        _write(buffer.getvalue(), args.out, self.stdout)
        return 0
