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

"""
Entry point of the ``geosched`` command

Exit codes: 0 success, 1 failed verification, 2 usage error,
3 numeric or capacity error.
"""

import argparse
import logging
import sys

from geosched import __version__
from geosched.errors import GeoSchedError, NumericError
from geosched.path_geometry import SCHEDULE_GENERATORS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

GENERATORS = ('geodesic', 'cosine', 'cosine-offset', 'uniform-time',
              'uniform-alpha', 'geodesic-numeric')


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected an integer, got %r" % text) from None
    if value < 1:
        raise argparse.ArgumentTypeError(
            "expected a positive integer, got %r" % text)
    return value


def _nonnegative_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected a number, got %r" % text) from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(
            "expected a nonnegative number, got %r" % text)
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected an integer seed, got %r" % text) from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(
            "seed must be an unsigned 64-bit integer, got %r" % text)
    return value


def _step_list(text):
    return [_positive_int(v) for v in text.split(',')]


def _schedule_list(text):
    names = text.split(',')
    for name in names:
        if name not in SCHEDULE_GENERATORS:
            raise argparse.ArgumentTypeError(
                "unknown schedule %r, expected one of %s"
                % (name, ', '.join(SCHEDULE_GENERATORS)))
    return names


def build_parser():
    parser = argparse.ArgumentParser(
        prog='geosched',
        description="Fisher-Rao optimal schedules for masked diffusion")
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="log progress to stderr (-vv for debug)")

    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    p = commands.add_parser('schedule', help="write a schedule file")
    p.add_argument('--process', default='linear',
                   help="linear, const-beta=<c> or table=<path>")
    p.add_argument('--steps', type=_positive_int, required=True)
    p.add_argument('--generator', choices=GENERATORS, default='geodesic')
    p.add_argument('--offset', type=_nonnegative_float, default=0.0,
                   help="shift of the cosine-offset family")
    p.add_argument('--format', choices=('json', 'csv'), default='json')
    p.add_argument('--out', default=None)

    p = commands.add_parser('verify', help="run the verification suites")
    p.add_argument('--suite', action='append',
                   choices=('geometry', 'fisher', 'taylor', 'all'))
    p.add_argument('--seed', type=_seed, default=0)
    p.add_argument('--max-N', dest='max_N', type=_positive_int, default=3)
    p.add_argument('--max-vocab', dest='max_vocab', type=_positive_int,
                   default=3)

    p = commands.add_parser('simulate', help="compare schedules by sampling")
    p.add_argument('--data', default='pointmass',
                   help="pointmass, uniform-pair or random=<seed>")
    p.add_argument('--N', type=_positive_int, default=2)
    p.add_argument('--vocab', type=_positive_int, default=2)
    p.add_argument('--process', default='linear')
    p.add_argument('--steps', type=_step_list, default=[1, 4, 16])
    p.add_argument('--schedules', type=_schedule_list,
                   default=['geodesic', 'uniform-time'])
    p.add_argument('--samples', type=_positive_int, default=100000)
    p.add_argument('--seed', type=_seed, default=0)
    p.add_argument('--out', default=None)

    return parser


def configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity,
                                                       logging.DEBUG)
    logging.basicConfig(
        level=level, stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s')


def main(argv=None, stdout=None):
    from geosched.console.commands import ScheduleConsole

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code

    if args.command == 'verify' and not args.suite:
        args.suite = ['all']

    configure_logging(args.verbose)
    console = ScheduleConsole(stdout=stdout)

    try:
        return console.dispatch(args)
    except NumericError as err:
        logger.debug("numeric failure", exc_info=True)
        sys.stderr.write('geosched: error: %s\n' % err)
        return EXIT_NUMERIC
    except GeoSchedError as err:
        sys.stderr.write('geosched: error: %s\n' % err)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
