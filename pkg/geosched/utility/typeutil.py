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

import numpy as np


numpy_to_py = {
    "bool_": bool,
    "bool": bool,
    "int8": int,
    "int16": int,
    "int32": int,
    "int64": int,
    "uint8": int,
    "uint16": int,
    "uint32": int,
    "uint64": int,
    "float16": float,
    "float32": float,
    "float64": float,
}


def is_numpy_number(obj):
    """Check if numpy scalar convertible to a Python number

        bool_,
        int8, int16, int32, int64,
        uint8, uint16, uint32, uint64,
        float16, float32,
        float64,    subclass of Python float
    """
    return type(obj).__name__ in numpy_to_py and isinstance(obj, np.generic)


def to_builtin(value):
    """Convert numpy scalars and arrays to Python numbers and lists"""
    if isinstance(value, np.ndarray):
        return [to_builtin(v) for v in value.tolist()]
    if is_numpy_number(value):
        return numpy_to_py[type(value).__name__](value)
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, dict):
        return {key: to_builtin(v) for key, v in value.items()}
    return value


def format_float(value):
    """Shortest decimal that reads back to the same float"""
    return repr(float(value))
