# hyperdenoise
# Copyright 2025 Denys Karmazeniuk
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

from hyperdenoise.core.helpers import (
    derive_seed,
    format_csv_value,
    make_rng,
    mean_and_stderr,
    ordered_mean,
    parse_float_list,
    parse_grid,
    rows_to_csv,
)
from hyperdenoise.exceptions import InvalidArgumentError
from hyperdenoise.types import Method


# Test seeding
def test_derived_seeds_are_reproducible():
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert derive_seed(7, 3) != derive_seed(7, 4)
    assert derive_seed(7, 0, 1) != derive_seed(7, 1, 0)


def test_make_rng_streams():
    first = make_rng(5, 0).standard_normal(4)
    assert np.array_equal(first, make_rng(5, 0).standard_normal(4))
    assert not np.array_equal(first, make_rng(5, 1).standard_normal(4))


# Test reductions
def test_ordered_mean():
    arrays = [np.full((2, 2), v) for v in (1.0, 2.0, 6.0)]
    assert np.array_equal(ordered_mean(arrays), np.full((2, 2), 3.0))
    assert ordered_mean(iter(arrays)).shape == (2, 2)
    assert arrays[0][0, 0] == 1.0


def test_ordered_mean_needs_input():
    with pytest.raises(InvalidArgumentError):
        ordered_mean([])


def test_mean_and_stderr():
    mean, stderr = mean_and_stderr([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5
    assert stderr == pytest.approx(math.sqrt(5 / 3) / 2)
    assert mean_and_stderr([3.0]) == (3.0, 0.0)


# Test CSV output
@pytest.mark.parametrize(
    "value, expected",
    [
        (Method.RIESZ, "r"),
        (True, "true"),
        (np.bool_(False), "false"),
        (3, "3"),
        (np.int64(4), "4"),
        (0.1, "0.1"),
        (np.float64(2.5), "2.5"),
        (math.inf, "inf"),
        (None, ""),
        ("img", "img"),
    ],
    ids=["enum", "bool", "numpy_bool", "int", "numpy_int", "float", "numpy_float", "inf", "none", "text"],
)
def test_format_csv_value(value, expected):
    assert format_csv_value(value) == expected


def test_rows_to_csv():
    text = rows_to_csv(("name", "value"), [("a,b", 1.5), ("c", None)])
    assert text == 'name,value\r\n"a,b",1.5\r\nc,\r\n'


# Test list and grid parsing
def test_parse_float_list():
    assert parse_float_list("2,4, 8,") == [2.0, 4.0, 8.0]
    with pytest.raises(InvalidArgumentError):
        parse_float_list("2,four")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3:6:0.5", [3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0]),
        ("0:1:0.3", [0.0, 0.3, 0.6, 0.8999999999999999]),
        ("2:2:1", [2.0]),
        ("0,1,2.5", [0.0, 1.0, 2.5]),
    ],
    ids=["range", "off_grid_stop", "single", "list"],
)
def test_parse_grid(text, expected):
    assert parse_grid(text) == pytest.approx(expected)


@pytest.mark.parametrize(
    "text", ["0:1:0", "0:1:-1", "2:1:1", "0:1", "0:1:a"], ids=["zero", "negative", "backwards", "short", "text"]
)
def test_parse_grid_errors(text):
    with pytest.raises(InvalidArgumentError):
        parse_grid(text)
