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

import csv
import io
import math
from collections.abc import Iterable, Sequence
from enum import Enum
from typing import Any

import numpy as np

from hyperdenoise.exceptions import InvalidArgumentError


def derive_seed_sequence(base_seed: int, *keys: int) -> np.random.SeedSequence:
    """
    Derives an independent seed sequence for one unit of work (a replicate, a spin, a Monte Carlo block).

    Example:
        derive_seed_sequence(7, 3) and derive_seed_sequence(7, 4) give statistically independent streams,
        and both are reproducible from the base seed alone.

    Args:
        base_seed (int): The run's seed.
        *keys (int): Position of the unit of work, e.g. (snr_index, replicate).

    Returns:
        np.random.SeedSequence: The derived sequence.
    """
    return np.random.SeedSequence([int(base_seed), *(int(k) for k in keys)])


def derive_seed(base_seed: int, *keys: int) -> int:
    """Same as derive_seed_sequence, collapsed to a single 64-bit integer seed."""
    return int(derive_seed_sequence(base_seed, *keys).generate_state(1, dtype=np.uint64)[0])


def make_rng(base_seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed_sequence(base_seed, *keys))


def ordered_mean(arrays: Iterable[np.ndarray]) -> np.ndarray:
    """
    Averages arrays by summing them in the order given. The result does not depend on the order
    in which concurrent producers finished, only on the order of the iterable.
    """
    total = None
    count = 0
    for array in arrays:
        total = np.array(array, dtype=np.float64, copy=True) if total is None else total + array
        count += 1
    if total is None:
        raise InvalidArgumentError("ordered_mean needs at least one array")
    return total / count


def mean_and_stderr(values: Sequence[float] | np.ndarray) -> tuple[float, float]:
    """
    Sample mean and standard error of the mean. The standard error is 0 for a single value.
    """
    values = np.asarray(values, dtype=np.float64)
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))


def format_csv_value(value: Any) -> str:
    """
    Formats a single CSV cell. Floats use the shortest representation that round-trips,
    with '.' as decimal separator; infinities are written as 'inf'/'-inf'.
    """
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    Renders a header and rows as RFC-4180 CSV text (CRLF line endings, minimal quoting).
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_csv_value(value) for value in row])
    return buffer.getvalue()


def parse_float_list(text: str) -> list[float]:
    """Parses a comma separated list such as '2,4,8'. Empty items are ignored."""
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidArgumentError(f"Expected a comma separated list of numbers, got: {text!r}") from None


def parse_grid(text: str) -> list[float]:
    """
    Parses a grid specification, either a comma separated list ('0,1,2.5') or a range 'start:stop:step'
    whose stop is included when it lies on the grid.

    Example:
        parse_grid("3:6:0.5") -> [3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0]
    """
    if ":" not in text:
        return parse_float_list(text)
    parts = parse_float_list(text.replace(":", ","))
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise InvalidArgumentError(f"Grid range must be start:stop:step with step > 0, got: {text!r}")
    start, stop, step = parts
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]
