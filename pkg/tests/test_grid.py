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

from hyperdenoise.exceptions import (
    AliasedFrequencyError,
    InvalidArgumentError,
    InvalidImageError,
    NumericError,
    ShapeMismatchError,
)
from hyperdenoise.numerics.grid import (
    Image,
    add_noise,
    check_same_size,
    is_builtin,
    make_blobs,
    make_composite,
    make_edge,
    make_oscillation,
    parse_builtin,
    shift_image,
    sigma_for_snr,
    snr,
)
from hyperdenoise.types import NoiseSpec


@pytest.fixture
def oscillation():
    return make_oscillation(a=2.0, f0=0.125, phi0=0.0, n=32)


@pytest.mark.parametrize(
    "data",
    [np.zeros((16, 8)), np.zeros((12, 12)), np.zeros((4, 4)), np.zeros(64), np.full((8, 8), np.nan)],
    ids=["not_square", "not_dyadic", "too_small", "one_dimensional", "not_finite"],
)
def test_image_rejects_invalid_arrays(data):
    with pytest.raises(InvalidImageError):
        Image(data)


def test_image_is_a_read_only_copy():
    source = np.ones((8, 8))
    img = Image(source)
    source[0, 0] = 5.0
    assert img.data[0, 0] == 1.0, "Image must not alias the caller's array"
    with pytest.raises(ValueError):
        img.data[0, 0] = 2.0
    assert img.n == 8
    assert img.levels == 3


def test_oscillation_samples(oscillation):
    # phi0 = 0 and f0 = 1/8: a cosine along x1 with period 8, constant along x2
    assert np.allclose(oscillation.data[:, 0], 2.0 * np.cos(2 * np.pi * np.arange(32) / 8))
    assert np.allclose(oscillation.data, oscillation.data[:, :1])


@pytest.mark.parametrize("f0", [0.0, 0.5, 0.7, -0.1], ids=["zero", "nyquist", "above_nyquist", "negative"])
def test_oscillation_rejects_aliased_frequencies(f0):
    with pytest.raises(AliasedFrequencyError):
        make_oscillation(a=1.0, f0=f0, phi0=0.0, n=32)


def test_edge_peaks_on_its_line():
    img = make_edge(theta=math.pi / 2, c=10.0, amp=3.0, width=1.0, n=32)
    assert np.allclose(img.data[:, 10], 3.0)
    assert np.all(img.data[:, 20] < 1e-10)


@pytest.mark.parametrize(
    "kwargs",
    [{"theta": 0.0}, {"theta": 2.0}, {"width": 0.4}],
    ids=["theta_zero", "theta_above_right_angle", "too_narrow"],
)
def test_edge_rejects_invalid_parameters(kwargs):
    params = {"theta": math.pi / 3, "c": 8.0, "amp": 1.0, "width": 1.0, "n": 16} | kwargs
    with pytest.raises(InvalidArgumentError):
        make_edge(**params)


def test_blobs_are_reproducible():
    assert np.array_equal(make_blobs(32, count=4, seed=3).data, make_blobs(32, count=4, seed=3).data)
    assert not np.array_equal(make_blobs(32, count=4, seed=3).data, make_blobs(32, count=4, seed=4).data)


def test_composite_is_oscillation_plus_ridge():
    composite = make_composite(n=32)
    assert composite.n == 32
    assert np.max(composite.data) > 3.0


@pytest.mark.parametrize(
    "reference, n",
    [
        ("builtin:oscillation", 256),
        ("builtin:oscillation?n=64&f0=0.2", 64),
        ("builtin:ridge?n=32&amp=2", 32),
        ("builtin:blobs?n=16&count=2&seed=5", 16),
        ("builtin:composite?n=128", 128),
    ],
    ids=["defaults", "oscillation", "ridge", "blobs", "composite"],
)
def test_parse_builtin(reference, n):
    assert is_builtin(reference)
    assert parse_builtin(reference).n == n


@pytest.mark.parametrize(
    "reference",
    ["builtin:nothing", "builtin:oscillation?f0=fast", "builtin:oscillation?depth=3", "builtin:ridge?n"],
    ids=["unknown_name", "not_a_number", "unknown_parameter", "malformed_query"],
)
def test_parse_builtin_rejects_bad_references(reference):
    with pytest.raises(InvalidArgumentError):
        parse_builtin(reference)


def test_add_noise_is_seeded(oscillation):
    first = add_noise(oscillation, NoiseSpec(sigma=0.5, seed=11))
    again = add_noise(oscillation, NoiseSpec(sigma=0.5, seed=11))
    other = add_noise(oscillation, NoiseSpec(sigma=0.5, seed=12))
    assert np.array_equal(first.data, again.data)
    assert not np.array_equal(first.data, other.data)


def test_add_noise_level():
    zero = Image(np.zeros((256, 256)))
    noisy = add_noise(zero, NoiseSpec(sigma=3.0, seed=0))
    assert abs(np.std(noisy.data) - 3.0) < 0.05


def test_noise_spec_validation():
    with pytest.raises(InvalidArgumentError):
        NoiseSpec(sigma=0.0)
    with pytest.raises(InvalidArgumentError):
        NoiseSpec(sigma=1.0, seed=-1)


def test_snr_calibration(oscillation):
    sigma = sigma_for_snr(oscillation, 4.0)
    assert snr(oscillation, sigma) == pytest.approx(4.0)
    # a cosine of amplitude 2 has rms sqrt(2)
    assert sigma == pytest.approx(math.sqrt(2) / 4)


def test_snr_errors(oscillation):
    with pytest.raises(InvalidArgumentError):
        snr(oscillation, 0.0)
    with pytest.raises(InvalidArgumentError):
        sigma_for_snr(oscillation, -1.0)
    with pytest.raises(NumericError):
        sigma_for_snr(Image(np.zeros((8, 8))), 2.0)


def test_shift_image_round_trip():
    img = make_blobs(16, count=3, seed=1)
    shifted = shift_image(img, 3, 5)
    assert shifted.data[3, 5] == img.data[0, 0]
    assert np.array_equal(shift_image(shifted, -3, -5).data, img.data)


def test_check_same_size():
    check_same_size(Image(np.zeros((8, 8))), Image(np.ones((8, 8))))
    with pytest.raises(ShapeMismatchError):
        check_same_size(Image(np.zeros((8, 8))), Image(np.zeros((16, 16))))
