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

"""
Image container, synthetic feature generators, Gaussian noise injection and SNR accounting.

Coordinates follow array indexing: x1 is the row index (axis 0), x2 the column index (axis 1),
and the sampling step is 1.
"""

import logging
import math
from dataclasses import dataclass
from urllib.parse import parse_qsl

import numpy as np

from hyperdenoise.exceptions import (
    AliasedFrequencyError,
    InvalidArgumentError,
    InvalidImageError,
    NumericError,
    ShapeMismatchError,
)
from hyperdenoise.types.args import NoiseSpec

logger = logging.getLogger(__name__)

MIN_SIDE = 8
DEFAULT_EDGE_WIDTH = 1.0


@dataclass(frozen=True, eq=False)
class Image:
    """
    A square, dyadic, real-valued image. The data are stored as a read-only float64 array.

    Raises:
        InvalidImageError: If the array is not 2-D and square, the side is not a power of two of at least 8,
            or any entry is not finite.
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise InvalidImageError(f"Image must be a square 2-D array, got shape: {data.shape}")
        n = data.shape[0]
        if n < MIN_SIDE or n & (n - 1):
            raise InvalidImageError(f"Image side must be a power of two >= {MIN_SIDE}, got: {n}")
        if not np.all(np.isfinite(data)):
            raise InvalidImageError("Image contains non-finite values")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def levels(self) -> int:
        """lg n, the deepest admissible decomposition."""
        return self.n.bit_length() - 1

    def energy(self) -> float:
        return float(np.sum(self.data**2))

    def __repr__(self):
        return f"Image(n={self.n})"


def check_side(n: int):
    if n < MIN_SIDE or n & (n - 1):
        raise InvalidImageError(f"Image side must be a power of two >= {MIN_SIDE}, got: {n}")


def coordinates(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer sample coordinates (x1, x2) as broadcastable column and row vectors."""
    x = np.arange(n, dtype=np.float64)
    return x[:, None], x[None, :]


def make_oscillation(a: float, f0: float, phi0: float, n: int) -> Image:
    """
    A plane wave a*cos(2*pi*f0*(cos(phi0)*x1 + sin(phi0)*x2)) with constant amplitude.

    Args:
        a (float): Amplitude.
        f0 (float): Frequency magnitude in cycles per sample, strictly inside (0, 1/2).
        phi0 (float): Orientation of the wave vector in radians, measured from the x1 axis.
        n (int): Side length.

    Raises:
        AliasedFrequencyError: If f0 is outside (0, 1/2).
    """
    if not (0 < f0 < 0.5):
        raise AliasedFrequencyError(f"Frequency magnitude must lie in (0, 1/2), got: {f0}")
    check_side(n)
    x1, x2 = coordinates(n)
    return Image(a * np.cos(2 * np.pi * f0 * (math.cos(phi0) * x1 + math.sin(phi0) * x2)))


def make_edge(theta: float, c: float, amp: float, width: float = DEFAULT_EDGE_WIDTH, n: int = 256) -> Image:
    """
    A straight ridge amp*exp(-d^2/(2*width^2)) along the line d = cos(theta)*x1 + sin(theta)*x2 - c = 0.

    Raises:
        InvalidArgumentError: If theta is outside (0, pi/2] or width is below half a sample.
    """
    if not (0 < theta <= math.pi / 2):
        raise InvalidArgumentError(f"Edge orientation must lie in (0, pi/2], got: {theta}")
    if width < 0.5:
        raise InvalidArgumentError(f"Edge width must be at least 0.5 samples, got: {width}")
    check_side(n)
    x1, x2 = coordinates(n)
    d = math.cos(theta) * x1 + math.sin(theta) * x2 - c
    return Image(amp * np.exp(-(d**2) / (2 * width**2)))


def make_blobs(n: int, count: int = 6, seed: int = 0) -> Image:
    """
    A piecewise-smooth test image: ``count`` discs with random centres, radii and levels, each carrying a gentle
    linear ramp, over a zero background. Discs drawn later cover earlier ones.
    """
    check_side(n)
    if count < 1:
        raise InvalidArgumentError(f"Blob count must be at least 1, got: {count}")
    rng = np.random.default_rng(seed)
    x1, x2 = coordinates(n)
    data = np.zeros((n, n))
    for _ in range(count):
        c1, c2 = rng.uniform(0, n, size=2)
        radius = rng.uniform(n / 16, n / 4)
        level = rng.uniform(-1.0, 1.0)
        slope = rng.uniform(-1.0, 1.0, size=2) / n
        inside = (x1 - c1) ** 2 + (x2 - c2) ** 2 <= radius**2
        ramp = level + slope[0] * (x1 - c1) + slope[1] * (x2 - c2)
        data = np.where(inside, ramp, data)
    return Image(data)


def make_composite(
    n: int = 256,
    a: float = 1.0,
    f0: float = 0.15,
    phi0: float = math.pi / 6,
    theta: float = math.pi / 3,
    c: float | None = None,
    amp: float = 4.0,
    width: float = DEFAULT_EDGE_WIDTH,
) -> Image:
    """An oscillation plus a ridge through the image centre, the default end-to-end test image."""
    if c is None:
        c = (math.cos(theta) + math.sin(theta)) * n / 2
    oscillation = make_oscillation(a, f0, phi0, n)
    ridge = make_edge(theta, c, amp, width, n)
    return Image(oscillation.data + ridge.data)


def _builtin_ridge(
    n: int = 256,
    theta: float = math.pi / 3,
    c: float | None = None,
    amp: float = 4.0,
    width: float = DEFAULT_EDGE_WIDTH,
) -> Image:
    if c is None:
        c = (math.cos(theta) + math.sin(theta)) * n / 2
    return make_edge(theta, c, amp, width, n)


def _builtin_oscillation(n: int = 256, a: float = 1.0, f0: float = 0.15, phi0: float = math.pi / 6) -> Image:
    return make_oscillation(a, f0, phi0, n)


def _builtin_blobs(n: int = 256, count: int = 6, seed: int = 0) -> Image:
    return make_blobs(n, count, seed)


# Builtin images addressable as builtin:NAME?key=val&key=val
BUILTIN_IMAGES = {
    "oscillation": _builtin_oscillation,
    "ridge": _builtin_ridge,
    "blobs": _builtin_blobs,
    "composite": make_composite,
}

_INTEGER_KEYS = {"n", "count", "seed"}


def parse_builtin(reference: str) -> Image:
    """
    Builds a builtin image from a reference such as ``builtin:oscillation?f0=0.2&n=128``.

    Raises:
        InvalidArgumentError: If the name is unknown or a parameter is not accepted by the generator.
    """
    body = reference.removeprefix("builtin:")
    name, _, query = body.partition("?")
    if name not in BUILTIN_IMAGES:
        raise InvalidArgumentError(f"Unknown builtin image {name!r}; expected one of {sorted(BUILTIN_IMAGES)}")
    try:
        pairs = parse_qsl(query, strict_parsing=bool(query))
    except ValueError:
        raise InvalidArgumentError(f"Malformed builtin parameters: {query!r}") from None
    params = {}
    for key, value in pairs:
        try:
            params[key] = int(value) if key in _INTEGER_KEYS else float(value)
        except ValueError:
            raise InvalidArgumentError(f"Builtin parameter {key!r} is not a number: {value!r}") from None
    try:
        return BUILTIN_IMAGES[name](**params)
    except TypeError as error:
        raise InvalidArgumentError(f"Invalid parameters for builtin {name!r}: {error}") from None


def is_builtin(reference: str) -> bool:
    return reference.startswith("builtin:")


def add_noise(img: Image, spec: NoiseSpec) -> Image:
    """
    Returns img + eps with eps i.i.d. N(0, sigma^2), drawn from a PCG64 generator seeded by ``spec.seed``.
    """
    rng = np.random.default_rng(spec.seed)
    return Image(img.data + spec.sigma * rng.standard_normal((img.n, img.n)))


def snr(q: Image, sigma: float) -> float:
    """
    Signal-to-noise ratio sqrt(sum(q^2) / (N^2 sigma^2)).

    Raises:
        InvalidArgumentError: If sigma is not positive.
    """
    if not sigma > 0:
        raise InvalidArgumentError(f"sigma must be positive, got: {sigma}")
    return math.sqrt(float(np.mean(q.data**2))) / sigma


def sigma_for_snr(q: Image, target_snr: float) -> float:
    """
    The noise level at which ``q`` has the given SNR.

    Raises:
        InvalidArgumentError: If target_snr is not positive.
        NumericError: If q is identically zero.
    """
    if not target_snr > 0:
        raise InvalidArgumentError(f"Target SNR must be positive, got: {target_snr}")
    rms = math.sqrt(float(np.mean(q.data**2)))
    if rms == 0:
        raise NumericError("Cannot calibrate noise for an all-zero image")
    sigma = rms / target_snr
    logger.debug("sigma %.6g gives SNR %.3g", sigma, target_snr)
    return sigma


def shift_image(img: Image, d1: int, d2: int) -> Image:
    """Circular shift by (d1, d2) samples along (x1, x2)."""
    return Image(np.roll(img.data, (d1, d2), axis=(0, 1)))


def check_same_size(a: Image, b: Image):
    if a.n != b.n:
        raise ShapeMismatchError(f"Images differ in size: {a.n} vs {b.n}")


__all__ = [
    "BUILTIN_IMAGES",
    "DEFAULT_EDGE_WIDTH",
    "MIN_SIDE",
    "Image",
    "add_noise",
    "check_same_size",
    "check_side",
    "coordinates",
    "is_builtin",
    "make_blobs",
    "make_composite",
    "make_edge",
    "make_oscillation",
    "parse_builtin",
    "shift_image",
    "sigma_for_snr",
    "snr",
]
