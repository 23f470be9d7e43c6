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
Orthonormal filter banks and the periodized separable 2-D DWT.

Subband classes follow the tensor type of the analysis filters, x1 being axis 0:

* u=1: wavelet filter along both axes (diagonal detail)
* u=2: wavelet filter along x1, scaling filter along x2 (rapid variation in x1)
* u=3: scaling filter along x1, wavelet filter along x2
* u=4: scaling filter along both axes (the level-J scaling block)
"""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field

import numpy as np
import pywt

from hyperdenoise.exceptions import DecompositionDepthError, MalformedPyramidError, ShapeMismatchError
from hyperdenoise.numerics.grid import Image
from hyperdenoise.types import WaveletName, as_wavelet

logger = logging.getLogger(__name__)

MODE = "periodization"
DETAIL_CLASSES = (1, 2, 3)
SCALING_CLASS = 4

# PyWavelets names of the supported banks; sym4 is the 8-tap least-asymmetric Daubechies bank
_PYWT_NAMES = {
    WaveletName.LA8: "sym4",
    WaveletName.D4: "db2",
    WaveletName.HAAR: "haar",
}


@dataclass(frozen=True, eq=False)
class FilterPair:
    """
    An orthonormal two-channel filter bank.

    Attributes:
        name (WaveletName): Bank identifier.
        g (np.ndarray): Scaling filter, published coefficient order.
        h (np.ndarray): Wavelet filter, h_l = (-1)^l g_{L-1-l}.
        wavelet (pywt.Wavelet): The PyWavelets object that runs the transform.
    """

    name: WaveletName
    g: np.ndarray
    h: np.ndarray
    wavelet: pywt.Wavelet = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.g)


def filter_bank(name: WaveletName | str) -> FilterPair:
    """
    Looks up a filter bank by name.

    Args:
        name (WaveletName | str): la8, haar or d4.

    Raises:
        UnknownWaveletError: If the name is not one of the supported banks.
    """
    name = as_wavelet(name)
    wavelet = pywt.Wavelet(_PYWT_NAMES[name])
    g = np.asarray(wavelet.rec_lo, dtype=np.float64)
    signs = np.where(np.arange(len(g)) % 2 == 0, 1.0, -1.0)
    h = signs * g[::-1]
    g.setflags(write=False)
    h.setflags(write=False)
    return FilterPair(name=name, g=g, h=h, wavelet=wavelet)


@dataclass(eq=False)
class Pyramid:
    """
    The full set of DWT coefficients of an n x n image decomposed to depth J.

    Attributes:
        n (int): Side of the decomposed image.
        levels (int): Decomposition depth J.
        subbands (dict[tuple[int, int], np.ndarray]): Detail blocks keyed by (j, u), j = 1..J, u = 1..3,
            each of side n / 2^j.
        scaling (np.ndarray): The level-J scaling block, side n / 2^J.

    Raises:
        MalformedPyramidError: If any block has the wrong shape or a block is missing.
    """

    n: int
    levels: int
    subbands: dict[tuple[int, int], np.ndarray]
    scaling: np.ndarray

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.n < 2 or self.n & (self.n - 1):
            raise MalformedPyramidError(f"Pyramid side must be a power of two, got: {self.n}")
        if not 1 <= self.levels <= self.n.bit_length() - 1:
            raise MalformedPyramidError(f"Pyramid depth {self.levels} is out of range for side {self.n}")
        expected_keys = set(detail_keys(self.levels))
        if set(self.subbands) != expected_keys:
            raise MalformedPyramidError(f"Pyramid subbands do not match depth {self.levels}")
        for (j, u), block in self.subbands.items():
            side = self.n >> j
            if np.shape(block) != (side, side):
                raise MalformedPyramidError(f"Subband (j={j}, u={u}) has shape {np.shape(block)}, expected {side}")
        side = self.n >> self.levels
        if np.shape(self.scaling) != (side, side):
            raise MalformedPyramidError(f"Scaling block has shape {np.shape(self.scaling)}, expected {side}")

    def detail(self, j: int, u: int) -> np.ndarray:
        return self.subbands[(j, u)]

    def block(self, j: int, u: int) -> np.ndarray:
        """Subband (j, u), with u=4 addressing the scaling block at j=J."""
        if u == SCALING_CLASS:
            if j != self.levels:
                raise KeyError((j, u))
            return self.scaling
        return self.subbands[(j, u)]

    @property
    def coefficient_count(self) -> int:
        return self.detail_count + self.scaling.size

    @property
    def detail_count(self) -> int:
        return sum(block.size for block in self.subbands.values())

    def energy(self, include_scaling: bool = True) -> float:
        total = sum(float(np.sum(block**2)) for _, block in self.iter_details())
        if include_scaling:
            total += float(np.sum(self.scaling**2))
        return total

    def iter_details(self) -> Iterator[tuple[tuple[int, int], np.ndarray]]:
        """Detail blocks in storage order: j = 1..J, then u = 1..3."""
        for key in detail_keys(self.levels):
            yield key, self.subbands[key]

    def map_details(self, fn: Callable[[tuple[int, int], np.ndarray], np.ndarray]) -> "Pyramid":
        """A new pyramid with ``fn`` applied to every detail block; the scaling block is copied."""
        return Pyramid(
            n=self.n,
            levels=self.levels,
            subbands={key: np.asarray(fn(key, block), dtype=np.float64) for key, block in self.iter_details()},
            scaling=self.scaling.copy(),
        )

    def same_shape(self, other: "Pyramid") -> bool:
        return self.n == other.n and self.levels == other.levels

    def __repr__(self):
        return f"Pyramid(n={self.n}, levels={self.levels})"


def detail_keys(levels: int) -> list[tuple[int, int]]:
    return [(j, u) for j in range(1, levels + 1) for u in DETAIL_CLASSES]


def check_same_pyramids(*pyramids: Pyramid):
    first = pyramids[0]
    for other in pyramids[1:]:
        if not first.same_shape(other):
            raise ShapeMismatchError(
                f"Pyramids differ: (n={first.n}, J={first.levels}) vs (n={other.n}, J={other.levels})"
            )


def zero_pyramid(n: int, levels: int) -> Pyramid:
    return Pyramid(
        n=n,
        levels=levels,
        subbands={(j, u): np.zeros((n >> j, n >> j)) for j, u in detail_keys(levels)},
        scaling=np.zeros((n >> levels, n >> levels)),
    )


def dwt2(img: Image, fp: FilterPair, levels: int) -> Pyramid:
    """
    Periodized separable 2-D DWT (Mallat cascade) to depth ``levels``.

    Args:
        img (Image): The image to decompose.
        fp (FilterPair): Filter bank.
        levels (int): Depth J, 1 <= J <= lg n.

    Raises:
        DecompositionDepthError: If J is out of range.
    """
    if not 1 <= levels <= img.levels:
        raise DecompositionDepthError(f"Decomposition depth must lie in 1..{img.levels}, got: {levels}")
    if (img.n >> levels) < fp.length:
        logger.warning(
            "Depth %d leaves %d-sample subbands, shorter than the %d-tap %s filter; periodic wrap-around dominates",
            levels,
            img.n >> levels,
            fp.length,
            fp.name.value,
        )
    subbands = {}
    approx = img.data
    for j in range(1, levels + 1):
        approx, (along_x1, along_x2, diagonal) = pywt.dwt2(approx, fp.wavelet, mode=MODE)
        subbands[(j, 1)] = diagonal
        subbands[(j, 2)] = along_x1
        subbands[(j, 3)] = along_x2
    return Pyramid(n=img.n, levels=levels, subbands=subbands, scaling=approx)


def idwt2(pyr: Pyramid, fp: FilterPair) -> Image:
    """
    Inverse of dwt2 up to floating-point roundoff.

    Raises:
        MalformedPyramidError: If the pyramid's blocks do not fit its side and depth.
    """
    pyr.validate()
    approx = pyr.scaling
    for j in range(pyr.levels, 0, -1):
        details = (pyr.subbands[(j, 2)], pyr.subbands[(j, 3)], pyr.subbands[(j, 1)])
        approx = pywt.idwt2((approx, details), fp.wavelet, mode=MODE)
    return Image(approx)


def pyramid_to_array(pyr: Pyramid) -> np.ndarray:
    """All coefficients as one flat vector: subbands j = 1..J, u = 1..3 row-major, then the scaling block."""
    parts = [block.ravel() for _, block in pyr.iter_details()]
    parts.append(pyr.scaling.ravel())
    return np.concatenate(parts)


def array_from_pyramid(values: np.ndarray, n: int, levels: int) -> Pyramid:
    """
    Inverse of pyramid_to_array.

    Raises:
        MalformedPyramidError: If the vector length is not n^2.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size != n * n:
        raise MalformedPyramidError(f"Expected {n * n} coefficients for side {n}, got: {values.size}")
    subbands = {}
    offset = 0
    for j, u in detail_keys(levels):
        side = n >> j
        subbands[(j, u)] = values[offset : offset + side * side].reshape(side, side).copy()
        offset += side * side
    side = n >> levels
    scaling = values[offset : offset + side * side].reshape(side, side).copy()
    return Pyramid(n=n, levels=levels, subbands=subbands, scaling=scaling)


def unit_atom(n: int, levels: int, fp: FilterPair, j: int, u: int, k: tuple[int, int] = (0, 0)) -> Image:
    """The synthesis atom of coefficient (j, u, k): idwt2 of a pyramid with a single unit entry."""
    pyr = zero_pyramid(n, levels)
    pyr.block(j, u)[k] = 1.0
    return idwt2(pyr, fp)


__all__ = [
    "DETAIL_CLASSES",
    "MODE",
    "SCALING_CLASS",
    "FilterPair",
    "Pyramid",
    "array_from_pyramid",
    "check_same_pyramids",
    "detail_keys",
    "dwt2",
    "filter_bank",
    "idwt2",
    "pyramid_to_array",
    "unit_atom",
    "zero_pyramid",
]
