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
DFT-domain Riesz and hypercomplex quadrature components.

A quadrature component is the image filtered by a purely imaginary, Hermitian-symmetric multiplier V:
idft2(dft2(q) * V). It is real, orthogonal to q, and the components of a family carry C times the
energy of q on the frequencies where the multipliers are not degenerate.
"""

import functools
import logging
from dataclasses import dataclass

import numpy as np

from hyperdenoise.exceptions import InvalidArgumentError, SymmetryError
from hyperdenoise.numerics.grid import Image
from hyperdenoise.types import Family, as_family

logger = logging.getLogger(__name__)

RESIDUE_DISCARD = 1e-9
RESIDUE_FAIL = 1e-6

# (number of quadrature components L, energy constant C) per family
FAMILY_CONSTANTS = {
    Family.RIESZ: (2, 1),
    Family.HYPERCOMPLEX: (3, 3),
}


@dataclass(frozen=True, eq=False)
class SpectralFilter:
    """
    A multiplier over the n x n DFT grid, indexed [u1, u2] in numpy FFT order.
    """

    n: int
    values: np.ndarray

    def apply(self, img: Image) -> Image:
        return to_real(idft2(dft2(img) * self.values))

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.values, np.conj(reflect(self.values)), rtol=0.0, atol=atol))


@dataclass(frozen=True, eq=False)
class QuadratureSet:
    """
    An image together with its quadrature components.

    Attributes:
        family (Family): riesz or hypercomplex.
        components (tuple[Image, ...]): L + 1 images, component 0 being the image itself.
        energy_constant (int): C, 1 for riesz and 3 for hypercomplex.
    """

    family: Family
    components: tuple[Image, ...]
    energy_constant: int

    @property
    def order(self) -> int:
        """L, the number of quadrature components."""
        return len(self.components) - 1

    def __getitem__(self, index: int) -> Image:
        return self.components[index]

    def __len__(self):
        return len(self.components)


def dft2(img: Image | np.ndarray) -> np.ndarray:
    """Unnormalised forward 2-D DFT."""
    data = img.data if isinstance(img, Image) else img
    return np.fft.fft2(data)


def idft2(spectrum: np.ndarray) -> np.ndarray:
    """Inverse 2-D DFT carrying the 1/n^2 factor; the result is complex."""
    return np.fft.ifft2(spectrum)


def reflect(values: np.ndarray) -> np.ndarray:
    """values[-u mod n] for every u."""
    return np.roll(np.flip(values, axis=(0, 1)), 1, axis=(0, 1))


def enforce_hermitian(values: np.ndarray) -> np.ndarray:
    """
    The Hermitian part (V(u) + conj(V(-u))) / 2. On self-conjugate frequencies a purely imaginary multiplier
    becomes 0; elsewhere an already symmetric multiplier is unchanged.
    """
    return 0.5 * (values + np.conj(reflect(values)))


def to_real(values: np.ndarray) -> Image:
    """
    Drops the imaginary part of a filtered real image.

    Raises:
        SymmetryError: If the imaginary residue exceeds 1e-6 relative to the image scale.
    """
    scale = max(1.0, float(np.max(np.abs(values.real))))
    residue = float(np.max(np.abs(values.imag))) / scale
    if residue > RESIDUE_FAIL:
        raise SymmetryError(f"Imaginary residue {residue:.3g} after spectral filtering", details={"residue": residue})
    if residue > RESIDUE_DISCARD:
        logger.warning("Imaginary residue %.3g is above %.0e; discarding it", residue, RESIDUE_DISCARD)
    return Image(values.real)


def _check_even(n: int):
    if n < 2 or n % 2:
        raise InvalidArgumentError(f"Spectral filters need an even side, got: {n}")


@functools.lru_cache(maxsize=64)
def _riesz_values(n: int, l: int) -> np.ndarray:
    freqs = np.fft.fftfreq(n)
    f1, f2 = freqs[:, None], freqs[None, :]
    norm = np.hypot(f1, f2)
    numerator = f1 if l == 1 else f2
    with np.errstate(invalid="ignore", divide="ignore"):
        values = np.where(norm > 0, -1j * numerator / norm, 0.0)
    values = enforce_hermitian(values)
    values.setflags(write=False)
    return values


def riesz_filter(n: int, l: int) -> SpectralFilter:
    """
    Riesz multiplier V(u) = -i f_l / |f| on signed frequencies, with V = 0 at DC.

    Rows (l=1) or columns (l=2) at the Nyquist index are self-conjugate and are set to 0.

    Args:
        n (int): Even side length.
        l (int): 1 or 2.
    """
    _check_even(n)
    if l not in (1, 2):
        raise InvalidArgumentError(f"Riesz component index must be 1 or 2, got: {l}")
    return SpectralFilter(n=n, values=_riesz_values(n, l))


def _partial_hilbert_line(n: int) -> np.ndarray:
    """-i for 1..n/2-1, +i for n/2+1..n-1, 0 at 0 and n/2."""
    line = np.zeros(n, dtype=np.complex128)
    line[1 : n // 2] = -1j
    line[n // 2 + 1 :] = 1j
    return line


@functools.lru_cache(maxsize=64)
def _hct_values(n: int, l: int) -> np.ndarray:
    line = _partial_hilbert_line(n)
    ones = np.ones(n)
    if l == 1:
        values = line[:, None] * ones[None, :]
    elif l == 2:
        values = ones[:, None] * line[None, :]
    else:
        values = line[:, None] * line[None, :]
    values.setflags(write=False)
    return values


def hct_filter(n: int, l: int) -> SpectralFilter:
    """
    Hypercomplex multipliers: l=1 and l=2 are partial Hilbert transforms along x1 and x2, l=3 is their product.

    Args:
        n (int): Even side length.
        l (int): 1, 2 or 3.
    """
    _check_even(n)
    if l not in (1, 2, 3):
        raise InvalidArgumentError(f"Hypercomplex component index must be 1, 2 or 3, got: {l}")
    return SpectralFilter(n=n, values=_hct_values(n, l))


def family_filters(n: int, family: Family | str) -> list[SpectralFilter]:
    family = as_family(family)
    order, _ = FAMILY_CONSTANTS[family]
    build = riesz_filter if family is Family.RIESZ else hct_filter
    return [build(n, l) for l in range(1, order + 1)]


def quadrature_set(img: Image, family: Family | str) -> QuadratureSet:
    """
    Computes [q, q_1, ..., q_L] for the given family by spectral multiplication.

    Raises:
        SymmetryError: If a component comes back with a significant imaginary part.
    """
    family = as_family(family)
    _, constant = FAMILY_CONSTANTS[family]
    spectrum = dft2(img)
    components = [img]
    for spectral_filter in family_filters(img.n, family):
        components.append(to_real(idft2(spectrum * spectral_filter.values)))
    return QuadratureSet(family=family, components=tuple(components), energy_constant=constant)


def hct_component(img: Image, l: int) -> Image:
    """A single hypercomplex component; the analytic method only needs l=3."""
    return hct_filter(img.n, l).apply(img)


def partial_hilbert(img: Image, axis: int) -> Image:
    """The partial Hilbert transform along axis 0 (x1) or axis 1 (x2)."""
    if axis not in (0, 1):
        raise InvalidArgumentError(f"axis must be 0 or 1, got: {axis}")
    return hct_component(img, axis + 1)


def band_mask(n: int, family: Family | str) -> np.ndarray:
    """
    Frequencies where the family's multipliers carry their full energy constant, i.e. sum_l |V_l|^2 = C.
    """
    family = as_family(family)
    _, constant = FAMILY_CONSTANTS[family]
    total = sum(np.abs(f.values) ** 2 for f in family_filters(n, family))
    return np.isclose(total, constant, rtol=0.0, atol=1e-12)


def band_limited(img: Image, family: Family | str) -> Image:
    """The image with all spectral content outside band_mask removed."""
    return to_real(idft2(dft2(img) * band_mask(img.n, family)))


__all__ = [
    "FAMILY_CONSTANTS",
    "QuadratureSet",
    "SpectralFilter",
    "band_limited",
    "band_mask",
    "dft2",
    "enforce_hermitian",
    "family_filters",
    "hct_component",
    "hct_filter",
    "idft2",
    "partial_hilbert",
    "quadrature_set",
    "reflect",
    "riesz_filter",
    "to_real",
]
