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
The estimator: joint coefficient magnitude, universal thresholds, the hard-threshold rule,
noise level estimation, cycle spinning and the end-to-end denoising pipeline.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from hyperdenoise.core.helpers import ordered_mean
from hyperdenoise.exceptions import InvalidArgumentError, ShapeMismatchError
from hyperdenoise.numerics.grid import Image, shift_image
from hyperdenoise.numerics.quadrature import hct_component, quadrature_set
from hyperdenoise.numerics.wavelet import (
    FilterPair,
    Pyramid,
    check_same_pyramids,
    detail_keys,
    dwt2,
    filter_bank,
    idwt2,
)
from hyperdenoise.types import DenoiseConfig, Family, Method, as_family, as_method

logger = logging.getLogger(__name__)

MAD_CONSTANT = 0.6745
MIN_COEFFICIENTS = 16

# Energy constant C of the component list each method thresholds on
METHOD_CONSTANTS = {
    Method.CLASSIC: 0,
    Method.ANALYTIC: 1,
    Method.RIESZ: 1,
    Method.HYPERCOMPLEX: 3,
}

# Weight of the 2 log log K term in the universal threshold
_LOGLOG_WEIGHTS = {
    Method.CLASSIC: 0.0,
    Method.ANALYTIC: 0.0,
    Method.RIESZ: 0.0,
    Method.HYPERCOMPLEX: 1.0,
}


@dataclass(eq=False)
class MagnitudePyramid:
    """
    Joint magnitudes aligned with a Pyramid.

    ``sums`` holds the raw sum of squared component coefficients at every index; the magnitude
    M^2 = sum / (C + 1) is derived from it so the keep rule can be evaluated on either form.

    Attributes:
        n (int): Side of the decomposed image.
        levels (int): Decomposition depth J.
        energy_constant (int): C of the component list.
        sums (dict[tuple[int, int], np.ndarray]): Sum of squares per detail block (j, u).
        scaling_sum (np.ndarray): Sum of squares over the scaling block.
    """

    n: int
    levels: int
    energy_constant: int
    sums: dict[tuple[int, int], np.ndarray]
    scaling_sum: np.ndarray

    def squared(self, j: int, u: int) -> np.ndarray:
        """M^2 over subband (j, u)."""
        return self.sums[(j, u)] / (self.energy_constant + 1)

    def keep_mask(self, j: int, u: int, sigma: float, lambda_sq: float) -> np.ndarray:
        """True where the coefficient survives: sum_l W_l^2 >= sigma^2 lambda^2. Ties are kept."""
        return self.sums[(j, u)] >= sigma**2 * lambda_sq

    def same_shape(self, pyr: Pyramid) -> bool:
        return self.n == pyr.n and self.levels == pyr.levels


@dataclass(frozen=True)
class DenoiseReport:
    """
    Result of a denoising run together with the parameters it resolved.

    Attributes:
        image (Image): The estimate.
        sigma (float): Noise level used.
        lambda_sq (float): Squared threshold used, in noise units.
        kept_fraction (float): Fraction of detail coefficients kept, averaged over spins.
        sigma_estimated (bool): True when sigma came from the data.
    """

    image: Image
    sigma: float
    lambda_sq: float
    kept_fraction: float
    sigma_estimated: bool


def method_constant(method: Method | str) -> int:
    return METHOD_CONSTANTS[as_method(method)]


def magnitude(pyramids: list[Pyramid], C: int) -> MagnitudePyramid:
    """
    Joint magnitude M^2 = (1 / (C + 1)) * sum_l W_l^2 over L + 1 component pyramids.

    Args:
        pyramids (list[Pyramid]): Component pyramids, the image's own pyramid first.
        C (int): Energy constant of the components.

    Raises:
        ShapeMismatchError: If the pyramids do not share side and depth.
    """
    if not pyramids:
        raise InvalidArgumentError("magnitude needs at least one pyramid")
    if C < 0:
        raise InvalidArgumentError(f"Energy constant must be non-negative, got: {C}")
    check_same_pyramids(*pyramids)
    first = pyramids[0]
    sums = {}
    for key in detail_keys(first.levels):
        total = np.zeros_like(first.subbands[key])
        for pyr in pyramids:
            total = total + pyr.subbands[key] ** 2
        sums[key] = total
    scaling_sum = np.zeros_like(first.scaling)
    for pyr in pyramids:
        scaling_sum = scaling_sum + pyr.scaling**2
    return MagnitudePyramid(n=first.n, levels=first.levels, energy_constant=C, sums=sums, scaling_sum=scaling_sum)


def universal_threshold(method: Method | str, K: int, loglog_weight: float | None = None) -> float:
    """
    Squared universal threshold 2 log K + 2 w log log K, in noise units.

    The default weight w is 1 for the hypercomplex method and 0 for the others.

    Args:
        method (Method | str): c, a, r or h.
        K (int): Number of coefficients, at least 16.
        loglog_weight (float): Overrides w.
    """
    method = as_method(method)
    if K < MIN_COEFFICIENTS:
        raise InvalidArgumentError(f"Universal threshold needs K >= {MIN_COEFFICIENTS}, got: {K}")
    weight = _LOGLOG_WEIGHTS[method] if loglog_weight is None else loglog_weight
    log_k = math.log(K)
    return 2 * log_k + 2 * weight * math.log(log_k)


def estimate_sigma(pyr: Pyramid) -> float:
    """Median absolute deviation estimate median(|W_{1,1}|) / 0.6745 on the finest diagonal subband."""
    return float(np.median(np.abs(pyr.subbands[(1, 1)]))) / MAD_CONSTANT


def hard_threshold(pyr_y: Pyramid, mag: MagnitudePyramid, sigma: float, lambda_sq: float, C: int) -> Pyramid:
    """
    Keeps a detail coefficient of ``pyr_y`` iff M^2 >= sigma^2 lambda^2 / (C + 1), zeroes it otherwise.
    The scaling block is never thresholded.

    Raises:
        ShapeMismatchError: If the magnitudes do not belong to a pyramid of the same shape.
        InvalidArgumentError: If sigma is not positive, lambda_sq is negative, or C disagrees with the magnitudes.
    """
    if not mag.same_shape(pyr_y):
        raise ShapeMismatchError(
            f"Magnitudes (n={mag.n}, J={mag.levels}) do not match pyramid (n={pyr_y.n}, J={pyr_y.levels})"
        )
    if not sigma > 0:
        raise InvalidArgumentError(f"sigma must be positive, got: {sigma}")
    if lambda_sq < 0:
        raise InvalidArgumentError(f"lambda_sq must be non-negative, got: {lambda_sq}")
    if C != mag.energy_constant:
        raise InvalidArgumentError(f"Energy constant {C} does not match the magnitudes' {mag.energy_constant}")
    return pyr_y.map_details(lambda key, block: np.where(mag.keep_mask(*key, sigma, lambda_sq), block, 0.0))


def kept_fraction(pyr: Pyramid, mag: MagnitudePyramid, sigma: float, lambda_sq: float, C: int) -> float:
    """Fraction of detail coefficients that survive hard_threshold."""
    if C != mag.energy_constant or not mag.same_shape(pyr):
        raise ShapeMismatchError("Magnitudes do not belong to the pyramid")
    kept = sum(int(np.count_nonzero(mag.keep_mask(j, u, sigma, lambda_sq))) for j, u in detail_keys(pyr.levels))
    return kept / pyr.detail_count


def component_images(img: Image, method: Method | str) -> list[Image]:
    """
    The images a method thresholds on: c uses the image alone, a adds the third hypercomplex component,
    r adds both Riesz components and h all three hypercomplex components.
    """
    method = as_method(method)
    if method is Method.CLASSIC:
        return [img]
    if method is Method.ANALYTIC:
        return [img, hct_component(img, 3)]
    family = Family.RIESZ if method is Method.RIESZ else Family.HYPERCOMPLEX
    return list(quadrature_set(img, family).components)


def component_pyramids(img: Image, method: Method | str, fp: FilterPair, levels: int) -> list[Pyramid]:
    return [dwt2(component, fp, levels) for component in component_images(img, method)]


def resolve_parameters(y: Image, cfg: DenoiseConfig) -> tuple[float, float, bool]:
    """
    Resolves sigma (known, or estimated on the unshifted pyramid of y) and lambda^2 (explicit, or universal
    with K = n^2).

    Returns:
        tuple[float, float, bool]: sigma, lambda_sq and whether sigma was estimated.
    """
    fp = filter_bank(cfg.wavelet)
    if cfg.known_sigma:
        sigma, estimated = float(cfg.sigma), False
    else:
        sigma, estimated = estimate_sigma(dwt2(y, fp, cfg.levels)), True
        if sigma == 0:
            raise InvalidArgumentError("Estimated noise level is zero; pass sigma explicitly")
    lambda_sq = universal_threshold(cfg.method, y.n * y.n) if cfg.universal else float(cfg.lambda_sq)
    logger.info(
        "method=%s sigma=%.6g (%s) lambda_sq=%.6g",
        cfg.method.value,
        sigma,
        "estimated" if estimated else "known",
        lambda_sq,
    )
    return sigma, lambda_sq, estimated


def spin_offsets(spins: int) -> list[tuple[int, int]]:
    """The S x S circular shifts (d1, d2), d1 and d2 in 0..S-1, in row-major order."""
    return [(d1, d2) for d1 in range(spins) for d2 in range(spins)]


def denoise_spin(
    y: Image,
    method: Method,
    fp: FilterPair,
    levels: int,
    sigma: float,
    lambda_sq: float,
    shift: tuple[int, int],
) -> tuple[np.ndarray, float]:
    """
    One cycle spin: shift, threshold on the method's joint magnitude, reconstruct and shift back.

    Returns:
        tuple[np.ndarray, float]: The reconstruction and the fraction of detail coefficients kept.
    """
    d1, d2 = shift
    shifted = shift_image(y, d1, d2)
    pyramids = component_pyramids(shifted, method, fp, levels)
    C = METHOD_CONSTANTS[method]
    mag = magnitude(pyramids, C)
    thresholded = hard_threshold(pyramids[0], mag, sigma, lambda_sq, C)
    fraction = kept_fraction(pyramids[0], mag, sigma, lambda_sq, C)
    restored = shift_image(idwt2(thresholded, fp), -d1, -d2)
    logger.debug("spin (%d, %d): kept %.4g of detail coefficients", d1, d2, fraction)
    return np.asarray(restored.data), fraction


def combine_spins(results: list[tuple[np.ndarray, float]]) -> tuple[Image, float]:
    """Averages spin reconstructions in the given order."""
    image = Image(ordered_mean(data for data, _ in results))
    fraction = sum(f for _, f in results) / len(results)
    return image, fraction


def denoise_with_report(y: Image, cfg: DenoiseConfig) -> DenoiseReport:
    """denoise, also returning the resolved sigma, lambda^2 and kept fraction."""
    fp = filter_bank(cfg.wavelet)
    sigma, lambda_sq, estimated = resolve_parameters(y, cfg)
    results = [
        denoise_spin(y, cfg.method, fp, cfg.levels, sigma, lambda_sq, shift) for shift in spin_offsets(cfg.spins)
    ]
    image, fraction = combine_spins(results)
    logger.info("kept fraction %.6g over %d spins", fraction, len(results))
    return DenoiseReport(
        image=image, sigma=sigma, lambda_sq=lambda_sq, kept_fraction=fraction, sigma_estimated=estimated
    )


def denoise(y: Image, cfg: DenoiseConfig) -> Image:
    """
    Hard-threshold wavelet denoising on the joint magnitude of the image and its quadrature components,
    averaged over S x S circular shifts.

    Args:
        y (Image): Noisy observation.
        cfg (DenoiseConfig): Method, filter bank, depth, sigma, threshold and spin count.
    """
    return denoise_with_report(y, cfg).image


def peak_magnitude(img: Image, family: Family | str, fp: FilterPair, levels: int, j: int, u: int) -> float:
    """The largest M^2 over subband (j, u) of a noise-free image, using the given quadrature family."""
    qset = quadrature_set(img, as_family(family))
    pyramids = [dwt2(component, fp, levels) for component in qset.components]
    mag = magnitude(pyramids, qset.energy_constant)
    return float(np.max(mag.squared(j, u)))


def oscillation_magnitude_target(a: float, j: int) -> float:
    """Expected magnitude 2^(2j-1) a^2 of an oscillation of amplitude a centred in a level-j band."""
    return 2.0 ** (2 * j - 1) * a**2


__all__ = [
    "MAD_CONSTANT",
    "METHOD_CONSTANTS",
    "DenoiseReport",
    "MagnitudePyramid",
    "combine_spins",
    "component_images",
    "component_pyramids",
    "denoise",
    "denoise_spin",
    "denoise_with_report",
    "estimate_sigma",
    "hard_threshold",
    "kept_fraction",
    "magnitude",
    "method_constant",
    "oscillation_magnitude_target",
    "peak_magnitude",
    "resolve_parameters",
    "spin_offsets",
    "universal_threshold",
]
