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
Distributions of pure-noise coefficient magnitudes and their Monte Carlo verification.

Under white noise of variance sigma^2 the DWT coefficients of an image and of its quadrature components
at a fixed index are (to O(1/N)) independent Gaussians. Their variances are 1, a, 1 - a (Riesz, with a
depending on the subband class) or 1, 1, 1, 1 (hypercomplex), in units of sigma^2, which gives the
magnitude laws below.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special, stats

from hyperdenoise.core.helpers import make_rng
from hyperdenoise.exceptions import InvalidArgumentError, NumericError
from hyperdenoise.numerics.grid import Image, check_side
from hyperdenoise.numerics.quadrature import family_filters, quadrature_set
from hyperdenoise.numerics.shrinkage import magnitude, universal_threshold
from hyperdenoise.numerics.wavelet import SCALING_CLASS, FilterPair, detail_keys, dwt2, unit_atom
from hyperdenoise.types import Family, Method, as_family

logger = logging.getLogger(__name__)

MIN_MOMENT_SIDE = 64
MIN_POOLED_SAMPLES = 1000
QUAD_TOLERANCE = 1e-10

MOMENT_COLUMNS = ("family", "u", "statistic", "value", "stderr")

_FAMILY_METHODS = {Family.RIESZ: Method.RIESZ, Family.HYPERCOMPLEX: Method.HYPERCOMPLEX}


@dataclass(frozen=True)
class RieszVarianceTable:
    """
    Variance fraction a^(r,u) of the first Riesz component of white noise per subband class u;
    the second component carries 1 - a^(r,u).
    """

    a1: float
    a2: float
    a3: float
    a4: float

    def for_class(self, u: int) -> float:
        if u not in (1, 2, 3, 4):
            raise InvalidArgumentError(f"Subband class must be 1..4, got: {u}")
        return (self.a1, self.a2, self.a3, self.a4)[u - 1]


def riesz_variance_constants() -> RieszVarianceTable:
    """a^(r,1) = a^(r,4) = 1/2, a^(r,2) = 1/2 + 2 atan(1/2) - atan(2)/2 (about 0.8737), a^(r,3) = 1 - a^(r,2)."""
    a2 = 0.5 + 2 * math.atan(0.5) - 0.5 * math.atan(2.0)
    return RieszVarianceTable(a1=0.5, a2=a2, a3=1.0 - a2, a4=0.5)


def _check_non_negative(name: str, value):
    if np.any(np.asarray(value) < 0):
        raise InvalidArgumentError(f"{name} must be non-negative, got: {value}")


def t1_pdf(t):
    """
    Density of T1 = Z1^2 + Z2^2/2 + Z3^2/2, the normalised Riesz magnitude for subband classes 1 and 4:
    f(t) = (2 / sqrt(pi)) exp(-t/2) D(sqrt(t/2)) with D the Dawson function.

    Accepts scalars or arrays.
    """
    _check_non_negative("t", t)
    t = np.asarray(t, dtype=np.float64)
    result = 2 / math.sqrt(math.pi) * np.exp(-t / 2) * special.dawsn(np.sqrt(t / 2))
    return float(result) if result.ndim == 0 else result


def t1_cdf(t):
    """P(T1 <= t) = P(chi2_1 <= t) - f(t), the closed form of the integrated density."""
    _check_non_negative("t", t)
    result = stats.chi2.cdf(t, 1) - t1_pdf(t)
    return float(result) if np.ndim(result) == 0 else result


def t1_tail(t):
    """P(T1 > t) = P(chi2_1 > t) + f(t); accurate far into the tail, unlike 1 - t1_cdf."""
    _check_non_negative("t", t)
    result = stats.chi2.sf(t, 1) + t1_pdf(t)
    return float(result) if np.ndim(result) == 0 else result


def t1_cdf_quadrature(t: float) -> float:
    """t1_cdf by adaptive quadrature of the density, used to cross-check the closed form."""
    _check_non_negative("t", t)
    if t == 0:
        return 0.0
    value, _ = integrate.quad(t1_pdf, 0.0, t, epsabs=QUAD_TOLERANCE, epsrel=QUAD_TOLERANCE, limit=200)
    return value


def t1_tail_asymptote(lam: float) -> float:
    """Leading term sqrt(8/pi) exp(-lam^2/2) / lam of P(T1 > lam^2)."""
    if not lam > 0:
        raise InvalidArgumentError(f"lambda must be positive, got: {lam}")
    return math.sqrt(8 / math.pi) * math.exp(-(lam**2) / 2) / lam


def chi4_tail(x):
    """P(chi2_4 > x) = exp(-x/2) (1 + x/2), the hypercomplex null magnitude law."""
    _check_non_negative("x", x)
    x = np.asarray(x, dtype=np.float64)
    result = np.exp(-x / 2) * (1 + x / 2)
    return float(result) if result.ndim == 0 else result


def mixture_tail(x: float, a: float) -> float:
    """
    P(Z1^2 + a Z2^2 + (1 - a) Z3^2 > x).

    Writing (Z2, Z3) in polar form, the weighted pair is exponential given the angle phi, with mean 2 c(phi),
    c(phi) = a cos^2(phi) + (1 - a) sin^2(phi). Integrating out Z1 in closed form leaves
    P(chi2_1 > x) + exp(-x/2) sqrt(2/pi) E_phi[D(sqrt(k x)) / sqrt(k)], k = 1/(2c) - 1/2,
    with phi uniform on [0, pi/2].
    """
    _check_non_negative("x", x)
    if not 0 < a < 1:
        raise InvalidArgumentError(f"Variance split must lie in (0, 1), got: {a}")
    if x == 0:
        return 1.0

    def integrand(phi: float) -> float:
        c = a * math.cos(phi) ** 2 + (1 - a) * math.sin(phi) ** 2
        kappa = 1 / (2 * c) - 0.5
        if kappa <= 0:
            return math.sqrt(x)
        root = math.sqrt(kappa)
        return special.dawsn(root * math.sqrt(x)) / root

    average, error = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=QUAD_TOLERANCE, limit=200)
    average *= 2 / math.pi
    logger.debug("mixture_tail x=%g a=%g quad error %.2g", x, a, error)
    return float(stats.chi2.sf(x, 1) + math.exp(-x / 2) * math.sqrt(2 / math.pi) * average)


def riesz_mixture_tail(x: float, u: int) -> float:
    """Tail of the Riesz magnitude law for subband classes u=2 and u=3 (split a^(r,u), 1 - a^(r,u))."""
    if u not in (2, 3):
        raise InvalidArgumentError(f"riesz_mixture_tail is defined for subband classes 2 and 3, got: {u}")
    return mixture_tail(x, riesz_variance_constants().for_class(u))


def subband_variance_fraction(
    family: Family | str, l: int, fp: FilterPair, j: int, u: int, n: int, levels: int | None = None
) -> float:
    """
    Filter-exact variance of the DWT coefficient of quadrature component l of unit white noise at subband (j, u):
    sum |V_l|^2 |Psi|^2 / sum |Psi|^2 with Psi the DFT of the synthesis atom. l = 0 gives 1.
    """
    family = as_family(family)
    check_side(n)
    levels = j if levels is None else levels
    atom = unit_atom(n, levels, fp, j, u)
    if l == 0:
        return 1.0
    filters = family_filters(n, family)
    if not 1 <= l <= len(filters):
        raise InvalidArgumentError(f"Component {l} does not exist for family {family.value}")
    spectrum = np.abs(np.fft.fft2(atom.data)) ** 2
    return float(np.sum(np.abs(filters[l - 1].values) ** 2 * spectrum) / np.sum(spectrum))


@dataclass
class MomentSums:
    """Running sums of coefficient vectors per subband, combinable across replicates."""

    count: dict[tuple[int, int], int] = field(default_factory=dict)
    total: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)
    outer: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)

    def add(self, key: tuple[int, int], samples: np.ndarray):
        """samples: (L + 1) x m matrix of m pooled coefficient vectors."""
        if key not in self.count:
            dim = samples.shape[0]
            self.count[key] = 0
            self.total[key] = np.zeros(dim)
            self.outer[key] = np.zeros((dim, dim))
        self.count[key] += samples.shape[1]
        self.total[key] = self.total[key] + samples.sum(axis=1)
        self.outer[key] = self.outer[key] + samples @ samples.T

    def merge(self, other: "MomentSums") -> "MomentSums":
        merged = MomentSums(dict(self.count), dict(self.total), dict(self.outer))
        for key in other.count:
            if key not in merged.count:
                merged.count[key] = other.count[key]
                merged.total[key] = other.total[key].copy()
                merged.outer[key] = other.outer[key].copy()
            else:
                merged.count[key] += other.count[key]
                merged.total[key] = merged.total[key] + other.total[key]
                merged.outer[key] = merged.outer[key] + other.outer[key]
        return merged


@dataclass(frozen=True)
class MomentReport:
    """
    Empirical means and covariances of the noise coefficient vector [W_0, ..., W_L], pooled over all
    positions of each subband and over replicates, in units of sigma.

    Attributes:
        family (Family): Quadrature family.
        n (int): Image side.
        reps (int): Number of replicates.
        sigma (float): Noise level of the draws.
        means (dict[tuple[int, int], np.ndarray]): Mean vector per (j, u); u=4 is the scaling block at j=J.
        covariances (dict[tuple[int, int], np.ndarray]): Covariance matrix per (j, u).
        counts (dict[tuple[int, int], int]): Pooled sample count per (j, u).
    """

    family: Family
    n: int
    reps: int
    sigma: float
    means: dict[tuple[int, int], np.ndarray]
    covariances: dict[tuple[int, int], np.ndarray]
    counts: dict[tuple[int, int], int]

    def variance(self, j: int, u: int, l: int) -> float:
        return float(self.covariances[(j, u)][l, l])

    def correlation(self, j: int, u: int, l: int, m: int) -> float:
        cov = self.covariances[(j, u)]
        return float(cov[l, m] / math.sqrt(cov[l, l] * cov[m, m]))

    def rows(self) -> list[tuple]:
        """
        CSV rows (family, u, statistic, value, stderr). Statistics are mean{l}_j{j}, var{l}_j{j} and corr0{l}_j{j};
        standard errors assume Gaussian coefficients.
        """
        rows = []
        for j, u in sorted(self.means):
            count = self.counts[(j, u)]
            mean = self.means[(j, u)]
            cov = self.covariances[(j, u)]
            for l in range(len(mean)):
                rows.append((self.family, u, f"mean{l}_j{j}", mean[l], math.sqrt(cov[l, l] / count)))
            for l in range(len(mean)):
                rows.append((self.family, u, f"var{l}_j{j}", cov[l, l], cov[l, l] * math.sqrt(2 / (count - 1))))
            for l in range(1, len(mean)):
                rho = self.correlation(j, u, 0, l)
                rows.append((self.family, u, f"corr0{l}_j{j}", rho, (1 - rho**2) / math.sqrt(count - 1)))
        return rows


def white_noise(n: int, sigma: float, seed: int, *keys: int) -> Image:
    return Image(sigma * make_rng(seed, *keys).standard_normal((n, n)))


def noise_coefficient_sums(
    family: Family | str, n: int, sigma: float, fp: FilterPair, levels: int, seed: int, rep: int
) -> MomentSums:
    """Moment sums of one replicate, normalised by sigma. Replicate ``rep`` draws from seed (seed, rep)."""
    qset = quadrature_set(white_noise(n, sigma, seed, rep), family)
    pyramids = [dwt2(component, fp, levels) for component in qset.components]
    sums = MomentSums()
    for key in detail_keys(levels):
        sums.add(key, np.stack([pyr.subbands[key].ravel() for pyr in pyramids]) / sigma)
    sums.add((levels, SCALING_CLASS), np.stack([pyr.scaling.ravel() for pyr in pyramids]) / sigma)
    return sums


def check_moment_request(n: int, reps: int, levels: int):
    if n < MIN_MOMENT_SIDE:
        raise InvalidArgumentError(f"Noise moments need n >= {MIN_MOMENT_SIDE}, got: {n}")
    check_side(n)
    smallest = (n >> levels) ** 2
    if reps * smallest < MIN_POOLED_SAMPLES:
        raise InvalidArgumentError(
            f"reps * N_J^2 = {reps * smallest} pooled samples per subband; at least {MIN_POOLED_SAMPLES} are needed"
        )


def moment_report(family: Family | str, n: int, reps: int, sigma: float, sums: MomentSums) -> MomentReport:
    """Turns combined moment sums into means and unbiased covariances."""
    means, covariances = {}, {}
    for key, count in sums.count.items():
        if count < 2:
            raise NumericError(f"Subband {key} has {count} samples; covariances need at least 2")
        mean = sums.total[key] / count
        cov = (sums.outer[key] - count * np.outer(mean, mean)) / (count - 1)
        means[key] = mean
        covariances[key] = 0.5 * (cov + cov.T)
    return MomentReport(
        family=as_family(family),
        n=n,
        reps=reps,
        sigma=sigma,
        means=means,
        covariances=covariances,
        counts=dict(sums.count),
    )


def empirical_noise_moments(
    family: Family | str, n: int, reps: int, seed: int, fp: FilterPair, levels: int = 3, sigma: float = 1.0
) -> MomentReport:
    """
    Draws ``reps`` white-noise images, computes quadrature sets and DWTs, and reports the pooled means and
    covariances of the coefficient vectors per subband.

    Raises:
        InvalidArgumentError: If n < 64 or fewer than 1000 samples would be pooled in the coarsest subband.
    """
    family = as_family(family)
    check_moment_request(n, reps, levels)
    combined = MomentSums()
    for rep in range(reps):
        combined = combined.merge(noise_coefficient_sums(family, n, sigma, fp, levels, seed, rep))
    return moment_report(family, n, reps, sigma, combined)


def normalized_magnitudes(
    family: Family | str,
    n: int,
    sigma: float,
    fp: FilterPair,
    levels: int,
    seed: int,
    rep: int,
    j: int,
    u: int,
    stride: int = 1,
) -> np.ndarray:
    """(C + 1) M^2 / sigma^2 over subband (j, u) of one white-noise replicate, subsampled by ``stride``."""
    family = as_family(family)
    qset = quadrature_set(white_noise(n, sigma, seed, rep), family)
    mag = magnitude([dwt2(component, fp, levels) for component in qset.components], qset.energy_constant)
    return (mag.sums[(j, u)][::stride, ::stride] / sigma**2).ravel()


@dataclass(frozen=True)
class ExceedanceReport:
    """
    Attributes:
        probability (float): Fraction of replicates in which at least one detail coefficient survives.
        mean_count (float): Mean number of surviving detail coefficients per replicate.
        lambda_sq (float): Squared threshold used.
        reps (int): Number of replicates.
    """

    probability: float
    mean_count: float
    lambda_sq: float
    reps: int


def exceedance_count(
    family: Family | str, n: int, fp: FilterPair, levels: int, lambda_sq: float, seed: int, rep: int
) -> int:
    """Number of detail coefficients of one unit white-noise replicate whose joint magnitude reaches lambda^2."""
    family = as_family(family)
    qset = quadrature_set(white_noise(n, 1.0, seed, rep), family)
    mag = magnitude([dwt2(component, fp, levels) for component in qset.components], qset.energy_constant)
    return sum(int(np.count_nonzero(mag.keep_mask(j, u, 1.0, lambda_sq))) for j, u in detail_keys(levels))


def exceedance_lambda_sq(family: Family | str, K: int, lambda_sq: float | None = None) -> float:
    if lambda_sq is not None:
        _check_non_negative("lambda_sq", lambda_sq)
        return float(lambda_sq)
    return universal_threshold(_FAMILY_METHODS[as_family(family)], K)


def side_for_count(K: int) -> int:
    """The dyadic side n with n^2 = K."""
    n = math.isqrt(K)
    if n * n != K:
        raise InvalidArgumentError(f"K must be the square of a dyadic side, got: {K}")
    check_side(n)
    return n


def exceedance_report(counts: list[int], lambda_sq: float) -> ExceedanceReport:
    reps = len(counts)
    return ExceedanceReport(
        probability=sum(1 for c in counts if c > 0) / reps,
        mean_count=sum(counts) / reps,
        lambda_sq=lambda_sq,
        reps=reps,
    )


def max_exceedance(
    family: Family | str,
    K: int,
    reps: int,
    seed: int,
    fp: FilterPair,
    levels: int = 3,
    lambda_sq: float | None = None,
) -> ExceedanceReport:
    """
    Fraction of pure-noise replicates in which any detail coefficient survives the threshold. The threshold
    defaults to the family's universal threshold for K coefficients; the scaling block is not counted.
    """
    if reps < 1:
        raise InvalidArgumentError(f"reps must be at least 1, got: {reps}")
    n = side_for_count(K)
    lambda_sq = exceedance_lambda_sq(family, K, lambda_sq)
    counts = [exceedance_count(family, n, fp, levels, lambda_sq, seed, rep) for rep in range(reps)]
    return exceedance_report(counts, lambda_sq)


__all__ = [
    "MIN_MOMENT_SIDE",
    "MIN_POOLED_SAMPLES",
    "MOMENT_COLUMNS",
    "ExceedanceReport",
    "MomentReport",
    "MomentSums",
    "RieszVarianceTable",
    "check_moment_request",
    "chi4_tail",
    "empirical_noise_moments",
    "exceedance_count",
    "exceedance_lambda_sq",
    "exceedance_report",
    "max_exceedance",
    "mixture_tail",
    "moment_report",
    "noise_coefficient_sums",
    "normalized_magnitudes",
    "riesz_mixture_tail",
    "riesz_variance_constants",
    "side_for_count",
    "subband_variance_fraction",
    "t1_cdf",
    "t1_cdf_quadrature",
    "t1_pdf",
    "t1_tail",
    "t1_tail_asymptote",
    "white_noise",
]
