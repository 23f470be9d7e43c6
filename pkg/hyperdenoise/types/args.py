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
These are the validated argument objects passed to the numerical modules and the resources.
"""

import math
from dataclasses import dataclass, field

from hyperdenoise.exceptions import ConfigError, InvalidArgumentError
from hyperdenoise.types.enum_values import (
    Method,
    RiskMethod,
    WaveletName,
    as_method,
    as_risk_method,
    as_wavelet,
)

DEFAULT_WAVELET = WaveletName.LA8
DEFAULT_LEVELS = 3
DEFAULT_SPINS = 8
DEFAULT_PEAK = 255.0

# Sentinels for "estimate sigma from the data" and "use the universal threshold"
AUTO = "auto"
UNIVERSAL = "universal"

# Number of components (including the coefficient itself) per risk method
RISK_COMPONENTS = {
    RiskMethod.CLASSIC: 1,
    RiskMethod.ANALYTIC: 2,
    RiskMethod.RIESZ_1: 3,
    RiskMethod.RIESZ_2: 3,
    RiskMethod.HYPERCOMPLEX: 4,
}


@dataclass(frozen=True)
class NoiseSpec:
    """
    Gaussian white noise with standard deviation ``sigma`` drawn from a generator seeded by ``seed``.

    Raises:
        InvalidArgumentError: If sigma is not a positive finite number or the seed is negative.
    """

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidArgumentError(f"sigma must be positive, got: {self.sigma}")
        if self.seed < 0:
            raise InvalidArgumentError(f"seed must be non-negative, got: {self.seed}")


@dataclass(frozen=True)
class DenoiseConfig:
    """
    Configuration of the denoising pipeline.

    Args:
        method (Method): c (plain), a (analytic, one extra component), r (Riesz) or h (hypercomplex).
        wavelet (WaveletName): Filter bank name. Defaults to la8.
        levels (int): Decomposition depth J. Defaults to 3.
        sigma (float | str): Known noise level, or "auto" to estimate it from the finest diagonal subband.
        lambda_sq (float | str): Squared threshold in noise units, or "universal".
        spins (int): Cycle-spin grid size S; S x S circular shifts are averaged. Defaults to 8.
        seed (int): Seed recorded with the run. The pipeline itself draws no random numbers.
    """

    method: Method = Method.HYPERCOMPLEX
    wavelet: WaveletName = DEFAULT_WAVELET
    levels: int = DEFAULT_LEVELS
    sigma: float | str = AUTO
    lambda_sq: float | str = UNIVERSAL
    spins: int = DEFAULT_SPINS
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "method", as_method(self.method))
        object.__setattr__(self, "wavelet", as_wavelet(self.wavelet))
        if self.levels < 1:
            raise InvalidArgumentError(f"levels must be at least 1, got: {self.levels}")
        if self.spins < 1:
            raise InvalidArgumentError(f"spins must be at least 1, got: {self.spins}")
        if self.sigma != AUTO and not (isinstance(self.sigma, (int, float)) and self.sigma > 0):
            raise InvalidArgumentError(f"sigma must be 'auto' or a positive number, got: {self.sigma}")
        if self.lambda_sq != UNIVERSAL and not (isinstance(self.lambda_sq, (int, float)) and self.lambda_sq >= 0):
            raise InvalidArgumentError(f"lambda_sq must be 'universal' or a non-negative number, got: {self.lambda_sq}")

    @property
    def known_sigma(self) -> bool:
        return self.sigma != AUTO

    @property
    def universal(self) -> bool:
        return self.lambda_sq == UNIVERSAL

    def as_dict(self) -> dict:
        return {
            "method": self.method.value,
            "wavelet": self.wavelet.value,
            "levels": self.levels,
            "sigma": self.sigma,
            "lambda_sq": self.lambda_sq,
            "spins": self.spins,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A repeated denoising experiment. Every method sees the same noisy replicates.

    Args:
        image (str): Path to a PGM/HYPD file or a ``builtin:NAME?key=val`` reference.
        snrs (tuple[float, ...]): Target signal-to-noise ratios. Ignored when ``sigma`` is given.
        methods (tuple[Method, ...]): Methods to compare.
        reps (int): Replicates per SNR.
        seed (int): Base seed; per-replicate seeds are derived from it.
        wavelet (WaveletName): Filter bank name.
        levels (int): Decomposition depth J.
        spins (int): Cycle-spin grid size S.
        sigma (float | None): Explicit noise level overriding the SNR calibration.
        lambda_sq (float | str): Squared threshold or "universal".
        peak (float): Peak value used for PSNR.
    """

    image: str
    snrs: tuple[float, ...] = (2.0, 4.0, 8.0)
    methods: tuple[Method, ...] = (Method.CLASSIC, Method.RIESZ, Method.HYPERCOMPLEX)
    reps: int = 1
    seed: int = 0
    wavelet: WaveletName = DEFAULT_WAVELET
    levels: int = DEFAULT_LEVELS
    spins: int = DEFAULT_SPINS
    sigma: float | None = None
    lambda_sq: float | str = UNIVERSAL
    peak: float = DEFAULT_PEAK

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(as_method(m) for m in self.methods))
        object.__setattr__(self, "snrs", tuple(float(s) for s in self.snrs))
        object.__setattr__(self, "wavelet", as_wavelet(self.wavelet))
        if not self.methods:
            raise ConfigError("At least one method is required")
        if self.reps < 1:
            raise ConfigError(f"reps must be at least 1, got: {self.reps}")
        if self.sigma is None and not self.snrs:
            raise ConfigError("Either an SNR list or an explicit sigma is required")
        if any(s <= 0 for s in self.snrs):
            raise ConfigError(f"SNR values must be positive, got: {list(self.snrs)}")
        if self.sigma is not None and self.sigma <= 0:
            raise ConfigError(f"sigma must be positive, got: {self.sigma}")
        if self.peak <= 0:
            raise ConfigError(f"peak must be positive, got: {self.peak}")

    def denoise_config(self, method: Method, sigma: float) -> DenoiseConfig:
        """The per-method pipeline configuration; experiments always run with known sigma."""
        return DenoiseConfig(
            method=method,
            wavelet=self.wavelet,
            levels=self.levels,
            sigma=sigma,
            lambda_sq=self.lambda_sq,
            spins=self.spins,
            seed=self.seed,
        )


@dataclass(frozen=True)
class RiskSpec:
    """
    Input to the per-coefficient risk of a thresholding rule.

    Args:
        method (RiskMethod): c, a, r1, r2 or h.
        theta (tuple[float, ...]): Standardised mean of each component; the length must match the method
            (c: 1, a: 2, r1/r2: 3, h: 4).
        lam (float): Threshold in noise units.
        variance_split (float | None): Variance of the first Riesz component for r2. Defaults to the
            closed-form constant for subband class u=2.
    """

    method: RiskMethod
    theta: tuple[float, ...]
    lam: float
    variance_split: float | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "method", as_risk_method(self.method))
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        if not (self.lam >= 0):
            raise InvalidArgumentError(f"lambda must be non-negative, got: {self.lam}")
        expected = RISK_COMPONENTS[self.method]
        if len(self.theta) != expected:
            raise InvalidArgumentError(
                f"method {self.method.value} needs {expected} mean components, got: {len(self.theta)}"
            )
        if self.variance_split is not None and not (0 < self.variance_split < 1):
            raise InvalidArgumentError(f"variance_split must lie in (0, 1), got: {self.variance_split}")

    @property
    def dimension(self) -> int:
        return len(self.theta)


__all__ = [
    "AUTO",
    "DEFAULT_LEVELS",
    "DEFAULT_PEAK",
    "DEFAULT_SPINS",
    "DEFAULT_WAVELET",
    "RISK_COMPONENTS",
    "UNIVERSAL",
    "DenoiseConfig",
    "ExperimentConfig",
    "NoiseSpec",
    "RiskSpec",
]
