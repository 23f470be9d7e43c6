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
These are the enum values shared by the numerical modules, the resources and the CLI.
"""

from enum import Enum

from hyperdenoise.exceptions import InvalidMethodError, UnknownProfileError, UnknownWaveletError


class Method(Enum):
    """Thresholding method used by the denoiser."""

    CLASSIC = "c"
    ANALYTIC = "a"
    RIESZ = "r"
    HYPERCOMPLEX = "h"


class Family(Enum):
    """Family of quadrature components."""

    RIESZ = "riesz"
    HYPERCOMPLEX = "hypercomplex"


class WaveletName(Enum):
    LA8 = "la8"
    HAAR = "haar"
    D4 = "d4"


class RiskMethod(Enum):
    """
    Method label for per-coefficient risk. Riesz splits into r1 (subband classes u=1,4)
    and r2 (u=2,3) because the quadrature variances differ between them.
    """

    CLASSIC = "c"
    ANALYTIC = "a"
    RIESZ_1 = "r1"
    RIESZ_2 = "r2"
    HYPERCOMPLEX = "h"


class RiskProfile(Enum):
    """How a mean magnitude |theta| is spread over the components of a coefficient."""

    ANALYTIC_1D = "fig2a"
    EQUAL_MEANS = "fig2b"
    ZERO_QUADRATURE = "fig2c"
    TILTED = "fig2d"
    CUSTOM = "custom"


class RiskSource(Enum):
    CLOSED = "closed"
    CUBATURE = "cubature"
    MC = "mc"


class ImageFormat(Enum):
    PGM = "pgm"
    HYPD = "hypd"


_FAMILY_ALIASES = {"hct": Family.HYPERCOMPLEX, "h": Family.HYPERCOMPLEX, "r": Family.RIESZ}

_PROFILE_ALIASES = {
    "analytic-1d": RiskProfile.ANALYTIC_1D,
    "equal-means": RiskProfile.EQUAL_MEANS,
    "zero-quadrature": RiskProfile.ZERO_QUADRATURE,
    "tilted": RiskProfile.TILTED,
}


def as_method(value: Method | str) -> Method:
    if isinstance(value, Method):
        return value
    try:
        return Method(str(value).lower())
    except ValueError:
        raise InvalidMethodError(f"Unknown thresholding method {value!r}; expected one of c, a, r, h") from None


def as_family(value: Family | str) -> Family:
    if isinstance(value, Family):
        return value
    text = str(value).lower()
    if text in _FAMILY_ALIASES:
        return _FAMILY_ALIASES[text]
    try:
        return Family(text)
    except ValueError:
        raise InvalidMethodError(f"Unknown quadrature family {value!r}; expected riesz or hct") from None


def as_wavelet(value: WaveletName | str) -> WaveletName:
    if isinstance(value, WaveletName):
        return value
    try:
        return WaveletName(str(value).lower())
    except ValueError:
        raise UnknownWaveletError(f"Unknown wavelet {value!r}; expected one of la8, haar, d4") from None


def as_risk_method(value: RiskMethod | str) -> RiskMethod:
    if isinstance(value, RiskMethod):
        return value
    try:
        return RiskMethod(str(value).lower())
    except ValueError:
        raise InvalidMethodError(f"Unknown risk method {value!r}; expected one of c, a, r1, r2, h") from None


def as_profile(value: RiskProfile | str) -> RiskProfile:
    if isinstance(value, RiskProfile):
        return value
    text = str(value).lower()
    if text in _PROFILE_ALIASES:
        return _PROFILE_ALIASES[text]
    try:
        return RiskProfile(text)
    except ValueError:
        raise UnknownProfileError(f"Unknown risk profile {value!r}") from None


__all__ = [
    "Family",
    "ImageFormat",
    "Method",
    "RiskMethod",
    "RiskProfile",
    "RiskSource",
    "WaveletName",
    "as_family",
    "as_method",
    "as_profile",
    "as_risk_method",
    "as_wavelet",
]
