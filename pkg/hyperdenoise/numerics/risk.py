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
Standardised risk of a single thresholded coefficient.

The coefficient's own component and its quadrature components are observed as W_l = theta_l + sigma_l Z_l.
The rule keeps W_1 when sum_l W_l^2 >= lambda^2 and zeroes it otherwise; the risk is E[(W_1 kept - theta_1)^2],
everything in noise units. Writing w_l = W_l - theta_l, the risk is

    1 + integral over {sum_l (w_l + theta_l)^2 < lambda^2} of (theta_1^2 - w_1^2) prod_l phi_{sigma_l}(w_l) dw.

The integral is evaluated as an adaptive quadrature over w_1 of the probability that the remaining components
stay inside the ball of the leftover radius. That probability is a (non-central) chi-square CDF when the remaining
variances are equal and one more quadrature level otherwise (Riesz subband classes u=2, 3).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special, stats

from hyperdenoise.core.helpers import make_rng
from hyperdenoise.exceptions import CubatureError, InvalidArgumentError, InvalidMethodError, UnknownProfileError
from hyperdenoise.numerics.noise_stats import chi4_tail, riesz_mixture_tail, riesz_variance_constants, t1_tail
from hyperdenoise.numerics.shrinkage import universal_threshold
from hyperdenoise.types import (
    RISK_COMPONENTS,
    Method,
    RiskMethod,
    RiskProfile,
    RiskSource,
    RiskSpec,
    as_profile,
    as_risk_method,
)

logger = logging.getLogger(__name__)

TARGET_ERROR = 1e-4
MIN_MC_SAMPLES = 10_000
MC_BLOCK = 100_000
RISK_COLUMNS = ("method", "profile", "theta_abs", "lambda", "risk", "source", "err")

# Beyond this many noise units the Gaussian weight is below double precision
_GAUSS_SPAN = 12.0
_QUAD_OPTIONS = {"epsabs": 1e-11, "epsrel": 1e-10, "limit": 200}

_THRESHOLD_METHODS = {
    RiskMethod.CLASSIC: Method.CLASSIC,
    RiskMethod.ANALYTIC: Method.ANALYTIC,
    RiskMethod.RIESZ_1: Method.RIESZ,
    RiskMethod.RIESZ_2: Method.RIESZ,
    RiskMethod.HYPERCOMPLEX: Method.HYPERCOMPLEX,
}

_COS_TILT = math.cos(3 * math.pi / 8)
_SIN_TILT = math.sin(3 * math.pi / 8)


@dataclass(frozen=True)
class RiskPoint:
    """One row of a risk curve."""

    method: RiskMethod
    profile: RiskProfile
    theta_abs: float
    lam: float
    risk: float
    source: RiskSource
    err: float

    def row(self) -> tuple:
        return (self.method, self.profile, self.theta_abs, self.lam, self.risk, self.source, self.err)


@dataclass(frozen=True)
class MonteCarloSums:
    """Running sums of squared errors over a block of Monte Carlo draws."""

    count: int
    total: float
    total_sq: float

    def merge(self, other: "MonteCarloSums") -> "MonteCarloSums":
        return MonteCarloSums(self.count + other.count, self.total + other.total, self.total_sq + other.total_sq)

    def estimate(self) -> tuple[float, float]:
        """Mean and standard error of the mean."""
        mean = self.total / self.count
        if self.count < 2:
            return mean, 0.0
        variance = max(self.total_sq - self.count * mean**2, 0.0) / (self.count - 1)
        return mean, math.sqrt(variance / self.count)


def component_sigmas(spec: RiskSpec) -> tuple[float, ...]:
    """Noise standard deviations of the components, the coefficient itself first."""
    method = spec.method
    if method is RiskMethod.RIESZ_1:
        return (1.0, math.sqrt(0.5), math.sqrt(0.5))
    if method is RiskMethod.RIESZ_2:
        a = riesz_variance_constants().a2 if spec.variance_split is None else spec.variance_split
        return (1.0, math.sqrt(a), math.sqrt(1 - a))
    return (1.0,) * RISK_COMPONENTS[method]


def _clip_gaussian(lo: float, hi: float) -> tuple[float, float]:
    return max(lo, -_GAUSS_SPAN), min(hi, _GAUSS_SPAN)


def _equal_variance_probability(theta: tuple[float, ...], sigma: float, r_sq: float) -> float:
    """P(sum_l (theta_l + sigma Z_l)^2 < r^2)."""
    scaled = r_sq / sigma**2
    nc = sum(t * t for t in theta) / sigma**2
    if nc == 0:
        return float(stats.chi2.cdf(scaled, len(theta)))
    return float(stats.ncx2.cdf(scaled, len(theta), nc))


def _split_variance_probability(theta: tuple[float, float], sigmas: tuple[float, float], r_sq: float) -> float:
    """P((theta_2 + s_2 Z_2)^2 + (theta_3 + s_3 Z_3)^2 < r^2), integrating over Z_2."""
    (t2, t3), (s2, s3) = theta, sigmas
    r = math.sqrt(r_sq)
    lo, hi = _clip_gaussian((-r - t2) / s2, (r - t2) / s2)
    if lo >= hi:
        return 0.0

    def integrand(z: float) -> float:
        left = r_sq - (t2 + s2 * z) ** 2
        if left <= 0:
            return 0.0
        half = math.sqrt(left) / s3
        inside = special.ndtr(half - t3 / s3) - special.ndtr(-half - t3 / s3)
        return math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi) * inside

    value, _ = integrate.quad(integrand, lo, hi, **_QUAD_OPTIONS)
    return value


def _rest_probability(spec: RiskSpec, sigmas: tuple[float, ...], r_sq: float) -> float:
    """Probability that components 2..L+1 fall inside the ball of radius^2 r_sq."""
    if r_sq <= 0:
        return 0.0
    rest_theta, rest_sigmas = spec.theta[1:], sigmas[1:]
    if not rest_theta:
        return 1.0
    if len(set(rest_sigmas)) == 1:
        return _equal_variance_probability(rest_theta, rest_sigmas[0], r_sq)
    return _split_variance_probability(rest_theta, rest_sigmas, r_sq)


def risk_with_error(spec: RiskSpec) -> tuple[float, float]:
    """
    The risk of ``spec`` and the quadrature's absolute error estimate.

    Raises:
        CubatureError: If the error estimate exceeds 1e-4.
    """
    if spec.lam == 0:
        return 1.0, 0.0
    sigmas = component_sigmas(spec)
    theta1 = spec.theta[0]
    lam_sq = spec.lam**2
    lo, hi = _clip_gaussian(-spec.lam - theta1, spec.lam - theta1)
    if lo >= hi:
        return 1.0, 0.0

    def integrand(w: float) -> float:
        weight = (theta1**2 - w * w) * math.exp(-0.5 * w * w) / math.sqrt(2 * math.pi)
        return weight * _rest_probability(spec, sigmas, lam_sq - (w + theta1) ** 2)

    points = [0.0] if lo < 0 < hi else None
    value, error = integrate.quad(integrand, lo, hi, points=points, **_QUAD_OPTIONS)
    if spec.method is RiskMethod.RIESZ_2:
        # inner quadratures run to the same tolerance over a weight bounded by theta1^2 + 1
        error += _QUAD_OPTIONS["epsabs"] * (theta1**2 + 1)
    logger.debug("risk %s theta=%s lambda=%g: %.10g (err %.2g)", spec.method.value, spec.theta, spec.lam, value, error)
    if error > TARGET_ERROR:
        raise CubatureError(
            f"Risk integral reached error {error:.3g}, above the {TARGET_ERROR:g} target",
            details={"theta": spec.theta, "lambda": spec.lam},
            achieved_error=error,
        )
    return 1.0 + value, error


def risk(spec: RiskSpec) -> float:
    """
    Standardised risk of one thresholded coefficient, by adaptive quadrature to absolute error 1e-4.

    Args:
        spec (RiskSpec): Method, component means and threshold.

    Raises:
        CubatureError: If the integral does not reach the error target.
    """
    value, _ = risk_with_error(spec)
    return value


def _check_lambda(lam: float):
    if not lam >= 0:
        raise InvalidArgumentError(f"lambda must be non-negative, got: {lam}")


def risk_zero(method: RiskMethod | str, lam: float) -> float:
    """
    Closed-form risk when the coefficient carries no signal.

    * c: 1 - P(3/2, lam^2/2), P the regularised lower incomplete gamma function
    * r1: the c value plus sqrt(2/pi) exp(-lam^2/2) (lam - sqrt(2) D(lam/sqrt(2))), D the Dawson function
    * a: exp(-lam^2/2) (1 + lam^2/2)
    * h: exp(-lam^2/2) (1 + lam^2/2 + lam^4/8)

    Raises:
        InvalidMethodError: For r2, which has no closed form; use risk() instead.
    """
    method = as_risk_method(method)
    _check_lambda(lam)
    half = lam**2 / 2
    if method is RiskMethod.CLASSIC:
        return float(special.gammaincc(1.5, half))
    if method is RiskMethod.RIESZ_1:
        extra = math.sqrt(2 / math.pi) * math.exp(-half) * (lam - math.sqrt(2) * special.dawsn(lam / math.sqrt(2)))
        return float(special.gammaincc(1.5, half)) + extra
    if method is RiskMethod.ANALYTIC:
        return math.exp(-half) * (1 + half)
    if method is RiskMethod.HYPERCOMPLEX:
        return math.exp(-half) * (1 + half + half**2 / 2)
    raise InvalidMethodError("risk_zero has no closed form for r2; evaluate risk() with theta = 0 instead")


def keep_probability_zero(method: RiskMethod | str, lam: float) -> float:
    """Probability that a signal-free coefficient survives the threshold lam."""
    method = as_risk_method(method)
    _check_lambda(lam)
    lam_sq = lam**2
    if method is RiskMethod.CLASSIC:
        return float(special.gammaincc(0.5, lam_sq / 2))
    if method is RiskMethod.ANALYTIC:
        return math.exp(-lam_sq / 2)
    if method is RiskMethod.RIESZ_1:
        return float(t1_tail(lam_sq))
    if method is RiskMethod.RIESZ_2:
        return riesz_mixture_tail(lam_sq, 2)
    return float(chi4_tail(lam_sq))


def risk_zero_asymptote(method: RiskMethod | str, lam: float) -> float:
    """Leading large-lambda term of risk_zero."""
    method = as_risk_method(method)
    if not lam > 0:
        raise InvalidArgumentError(f"lambda must be positive, got: {lam}")
    decay = math.exp(-(lam**2) / 2)
    if method is RiskMethod.CLASSIC:
        return math.sqrt(2 / math.pi) * lam * decay
    if method is RiskMethod.RIESZ_1:
        return 2 * math.sqrt(2 / math.pi) * lam * decay
    if method is RiskMethod.ANALYTIC:
        return lam**2 / 2 * decay
    if method is RiskMethod.HYPERCOMPLEX:
        return lam**4 / 8 * decay
    raise InvalidMethodError("risk_zero_asymptote is not available for r2")


def risk_mc_block(spec: RiskSpec, size: int, seed: int, *keys: int) -> MonteCarloSums:
    """Squared-error sums over ``size`` draws from the stream derived from (seed, *keys)."""
    rng = make_rng(seed, *keys)
    theta = np.asarray(spec.theta)
    sigmas = np.asarray(component_sigmas(spec))
    draws = theta + sigmas * rng.standard_normal((size, len(theta)))
    keep = np.sum(draws**2, axis=1) >= spec.lam**2
    errors = (np.where(keep, draws[:, 0], 0.0) - theta[0]) ** 2
    return MonteCarloSums(count=size, total=float(np.sum(errors)), total_sq=float(np.sum(errors**2)))


def mc_blocks(nsamples: int) -> list[int]:
    """Block sizes covering nsamples draws."""
    if nsamples < MIN_MC_SAMPLES:
        raise InvalidArgumentError(f"Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got: {nsamples}")
    full, rest = divmod(nsamples, MC_BLOCK)
    return [MC_BLOCK] * full + ([rest] if rest else [])


def combine_mc(blocks: list[MonteCarloSums]) -> tuple[float, float]:
    total = blocks[0]
    for block in blocks[1:]:
        total = total.merge(block)
    return total.estimate()


def risk_mc(spec: RiskSpec, nsamples: int, seed: int, stream: int = 0) -> tuple[float, float]:
    """
    Monte Carlo estimate of the risk with its standard error. Ties sum W^2 = lambda^2 are kept, as in the
    denoiser.

    Args:
        spec (RiskSpec): Method, component means and threshold.
        nsamples (int): Number of draws, at least 10^4.
        seed (int): Base seed.
        stream (int): Extra key that separates independent estimates under one seed.
    """
    sizes = mc_blocks(nsamples)
    return combine_mc([risk_mc_block(spec, size, seed, stream, index) for index, size in enumerate(sizes)])


def universal_lambda(method: RiskMethod | str, K: int) -> float:
    """The universal threshold (in noise units) the denoiser would use for K coefficients."""
    return math.sqrt(universal_threshold(_THRESHOLD_METHODS[as_risk_method(method)], K))


def parse_lambda(text: str, method: RiskMethod | str) -> float:
    """
    Reads ``universal:K`` or a plain non-negative number.

    Raises:
        InvalidArgumentError: If the text is neither.
    """
    text = text.strip()
    if text.startswith("universal:"):
        try:
            K = int(text.removeprefix("universal:"))
        except ValueError:
            raise InvalidArgumentError(f"Coefficient count in {text!r} is not an integer") from None
        return universal_lambda(method, K)
    try:
        lam = float(text)
    except ValueError:
        raise InvalidArgumentError(f"lambda must be universal:K or a number, got: {text!r}") from None
    _check_lambda(lam)
    return lam


def theta_for_profile(
    method: RiskMethod | str,
    profile: RiskProfile | str,
    theta_abs: float,
    direction: tuple[float, ...] | None = None,
) -> tuple[float, ...]:
    """
    Spreads a mean magnitude |theta| over the method's components.

    * fig2a (c and a only): theta_1 = |theta| cos(pi/4), the analytic second mean |theta| sin(pi/4)
    * fig2b: theta_1 = |theta|/sqrt(2); Riesz quadrature means |theta|/2 each, all hypercomplex and analytic
      means |theta|/sqrt(2)
    * fig2c: theta_1 = |theta|/sqrt(2), quadrature means 0 except hypercomplex theta_2 = theta_1
    * fig2d: theta_1 = |theta| cos(3pi/8); Riesz quadrature means |theta| sin(3pi/8)/sqrt(2), hypercomplex
      (theta_1, theta_1, |theta| sin(3pi/8), |theta| sin(3pi/8)), analytic second mean |theta| sin(3pi/8)
    * custom: |theta| times ``direction``

    Raises:
        UnknownProfileError: If the profile is unknown, fig2a is asked for another method, or a custom
            direction is missing or has the wrong length.
    """
    method = as_risk_method(method)
    profile = as_profile(profile)
    t = float(theta_abs)
    if t < 0:
        raise InvalidArgumentError(f"|theta| must be non-negative, got: {t}")
    half = t / math.sqrt(2)

    if profile is RiskProfile.CUSTOM:
        if direction is None or len(direction) != RISK_COMPONENTS[method]:
            raise UnknownProfileError(
                f"The custom profile needs a direction of length {RISK_COMPONENTS[method]} for method {method.value}"
            )
        return tuple(t * float(d) for d in direction)

    if profile is RiskProfile.ANALYTIC_1D:
        if method is RiskMethod.CLASSIC:
            return (half,)
        if method is RiskMethod.ANALYTIC:
            return (half, half)
        raise UnknownProfileError(f"Profile fig2a is defined for methods c and a only, got: {method.value}")

    if profile is RiskProfile.EQUAL_MEANS:
        quadrature = {
            RiskMethod.CLASSIC: (),
            RiskMethod.ANALYTIC: (half,),
            RiskMethod.RIESZ_1: (t / 2, t / 2),
            RiskMethod.RIESZ_2: (t / 2, t / 2),
            RiskMethod.HYPERCOMPLEX: (half, half, half),
        }
        return (half, *quadrature[method])

    if profile is RiskProfile.ZERO_QUADRATURE:
        quadrature = {
            RiskMethod.CLASSIC: (),
            RiskMethod.ANALYTIC: (0.0,),
            RiskMethod.RIESZ_1: (0.0, 0.0),
            RiskMethod.RIESZ_2: (0.0, 0.0),
            RiskMethod.HYPERCOMPLEX: (half, 0.0, 0.0),
        }
        return (half, *quadrature[method])

    first, tilt = t * _COS_TILT, t * _SIN_TILT
    quadrature = {
        RiskMethod.CLASSIC: (),
        RiskMethod.ANALYTIC: (tilt,),
        RiskMethod.RIESZ_1: (tilt / math.sqrt(2), tilt / math.sqrt(2)),
        RiskMethod.RIESZ_2: (tilt / math.sqrt(2), tilt / math.sqrt(2)),
        RiskMethod.HYPERCOMPLEX: (first, tilt, tilt),
    }
    return (first, *quadrature[method])


def risk_point(
    method: RiskMethod | str,
    profile: RiskProfile | str,
    theta_abs: float,
    lam: float,
    direction: tuple[float, ...] | None = None,
    variance_split: float | None = None,
) -> RiskPoint:
    """
    Risk at one |theta|. Signal-free points with a closed form are reported as such; everything else
    goes through quadrature.
    """
    method, profile = as_risk_method(method), as_profile(profile)
    theta = theta_for_profile(method, profile, theta_abs, direction)
    if not any(theta) and method is not RiskMethod.RIESZ_2:
        value, error, source = risk_zero(method, lam), 0.0, RiskSource.CLOSED
    else:
        spec = RiskSpec(method=method, theta=theta, lam=lam, variance_split=variance_split)
        value, error = risk_with_error(spec)
        source = RiskSource.CUBATURE
    return RiskPoint(method, profile, float(theta_abs), float(lam), value, source, error)


def risk_mc_point(
    method: RiskMethod | str,
    profile: RiskProfile | str,
    theta_abs: float,
    lam: float,
    nsamples: int,
    seed: int,
    stream: int = 0,
    direction: tuple[float, ...] | None = None,
    variance_split: float | None = None,
) -> RiskPoint:
    """Monte Carlo counterpart of risk_point; ``err`` holds the standard error."""
    method, profile = as_risk_method(method), as_profile(profile)
    theta = theta_for_profile(method, profile, theta_abs, direction)
    spec = RiskSpec(method=method, theta=theta, lam=lam, variance_split=variance_split)
    estimate, stderr = risk_mc(spec, nsamples, seed, stream)
    return RiskPoint(method, profile, float(theta_abs), float(lam), estimate, RiskSource.MC, stderr)


def risk_curve(
    method: RiskMethod | str,
    profile: RiskProfile | str,
    lam: float,
    grid: list[float],
    direction: tuple[float, ...] | None = None,
    variance_split: float | None = None,
    mc: int = 0,
    seed: int = 0,
) -> list[RiskPoint]:
    """
    Evaluates the risk over a grid of |theta| values. With ``mc`` > 0 every grid point also gets a Monte Carlo
    row from stream i of ``seed``, i being the point's position in the grid.
    """
    if not grid:
        raise InvalidArgumentError("The |theta| grid is empty")
    points = []
    for index, theta_abs in enumerate(grid):
        points.append(risk_point(method, profile, theta_abs, lam, direction, variance_split))
        if mc:
            points.append(
                risk_mc_point(method, profile, theta_abs, lam, mc, seed, index, direction, variance_split)
            )
    return points


def risk_rows(points: list[RiskPoint]) -> list[tuple]:
    return [point.row() for point in points]


__all__ = [
    "MC_BLOCK",
    "MIN_MC_SAMPLES",
    "RISK_COLUMNS",
    "TARGET_ERROR",
    "MonteCarloSums",
    "RiskPoint",
    "combine_mc",
    "component_sigmas",
    "keep_probability_zero",
    "mc_blocks",
    "parse_lambda",
    "risk",
    "risk_curve",
    "risk_mc",
    "risk_mc_block",
    "risk_mc_point",
    "risk_point",
    "risk_rows",
    "risk_with_error",
    "risk_zero",
    "risk_zero_asymptote",
    "theta_for_profile",
    "universal_lambda",
]
