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
from scipy import integrate, stats

from hyperdenoise.exceptions import InvalidArgumentError, InvalidImageError
from hyperdenoise.numerics.noise_stats import (
    MomentSums,
    check_moment_request,
    chi4_tail,
    empirical_noise_moments,
    exceedance_report,
    max_exceedance,
    mixture_tail,
    moment_report,
    noise_coefficient_sums,
    normalized_magnitudes,
    riesz_mixture_tail,
    riesz_variance_constants,
    side_for_count,
    subband_variance_fraction,
    t1_cdf,
    t1_cdf_quadrature,
    t1_pdf,
    t1_tail,
    t1_tail_asymptote,
)
from hyperdenoise.numerics.wavelet import filter_bank
from hyperdenoise.types import Family


@pytest.fixture
def la8():
    return filter_bank("la8")


# Riesz variance constants
def test_riesz_variance_constants():
    table = riesz_variance_constants()
    assert table.for_class(1) == 0.5
    assert table.for_class(4) == 0.5
    assert table.for_class(2) == pytest.approx(0.8737, abs=1e-4)
    assert table.for_class(3) == pytest.approx(0.1263, abs=1e-4)
    assert table.for_class(2) + table.for_class(3) == 1.0


def test_riesz_variance_constants_reject_unknown_class():
    with pytest.raises(InvalidArgumentError):
        riesz_variance_constants().for_class(5)


# T1 law
def test_t1_pdf_is_a_density():
    total, _ = integrate.quad(t1_pdf, 0.0, np.inf, epsabs=1e-12, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)
    assert t1_pdf(0.0) == 0.0


def test_t1_pdf_accepts_arrays():
    values = t1_pdf(np.array([0.0, 1.0, 4.0]))
    assert values.shape == (3,)
    assert values[1] == pytest.approx(t1_pdf(1.0))


@pytest.mark.parametrize("t", [0.1, 1.0, 3.0, 12.0], ids=["small", "unit", "mode", "tail"])
def test_t1_cdf_closed_form_matches_quadrature(t):
    assert t1_cdf(t) == pytest.approx(t1_cdf_quadrature(t), abs=1e-9)
    assert t1_cdf(t) + t1_tail(t) == pytest.approx(1.0)


def test_t1_tail_asymptote():
    lam = 5.0
    assert t1_tail(lam**2) == pytest.approx(t1_tail_asymptote(lam), rel=0.1)


def test_t1_law_matches_samples():
    rng = np.random.default_rng(42)
    z = rng.standard_normal((3, 200_000))
    samples = z[0] ** 2 + 0.5 * z[1] ** 2 + 0.5 * z[2] ** 2
    edges = np.linspace(0.0, 15.0, 31)
    empirical = np.searchsorted(np.sort(samples), edges, side="right") / samples.size
    assert np.max(np.abs(empirical - t1_cdf(edges))) < 0.01


@pytest.mark.parametrize("t", [-1.0, np.array([1.0, -0.5])], ids=["scalar", "array"])
def test_t1_rejects_negative_arguments(t):
    with pytest.raises(InvalidArgumentError):
        t1_pdf(t)


# chi2_4 and mixture tails
def test_chi4_tail():
    assert chi4_tail(0.0) == 1.0
    assert chi4_tail(2.0) == pytest.approx(2 * math.exp(-1))
    assert chi4_tail(10.0) == pytest.approx(stats.chi2.sf(10.0, 4))


def test_chi4_tail_matches_samples():
    rng = np.random.default_rng(7)
    samples = np.sum(rng.standard_normal((4, 1_000_000)) ** 2, axis=0)
    p = chi4_tail(10.0)
    se = math.sqrt(p * (1 - p) / samples.size)
    assert abs(np.mean(samples > 10.0) - p) < 3 * se


@pytest.mark.parametrize("x", [0.5, 2.0, 10.0, 30.0], ids=["x0.5", "x2", "x10", "x30"])
def test_mixture_tail_reduces_to_t1(x):
    assert mixture_tail(x, 0.5) == pytest.approx(t1_tail(x), abs=1e-9)


def test_mixture_tail_at_zero():
    assert mixture_tail(0.0, 0.8) == 1.0


def test_riesz_mixture_tail_matches_samples():
    a = riesz_variance_constants().for_class(2)
    rng = np.random.default_rng(11)
    z = rng.standard_normal((3, 1_000_000))
    samples = z[0] ** 2 + a * z[1] ** 2 + (1 - a) * z[2] ** 2
    p = riesz_mixture_tail(10.0, 2)
    se = math.sqrt(p * (1 - p) / samples.size)
    assert abs(np.mean(samples > 10.0) - p) < 3 * se
    assert riesz_mixture_tail(10.0, 3) == pytest.approx(p)


def test_mixture_tail_errors():
    with pytest.raises(InvalidArgumentError):
        mixture_tail(1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        riesz_mixture_tail(1.0, 1)


# Filter-exact variances
def test_subband_variance_fraction_symmetry(la8):
    first = subband_variance_fraction("riesz", 1, la8, 1, 2, 128)
    second = subband_variance_fraction("riesz", 2, la8, 1, 3, 128)
    assert first == pytest.approx(second, abs=1e-12)
    assert subband_variance_fraction("riesz", 0, la8, 1, 2, 128) == 1.0


@pytest.mark.parametrize("u", [1, 2, 3], ids=["u1", "u2", "u3"])
def test_riesz_fractions_split_the_variance(la8, u):
    total = sum(subband_variance_fraction("riesz", l, la8, 2, u, 256) for l in (1, 2))
    assert total == pytest.approx(1.0, abs=0.02)


def test_riesz_fractions_follow_the_subband_class(la8):
    assert subband_variance_fraction("riesz", 1, la8, 1, 1, 256) == pytest.approx(0.5, abs=0.02)
    assert subband_variance_fraction("riesz", 1, la8, 1, 2, 256) > 0.8
    assert subband_variance_fraction("riesz", 1, la8, 1, 3, 256) < 0.2


@pytest.mark.parametrize("j", [2, 3], ids=["j2", "j3"])
def test_riesz_fractions_match_the_class_constants_below_the_finest_level(la8, j):
    constants = riesz_variance_constants()
    for u in (1, 2, 3):
        exact = subband_variance_fraction("riesz", 1, la8, j, u, 256, levels=3)
        assert exact == pytest.approx(constants.for_class(u), abs=0.02), f"u={u}"


def test_riesz_fraction_of_the_scaling_block_is_one_half(la8):
    exact = subband_variance_fraction("riesz", 1, la8, 3, 4, 256, levels=3)
    assert exact == pytest.approx(riesz_variance_constants().for_class(4), abs=0.02)
    assert exact == pytest.approx(subband_variance_fraction("riesz", 2, la8, 3, 4, 256, levels=3), abs=1e-9)


def test_finest_level_riesz_fraction_sits_below_the_class_constant(la8):
    # la8 is not an ideal band-pass filter: its finest-level atoms leak towards the diagonal
    exact = subband_variance_fraction("riesz", 1, la8, 1, 2, 256, levels=3)
    assert exact == pytest.approx(0.849, abs=0.005)
    assert riesz_variance_constants().for_class(2) - exact > 0.02


def test_subband_variance_fraction_rejects_missing_component(la8):
    with pytest.raises(InvalidArgumentError):
        subband_variance_fraction("riesz", 3, la8, 1, 1, 64)


# Monte Carlo moments
def test_moment_sums_merge_matches_sequential_adds():
    rng = np.random.default_rng(0)
    first, second = rng.standard_normal((2, 3, 50))
    sequential = MomentSums()
    sequential.add((1, 1), first)
    sequential.add((1, 1), second)
    left, right = MomentSums(), MomentSums()
    left.add((1, 1), first)
    right.add((1, 1), second)
    merged = left.merge(right)
    assert merged.count == sequential.count
    assert np.allclose(merged.total[(1, 1)], sequential.total[(1, 1)])
    assert np.allclose(merged.outer[(1, 1)], sequential.outer[(1, 1)])
    assert left.count[(1, 1)] == 50


def test_hypercomplex_noise_moments(la8):
    report = empirical_noise_moments("hct", 64, reps=2, seed=3, fp=la8, levels=1)
    assert report.family is Family.HYPERCOMPLEX
    assert report.counts[(1, 1)] == 2 * 32 * 32
    for u in (1, 2, 3):
        for l in range(4):
            assert report.variance(1, u, l) == pytest.approx(1.0, abs=0.1)
        assert np.allclose(report.covariances[(1, u)], report.covariances[(1, u)].T)
    rows = report.rows()
    assert all(len(row) == 5 for row in rows)
    assert {row[2] for row in rows} >= {"mean0_j1", "var3_j1", "corr03_j1"}


def test_noise_moments_are_reproducible(la8):
    first = noise_coefficient_sums("riesz", 64, 2.0, la8, 1, seed=5, rep=0)
    again = noise_coefficient_sums("riesz", 64, 2.0, la8, 1, seed=5, rep=0)
    other = noise_coefficient_sums("riesz", 64, 2.0, la8, 1, seed=5, rep=1)
    assert np.array_equal(first.outer[(1, 2)], again.outer[(1, 2)])
    assert not np.array_equal(first.outer[(1, 2)], other.outer[(1, 2)])


@pytest.mark.parametrize(
    "n, reps, levels, error",
    [(32, 100, 1, InvalidArgumentError), (64, 10, 3, InvalidArgumentError), (96, 10, 1, InvalidImageError)],
    ids=["too_small", "too_few_samples", "not_dyadic"],
)
def test_check_moment_request(n, reps, levels, error):
    with pytest.raises(error):
        check_moment_request(n, reps, levels)


def test_moment_report_of_sums():
    sums = MomentSums()
    sums.add((1, 1), np.array([[1.0, -1.0, 1.0, -1.0], [2.0, -2.0, 2.0, -2.0]]))
    report = moment_report("riesz", 64, 1, 1.0, sums)
    assert np.allclose(report.means[(1, 1)], 0.0)
    assert report.variance(1, 1, 1) == pytest.approx(16.0 / 3)
    assert report.correlation(1, 1, 0, 1) == pytest.approx(1.0)


@pytest.mark.slow
def test_riesz_noise_variances_match_filter_exact_values(la8):
    report = empirical_noise_moments("riesz", 256, reps=4, seed=1, fp=la8, levels=3)
    for u in (1, 2, 3):
        exact = subband_variance_fraction("riesz", 1, la8, 1, u, 256, levels=3)
        assert report.variance(1, u, 1) == pytest.approx(exact, abs=0.02)
        assert report.variance(1, u, 1) + report.variance(1, u, 2) == pytest.approx(report.variance(1, u, 0), abs=0.05)
        for l in (1, 2):
            assert abs(report.correlation(1, u, 0, l)) < 0.05
    exact = subband_variance_fraction("riesz", 1, la8, 2, 2, 256, levels=3)
    assert report.variance(2, 2, 1) == pytest.approx(exact, abs=0.03)
    assert report.variance(3, 4, 1) == pytest.approx(riesz_variance_constants().for_class(4), abs=0.04)


@pytest.mark.slow
def test_hypercomplex_null_magnitude_is_chi4(la8):
    samples = np.concatenate(
        [normalized_magnitudes("hct", 256, 1.0, la8, 3, seed=2, rep=rep, j=1, u=1, stride=2) for rep in range(4)]
    )
    assert samples.size >= 10_000
    assert stats.kstest(samples, "chi2", args=(4,)).pvalue > 0.01
    assert np.mean(samples) == pytest.approx(4.0, abs=0.15)


# Threshold exceedance
def test_side_for_count():
    assert side_for_count(65536) == 256
    with pytest.raises(InvalidArgumentError):
        side_for_count(1000)


def test_exceedance_extremes(la8):
    everything = max_exceedance("h", 64 * 64, reps=2, seed=0, fp=la8, lambda_sq=0.0)
    assert everything.probability == 1.0
    assert everything.mean_count == 64 * 64 - 8 * 8
    nothing = max_exceedance("r", 64 * 64, reps=2, seed=0, fp=la8, lambda_sq=1e9)
    assert nothing.probability == 0.0
    assert nothing.mean_count == 0.0


def test_exceedance_defaults_to_the_universal_threshold(la8):
    report = max_exceedance("h", 64 * 64, reps=1, seed=0, fp=la8)
    assert report.lambda_sq == pytest.approx(2 * math.log(4096) + 2 * math.log(math.log(4096)))
    assert report.reps == 1


def test_exceedance_rejects_bad_requests(la8):
    with pytest.raises(InvalidArgumentError):
        max_exceedance("h", 4096, reps=0, seed=0, fp=la8)
    with pytest.raises(InvalidArgumentError):
        max_exceedance("h", 4096, reps=1, seed=0, fp=la8, lambda_sq=-1.0)


def test_exceedance_report():
    report = exceedance_report([0, 2, 0, 1], 20.0)
    assert report.probability == 0.5
    assert report.mean_count == 0.75


@pytest.mark.slow
def test_hypercomplex_survivors_follow_the_chi4_tail(la8):
    report = max_exceedance("h", 128 * 128, reps=50, seed=9, fp=la8)
    expected = (128 * 128 - 16 * 16) * chi4_tail(report.lambda_sq)
    assert 0.3 * expected < report.mean_count < 2.0 * expected
