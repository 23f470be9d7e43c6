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

from hyperdenoise.core.codecs import save_text
from hyperdenoise.core.helpers import rows_to_csv
from hyperdenoise.exceptions import InvalidArgumentError
from hyperdenoise.numerics.noise_stats import (
    MOMENT_COLUMNS,
    ExceedanceReport,
    MomentReport,
    MomentSums,
    check_moment_request,
    exceedance_count,
    exceedance_lambda_sq,
    exceedance_report,
    moment_report,
    noise_coefficient_sums,
    side_for_count,
)
from hyperdenoise.numerics.wavelet import filter_bank
from hyperdenoise.resources.base_resource import AsyncBaseResource
from hyperdenoise.types import DEFAULT_LEVELS, DEFAULT_WAVELET, Family, WaveletName, as_family


class NoiseStatsResource(AsyncBaseResource):
    async def moments(
        self,
        family: Family | str,
        n: int,
        reps: int,
        seed: int,
        wavelet: WaveletName | str = DEFAULT_WAVELET,
        levels: int = DEFAULT_LEVELS,
        sigma: float = 1.0,
    ) -> MomentReport:
        """
        Pooled means and covariances of pure-noise coefficient vectors, one pool task per replicate.

        Raises:
            InvalidArgumentError: If n < 64 or too few samples would be pooled in the coarsest subband.
        """
        family = as_family(family)
        check_moment_request(n, reps, levels)
        fp = filter_bank(wavelet)
        calls = [(noise_coefficient_sums, (family, n, sigma, fp, levels, seed, rep)) for rep in range(reps)]
        combined = MomentSums()
        for sums in await self.client.gather(calls):
            combined = combined.merge(sums)
        return moment_report(family, n, reps, sigma, combined)

    async def max_exceedance(
        self,
        family: Family | str,
        K: int,
        reps: int,
        seed: int,
        wavelet: WaveletName | str = DEFAULT_WAVELET,
        levels: int = DEFAULT_LEVELS,
        lambda_sq: float | None = None,
    ) -> ExceedanceReport:
        """How often any detail coefficient of pure noise survives the (universal) threshold."""
        if reps < 1:
            raise InvalidArgumentError(f"reps must be at least 1, got: {reps}")
        n = side_for_count(K)
        lambda_sq = exceedance_lambda_sq(family, K, lambda_sq)
        fp = filter_bank(wavelet)
        calls = [(exceedance_count, (family, n, fp, levels, lambda_sq, seed, rep)) for rep in range(reps)]
        return exceedance_report(await self.client.gather(calls), lambda_sq)

    async def write_csv(self, path: str, report: MomentReport):
        await save_text(path, rows_to_csv(MOMENT_COLUMNS, report.rows()))
