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
from hyperdenoise.numerics.risk import (
    RISK_COLUMNS,
    RiskPoint,
    combine_mc,
    mc_blocks,
    risk_mc_block,
    risk_mc_point,
    risk_point,
    risk_with_error,
    risk_zero,
)
from hyperdenoise.resources.base_resource import AsyncBaseResource
from hyperdenoise.types import RiskMethod, RiskProfile, RiskSpec


class RiskResource(AsyncBaseResource):
    async def risk(self, spec: RiskSpec) -> tuple[float, float]:
        """
        Standardised risk by quadrature.

        Returns:
            tuple[float, float]: The risk and the absolute error estimate.
        """
        return await self._run(risk_with_error, spec)

    async def risk_zero(self, method: RiskMethod | str, lam: float) -> float:
        return risk_zero(method, lam)

    async def risk_mc(self, spec: RiskSpec, nsamples: int, seed: int, stream: int = 0) -> tuple[float, float]:
        """Monte Carlo risk with standard error; blocks run concurrently and are merged in block order."""
        calls = [(risk_mc_block, (spec, size, seed, stream, index)) for index, size in enumerate(mc_blocks(nsamples))]
        return combine_mc(await self.client.gather(calls))

    async def risk_curve(
        self,
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
        Risk over a |theta| grid, one pool task per point. With ``mc`` > 0 each point is followed by its
        Monte Carlo row.
        """
        if not grid:
            raise InvalidArgumentError("The |theta| grid is empty")
        calls = []
        for index, theta_abs in enumerate(grid):
            calls.append((risk_point, (method, profile, theta_abs, lam, direction, variance_split)))
            if mc:
                args = (method, profile, theta_abs, lam, mc, seed, index, direction, variance_split)
                calls.append((risk_mc_point, args))
        return await self.client.gather(calls)

    async def write_csv(self, path: str, points: list[RiskPoint]):
        await save_text(path, rows_to_csv(RISK_COLUMNS, (point.row() for point in points)))
