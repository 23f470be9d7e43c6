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

import logging

from hyperdenoise.numerics.grid import Image
from hyperdenoise.numerics.shrinkage import (
    DenoiseReport,
    combine_spins,
    denoise_spin,
    resolve_parameters,
    spin_offsets,
)
from hyperdenoise.numerics.wavelet import filter_bank
from hyperdenoise.resources.base_resource import AsyncBaseResource
from hyperdenoise.types import DenoiseConfig

logger = logging.getLogger(__name__)


class DenoiseResource(AsyncBaseResource):
    async def denoise(self, y: Image, cfg: DenoiseConfig) -> DenoiseReport:
        """
        Denoises ``y`` with the configured method, running the cycle spins concurrently. The spins are averaged
        in shift order, so the result matches the serial pipeline for any pool size.

        Args:
            y (Image): Noisy observation.
            cfg (DenoiseConfig): Method, filter bank, depth, sigma, threshold and spin count.

        Returns:
            DenoiseReport: The estimate with the sigma, lambda^2 and kept fraction that produced it.
        """
        fp = filter_bank(cfg.wavelet)
        sigma, lambda_sq, estimated = await self._run(resolve_parameters, y, cfg)
        calls = [
            (denoise_spin, (y, cfg.method, fp, cfg.levels, sigma, lambda_sq, shift))
            for shift in spin_offsets(cfg.spins)
        ]
        results = await self.client.gather(calls)
        image, fraction = combine_spins(results)
        logger.info("kept fraction %.6g over %d spins", fraction, len(results))
        return DenoiseReport(
            image=image, sigma=sigma, lambda_sq=lambda_sq, kept_fraction=fraction, sigma_estimated=estimated
        )
