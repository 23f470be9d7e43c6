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

from hyperdenoise.core.codecs import load_image, save_text
from hyperdenoise.numerics.bench import ResultTable, Trial, aggregate, experiment_cells, load_truth, run_cell
from hyperdenoise.numerics.grid import Image, is_builtin
from hyperdenoise.resources.base_resource import AsyncBaseResource
from hyperdenoise.types import ExperimentConfig

logger = logging.getLogger(__name__)


class BenchResource(AsyncBaseResource):
    async def load_truth(self, cfg: ExperimentConfig) -> Image:
        if is_builtin(cfg.image):
            return await self._run(load_truth, cfg)
        image, _ = await load_image(cfg.image)
        return image

    async def run_trials(self, cfg: ExperimentConfig, truth: Image | None = None) -> list[Trial]:
        """
        Every (SNR, replicate) cell on the pool, each cell running the noisy baseline and all methods on one
        shared replicate. Trials come back in cell order.
        """
        truth = await self.load_truth(cfg) if truth is None else truth
        cells = experiment_cells(cfg)
        results = await self.client.gather((run_cell, (truth, cfg, *cell)) for cell in cells)
        return [trial for cell_trials in results for trial in cell_trials]

    async def run_experiment(self, cfg: ExperimentConfig, truth: Image | None = None) -> ResultTable:
        """
        Runs a denoising experiment and aggregates MSE and PSNR per (method, SNR).

        Args:
            cfg (ExperimentConfig): Experiment description.
            truth (Image | None): The clean image; loaded from ``cfg.image`` when not given.
        """
        trials = await self.run_trials(cfg, truth)
        logger.info("experiment on %s: %d trials", cfg.image, len(trials))
        return aggregate(cfg.image, trials)

    async def write_csv(self, path: str, table: ResultTable):
        await save_text(path, table.to_csv())
