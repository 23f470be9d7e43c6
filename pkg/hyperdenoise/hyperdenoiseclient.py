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

from concurrent.futures import Executor

from hyperdenoise import __version__
from hyperdenoise.core.client import AsyncComputeClient
from hyperdenoise.resources import (
    BenchResource,
    DenoiseResource,
    ImageResource,
    NoiseStatsResource,
    RiskResource,
)


class AsyncHyperDenoiseClient:
    """
    Attributes:
        images (ImageResource):
        denoise (DenoiseResource):
        bench (BenchResource):
        risk (RiskResource):
        noise_stats (NoiseStatsResource):
    """

    def __init__(self, max_workers: int | None = None, executor: Executor | None = None):
        """
        Args:
            max_workers (int): Worker pool size. Defaults to the number of available cores.
            executor (Executor): Optional, externally managed executor. It is shared by all resources and is not
                shut down when the client closes.
        """
        self.compute = AsyncComputeClient(max_workers=max_workers)
        if executor is not None:
            self.compute.set_executor(executor)

        self.images = ImageResource(client=self.compute)
        self.denoise = DenoiseResource(client=self.compute)
        self.bench = BenchResource(client=self.compute)
        self.risk = RiskResource(client=self.compute)
        self.noise_stats = NoiseStatsResource(client=self.compute)

    def __enter__(self):
        raise RuntimeError(
            "Use `async with AsyncHyperDenoiseClient(...)` instead of `with AsyncHyperDenoiseClient(...)`"
        )

    def __exit__(self, exc_type, exc, tb):
        pass

    async def __aenter__(self):
        return self

    async def __aexit__(self, exc_type, exc, tb):
        self.compute.close_executor()

    def __str__(self):
        return f"AsyncHyperDenoiseClient {__version__}"

    def __repr__(self):
        return f"AsyncHyperDenoiseClient {__version__}"
