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

import asyncio
import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import Any

from hyperdenoise.exceptions import InvalidArgumentError, MultipleErrors

logger = logging.getLogger(__name__)

Call = tuple[Callable[..., Any], tuple]


class AsyncComputeClient:
    """
    A client for running synchronous numerical builders asynchronously on a worker pool.

    numpy, scipy and PyWavelets release the GIL in their inner loops, so a thread pool gives real
    parallelism for the per-spin and per-replicate work without pickling arrays across processes.

    Attributes:
        max_workers (int): Upper bound on concurrently running calls.
        executor (Optional[Executor]): Optional, externally managed executor. If not provided, the client
                                       creates its own pool on first use and owns its lifecycle.
    """

    def __init__(self, max_workers: int | None = None):
        """
        Initializes a new instance of the AsyncComputeClient.

        Args:
            max_workers (int): Worker pool size. Defaults to the number of available cores.
        """
        self.max_workers = max_workers if max_workers is not None else (os.cpu_count() or 1)
        if self.max_workers < 1:
            raise InvalidArgumentError(f"max_workers must be at least 1, got: {self.max_workers}")
        self.executor = None
        self._owns_executor = False

    async def execute(self, fn: Callable[..., Any], *args) -> Any:
        """
        Runs one builder call on the pool.

        Args:
            fn (Callable): A pure synchronous function.
            *args: Positional arguments for ``fn``.

        Returns:
            Whatever ``fn`` returns.
        """
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(self._ensure_executor(), fn, *args)

    async def gather(self, calls: Iterable[Call]) -> list:
        """
        Runs many builder calls concurrently and returns their results in submission order.

        Args:
            calls (Iterable[tuple[Callable, tuple]]): ``(fn, args)`` pairs.

        Returns:
            list: One result per call, in the order the calls were given.

        Raises:
            Exception: The failure itself, when exactly one call fails.
            MultipleErrors: When several calls fail.
        """
        calls = list(calls)
        logger.debug("Scheduling %d calls on %d workers", len(calls), self.max_workers)
        results = await asyncio.gather(*(self.execute(fn, *args) for fn, args in calls), return_exceptions=True)
        errors = [r for r in results if isinstance(r, BaseException)]
        if len(errors) == 1:
            raise errors[0]
        if errors:
            raise MultipleErrors(f"{len(errors)} of {len(calls)} tasks failed", errors=errors)
        return results

    def set_executor(self, executor: Executor):
        """
        Sets an external executor to be used by the client.

        This allows for external management of the pool's lifecycle and sharing one pool between clients.

        Args:
            executor (Executor): An externally managed executor.
        """
        self.executor = executor
        self._owns_executor = False

    def close_executor(self):
        """
        Shuts the executor down if the client created it.

        An externally set executor is only detached, never shut down.
        """
        if self.executor is not None and self._owns_executor:
            self.executor.shutdown(wait=True)
        self.executor = None
        self._owns_executor = False

    def _ensure_executor(self) -> Executor:
        if self.executor is None:
            self.executor = ThreadPoolExecutor(max_workers=self.max_workers, thread_name_prefix="hyperdenoise")
            self._owns_executor = True
        return self.executor
