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

import threading
from concurrent.futures import ThreadPoolExecutor

import pytest

from hyperdenoise.core.client import AsyncComputeClient
from hyperdenoise.exceptions import InvalidArgumentError, InvalidImageError, MultipleErrors


def square(x):
    return x * x


def fail_on(bad):
    def call(x):
        if x in bad:
            raise InvalidImageError(f"bad input {x}")
        return x

    return call


@pytest.fixture
def compute_client():
    client = AsyncComputeClient(max_workers=2)
    yield client
    client.close_executor()


def test_default_worker_count():
    assert AsyncComputeClient().max_workers >= 1


def test_rejects_empty_pool():
    with pytest.raises(InvalidArgumentError):
        AsyncComputeClient(max_workers=0)


@pytest.mark.asyncio
async def test_execute_runs_on_the_pool(compute_client):
    name = await compute_client.execute(lambda: threading.current_thread().name)
    assert name.startswith("hyperdenoise")
    assert compute_client.executor is not None


@pytest.mark.asyncio
async def test_gather_keeps_submission_order(compute_client):
    results = await compute_client.gather((square, (x,)) for x in range(10))
    assert results == [x * x for x in range(10)]


@pytest.mark.asyncio
async def test_gather_of_nothing(compute_client):
    assert await compute_client.gather([]) == []


@pytest.mark.asyncio
async def test_gather_reraises_a_single_failure(compute_client):
    with pytest.raises(InvalidImageError):
        await compute_client.gather((fail_on({3}), (x,)) for x in range(5))


@pytest.mark.asyncio
async def test_gather_collects_several_failures(compute_client):
    with pytest.raises(MultipleErrors) as exc_info:
        await compute_client.gather((fail_on({1, 3}), (x,)) for x in range(5))
    assert len(exc_info.value.errors) == 2
    assert all(isinstance(error, InvalidImageError) for error in exc_info.value.errors)


@pytest.mark.asyncio
async def test_external_executor_is_not_shut_down():
    executor = ThreadPoolExecutor(max_workers=1)
    client = AsyncComputeClient()
    client.set_executor(executor)
    assert await client.execute(square, 4) == 16
    client.close_executor()
    assert client.executor is None
    assert executor.submit(square, 3).result() == 9
    executor.shutdown()


@pytest.mark.asyncio
async def test_owned_executor_is_recreated_after_close(compute_client):
    await compute_client.execute(square, 2)
    compute_client.close_executor()
    assert compute_client.executor is None
    assert await compute_client.execute(square, 5) == 25
