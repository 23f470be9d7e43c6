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

from hyperdenoise.core.codecs import load_image, load_pyramid, save_image, save_pyramid
from hyperdenoise.numerics.grid import Image, add_noise, is_builtin, parse_builtin
from hyperdenoise.numerics.wavelet import Pyramid, dwt2, filter_bank, idwt2
from hyperdenoise.resources.base_resource import AsyncBaseResource
from hyperdenoise.types import DEFAULT_LEVELS, DEFAULT_WAVELET, ImageFormat, NoiseSpec, WaveletName


class ImageResource(AsyncBaseResource):
    async def load(self, source: str) -> tuple[Image, ImageFormat | None]:
        """
        Loads an image from a PGM/HYPD file or builds a builtin one.

        Args:
            source (str): A file path or a ``builtin:NAME?key=val`` reference.

        Returns:
            tuple[Image, ImageFormat | None]: The image and its file format; None for builtin images.
        """
        if is_builtin(source):
            return await self._run(parse_builtin, source), None
        return await load_image(source)

    async def save(self, path: str, img: Image, fmt: ImageFormat | None = None):
        """
        Writes an image. Without ``fmt`` the format follows the file extension (.pgm or HYPD otherwise).
        """
        await save_image(path, img, fmt)

    async def add_noise(self, img: Image, spec: NoiseSpec) -> Image:
        return await self._run(add_noise, img, spec)

    async def decompose(
        self, img: Image, wavelet: WaveletName | str = DEFAULT_WAVELET, levels: int = DEFAULT_LEVELS
    ) -> Pyramid:
        return await self._run(dwt2, img, filter_bank(wavelet), levels)

    async def reconstruct(self, pyr: Pyramid, wavelet: WaveletName | str = DEFAULT_WAVELET) -> Image:
        return await self._run(idwt2, pyr, filter_bank(wavelet))

    async def save_pyramid(self, path: str, pyr: Pyramid):
        await save_pyramid(path, pyr)

    async def load_pyramid(self, path: str) -> Pyramid:
        return await load_pyramid(path)
