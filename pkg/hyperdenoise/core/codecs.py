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
File formats for images, pyramids and result tables.

* PGM: 8-bit binary greymap (P5). Grey levels are read as floats in [0, 255] without rescaling and written back
  rounded and clipped to 0..255.
* HYPD: lossless image format. 16-byte header (b"HYPD", u32 n, two reserved u32), then n*n little-endian
  float64 values, row-major.
* HYPP: coefficient pyramid. 16-byte header (b"HYPP", u32 n, u32 J, reserved u32), then the subbands j = 1..J,
  u = 1..3 row-major, then the scaling block, as little-endian float64.
"""

import logging
import os
import re
import struct

import aiofiles
import numpy as np

from hyperdenoise.exceptions import HyperDenoiseError, ImageFormatError, ImageIOError
from hyperdenoise.numerics.grid import Image
from hyperdenoise.numerics.wavelet import Pyramid, array_from_pyramid, pyramid_to_array
from hyperdenoise.types import ImageFormat

logger = logging.getLogger(__name__)

HYPD_MAGIC = b"HYPD"
HYPP_MAGIC = b"HYPP"
PGM_MAGIC = b"P5"
_HEADER = struct.Struct("<4sIII")
_FLOAT = np.dtype("<f8")
_PGM_HEADER = re.compile(rb"\AP5(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)\s")


def detect_format(data: bytes) -> ImageFormat:
    """
    Raises:
        ImageFormatError: If the bytes start with neither the PGM nor the HYPD magic.
    """
    if data.startswith(HYPD_MAGIC):
        return ImageFormat.HYPD
    if data.startswith(PGM_MAGIC):
        return ImageFormat.PGM
    raise ImageFormatError("Unrecognised image format; expected binary PGM (P5) or HYPD")


def decode_pgm(data: bytes) -> Image:
    match = _PGM_HEADER.match(data)
    if not match:
        raise ImageFormatError("Malformed PGM header")
    width, height, maxval = (int(group) for group in match.groups())
    if not 0 < maxval < 256:
        raise ImageFormatError(f"Only 8-bit PGM is supported, got maxval {maxval}")
    body = data[match.end() :]
    if len(body) < width * height:
        raise ImageFormatError(f"PGM body holds {len(body)} bytes, expected {width * height}")
    pixels = np.frombuffer(body, dtype=np.uint8, count=width * height).reshape(height, width)
    return Image(pixels.astype(np.float64))


def encode_pgm(img: Image) -> bytes:
    clipped = np.rint(np.clip(img.data, 0, 255)).astype(np.uint8)
    return b"P5\n%d %d\n255\n" % (img.n, img.n) + clipped.tobytes()


def decode_hypd(data: bytes) -> Image:
    if len(data) < _HEADER.size:
        raise ImageFormatError("HYPD file is shorter than its header")
    magic, n, _, _ = _HEADER.unpack_from(data)
    if magic != HYPD_MAGIC:
        raise ImageFormatError(f"Bad HYPD magic {magic!r}")
    expected = _HEADER.size + n * n * _FLOAT.itemsize
    if len(data) != expected:
        raise ImageFormatError(f"HYPD file holds {len(data)} bytes, expected {expected} for side {n}")
    values = np.frombuffer(data, dtype=_FLOAT, offset=_HEADER.size)
    return Image(values.reshape(n, n))


def encode_hypd(img: Image) -> bytes:
    return _HEADER.pack(HYPD_MAGIC, img.n, 0, 0) + img.data.astype(_FLOAT).tobytes()


def decode_image(data: bytes) -> tuple[Image, ImageFormat]:
    """Decodes PGM or HYPD bytes, returning the image and the format it was stored in."""
    fmt = detect_format(data)
    img = decode_pgm(data) if fmt is ImageFormat.PGM else decode_hypd(data)
    return img, fmt


def encode_image(img: Image, fmt: ImageFormat) -> bytes:
    return encode_pgm(img) if fmt is ImageFormat.PGM else encode_hypd(img)


def decode_pyramid(data: bytes) -> Pyramid:
    """
    Raises:
        ImageFormatError: If the header or the length is wrong.
    """
    if len(data) < _HEADER.size:
        raise ImageFormatError("HYPP file is shorter than its header")
    magic, n, levels, _ = _HEADER.unpack_from(data)
    if magic != HYPP_MAGIC:
        raise ImageFormatError(f"Bad HYPP magic {magic!r}")
    expected = _HEADER.size + n * n * _FLOAT.itemsize
    if len(data) != expected:
        raise ImageFormatError(f"HYPP file holds {len(data)} bytes, expected {expected} for side {n}")
    return array_from_pyramid(np.frombuffer(data, dtype=_FLOAT, offset=_HEADER.size), n, levels)


def encode_pyramid(pyr: Pyramid) -> bytes:
    return _HEADER.pack(HYPP_MAGIC, pyr.n, pyr.levels, 0) + pyramid_to_array(pyr).astype(_FLOAT).tobytes()


def format_for_path(path: str) -> ImageFormat:
    """The format implied by a file extension; anything but .pgm is HYPD."""
    return ImageFormat.PGM if os.path.splitext(path)[1].lower() == ".pgm" else ImageFormat.HYPD


async def read_bytes(path: str) -> bytes:
    try:
        async with aiofiles.open(path, "rb") as file:
            return await file.read()
    except OSError as error:
        raise ImageIOError(f"Cannot read {path}: {error.strerror or error}", details={"path": path}) from error


async def write_bytes(path: str, data: bytes):
    """Writes ``data`` to ``path``; a partially written file is removed before the error propagates."""
    try:
        async with aiofiles.open(path, "wb") as file:
            await file.write(data)
    except OSError as error:
        remove_partial(path)
        raise ImageIOError(f"Cannot write {path}: {error.strerror or error}", details={"path": path}) from error


def remove_partial(path: str):
    try:
        os.remove(path)
    except FileNotFoundError:
        pass
    except OSError:
        logger.warning("Could not remove partial output %s", path)


async def load_image(path: str) -> tuple[Image, ImageFormat]:
    """
    Reads a PGM or HYPD image.

    Raises:
        ImageIOError: If the file cannot be read.
        ImageFormatError: If the contents are not a valid image.
    """
    data = await read_bytes(path)
    try:
        img, fmt = decode_image(data)
    except HyperDenoiseError as error:
        if isinstance(error, ImageFormatError):
            raise
        raise ImageFormatError(f"{path}: {error}", details={"path": path}) from error
    logger.debug("read %s image of side %d from %s", fmt.value, img.n, path)
    return img, fmt


async def save_image(path: str, img: Image, fmt: ImageFormat | None = None):
    """Writes an image, in ``fmt`` or in the format implied by the extension."""
    fmt = format_for_path(path) if fmt is None else fmt
    await write_bytes(path, encode_image(img, fmt))


async def load_pyramid(path: str) -> Pyramid:
    return decode_pyramid(await read_bytes(path))


async def save_pyramid(path: str, pyr: Pyramid):
    await write_bytes(path, encode_pyramid(pyr))


async def save_text(path: str, text: str):
    """Writes UTF-8 text such as a CSV table."""
    await write_bytes(path, text.encode("utf-8"))


__all__ = [
    "HYPD_MAGIC",
    "HYPP_MAGIC",
    "PGM_MAGIC",
    "decode_hypd",
    "decode_image",
    "decode_pgm",
    "decode_pyramid",
    "detect_format",
    "encode_hypd",
    "encode_image",
    "encode_pgm",
    "encode_pyramid",
    "format_for_path",
    "load_image",
    "load_pyramid",
    "read_bytes",
    "remove_partial",
    "save_image",
    "save_pyramid",
    "save_text",
    "write_bytes",
]
