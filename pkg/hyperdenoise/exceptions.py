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

from typing import Optional


class HyperDenoiseError(Exception):
    """
    Base class for all errors raised by hyperdenoise.
    """

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[dict] = None,
    ):
        super().__init__(message)
        self.error_code: Optional[str] = error_code
        self.details: dict = details if details is not None else {}


class InvalidArgumentError(HyperDenoiseError):
    """
    Raised when an argument is outside the range an operation accepts,
    e.g. a non-positive sigma, a zero spin count or a negative threshold.
    """

    def __init__(
        self,
        message: str = "Invalid argument",
        error_code: Optional[str] = "INVALID_ARGUMENT",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class InvalidImageError(HyperDenoiseError):
    """
    Raised when an image is not square, not dyadic, smaller than 8x8 or holds non-finite values.
    """

    def __init__(
        self,
        message: str = "Invalid image",
        error_code: Optional[str] = "INVALID_IMAGE",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class AliasedFrequencyError(HyperDenoiseError):
    """
    Raised when an oscillation is requested at a frequency magnitude outside (0, 1/2) cycles per sample.
    """

    def __init__(
        self,
        message: str = "Frequency outside (0, 1/2) would alias",
        error_code: Optional[str] = "ALIASED_FREQUENCY",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class UnknownWaveletError(HyperDenoiseError):
    """
    Raised when a filter bank name is not one of la8, haar or d4.
    """

    def __init__(
        self,
        message: str = "Unknown wavelet filter bank",
        error_code: Optional[str] = "UNKNOWN_WAVELET",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class DecompositionDepthError(HyperDenoiseError):
    """
    Raised when the decomposition depth J is not in 1..lg(n).
    """

    def __init__(
        self,
        message: str = "Decomposition depth out of range",
        error_code: Optional[str] = "DEPTH_OUT_OF_RANGE",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class InvalidMethodError(HyperDenoiseError):
    """
    Raised when a thresholding method, quadrature family or risk method is not recognised
    or not supported by the requested operation.
    """

    def __init__(
        self,
        message: str = "Invalid method",
        error_code: Optional[str] = "INVALID_METHOD",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class UnknownProfileError(HyperDenoiseError):
    """
    Raised when a risk-curve mean profile is unknown or undefined for the requested method.
    """

    def __init__(
        self,
        message: str = "Unknown risk profile",
        error_code: Optional[str] = "UNKNOWN_PROFILE",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class ConfigError(HyperDenoiseError):
    """
    Raised when a configuration object is inconsistent, e.g. an experiment without methods.
    """

    def __init__(
        self,
        message: str = "Invalid configuration",
        error_code: Optional[str] = "INVALID_CONFIG",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class ImageIOError(HyperDenoiseError):
    """
    Raised when an image or pyramid file cannot be read or written.
    """

    def __init__(
        self,
        message: str = "Image I/O failed",
        error_code: Optional[str] = "IMAGE_IO",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class ImageFormatError(HyperDenoiseError):
    """
    Raised when a file does not hold a valid P5 PGM, HYPD image or HYPP pyramid.
    """

    def __init__(
        self,
        message: str = "Unrecognised or corrupt file format",
        error_code: Optional[str] = "IMAGE_FORMAT",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class ShapeMismatchError(HyperDenoiseError):
    """
    Raised when images or pyramids that must share dimensions do not.
    """

    def __init__(
        self,
        message: str = "Shape mismatch",
        error_code: Optional[str] = "SHAPE_MISMATCH",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class MalformedPyramidError(HyperDenoiseError):
    """
    Raised when a pyramid's subband sizes do not match its side length and depth.
    """

    def __init__(
        self,
        message: str = "Malformed pyramid",
        error_code: Optional[str] = "MALFORMED_PYRAMID",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class SymmetryError(HyperDenoiseError):
    """
    Raised when a spectrally filtered real image comes back with an imaginary residue above 1e-6,
    which means a spectral filter lost its Hermitian symmetry.
    """

    def __init__(
        self,
        message: str = "Spectral filter broke Hermitian symmetry",
        error_code: Optional[str] = "SYMMETRY",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class CubatureError(HyperDenoiseError):
    """
    Raised when a risk integral does not reach its absolute error target.
    The achieved error estimate is available as ``achieved_error``.
    """

    def __init__(
        self,
        message: str = "Cubature did not converge",
        error_code: Optional[str] = "CUBATURE",
        details: Optional[dict] = None,
        achieved_error: Optional[float] = None,
    ):
        super().__init__(message, error_code, details)
        self.achieved_error: float | None = achieved_error


class NumericError(HyperDenoiseError):
    """
    Raised for other numeric failures, e.g. a zero image where a positive energy is required.
    """

    def __init__(
        self,
        message: str = "Numeric failure",
        error_code: Optional[str] = "NUMERIC",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)


class MultipleErrors(HyperDenoiseError):
    """
    Raised when several concurrently scheduled tasks fail. The individual errors are kept in ``errors``.
    """

    def __init__(
        self,
        message: str = "Multiple errors occurred",
        errors: Optional[list[BaseException]] = None,
        error_code: Optional[str] = "MULTIPLE_ERRORS",
        details: Optional[dict] = None,
    ):
        super().__init__(message, error_code, details)
        self.errors: list[BaseException] = errors if errors is not None else []


# Mapping of error codes to exception classes
ERROR_CODES_MAPPING = {
    "INVALID_ARGUMENT": InvalidArgumentError,
    "INVALID_IMAGE": InvalidImageError,
    "ALIASED_FREQUENCY": AliasedFrequencyError,
    "UNKNOWN_WAVELET": UnknownWaveletError,
    "DEPTH_OUT_OF_RANGE": DecompositionDepthError,
    "INVALID_METHOD": InvalidMethodError,
    "UNKNOWN_PROFILE": UnknownProfileError,
    "INVALID_CONFIG": ConfigError,
    "IMAGE_IO": ImageIOError,
    "IMAGE_FORMAT": ImageFormatError,
    "SHAPE_MISMATCH": ShapeMismatchError,
    "MALFORMED_PYRAMID": MalformedPyramidError,
    "SYMMETRY": SymmetryError,
    "CUBATURE": CubatureError,
    "NUMERIC": NumericError,
    "MULTIPLE_ERRORS": MultipleErrors,
}

# CLI exit status per error family
EXIT_BAD_ARGUMENTS = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

EXIT_CODES = {
    InvalidArgumentError: EXIT_BAD_ARGUMENTS,
    InvalidImageError: EXIT_BAD_ARGUMENTS,
    AliasedFrequencyError: EXIT_BAD_ARGUMENTS,
    UnknownWaveletError: EXIT_BAD_ARGUMENTS,
    DecompositionDepthError: EXIT_BAD_ARGUMENTS,
    InvalidMethodError: EXIT_BAD_ARGUMENTS,
    UnknownProfileError: EXIT_BAD_ARGUMENTS,
    ConfigError: EXIT_BAD_ARGUMENTS,
    ImageIOError: EXIT_IO,
    ImageFormatError: EXIT_IO,
    ShapeMismatchError: EXIT_NUMERIC,
    MalformedPyramidError: EXIT_NUMERIC,
    SymmetryError: EXIT_NUMERIC,
    CubatureError: EXIT_NUMERIC,
    NumericError: EXIT_NUMERIC,
}


def exit_code_for(error: BaseException) -> int:
    """
    Resolve the CLI exit status for an exception. An aggregate takes the status of its first inner error;
    anything unexpected counts as a numeric failure.
    """
    if isinstance(error, MultipleErrors) and error.errors:
        return exit_code_for(error.errors[0])
    for error_class in type(error).__mro__:
        if error_class in EXIT_CODES:
            return EXIT_CODES[error_class]
    return EXIT_NUMERIC
