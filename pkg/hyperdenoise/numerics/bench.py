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
Repeated denoising experiments: noise calibrated to a target SNR, every method applied to the same noisy
replicates, MSE and PSNR aggregated per (method, SNR).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from hyperdenoise.core.helpers import derive_seed, rows_to_csv
from hyperdenoise.exceptions import InvalidArgumentError
from hyperdenoise.numerics.grid import Image, add_noise, check_same_size, is_builtin, parse_builtin, sigma_for_snr
from hyperdenoise.numerics.shrinkage import denoise
from hyperdenoise.types import DEFAULT_PEAK, ExperimentConfig, Method, NoiseSpec

logger = logging.getLogger(__name__)

NOISY_LABEL = "n"
RESULT_COLUMNS = ("image", "method", "snr", "rep_count", "mean_mse", "sd_mse", "mean_psnr")


def mse(a: Image, b: Image) -> float:
    """
    Mean squared difference (1/N^2) sum (a - b)^2.

    Raises:
        ShapeMismatchError: If the images differ in size.
    """
    check_same_size(a, b)
    return float(np.mean((a.data - b.data) ** 2))


def psnr(estimate: Image, truth: Image, peak: float = DEFAULT_PEAK) -> float:
    """
    Peak signal-to-noise ratio 10 log10(peak^2 / mse) in dB; +inf when the images are identical.

    Raises:
        InvalidArgumentError: If peak is not positive.
        ShapeMismatchError: If the images differ in size.
    """
    if not peak > 0:
        raise InvalidArgumentError(f"peak must be positive, got: {peak}")
    error = mse(estimate, truth)
    if error == 0:
        return math.inf
    return 10 * math.log10(peak**2 / error)


@dataclass(frozen=True)
class Trial:
    """The outcome of one method on one noisy replicate."""

    method: str
    snr: float
    rep: int
    mse: float
    psnr: float


@dataclass(frozen=True)
class ResultRow:
    image: str
    method: str
    snr: float
    rep_count: int
    mean_mse: float
    sd_mse: float
    mean_psnr: float

    def row(self) -> tuple:
        return (self.image, self.method, self.snr, self.rep_count, self.mean_mse, self.sd_mse, self.mean_psnr)


@dataclass(frozen=True)
class ResultTable:
    """
    Aggregated results, one row per (method, SNR) in the order the experiment ran them. The noisy input is
    reported as method ``n``.
    """

    rows: tuple[ResultRow, ...]

    def get(self, method: Method | str, snr: float) -> ResultRow:
        label = method.value if isinstance(method, Method) else str(method)
        for row in self.rows:
            if row.method == label and row.snr == snr:
                return row
        raise KeyError((label, snr))

    def to_csv(self) -> str:
        return rows_to_csv(RESULT_COLUMNS, (row.row() for row in self.rows))

    def __len__(self):
        return len(self.rows)


def noise_level(truth: Image, cfg: ExperimentConfig, snr: float) -> float:
    """The configured sigma, or the one that gives ``truth`` the target SNR."""
    return float(cfg.sigma) if cfg.sigma is not None else sigma_for_snr(truth, snr)


def noisy_replicate(truth: Image, sigma: float, seed: int, snr_index: int, rep: int) -> Image:
    """The replicate shared by all methods at one (SNR, rep) cell."""
    return add_noise(truth, NoiseSpec(sigma=sigma, seed=derive_seed(seed, snr_index, rep)))


def run_trial(
    truth: Image, noisy: Image, method: Method, cfg: ExperimentConfig, snr: float, sigma: float, rep: int
) -> Trial:
    estimate = denoise(noisy, cfg.denoise_config(method, sigma))
    return Trial(method.value, snr, rep, mse(estimate, truth), psnr(estimate, truth, cfg.peak))


def noisy_baseline(truth: Image, noisy: Image, cfg: ExperimentConfig, snr: float, rep: int) -> Trial:
    return Trial(NOISY_LABEL, snr, rep, mse(noisy, truth), psnr(noisy, truth, cfg.peak))


def aggregate(image_label: str, trials: list[Trial]) -> ResultTable:
    """Groups trials by (method, snr), keeping first-seen order, and reduces them to mean and sd."""
    groups: dict[tuple[str, float], list[Trial]] = {}
    for trial in trials:
        groups.setdefault((trial.method, trial.snr), []).append(trial)
    rows = []
    for (method, snr), group in groups.items():
        errors = np.array([t.mse for t in group])
        sd = float(np.std(errors, ddof=1)) if errors.size > 1 else 0.0
        rows.append(
            ResultRow(
                image=image_label,
                method=method,
                snr=snr,
                rep_count=len(group),
                mean_mse=float(np.mean(errors)),
                sd_mse=sd,
                mean_psnr=float(np.mean([t.psnr for t in group])),
            )
        )
    return ResultTable(rows=tuple(rows))


def paired_difference(
    trials: list[Trial], first: Method | str, second: Method | str, snr: float
) -> tuple[float, float]:
    """
    Mean and sample sd of mse(first) - mse(second) over the replicates both methods share at one SNR.
    """
    first = first.value if isinstance(first, Method) else str(first)
    second = second.value if isinstance(second, Method) else str(second)
    by_rep = {}
    for trial in trials:
        if trial.snr == snr and trial.method in (first, second):
            by_rep.setdefault(trial.rep, {})[trial.method] = trial.mse
    diffs = np.array([cell[first] - cell[second] for cell in by_rep.values() if len(cell) == 2])
    if diffs.size == 0:
        raise InvalidArgumentError(f"No paired replicates for {first} and {second} at SNR {snr}")
    sd = float(np.std(diffs, ddof=1)) if diffs.size > 1 else 0.0
    return float(np.mean(diffs)), sd


def experiment_cells(cfg: ExperimentConfig) -> list[tuple[int, float, int]]:
    """(snr_index, snr, rep) in run order. An explicit sigma gives a single cell per rep labelled with SNR 0."""
    snrs = cfg.snrs if cfg.sigma is None else (0.0,)
    return [(index, snr, rep) for index, snr in enumerate(snrs) for rep in range(cfg.reps)]


def run_cell(truth: Image, cfg: ExperimentConfig, snr_index: int, snr: float, rep: int) -> list[Trial]:
    """The noisy baseline and every method on one shared replicate."""
    sigma = noise_level(truth, cfg, snr)
    noisy = noisy_replicate(truth, sigma, cfg.seed, snr_index, rep)
    trials = [noisy_baseline(truth, noisy, cfg, snr, rep)]
    trials.extend(run_trial(truth, noisy, method, cfg, snr, sigma, rep) for method in cfg.methods)
    logger.debug("snr %g rep %d done", snr, rep)
    return trials


def load_truth(cfg: ExperimentConfig) -> Image:
    """Builtin images only; files are read through the async codecs."""
    if not is_builtin(cfg.image):
        raise InvalidArgumentError(f"run_experiment needs the image loaded for {cfg.image!r}")
    return parse_builtin(cfg.image)


def run_experiment(cfg: ExperimentConfig, truth: Image | None = None) -> ResultTable:
    """
    Runs every (SNR, replicate) cell, all methods on the same noisy replicate, and aggregates the results.

    Args:
        cfg (ExperimentConfig): Experiment description.
        truth (Image | None): The clean image. Builtin references are built when it is not given.
    """
    truth = load_truth(cfg) if truth is None else truth
    trials = []
    for snr_index, snr, rep in experiment_cells(cfg):
        trials.extend(run_cell(truth, cfg, snr_index, snr, rep))
    logger.info("experiment on %s: %d trials", cfg.image, len(trials))
    return aggregate(cfg.image, trials)


__all__ = [
    "NOISY_LABEL",
    "RESULT_COLUMNS",
    "ResultRow",
    "ResultTable",
    "Trial",
    "aggregate",
    "experiment_cells",
    "load_truth",
    "mse",
    "noise_level",
    "noisy_baseline",
    "noisy_replicate",
    "paired_difference",
    "psnr",
    "run_cell",
    "run_experiment",
    "run_trial",
]
