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

import json

import pytest

from hyperdenoise import __version__
from hyperdenoise.cli import main
from hyperdenoise.core.codecs import encode_hypd
from hyperdenoise.numerics.grid import add_noise, make_blobs
from hyperdenoise.numerics.risk import RISK_COLUMNS
from hyperdenoise.types import NoiseSpec


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    for name in ("HYPERDENOISE_THREADS", "HYPERDENOISE_SEED", "HYPERDENOISE_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


def echoed_config(stderr: str) -> dict:
    return next(json.loads(line) for line in stderr.splitlines() if line.startswith("{"))


# Test argument handling
def test_help(capsys):
    assert main(["--help"]) == 0
    assert "denoise" in capsys.readouterr().out


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [[], ["unknown"], ["risk"], ["risk", "--method", "x"], ["denoise", "--input", "a.pgm"]],
    ids=["no_command", "unknown_command", "missing_method", "bad_method", "missing_output"],
)
def test_usage_errors(argv):
    assert main(argv) == 2


def test_bad_environment(monkeypatch, capsys):
    monkeypatch.setenv("HYPERDENOISE_SEED", "abc")
    assert main(["risk", "--method", "c"]) == 2
    assert "HYPERDENOISE_SEED" in capsys.readouterr().err


def test_environment_defaults_are_echoed(monkeypatch, capsys):
    monkeypatch.setenv("HYPERDENOISE_SEED", "7")
    monkeypatch.setenv("HYPERDENOISE_THREADS", "1")
    assert main(["risk", "--method", "c", "--lambda", "1"]) == 0
    config = echoed_config(capsys.readouterr().err)
    assert config["seed"] == 7
    assert config["threads"] == 1
    assert config["command"] == "risk"
    assert config["version"] == __version__


# Test risk
def test_risk_table(capsys):
    assert main(["risk", "--method", "c", "--profile", "fig2a", "--theta", "0,1", "--lambda", "2"]) == 0
    lines = capsys.readouterr().out.split("\r\n")
    assert lines[0] == ",".join(RISK_COLUMNS)
    assert lines[1].startswith("c,fig2a,0.0,2.0,")
    assert lines[1].endswith(",closed,0.0")
    assert lines[2].split(",")[5] == "cubature"


def test_risk_with_monte_carlo_to_file(tmp_path, capsys):
    output = tmp_path / "risk.csv"
    argv = ["risk", "--method", "h", "--grid", "0:2:1", "--mc", "20000", "--output", str(output)]
    assert main(argv) == 0
    assert capsys.readouterr().out == ""
    rows = output.read_text(encoding="utf-8").splitlines()
    assert len(rows) == 1 + 2 * 3
    assert [row.split(",")[5] for row in rows[1:3]] == ["closed", "mc"]


@pytest.mark.parametrize(
    "lam", ["-1", "universal:8", "universal:x", "big"], ids=["negative", "small_count", "bad_count", "not_a_number"]
)
def test_risk_rejects_bad_lambda(lam):
    assert main(["risk", "--method", "c", "--lambda", lam]) == 2


def test_risk_rejects_bad_grid():
    assert main(["risk", "--method", "c", "--grid", "3:1:1"]) == 2


# Test denoise
def test_denoise_builtin_to_pgm(tmp_path, capsys):
    output = tmp_path / "clean.pgm"
    argv = ["denoise", "--input", "builtin:blobs?n=32", "--output", str(output), "--sigma", "0.5"]
    assert main([*argv, "--levels", "2", "--spins", "1"]) == 0
    assert output.read_bytes().startswith(b"P5\n32 32\n255\n")
    assert capsys.readouterr().out.startswith("sigma=0.5 ")


def test_denoise_keeps_the_input_format(tmp_path, capsys):
    noisy, clean = tmp_path / "noisy.hypd", tmp_path / "clean.out"
    noisy.write_bytes(encode_hypd(add_noise(make_blobs(32), NoiseSpec(sigma=0.2, seed=1))))
    assert main(["denoise", "--input", str(noisy), "--output", str(clean), "--spins", "1"]) == 0
    assert clean.read_bytes()[:4] == b"HYPD"
    assert "kept_fraction=" in capsys.readouterr().out


def test_denoise_missing_input(tmp_path):
    output = tmp_path / "clean.pgm"
    assert main(["denoise", "--input", str(tmp_path / "missing.pgm"), "--output", str(output)]) == 3
    assert not output.exists()


def test_denoise_rejects_a_deep_decomposition(tmp_path):
    argv = ["denoise", "--input", "builtin:blobs?n=32", "--output", str(tmp_path / "o.pgm"), "--levels", "9"]
    assert main(argv) == 2


# Test simulate
def test_simulate(capsys):
    argv = ["simulate", "--image", "builtin:blobs?n=32", "--snr", "4", "--methods", "c,h", "--levels", "2"]
    assert main([*argv, "--spins", "1", "--reps", "2"]) == 0
    lines = capsys.readouterr().out.strip().split("\r\n")
    assert lines[0] == "image,method,snr,rep_count,mean_mse,sd_mse,mean_psnr"
    assert [line.split(",")[1] for line in lines[1:]] == ["n", "c", "h"]


def test_simulate_rejects_unknown_method():
    assert main(["simulate", "--image", "builtin:blobs?n=32", "--methods", "c,x"]) == 2


# Test noise-stats
def test_noise_stats_rejects_non_dyadic_side():
    assert main(["noise-stats", "--family", "riesz", "--n", "96"]) == 2


def test_noise_stats(capsys):
    assert main(["noise-stats", "--family", "hct", "--n", "64", "--reps", "2", "--levels", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("family,u,statistic,value,stderr\r\n")
