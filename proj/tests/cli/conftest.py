# Copyright 2026 The GraphIX Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import subprocess
from pathlib import Path

import pytest


def pytest_addoption(parser):
    parser.addoption("--graphix", default=os.environ.get("GRAPHIX_BIN", "graphix"))
    parser.addoption("--schema", default=os.environ.get("GRAPHIX_SCHEMA", ""))


class Cli:
    def __init__(self, binary, cwd):
        self.binary = binary
        self.cwd = Path(cwd)

    def __call__(self, *args, expect=0, env=None):
        full_env = dict(os.environ, SOURCE_DATE_EPOCH="1700000000")
        if env:
            full_env.update(env)
        proc = subprocess.run([self.binary, "--quiet", *map(str, args)], cwd=self.cwd,
                              capture_output=True, text=True, env=full_env)
        if expect is not None:
            assert proc.returncode == expect, (proc.returncode, proc.stdout, proc.stderr)
        return proc


@pytest.fixture
def cli(request, tmp_path):
    return Cli(request.config.getoption("--graphix"), tmp_path)


@pytest.fixture
def schema_path(request):
    return request.config.getoption("--schema")


@pytest.fixture
def trained(cli):
    """Small synthetic graph with a trained two-layer-free checkpoint."""
    cli("synth", "--n-disease", 24, "--n-drug", 24, "--n-gene", 40, "--seed", 5,
        "--out", "g.bin", "--truth", "truth.tsv", "--records", "records.tsv")
    cli("--threads", 1, "train", "--graph", "g.bin", "--seed", 1, "--epochs", 40,
        "--embed-dim", 16, "--out", "ck.bin")
    return cli
