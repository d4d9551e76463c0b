#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Copyright 2024 Google LLC

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""
"""Orbifold resolution toolkit test suite configuration
   2024 Google
"""
import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "src", "package"))
sys.path.insert(0, os.path.join(ROOT, "src", "cli"))

from orbifoldutils.resolution import Client, ClientOptions  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--seed", action="store", default="20240611")
    parser.addoption("--gh_grid", action="store", default="128")


@pytest.fixture(scope="session")
def seed(request):
    return int(request.config.option.seed)


@pytest.fixture(scope="session")
def gh_grid(request):
    gh_grid_value = request.config.option.gh_grid
    if gh_grid_value is None:
        pytest.skip()
    return int(gh_grid_value)


@pytest.fixture(scope="session")
def client(seed):
    return Client(ClientOptions(seed=seed))


@pytest.fixture(scope="session")
def rng(seed):
    return np.random.default_rng(seed)
