#  conftest.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run tests that train models to convergence")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long training runs")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
