#!/usr/bin/env python3
"""Shared fixtures: the bundled field files and the flagship configurations."""

import pytest

from shintani.field.loader import load_field
from shintani.lseries.sums import LSeriesConfig


@pytest.fixture(scope="session")
def qsqrt5():
    return load_field("qsqrt5")


@pytest.fixture(scope="session")
def qsqrt2():
    return load_field("qsqrt2")


@pytest.fixture(scope="session")
def rationals():
    return load_field("rationals")


@pytest.fixture(scope="session")
def flagship_cone(qsqrt5):
    return qsqrt5.decomposition.cones[0]


@pytest.fixture(scope="session")
def sqrt5_cn(qsqrt5):
    return qsqrt5.cn("sqrt5")


@pytest.fixture(scope="session")
def sqrt5_chi(qsqrt5, sqrt5_cn):
    """The quadratic character mod (sqrt5)."""
    return qsqrt5.character(sqrt5_cn, 1)


@pytest.fixture(scope="session")
def flagship_chi_config(qsqrt5, sqrt5_cn, sqrt5_chi):
    return LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, chi=sqrt5_chi)
