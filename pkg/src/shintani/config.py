#!/usr/bin/env python3
"""
Shintani - Configuration

Library defaults. Per-run settings come from the run manifest and CLI flags.
"""

import os


class Config:
    """Library-wide defaults."""

    # p-adic working precision (digits); log/exp series carry guard digits
    DEFAULT_PRECISION = 12
    GUARD_DIGITS = 4

    # Abel-limit oracle guard rails
    ORACLE_MAX_N = 11
    ORACLE_MAX_PN = 9
    ORACLE_MAX_K = 2

    # Certified interval refinement: halvings of the root-isolation width
    MAX_REFINEMENTS = 60
    INITIAL_ROOT_WIDTH = 2 ** -10

    # locate tries unit exponents within this radius of the float estimate
    LOCATE_RADIUS = 2

    # Gamma approximation exponent M' = M + max(GAMMA_EXTRA_DIGITS, M - 1)
    GAMMA_EXTRA_DIGITS = 2

    # Gamma_V sweeps p^(M k) residues: default digits for derivatives, and the cap
    GAMMA_PRECISION = 4
    GAMMA_MAX_RESIDUES = 10_000_000

    # Sum-expression levels above this use residue-class bucketing when possible
    DIRECT_ENUMERATION_LIMIT = 200_000

    # Truncated sums satisfy v_p(S_n - S_(n-1)) >= n - CAUCHY_SLACK
    CAUCHY_SLACK = 2

    WORKERS_ENV = "SHINTANI_WORKERS"

    FIELDS_DIR = "data/fields"
    MANIFESTS_DIR = "data/manifests"


def worker_count() -> int:
    """Worker processes for the parallel hot paths (1 = serial)."""
    raw = os.environ.get(Config.WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
