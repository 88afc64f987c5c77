import numpy as np
import pytest

import plunge_lab as pl


@pytest.fixture(scope="session")
def spectrum_cache():
    """Session-wide Nystrom spectra, keyed by (c, n_nodes); default nodes
    when n_nodes is None. The Jacobi solve dominates test runtime, so every
    test shares these."""
    cache = {}

    def get(c, n_nodes=None):
        key = (float(c), n_nodes)
        if key not in cache:
            cache[key] = pl.prolate_spectrum(float(c), n_nodes)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def packing_cache():
    cache = {}

    def get(rounds):
        if rounds not in cache:
            cache[rounds] = pl.covering_packing(rounds)
        return cache[rounds]

    return get


@pytest.fixture(scope="session")
def two_disk_packing():
    return pl.packing_from_disks([(-0.25, 0.0, 0.2), (0.25, 0.0, 0.2)])


@pytest.fixture(scope="session")
def oracle_rule_cache():
    from plunge_lab.fock import default_oracle_rule

    cache = {}

    def get(c):
        if c not in cache:
            cache[c] = default_oracle_rule(c)
        return cache[c]

    return get


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
