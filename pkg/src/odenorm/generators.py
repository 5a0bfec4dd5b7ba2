"""Seeded random instances for property suites.

Every case draws from ``np.random.default_rng([seed, case])`` so a single
case can be regenerated without replaying the ones before it.

Partitions have 1 to 32 cells; function values are log-uniform in
``[1e-3, 1e3]`` with a random sign; exponents are uniform on a range
chosen by the caller (``[1.05, 8]`` for duality, ``[1, 10]`` otherwise).
"""

from __future__ import annotations

import numpy as np

from .function_model import Density, Exponent, Partition, StepFunction

__all__ = [
    "DUALITY_EXPONENTS",
    "GENERAL_EXPONENTS",
    "case_rng",
    "random_partition",
    "random_step",
    "random_exponent",
    "random_density",
    "random_disjoint_family",
    "random_matrix",
]

DUALITY_EXPONENTS = (1.05, 8.0)
GENERAL_EXPONENTS = (1.0, 10.0)
MAX_CELLS = 32


def case_rng(seed, case):
    return np.random.default_rng([int(seed), int(case)])


def random_partition(rng, max_cells=MAX_CELLS):
    n = int(rng.integers(1, max_cells + 1))
    while True:
        inner = np.sort(rng.uniform(0.0, 1.0, n - 1))
        bp = np.concatenate([[0.0], inner, [1.0]])
        if np.all(np.diff(bp) > 0):
            return Partition(bp)


def _log_uniform(rng, lo, hi, size):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def random_step(rng, partition=None, signed=True):
    partition = partition or random_partition(rng)
    vals = _log_uniform(rng, 1e-3, 1e3, partition.n_cells)
    if signed:
        vals *= rng.choice([-1.0, 1.0], partition.n_cells)
    return StepFunction(partition, vals)


def random_exponent(rng, partition=None, bounds=GENERAL_EXPONENTS):
    partition = partition or random_partition(rng)
    return Exponent(partition, rng.uniform(*bounds, partition.n_cells))


def random_density(rng, partition=None, bounds=(0.1, 10.0)):
    partition = partition or random_partition(rng)
    return Density(partition, _log_uniform(rng, *bounds, partition.n_cells))


def random_disjoint_family(rng, partition=None, max_members=8):
    """Up to ``max_members`` step functions with pairwise disjoint supports."""
    partition = partition or random_partition(rng)
    k = int(rng.integers(1, max_members + 1))
    owner = rng.integers(-1, k, partition.n_cells)  # -1 leaves the cell empty
    base = random_step(rng, partition).values
    return [StepFunction(partition, np.where(owner == i, base, 0.0)) for i in range(k)]


def random_matrix(rng, max_dim=8, zero_fraction=0.2):
    """Non-negative matrix with entries in ``[0, 1)``, some exactly zero."""
    shape = tuple(int(s) for s in rng.integers(1, max_dim + 1, 2))
    a = rng.uniform(0.0, 1.0, shape)
    a[rng.uniform(size=shape) < zero_fraction] = 0.0
    return a
