"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own algorithms:
primality comes from trial division, pair counts from a plain
convolution, so agreement with the package is evidence rather than
tautology.
"""

import numpy as np
import pytest

from goldbach_lab.partitions import build_partition_table
from goldbach_lab.sieve import build_prime_flags


def trial_division_is_prime(m: int) -> bool:
    """Primality by trial division; independent of the sieve under test."""
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def oracle_odd_prime_flags(limit: int) -> np.ndarray:
    """Odd-prime indicator over slots (m - 3) // 2, via trial division."""
    odds = np.arange(3, limit + 1, 2)
    return np.array([trial_division_is_prime(int(m)) for m in odds], dtype=np.uint8)


def brute_force_q(two_k: int, is_prime) -> int:
    """Q(two_k) by the definition: odd primes p <= q with p + q = two_k."""
    count = 0
    for p in range(3, two_k // 2 + 1, 2):
        q = two_k - p
        if is_prime(p) and is_prime(q):
            count += 1
    return count


@pytest.fixture(scope="session")
def flags_2k():
    return build_prime_flags(2000)


@pytest.fixture(scope="session")
def table_1k(flags_2k):
    return build_partition_table(flags_2k, 1000)


@pytest.fixture(scope="session")
def flags_10():
    return build_prime_flags(10)


@pytest.fixture(scope="session")
def table_5(flags_10):
    return build_partition_table(flags_10, 5)
