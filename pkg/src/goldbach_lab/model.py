"""Finite-n random variables built on a partition table.

Every distribution here is keyed by k in (2, n]: a key, a real value
attached to the key, and a probability.  Keeping the key explicit (rather
than collapsing to a bare histogram of values) is what lets the exact
identity checks couple two distributions sample-point by sample-point.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistributionError
from .partitions import PartitionTable

PROB_TOL = 1e-12


@dataclass(frozen=True)
class KeyedDistribution:
    """A finite distribution over keys with a value per key.

    Attributes:
        name: Short label ("Yn", "Gn", ...); carried into exports.
        n: Parameter of the generating table.
        keys: int64 keys, pairwise distinct.
        values: float64 value of the variable at each key.
        probs: float64 probabilities, non-negative, summing to 1 within
            PROB_TOL.
    """

    name: str
    n: int
    keys: np.ndarray
    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        if not (len(self.keys) == len(self.values) == len(self.probs)):
            raise ValueError("keys, values and probs must have equal length")
        if len(self.keys) == 0:
            raise ValueError("distribution must have at least one key")
        if len(np.unique(self.keys)) != len(self.keys):
            raise ValueError("keys must be pairwise distinct")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")
        if not np.all(np.isfinite(self.probs)) or np.any(self.probs < 0):
            raise ValueError("probs must be finite and non-negative")
        total = float(self.probs.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probs sum to {total!r}, expected 1 within {PROB_TOL}")

    def to_csv(self, path: str) -> None:
        """Write ``key,value,prob`` rows after a labelled comment header."""
        with open(path, "w", newline="") as fh:
            fh.write(f"# distribution={self.name} n={self.n}\n")
            writer = csv.writer(fh)
            writer.writerow(["key", "value", "prob"])
            for k, v, p in zip(self.keys, self.values, self.probs):
                writer.writerow([int(k), repr(float(v)), repr(float(p))])

    def to_json(self, path: str) -> None:
        """Write the full distribution as one JSON object."""
        doc = {
            "distribution": self.name,
            "n": self.n,
            "keys": [int(k) for k in self.keys],
            "values": [float(v) for v in self.values],
            "probs": [float(p) for p in self.probs],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


@dataclass(frozen=True)
class ScalingConstant:
    """The normalisation b_n = 4n / (ln n)^2 used by the Zn variable."""

    n: int
    value: float


def scaling_constant(n: int) -> ScalingConstant:
    """b_n = 4n / (ln n)^2 (natural logarithm).

    Raises:
        ValueError: n <= 2 (the scaling is undefined at ln(1) = 0 and
            meaningless below the first key).
    """
    if n <= 2:
        raise ValueError(f"scaling constant needs n > 2, got {n}")
    log_n = math.log(n)
    return ScalingConstant(n=n, value=4.0 * n / (log_n * log_n))


def _uniform_probs(table: PartitionTable) -> np.ndarray:
    m = table.n - 2
    return np.full(m, 1.0 / m)


def _keys(table: PartitionTable) -> np.ndarray:
    return np.arange(3, table.n + 1, dtype=np.int64)


def dist_Yn(table: PartitionTable) -> KeyedDistribution:
    """Yn: the partition count Q(2k) at a key k drawn uniformly from (2, n]."""
    return KeyedDistribution(
        name="Yn",
        n=table.n,
        keys=_keys(table),
        values=table.q.astype(np.float64),
        probs=_uniform_probs(table),
    )


def dist_Gn(table: PartitionTable) -> KeyedDistribution:
    """Gn: the even number 2k of a partition drawn uniformly from all partitions.

    Each key k carries probability Q(2k) / total and value 2k: picking a
    partition uniformly and reporting its even sum weights every even
    number by how many partitions it owns.

    Raises:
        DegenerateDistributionError: the table has no partitions at all.
    """
    if table.total == 0:
        raise DegenerateDistributionError(
            f"no partitions up to n={table.n}; Gn is undefined"
        )
    keys = _keys(table)
    return KeyedDistribution(
        name="Gn",
        n=table.n,
        keys=keys,
        values=(2 * keys).astype(np.float64),
        probs=table.q / table.total,
    )


def dist_Xn(table: PartitionTable) -> KeyedDistribution:
    """Xn: the normalised key k / n at a uniform key."""
    keys = _keys(table)
    return KeyedDistribution(
        name="Xn",
        n=table.n,
        keys=keys,
        values=keys / table.n,
        probs=_uniform_probs(table),
    )


def dist_Zn(table: PartitionTable) -> KeyedDistribution:
    """Zn: the rescaled count Q(2k) / b_n at a uniform key."""
    b_n = scaling_constant(table.n).value
    return KeyedDistribution(
        name="Zn",
        n=table.n,
        keys=_keys(table),
        values=table.q / b_n,
        probs=_uniform_probs(table),
    )


def expected_value(dist: KeyedDistribution) -> float:
    """E of the distribution's value under its probabilities."""
    return float(np.dot(dist.probs, dist.values))


def size_bias(dist: KeyedDistribution) -> KeyedDistribution:
    """Reweight each key by its value: prob'(k) = value(k) prob(k) / mean.

    Keys and values are untouched; only the probabilities change.  The
    result is the size-biased companion of the input.

    Raises:
        ValueError: any value is negative (size-biasing needs a
            non-negative variable).
        DegenerateDistributionError: the mean is zero, so the reweighting
            divides by zero mass.
    """
    if np.any(dist.values < 0):
        raise ValueError(f"size bias of {dist.name} needs non-negative values")
    mean = float(np.dot(dist.probs, dist.values))
    if mean == 0.0:
        raise DegenerateDistributionError(
            f"{dist.name} has zero mean; size bias is undefined"
        )
    probs = dist.values * dist.probs / mean
    # Guard the sum against accumulated rounding before revalidation.
    probs = probs / probs.sum()
    return KeyedDistribution(
        name=f"{dist.name}*",
        n=dist.n,
        keys=dist.keys,
        values=dist.values,
        probs=probs,
    )
