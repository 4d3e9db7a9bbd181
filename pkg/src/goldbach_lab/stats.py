"""Empirical distribution tools: exact CDFs, KS distances, moments, sampling.

The convergence story is told by comparing exact step CDFs at finite n
against two continuous reference laws: the uniform on [0, 1] and the
larger of two independent uniforms (CDF x^2 on [0, 1]).
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass

import numpy as np

from .model import KeyedDistribution, dist_Gn, dist_Zn
from .partitions import PartitionTable, zero_partition_census

CDF_TOL = 1e-12


class LimitCdf(enum.Enum):
    """Continuous reference laws used in KS comparisons."""

    UNIFORM01 = "uniform01"
    MAX_OF_TWO_UNIFORMS = "max_of_two_uniforms"

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """CDF values at x (vectorised)."""
        clipped = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        if self is LimitCdf.UNIFORM01:
            return clipped
        return clipped * clipped

    def moment(self, r: int) -> float:
        """r-th raw moment of the law.

        Raises:
            ValueError: r < 1.
        """
        if r < 1:
            raise ValueError(f"moment order must be >= 1, got {r}")
        if self is LimitCdf.UNIFORM01:
            return 1.0 / (r + 1)
        return 2.0 / (r + 2)


@dataclass(frozen=True)
class StepCdf:
    """A right-continuous step CDF given by its jump points.

    Attributes:
        xs: strictly increasing jump locations.
        cdf: CDF value at and after each jump; non-decreasing, ending at
            1 within CDF_TOL.
    """

    xs: np.ndarray
    cdf: np.ndarray

    def __post_init__(self) -> None:
        if len(self.xs) != len(self.cdf) or len(self.xs) == 0:
            raise ValueError("xs and cdf must be non-empty and equally long")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("jump locations must be strictly increasing")
        if np.any(np.diff(self.cdf) < 0):
            raise ValueError("cdf values must be non-decreasing")
        if abs(float(self.cdf[-1]) - 1.0) > CDF_TOL:
            raise ValueError(f"cdf must end at 1, got {float(self.cdf[-1])!r}")

    def left_limits(self) -> np.ndarray:
        """CDF values just before each jump."""
        return np.concatenate(([0.0], self.cdf[:-1]))


def exact_cdf(dist: KeyedDistribution) -> StepCdf:
    """Step CDF of the distribution's value, aggregating ties exactly."""
    order = np.argsort(dist.values, kind="stable")
    vals = dist.values[order]
    probs = dist.probs[order]
    xs, starts = np.unique(vals, return_index=True)
    mass = np.add.reduceat(probs, starts)
    cdf = np.cumsum(mass)
    # Pin the final level to exactly 1 (probs already sum there within
    # tolerance); KS sup terms at the top jump stay clean.
    cdf /= cdf[-1]
    return StepCdf(xs=xs, cdf=cdf)


def ks_distance(step: StepCdf, law: LimitCdf) -> float:
    """sup_x |F_n(x) - L(x)| for a step CDF against a continuous law.

    The supremum over all real x is attained at a jump, approached from
    the left or sat on from the right, so both one-sided gaps are taken
    at every jump.
    """
    lx = law.evaluate(step.xs)
    upper = np.abs(step.cdf - lx)
    lower = np.abs(step.left_limits() - lx)
    return float(max(upper.max(), lower.max()))


def dist_Gn_over_n(table: PartitionTable) -> KeyedDistribution:
    """The size-biased even number rescaled into (0, 1].

    The chosen even number 2k, divided by its largest possible value 2n,
    is k/n; this is the scale on which the comparison against the
    max-of-two-uniforms law lives.
    """
    gn = dist_Gn(table)
    return KeyedDistribution(
        name="Gn_over_n",
        n=gn.n,
        keys=gn.keys,
        values=gn.keys / gn.n,
        probs=gn.probs,
    )


def moment(dist: KeyedDistribution, r: int) -> float:
    """E(V^r) of the distribution's value.

    Raises:
        ValueError: r < 1.
    """
    if r < 1:
        raise ValueError(f"moment order must be >= 1, got {r}")
    return float(np.dot(dist.probs, dist.values ** r))


def sample(dist: KeyedDistribution, seed: int, count: int) -> np.ndarray:
    """Draw ``count`` values by inverse-CDF over the keys.

    Deterministic for a fixed seed.

    Raises:
        ValueError: count < 0.
    """
    if count < 0:
        raise ValueError(f"sample count must be >= 0, got {count}")
    rng = np.random.default_rng(seed)
    cum = np.cumsum(dist.probs)
    cum[-1] = 1.0
    idx = np.searchsorted(cum, rng.random(count), side="right")
    idx = np.minimum(idx, len(dist.values) - 1)
    return dist.values[idx]


@dataclass(frozen=True)
class ConvergenceRow:
    """Distance-to-limit measurements at one table size."""

    n: int
    ks_zn_vs_uniform: float
    ks_gn_vs_maxunif: float
    moment_gap_r1: float
    moment_gap_r2: float
    moment_gap_r3: float
    zero_count: int


@dataclass(frozen=True)
class ConvergenceReport:
    """Convergence measurements across strictly increasing table sizes."""

    rows: tuple[ConvergenceRow, ...]

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["n", "ks_zn_vs_uniform", "ks_gn_vs_maxunif",
                 "moment_gap_r1", "moment_gap_r2", "moment_gap_r3", "zero_count"]
            )
            for r in self.rows:
                writer.writerow(
                    [r.n, repr(r.ks_zn_vs_uniform), repr(r.ks_gn_vs_maxunif),
                     repr(r.moment_gap_r1), repr(r.moment_gap_r2),
                     repr(r.moment_gap_r3), r.zero_count]
                )

    def to_json(self, path: str) -> None:
        doc = [
            {
                "n": r.n,
                "ks_zn_vs_uniform": r.ks_zn_vs_uniform,
                "ks_gn_vs_maxunif": r.ks_gn_vs_maxunif,
                "moment_gap_r1": r.moment_gap_r1,
                "moment_gap_r2": r.moment_gap_r2,
                "moment_gap_r3": r.moment_gap_r3,
                "zero_count": r.zero_count,
            }
            for r in self.rows
        ]
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


def convergence_row(table: PartitionTable) -> ConvergenceRow:
    """All convergence measurements for a single table."""
    zn_cdf = exact_cdf(dist_Zn(table))
    g = dist_Gn_over_n(table)
    g_cdf = exact_cdf(g)
    gaps = [abs(moment(g, r) - LimitCdf.MAX_OF_TWO_UNIFORMS.moment(r)) for r in (1, 2, 3)]
    return ConvergenceRow(
        n=table.n,
        ks_zn_vs_uniform=ks_distance(zn_cdf, LimitCdf.UNIFORM01),
        ks_gn_vs_maxunif=ks_distance(g_cdf, LimitCdf.MAX_OF_TWO_UNIFORMS),
        moment_gap_r1=gaps[0],
        moment_gap_r2=gaps[1],
        moment_gap_r3=gaps[2],
        zero_count=len(zero_partition_census(table)),
    )


def convergence_report(tables: list[PartitionTable]) -> ConvergenceReport:
    """Convergence rows for strictly increasing table sizes.

    Raises:
        ValueError: empty input or n not strictly increasing.
    """
    if not tables:
        raise ValueError("need at least one table")
    ns = [t.n for t in tables]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"table sizes must be strictly increasing, got {ns}")
    return ConvergenceReport(rows=tuple(convergence_row(t) for t in tables))


def write_cdf_plot_data(step: StepCdf, law: LimitCdf, path: str) -> None:
    """Plain columnar CDF comparison: x, the step CDF, the reference law."""
    lx = law.evaluate(step.xs)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "f_n", "limit"])
        for x, f, l in zip(step.xs, step.cdf, lx):
            writer.writerow([repr(float(x)), repr(float(f)), repr(float(l))])
