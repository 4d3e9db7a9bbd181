"""Laplace transforms, exact finite-n identities, and limiting ratios.

Two identities tie the rescaled-count variable to the size-biased even
number at every finite n, with no limit taken:

    product:     E(Zn e^{-lam Xn})            = E(Zn) E(e^{-lam Gn/n})
    integrated:  E((Zn/Xn)(1 - e^{-s Xn}))    = E(Zn) E((1 - e^{-s Gn/n})/(Gn/n))

Both hold exactly because every term on either side is a finite sum over
the same keys k; checking them is a strong end-to-end test of the whole
table/model stack, so the residual tolerance is set brutally low.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .model import KeyedDistribution, dist_Zn, expected_value, scaling_constant
from .partitions import PartitionTable
from .stats import dist_Gn_over_n

# Relative residual above this is treated as an implementation fault.
IDENTITY_TOL = 1e-10

# Switch to the series below these arguments, where the direct form cancels.
_PHI_TAYLOR_BELOW = 1e-4
_LAPLACE_U_TAYLOR_BELOW = 1e-3


@dataclass(frozen=True)
class LambdaGrid:
    """A strictly increasing grid of positive transform arguments."""

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or len(vals) == 0:
            raise ValueError("lambda grid must be a non-empty 1-d array")
        if not np.all(np.isfinite(vals)):
            raise ValueError("lambda grid must be finite")
        if np.any(vals <= 0):
            raise ValueError("lambda grid must be strictly positive")
        if np.any(np.diff(vals) <= 0):
            raise ValueError("lambda grid must be strictly increasing")
        object.__setattr__(self, "values", vals)


def laplace(dist: KeyedDistribution, lam: float) -> float:
    """E(e^{-lam V}) for the distribution's value V.

    Raises:
        ValueError: lam < 0.
    """
    if lam < 0:
        raise ValueError(f"transform argument must be >= 0, got {lam}")
    if lam == 0:
        return 1.0
    return float(np.dot(dist.probs, np.exp(-lam * dist.values)))


def phi(lam: float) -> float:
    """(1 - e^{-lam}) / lam, the Laplace transform of a uniform variable.

    Continuous at 0 with phi(0) = 1.  Uses expm1 for the direct form and
    a four-term series for tiny arguments.

    Raises:
        ValueError: lam < 0.
    """
    if lam < 0:
        raise ValueError(f"transform argument must be >= 0, got {lam}")
    if lam < _PHI_TAYLOR_BELOW:
        return 1.0 - lam / 2.0 + lam * lam / 6.0 - lam ** 3 / 24.0
    return -math.expm1(-lam) / lam


def laplace_u(lam: float) -> float:
    """Laplace transform of the larger of two independent uniforms.

    Direct form 2 (1 - e^{-lam} - lam e^{-lam}) / lam^2, equal to
    -2 phi'(lam), evaluated through expm1 as 2 (u (1 + lam) - lam) / lam^2
    with u = 1 - e^{-lam} so the cancellation costs one order in lam, not
    two; series 1 - 2 lam / 3 + lam^2 / 4 - lam^3 / 15 below the switch
    point, which sits higher than phi's for the same reason.

    Raises:
        ValueError: lam < 0.
    """
    if lam < 0:
        raise ValueError(f"transform argument must be >= 0, got {lam}")
    if lam < _LAPLACE_U_TAYLOR_BELOW:
        return 1.0 - 2.0 * lam / 3.0 + lam * lam / 4.0 - lam ** 3 / 15.0
    u = -math.expm1(-lam)
    # grouped so the cancelling pair (u - lam) subtracts exactly
    return 2.0 * ((u - lam) + u * lam) / (lam * lam)


@dataclass(frozen=True)
class IdentityResidual:
    """One identity evaluation at one transform argument."""

    n: int
    identity: str
    lam: float
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float


@dataclass(frozen=True)
class IdentityResidualReport:
    """All residuals from an identity sweep over a grid."""

    rows: tuple[IdentityResidual, ...]

    @property
    def max_rel_residual(self) -> float:
        return max(row.rel_residual for row in self.rows)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["n", "identity", "lambda", "lhs", "rhs", "abs_residual", "rel_residual"]
            )
            for r in self.rows:
                writer.writerow(
                    [r.n, r.identity, repr(r.lam), repr(r.lhs), repr(r.rhs),
                     repr(r.abs_residual), repr(r.rel_residual)]
                )

    def to_json(self, path: str) -> None:
        doc = [
            {
                "n": r.n,
                "identity": r.identity,
                "lambda": r.lam,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "abs_residual": r.abs_residual,
                "rel_residual": r.rel_residual,
            }
            for r in self.rows
        ]
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


def _residual(n: int, identity: str, lam: float, lhs: float, rhs: float) -> IdentityResidual:
    abs_res = abs(lhs - rhs)
    rel_res = abs_res / max(abs(lhs), abs(rhs), 1e-300)
    return IdentityResidual(
        n=n, identity=identity, lam=lam, lhs=lhs, rhs=rhs,
        abs_residual=abs_res, rel_residual=rel_res,
    )


def check_product_identity(table: PartitionTable, lam: float) -> IdentityResidual:
    """E(Zn e^{-lam Xn}) against E(Zn) E(e^{-lam Gn/n}) at one argument.

    The left side is a joint expectation over keys (Zn and Xn read off
    the same key); the right side goes through the size-biased
    distribution, so the two sides exercise genuinely different code
    paths.  The identity is algebraic at every finite n — the residual
    measures floating-point noise only.

    Raises:
        ValueError: lam <= 0.
    """
    if lam <= 0:
        raise ValueError(f"identity check needs a positive argument, got {lam}")
    zn = dist_Zn(table)
    gn_over_n = dist_Gn_over_n(table)
    x = np.arange(3, table.n + 1, dtype=np.float64) / table.n
    lhs = float(np.dot(zn.probs, zn.values * np.exp(-lam * x)))
    rhs = expected_value(zn) * laplace(gn_over_n, lam)
    return _residual(table.n, "product", lam, lhs, rhs)


def check_integrated_identity(table: PartitionTable, s: float) -> IdentityResidual:
    """E((Zn/Xn)(1 - e^{-s Xn})) against E(Zn) E((1 - e^{-s Gn/n})/(Gn/n)).

    The left side divides out Xn directly with expm1; the right side
    reuses the phi helper through (1 - e^{-s g})/g = s phi(s g).  Both
    divisions are safe: every Xn value is >= 3/n and every Gn/n value is
    >= 3/n.

    Raises:
        ValueError: s <= 0.
    """
    if s <= 0:
        raise ValueError(f"identity check needs a positive argument, got {s}")
    zn = dist_Zn(table)
    gn_over_n = dist_Gn_over_n(table)
    x = np.arange(3, table.n + 1, dtype=np.float64) / table.n
    g = gn_over_n.values
    lhs = float(np.dot(zn.probs, zn.values / x * (-np.expm1(-s * x))))
    phi_sg = np.array([phi(float(v)) for v in s * g])
    rhs = expected_value(zn) * float(np.dot(gn_over_n.probs, s * phi_sg))
    return _residual(table.n, "integrated", s, lhs, rhs)


def identity_report(table: PartitionTable, grid: LambdaGrid) -> IdentityResidualReport:
    """Both identities evaluated at every grid argument, one report."""
    rows = []
    for lam in grid.values:
        rows.append(check_product_identity(table, float(lam)))
    for s in grid.values:
        rows.append(check_integrated_identity(table, float(s)))
    return IdentityResidualReport(rows=tuple(rows))


@dataclass(frozen=True)
class RatioRecord:
    """Measured-over-claimed ratios for the counting asymptotics at one n.

    total_ratio compares the partition grand total to 2 n^2 / (ln n)^2;
    mean_ratio compares E(Yn) to 2 n / (ln n)^2; e_zn is E(Zn), whose
    claimed limit is 1/2.
    """

    n: int
    total: int
    total_ratio: float
    mean_ratio: float
    e_zn: float


def asymptotic_ratios(tables: list[PartitionTable]) -> list[RatioRecord]:
    """Ratio records for a run of tables at strictly increasing n.

    Raises:
        ValueError: fewer than two tables, or n not strictly increasing.
    """
    if len(tables) < 2:
        raise ValueError("need at least two tables to trend the ratios")
    ns = [t.n for t in tables]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"table sizes must be strictly increasing, got {ns}")
    records = []
    for t in tables:
        log_n = math.log(t.n)
        claimed_total = 2.0 * t.n * t.n / (log_n * log_n)
        mean = t.total / (t.n - 2)
        claimed_mean = 2.0 * t.n / (log_n * log_n)
        e_zn = mean / scaling_constant(t.n).value
        records.append(
            RatioRecord(
                n=t.n,
                total=t.total,
                total_ratio=t.total / claimed_total,
                mean_ratio=mean / claimed_mean,
                e_zn=e_zn,
            )
        )
    return records
