"""Exact Goldbach-partition counts, their induced distributions, and
empirical diagnostics for the limit laws the counts obey.

The layering is strict: sieve -> partitions -> model -> (stats, limits)
-> figures -> cli.  Everything numeric is exact or floating-point
deterministic; sampling is the only randomized corner and is fully
seeded.
"""

from .errors import CacheError, CapacityError, DegenerateDistributionError
from .limits import (
    IDENTITY_TOL,
    IdentityResidual,
    IdentityResidualReport,
    LambdaGrid,
    RatioRecord,
    asymptotic_ratios,
    check_integrated_identity,
    check_product_identity,
    identity_report,
    laplace,
    laplace_u,
    phi,
)
from .model import (
    KeyedDistribution,
    ScalingConstant,
    dist_Gn,
    dist_Xn,
    dist_Yn,
    dist_Zn,
    expected_value,
    scaling_constant,
    size_bias,
)
from .partitions import (
    PartitionTable,
    build_partition_table,
    count_partitions,
    load_partition_table,
    save_partition_table,
    total_partitions,
    zero_partition_census,
)
from .sieve import (
    PrimeFlags,
    build_prime_flags,
    is_odd_prime,
    load_prime_flags,
    odd_primes,
    save_prime_flags,
)
from .stats import (
    ConvergenceReport,
    ConvergenceRow,
    LimitCdf,
    StepCdf,
    convergence_report,
    convergence_row,
    dist_Gn_over_n,
    exact_cdf,
    ks_distance,
    moment,
    sample,
    write_cdf_plot_data,
)

__version__ = "0.1.0"

__all__ = [
    "CacheError",
    "CapacityError",
    "ConvergenceReport",
    "ConvergenceRow",
    "DegenerateDistributionError",
    "IDENTITY_TOL",
    "IdentityResidual",
    "IdentityResidualReport",
    "KeyedDistribution",
    "LambdaGrid",
    "LimitCdf",
    "PartitionTable",
    "PrimeFlags",
    "RatioRecord",
    "ScalingConstant",
    "StepCdf",
    "asymptotic_ratios",
    "build_partition_table",
    "build_prime_flags",
    "check_integrated_identity",
    "check_product_identity",
    "convergence_report",
    "convergence_row",
    "count_partitions",
    "dist_Gn",
    "dist_Gn_over_n",
    "dist_Xn",
    "dist_Yn",
    "dist_Zn",
    "exact_cdf",
    "expected_value",
    "identity_report",
    "is_odd_prime",
    "ks_distance",
    "laplace",
    "laplace_u",
    "load_partition_table",
    "load_prime_flags",
    "moment",
    "odd_primes",
    "phi",
    "sample",
    "save_partition_table",
    "save_prime_flags",
    "scaling_constant",
    "size_bias",
    "total_partitions",
    "zero_partition_census",
]
