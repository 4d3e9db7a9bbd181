"""Transform helpers, exact identities, and asymptotic ratio records."""

import csv
import json
import math

import numpy as np
import pytest

from goldbach_lab.limits import (
    IDENTITY_TOL,
    LambdaGrid,
    asymptotic_ratios,
    check_integrated_identity,
    check_product_identity,
    identity_report,
    laplace,
    laplace_u,
    phi,
)
from goldbach_lab.model import dist_Xn, scaling_constant
from goldbach_lab.partitions import build_partition_table
from goldbach_lab.sieve import build_prime_flags


# ---------------------------------------------------------------------------
# transform helpers
# ---------------------------------------------------------------------------

def test_phi_closed_form_values():
    assert phi(1.0) == pytest.approx(1 - 1 / math.e, rel=1e-15)
    assert phi(0.0) == 1.0
    assert phi(math.log(2)) == pytest.approx(1 / (2 * math.log(2)), rel=1e-14)


def test_laplace_u_closed_form_values():
    assert laplace_u(1.0) == pytest.approx(2 * (1 - 2 / math.e), rel=1e-14)
    assert laplace_u(0.0) == 1.0


def test_transforms_reject_negative_argument():
    with pytest.raises(ValueError):
        phi(-0.1)
    with pytest.raises(ValueError):
        laplace_u(-0.1)


@pytest.mark.parametrize("func,threshold", [(phi, 1e-4), (laplace_u, 1e-3)])
def test_series_switch_is_seamless(func, threshold):
    # an infinitesimal straddle isolates the branch jump itself; a wider
    # one would mostly measure the function's own slope
    below = func(threshold * (1 - 1e-12))
    above = func(threshold * (1 + 1e-12))
    assert abs(below - above) <= 1e-12


def test_laplace_u_is_minus_two_phi_prime():
    h = 1e-5
    derivative = (phi(1 + h) - phi(1 - h)) / (2 * h)
    assert abs(laplace_u(1.0) + 2 * derivative) < 1e-6


def test_laplace_of_distribution(table_5):
    xn = dist_Xn(table_5)
    assert laplace(xn, 0.0) == 1.0
    expected = (math.exp(-0.6) + math.exp(-0.8) + math.exp(-1.0)) / 3
    assert laplace(xn, 1.0) == pytest.approx(expected, rel=1e-15)
    with pytest.raises(ValueError):
        laplace(xn, -1.0)


def test_laplace_is_monotone_on_grid(table_1k):
    xn = dist_Xn(table_1k)
    values = [laplace(xn, lam) for lam in (0.0, 0.1, 0.5, 1.0, 5.0, 20.0)]
    assert all(a >= b for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# lambda grid
# ---------------------------------------------------------------------------

def test_lambda_grid_accepts_increasing_positives():
    grid = LambdaGrid(np.array([0.1, 1.0, 10.0]))
    assert grid.values.tolist() == [0.1, 1.0, 10.0]


@pytest.mark.parametrize("values", [
    [],
    [0.0, 1.0],
    [-1.0, 1.0],
    [1.0, 1.0],
    [2.0, 1.0],
    [1.0, np.inf],
])
def test_lambda_grid_rejects_bad_input(values):
    with pytest.raises(ValueError):
        LambdaGrid(np.array(values, dtype=np.float64))


# ---------------------------------------------------------------------------
# exact identities
# ---------------------------------------------------------------------------

def test_product_identity_closed_form_n5(table_5):
    row = check_product_identity(table_5, 1.0)
    b = scaling_constant(5).value
    closed = (1 / b) * (1 / 3) * (
        math.exp(-0.6) + math.exp(-0.8) + 2 * math.exp(-1.0)
    )
    assert row.lhs == pytest.approx(closed, rel=1e-14)
    assert row.rhs == pytest.approx(closed, rel=1e-14)
    assert row.rel_residual < 1e-12


def test_integrated_identity_closed_form_n5(table_5):
    row = check_integrated_identity(table_5, 1.0)
    b = scaling_constant(5).value
    closed = (1 / (3 * b)) * (
        1 * (5 / 3) * -math.expm1(-3 / 5)
        + 1 * (5 / 4) * -math.expm1(-4 / 5)
        + 2 * (5 / 5) * -math.expm1(-1.0)
    )
    assert row.lhs == pytest.approx(closed, rel=1e-14)
    assert row.rel_residual < 1e-12


@pytest.mark.parametrize("n", [5, 100, 1000])
@pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
def test_identities_are_exact(n, lam):
    flags = build_prime_flags(2 * n)
    table = build_partition_table(flags, n)
    assert check_product_identity(table, lam).rel_residual < IDENTITY_TOL
    assert check_integrated_identity(table, lam).rel_residual < IDENTITY_TOL


def test_identity_checks_reject_nonpositive_argument(table_5):
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            check_product_identity(table_5, bad)
        with pytest.raises(ValueError):
            check_integrated_identity(table_5, bad)


def test_identity_report_covers_grid(table_1k):
    grid = LambdaGrid(np.array([0.5, 2.0]))
    report = identity_report(table_1k, grid)
    assert len(report.rows) == 4
    assert {r.identity for r in report.rows} == {"product", "integrated"}
    assert report.max_rel_residual < IDENTITY_TOL


def test_identity_report_exports(tmp_path, table_5):
    report = identity_report(table_5, LambdaGrid(np.array([1.0])))
    csv_path = tmp_path / "residuals.csv"
    json_path = tmp_path / "residuals.json"
    report.to_csv(str(csv_path))
    report.to_json(str(json_path))
    rows = list(csv.reader(csv_path.read_text().splitlines()))
    assert rows[0] == ["n", "identity", "lambda", "lhs", "rhs",
                       "abs_residual", "rel_residual"]
    assert len(rows) == 3
    doc = json.loads(json_path.read_text())
    assert doc[0]["n"] == 5
    assert float(rows[1][3]) == pytest.approx(doc[0]["lhs"], rel=1e-15)


# ---------------------------------------------------------------------------
# asymptotic ratios
# ---------------------------------------------------------------------------

def test_ratio_records_internal_relations(table_5, table_1k):
    records = asymptotic_ratios([table_5, table_1k])
    assert [r.n for r in records] == [5, 1000]
    for r in records:
        assert r.mean_ratio == pytest.approx(r.total_ratio * r.n / (r.n - 2), rel=1e-14)
        assert r.e_zn == pytest.approx(r.mean_ratio / 2, rel=1e-14)


def test_ratio_record_values(table_5, table_1k):
    records = asymptotic_ratios([table_5, table_1k])
    log_n = math.log(1000)
    expected_total_ratio = 26550 / (2 * 1000**2 / log_n**2)
    assert records[1].total == 26550
    assert records[1].total_ratio == pytest.approx(expected_total_ratio, rel=1e-14)


def test_ratios_need_two_increasing_tables(table_5, table_1k):
    with pytest.raises(ValueError):
        asymptotic_ratios([table_1k])
    with pytest.raises(ValueError):
        asymptotic_ratios([table_1k, table_5])
