"""Tests for multivariate expansions, bounds, and the envelope check."""

import math

import numpy as np
import pytest

from exptaylor.errors import ValidationError
from exptaylor.expr import parse
from exptaylor.series1d import eval_series, expand_1d, remainder_bound
from exptaylor.seriesnd import (
    BoxDomain,
    convergence_check_nd,
    eval_nd,
    expand_nd,
    multi_index_factorial,
    multi_indices,
    multi_indices_of_degree,
    remainder_bound_nd,
)

LAM = 2j * math.pi


def product_cosine():
    return parse("cos(2*pi*x1) * cos(2*pi*x2)", 2)


# ---- multi-index machinery --------------------------------------------------


def test_multi_indices_two_dims_order_two():
    assert multi_indices(2, 2) == [(0, 0), (1, 0), (0, 1)]


def test_multi_indices_two_dims_order_three():
    # within a degree the earlier axis dominates
    assert multi_indices(2, 3) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_multi_indices_one_dim():
    assert multi_indices(1, 4) == [(0,), (1,), (2,), (3,)]


@pytest.mark.parametrize("n,order", [(1, 6), (2, 5), (3, 5), (4, 4)])
def test_multi_indices_count(n, order):
    assert len(multi_indices(n, order)) == math.comb(order - 1 + n, n)


@pytest.mark.parametrize("n,degree", [(2, 2), (3, 4), (4, 3)])
def test_degree_slice_count(n, degree):
    got = multi_indices_of_degree(n, degree)
    assert len(got) == math.comb(degree + n - 1, n - 1)
    assert all(sum(g) == degree for g in got)


def test_degree_slice_matches_full_list_order():
    full = multi_indices(3, 5)
    sliced = [g for g in full if sum(g) == 3]
    assert sliced == multi_indices_of_degree(3, 3)


def test_multi_index_factorial():
    assert multi_index_factorial((2, 3, 1)) == 12
    assert multi_index_factorial((0, 0)) == 1
    assert multi_index_factorial((5,)) == 120


# ---- box domains -------------------------------------------------------------


def test_box_from_points_sorts_coordinates():
    box = BoxDomain.from_points((0.2, -0.1), (-0.3, 0.4))
    assert box.lo == (-0.3, -0.1)
    assert box.hi == (0.2, 0.4)
    assert box.dims == 2


def test_box_centered():
    box = BoxDomain.centered((1.0, -2.0), 0.25)
    assert box.lo == (0.75, -2.25)
    assert box.hi == (1.25, -1.75)


def test_box_grid_points_one_dim():
    g = BoxDomain.centered((0.0,), 0.5).grid_points(5)
    assert np.allclose(g.ravel(), [-0.5, -0.25, 0.0, 0.25, 0.5])


def test_box_grid_points_shape():
    g = BoxDomain.centered((0.0, 0.0, 0.0), 0.1).grid_points(4)
    assert g.shape == (64, 3)


def test_box_random_points_pins_corners():
    box = BoxDomain.from_points((0.2, -0.1), (-0.3, 0.4))
    pts = box.random_points(40, seed=7)
    assert pts.shape == (40, 2)
    assert np.array_equal(pts[0], box.lo)
    assert np.array_equal(pts[1], box.hi)
    assert np.all(pts >= np.array(box.lo) - 1e-15)
    assert np.all(pts <= np.array(box.hi) + 1e-15)


def test_box_random_points_seed_deterministic():
    box = BoxDomain.centered((0.0, 0.0), 1.0)
    assert np.array_equal(box.random_points(16, seed=3), box.random_points(16, seed=3))


def test_box_validation():
    with pytest.raises(ValidationError):
        BoxDomain(lo=(1.0,), hi=(0.0,))
    with pytest.raises(ValidationError):
        BoxDomain(lo=(0.0, 0.0), hi=(1.0,))
    with pytest.raises(ValidationError):
        BoxDomain.from_points((0.0,), (1.0, 2.0))
    with pytest.raises(ValidationError):
        BoxDomain.centered((0.0,), -0.1)
    with pytest.raises(ValidationError):
        BoxDomain.centered((0.0,), 1.0).grid_points(2)
    with pytest.raises(ValidationError):
        BoxDomain.centered((0.0,), 1.0).random_points(1, seed=0)


# ---- expansion coefficients ---------------------------------------------------


def test_expand_constant():
    e = expand_nd(parse("3", 2), 2, LAM, (0.0, 0.0), 4)
    assert e.coeffs[(0, 0)] == 3
    assert all(c == 0 for g, c in e.coeffs.items() if g != (0, 0))


def test_expand_keys_cover_all_indices():
    e = expand_nd(product_cosine(), 2, LAM, (0.0, 0.0), 6)
    assert sorted(e.coeffs) == sorted(multi_indices(2, 6))


def test_product_coefficient_xy():
    e = expand_nd(parse("x1*x2", 2), 2, LAM, (0.0, 0.0), 3)
    assert e.coeffs[(1, 1)] == pytest.approx(-1.0 / (4 * math.pi**2), rel=1e-14)


def test_separability_product_cosine():
    e2 = expand_nd(product_cosine(), 2, LAM, (0.0, 0.0), 10)
    e1 = expand_1d(parse("cos(2*pi*x)"), LAM, 0.0, 10)
    for (g1, g2), c in e2.coeffs.items():
        ref = e1.coeffs[g1] * e1.coeffs[g2]
        assert c == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_constant_factor_scales_coefficients():
    a = expand_nd(parse("5 * x1 * x2", 2), 2, LAM, (0.0, 0.0), 4)
    b = expand_nd(parse("x1*x2", 2), 2, LAM, (0.0, 0.0), 4)
    for g in a.coeffs:
        assert a.coeffs[g] == pytest.approx(5 * b.coeffs[g], rel=1e-13, abs=1e-15)


def test_center_coefficient_is_function_value():
    e = expand_nd(product_cosine(), 2, LAM, (0.05, -0.03), 4)
    true = math.cos(2 * math.pi * 0.05) * math.cos(2 * math.pi * -0.03)
    assert e.coeffs[(0, 0)] == pytest.approx(true, rel=1e-14)


# ---- evaluation ----------------------------------------------------------------


def test_eval_at_center_returns_c0():
    e = expand_nd(product_cosine(), 2, LAM, (0.1, 0.2), 5)
    assert eval_nd(e, (0.1, 0.2)) == pytest.approx(e.coeffs[(0, 0)], abs=1e-15)


def test_eval_product_cosine_high_order():
    e = expand_nd(product_cosine(), 2, LAM, (0.0, 0.0), 16)
    true = math.cos(0.1 * math.pi) ** 2
    assert abs(eval_nd(e, (0.05, 0.05)) - true) < 1e-5


def test_eval_one_dim_matches_series1d():
    ast = parse("cos(2*pi*x)")
    en = expand_nd(ast, 1, LAM, (0.1,), 8)
    e1 = expand_1d(ast, LAM, 0.1, 8)
    for j in range(8):
        assert en.coeffs[(j,)] == pytest.approx(e1.coeffs[j], abs=1e-12)
    for x in (0.05, 0.18, -0.12):
        assert eval_nd(en, (x,)) == pytest.approx(eval_series(e1, x), abs=1e-12)


def test_eval_complex_point():
    e = expand_nd(parse("exp(x1 + x2)", 2), 2, 1.0, (0.0, 0.0), 3)
    # exp(x1+x2) with lam = 1 terminates on each axis at degree 1
    val = eval_nd(e, (0.3 + 0.1j, -0.2))
    assert val == pytest.approx(np.exp(0.1 + 0.1j), rel=1e-12)


# ---- remainder bound ------------------------------------------------------------


def test_bound_zero_at_center():
    assert remainder_bound_nd(product_cosine(), 2, LAM, (0.1, 0.1), (0.1, 0.1), 4) == 0.0


def test_bound_zero_for_constant():
    assert remainder_bound_nd(parse("3", 2), 2, LAM, (0.0, 0.0), (0.3, 0.2), 4) == 0.0


def test_bound_dominates_measured_error():
    ast = product_cosine()
    e = expand_nd(ast, 2, LAM, (0.0, 0.0), 8)
    measured = abs(eval_nd(e, (0.05, 0.05)) - math.cos(0.1 * math.pi) ** 2)
    bound = remainder_bound_nd(ast, 2, LAM, (0.0, 0.0), (0.05, 0.05), 8, grid=33)
    assert measured <= 1.02 * bound


def test_bound_one_dim_matches_loose_bound():
    ast = parse("cos(2*pi*x)")
    bound_nd = remainder_bound_nd(ast, 1, LAM, (0.1,), (0.25,), 6, grid=513)
    bound_1d = remainder_bound(ast, LAM, 0.1, 0.25, 6, grid=513).bound_loose
    assert bound_nd == pytest.approx(bound_1d, rel=1e-12)


def test_measured_remainder_decays_geometrically():
    ast = product_cosine()
    true = math.cos(0.1 * math.pi) ** 2
    errs = []
    for order in range(2, 13):
        e = expand_nd(ast, 2, LAM, (0.0, 0.0), order)
        errs.append(abs(eval_nd(e, (0.05, 0.05)) - true))
    for a, b in zip(errs, errs[1:]):
        assert b <= 0.95 * a


def test_bound_four_dims_random_sampling():
    src = "cos(2*pi*x1) * cos(2*pi*x2) * cos(2*pi*x3) * cos(2*pi*x4)"
    ast = parse(src, 4)
    x = (0.03, 0.02, -0.02, 0.01)
    e = expand_nd(ast, 4, LAM, (0.0,) * 4, 3)
    true = math.prod(math.cos(2 * math.pi * xi) for xi in x)
    measured = abs(eval_nd(e, x) - true)
    bound = remainder_bound_nd(ast, 4, LAM, (0.0,) * 4, x, 3, grid=9, seed=1)
    assert measured <= 1.02 * bound


# ---- convergence check -----------------------------------------------------------


def test_convergence_product_cosine_envelope():
    rep = convergence_check_nd(product_cosine(), 2, LAM, (0.0, 0.0), 1.0, 0.1, 10)
    assert rep.envelope_holds
    # gamma = 0 attains sup |a| = 1 = A * 0!, so the worst ratio is exactly 1
    assert rep.worst_ratio == pytest.approx(1.0, abs=1e-9)
    assert rep.delta == pytest.approx(math.asin(0.45) / math.pi, rel=1e-12)


def test_convergence_predicted_envelope_formula():
    rep = convergence_check_nd(product_cosine(), 2, LAM, (0.0, 0.0), 1.0, 0.1, 10)
    ns = np.arange(1, 11, dtype=float)
    expected = rep.a_bound * rep.delta * abs(LAM) * ns**2 * 0.9 ** (ns - 1)
    assert np.allclose(rep.predicted_envelope, expected, rtol=1e-12)


def test_convergence_constant_function():
    rep = convergence_check_nd(parse("3", 2), 2, LAM, (0.0, 0.0), 3.0, 0.5, 6)
    assert rep.envelope_holds
    # only gamma = 0 is nonzero: sup = 3 = A * 0!
    assert rep.worst_ratio == pytest.approx(1.0, abs=1e-12)


def test_convergence_tight_A_fails():
    rep = convergence_check_nd(product_cosine(), 2, LAM, (0.0, 0.0), 0.4, 0.1, 8)
    assert not rep.envelope_holds
    assert rep.worst_ratio > 1.0


def test_delta_shrinks_with_alpha():
    a = convergence_check_nd(product_cosine(), 2, LAM, (0.0, 0.0), 1.0, 0.1, 4, alpha=0.5)
    b = convergence_check_nd(product_cosine(), 2, LAM, (0.0, 0.0), 1.0, 0.1, 4, alpha=0.9)
    assert a.delta < b.delta


def test_delta_real_lambda_closed_form():
    rep = convergence_check_nd(parse("cos(2*pi*x)"), 1, 0.5, (0.0,), 200.0, 0.1, 4, alpha=0.9)
    assert rep.delta == pytest.approx(math.log1p(0.9) / 0.5, rel=1e-12)


def test_delta_general_lambda_bisection():
    from exptaylor.series1d import epsilon_sup

    rep = convergence_check_nd(parse("cos(2*pi*x)"), 1, 0.3 + 1.0j, (0.0,), 200.0, 0.1, 4, alpha=0.7)
    assert epsilon_sup(0.3 + 1.0j, rep.delta) == pytest.approx(0.7, abs=1e-9)


# ---- validation -------------------------------------------------------------------


def test_expand_validation():
    ast = product_cosine()
    with pytest.raises(ValidationError):
        expand_nd(ast, 2, LAM, (0.0, 0.0), 0)
    with pytest.raises(ValidationError):
        expand_nd(ast, 2, LAM, (0.0, 0.0), 17)
    with pytest.raises(ValidationError):
        expand_nd(ast, 3, LAM, (0.0, 0.0, 0.0), 4)  # dims mismatch
    with pytest.raises(ValidationError):
        expand_nd(ast, 2, 0.0, (0.0, 0.0), 4)
    with pytest.raises(ValidationError):
        expand_nd(ast, 2, LAM, (0.0,), 4)
    with pytest.raises(ValidationError):
        expand_nd(ast, 0, LAM, (), 4)


def test_eval_validation():
    e = expand_nd(product_cosine(), 2, LAM, (0.0, 0.0), 4)
    with pytest.raises(ValidationError):
        eval_nd(e, (0.1,))


def test_bound_validation():
    ast = product_cosine()
    with pytest.raises(ValidationError):
        remainder_bound_nd(ast, 2, LAM, (0.0, 0.0), (0.1,), 4)
    with pytest.raises(ValidationError):
        remainder_bound_nd(ast, 2, LAM, (0.0, 0.0), (0.1, 0.1), 4, grid=2)


def test_convergence_validation():
    ast = product_cosine()
    with pytest.raises(ValidationError):
        convergence_check_nd(ast, 2, LAM, (0.0, 0.0), 0.0, 0.1, 4)
    with pytest.raises(ValidationError):
        convergence_check_nd(ast, 2, LAM, (0.0, 0.0), 1.0, 0.1, 0)
    with pytest.raises(ValidationError):
        convergence_check_nd(ast, 2, LAM, (0.0, 0.0), 1.0, 0.1, 4, alpha=1.2)
