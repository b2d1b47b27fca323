"""Smoke test of the grsklab Python bindings.

Run after installing the extension:

    pip install --no-build-isolation ./crates/grsklab-py
    python -m pytest python/smoke_test.py
"""

import math

import pytest

import grsklab_py as g


def test_grsk_of_all_ones():
    out = g.grsk([[1.0, 1.0], [1.0, 1.0]])
    assert out[1][1] == pytest.approx(2.0)
    assert g.energy(out) == pytest.approx(4.0)
    row_type, col_type = g.type_vectors(out)
    assert row_type == pytest.approx([1.0, 1.0])
    assert col_type == pytest.approx([1.0, 1.0])


def test_corner_entries_are_partition_functions():
    w = [[0.5, 2.0, 1.5], [3.0, 0.25, 1.0], [1.2, 0.7, 2.5]]
    out = g.grsk(w)
    assert out[2][2] == pytest.approx(g.partition_function(w, 3, 3), rel=1e-12)
    assert g.gpng(w)[2][2] == pytest.approx(out[2][2], rel=1e-12)


def test_tropical_corner_is_last_passage():
    w = [[0.5, 2.0], [3.0, 0.25], [1.2, 0.7]]
    assert g.grsk(w, tropical=True)[2][1] == pytest.approx(g.last_passage(w, 3, 2))


def test_polygonal_and_triangular_shapes():
    corners = [(1, 3), (2, 2), (3, 1)]
    w = g.sample_array(corners, g.ParameterSet.homogeneous(3, 3, 2.0), 5)
    assert [len(r) for r in w] == [3, 2, 1]
    out = g.grsk(w, corners=corners)
    for (m, n) in corners:
        assert out[m - 1][n - 1] == pytest.approx(g.partition_function(w, m, n, corners=corners), rel=1e-12)
    tri = g.gpng_triangular(w)
    assert [len(r) for r in tri] == [3, 2, 1]


def test_bad_input_raises_validation_error():
    with pytest.raises(g.ValidationError):
        g.grsk([[1.0, -1.0]])
    with pytest.raises(ValueError):
        g.ParameterSet.homogeneous(2, 2, -1.0)
    with pytest.raises(g.ValidationError):
        g.laplace1(1, 2, 1.0, g.ParameterSet.homogeneous(2, 2, 1.0))


def test_one_point_contour_fredholm_and_monte_carlo_agree():
    p = g.ParameterSet.homogeneous(2, 2, 1.5)
    c = g.laplace1(2, 2, 1.0, p)
    f = g.fredholm(2, 2, 1.0, p)
    mc = g.mc_laplace([(2, 2)], [1.0], p, samples=100_000, seed=1)
    assert 0.0 < c.value < 1.0
    assert float(c) == c.value
    assert f.value == pytest.approx(c.value, abs=1e-8)
    assert len(f.terms) == 3
    assert abs(c.value - mc.mean) < 4 * mc.stderr + 3 * c.error


def test_monte_carlo_is_seeded():
    p = g.ParameterSet.homogeneous(1, 1, 1.0)
    a = g.mc_laplace([(1, 1)], [1.0], p, samples=5000, seed=9)
    b = g.mc_laplace([(1, 1)], [1.0], p, samples=5000, seed=9)
    assert (a.mean, a.stderr, a.n, a.seed) == (b.mean, b.stderr, 5000, 9)


def test_single_cell_laplace_is_exact():
    # Z_{1,1} = 1/Gamma(gamma, 1), so E[exp(-u Z)] = 2 u^{gamma/2} K_gamma(2 sqrt u) / Gamma(gamma).
    # For gamma = 1/2 this is exp(-2 sqrt u).
    p = g.ParameterSet([0.0], [0.5])
    assert g.laplace1(1, 1, 1.0, p).value == pytest.approx(math.exp(-2.0), abs=1e-8)


def test_two_point_formulas():
    p = g.ParameterSet.homogeneous(2, 2, 1.0)
    q = g.Quadrature(half_length=10.0)
    assert q.line_nodes > 0
    a = g.laplace2_case_a((1, 2), (2, 1), 0.5, 0.5, p, quadrature=q)
    assert 0.0 < a.value < 1.0
    p4 = g.ParameterSet.homogeneous(2, 4, 1.0)
    b = g.laplace2_case_b((1, 4), (2, 3), 0.3, 0.3, p4)
    assert 0.0 < b.value < 1.0


def test_airy_and_special_functions():
    tw = g.airy_one_point(-1.0)
    assert tw.value == pytest.approx(g.tracy_widom_f2(-1.0), abs=1e-6)
    two = g.airy_two_point(0.0, 1.0, -1.0, 0.5, order=2)
    assert len(two.partial_sums) == 3
    assert 0.0 < two.value <= tw.value
    lim = g.scaled_airy_limit(0.5, 0.5, 0.0, 0.0, 1.0, order=1)
    assert 0.0 < lim.value < 1.0
    assert g.airy_ai(0.0) == pytest.approx(0.3550280538878172, rel=1e-12)
    assert g.log_gamma(complex(5.0, 0.0)).real == pytest.approx(math.log(24.0), rel=1e-13)
    assert g.digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-12)
