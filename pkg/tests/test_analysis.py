import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hubbard_renyi import analysis
from hubbard_renyi.analysis import ScalingPoint


def test_default_grid():
    g = analysis.DEFAULT_U_GRID
    assert len(g) == 101 and g[0] == 0.0 and g[-1] == 10.0
    assert g[37] == 3.7


def test_step_count_rounds():
    assert analysis.step_count(10, 0.05, 0.5) == 100
    assert analysis.step_count(0.26, 0.01, 0.1) == 3


def test_swap_route_agrees_with_purity_route():
    grid = (0.0, 1.3, 4.0, 7.5)
    a = analysis.r2_errors(0.1, 2.0, grid, via="purity")
    b = analysis.r2_errors(0.1, 2.0, grid, via="swap")
    assert np.allclose(a, b, atol=1e-12)
    assert a[0] == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        analysis.r2_errors(0.1, 2.0, grid, via="magic")


def test_errors_shrink_for_slower_sweeps():
    grid = tuple(np.linspace(0, 10, 21))
    assert analysis.epsilon_r2(0.05, 3.0, grid) < analysis.epsilon_r2(0.05, 0.75, grid)
    assert analysis.epsilon_psi(0.05, 10.0, grid) < analysis.epsilon_psi(0.2, 10.0, grid)


def test_depth_roughly_doubles_with_tau():
    d1 = analysis.circuit_depth(0.05, 5.0)
    d2 = analysis.circuit_depth(0.05, 10.0)
    assert d2 - 2 * d1 == pytest.approx(0, abs=d1 * 0.05)


@given(slope=st.floats(-4, 4), scale=st.floats(0.01, 100))
def test_loglog_fit_recovers_power_law(slope, scale):
    x = [0.1, 0.3, 1.0, 3.0, 10.0]
    fit = analysis.loglog_fit([ScalingPoint(v, scale * v**slope) for v in x])
    assert fit.slope == pytest.approx(slope, abs=1e-9)
    assert fit.intercept == pytest.approx(np.log(scale), abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0)


def test_loglog_fit_rejects_bad_input():
    with pytest.raises(ValueError):
        analysis.loglog_fit([ScalingPoint(1, 1), ScalingPoint(2, 2)])
    with pytest.raises(ValueError):
        analysis.loglog_fit([ScalingPoint(1, 1), ScalingPoint(2, 0), ScalingPoint(3, 1)])


def test_scan_dispatch():
    pts = analysis.depth_scan("tau", [2.0, 4.0], 0.1)
    assert [p.parameter for p in pts] == [2.0, 4.0]
    with pytest.raises(ValueError):
        analysis.depth_scan("U", [1.0], 0.1)
    with pytest.raises(ValueError):
        analysis.error_scan("eps_r2", "U", [1.0], 0.1)
