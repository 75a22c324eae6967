import math

import numpy as np
import pytest

from roundmoments import ExplicitSet, FloatSystem, UniformMesh, make_semicircle, make_uniform
from roundmoments.errors import DegenerateFitError, TooManyCellsError
from roundmoments.oracle import (
    centered_moment_of_rounded,
    convergence_slope,
    delta_e_and_v,
    err_weighted_integral,
    mc_rounded_moments,
    offset_sweep,
    rd_moment_integral,
    simulated_sum,
)
from roundmoments.rounding import DETERMINISTIC_SCHEMES, RoundingScheme as RS

ONE = np.ones_like
INT_MESH = UniformMesh(0.5, 0.0)


def test_signed_integral_vanishes_on_aligned_cells():
    got = err_weighted_integral(INT_MESH, RS.NEAREST, ONE, 0.0, 3.0, 1, signed=True)
    assert abs(got.value) < 1e-15


def test_abs_integral_triangle_areas():
    # two triangles of area (1/2)(1/2)^2 per unit cell
    got = err_weighted_integral(INT_MESH, RS.NEAREST, ONE, 0.0, 1.0, 1, signed=False)
    assert got.value == pytest.approx(0.25, rel=1e-14)


def test_stochastic_second_power_symbolic():
    # E|err|^2 on the unit cell integrates x(1-x): exactly 1/6
    got = err_weighted_integral(INT_MESH, RS.STOCHASTIC, ONE, 0.0, 1.0, 2, signed=False)
    assert got.value == pytest.approx(1.0 / 6.0, abs=1e-15)


def test_toward_zero_ramp_integral():
    # |err| = x - floor(x) on positives: each unit cell holds area 1/2
    got = err_weighted_integral(INT_MESH, RS.TOWARD_ZERO, ONE, 0.0, 4.0, 1, signed=False)
    assert got.value == pytest.approx(2.0, rel=1e-14)


def test_zero_straddle_directed_jump():
    # toward zero on the offset mesh: cell [-0.3, 0.7] jumps at zero
    mesh = UniformMesh(0.5, 0.7)
    got = err_weighted_integral(mesh, RS.TOWARD_ZERO, ONE, -0.3, 0.7, 1, signed=False)
    # err = 0.7 - x on [-0.3, 0) and x + 0.3 on [0, 0.7): areas by hand
    want = (0.7 * 0.3 + 0.3 ** 2 / 2) + (0.7 ** 2 / 2 + 0.3 * 0.7)
    assert got.value == pytest.approx(want, rel=1e-13)


def test_quadrature_self_consistency(semicircle):
    mesh = UniformMesh(0.05, 0.017)
    hi = err_weighted_integral(mesh, RS.NEAREST, semicircle, -1.0, 1.0, 2, n_nodes=24)
    lo = err_weighted_integral(mesh, RS.NEAREST, semicircle, -1.0, 1.0, 2, n_nodes=12)
    assert abs(hi.value - lo.value) < 1e-11 * abs(hi.value)
    assert hi.abs_error_estimate < 1e-11 * abs(hi.value)


def test_explicit_set_cells(semicircle):
    grid = ExplicitSet(np.array([-2.0, -0.5, 0.25, 1.0, 2.5]))
    got = err_weighted_integral(grid, RS.NEAREST, ONE, -2.0, 2.5, 1, signed=False)
    want = sum(((b - a) / 2.0) ** 2 for a, b in ((-2, -0.5), (-0.5, 0.25), (0.25, 1.0), (1.0, 2.5)))
    assert got.value == pytest.approx(want, rel=1e-13)


def test_float_grid_oracle_matches_uniform_within_binade():
    # inside one binade the float lattice is a uniform mesh
    fs = FloatSystem(4, -4, 4)
    um = UniformMesh(2.0 ** -5, 0.0)  # spacing 2^-4 anchored at 1.0 works too
    a, b = 1.0, 2.0
    got_f = err_weighted_integral(fs, RS.NEAREST, ONE, a, b, 2, signed=False)
    got_u = err_weighted_integral(um, RS.NEAREST, ONE, a, b, 2, signed=False)
    assert got_f.value == pytest.approx(got_u.value, rel=1e-13)


def test_saturated_tail_contribution():
    fs = FloatSystem(3, -3, 3)  # top = 8
    got = err_weighted_integral(fs, RS.NEAREST, ONE, 8.0, 10.0, 1, signed=False)
    # beyond the top everything clamps to 8: integral of (x - 8) over [8, 10]
    assert got.value == pytest.approx(2.0, rel=1e-13)


def test_rd_moment_integral_identity_grid(semicircle):
    dense = ExplicitSet(np.linspace(-1.5, 1.5, 20_001))
    m1 = rd_moment_integral(dense, RS.NEAREST, semicircle, -1.0, 1.0, 1)
    assert m1.value == pytest.approx(semicircle.mean, abs=1e-7)


def test_delta_e_symmetric_mesh_is_zero(semicircle):
    de, dv = delta_e_and_v(semicircle, UniformMesh(0.1, 0.0), RS.NEAREST)
    assert abs(de.value) < 1e-15
    assert abs(dv.value) < 0.02


def test_delta_v_identity_cross_check(semicircle):
    # V[rd] - V[X] must equal 2 E[(X-mu) err] + E[err^2] - Delta_E^2
    mesh = UniformMesh(0.1, 0.033)
    de, dv = delta_e_and_v(semicircle, mesh, RS.NEAREST)
    a, b = semicircle.effective_range()
    w = lambda x: (x - semicircle.mean) * semicircle.density(x)
    cov = err_weighted_integral(mesh, RS.NEAREST, w, a, b, 1, signed=True).value
    err2 = err_weighted_integral(mesh, RS.NEAREST, semicircle, a, b, 2, signed=False).value
    assert dv.value == pytest.approx(2 * cov + err2 - de.value ** 2, abs=1e-12)


def test_stochastic_delta_e_identically_zero(semicircle):
    de, _ = delta_e_and_v(semicircle, UniformMesh(0.1, 0.033), RS.STOCHASTIC)
    assert abs(de.value) < 1e-15


def test_centered_moment_of_rounded_dense_grid(semicircle):
    dense = ExplicitSet(np.linspace(-1.5, 1.5, 40_001))
    mk = centered_moment_of_rounded(semicircle, dense, RS.NEAREST, 2)
    assert mk.value == pytest.approx(semicircle.variance, abs=1e-7)


def test_mc_identity_grid_delta_e_zero(semicircle):
    dense = ExplicitSet(np.linspace(-1.5, 1.5, 2_000_001))
    mc = mc_rounded_moments(semicircle, dense, RS.NEAREST, 2, 20_000, seed=7)
    assert abs(mc.delta_e.value) <= max(4e-6, mc.delta_e.abs_error_estimate)


def test_mc_symmetric_nearest_delta_e_within_error(semicircle):
    mc = mc_rounded_moments(semicircle, UniformMesh(0.1, 0.0), RS.NEAREST, 2, 200_000, seed=3)
    assert abs(mc.delta_e.value) < mc.delta_e.abs_error_estimate


def test_mc_stochastic_unbiased(semicircle):
    mc = mc_rounded_moments(semicircle, UniformMesh(0.2, 0.07), RS.STOCHASTIC, 2, 200_000, seed=5)
    assert abs(mc.delta_e.value) < mc.delta_e.abs_error_estimate


def test_mc_determinism(semicircle):
    a = mc_rounded_moments(semicircle, UniformMesh(0.1, 0.03), RS.STOCHASTIC, 3, 50_000, seed=11)
    b = mc_rounded_moments(semicircle, UniformMesh(0.1, 0.03), RS.STOCHASTIC, 3, 50_000, seed=11)
    assert a.delta_e.value == b.delta_e.value
    assert a.delta_v.value == b.delta_v.value
    assert [r.value for r in a.raw] == [r.value for r in b.raw]


def test_mc_quadrature_agreement(semicircle):
    rng = np.random.default_rng(17)
    for _ in range(50):
        d = rng.uniform(0.05, 0.2)
        mesh = UniformMesh(d, rng.uniform(0, 2 * d))
        scheme = RS.NEAREST if rng.random() < 0.5 else RS.STOCHASTIC
        de_q, _ = delta_e_and_v(semicircle, mesh, scheme)
        mc = mc_rounded_moments(semicircle, mesh, scheme, 2, 50_000, seed=int(rng.integers(1 << 30)))
        se = mc.delta_e.abs_error_estimate / 4.0
        assert abs(mc.delta_e.value - de_q.value) < 5.0 * se


def test_offset_sweep_rows(semicircle):
    rows = offset_sweep(semicircle, 0.1, 16, RS.NEAREST, check=True)
    assert len(rows) == 16
    assert rows[0].offset == 0.0
    assert abs(rows[0].delta_e) < 1e-14  # symmetric mesh
    for row in rows:
        assert abs(row.delta_e) <= row.bound_a_e + 1e-9
        assert abs(row.delta_v) <= row.bound_a_v + 1e-9


def test_offset_sweep_two_offsets_minimal(semicircle):
    rows = offset_sweep(semicircle, 0.1, 2, RS.NEAREST)
    assert len(rows) == 2


def test_convergence_slope_orders(shifted_semicircle):
    deltas = [2.0 ** -e for e in range(3, 7)]
    fit = convergence_slope(shifted_semicircle, RS.NEAREST, "delta_e", deltas, n_probe=8)
    assert fit.slope >= 1.9
    fit = convergence_slope(shifted_semicircle, RS.TOWARD_ZERO, "delta_e", deltas, n_probe=8)
    assert 0.9 <= fit.slope <= 1.3
    fit = convergence_slope(shifted_semicircle, RS.NEAREST, "abs_err_mean", deltas, n_probe=8)
    assert 0.9 <= fit.slope <= 1.1


def test_convergence_slope_underflow_reports_infinite(shifted_semicircle):
    # stochastic rounding is unbiased pointwise: Delta_E is identically zero
    deltas = [2.0 ** -e for e in range(3, 7)]
    fit = convergence_slope(shifted_semicircle, RS.STOCHASTIC, "delta_e", deltas, n_probe=4)
    assert fit.all_underflow and math.isinf(fit.slope)


def test_convergence_slope_needs_enough_deltas(semicircle):
    with pytest.raises(Exception):
        convergence_slope(semicircle, RS.NEAREST, "delta_e", [0.1, 0.05])


def test_simulated_sum_single_term_exact():
    models = [make_uniform(0.0, 1.0)]
    res = simulated_sum(models, FloatSystem(8, -8, 8), RS.NEAREST, 2000, seed=0)
    assert res.value == 0.0


def test_simulated_sum_grid_aligned_inputs_exact():
    # summands supported on the grid with representable partial sums
    models = [make_uniform(1.0, 3.0) for _ in range(3)]
    fs = FloatSystem(8, -8, 8)

    class Snapped:
        def __init__(self, m):
            self._m = m

        def quantile(self, u):
            from roundmoments.grids import floor_to

            return floor_to(UniformMesh(0.125, 0.0), self._m.quantile(u))

    snapped = [Snapped(m) for m in models]
    res = simulated_sum(snapped, fs, RS.NEAREST, 2000, seed=1)
    assert res.value == 0.0
    assert res.details["overflow_events"] == 0


def test_simulated_sum_counts_overflow():
    models = [make_uniform(3.0, 4.0) for _ in range(4)]
    fs = FloatSystem(4, -4, 3)  # top = 8 < typical sums
    res = simulated_sum(models, fs, RS.NEAREST, 2000, seed=2)
    assert res.details["overflow_events"] > 0


def test_too_many_cells_guard(semicircle):
    with pytest.raises(TooManyCellsError):
        err_weighted_integral(UniformMesh(1e-10, 0.0), RS.NEAREST, ONE, 0.0, 1.0, 1, budget=10_000)
