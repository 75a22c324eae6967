"""Brute-force oracles the bounds must dominate.

Everything here works directly from grid geometry: integration pieces are
cut at grid points and at the error function's breakpoints (the cell
midpoint under nearest rounding, zero for the directed schemes), where the
error is linear, so fixed-order Gauss panels integrate it essentially
exactly.  Stochastic rounding replaces the error powers by their per-point
expectations.  Nothing in this module calls the bound engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .distributions import DensityModel
from .errors import DegenerateFitError, PreconditionError, RoundMomentsError
from .grids import CELL_BUDGET, FloatSystem, Grid, UniformMesh
from .quadrature import gauss_legendre_nodes
from .rounding import RoundingScheme, round_value, scheme_eps_delta

from .bounds import mean_and_variance_diff_bounds  # tier bounds for sweep rows


class BoundViolationError(RoundMomentsError):
    """An oracle value exceeded the bound that claims to dominate it."""


@dataclass(frozen=True)
class OracleResult:
    value: float
    abs_error_estimate: float
    method: str  # "per_cell_quadrature" | "monte_carlo" | "closed_form"
    details: dict = field(default_factory=dict)


def _weight_callable(model_or_weight) -> Callable:
    if hasattr(model_or_weight, "density"):
        return model_or_weight.density
    return model_or_weight


def _edge_refine(edges: np.ndarray, a: float, b: float, levels: int = 14) -> np.ndarray:
    """Geometrically subdivide the outermost pieces toward a and b.

    Densities often lose smoothness exactly at their support edges (square
    root onsets, jumps); grading the end pieces keeps fixed-order Gauss
    panels at full accuracy there.
    """
    if edges.size < 2:
        return edges
    extra = []
    w = edges[1] - edges[0]
    extra.extend(a + w * 3.0 ** (-j) for j in range(1, levels))
    w = edges[-1] - edges[-2]
    extra.extend(b - w * 3.0 ** (-j) for j in range(1, levels))
    return np.unique(np.concatenate([edges, np.asarray(extra)]))


def _pieces(grid: Grid, scheme: RoundingScheme, a: float, b: float, budget: int):
    """Integration pieces [lo, hi] with their enclosing cells, split so the
    error function is a single linear branch on each piece."""
    pts = grid.points_in(a, b, budget)
    inner = pts[(pts > a) & (pts < b)]
    edges = np.concatenate([[a], inner, [b]])
    edges = _edge_refine(edges, a, b)
    lo_p, hi_p = edges[:-1], edges[1:]
    keep = hi_p - lo_p > 0.0
    lo_p, hi_p = lo_p[keep], hi_p[keep]
    mids = 0.5 * (lo_p + hi_p)
    c_lo, c_hi = grid.neighbors(mids)

    if scheme is RoundingScheme.NEAREST:
        bp = 0.5 * (c_lo + c_hi)
    elif scheme is RoundingScheme.STOCHASTIC:
        bp = None  # expected error powers are smooth inside a cell
    else:
        bp = np.zeros_like(lo_p)
    if bp is not None:
        inside = (bp > lo_p) & (bp < hi_p)
        if np.any(inside):
            lo_p = np.concatenate([lo_p, bp[inside]])
            hi_p = np.concatenate([np.where(inside, bp, hi_p), hi_p[inside]])
            c_lo = np.concatenate([c_lo, c_lo[inside]])
            c_hi = np.concatenate([c_hi, c_hi[inside]])
    return lo_p, hi_p, c_lo, c_hi


def _targets(scheme: RoundingScheme, lo_p, hi_p, c_lo, c_hi):
    """Rounding destination per piece for the deterministic schemes."""
    mids = 0.5 * (lo_p + hi_p)
    if scheme is RoundingScheme.NEAREST:
        cell_mid = 0.5 * (c_lo + c_hi)
        return np.where(mids <= cell_mid, c_lo, c_hi)
    if scheme is RoundingScheme.TOWARD_ZERO:
        return np.where(mids >= 0.0, c_lo, c_hi)
    if scheme is RoundingScheme.AWAY_FROM_ZERO:
        return np.where(mids >= 0.0, c_hi, c_lo)
    raise PreconditionError("deterministic targets undefined for stochastic rounding")


def _panel_integrate(f_vals: np.ndarray, lo_p, hi_p, weights) -> float:
    half = 0.5 * (hi_p - lo_p)
    return float(np.sum(half * (f_vals @ weights)))


def _err_power_values(scheme, X, lo_p, hi_p, c_lo, c_hi, k, signed):
    """Error-power integrand values at node matrix X (pieces x nodes)."""
    if scheme is RoundingScheme.STOCHASTIC:
        lo = c_lo[:, None]
        hi = c_hi[:, None]
        width = hi - lo
        degenerate = width <= 0.0
        safe = np.where(degenerate, 1.0, width)
        p = (X - lo) / safe
        if signed:
            vals = (lo - X) ** k * (1.0 - p) + (hi - X) ** k * p
        else:
            vals = (X - lo) ** k * (1.0 - p) + (hi - X) ** k * p
        clamp = (lo - X) ** k if signed else np.abs(lo - X) ** k
        return np.where(degenerate, clamp, vals)
    tgt = _targets(scheme, lo_p, hi_p, c_lo, c_hi)[:, None]
    err = tgt - X
    return err ** k if signed else np.abs(err) ** k


def err_weighted_integral(
    grid: Grid,
    scheme: RoundingScheme,
    model_or_weight,
    a: float,
    b: float,
    k: int,
    signed: bool = False,
    budget: int = CELL_BUDGET,
    n_nodes: int | None = None,
) -> OracleResult:
    """Per-cell quadrature of integral w(x) err(x)^k dx over [a, b].

    Stochastic rounding integrates the expected error powers instead of a
    realization.  The error estimate compares against a half-order rerun.
    """
    if not a < b:
        raise PreconditionError("need a < b")
    w = _weight_callable(model_or_weight)
    lo_p, hi_p, c_lo, c_hi = _pieces(grid, scheme, a, b, budget)
    if lo_p.size == 0:
        return OracleResult(0.0, 0.0, "per_cell_quadrature", {"pieces": 0})
    n = n_nodes or max(k + 8, 20)

    def run(order):
        nodes, weights = gauss_legendre_nodes(order)
        X = 0.5 * (lo_p + hi_p)[:, None] + 0.5 * (hi_p - lo_p)[:, None] * nodes[None, :]
        vals = np.asarray(w(X)) * _err_power_values(scheme, X, lo_p, hi_p, c_lo, c_hi, k, signed)
        return _panel_integrate(vals, lo_p, hi_p, weights)

    value = run(n)
    coarse = run(max(n // 2, 4))
    return OracleResult(value, abs(value - coarse), "per_cell_quadrature", {"pieces": int(lo_p.size)})


def rd_moment_integral(
    grid: Grid,
    scheme: RoundingScheme,
    model_or_weight,
    a: float,
    b: float,
    j: int,
    shift: float = 0.0,
    budget: int = CELL_BUDGET,
    n_nodes: int = 20,
) -> OracleResult:
    """Per-cell quadrature of integral w(x) E[(rd(x) - shift)^j] dx."""
    if not a < b:
        raise PreconditionError("need a < b")
    w = _weight_callable(model_or_weight)
    lo_p, hi_p, c_lo, c_hi = _pieces(grid, scheme, a, b, budget)
    if lo_p.size == 0:
        return OracleResult(0.0, 0.0, "per_cell_quadrature", {"pieces": 0})

    def run(order):
        nodes, weights = gauss_legendre_nodes(order)
        X = 0.5 * (lo_p + hi_p)[:, None] + 0.5 * (hi_p - lo_p)[:, None] * nodes[None, :]
        wv = np.asarray(w(X))
        if scheme is RoundingScheme.STOCHASTIC:
            lo = c_lo[:, None]
            hi = c_hi[:, None]
            width = hi - lo
            degenerate = width <= 0.0
            safe = np.where(degenerate, 1.0, width)
            p = (X - lo) / safe
            vals = (lo - shift) ** j * (1.0 - p) + (hi - shift) ** j * p
            vals = np.where(degenerate, (lo - shift) ** j, vals)
        else:
            tgt = _targets(scheme, lo_p, hi_p, c_lo, c_hi)[:, None]
            vals = (tgt - shift) ** j * np.ones_like(X)
        return _panel_integrate(wv * vals, lo_p, hi_p, weights)

    value = run(n_nodes)
    coarse = run(max(n_nodes // 2, 4))
    return OracleResult(value, abs(value - coarse), "per_cell_quadrature", {"pieces": int(lo_p.size)})


def delta_e_and_v(
    model: DensityModel, grid: Grid, scheme: RoundingScheme, budget: int = CELL_BUDGET
) -> tuple[OracleResult, OracleResult]:
    """Quadrature values of Delta_E = E[rd(X)] - E[X] and Delta_V likewise.

    Delta_E comes straight from the error integral (no cancellation);
    V[rd(X)] is assembled from per-cell first and second rounded moments.
    """
    a, b = model.effective_range()
    de = err_weighted_integral(grid, scheme, model, a, b, 1, signed=True, budget=budget)
    m1 = rd_moment_integral(grid, scheme, model, a, b, 1, budget=budget)
    m2 = rd_moment_integral(grid, scheme, model, a, b, 2, budget=budget)
    v_rd = m2.value - m1.value ** 2
    dv = OracleResult(
        v_rd - model.variance,
        m2.abs_error_estimate + 2.0 * abs(m1.value) * m1.abs_error_estimate + 1e-15 * abs(m2.value),
        "per_cell_quadrature",
        {"pieces": m2.details.get("pieces", 0)},
    )
    return de, dv


def centered_moment_of_rounded(
    model: DensityModel, grid: Grid, scheme: RoundingScheme, k: int, budget: int = CELL_BUDGET
) -> OracleResult:
    """Quadrature value of M_k[rd(X)] (centered at E[rd(X)])."""
    a, b = model.effective_range()
    m1 = rd_moment_integral(grid, scheme, model, a, b, 1, budget=budget)
    mk = rd_moment_integral(grid, scheme, model, a, b, k, shift=m1.value, budget=budget)
    return mk


@dataclass(frozen=True)
class MCMoments:
    raw: tuple
    central: tuple
    delta_e: OracleResult
    delta_v: OracleResult


def _philox_stream(seed: int, stream: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def mc_rounded_moments(
    model: DensityModel,
    grid: Grid,
    scheme: RoundingScheme,
    k_max: int,
    n_samples: int,
    seed: int,
) -> MCMoments:
    """Monte Carlo moments of rd(X) via inverse-transform sampling.

    Sample uniforms come from the counter-based stream (seed, 0); the
    stochastic-rounding variate for sample i is element i of stream
    (seed, 1), so results are reproducible regardless of scheduling.
    """
    if n_samples < 1000:
        raise PreconditionError("need at least 1000 samples")
    u = _philox_stream(seed, 0).random(n_samples)
    x = np.asarray(model.quantile(u), dtype=float)
    if scheme is RoundingScheme.STOCHASTIC:
        ur = _philox_stream(seed, 1).random(n_samples)
    else:
        ur = None
    rd = round_value(grid, scheme, x, ur)
    root_n = math.sqrt(n_samples)
    info = {"samples": n_samples, "seed": seed}

    def res(vals: np.ndarray, value: float) -> OracleResult:
        return OracleResult(value, 4.0 * float(np.std(vals)) / root_n, "monte_carlo", dict(info))

    raw = tuple(res(rd ** k, float(np.mean(rd ** k))) for k in range(1, k_max + 1))
    rbar = float(np.mean(rd))
    centered = rd - rbar
    central = tuple(res(centered ** k, float(np.mean(centered ** k))) for k in range(2, k_max + 1))
    delta_e = res(rd, rbar - model.mean)
    v_rd = float(np.var(rd, ddof=1))
    delta_v = res(centered ** 2, v_rd - model.variance)
    return MCMoments(raw=raw, central=central, delta_e=delta_e, delta_v=delta_v)


@dataclass(frozen=True)
class SweepRow:
    """One sweep offset; bounds for tiers a scheme cannot support are None
    (directed rounding has no cancellation tiers) and serialize as empty."""

    offset: float
    delta_e: float
    delta_v: float
    bound_a_e: float
    bound_b_e: float | None
    bound_c_e: float | None
    bound_d_e: float | None
    bound_a_v: float
    bound_b_v: float | None
    bound_c_v: float | None

    def violations(self, budget: float = 1e-9) -> list[str]:
        out = []
        ae = abs(self.delta_e)
        av = abs(self.delta_v)
        for name, bound in (
            ("A_E", self.bound_a_e),
            ("B_E", self.bound_b_e),
            ("C_E", self.bound_c_e),
            ("D_E", self.bound_d_e),
        ):
            if bound is not None and ae > bound + budget:
                out.append(f"|Delta_E| = {ae:.3e} exceeds tier {name} bound {bound:.3e}")
        for name, bound in (
            ("A_V", self.bound_a_v),
            ("B_V", self.bound_b_v),
            ("C_V", self.bound_c_v),
        ):
            if bound is not None and av > bound + budget:
                out.append(f"|Delta_V| = {av:.3e} exceeds tier {name} bound {bound:.3e}")
        return out


def offset_sweep(
    model: DensityModel,
    delta: float,
    n_offsets: int,
    scheme: RoundingScheme = RoundingScheme.NEAREST,
    check: bool = True,
    budget: float = 1e-9,
) -> list[SweepRow]:
    """Quadrature Delta_E / Delta_V against tier bounds over a full period
    of mesh offsets [0, 2*delta)."""
    if n_offsets < 2:
        raise PreconditionError("need at least 2 offsets")
    mesh0 = UniformMesh(delta, 0.0)
    dlt = scheme_eps_delta(scheme, 0.0, mesh0.step)[1]
    de_a, dv_a = mean_and_variance_diff_bounds(model, "A", mesh=mesh0, delta=dlt, scheme=scheme)
    tiered = scheme in (RoundingScheme.NEAREST, RoundingScheme.STOCHASTIC)
    if tiered:
        de_b, dv_b = mean_and_variance_diff_bounds(model, "B", mesh=mesh0, delta=dlt, scheme=scheme)
        de_c, dv_c = mean_and_variance_diff_bounds(model, "C", mesh=mesh0, delta=dlt, scheme=scheme)
    rows = []
    problems = []
    for a in np.linspace(0.0, mesh0.step, n_offsets, endpoint=False):
        mesh = UniformMesh(delta, float(a))
        if tiered:
            de_d, _ = mean_and_variance_diff_bounds(model, "D", mesh=mesh, delta=dlt, scheme=scheme)
        de, dv = delta_e_and_v(model, mesh, scheme)
        row = SweepRow(
            offset=float(a),
            delta_e=de.value,
            delta_v=dv.value,
            bound_a_e=de_a.value,
            bound_b_e=de_b.value if tiered else None,
            bound_c_e=de_c.value if tiered else None,
            bound_d_e=de_d.value if tiered else None,
            bound_a_v=dv_a.value,
            bound_b_v=dv_b.value if tiered else None,
            bound_c_v=dv_c.value if tiered else None,
        )
        rows.append(row)
        problems.extend(f"offset {a:.6g}: {v}" for v in row.violations(budget))
    if check and problems:
        raise BoundViolationError("; ".join(problems))
    return rows


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    deltas: tuple
    values: tuple
    excluded: tuple
    all_underflow: bool = False


def convergence_slope(
    model: DensityModel,
    scheme: RoundingScheme,
    quantity: str,
    deltas: Sequence[float],
    n_probe: int = 16,
) -> SlopeFit:
    """Least-squares log-log slope of the worst-offset quantity vs delta.

    Points below 1e-15 are excluded and flagged.  A quantity that
    underflows everywhere has converged past measurement: the slope is
    reported as +inf with ``all_underflow`` set rather than fitted.
    """
    if len(deltas) < 4:
        raise PreconditionError("need at least 4 mesh sizes")
    if quantity not in ("delta_e", "delta_v", "abs_err_mean"):
        raise PreconditionError(f"unknown quantity {quantity!r}")
    worst = []
    for d in deltas:
        best = 0.0
        for a in np.linspace(0.0, 2.0 * d, n_probe, endpoint=False):
            mesh = UniformMesh(float(d), float(a))
            if quantity == "abs_err_mean":
                lo, hi = model.effective_range()
                q = err_weighted_integral(mesh, scheme, model, lo, hi, 1, signed=False).value
            else:
                de, dv = delta_e_and_v(model, mesh, scheme)
                q = de.value if quantity == "delta_e" else dv.value
            best = max(best, abs(q))
        worst.append(best)
    excluded = tuple(v < 1e-15 for v in worst)
    xs = [math.log(d) for d, ex in zip(deltas, excluded) if not ex]
    ys = [math.log(v) for v, ex in zip(worst, excluded) if not ex]
    if not xs:
        return SlopeFit(math.inf, tuple(deltas), tuple(worst), excluded, all_underflow=True)
    if len(xs) < 2:
        raise DegenerateFitError("fewer than 2 usable points after underflow exclusion")
    slope = float(np.polyfit(xs, ys, 1)[0])
    return SlopeFit(slope, tuple(deltas), tuple(worst), excluded)


def simulated_sum(
    models: Sequence[DensityModel],
    fs: FloatSystem,
    scheme: RoundingScheme,
    n_samples: int,
    seed: int,
) -> OracleResult:
    """Monte Carlo E|S_n - rounded S_n| for a sequential rounded sum.

    Summand i draws from stream (seed, i); rounding variates for addition
    step k come from stream (seed, 2^32 + k).  Partial sums that saturate
    the float system are counted, not fatal.
    """
    n = len(models)
    if n == 0:
        raise PreconditionError("need at least one summand")
    xs = np.empty((n, n_samples))
    for i, m in enumerate(models):
        xs[i] = np.asarray(m.quantile(_philox_stream(seed, i).random(n_samples)), dtype=float)
    exact = xs.sum(axis=0)
    rounded = xs[0].copy()
    overflow = 0
    for step in range(1, n):
        s = rounded + xs[step]
        overflow += int(np.sum(fs.saturates(s)))
        if scheme is RoundingScheme.STOCHASTIC:
            u = _philox_stream(seed, (1 << 32) + step).random(n_samples)
        else:
            u = None
        rounded = round_value(fs, scheme, s, u)
    diff = np.abs(exact - rounded)
    value = float(np.mean(diff))
    se = 4.0 * float(np.std(diff)) / math.sqrt(n_samples)
    return OracleResult(
        value,
        se,
        "monte_carlo",
        {"samples": n_samples, "seed": seed, "overflow_events": overflow},
    )
