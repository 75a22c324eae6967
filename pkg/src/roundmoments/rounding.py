"""Rounding schemes, their error functions, and scheme-level constants.

Four schemes are supported: toward zero, away from zero, nearest (ties away
from zero, which preserves odd symmetry on sign-symmetric grids), and
stochastic rounding, which rounds up with probability proportional to the
position inside the cell and consumes one caller-supplied uniform variate
per call.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, MissingVariateError
from .grids import Grid


class RoundingScheme(str, enum.Enum):
    TOWARD_ZERO = "toward_zero"
    AWAY_FROM_ZERO = "away_from_zero"
    NEAREST = "nearest"
    STOCHASTIC = "stochastic"

    @classmethod
    def parse(cls, name: str) -> "RoundingScheme":
        try:
            return cls(name)
        except ValueError:
            raise ConfigError(f"unknown rounding scheme {name!r}")


DETERMINISTIC_SCHEMES = (
    RoundingScheme.TOWARD_ZERO,
    RoundingScheme.AWAY_FROM_ZERO,
    RoundingScheme.NEAREST,
)


def round_value(grid: Grid, scheme: RoundingScheme, x, u=None):
    """Round x onto the grid; result is always one of the two neighbors.

    ``u`` (uniform in [0, 1)) is required for the stochastic scheme and
    ignored otherwise.  Stochastic rounding returns the upper neighbor iff
    ``u < (x - lo) / (hi - lo)``.
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    lo, hi = grid.neighbors(x)
    on_grid = lo == hi

    if scheme is RoundingScheme.TOWARD_ZERO:
        out = np.where(x >= 0.0, lo, hi)
    elif scheme is RoundingScheme.AWAY_FROM_ZERO:
        out = np.where(x >= 0.0, hi, lo)
    elif scheme is RoundingScheme.NEAREST:
        d_lo = x - lo
        d_hi = hi - x
        out = np.where(d_lo < d_hi, lo, hi)
        # Ties go to the neighbor of larger magnitude; an exactly
        # zero-centered tie (measure zero) resolves to the upper neighbor.
        tie = d_lo == d_hi
        out = np.where(tie & (np.abs(lo) > np.abs(hi)), lo, out)
    elif scheme is RoundingScheme.STOCHASTIC:
        if u is None:
            raise MissingVariateError("stochastic rounding needs a uniform variate")
        u = np.asarray(u, dtype=float)
        width = np.where(on_grid, 1.0, hi - lo)
        p_up = (x - lo) / width
        out = np.where(u < p_up, hi, lo)
    else:  # pragma: no cover
        raise ConfigError(f"unknown scheme {scheme!r}")

    # On-grid points round to themselves; saturated queries collapse onto
    # the clamped neighbor (lo == hi == +/- top of a float system).
    out = np.where(on_grid, lo, out)
    return float(out) if scalar else out


def err_value(grid: Grid, scheme: RoundingScheme, x, u=None):
    """Signed rounding error rd(x) - x."""
    rd = round_value(grid, scheme, x, u)
    if np.ndim(x) == 0:
        return rd - float(x)
    return rd - np.asarray(x, dtype=float)


def scheme_eps_delta(scheme: RoundingScheme, eps0: float, delta0: float) -> tuple[float, float]:
    """Worst-case (eps, delta) error-model constants from grid gap stats.

    eps0/delta0 are the relative/absolute gap bounds of the grid itself;
    the returned pair bounds |rd(x) - x| <= eps|x| and |rd(x) - x| <= delta
    for the given scheme.
    """
    if eps0 < 0.0 or delta0 < 0.0:
        raise ConfigError("gap statistics must be non-negative")
    if scheme is RoundingScheme.TOWARD_ZERO:
        return eps0 / (1.0 + eps0), delta0
    if scheme is RoundingScheme.AWAY_FROM_ZERO:
        return eps0, delta0
    if scheme is RoundingScheme.NEAREST:
        return eps0 / 2.0, delta0 / 2.0
    if scheme is RoundingScheme.STOCHASTIC:
        return eps0, delta0
    raise ConfigError(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class SchemeConstants:
    """Error-integral constants: leading c(k), signed-cancellation d(k),
    and endpoint inflation beta(eps)."""

    c: Callable[[int], float]
    d: Callable[[int], float]
    beta: Callable[[float], float]


def _c_det(k: int) -> float:
    return 1.0 / (k + 1.0)


def _c_stoch(k: int) -> float:
    return 2.0 / (k * k + 3.0 * k + 2.0)


def _d_stoch(k: int) -> float:
    return (1.0 - (k + 3.0) * 2.0 ** (-(k + 1.0))) / (k * k + 3.0 * k + 2.0)


def _beta_one(eps: float) -> float:
    return 1.0


def _beta_shrink(eps: float) -> float:
    return 1.0 / (1.0 - eps)


_CONSTANTS = {
    RoundingScheme.TOWARD_ZERO: SchemeConstants(_c_det, _c_det, _beta_shrink),
    RoundingScheme.AWAY_FROM_ZERO: SchemeConstants(_c_det, _c_det, _beta_one),
    RoundingScheme.NEAREST: SchemeConstants(_c_det, _c_det, _beta_shrink),
    RoundingScheme.STOCHASTIC: SchemeConstants(_c_stoch, _d_stoch, _beta_one),
}


def scheme_constants(scheme: RoundingScheme) -> SchemeConstants:
    return _CONSTANTS[scheme]


def stoch_expected_err_pows(lo: float, hi: float, x, k: int):
    """Per-point expectations of |err|^k and err^k under stochastic rounding.

    lo/hi are the enclosing grid neighbors of x.  A degenerate cell
    (lo == hi, x on the grid) contributes (0, 0).
    """
    if k < 1:
        raise ConfigError("power must be a positive integer")
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if hi == lo:
        z = np.zeros_like(x)
        return (0.0, 0.0) if scalar else (z, z)
    p = (x - lo) / (hi - lo)
    abs_pow = (x - lo) ** k * (1.0 - p) + (hi - x) ** k * p
    signed_pow = (lo - x) ** k * (1.0 - p) + (hi - x) ** k * p
    if scalar:
        return float(abs_pow), float(signed_pow)
    return abs_pow, signed_pow
