"""Uniform radial grids and second-order finite differences.

All profiles in this package live on uniform one-dimensional grids.  The
difference operators are second-order accurate everywhere: central stencils
in the interior, one-sided three/four-point stencils at the two endpoints.
Grids with at least five nodes guarantee every stencil fits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridError


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid on [r_min, r_max] with `count` nodes."""

    r_min: float
    r_max: float
    count: int
    r: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.count - 1)

    def __len__(self) -> int:
        return self.count


def make_grid(r_min: float, r_max: float, count: int) -> RadialGrid:
    """Build a uniform grid; a straddling grid gets an exact node at 0.

    Raises
    ------
    GridError
        If the bounds are not increasing or count < 5.
    """
    if not r_min < r_max:
        raise GridError(f"need r_min < r_max, got [{r_min}, {r_max}]")
    if count < 5:
        raise GridError(f"count={count} too small, need at least 5 nodes")
    r = np.linspace(float(r_min), float(r_max), count)
    if r_min < 0.0 < r_max:
        # snap the node nearest zero onto zero when the grid aligns with it,
        # so parity and anchor logic can rely on an exact origin node
        i = int(np.argmin(np.abs(r)))
        if abs(r[i]) <= 1e-9 * (r_max - r_min):
            r[i] = 0.0
    r.setflags(write=False)
    return RadialGrid(float(r_min), float(r_max), int(count), r)


def check_profile(values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Validate a profile against its grid and return it as a float array."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size != grid.count:
        raise GridError(f"profile length {v.size} does not match grid count {grid.count}")
    if not np.all(np.isfinite(v)):
        raise GridError("profile contains non-finite values")
    return v


def derivative(values: np.ndarray, grid: RadialGrid, order: int = 1) -> np.ndarray:
    """Second-order finite-difference derivative of a profile.

    Parameters
    ----------
    values : array of node values matching `grid`
    order : 1 or 2

    Central differences at interior nodes; one-sided second-order stencils
    at the endpoints (three points for order 1, four points for order 2).
    """
    v = check_profile(values, grid)
    h = grid.h
    out = np.empty_like(v)
    if order == 1:
        out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
        out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
        out[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    elif order == 2:
        out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (h * h)
        out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h)
        out[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / (h * h)
    else:
        raise GridError(f"derivative order must be 1 or 2, got {order}")
    return out


def derivative_with_parity(values: np.ndarray, grid: RadialGrid, order: int,
                           parity: int) -> np.ndarray:
    """Derivative using a parity ghost node across a smooth pole at r = 0.

    `parity` is +1 for even profiles (lapse, potential) and -1 for odd ones
    (warp).  Only the left endpoint is treated as the pole; it must sit at
    r = 0.  Remaining nodes use the standard stencils.
    """
    v = check_profile(values, grid)
    if grid.r[0] != 0.0:
        raise GridError("parity stencils require the left endpoint at r = 0")
    h = grid.h
    out = derivative(v, grid, order)
    ghost = parity * v[1]
    if order == 1:
        out[0] = (v[1] - ghost) / (2.0 * h)
    else:
        out[0] = (v[1] - 2.0 * v[0] + ghost) / (h * h)
    return out


def observed_order(coarse_err: float, fine_err: float) -> float:
    """Convergence order implied by errors at grid spacings h and h/2."""
    if coarse_err <= 0.0 or fine_err <= 0.0:
        return float("nan")
    return float(np.log2(coarse_err / fine_err))
