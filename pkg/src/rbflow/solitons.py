"""Soliton profiles: closed-form fixtures and shooting from a smooth pole.

Fixtures
--------
* Gaussian: flat metric w = r with quadratic potential lam*r^2/2.  Solves
  the structure equation for every coupling rho (all curvature terms vanish).
* Cylinder: round-sphere cross section of constant squared radius
  w0^2 = (n-2)(1-(n-1) rho)/lam with potential lam*r^2/(2(1-(n-1) rho)).
* Rigid products: Einstein factor N^k with constant mu = lam/(1-k rho) and
  potential mu*|x|^2/2 on the flat factor; k = n-1 is the cylinder, k = 0
  the Gaussian.

Fixtures carry closed-form derivative profiles, so residual and identity
checks on them are exact to rounding.

Shooting
--------
The radial reduction of the structure equation is a second-order system for
(w, f), singular at the pole w(0) = 0.  `shoot_from_pole` starts on the
series

    w = r + w3 r^3/6 + O(r^5),  f = f(0) + alpha r^2/2 + O(r^4),
    w3 = (alpha - lam) / ((n-1)(1 - n rho)),

a small offset away from the pole and integrates outward with an adaptive
embedded Runge-Kutta pair.  alpha = f''(0) is the free shooting parameter;
alpha = lam reproduces the Gaussian exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import GridError, ParameterError
from .geometry import WarpedGeometry
from .grid import RadialGrid, make_grid
from .identities import SolitonData, soliton_residual
from .params import SolitonParams, validate_params


def gaussian_fixture(p: SolitonParams, grid: RadialGrid,
                     f_offset: float = 0.0) -> SolitonData:
    """Flat Gaussian soliton w = r, f = lam*r^2/2 + f_offset on r >= 0."""
    if grid.r_min < 0.0:
        raise ParameterError("gaussian fixture needs a one-sided window r >= 0")
    r = grid.r
    lam = p.lam
    geom = WarpedGeometry(
        params=p, grid=grid, w=r.copy(), smooth_pole=bool(grid.r[0] == 0.0),
        w_prime=np.ones(grid.count), w_second=np.zeros(grid.count),
        a_prime=np.zeros(grid.count),
    )
    return SolitonData(
        geom=geom, f=0.5 * lam * r * r + f_offset,
        f_prime=lam * r, f_second=np.full(grid.count, lam),
    )


def cylinder_fixture(p: SolitonParams, grid: RadialGrid,
                     f_offset: float = 0.0) -> SolitonData:
    """Round cylinder S^{n-1}(w0) x R with its exact quadratic potential.

    w0^2 = (n-2)(1-(n-1) rho)/lam and f = lam r^2 / (2 (1-(n-1) rho)).
    Requires lam > 0 and 1 - (n-1) rho > 0.
    """
    q = 1.0 - (p.n - 1.0) * p.rho
    if p.lam <= 0.0:
        raise ParameterError("cylinder fixture requires lam > 0")
    if q <= 0.0:
        raise ParameterError(f"cylinder fixture requires 1-(n-1)rho > 0, got {q}")
    w0_sq = (p.n - 2.0) * q / p.lam
    r = grid.r
    zeros = np.zeros(grid.count)
    geom = WarpedGeometry(
        params=p, grid=grid, w=np.full(grid.count, np.sqrt(w0_sq)),
        w_prime=zeros, w_second=zeros, a_prime=zeros,
    )
    coeff = p.lam / q
    return SolitonData(
        geom=geom, f=0.5 * coeff * r * r + f_offset,
        f_prime=coeff * r, f_second=np.full(grid.count, coeff),
    )


@dataclass(frozen=True)
class RigidProduct:
    """Constants of the product N^k x R^{n-k} soliton."""

    k: int
    einstein_constant: Optional[float]
    potential_coeff: float


def rigid_product_fixture(k: int, p: SolitonParams) -> RigidProduct:
    """Einstein constant and potential coefficient of a rigid product.

    The Einstein factor carries Ric = mu g with mu = lam/(1 - k rho) and the
    potential mu |x|^2/2 lives on the flat factor.  k = 0 degenerates to the
    pure Gaussian (no Einstein factor, coefficient lam).
    """
    if not 0 <= k <= p.n - 1:
        raise ParameterError(f"factor dimension k={k} must lie in [0, n-1]")
    if k * p.rho == 1.0:
        raise ParameterError("k*rho = 1 leaves the Einstein constant undefined")
    mu = p.lam / (1.0 - k * p.rho)
    if k == 0:
        return RigidProduct(k=0, einstein_constant=None, potential_coeff=p.lam)
    return RigidProduct(k=k, einstein_constant=mu, potential_coeff=mu)


@dataclass(frozen=True)
class SolitonODEState:
    """First-order state (w, w', f, f') of the radial soliton system."""

    w: float
    w_prime: float
    f: float
    f_prime: float


def soliton_ode_rhs(state: SolitonODEState, r: float,
                    p: SolitonParams) -> tuple[float, float, float, float]:
    """Right-hand side (w', w'', f', f'') of the radial soliton system.

    Solving the spherical component for w'' requires dividing by
    1 - 2 rho (n-1); the Schouten value of the coupling is rejected.
    """
    den = 1.0 - 2.0 * p.rho * (p.n - 1.0)
    if den == 0.0:
        raise ParameterError("coupling rho = 1/(2(n-1)) makes the radial system singular")
    if state.w <= 0.0:
        raise ParameterError(f"warp must stay positive, got w={state.w}")
    n = p.n
    w, wp, fp = state.w, state.w_prime, state.f_prime
    sph = (1.0 - wp * wp) / (w * w)
    bracket = ((n - 2.0) * sph + fp * wp / w
               - p.rho * (n - 1.0) * (n - 2.0) * sph - p.lam)
    wpp = w * bracket / den
    scal = -2.0 * (n - 1.0) * wpp / w + (n - 1.0) * (n - 2.0) * sph
    fpp = p.rho * scal + p.lam + (n - 1.0) * wpp / w
    return wp, wpp, fp, fpp


def series_coefficient(p: SolitonParams, alpha: float) -> float:
    """Cubic coefficient w3 of the pole series w = r + w3 r^3/6 + O(r^5)."""
    den = (p.n - 1.0) * (1.0 - p.n * p.rho)
    if den == 0.0:
        raise ParameterError("coupling rho = 1/n makes the pole series degenerate")
    return (alpha - p.lam) / den


class Termination(enum.Enum):
    REACHED_R_MAX = "reached_r_max"
    WARP_VANISHED = "warp_vanished"
    CURVATURE_BLOWUP = "curvature_blowup"


@dataclass(frozen=True)
class ShootResult:
    """Outcome of one shot: sampled data, parameter, and termination info."""

    data: SolitonData
    shoot_param: float
    termination: Termination
    residual_sup: float
    r_reached: float


def _rhs_vector(r, y, p):
    st = SolitonODEState(w=y[0], w_prime=y[1], f=y[2], f_prime=y[3])
    return np.array(soliton_ode_rhs(st, r, p))


def _scal_of_state(y, p):
    n = p.n
    st = SolitonODEState(w=y[0], w_prime=y[1], f=y[2], f_prime=y[3])
    _, wpp, _, _ = soliton_ode_rhs(st, 0.0, p)
    sph = (1.0 - y[1] ** 2) / (y[0] ** 2)
    return -2.0 * (n - 1.0) * wpp / y[0] + (n - 1.0) * (n - 2.0) * sph


def shoot_from_pole(p: SolitonParams, alpha: float, r_max: float,
                    grid_count: int, ode_tol: float = 1e-10,
                    eps_factor: float = 1e-4,
                    scal_ceiling: float = 1e8) -> ShootResult:
    """Integrate the radial soliton system outward from a smooth pole.

    Parameters
    ----------
    alpha : shooting parameter f''(0)
    r_max, grid_count : target uniform sampling window [0, r_max]
    ode_tol : relative and absolute tolerance of the adaptive integrator
    eps_factor : series start offset as a fraction of r_max
    scal_ceiling : |R| level that flags curvature blow-up

    Early termination (warp hitting zero or curvature blow-up) is a typed
    outcome, not a failure: the result covers the uniform nodes reached, and
    `termination` records why the window was cut short.  The potential is
    shifted so min f = 1 on the sampled window, and the sampled profiles
    carry integrator-exact derivatives, so `residual_sup` reflects the ODE
    tolerance rather than finite-difference error.
    """
    cls = validate_params(p)
    if cls.excluded_analyticity or cls.excluded_soliton:
        raise ParameterError(f"coupling rho={p.rho} is an excluded value for shooting")
    if not np.isfinite(alpha):
        raise ParameterError("alpha must be finite")
    if r_max <= 0.0 or grid_count < 5:
        raise ParameterError("need r_max > 0 and grid_count >= 5")

    w3 = series_coefficient(p, alpha)
    eps = eps_factor * r_max
    y0 = np.array([
        eps + w3 * eps ** 3 / 6.0,
        1.0 + w3 * eps ** 2 / 2.0,
        0.5 * alpha * eps ** 2,
        alpha * eps,
    ])

    def warp_vanishes(r, y):
        return y[0]
    warp_vanishes.terminal = True
    warp_vanishes.direction = -1

    def curvature_blowup(r, y):
        if y[0] <= 0.0:
            return 0.0
        return abs(_scal_of_state(y, p)) - scal_ceiling
    curvature_blowup.terminal = True
    curvature_blowup.direction = 1

    sol = solve_ivp(
        lambda r, y: _rhs_vector(r, y, p), (eps, r_max), y0,
        method="DOP853", rtol=ode_tol, atol=ode_tol, dense_output=True,
        events=[warp_vanishes, curvature_blowup],
    )
    if sol.status == 1:
        termination = (Termination.WARP_VANISHED if sol.t_events[0].size
                       else Termination.CURVATURE_BLOWUP)
        r_reached = float(sol.t[-1])
    elif sol.status == 0:
        termination = Termination.REACHED_R_MAX
        r_reached = float(r_max)
    else:
        raise ParameterError(f"ODE integration failed: {sol.message}")

    h = r_max / (grid_count - 1)
    n_nodes = min(grid_count, int(np.floor(r_reached / h + 1e-12)) + 1)
    if n_nodes < 5:
        raise ParameterError(
            f"profile terminated at r={r_reached:.3g}, fewer than 5 grid nodes")
    grid = make_grid(0.0, (n_nodes - 1) * h, n_nodes)
    r = grid.r

    y = np.empty((4, n_nodes))
    inside = r >= eps
    y[:, inside] = sol.sol(r[inside])
    for i in np.nonzero(~inside)[0]:
        ri = r[i]
        y[:, i] = (ri + w3 * ri ** 3 / 6.0, 1.0 + w3 * ri ** 2 / 2.0,
                   0.5 * alpha * ri ** 2, alpha * ri)

    w_vals, wp_vals, f_vals, fp_vals = y
    wpp_vals = np.empty(n_nodes)
    fpp_vals = np.empty(n_nodes)
    for i in range(n_nodes):
        if r[i] == 0.0:
            wpp_vals[i], fpp_vals[i] = 0.0, alpha
        else:
            _, wpp_vals[i], _, fpp_vals[i] = soliton_ode_rhs(
                SolitonODEState(w_vals[i], wp_vals[i], f_vals[i], fp_vals[i]),
                r[i], p)
    # pin the pole node to its exact series limit
    if r[0] == 0.0:
        w_vals[0], wp_vals[0], f_vals[0], fp_vals[0] = 0.0, 1.0, 0.0, 0.0

    f_vals = f_vals - np.min(f_vals) + 1.0

    geom = WarpedGeometry(
        params=p, grid=grid, w=w_vals, smooth_pole=True,
        w_prime=wp_vals, w_second=wpp_vals, a_prime=np.zeros(n_nodes),
    )
    data = SolitonData(geom=geom, f=f_vals, f_prime=fp_vals, f_second=fpp_vals)
    residual_sup = soliton_residual(data).sup_norm
    return ShootResult(data=data, shoot_param=float(alpha),
                       termination=termination, residual_sup=residual_sup,
                       r_reached=r_reached)


def find_neck_alpha(p: SolitonParams, alpha_lo: float, alpha_hi: float,
                    r_max: float, grid_count: int = 101,
                    bracket_tol: float = 1e-10,
                    ode_tol: float = 1e-10) -> float:
    """Bisect the shooting parameter toward a cylindrical end w'(r_max) = 0.

    Both bracket endpoints must reach r_max with opposite signs of
    w'(r_max); existence of a root is not asserted beyond the supplied
    bracket.
    """
    def end_slope(alpha):
        res = shoot_from_pole(p, alpha, r_max, grid_count, ode_tol=ode_tol)
        if res.termination is not Termination.REACHED_R_MAX:
            raise ParameterError(
                f"alpha={alpha} terminated early ({res.termination.value}); "
                "tighten the bracket")
        return res.data.geom.w_prime[-1]

    lo, hi = float(alpha_lo), float(alpha_hi)
    s_lo, s_hi = end_slope(lo), end_slope(hi)
    if np.sign(s_lo) == np.sign(s_hi):
        raise ParameterError("no sign change of w'(r_max) across the bracket")
    while hi - lo > bracket_tol:
        mid = 0.5 * (lo + hi)
        s_mid = end_slope(mid)
        if s_mid == 0.0:
            return mid
        if np.sign(s_mid) == np.sign(s_lo):
            lo, s_lo = mid, s_mid
        else:
            hi, s_hi = mid, s_mid
    return 0.5 * (lo + hi)
