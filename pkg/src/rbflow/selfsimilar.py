"""Exact self-similar flow generated by a gradient soliton.

A soliton (g0, f0) with shrinker constant lam evolves under the curvature
flow purely by diffeomorphism and rescaling:

    tau(t) = 1 - 2 lam t,
    dphi/dt = f0'(phi) / tau(t),    phi(r, 0) = r,
    g(t) = tau(t) * phi(t)^* g0,    f(t) = f0 o phi(t).

On a radial window the pullback metric has coordinate components

    a(x, t)   = tau * (d phi/dx)^2,
    w^2(x, t) = tau * w0(phi(x))^2,

which this module also regauges onto a fresh uniform arclength grid.  The
construction is integrated far more accurately than any finite-difference
flow, so it serves as the oracle the direct integrator is judged against.

Trajectories that leave the source window invalidate their nodes; the valid
sub-window is reported, never extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp
from scipy.interpolate import PchipInterpolator

from .errors import DomainEscapeError, GeometryError, ParameterError
from .geometry import WarpedGeometry, curvature, scale_geometry
from .grid import RadialGrid, derivative, make_grid
from .identities import SolitonData
from .params import SolitonParams


def tau(t: float, lam: float) -> float:
    """Rescaling factor -2*lam*t + 1; positive on the flow's lifespan."""
    return -2.0 * lam * t + 1.0


class _ExtendedSlope:
    """Monotone cubic interpolant with linear extension beyond the window."""

    def __init__(self, x: np.ndarray, y: np.ndarray):
        self._lo, self._hi = float(x[0]), float(x[-1])
        self._pchip = PchipInterpolator(x, y, extrapolate=False)
        d = self._pchip.derivative()
        self._y_lo, self._y_hi = float(y[0]), float(y[-1])
        self._d_lo, self._d_hi = float(d(self._lo)), float(d(self._hi))

    def __call__(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        out = np.empty_like(q)
        inside = (q >= self._lo) & (q <= self._hi)
        out[inside] = self._pchip(q[inside])
        below = q < self._lo
        above = q > self._hi
        out[below] = self._y_lo + self._d_lo * (q[below] - self._lo)
        out[above] = self._y_hi + self._d_hi * (q[above] - self._hi)
        return out


def _integrate_diffeo(s: SolitonData, t: float, ode_tol: float):
    """Advance every node of the identity map along grad(f0)/tau.

    Returns (phi, escaped_mask, first_escape_time).  The slope field is
    extended linearly beyond the window so escaping trajectories remain
    integrable; escaped nodes are detected from dense samples afterwards.
    """
    lam = s.params.lam
    if tau(t, lam) <= 0.0 or tau(0.0, lam) <= 0.0:
        raise ParameterError(f"tau must stay positive on [0, {t}]")
    grid = s.grid
    if t == 0.0:
        return grid.r.copy(), np.zeros(grid.count, dtype=bool), None

    slope = _ExtendedSlope(grid.r, s.d_potential(1))

    def rhs(tt, y):
        return slope(y) / tau(tt, lam)

    sol = solve_ivp(rhs, (0.0, t), grid.r, method="DOP853",
                    rtol=ode_tol, atol=ode_tol, dense_output=True)
    if not sol.success:
        raise ParameterError(f"diffeomorphism integration failed: {sol.message}")
    phi = sol.y[:, -1]

    slack = 1e-12 * (grid.r_max - grid.r_min)
    t_samples = np.linspace(0.0, t, 65)
    trail = sol.sol(t_samples)
    out_mask = (trail < grid.r_min - slack) | (trail > grid.r_max + slack)
    escaped = np.any(out_mask, axis=1)
    first_escape = None
    if np.any(escaped):
        j = int(np.argmax(np.any(out_mask, axis=0)))
        first_escape = float(t_samples[j])
    return phi, escaped, first_escape


def flow_diffeo(s: SolitonData, t: float, ode_tol: float = 1e-10) -> np.ndarray:
    """Diffeomorphism profile phi(r, t) for every grid node.

    Raises
    ------
    DomainEscapeError
        If any trajectory leaves [r_min, r_max]; the escape time (resolved
        to the dense sampling of the trajectory) is attached.
    """
    phi, escaped, t_escape = _integrate_diffeo(s, t, ode_tol)
    if np.any(escaped):
        node = int(np.argmax(escaped))
        raise DomainEscapeError(
            f"{int(np.sum(escaped))} trajectories left the window "
            f"[{s.grid.r_min}, {s.grid.r_max}] by t~{t_escape:.6g}",
            escape_time=t_escape, node=node)
    return phi


@dataclass(frozen=True)
class SelfSimilarSolution:
    """Soliton-generated flow state at one time, raw and regauged.

    `a_raw`/`w_sq_raw` are the pullback metric components on the valid
    source coordinates (`r_valid`); `geom_t`/`f_t` are the same metric
    resampled onto a fresh uniform arclength grid starting at the left edge
    of the valid window.
    """

    source: SolitonData
    t: float
    tau: float
    phi: np.ndarray
    valid_slice: tuple
    geom_t: WarpedGeometry
    f_t: np.ndarray
    r_valid: np.ndarray = field(repr=False)
    a_raw: np.ndarray = field(repr=False)
    w_sq_raw: np.ndarray = field(repr=False)
    arclength: np.ndarray = field(repr=False)

    @property
    def valid_range(self) -> tuple:
        return (float(self.r_valid[0]), float(self.r_valid[-1]))

    f_t_prime: Optional[np.ndarray] = field(default=None, repr=False)
    f_t_second: Optional[np.ndarray] = field(default=None, repr=False)

    def as_soliton_data(self) -> SolitonData:
        """Regauged state as soliton data with the rescaled shrinker constant.

        The flowed metric is again a soliton for lam/tau; this closes the
        semigroup and lets states be flowed onward.
        """
        p = self.source.params
        p_t = SolitonParams(p.n, p.rho, p.lam / self.tau)
        return SolitonData(geom=replace(self.geom_t, params=p_t), f=self.f_t,
                           f_prime=self.f_t_prime, f_second=self.f_t_second)


def self_similar_state(s: SolitonData, t: float, ode_tol: float = 1e-10,
                       regrid_count: Optional[int] = None) -> SelfSimilarSolution:
    """Evaluate the soliton-generated solution at time t.

    The raw pullback components live on the source coordinates; the
    regauged form uses cumulative-trapezoid arclength and monotone cubic
    resampling onto a uniform grid of `regrid_count` nodes (defaults to the
    number of valid source nodes).
    """
    lam = s.params.lam
    tau_t = tau(t, lam)
    if tau_t <= 0.0:
        raise ParameterError(f"tau({t}) = {tau_t} is not positive")

    phi, escaped, _ = _integrate_diffeo(s, t, ode_tol)
    valid = ~escaped
    if not np.any(valid):
        raise DomainEscapeError("every trajectory left the window")
    idx = np.nonzero(valid)[0]
    i0, i1 = int(idx[0]), int(idx[-1])
    if not np.all(valid[i0:i1 + 1]):
        raise DomainEscapeError("valid trajectories are not contiguous")

    r_v = s.grid.r[i0:i1 + 1]
    phi_v = phi[i0:i1 + 1]
    if np.any(np.diff(phi_v) <= 0.0):
        raise GeometryError("diffeomorphism is not strictly increasing; "
                            "integration failed or potential is not convex")

    count_v = i1 - i0 + 1
    if count_v < 5:
        raise DomainEscapeError(f"only {count_v} valid nodes remain")
    sub = make_grid(float(r_v[0]), float(r_v[-1]), count_v)
    dphi = derivative(phi_v, sub, 1)

    w0_interp = PchipInterpolator(s.grid.r, s.geom.w)
    f0_interp = PchipInterpolator(s.grid.r, s.f)
    sqrt_tau = np.sqrt(tau_t)
    a_raw = tau_t * dphi * dphi
    w_raw = sqrt_tau * w0_interp(phi_v)
    f_raw = f0_interp(phi_v)
    w_sq_raw = w_raw * w_raw

    arc = cumulative_trapezoid(np.sqrt(a_raw), r_v, initial=0.0)
    count = regrid_count or count_v
    s_u = np.linspace(0.0, arc[-1], count)
    w_hat = PchipInterpolator(arc, w_raw)(s_u)
    f_hat = PchipInterpolator(arc, f_raw)(s_u)

    pole = bool(w_hat[0] == 0.0 or (w_raw[0] == 0.0))
    if pole:
        w_hat[0] = 0.0
    grid_t = make_grid(0.0, float(arc[-1]), count)
    geom_t = WarpedGeometry(params=s.params, grid=grid_t, w=w_hat,
                            smooth_pole=pole)

    return SelfSimilarSolution(
        source=s, t=float(t), tau=float(tau_t), phi=phi,
        valid_slice=(i0, i1 + 1), geom_t=geom_t, f_t=f_hat,
        r_valid=r_v, a_raw=a_raw, w_sq_raw=w_sq_raw, arclength=arc,
    )


def scaling_check(geom: WarpedGeometry, c: float) -> float:
    """Sup-defect of the homothety law R(c*g) = R(g)/c over interior nodes."""
    if c <= 0.0:
        raise GeometryError(f"scaling factor must be positive, got {c}")
    scal_0 = curvature(geom).scal
    scal_c = curvature(scale_geometry(geom, c)).scal
    return float(np.max(np.abs(scal_c[1:-1] - scal_0[1:-1] / c)))
