"""Curvature of rotationally symmetric metrics g = a dx^2 + w^2 g_{S^{n-1}}.

Everything is expressed through the warp profile w, the lapse profile a and
the dimension n.  With the arclength derivative D_s = a^{-1/2} d/dx the two
sectional curvatures are

    k_rad = -w_ss / w            (planes containing the radial direction)
    k_sph = (1 - w_s^2) / w^2    (planes tangent to the spheres)

in the sign convention that makes the round sphere positively curved
(w = sin x gives k_rad = k_sph = 1).  Ricci and scalar curvature follow
algebraically:

    Ric(radial) = (n-1) k_rad
    Ric(sphere) = k_rad + (n-2) k_sph      (per unit spherical direction)
    R   = 2(n-1) k_rad + (n-1)(n-2) k_sph
    |Ric|^2 = Ric(radial)^2 + (n-1) Ric(sphere)^2

Profiles may carry analytically known derivatives; operations use those when
present and fall back to second-order finite differences otherwise.  At a
declared smooth pole (w -> 0 at the left endpoint r = 0) the 0/0 curvature
quotients are filled by even-parabola extrapolation from the two adjacent
nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import GeometryError, GridError
from .grid import RadialGrid, check_profile, derivative, derivative_with_parity
from .params import SolitonParams


@dataclass(frozen=True)
class WarpedGeometry:
    """Radial grid plus warp and lapse profiles (lapse defaults to one).

    Optional fields carry closed-form derivatives of the profiles; when set,
    curvature is evaluated without finite differences and is exact up to
    rounding on data where the closed forms are exact.
    """

    params: SolitonParams
    grid: RadialGrid
    w: np.ndarray
    a: np.ndarray = None
    smooth_pole: bool = False
    w_prime: Optional[np.ndarray] = field(default=None, repr=False)
    w_second: Optional[np.ndarray] = field(default=None, repr=False)
    a_prime: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        w = check_profile(self.w, self.grid)
        a = np.ones(self.grid.count) if self.a is None else check_profile(self.a, self.grid)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "a", a)
        if np.any(a <= 0.0):
            raise GeometryError("lapse must be positive everywhere")
        interior = w[1:-1]
        if np.any(interior <= 0.0):
            raise GeometryError("warp must be positive at interior nodes")
        if np.any(w < 0.0):
            raise GeometryError("warp must be nonnegative")
        if np.any(w[[0, -1]] == 0.0):
            if not self.smooth_pole:
                raise GeometryError(
                    "warp vanishes at an endpoint; declare smooth_pole to allow it")
            if w[0] == 0.0 and self.grid.r[0] != 0.0:
                raise GeometryError("smooth pole requires the left endpoint at r = 0")
            if w[-1] == 0.0:
                raise GeometryError("pole handling supports the left endpoint only")

    @property
    def has_pole(self) -> bool:
        return self.smooth_pole and self.w[0] == 0.0

    @property
    def arclength_gauge(self) -> bool:
        return bool(np.all(self.a == 1.0))

    def require_arclength(self, what: str) -> None:
        if np.max(np.abs(self.a - 1.0)) > 1e-12:
            raise GeometryError(f"{what} requires the arclength gauge (a == 1)")

    def d_warp(self, order: int) -> np.ndarray:
        injected = self.w_prime if order == 1 else self.w_second
        if injected is not None:
            return check_profile(injected, self.grid)
        if self.has_pole:
            return derivative_with_parity(self.w, self.grid, order, parity=-1)
        return derivative(self.w, self.grid, order)

    def d_lapse(self) -> np.ndarray:
        if self.a_prime is not None:
            return check_profile(self.a_prime, self.grid)
        if self.has_pole:
            return derivative_with_parity(self.a, self.grid, 1, parity=+1)
        return derivative(self.a, self.grid, 1)


@dataclass(frozen=True)
class CurvatureData:
    """Sectional, Ricci and scalar curvature profiles of a warped geometry."""

    k_rad: np.ndarray
    k_sph: np.ndarray
    ric_rad: np.ndarray
    ric_sph: np.ndarray
    scal: np.ndarray
    ric_norm_sq: np.ndarray


def _fill_pole(values: np.ndarray) -> np.ndarray:
    """Fill node 0 of an even profile by the parabola through nodes 1 and 2.

    For a smooth even function k(r) = k0 + c r^2 + O(r^4) this reproduces k0
    exactly from k(h), k(2h).
    """
    out = values.copy()
    out[0] = (4.0 * values[1] - values[2]) / 3.0
    return out


def curvature(geom: WarpedGeometry) -> CurvatureData:
    """Curvature profiles of a rotationally symmetric metric.

    Fails if the warp is nonpositive at an interior node or the lapse is
    nonpositive anywhere (checked at construction).  With a declared smooth
    pole, curvature at the pole node is the even-parabola limit.
    """
    n = geom.params.n
    w, a = geom.w, geom.a
    wp = geom.d_warp(1)
    wpp = geom.d_warp(2)
    ap = geom.d_lapse()

    w_s = wp / np.sqrt(a)
    w_ss = wpp / a - ap * wp / (2.0 * a * a)

    if geom.has_pole:
        with np.errstate(divide="ignore", invalid="ignore"):
            k_rad = -w_ss / w
            k_sph = (1.0 - w_s * w_s) / (w * w)
        k_rad = _fill_pole(k_rad)
        k_sph = _fill_pole(k_sph)
    else:
        k_rad = -w_ss / w
        k_sph = (1.0 - w_s * w_s) / (w * w)

    ric_rad = (n - 1.0) * k_rad
    ric_sph = k_rad + (n - 2.0) * k_sph
    scal = 2.0 * (n - 1.0) * k_rad + (n - 1.0) * (n - 2.0) * k_sph
    ric_norm_sq = ric_rad * ric_rad + (n - 1.0) * ric_sph * ric_sph
    return CurvatureData(k_rad, k_sph, ric_rad, ric_sph, scal, ric_norm_sq)


def scale_geometry(geom: WarpedGeometry, c: float) -> WarpedGeometry:
    """Uniform metric rescaling g -> c*g, i.e. a -> c*a and w^2 -> c*w^2."""
    if c <= 0.0:
        raise GeometryError(f"scaling factor must be positive, got {c}")
    s = np.sqrt(c)
    return replace(
        geom,
        w=s * geom.w,
        a=c * geom.a,
        w_prime=None if geom.w_prime is None else s * geom.w_prime,
        w_second=None if geom.w_second is None else s * geom.w_second,
        a_prime=None if geom.a_prime is None else c * geom.a_prime,
    )


def radial_hessian(f: np.ndarray, geom: WarpedGeometry,
                   f_prime: Optional[np.ndarray] = None,
                   f_second: Optional[np.ndarray] = None):
    """Hessian eigenvalues of a radial potential in the arclength gauge.

    Returns (hess_rad, hess_sph): f'' on the radial direction and f' w'/w on
    each unit spherical direction.
    """
    geom.require_arclength("radial_hessian")
    f = check_profile(f, geom.grid)
    if f_prime is None:
        f_prime = (derivative_with_parity(f, geom.grid, 1, +1) if geom.has_pole
                   else derivative(f, geom.grid, 1))
    else:
        f_prime = check_profile(f_prime, geom.grid)
    if f_second is None:
        f_second = (derivative_with_parity(f, geom.grid, 2, +1) if geom.has_pole
                    else derivative(f, geom.grid, 2))
    else:
        f_second = check_profile(f_second, geom.grid)

    wp = geom.d_warp(1)
    if geom.has_pole:
        with np.errstate(divide="ignore", invalid="ignore"):
            hess_sph = f_prime * wp / geom.w
        hess_sph = _fill_pole(hess_sph)
    else:
        hess_sph = f_prime * wp / geom.w
    return f_second.copy(), hess_sph


def f_laplacian(u: np.ndarray, f: np.ndarray, geom: WarpedGeometry,
                u_prime: Optional[np.ndarray] = None,
                u_second: Optional[np.ndarray] = None,
                f_prime: Optional[np.ndarray] = None) -> np.ndarray:
    """Drift Laplacian u'' + u' (n-1) w'/w - u' f' in the arclength gauge."""
    geom.require_arclength("f_laplacian")
    n = geom.params.n
    u = check_profile(u, geom.grid)
    f = check_profile(f, geom.grid)

    def d(profile, injected, order):
        if injected is not None:
            return check_profile(injected, geom.grid)
        if geom.has_pole:
            return derivative_with_parity(profile, geom.grid, order, +1)
        return derivative(profile, geom.grid, order)

    up = d(u, u_prime, 1)
    upp = d(u, u_second, 2)
    fp = d(f, f_prime, 1)
    wp = geom.d_warp(1)
    if geom.has_pole:
        with np.errstate(divide="ignore", invalid="ignore"):
            drift = up * (n - 1.0) * wp / geom.w
        out = upp + drift - up * fp
        return _fill_pole(out)
    return upp + up * (n - 1.0) * wp / geom.w - up * fp
