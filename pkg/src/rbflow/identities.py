"""Residual of the soliton structure equation and its differential identities.

A radial metric/potential pair (g, f) is a gradient soliton of the coupled
curvature flow when

    Ric + Hess(f) = rho * R * g + lam * g.

In the arclength radial gauge this reduces to two scalar equations, one per
eigendirection of the left-hand side:

    radial:    Ric(radial) + f''        = rho*R + lam
    spherical: Ric(sphere) + f' w'/w    = rho*R + lam

Any exact solution also satisfies three derived scalar identities (trace,
gradient and Laplacian of R) plus the wedge identity dR (x) df = df (x) dR.
Evaluating their defects on discrete data gives an independent check that
degrades at the same rate as the residual itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import GridError
from .geometry import WarpedGeometry, _fill_pole, curvature
from .grid import check_profile, derivative, derivative_with_parity
from .params import SolitonParams


@dataclass(frozen=True)
class SolitonData:
    """Arclength-gauge warped geometry plus a radial potential profile.

    `f_prime`/`f_second` optionally carry closed-form (or integrator-exact)
    derivatives of the potential; operations prefer them over finite
    differences.
    """

    geom: WarpedGeometry
    f: np.ndarray
    f_prime: Optional[np.ndarray] = field(default=None, repr=False)
    f_second: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.geom.require_arclength("SolitonData")
        object.__setattr__(self, "f", check_profile(self.f, self.geom.grid))
        for name in ("f_prime", "f_second"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, check_profile(v, self.geom.grid))

    @property
    def params(self) -> SolitonParams:
        return self.geom.params

    @property
    def grid(self):
        return self.geom.grid

    def d_potential(self, order: int) -> np.ndarray:
        injected = self.f_prime if order == 1 else self.f_second
        if injected is not None:
            return injected
        if self.geom.has_pole:
            return derivative_with_parity(self.f, self.grid, order, parity=+1)
        return derivative(self.f, self.grid, order)

    def without_injected_derivatives(self) -> "SolitonData":
        """Copy of the data that forces finite-difference evaluation."""
        from dataclasses import replace as drep
        geom = drep(self.geom, w_prime=None, w_second=None, a_prime=None)
        return SolitonData(geom=geom, f=self.f)


@dataclass(frozen=True)
class ResidualReport:
    """Pointwise residual of the structure equation plus summary norms.

    `sup_norm` is the headline number: the max of both components over
    interior nodes (endpoint stencils are one-sided and reported separately
    in `sup_norm_boundary`).  `sup_norm_relative` rescales by
    max(1, sup|R|, sup|f'|).
    """

    res_rad: np.ndarray
    res_sph: np.ndarray
    sup_norm: float
    l2_norm: float
    sup_norm_boundary: float
    sup_norm_relative: float
    scale: float

    def to_json_dict(self, grid) -> dict:
        return {
            "sup_norm": self.sup_norm,
            "l2_norm": self.l2_norm,
            "sup_norm_boundary": self.sup_norm_boundary,
            "sup_norm_relative": self.sup_norm_relative,
            "grid": {"r_min": grid.r_min, "r_max": grid.r_max, "count": grid.count},
        }


@dataclass(frozen=True)
class IdentityDefects:
    """Defects of the trace, gradient, and Laplacian identities."""

    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    sup_d1: float
    sup_d2: float
    sup_d3: float
    sup_relative: float
    scale: float

    def sup_norms(self):
        return self.sup_d1, self.sup_d2, self.sup_d3

    def to_json_dict(self, grid) -> dict:
        return {
            "per_identity": {"trace": self.sup_d1, "gradient": self.sup_d2,
                             "laplacian": self.sup_d3},
            "sup_norm_relative": self.sup_relative,
            "grid": {"r_min": grid.r_min, "r_max": grid.r_max, "count": grid.count},
        }


def _interior_sup(*profiles) -> float:
    return float(max(np.max(np.abs(p[1:-1])) for p in profiles))


def _boundary_sup(*profiles) -> float:
    vals = []
    for p in profiles:
        ends = np.array([p[0], p[-1]])
        ends = ends[np.isfinite(ends)]
        if ends.size:
            vals.append(np.max(np.abs(ends)))
    return float(max(vals)) if vals else float("nan")


def soliton_residual(s: SolitonData) -> ResidualReport:
    """Pointwise residual of the structure equation on discrete data."""
    p = s.params
    geom = s.geom
    cd = curvature(geom)
    fp = s.d_potential(1)
    fpp = s.d_potential(2)
    wp = geom.d_warp(1)

    if geom.has_pole:
        with np.errstate(divide="ignore", invalid="ignore"):
            hess_sph = fp * wp / geom.w
        hess_sph = _fill_pole(hess_sph)
    else:
        hess_sph = fp * wp / geom.w

    rhs = p.rho * cd.scal + p.lam
    res_rad = cd.ric_rad + fpp - rhs
    res_sph = cd.ric_sph + hess_sph - rhs

    scale = max(1.0, float(np.max(np.abs(cd.scal))), float(np.max(np.abs(fp))))
    sup = _interior_sup(res_rad, res_sph)
    h = geom.grid.h
    l2 = float(np.sqrt(h * np.sum(res_rad[1:-1] ** 2 + res_sph[1:-1] ** 2)))
    return ResidualReport(
        res_rad=res_rad, res_sph=res_sph, sup_norm=sup, l2_norm=l2,
        sup_norm_boundary=_boundary_sup(res_rad, res_sph),
        sup_norm_relative=sup / scale, scale=scale,
    )


def identity_defects(s: SolitonData) -> IdentityDefects:
    """Defects of the three scalar identities satisfied by exact solitons.

    With Delta r = (n-1) w'/w these read

        d1 = (f'' + f' Delta r) - (n rho - 1) R - n lam
        d2 = (1 - 2(n-1) rho) R' - 2 Ric(radial) f'
        d3 = (1 - 2(n-1) rho) (R'' + R' Delta r) - R' f'
             - 2 (rho R^2 - |Ric|^2 + lam R)

    R is taken from the curvature of the data; its radial derivatives are
    always finite differences of the R profile (exact for the constant-R
    fixtures).
    """
    p = s.params
    n = p.n
    geom = s.geom
    cd = curvature(geom)
    scal = cd.scal
    fp = s.d_potential(1)
    fpp = s.d_potential(2)
    wp = geom.d_warp(1)

    if geom.has_pole:
        Rp = derivative_with_parity(scal, geom.grid, 1, +1)
        Rpp = derivative_with_parity(scal, geom.grid, 2, +1)
        with np.errstate(divide="ignore", invalid="ignore"):
            drift_f = fp * (n - 1.0) * wp / geom.w
            drift_R = Rp * (n - 1.0) * wp / geom.w
        drift_f = _fill_pole(drift_f)
        drift_R = _fill_pole(drift_R)
    else:
        Rp = derivative(scal, geom.grid, 1)
        Rpp = derivative(scal, geom.grid, 2)
        drift_f = fp * (n - 1.0) * wp / geom.w
        drift_R = Rp * (n - 1.0) * wp / geom.w

    coeff = 1.0 - 2.0 * (n - 1.0) * p.rho
    d1 = (fpp + drift_f) - (n * p.rho - 1.0) * scal - n * p.lam
    d2 = coeff * Rp - 2.0 * cd.ric_rad * fp
    d3 = (coeff * (Rpp + drift_R) - Rp * fp
          - 2.0 * (p.rho * scal * scal - cd.ric_norm_sq + p.lam * scal))

    scale = max(1.0, float(np.max(np.abs(scal))), float(np.max(np.abs(fp))))
    sups = [_interior_sup(d) for d in (d1, d2, d3)]
    return IdentityDefects(
        d1=d1, d2=d2, d3=d3,
        sup_d1=sups[0], sup_d2=sups[1], sup_d3=sups[2],
        sup_relative=max(sups) / scale, scale=scale,
    )


def cross_derivative_defect(grad_R: np.ndarray, grad_f: np.ndarray) -> float:
    """Wedge norm sqrt(|u|^2 |v|^2 - <u,v>^2); zero iff the gradients align.

    This is the pointwise content of the identity dR (x) df = df (x) dR:
    the two gradients must be parallel wherever both are nonzero.
    """
    u = np.asarray(grad_R, dtype=float)
    v = np.asarray(grad_f, dtype=float)
    if u.shape != v.shape or u.ndim != 1 or u.size < 2:
        raise GridError("gradients must be equal-length vectors of dimension >= 2")
    gram = np.dot(u, u) * np.dot(v, v) - np.dot(u, v) ** 2
    return float(np.sqrt(max(0.0, gram)))
