"""Soliton parameters and the admissibility gate.

The structure equation Ric + Hess(f) = rho*R*g + lambda*g couples three
numbers: the dimension n, the curvature coupling rho, and the shrinker
constant lambda.  A handful of rho values are special and must be flagged
rather than silently accepted:

* rho = 0          -- the coupling degenerates to the classical soliton case,
* rho = 1/n        -- ellipticity of the structure system fails,
* rho = 1/(2(n-1)) -- the Schouten value; several identities divide by
                      1 - 2(n-1)*rho.

Shrinking solitons in the window 0 < rho < 1/(2(n-1)) with lambda > 0 are
the main objects of study.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True)
class SolitonParams:
    """Dimension, curvature coupling, and shrinker constant."""

    n: int
    rho: float
    lam: float

    def __post_init__(self):
        if self.n < 3:
            raise ParameterError(f"dimension n={self.n} must be >= 3")
        if not (math.isfinite(self.rho) and math.isfinite(self.lam)):
            raise ParameterError("rho and lam must be finite")

    @property
    def schouten_rho(self) -> float:
        """The coupling value 1/(2(n-1)) excluded by the Schouten case."""
        return 1.0 / (2.0 * (self.n - 1))

    @property
    def trace_rho(self) -> float:
        """The coupling value 1/n excluded by loss of ellipticity."""
        return 1.0 / self.n


@dataclass(frozen=True)
class ParamClass:
    """Classification flags produced by :func:`validate_params`."""

    is_shrinking_window: bool
    excluded_analyticity: bool
    excluded_soliton: bool
    schouten: bool


def validate_params(p: SolitonParams) -> ParamClass:
    """Classify parameters against the special values of the coupling.

    Total on finite inputs with n >= 3; comparisons against 1/n and
    1/(2(n-1)) are exact float comparisons, so callers should produce rho
    by evaluating the same rational expression.
    """
    if p.n < 3:
        raise ParameterError(f"dimension n={p.n} must be >= 3")
    schouten = p.rho == p.schouten_rho
    excluded_analyticity = schouten or p.rho == p.trace_rho
    excluded_soliton = p.rho == 0.0
    shrinking = (0.0 < p.rho < p.schouten_rho) and p.lam > 0.0
    return ParamClass(
        is_shrinking_window=shrinking,
        excluded_analyticity=excluded_analyticity,
        excluded_soliton=excluded_soliton,
        schouten=schouten,
    )
