"""Limit tail measures of the standardized degree pair.

Both component measures are gamma mixtures: against the improper
density c1^-1 z^(-1-1/c1) dz on (0, inf), component 1 mixes independent
Gamma(delta_in + 1, scale z) and Gamma(delta_out, scale z**a) margins,
component 2 shifts the +1 to the out margin.  That structure gives a
one-dimensional reduction for rectangle masses through regularized
upper incomplete gamma factors, which is the default evaluation path
(validated against raw 2-d quadrature of the densities in the tests).

Homogeneity: scaling a rectangle corner by (c**c1, c**c2) divides the
mass by c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaincc

from .errors import DomainError, InsufficientExceedances
from .params import DerivedConstants, ModelParams, derive, split_probability, tail_ready
from .quadrature import DEFAULT_QUAD, QuadratureSpec, quad_semiinfinite

COMPONENTS = (1, 2, "combined")


class TailMeasure:
    """Evaluator for the component and combined tail measures."""

    def __init__(self, params: ModelParams, quad: QuadratureSpec = DEFAULT_QUAD):
        self.params = tail_ready(params)
        self.derived: DerivedConstants = derive(self.params)
        self.split = split_probability(self.params)
        self.quad = quad

    def density(self, component, x: float, y: float) -> float:
        """Lebesgue density of the tail measure at (x, y), both > 0."""
        if x <= 0 or y <= 0:
            raise DomainError("density is defined on the open quadrant x, y > 0")
        if component == "combined":
            pb = self.split
            return pb * self.density(1, x, y) + (1.0 - pb) * self.density(2, x, y)
        din, dout = self.params.delta_in, self.params.delta_out
        c1, a = self.derived.c1, self.derived.a
        if component == 1:
            zexp = 2.0 + 1.0 / c1 + din + a * dout
            pref = x**din * y ** (dout - 1.0) / (gamma_fn(din + 1.0) * gamma_fn(dout))
        elif component == 2:
            zexp = 1.0 + a + 1.0 / c1 + din + a * dout
            pref = x ** (din - 1.0) * y**dout / (gamma_fn(din) * gamma_fn(dout + 1.0))
        else:
            raise DomainError(f"component must be 1, 2 or 'combined', got {component!r}")

        def f(z):
            return z ** (-zexp) * math.exp(-(x / z + y / z**a))

        split_at = max(x, y ** (1.0 / a), 1.0)
        return (pref / c1) * quad_semiinfinite(f, split_at, self.quad)

    def rect_mass(self, component, x_lo: float, y_lo: float) -> float:
        """Mass of [x_lo, inf) x [y_lo, inf); at least one bound positive.

        Computed by the 1-d reduction: the gamma survival functions
        Q(r, x_lo/z) and Q(r', y_lo/z**a) replace the inner integrals.
        """
        if x_lo < 0 or y_lo < 0:
            raise DomainError("rectangle corners must be nonnegative")
        if x_lo == 0 and y_lo == 0:
            raise DomainError("the tail measure is infinite at the origin rectangle")
        if component == "combined":
            pb = self.split
            return pb * self.rect_mass(1, x_lo, y_lo) + (1.0 - pb) * self.rect_mass(2, x_lo, y_lo)
        if component == 1:
            rin, rout = self.params.delta_in + 1.0, self.params.delta_out
        elif component == 2:
            rin, rout = self.params.delta_in, self.params.delta_out + 1.0
        else:
            raise DomainError(f"component must be 1, 2 or 'combined', got {component!r}")
        c1, a = self.derived.c1, self.derived.a

        def f(z):
            val = z ** (-1.0 - 1.0 / c1)
            if x_lo > 0:
                val *= gammaincc(rin, x_lo / z)
            if y_lo > 0:
                val *= gammaincc(rout, y_lo / z**a)
            return val

        split_at = max(x_lo, y_lo ** (1.0 / a), 1.0)
        return quad_semiinfinite(f, split_at, self.quad) / c1

    def marginal_mass_closed_form(self, component, x_lo: float) -> float:
        """Closed form of rect_mass(component, x_lo, 0).

        Follows from int_0^inf t^(s-1) Q(r, t) dt = Gamma(r+s)/(s*Gamma(r))
        with s = 1/c1.
        """
        if x_lo <= 0:
            raise DomainError("x_lo must be positive")
        rin = self.params.delta_in + (1.0 if component == 1 else 0.0)
        if component not in (1, 2):
            raise DomainError("closed form available for components 1 and 2")
        if rin <= 0:
            raise DomainError("component 2 needs delta_in > 0")
        c1 = self.derived.c1
        return x_lo ** (-1.0 / c1) * gamma_fn(rin + 1.0 / c1) / gamma_fn(rin)


@dataclass(frozen=True)
class StandardizedSample:
    """Pairs mapped to common scaling by the power method: (x, y) -> (x**c, y)."""

    u: np.ndarray
    v: np.ndarray
    c: float


def standardize(pairs, derived: DerivedConstants) -> StandardizedSample:
    """Raise the first coordinate to c = gamma_in/gamma_out.

    After the map both coordinates share the scaling t**(1/gamma_out),
    so the transformed sample has a standard regularly varying tail.
    """
    x, y = pairs
    x = np.asarray(x, np.float64)
    y = np.asarray(y, np.float64)
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("standardize expects nonnegative pairs")
    c = derived.gamma_in / derived.gamma_out
    return StandardizedSample(u=x**c, v=y, c=c)


@dataclass(frozen=True)
class AngularHistogram:
    """Normalized histogram of L1 angles among threshold exceedances."""

    bin_edges: np.ndarray
    masses: np.ndarray
    exceedances: int
    threshold: float
    norm: str


def angular_histogram(
    sample: StandardizedSample,
    radius_threshold: float,
    bins: int,
    norm: str = "l1",
    min_exceedances: int = 50,
) -> AngularHistogram:
    """Histogram of v/(u+v) over pairs with ||(u, v)|| above the threshold."""
    if bins < 2:
        raise DomainError("need at least 2 bins")
    if radius_threshold <= 0:
        raise DomainError("radius threshold must be positive")
    if norm != "l1":
        raise DomainError(f"unsupported norm {norm!r}; only 'l1' is implemented")
    u, v = sample.u, sample.v
    radius = u + v
    keep = radius > radius_threshold
    count = int(keep.sum())
    if count < min_exceedances:
        raise InsufficientExceedances(f"only {count} exceedances above {radius_threshold}")
    angle = v[keep] / radius[keep]
    hist, edges = np.histogram(angle, bins=bins, range=(0.0, 1.0))
    return AngularHistogram(
        bin_edges=edges,
        masses=hist / count,
        exceedances=count,
        threshold=radius_threshold,
        norm=norm,
    )
