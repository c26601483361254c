"""Dynamical families and per-parameter computations.

Two families are supported: the unicritical polynomials z^d + c (critical
point 0) and the critically marked cubics z^3/3 - (c1/2) z^2 + a^3
(critical points 0 and c1).  On top of plain orbits this module provides
parameter-derivative propagation, the escape-rate (Green) function with a
certified error bound, attracting-cycle detection with multiplier, and the
spherical critical-orbit gap diagnostic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NearParabolicError

ESCAPE_RADIUS = 1e100
ESCAPED = complex(float("inf"), 0.0)


@dataclass(frozen=True)
class Unicritical:
    """The family z^d + c."""

    d: int
    c: complex

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"unicritical degree must be >= 2, got {self.d}")


@dataclass(frozen=True)
class CubicModuli:
    """The cubic family z^3/3 - (c1/2) z^2 + a^3, critical points 0 and c1."""

    c1: complex
    a: complex


ParamPoint = Unicritical | CubicModuli


def family_degree(p: ParamPoint) -> int:
    return p.d if isinstance(p, Unicritical) else 3


def critical_points(p: ParamPoint) -> list[complex]:
    if isinstance(p, Unicritical):
        return [0.0 + 0.0j]
    return [0.0 + 0.0j, complex(p.c1)]


def apply_map(p: ParamPoint, z):
    if isinstance(p, Unicritical):
        return z ** p.d + p.c
    return z**3 / 3.0 - (p.c1 / 2.0) * z**2 + p.a**3


def map_derivative(p: ParamPoint, z):
    """d/dz of the family map."""
    if isinstance(p, Unicritical):
        return p.d * z ** (p.d - 1)
    return z * (z - p.c1)


def is_escaped(z) -> bool:
    return not (math.isfinite(z.real) and math.isfinite(z.imag)) or abs(z) > ESCAPE_RADIUS


@dataclass
class Orbit:
    """Critical orbit f^k(c_j), k = 0..n, with optional parameter gradients.

    Entries from the first escape onward hold the ESCAPED marker (and the
    gradient rows saturate with it) instead of overflowing to NaN.
    """

    values: list[complex]
    derivatives: list[tuple[complex, ...]] | None = None
    escaped_at: int | None = None


def orbit_critical(p: ParamPoint, j: int, n: int, with_derivatives: bool = False) -> Orbit:
    """Iterate the j-th marked critical point n times.

    With derivatives, each step also propagates the chain-rule gradient of
    f^k(c_j) with respect to the family parameters (c for unicritical,
    (c1, a) for the cubic family).
    """
    crit = critical_points(p)
    if not 0 <= j < len(crit):
        raise ValueError(f"critical index {j} invalid for this family")
    if n < 0:
        raise ValueError("iterate count must be >= 0")
    z = crit[j]
    values = [z]
    derivs = None
    escaped_at = None
    if with_derivatives:
        if isinstance(p, Unicritical):
            grad = (0.0 + 0.0j,)
        else:
            # z_0 = c_j: d/dc1 is 1 only for the marked point c1
            grad = (1.0 + 0.0j, 0.0 + 0.0j) if j == 1 else (0.0 + 0.0j, 0.0 + 0.0j)
        derivs = [grad]
    for k in range(n):
        if escaped_at is None and not is_escaped(z):
            if with_derivatives:
                fz = map_derivative(p, z)
                if isinstance(p, Unicritical):
                    grad = (fz * derivs[-1][0] + 1.0,)
                else:
                    gc1, ga = derivs[-1]
                    grad = (fz * gc1 - z**2 / 2.0, fz * ga + 3.0 * p.a**2)
            z = apply_map(p, z)
            if is_escaped(z):
                escaped_at = k + 1
                z = ESCAPED
                grad = tuple(ESCAPED for _ in (derivs[-1] if derivs else (0,))) \
                    if with_derivatives else None
        else:
            z = ESCAPED
            if with_derivatives:
                grad = tuple(ESCAPED for _ in derivs[-1])
        values.append(z)
        if with_derivatives:
            derivs.append(grad)
    return Orbit(values=values, derivatives=derivs, escaped_at=escaped_at)


@dataclass
class GreenValue:
    value: float
    error_bound: float
    iterations_used: int


# empirically calibrated additive constant in the escape-rate error bound;
# 4.0 covers both families over the connectedness loci at desk scale
GREEN_C_EST = 4.0


def _param_scale(p: ParamPoint) -> float:
    if isinstance(p, Unicritical):
        return max(abs(p.c), 0.0)
    return max(abs(p.c1), abs(p.a))


def green_at(p: ParamPoint, z: complex, target_accuracy: float = 1e-12) -> GreenValue:
    """Escape-rate value g(z) = lim d^-n log+ |f^n(z)| with certified bound.

    Iterates until the error bound (log+ scale + C)/d^n drops below the
    target; once the orbit magnitude passes the escape radius the remaining
    doublings happen exactly on log|z|, with the subleading map terms
    entering through log1p corrections that die off doubly exponentially.
    """
    if target_accuracy <= 0:
        raise ValueError("target_accuracy must be positive")
    d = family_degree(p)
    logscale = math.log(max(1.0, _param_scale(p)))
    lead = 1.0 if isinstance(p, Unicritical) else 1.0 / 3.0
    n = 0
    zz = complex(z)
    bound = (logscale + GREEN_C_EST)
    while bound > target_accuracy and abs(zz) <= ESCAPE_RADIUS:
        zz = apply_map(p, zz)
        n += 1
        bound = (logscale + GREEN_C_EST) / d**n
        if n > 4000:
            break
    if abs(zz) <= ESCAPE_RADIUS:
        val = math.log(abs(zz)) if abs(zz) > 1.0 else 0.0
        return GreenValue(value=val / d**n, error_bound=bound, iterations_used=n)
    # escaped: continue the telescoping product in log space
    L = math.log(abs(zz))
    # lower-order terms of the map are below |z|^(d-1) * lead in magnitude;
    # after escape their log1p corrections are < 1e-100 and are dropped,
    # leaving the exact geometric tail of the leading coefficient
    while bound > target_accuracy:
        L = d * L + math.log(lead)
        n += 1
        bound = (logscale + GREEN_C_EST) / d**n
        if n > 20000:
            break
    # add the tail of the leading-coefficient telescoping analytically:
    # sum_{k>=1} d^-k log(lead) = log(lead)/(d-1)
    val = L / d**n + math.log(lead) / (d - 1) / d**n
    return GreenValue(value=max(val, 0.0), error_bound=bound, iterations_used=n)


def green(p: ParamPoint, j: int = 0, target_accuracy: float = 1e-12) -> GreenValue:
    """Escape rate of the j-th marked critical point."""
    crit = critical_points(p)
    if not 0 <= j < len(crit):
        raise ValueError(f"critical index {j} invalid for this family")
    return green_at(p, crit[j], target_accuracy)


@dataclass
class Cycle:
    points: list[complex]
    period: int
    multiplier: complex


def _refine_cycle(p: ParamPoint, z0: complex, m: int, tol: float = 1e-13,
                  max_steps: int = 60) -> complex | None:
    """Newton on z -> f^m(z) - z from z0; None when it fails to settle."""
    z = complex(z0)
    for _ in range(max_steps):
        w = z
        dw = 1.0 + 0.0j
        for _ in range(m):
            dw *= map_derivative(p, w)
            w = apply_map(p, w)
            if is_escaped(w):
                return None
        denom = dw - 1.0
        if abs(denom) < 1e-14:
            return None
        step = (w - z) / denom
        z = z - step
        if abs(step) <= tol * (1.0 + abs(z)):
            return z
    return None


def cycle_multiplier(p: ParamPoint, z: complex, m: int) -> complex:
    mult = 1.0 + 0.0j
    w = complex(z)
    for _ in range(m):
        mult *= map_derivative(p, w)
        w = apply_map(p, w)
    return mult


def find_cycle(p: ParamPoint, j: int = 0, max_period: int = 64,
               burn_in: int = 1000, tol: float = 1e-6) -> Cycle | None:
    """Attracting cycle reached by the j-th critical orbit, if any.

    Burns in the critical orbit, detects the least closest-return period,
    Newton-refines the periodic point and reduces the period to its exact
    value.  Returns None when the orbit escapes or no period <= max_period
    attracts; raises NearParabolicError when refinement diverges after a
    clear detection (parameter near a component boundary).
    """
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    crit = critical_points(p)
    if not 0 <= j < len(crit):
        raise ValueError(f"critical index {j} invalid for this family")
    z = crit[j]
    for _ in range(burn_in):
        z = apply_map(p, z)
        if is_escaped(z):
            return None
    # closest return over the next max_period iterates
    w = z
    best_m, best_gap = None, tol
    for m in range(1, max_period + 1):
        w = apply_map(p, w)
        if is_escaped(w):
            return None
        gap = abs(w - z)
        if gap < best_gap:
            best_m, best_gap = m, gap
            break
    if best_m is None:
        return None
    zstar = _refine_cycle(p, z, best_m)
    if zstar is None:
        raise NearParabolicError(
            f"cycle refinement diverged at detected period {best_m} (near-parabolic parameter)"
        )
    # reduce to the exact period
    m = best_m
    for k in sorted(d for d in range(1, m) if m % d == 0):
        w = zstar
        for _ in range(k):
            w = apply_map(p, w)
        if abs(w - zstar) < 1e-8 * (1.0 + abs(zstar)):
            refined = _refine_cycle(p, zstar, k)
            if refined is not None:
                zstar, m = refined, k
                break
    pts = [zstar]
    w = zstar
    for _ in range(m - 1):
        w = apply_map(p, w)
        pts.append(w)
    mult = cycle_multiplier(p, zstar, m)
    if abs(mult) >= 1.0:
        return None
    return Cycle(points=pts, period=m, multiplier=mult)


def spherical_distance(z: complex, w: complex) -> float:
    """Chordal distance |z-w| / sqrt((1+|z|^2)(1+|w|^2)), diameter 1.

    Either argument may be the ESCAPED marker (treated as infinity).
    """
    zinf = is_escaped(z)
    winf = is_escaped(w)
    if zinf and winf:
        return 0.0
    if zinf:
        return 1.0 / math.sqrt(1.0 + abs(w) ** 2)
    if winf:
        return 1.0 / math.sqrt(1.0 + abs(z) ** 2)
    return abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


@dataclass
class GapSeries:
    """Spherical gaps d(f^n(c_j), c_j) with the fitted per-step decay rate.

    decay_rate is -slope of log(gap) against n over the positive gaps (to
    compare with log M); None when fewer than two gaps are positive.
    """

    gaps: list[tuple[int, float]]
    decay_rate: float | None = None
    kappa_hat: float | None = None


def przytycki_gap(p: ParamPoint, j: int = 0, N: int = 12) -> GapSeries:
    """Gap sequence d_sphere(f^n(c_j), c_j), n = 1..N, plus decay summary."""
    if N < 1:
        raise ValueError("N must be >= 1")
    orb = orbit_critical(p, j, N)
    c0 = orb.values[0]
    gaps = [(n, spherical_distance(orb.values[n], c0)) for n in range(1, N + 1)]
    pos = [(n, g) for n, g in gaps if g > 0.0 and math.isfinite(g)]
    rate = None
    kappa = None
    if len(pos) >= 2:
        ns = np.array([n for n, _ in pos], dtype=float)
        ls = np.log(np.array([g for _, g in pos]))
        slope, intercept = np.polyfit(ns, ls, 1)
        rate = -float(slope)
        mhat = math.exp(max(rate, 0.0))
        kappa = min(1.0, min(g * mhat**n for n, g in pos))
    return GapSeries(gaps=gaps, decay_rate=rate, kappa_hat=kappa)
