"""Critical-orbit polynomials, exact-period factors, dynatomic polynomials,
and the small-degree resultant oracle.

The Q_n recursion Q_n = Q_{n-1}^d + c is carried out in exact integer
arithmetic; the Moebius-inverted exact-period factor divides out the lower
periods.  For the cubic moduli family the exact-period functions are never
expanded in (c1, a): they are evaluated pointwise through the orbit product
with gradients propagated alongside (coefficient blowup in two variables is
severe, and Newton solving only needs values and gradients).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dynamics as dyn
from . import polycore as pc
from .errors import InexactDivisionError, LowerPeriodDegeneracyError

MAX_DENSE_DEGREE = 2**19
DYNATOMIC_Z_CAP = 6


def _qn_int_coeffs(d: int, n: int) -> list[int]:
    q = [0, 1]
    for _ in range(n - 1):
        out = q
        for _ in range(d - 1):
            out = pc.intpoly_mul(out, q)
        out[1] += 1
        q = out
    return q


def critical_orbit_poly(d: int, n: int, degree_cap: int = MAX_DENSE_DEGREE) -> pc.Polynomial:
    """Q_n(c) = p_c^n(0) as a dense polynomial in c.

    Built by the exact integer recursion; the result keeps its integers
    (exact flag) when every coefficient fits in 64 bits, otherwise only the
    float image is kept.  Degrees above the cap are refused, and degrees
    whose integer coefficients exceed the double range raise since the
    float image would be meaningless.
    """
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    if d ** (n - 1) > degree_cap:
        raise ValueError(f"degree {d**(n-1)} exceeds cap {degree_cap}")
    ints = _qn_int_coeffs(d, n)
    poly = pc.Polynomial.from_int_coeffs(ints)  # raises when floats overflow
    if max(abs(v) for v in ints) > 2**63 - 1:
        poly.int_coeffs = None
    return poly


def critical_orbit_top_coeffs(d: int, n: int, k: int) -> list[int]:
    """Top k coefficients of Q_n (descending from c^degree), exact.

    The recursion preserves leading blocks: the top-k window of Q_{n-1}^d
    only involves the top-k window of Q_{n-1}, so the full (astronomically
    large) expansion is never formed.
    """
    if d < 2 or n < 1 or k < 1:
        raise ValueError("need d >= 2, n >= 1, k >= 1")
    top = [1]  # Q_1 = c
    deg = 1
    for _ in range(n - 1):
        cur = top[:k]
        out = cur
        for _ in range(d - 1):
            prod = [0] * min(k, len(out) + len(cur) - 1)
            for i, a in enumerate(out):
                if a and i < k:
                    for j, b in enumerate(cur):
                        if i + j < k:
                            prod[i + j] += a * b
            out = prod
        deg = deg * d
        if deg + 1 <= k:
            # window reaches the constant term: add the +c contribution
            pass
        top = out
        if len(top) > k:
            top = top[:k]
        # the +c term touches positions deg-1 (coefficient 1): descending
        # index deg-1 -> window position deg-(deg-1) = 1... only when k > deg-1
        if k > deg - 1:
            while len(top) < k:
                top.append(0)
            top[deg - 1] += 1
    while len(top) < min(k, deg + 1):
        top.append(0)
    return top[: min(k, deg + 1)]


@dataclass
class ExactPeriodPoly:
    """Moebius product over k|n of Q_k^{mu(n/k)}, reduced to a polynomial."""

    d: int
    n: int
    poly: pc.Polynomial
    division_residual: float
    exact: bool


def exact_period_poly(d: int, n: int, degree_cap: int = MAX_DENSE_DEGREE) -> ExactPeriodPoly:
    """Polynomial whose roots are the centers of exact period n.

    The Moebius product is formed entirely in exact integers (float
    synthetic division is unstable once the Q_k coefficients get large), so
    the division residual is identically zero; conversion to floats happens
    once at the end and refuses degrees whose coefficients leave the double
    range.
    """
    expected_degree = pc.exact_period_degree(d, n) // d
    if expected_degree > degree_cap:
        raise ValueError(f"degree {expected_degree} exceeds cap {degree_cap}")
    num = [1]
    den = [1]
    for k in pc.divisors(n):
        mu = pc.mobius(n // k)
        if mu == 1:
            num = pc.intpoly_mul(num, _qn_int_coeffs(d, k))
        elif mu == -1:
            den = pc.intpoly_mul(den, _qn_int_coeffs(d, k))
    quot = pc.intpoly_divexact(num, den)
    poly = pc.Polynomial.from_int_coeffs(quot)
    if max(abs(v) for v in quot) > 2**63 - 1:
        poly.int_coeffs = None
    if poly.degree != expected_degree:
        raise InexactDivisionError(float("nan"), 1e-8)
    return ExactPeriodPoly(d=d, n=n, poly=poly, division_residual=0.0, exact=True)


def pnj_value(p: dyn.CubicModuli, n: int, j: int,
              with_gradient: bool = True):
    """Exact-period-n function of critical point j, with its gradient.

    Product over k|n of (P^k(c_j) - c_j)^{mu(n/k)} evaluated through the
    orbit; the gradient in (c1, a) accumulates by the quotient rule.  A
    vanishing denominator factor means c_j already returns at a lower
    period k and raises LowerPeriodDegeneracyError naming that k.
    """
    if not isinstance(p, dyn.CubicModuli):
        raise TypeError("pnj_value is defined on the cubic moduli family")
    if j not in (0, 1):
        raise ValueError("critical index must be 0 or 1")
    if n < 1:
        raise ValueError("period must be >= 1")
    orb = dyn.orbit_critical(p, j, n, with_derivatives=True)
    if orb.escaped_at is not None:
        raise ValueError("critical orbit escaped; P_{n,j} value overflows")
    cj = orb.values[0]
    gcj = np.array(orb.derivatives[0])
    value = 1.0 + 0.0j
    loggrad = np.zeros(2, dtype=complex)
    zero_factor_grad = None
    zero_count = 0
    for k in pc.divisors(n):
        mu = pc.mobius(n // k)
        if mu == 0:
            continue
        f = orb.values[k] - cj
        gf = np.array(orb.derivatives[k]) - gcj
        if f == 0:
            if mu == -1 or k < n:
                raise LowerPeriodDegeneracyError(k)
            zero_count += 1
            zero_factor_grad = gf
            continue
        value *= f if mu == 1 else 1.0 / f
        loggrad += mu * gf / f
    if zero_count:
        # exactly at a root: gradient is the zero factor's gradient times
        # the rest of the product
        grad = zero_factor_grad * value if zero_count == 1 else np.zeros(2, dtype=complex)
        val = 0.0 + 0.0j
    else:
        val = value
        grad = value * loggrad
    if with_gradient:
        return val, grad
    return val


def pnj_batch(c1: np.ndarray, a: np.ndarray, n: int, j: int):
    """Vectorized P_{n,j} values and (c1, a)-gradients over parameter arrays.

    Points whose orbit escapes or that sit on a lower-period degeneracy come
    back as NaN (callers doing multistart or path tracking filter them);
    the scalar pnj_value is the contract-checking front end.
    """
    c1 = np.asarray(c1, dtype=complex)
    a = np.asarray(a, dtype=complex)
    z = np.zeros_like(c1) if j == 0 else c1.copy()
    gc1 = np.zeros_like(c1) if j == 0 else np.ones_like(c1)
    ga = np.zeros_like(c1)
    cj = z.copy()
    gcj_c1 = gc1.copy()
    gcj_a = ga.copy()
    a3 = a**3
    value = np.ones_like(c1)
    logg_c1 = np.zeros_like(c1)
    logg_a = np.zeros_like(c1)
    bad = np.zeros(c1.shape, dtype=bool)
    divs = pc.divisors(n)
    mus = {k: pc.mobius(n // k) for k in divs}
    for k in range(1, n + 1):
        fz = z * (z - c1)
        gc1_new = fz * gc1 - z**2 / 2.0
        ga_new = fz * ga + 3.0 * a**2
        z = z**3 / 3.0 - (c1 / 2.0) * z**2 + a3
        gc1, ga = gc1_new, ga_new
        with np.errstate(over="ignore", invalid="ignore"):
            bad |= ~np.isfinite(z) | (np.abs(z) > 1e50)
        if k in mus and mus[k] != 0:
            mu = mus[k]
            f = z - cj
            gf_c1 = gc1 - gcj_c1
            gf_a = ga - gcj_a
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                value = value * f if mu == 1 else value / f
                logg_c1 = logg_c1 + mu * gf_c1 / f
                logg_a = logg_a + mu * gf_a / f
    with np.errstate(invalid="ignore", over="ignore"):
        grad_c1 = value * logg_c1
        grad_a = value * logg_a
    value = np.where(bad, np.nan, value)
    grad_c1 = np.where(bad, np.nan, grad_c1)
    grad_a = np.where(bad, np.nan, grad_a)
    return value, grad_c1, grad_a


def dynatomic_in_z(p: dyn.ParamPoint, n: int, cap: int = DYNATOMIC_Z_CAP) -> pc.Polynomial:
    """Dynatomic polynomial in z at a fixed parameter (small n oracle)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise ValueError(f"n={n} exceeds the dynatomic oracle cap {cap}")
    z = pc.Polynomial([0.0, 1.0])
    fam = _family_poly(p)
    num = pc.Polynomial([1.0])
    den = pc.Polynomial([1.0])
    iterate = z
    iterates = {}
    for k in range(1, n + 1):
        iterate = pc.poly_compose(fam, iterate)
        iterates[k] = iterate
    for k in pc.divisors(n):
        mu = pc.mobius(n // k)
        if mu == 0:
            continue
        factor = iterates[k] - z
        if mu == 1:
            num = num * factor
        else:
            den = den * factor
    return pc.div_exact(num, den, tol=1e-8)


def _family_poly(p: dyn.ParamPoint) -> pc.Polynomial:
    if isinstance(p, dyn.Unicritical):
        coeffs = [p.c] + [0.0] * (p.d - 1) + [1.0]
        return pc.Polynomial(coeffs)
    return pc.Polynomial([p.a**3, 0.0, -p.c1 / 2.0, 1.0 / 3.0])


def resultant_oracle(pz: pc.Polynomial, qz: pc.Polynomial) -> complex:
    """Resultant of two z-polynomials as the Sylvester determinant.

    Convention: pz rows first with ascending coefficients, fixed so that
    Res(z - a, z - b) = b - a.  Degrees are capped (oracle use only).
    """
    if pz.is_zero() or qz.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if pz.degree + qz.degree > 64:
        raise ValueError("combined degree above the resultant oracle cap 64")
    if pz.degree == 0 and qz.degree == 0:
        raise ValueError("resultant needs a nonconstant polynomial")
    rows, size = pc.sylvester_matrix(list(pz.coeffs), list(qz.coeffs))
    m = np.array(rows, dtype=complex)
    sign, logdet = np.linalg.slogdet(m)
    if sign == 0:
        return 0.0 + 0.0j
    return complex(sign * np.exp(logdet))
