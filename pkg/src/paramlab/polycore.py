"""Number theory on small integers, dense complex polynomials, and
simultaneous root finding.

Everything here is exact or backward-stable substrate for the dynamical
modules: Moebius/divisor functions, the Moebius-inverted degree count,
dense polynomial arithmetic with exact division, an Aberth-Ehrlich
simultaneous root finder, and exact integer polynomial helpers (for
constructions whose coefficients must stay in Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InexactDivisionError

# irrational angle used to break symmetry of root initializations
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# number theory


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k != n // k:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def mobius(n: int) -> int:
    """Moebius function: (-1)^#prime-factors for squarefree n, else 0."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def sigma_divisors(n: int) -> int:
    """Sum of all divisors of n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sum(divisors(n))


def exact_period_degree(d: int, n: int) -> int:
    """Moebius-inverted degree count sum_{k|n} mu(n/k) d^k.

    Exact integer arithmetic at any size (Python integers do not wrap).
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sum(mobius(n // k) * d**k for k in divisors(n))


# ---------------------------------------------------------------------------
# dense complex polynomials


def _trim(coeffs: np.ndarray) -> np.ndarray:
    nz = np.nonzero(coeffs)[0]
    if len(nz) == 0:
        return coeffs[:1]
    return coeffs[: nz[-1] + 1]


class Polynomial:
    """Dense univariate polynomial, coeffs[i] multiplying z^i.

    Trailing zero coefficients are trimmed on construction, so the leading
    coefficient is nonzero for any nonzero polynomial.  When the polynomial
    was built in exact integer arithmetic the original integers are kept in
    ``int_coeffs`` (the ``exact`` flag); float coefficients are always
    available in ``coeffs``.
    """

    __slots__ = ("coeffs", "int_coeffs")

    def __init__(self, coeffs, int_coeffs=None):
        arr = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        if arr.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        self.coeffs = _trim(arr)
        if int_coeffs is not None:
            int_coeffs = tuple(int_coeffs[: len(self.coeffs)])
        self.int_coeffs = int_coeffs

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree 0 here by convention."""
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return self.int_coeffs is not None

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @classmethod
    def from_int_coeffs(cls, ints) -> "Polynomial":
        ints = list(ints)
        while len(ints) > 1 and ints[-1] == 0:
            ints.pop()
        try:
            arr = np.array([float(v.real) + 1j * float(v.imag) if isinstance(v, complex)
                            else float(v) for v in ints], dtype=complex)
        except OverflowError as exc:
            raise ValueError(
                "integer coefficients exceed double-precision range; "
                "dense float form is unavailable at this degree"
            ) from exc
        return cls(arr, int_coeffs=ints)

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        c = np.array([1.0 + 0j])
        for r in np.asarray(roots, dtype=complex):
            c = np.convolve(c, np.array([-r, 1.0 + 0j]))
        return cls(c)

    def __call__(self, z):
        """Horner evaluation; accepts scalars or arrays."""
        z = np.asarray(z, dtype=complex)
        out = np.full_like(z, self.coeffs[-1])
        for a in self.coeffs[-2::-1]:
            out = out * z + a
        if out.ndim == 0:
            return complex(out)
        return out

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0.0])
        k = np.arange(1, len(self.coeffs))
        ints = None
        if self.int_coeffs is not None:
            ints = [i * v for i, v in enumerate(self.int_coeffs)][1:]
        return Polynomial(self.coeffs[1:] * k, int_coeffs=ints)

    def _pair_ints(self, other):
        if self.int_coeffs is not None and getattr(other, "int_coeffs", None) is not None:
            return self.int_coeffs, other.int_coeffs
        return None, None

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] = self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        si, oi = self._pair_ints(other)
        ints = None
        if si is not None:
            ints = [0] * n
            for i, v in enumerate(si):
                ints[i] += v
            for i, v in enumerate(oi):
                ints[i] += v
        return Polynomial(a, int_coeffs=ints)

    def __sub__(self, other):
        other = _as_poly(other)
        return self + Polynomial(-other.coeffs,
                                 None if other.int_coeffs is None
                                 else [-v for v in other.int_coeffs])

    def __mul__(self, other):
        other = _as_poly(other)
        prod = np.convolve(self.coeffs, other.coeffs)
        si, oi = self._pair_ints(other)
        ints = None
        if si is not None:
            ints = intpoly_mul(list(si), list(oi))
        return Polynomial(prod, int_coeffs=ints)

    __rmul__ = __mul__
    __radd__ = __add__

    def __repr__(self):
        return f"Polynomial(deg={self.degree}, coeffs={np.array2string(self.coeffs, precision=6)})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([x])


def poly_compose(outer: Polynomial, inner: Polynomial) -> Polynomial:
    """outer(inner(z)) by Horner over polynomial arithmetic."""
    out = Polynomial([outer.coeffs[-1]])
    for a in outer.coeffs[-2::-1]:
        out = out * inner + Polynomial([a])
    return out


def div_exact(p: Polynomial, q: Polynomial, tol: float = 1e-10) -> Polynomial:
    """Quotient of an exact polynomial division, verified against tol.

    Requires q | p up to floating error: the remainder's max coefficient
    magnitude must not exceed tol * max|coeff(p)|, otherwise
    InexactDivisionError carries the offending remainder norm.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.int_coeffs is not None and q.int_coeffs is not None:
        try:
            quot = intpoly_divexact(list(p.int_coeffs), list(q.int_coeffs))
        except InexactDivisionError:
            raise
        return Polynomial.from_int_coeffs(quot)
    rem = p.coeffs.astype(complex).copy()
    qc = q.coeffs
    dq = len(qc) - 1
    if len(rem) - 1 < dq:
        raise InexactDivisionError(float(np.max(np.abs(rem))), tol)
    out = np.zeros(len(rem) - dq, dtype=complex)
    for i in range(len(out) - 1, -1, -1):
        c = rem[i + dq] / qc[-1]
        out[i] = c
        rem[i: i + dq + 1] -= c * qc
    scale = float(np.max(np.abs(p.coeffs)))
    rnorm = float(np.max(np.abs(rem[:dq]))) if dq > 0 else 0.0
    if rnorm > tol * max(scale, 1e-300):
        raise InexactDivisionError(rnorm, tol * scale)
    return Polynomial(out)


# ---------------------------------------------------------------------------
# exact integer polynomial helpers


def intpoly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def intpoly_divexact(a: list[int], b: list[int]) -> list[int]:
    """Exact division in Z[x]; raises InexactDivisionError otherwise."""
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    b = list(b)
    while len(b) > 1 and b[-1] == 0:
        b.pop()
    if b == [0]:
        raise ZeroDivisionError("division by zero polynomial")
    if len(a) < len(b):
        raise InexactDivisionError(float(max(abs(v) for v in a)), 0.0)
    out = [0] * (len(a) - len(b) + 1)
    rem = a
    for i in range(len(out) - 1, -1, -1):
        num = rem[i + len(b) - 1]
        if num % b[-1] != 0:
            raise InexactDivisionError(float(abs(num)), 0.0)
        c = num // b[-1]
        out[i] = c
        for j, bj in enumerate(b):
            rem[i + j] -= c * bj
    if any(rem):
        raise InexactDivisionError(float(max(abs(v) for v in rem)), 0.0)
    return out


def intpoly_derivative(a: list[int]) -> list[int]:
    if len(a) <= 1:
        return [0]
    return [i * v for i, v in enumerate(a)][1:]


def sylvester_matrix(p_ascending, q_ascending):
    """Sylvester matrix with p rows first, ascending coefficients.

    Convention fixed so that Res(z - a, z - b) = b - a.
    """
    p = list(p_ascending)
    q = list(q_ascending)
    m = len(p) - 1
    n = len(q) - 1
    if m < 0 or n < 0 or (m == 0 and n == 0):
        raise ValueError("resultant needs at least one nonconstant polynomial")
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + p + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + q + [0] * (m - 1 - i))
    return rows, size


def int_resultant(p_ints: list[int], q_ints: list[int]) -> int:
    """Exact resultant of integer polynomials via fraction-free elimination."""
    rows, size = sylvester_matrix(p_ints, q_ints)
    m = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for r in range(k + 1, size):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[size - 1][size - 1]


# ---------------------------------------------------------------------------
# simultaneous root finding


@dataclass
class RootSet:
    """Roots with their residuals |p(root)| and the sweep count used."""

    roots: np.ndarray
    residuals: np.ndarray
    iterations: int


def sort_complex_lex(z: np.ndarray, residuals: np.ndarray | None = None):
    """Deterministic (Re, Im) lexicographic order, residual as tiebreak."""
    if residuals is None:
        order = np.lexsort((z.imag, z.real))
        return z[order], None
    order = np.lexsort((residuals, z.imag, z.real))
    return z[order], residuals[order]


def aberth_start(degree: int, radius: float) -> np.ndarray:
    """Perturbed circle with an irrational angular offset.

    The offset breaks the symmetric stalls that bite polynomials with real
    coefficients; radii are mildly modulated so no two points coincide.
    """
    k = np.arange(degree)
    theta = 2.0 * np.pi * (k / degree + _GOLDEN)
    r = radius * (1.0 + 1e-3 * ((k * _GOLDEN) % 1.0))
    return r * np.exp(1j * theta)


def bini_start(coeffs: np.ndarray, rmax: float) -> np.ndarray:
    """Initial points on circles sized by the Newton polygon of |coeffs|.

    Upper convex hull of (i, log|a_i|): each hull segment (i1, i2) carries
    i2-i1 points at radius |a_{i1}/a_{i2}|^{1/(i2-i1)}, the natural root
    magnitude of that coefficient block (Bini's initialization).  Radii are
    clipped to rmax and angles carry an irrational offset per circle.
    """
    n = len(coeffs) - 1
    with np.errstate(divide="ignore"):
        logs = np.where(np.abs(coeffs) > 0, np.log(np.abs(coeffs)), -np.inf)
    hull = [0]
    for i in range(1, n + 1):
        if logs[i] == -np.inf:
            continue
        while len(hull) >= 2:
            i1, i2 = hull[-2], hull[-1]
            # keep hull upper-convex: slope to i must not exceed slope i1->i2
            if (logs[i2] - logs[i1]) * (i - i2) <= (logs[i] - logs[i2]) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append(i)
    pts = []
    circle = 0
    for (i1, i2) in zip(hull[:-1], hull[1:]):
        m = i2 - i1
        r = min(float(np.exp((logs[i1] - logs[i2]) / m)), rmax)
        k = np.arange(m)
        theta = 2.0 * np.pi * (k / m + _GOLDEN * (circle + 1) + circle / 7.0)
        pts.append(r * (1.0 + 1e-3 * ((k * _GOLDEN) % 1.0)) * np.exp(1j * theta))
        circle += 1
    return np.concatenate(pts)


def aberth_core(eval_fn, z0: np.ndarray, tol: float, max_iter: int):
    """Aberth-Ehrlich sweeps over an arbitrary evaluation callback.

    eval_fn(z) must return (newton_ratio p/p', residual, scale).  The
    repulsion term stays active for every point all the way (freezing points
    can strand two approximants on one root).  For severely ill-conditioned
    polynomials the residual criterion is a backward-error statement and the
    iteration dithers at the rounding floor, so each point keeps its
    best-so-far position; the sweep loop ends on correction stagnation or
    shortly after every best position satisfies the residual criterion.
    Returns (best_roots, best_residuals, sweeps).
    """
    z = z0.astype(complex).copy()
    best_z = z.copy()
    best_ratio = np.full(len(z), np.inf)
    best_res = np.full(len(z), np.inf)
    sweeps = 0
    first_pass = None
    block = 1024
    for sweeps in range(1, max_iter + 1):
        ratio, resid, scale = eval_fn(z)
        # scaled backward error, with the Newton ratio as fallback: the
        # coefficient scale vanishes at a root at the origin when a_0 = 0
        rel = np.minimum(resid / scale, np.abs(ratio) / (1.0 + np.abs(z)))
        rel = np.where(np.isfinite(resid), rel, np.inf)
        better = rel < best_ratio
        best_ratio = np.where(better, rel, best_ratio)
        best_res = np.where(better, resid, best_res)
        best_z = np.where(better, z, best_z)
        if first_pass is None and np.all(best_ratio <= tol):
            first_pass = sweeps
        s = np.zeros(len(z), dtype=complex)
        dmin = np.full(len(z), np.inf)
        for i0 in range(0, len(z), block):
            diff = z[i0: i0 + block, None] - z[None, :]
            ad = np.abs(diff)
            ad[ad == 0.0] = np.inf
            dmin[i0: i0 + block] = ad.min(axis=1)
            with np.errstate(divide="ignore", invalid="ignore"):
                inv = 1.0 / diff
            inv[~np.isfinite(inv)] = 0.0
            s[i0: i0 + block] = inv.sum(axis=1)
        denom = 1.0 - ratio * s
        standoff = np.abs(denom) < 0.1
        denom = np.where(np.abs(denom) < 1e-12, 1.0, denom)
        corr = ratio / denom
        # infinite residual marks a far-field point whose ratio is already a
        # radial jump; apply it without the repulsion denominator
        corr = np.where(np.isfinite(resid), corr, ratio)
        corr = np.where(np.isfinite(corr), corr, 0.1 + 0.1j)
        # never let one sweep fling a point across the configuration
        # (radial far-field jumps are exempt: they only shrink |z|)
        mag = np.abs(corr)
        cap = 0.5 * (1.0 + np.abs(z))
        # a point contesting an occupied root (denominator near zero) walks
        # in nearest-neighbour-sized steps instead of being flung at random
        cap = np.where(standoff, np.minimum(cap, 0.45 * dmin), cap)
        clamp = np.where((mag > cap) & np.isfinite(resid), cap / np.maximum(mag, 1e-300), 1.0)
        corr *= clamp
        z = z - corr
        # pull runaways back onto a deterministic circle
        rmax = 2.0 * np.max(np.abs(z0)) + 2.0
        far = np.abs(z) > rmax
        if far.any():
            idx = np.nonzero(far)[0]
            z[idx] = rmax * 0.5 * np.exp(2j * np.pi * (_GOLDEN * (idx + sweeps)))
        if np.max(np.abs(corr) / cap) < 1e-13:
            break
        if first_pass is not None and sweeps >= first_pass + 15:
            break
    return best_z, best_res, sweeps


def aberth_roots(p: Polynomial, tol: float = 1e-10, max_iter: int = 200) -> RootSet:
    """All complex roots of p by simultaneous Aberth-Ehrlich iteration.

    Starts from a perturbed circle sized by the Cauchy bound, freezes each
    approximation once |p(z)| <= tol * sum|a_i||z|^i (backward-error scale),
    then polishes every root with two Newton steps.  Roots come back sorted
    (Re, Im) lexicographically.
    """
    deg = p.degree
    if deg < 1:
        raise ValueError("aberth_roots needs degree >= 1")
    coeffs = p.coeffs
    dcoeffs = p.derivative().coeffs
    lead = np.abs(coeffs[-1])
    cauchy = 1.0 + float(np.max(np.abs(coeffs[:-1])) / lead)
    k = np.arange(deg, 0, -1)
    fujiwara = 2.0 * float(np.max((np.abs(coeffs[:-1]) / lead) ** (1.0 / k)))
    radius = min(cauchy, fujiwara)
    absc = np.abs(coeffs)

    def eval_fn(z):
        # direct Horner inside the unit disk, reversed form outside; the
        # reversed form keeps p/p' finite however far a sweep wanders
        ratio = np.empty_like(z)
        resid = np.empty(len(z))
        scale = np.empty(len(z))
        az = np.abs(z)
        inner = az <= 1.0
        if inner.any():
            zi = z[inner]
            val = np.full_like(zi, coeffs[-1])
            for a in coeffs[-2::-1]:
                val = val * zi + a
            dval = np.full_like(zi, dcoeffs[-1])
            for a in dcoeffs[-2::-1]:
                dval = dval * zi + a
            sc = np.full(len(zi), absc[-1])
            for a in absc[-2::-1]:
                sc = sc * az[inner] + a
            dval = np.where(np.abs(dval) < 1e-300, 1e-300, dval)
            ratio[inner] = val / dval
            resid[inner] = np.abs(val)
            scale[inner] = np.maximum(sc, 1e-300)
        if (~inner).any():
            zo = z[~inner]
            w = 1.0 / zo
            q = np.full_like(zo, coeffs[0])
            dq = np.zeros_like(zo)
            for a in coeffs[1:]:
                dq = dq * w + q
                q = q * w + a
            # p(z) = z^n q(w), p'(z) = z^(n-1) (n q(w) - w dq(w)), w = 1/z
            denom = deg * q - w * dq
            denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
            rat = zo * q / denom
            aw = np.abs(w)
            sq = np.full(len(zo), absc[0])
            for a in absc[1:]:
                sq = sq * aw + a
            with np.errstate(over="ignore"):
                mag = np.abs(zo) ** deg
            with np.errstate(over="ignore", invalid="ignore"):
                rs = mag * np.abs(q)
            # so far outside the root region that |p| overflows: jump
            # radially in log scale toward the |p| ~ sum|a_i| landing zone
            logp = deg * np.log(np.abs(zo)) + np.log(np.maximum(np.abs(q), 1e-300))
            target = np.log(max(float(absc.sum()), 1e-300))
            rho = np.exp(np.minimum(target - logp, 0.0) / deg)
            jump = zo * (1.0 - rho)
            far = ~np.isfinite(rs)
            rat = np.where(far, jump, rat)
            ratio[~inner] = rat
            resid[~inner] = np.where(far, np.inf, rs)
            with np.errstate(over="ignore", invalid="ignore"):
                scale[~inner] = np.maximum(mag * sq, 1e-300)
        return ratio, resid, scale

    def relerr(z):
        ratio, res, scale = eval_fn(z)
        rel = np.minimum(res / scale, np.abs(ratio) / (1.0 + np.abs(z)))
        return np.where(np.isfinite(res), rel, np.inf), res

    z0 = bini_start(coeffs, rmax=radius)
    z, res, sweeps = aberth_core(eval_fn, z0, tol, max_iter)
    # Newton polish, keeping a step only where it improves the residual
    rel, res = relerr(z)
    for _ in range(2):
        ratio, _, _ = eval_fn(z)
        z2 = z - np.where(np.isfinite(ratio), ratio, 0.0)
        rel2, res2 = relerr(z2)
        better = rel2 < rel
        z = np.where(better, z2, z)
        res = np.where(better, res2, res)
        rel = np.where(better, rel2, rel)
    if np.any(rel > tol):
        # strays contesting occupied roots: rerun them as Newton on the
        # polynomial deflated by every accepted root
        good = rel <= tol
        accepted = z[good]
        missing = int((~good).sum())
        filled = []
        for restart in range(40):
            if missing == 0:
                break
            m = 8 * missing
            seeds = aberth_start(m, radius * (0.4 + 0.6 * ((restart * _GOLDEN) % 1.0)))
            seeds *= np.exp(2j * np.pi * _GOLDEN * restart)
            occupied = np.concatenate([accepted] + ([np.array(filled)] if filled else []))
            znew = seeds
            for _ in range(60):
                ratio, resid, scale = eval_fn(znew)
                sacc = np.zeros(len(znew), dtype=complex)
                for i0 in range(0, len(occupied), 1024):
                    d = znew[:, None] - occupied[None, i0: i0 + 1024]
                    with np.errstate(divide="ignore", invalid="ignore"):
                        inv = 1.0 / d
                    inv[~np.isfinite(inv)] = 0.0
                    sacc += inv.sum(axis=1)
                with np.errstate(divide="ignore", invalid="ignore"):
                    wdef = 1.0 / (1.0 / ratio - sacc)
                wdef = np.where(np.isfinite(resid), wdef, ratio)
                wdef = np.where(np.isfinite(wdef), wdef, 0.0)
                mag = np.abs(wdef)
                cap = 0.5 * (1.0 + np.abs(znew))
                wdef *= np.where(mag > cap, cap / np.maximum(mag, 1e-300), 1.0)
                znew = znew - wdef
            reln, _ = relerr(znew)
            occ = np.concatenate([accepted] + ([np.array(filled)] if filled else []))
            for zc, rc in zip(znew[reln <= tol], reln[reln <= tol]):
                if missing == 0:
                    break
                if np.min(np.abs(occ - zc)) > 1e-10 * (1.0 + abs(zc)):
                    filled.append(zc)
                    occ = np.append(occ, zc)
                    missing -= 1
        if missing > 0:
            raise ConvergenceError(
                f"Aberth iteration did not converge within {max_iter} sweeps",
                worst_residual=float(np.max(rel)),
            )
        z = np.concatenate([accepted, np.array(filled)])
        rel, res = relerr(z)
        for _ in range(2):
            ratio, _, _ = eval_fn(z)
            z2 = z - np.where(np.isfinite(ratio), ratio, 0.0)
            rel2, res2 = relerr(z2)
            better = rel2 < rel
            z = np.where(better, z2, z)
            res = np.where(better, res2, res)
            rel = np.where(better, rel2, rel)
    z, res = sort_complex_lex(z, res)
    return RootSet(roots=z, residuals=res, iterations=sweeps)
