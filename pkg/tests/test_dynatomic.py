import numpy as np
import pytest

from paramlab import dynamics as dyn
from paramlab import dynatomic as dt
from paramlab import polycore as pc
from paramlab.errors import LowerPeriodDegeneracyError


def test_critical_orbit_poly_examples():
    assert np.allclose(dt.critical_orbit_poly(2, 1).coeffs, [0, 1])
    assert np.allclose(dt.critical_orbit_poly(2, 2).coeffs, [0, 1, 1])
    assert np.allclose(dt.critical_orbit_poly(2, 3).coeffs, [0, 1, 1, 2, 1])
    assert dt.critical_orbit_poly(2, 3).exact


def test_critical_orbit_poly_caps():
    with pytest.raises(ValueError):
        dt.critical_orbit_poly(2, 21, degree_cap=2**19)


def test_exact_period_poly_examples():
    assert np.allclose(dt.exact_period_poly(2, 1).poly.coeffs, [0, 1])
    assert np.allclose(dt.exact_period_poly(2, 2).poly.coeffs, [1, 1])
    e3 = dt.exact_period_poly(2, 3)
    assert np.allclose(e3.poly.coeffs, [1, 1, 2, 1])
    assert e3.division_residual <= 1e-8


@pytest.mark.parametrize("d,n", [(2, 4), (2, 6), (2, 8), (3, 4), (3, 6)])
def test_exact_period_degree_consistency(d, n):
    e = dt.exact_period_poly(d, n)
    assert e.poly.degree == pc.exact_period_degree(d, n) // d


def _implicit_qn_polish(roots, n, steps=4):
    # dense coefficients of Q_n are ill-conditioned; refine through the
    # orbit recursion, which is accurate near the Multibrot set
    c = np.array(roots, dtype=complex)
    for _ in range(steps):
        q = np.zeros_like(c)
        dq = np.zeros_like(c)
        for _ in range(n):
            dq = 2 * q * dq + 1.0
            q = q * q + c
        c = c - q / dq
    return c


@pytest.mark.parametrize("n", range(1, 7))
def test_root_set_identity_small(n):
    # union over k|n of exact-period roots = roots of Q_n (multiset, 1e-8)
    all_roots = []
    for k in pc.divisors(n):
        rs = pc.aberth_roots(dt.exact_period_poly(2, k).poly, tol=1e-12)
        all_roots.extend(_implicit_qn_polish(rs.roots, k))
    qroots = pc.aberth_roots(dt.critical_orbit_poly(2, n), tol=1e-12).roots
    qroots = _implicit_qn_polish(qroots, n)
    assert len(all_roots) == len(qroots) == 2 ** (n - 1)
    used = np.zeros(len(qroots), dtype=bool)
    for r in all_roots:
        d = np.abs(qroots - r)
        d[used] = np.inf
        i = int(np.argmin(d))
        assert d[i] < 1e-8
        used[i] = True


def test_top_coeffs_against_dense():
    for n in range(1, 9):
        full = dt._qn_int_coeffs(2, n)[::-1]  # descending
        top = dt.critical_orbit_top_coeffs(2, n, 5)
        assert top == full[: len(top)]


def test_q16_subleading_mean():
    top = dt.critical_orbit_top_coeffs(2, 16, 2)
    degree = 2**15
    assert top[0] == 1
    assert top[1] == 2**14
    assert -top[1] / degree == -0.5


def test_pnj_examples():
    v = dt.pnj_value(dyn.CubicModuli(1.0, 0.0), 1, 0, with_gradient=False)
    assert v == 0
    v = dt.pnj_value(dyn.CubicModuli(0.0, 1.0), 2, 0, with_gradient=False)
    assert v == pytest.approx(4.0 / 3.0)
    v = dt.pnj_value(dyn.CubicModuli(0.0, 1.0), 1, 0, with_gradient=False)
    assert v == pytest.approx(1.0)


def test_pnj_lower_period_degeneracy():
    # a=0, c1=1: critical point 0 is fixed, so n=2 hits the k=1 denominator
    with pytest.raises(LowerPeriodDegeneracyError) as e:
        dt.pnj_value(dyn.CubicModuli(1.0, 0.0), 2, 0)
    assert e.value.divisor == 1


def test_pnj_gradient_matches_finite_differences():
    rng = np.random.default_rng(11)
    h = 1e-6
    checked = 0
    for _ in range(12):
        p = dyn.CubicModuli(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                            complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)))
        for j in (0, 1):
            for n in (1, 2, 3, 4):
                try:
                    v, g = dt.pnj_value(p, n, j)
                    vp = dt.pnj_value(dyn.CubicModuli(p.c1 + h, p.a), n, j, False)
                    vm = dt.pnj_value(dyn.CubicModuli(p.c1 - h, p.a), n, j, False)
                    fd1 = (vp - vm) / (2 * h)
                    vp = dt.pnj_value(dyn.CubicModuli(p.c1, p.a + h), n, j, False)
                    vm = dt.pnj_value(dyn.CubicModuli(p.c1, p.a - h), n, j, False)
                    fd2 = (vp - vm) / (2 * h)
                except (ValueError, LowerPeriodDegeneracyError):
                    continue
                scale = max(1.0, abs(g[0]), abs(g[1]))
                assert abs(fd1 - g[0]) <= 1e-5 * scale
                assert abs(fd2 - g[1]) <= 1e-5 * scale
                checked += 1
    assert checked > 20


def test_dynatomic_in_z_examples():
    c = 0.3 + 0.2j
    p1 = dt.dynatomic_in_z(dyn.Unicritical(2, c), 1)
    assert np.allclose(p1.coeffs, [c, -1, 1])
    p2 = dt.dynatomic_in_z(dyn.Unicritical(2, c), 2)
    assert np.allclose(p2.coeffs, [c + 1, 1, 1])
    r = pc.aberth_roots(dt.dynatomic_in_z(dyn.Unicritical(2, 0.0), 2)).roots
    want = np.exp(2j * np.pi * np.array([1, 2]) / 3.0)
    for w in want:
        assert np.min(np.abs(r - w)) < 1e-10


def test_dynatomic_cap():
    with pytest.raises(ValueError):
        dt.dynatomic_in_z(dyn.Unicritical(2, 0.1), 7)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dynatomic_roots_have_exact_period(n):
    # roots of the dynatomic polynomial are periodic of exact period n
    # (generic parameter: no root-of-unity multiplier subtlety)
    p = dyn.Unicritical(2, 0.21 + 0.13j)
    roots = pc.aberth_roots(dt.dynatomic_in_z(p, n), tol=1e-12).roots
    for z in roots:
        w = z
        for k in range(1, n + 1):
            w = dyn.apply_map(p, w)
            if k < n:
                assert abs(w - z) > 1e-6
        assert abs(w - z) < 1e-7


def test_resultant_examples():
    # Res_z(z^2 - z + c, 2z - w) = 4c - 2w + w^2
    for c, w in [(0.3 + 0.1j, 0.2), (1.5, -0.7 + 0.4j), (0j, 1j)]:
        pz = pc.Polynomial([c, -1, 1])
        qz = pc.Polynomial([-w, 2])
        assert dt.resultant_oracle(pz, qz) == pytest.approx(4 * c - 2 * w + w * w)
    # sign convention
    assert dt.resultant_oracle(pc.Polynomial([-1.0, 1]), pc.Polynomial([-2.0, 1])) \
        == pytest.approx(2.0 - 1.0)
    # Res_z(z^2 + z + c + 1, 2z - w) at w = 0 is 4(c+1)
    c = 0.37 - 0.21j
    assert dt.resultant_oracle(pc.Polynomial([c + 1, 1, 1]), pc.Polynomial([0, 2])) \
        == pytest.approx(4 * (c + 1))


def test_resultant_cap_and_degenerate():
    with pytest.raises(ValueError):
        dt.resultant_oracle(pc.Polynomial([1.0]), pc.Polynomial([2.0]))
    big = pc.Polynomial([0.0] * 60 + [1.0])
    with pytest.raises(ValueError):
        dt.resultant_oracle(big, big)
