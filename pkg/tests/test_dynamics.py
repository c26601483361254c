import cmath
import math

import numpy as np
import pytest

from paramlab import dynamics as dyn
from paramlab.errors import NearParabolicError

# frozen from the high-iterate telescoping oracle (orbit of 0 under z^2+10)
GREEN_C10 = 1.175223358830179


def test_orbit_examples():
    orb = dyn.orbit_critical(dyn.Unicritical(2, 1.0), 0, 3)
    assert orb.values == [0, 1, 2, 5]
    orb = dyn.orbit_critical(dyn.Unicritical(2, -1.0), 0, 2)
    assert orb.values == [0, -1, 0]
    orb = dyn.orbit_critical(dyn.CubicModuli(0.0, 1.0), 0, 2)
    assert orb.values[0] == 0
    assert orb.values[1] == pytest.approx(1.0)
    assert orb.values[2] == pytest.approx(4.0 / 3.0)


def test_orbit_escape_marker():
    orb = dyn.orbit_critical(dyn.Unicritical(2, 1e60), 0, 6, with_derivatives=True)
    assert orb.escaped_at is not None
    assert dyn.is_escaped(orb.values[-1])
    assert dyn.is_escaped(orb.derivatives[-1][0])


@pytest.mark.parametrize("p,j", [
    (dyn.Unicritical(2, 0.1 + 0.2j), 0),
    (dyn.Unicritical(3, -0.3 + 0.1j), 0),
    (dyn.CubicModuli(0.4 - 0.2j, 0.3 + 0.1j), 0),
    (dyn.CubicModuli(0.4 - 0.2j, 0.3 + 0.1j), 1),
])
def test_orbit_derivatives_match_finite_differences(p, j):
    n = 8
    h = 1e-6
    orb = dyn.orbit_critical(p, j, n, with_derivatives=True)
    zn = orb.values[n]
    grads = orb.derivatives[n]
    if isinstance(p, dyn.Unicritical):
        perturbs = [lambda e: dyn.Unicritical(p.d, p.c + e)]
    else:
        perturbs = [lambda e: dyn.CubicModuli(p.c1 + e, p.a),
                    lambda e: dyn.CubicModuli(p.c1, p.a + e)]
    for g, mk in zip(grads, perturbs):
        plus = dyn.orbit_critical(mk(h), j, n).values[n]
        minus = dyn.orbit_critical(mk(-h), j, n).values[n]
        fd = (plus - minus) / (2 * h)
        assert abs(fd - g) <= 1e-5 * max(1.0, abs(g))


def test_green_examples():
    assert dyn.green(dyn.Unicritical(2, 0.0)).value == 0.0
    g = dyn.green(dyn.Unicritical(2, -1.0), 0, 1e-12)
    assert g.value <= g.error_bound
    g10 = dyn.green(dyn.Unicritical(2, 10.0), 0, 1e-12)
    assert g10.value == pytest.approx(GREEN_C10, abs=1e-12)
    delta = g10.value - math.log(10.0) / 2.0
    assert 0 < delta < 0.1


def test_green_invariance_property():
    # g(f(z)) = d g(z) at sampled non-critical points, within twice the bounds
    rng = np.random.default_rng(3)
    params = [dyn.Unicritical(2, 0.3 + 0.4j), dyn.Unicritical(3, -0.8),
              dyn.CubicModuli(0.5, 0.7), dyn.CubicModuli(-0.2 + 0.3j, 0.1 - 0.6j)]
    for p in params:
        for _ in range(8):
            z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            g1 = dyn.green_at(p, dyn.apply_map(p, z), 1e-12)
            g2 = dyn.green_at(p, z, 1e-12)
            d = dyn.family_degree(p)
            assert abs(g1.value - d * g2.value) <= 2.0 * (g1.error_bound + d * g2.error_bound)


def test_find_cycle_examples():
    c = dyn.find_cycle(dyn.Unicritical(2, 0.0))
    assert c.period == 1 and c.points == [0] and c.multiplier == 0
    c = dyn.find_cycle(dyn.Unicritical(2, -1.0))
    assert c.period == 2
    assert abs(c.multiplier) < 1e-10
    assert sorted(round(z.real) for z in c.points) == [-1, 0]
    c = dyn.find_cycle(dyn.Unicritical(2, -0.9))
    assert c.period == 2
    assert c.multiplier == pytest.approx(0.4, abs=1e-9)


def test_find_cycle_escape_returns_none():
    assert dyn.find_cycle(dyn.Unicritical(2, 1.0)) is None


def test_cycle_contract_properties():
    # attracting multiplier, distinct points, orbit closes up
    for c in [-0.9, -1.1, 0.2, -0.5 + 0.5j, -1.2 + 0.2j]:
        cyc = dyn.find_cycle(dyn.Unicritical(2, c), max_period=32)
        if cyc is None:
            continue
        assert abs(cyc.multiplier) < 1.0
        m = cyc.period
        for i, z in enumerate(cyc.points):
            nxt = dyn.apply_map(dyn.Unicritical(2, c), z)
            assert abs(nxt - cyc.points[(i + 1) % m]) < 1e-8
        pts = np.array(cyc.points)
        if m > 1:
            d = np.abs(pts[:, None] - pts[None, :]) + np.eye(m)
            assert d.min() > 1e-8
        prod = np.prod([dyn.map_derivative(dyn.Unicritical(2, c), z) for z in cyc.points])
        assert abs(prod - cyc.multiplier) < 1e-8 * (1 + abs(prod))


def test_spherical_distance():
    assert dyn.spherical_distance(0, 0) == 0.0
    assert dyn.spherical_distance(-1j, 0) == pytest.approx(1 / math.sqrt(2))
    assert dyn.spherical_distance(dyn.ESCAPED, 0) == pytest.approx(1.0)


def test_przytycki_gap_examples():
    # orbit of 0 under z^2+i: 0, i, -1+i, -i; chordal gap at n=3 is 1/sqrt2
    gs = dyn.przytycki_gap(dyn.Unicritical(2, 1j), 0, 3)
    assert gs.gaps[2][1] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    # fixed critical point: all gaps zero, no rate
    gs = dyn.przytycki_gap(dyn.Unicritical(2, 0.0), 0, 6)
    assert all(g == 0.0 for _, g in gs.gaps)
    assert gs.decay_rate is None


def test_przytycki_gap_c_minus2_oracle():
    # fitted decay must not exceed the grid-supremum spherical derivative
    gs = dyn.przytycki_gap(dyn.Unicritical(2, -2.0), 0, 8)
    assert all(g > 0 for _, g in gs.gaps)
    assert gs.kappa_hat is not None and 0 < gs.kappa_hat <= 1.0
    mhat = math.exp(gs.decay_rate) if gs.decay_rate is not None else 1.0
    # grid supremum of f#(z) = |f'|(1+|z|^2)/(1+|f|^2) over the sphere
    xs = np.linspace(-6, 6, 301)
    Z = xs[None, :] + 1j * xs[:, None]
    F = Z**2 - 2.0
    sph = 2 * np.abs(Z) * (1 + np.abs(Z) ** 2) / (1 + np.abs(F) ** 2)
    m_grid = float(sph.max())
    assert max(mhat, 1.0) <= m_grid + 1e-9
    # and the gaps dominate the fitted envelope
    for n, g in gs.gaps:
        assert g >= gs.kappa_hat * mhat ** (-n) - 1e-12
