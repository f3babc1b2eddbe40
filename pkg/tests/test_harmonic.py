import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as si

from bergmanlab import domain as dm
from bergmanlab import harmonic as hm
from bergmanlab import symbols as sy


def angular_oracle(f, J, x, y):
    """(1/4 pi^2) int int f e^{-i J.theta} by adaptive 2D quadrature."""
    def part(fn):
        return si.dblquad(lambda b, a: fn(a, b), 0, 2 * math.pi, 0, 2 * math.pi, epsabs=1e-12)[0]
    g = lambda a, b: f(x, y, a, b) * np.exp(-1j * (J[0] * a + J[1] * b))
    return (part(lambda a, b: g(a, b).real) + 1j * part(lambda a, b: g(a, b).imag)) / (4 * math.pi**2)


def test_projection_examples():
    x, y = np.array([0.2, 0.7]), np.array([0.5, 0.1])
    f = sy.sampled("z1", 16, 16)
    assert np.allclose(hm.project_QJ(f, (1, 0)).part(x, y), x, atol=1e-14)
    assert np.allclose(hm.project_QJ(f, (0, 1)).part(x, y), 0, atol=1e-14)


def test_projection_against_quadrature_oracle():
    f = sy.sampled("z1*conjugate(z2) + Abs(z2)**2", 16, 16)
    q = hm.project_QJ(f, (1, -1))
    ref = angular_oracle(f.func, (1, -1), 0.6, 0.3)
    assert q.part(0.6, 0.3) == pytest.approx(ref, abs=1e-10)
    assert ref == pytest.approx(0.18, abs=1e-10)


def test_nyquist_guard():
    with pytest.raises(ValueError):
        hm.project_QJ(sy.sampled("x*cos(theta1)", 8, 8), (2, 0))


def test_fejer_weights_k1():
    w = hm.FejerWeights(1)
    expect = {(0, 0): 1, (1, 0): 0.5, (-1, 0): 0.5, (0, 1): 0.5, (0, -1): 0.5}
    expect.update({(a, b): 0.25 for a in (-1, 1) for b in (-1, 1)})
    assert dict(w.items()) == pytest.approx(expect)


def test_cesaro_of_multiradial_is_identity(bidisc):
    f = sy.sampled("(1-x**2)*y + 0.3", 8, 8)
    assert hm.cesaro_mean(f, 5).sup_error(bidisc) < 1e-14


def test_cesaro_single_frequency_scaling(bidisc):
    f = sy.sampled("x*cos(theta1)", 16, 16)
    assert hm.cesaro_mean(f, 3).sup_error(bidisc) == pytest.approx(bidisc.x_max / 4, rel=1e-12)


def fejer_mass_oracle(k, delta):
    kern = lambda t: (np.sin((k + 1) * t / 2) / np.sin(t / 2)) ** 2 / (k + 1) if t != 0 else k + 1
    inner = si.quad(kern, -delta, delta, limit=500, points=[0])[0] / (2 * math.pi)
    return 1 - inner**2


@pytest.mark.parametrize("k,delta", [(8, 0.5), (64, 0.5), (20, 1.3)])
def test_fejer_tail_mass_matches_direct_quadrature(k, delta):
    assert hm.fejer_tail_mass(k, delta) == pytest.approx(fejer_mass_oracle(k, delta), abs=1e-9)


def test_fejer_tail_mass_examples():
    assert hm.fejer_tail_mass(16, math.pi - 1e-9) < 1e-8
    assert hm.fejer_tail_mass(64, 0.5) < hm.fejer_tail_mass(8, 0.5)
    assert hm.fejer_tail_mass(256, 0.5) < 1e-2


def test_torus_identity_bidisc_oracle(bidisc):
    r = 0.3**2
    oracle = (1 - r) ** 2 * (-math.log(1 - r) - r) / r**2
    res = hm.torus_average_hankel_identity(bidisc, sy.sampled("z2 + conjugate(z2)", 16, 16), (0.5, 0.3), 2)
    assert res.residual < 1e-6
    assert res.lhs == pytest.approx(oracle, abs=1e-9)


def test_torus_identity_quasi_homogeneous_and_holomorphic(hull):
    q = sy.sampled("x*(1.5 - y)*cos(theta1)", 16, 16)
    assert hm.torus_average_hankel_identity(hull, q, (0.4, 0.3j), 2).residual < 1e-6
    h = sy.sampled("z1 + z2**2", 16, 16)
    res = hm.torus_average_hankel_identity(hull, h, (0.4, 0.3j), 2)
    assert abs(res.lhs) < 1e-9 and abs(res.rhs) < 1e-8


def test_commutation_at_interior_point(hull):
    f = sy.sampled("x*y*cos(theta1 - theta2) + y**2*sin(2*theta2)", 16, 16)
    c = hm.berezin_fourier_commutation(hull, f, (0.3 + 0.2j, 0.4), (1, -1))
    assert c.difference < 1e-6


def test_nonzero_components(bidisc):
    f = sy.sampled("x*y*cos(theta1 - theta2)", 16, 16)
    assert hm.nonzero_components(f, bidisc, 2) == [(-1, 1), (1, -1)]


# -- properties ----------------------------------------------------------------------------
freqs = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
    st.tuples(st.floats(-1, 1), st.floats(-1, 1)),
    min_size=1, max_size=4,
)


def trig(coeffs):
    def f(x, y, a, b):
        out = 0
        for (j1, j2), (re, im) in coeffs.items():
            out = out + (re + 1j * im) * x ** abs(j1) * (1 + y) ** (1 + abs(j2)) * np.exp(1j * (j1 * a + j2 * b))
        return out
    return sy.SampledSymbol(f, 16, 16)


pts = (np.array([0.1, 0.5, 0.9]), np.array([0.7, 0.2, 0.4]))


@given(freqs, st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_projection_idempotent_and_orthogonal(coeffs, J, K):
    f = trig(coeffs)
    q = hm.project_QJ(f, J)
    again = hm.project_QJ(q, J)
    assert np.allclose(again.part(*pts), q.part(*pts), atol=1e-12)
    if J != K:
        assert np.allclose(hm.project_QJ(q, K).part(*pts), 0, atol=1e-12)


@given(freqs, st.integers(0, 3))
def test_parseval_partial_sums(coeffs, cutoff):
    f = trig(coeffs)
    c = hm.angular_coefficients(f, *pts)
    total = np.mean(np.abs(f.samples(*pts)) ** 2, axis=(-2, -1))
    part = sum(np.abs(c[:, j1 % 16, j2 % 16]) ** 2
               for j1 in range(-cutoff, cutoff + 1) for j2 in range(-cutoff, cutoff + 1))
    assert np.all(part <= total * (1 + 1e-12) + 1e-15)
    full = np.sum(np.abs(c) ** 2, axis=(-2, -1))
    assert np.allclose(full, total, rtol=1e-12)


@given(st.integers(0, 40), st.integers(-50, 50), st.integers(-50, 50))
def test_fejer_weight_properties(k, j1, j2):
    w = hm.FejerWeights(k)
    v = w.weight((j1, j2))
    assert 0 <= v <= 1
    assert w.weight((0, 0)) == 1
    assert v == w.weight((-j1, j2)) == w.weight((j1, -j2))
    if abs(j1) <= k and abs(j2) <= k:
        assert v > 0
