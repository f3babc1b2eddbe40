import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate as si

from bergmanlab.quadrature import QuadratureSpec, composite_rule, integrate, panel_edges


@pytest.mark.parametrize("e", [0, 1, 7, 40, 513])
def test_monomial_clustered_at_right_end(e):
    est = integrate(lambda x: x**e, 0.0, 1.0, hint_right=e)
    assert est.ok
    assert est.value == pytest.approx(1 / (e + 1), rel=1e-13)


def test_matches_scipy_on_smooth_integrand():
    f = lambda x: np.exp(-x) * np.cos(3 * x)
    ref, _ = si.quad(f, 0.0, 2.0, epsabs=1e-14, epsrel=1e-14)
    assert integrate(f, 0.0, 2.0).value == pytest.approx(ref, rel=1e-12)


def test_kink_resolved_by_breakpoint():
    f = lambda x: np.minimum(1.0, 1.5 - 0.5 * x) ** 3
    ref = float(mp.quad(lambda x: min(1, 1.5 - 0.5 * x) ** 3, [0, 1, 2]))
    assert integrate(f, 0.0, 2.0, breakpoints=[1.0]).value == pytest.approx(ref, rel=1e-13)


def test_error_estimate_reported():
    est = integrate(lambda x: np.sqrt(x), 0.0, 1.0, QuadratureSpec(max_refinements=0))
    assert est.error >= 0
    assert abs(est.value - 2 / 3) < 1e-6


def test_composite_rule_integrates_polynomials_exactly():
    x, w = composite_rule(panel_edges(3.0), 10)
    assert float(np.sum(w * x**19)) == pytest.approx(1 / 20, rel=1e-14)
    assert float(np.sum(w)) == pytest.approx(1.0, rel=1e-15)
    assert math.isclose(float(np.sum(w * x)), 0.5, rel_tol=1e-15)
