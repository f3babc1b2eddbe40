import numpy as np
import pytest

from bergmanlab import domain as dm
from bergmanlab import symbols as sy
from bergmanlab.expressions import ExpressionError, full_symbol, radial_function


def test_quasi_homogeneous_evaluates_phase():
    q = sy.conj_z2()
    w2 = 0.3 * np.exp(0.7j)
    assert q(0.5, w2) == pytest.approx(np.conj(w2), abs=1e-15)


def test_pullback_and_transpose():
    q = sy.quasi_homogeneous("x + 2*y", (1, -1))
    p = q.pullback(2.0, 3.0)
    assert p.part(0.5, 0.5) == pytest.approx(1.0 + 3.0)
    t = q.transpose()
    assert t.J == (-1, 1) and t.part(0.2, 0.1) == pytest.approx(0.1 + 0.4)


def test_sup_norm_bound_covers_grid(hull):
    q = sy.quasi_homogeneous("1.5 - y")
    assert q.sup_norm(hull) >= 1.5


def test_sampled_from_complex_coordinates():
    f = sy.sampled("z1*conjugate(z2)", 8, 8)
    assert f(0.5j, 0.2) == pytest.approx(0.1j)


def test_power_of_two_grid_required():
    with pytest.raises(ValueError):
        sy.sampled("x", 12, 8)


@pytest.mark.parametrize("bad", ["__import__('os')", "x.__class__", "open('f')", "x; y", "lambda: 1"])
def test_unsafe_expressions_rejected(bad):
    with pytest.raises(ExpressionError):
        radial_function(bad)


def test_unknown_names_rejected():
    with pytest.raises(ExpressionError):
        full_symbol("x + theta3")


def test_shadow_grid_inside_closed_shadow(hull):
    X, Y = sy.shadow_grid(hull, 9)
    assert np.all(Y <= hull.rho1(X) + 1e-15)
