import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergmanlab import domain as dm


def test_rho1_examples(bidisc, hull):
    assert bidisc.rho1(0.5) == 1.0
    assert bidisc.rho1(1.0) == 1.0
    # supporting line through (0, 1.5) and (1, 1)
    assert hull.rho1(0.5) == pytest.approx(1.5 - 0.5 * 0.5, abs=1e-15)


def test_rho2_examples(bidisc, hull):
    assert bidisc.rho2(0.7) == 1.0
    assert hull.rho2(1.25) == pytest.approx(0.5, abs=1e-15)
    assert hull.rho2(0.5) == 1.0


def test_s_is_profile_height_at_origin(hull):
    assert hull.s == 1.5
    assert hull.normalized


@pytest.mark.parametrize("make,flags", [
    (dm.bidisc, (True, True)),
    (lambda: dm.trapezoid_hull(1.5), (True, False)),
    (dm.ball, (False, False)),
])
def test_classify_boundary(make, flags):
    c = make().classify_boundary()
    assert (c.has_vertical_disc, c.has_horizontal_disc) == flags


def test_convexity_certificate(bidisc, hull):
    assert bidisc.check_convex_shadow(101) == (True, 0.0)
    assert hull.check_convex_shadow(101) == (True, 0.0)
    ok, worst = dm.from_expression("1 + 0.2*sin(6*x)").check_convex_shadow(101)
    assert not ok and worst > 0


def test_normalize_examples():
    d = dm.polydisc(2.0, 2.0).normalize_vertical_disc()
    assert d.x_max == 1.0 and d.rho1(0.3) == 1.0
    h = dm.hull([(0, 0), (2, 0), (2, 2), (0, 3)]).normalize_vertical_disc()
    assert h.shadow.vertices == dm.trapezoid_hull(1.5).shadow.vertices


def test_normalize_is_idempotent_on_normalized_input(hull):
    assert hull.normalize_vertical_disc().key == hull.key


def test_normalize_without_vertical_disc_fails():
    with pytest.raises(dm.PreconditionError):
        dm.ball().normalize_vertical_disc()


def test_nonconvex_hull_points_rejected_or_hulled():
    # interior points are discarded by the hull construction
    d = dm.hull([(0, 0), (1, 0), (1, 1), (0, 1.5), (0.5, 0.5)])
    assert d.key == dm.trapezoid_hull(1.5).key


def test_expression_profile_validated():
    with pytest.raises(Exception):
        dm.from_expression("__import__('os')")


def test_contains(bidisc, hull):
    assert bidisc.contains(0.5, 0.5)
    assert not bidisc.contains(1.0, 0.5)
    assert hull.contains(0.1, 1.4)
    assert not hull.contains(0.5, 1.3)


# -- properties -------------------------------------------------------------------------
profiles = st.sampled_from([
    dm.trapezoid_hull(1.5),
    dm.trapezoid_hull(2.0),
    dm.ball(),
    dm.from_expression("sqrt(1 - x**2/2)", 1.0),
    dm.from_samples([0, 0.4, 0.8, 1.0], [1.3, 1.2, 1.0, 0.7]),
])


@given(profiles, st.floats(0.01, 0.99), st.floats(1e-4, 1e-2))
def test_rho2_is_one_sided_inverse(d, frac, eps):
    y = frac * d.s
    x = d.rho2(y)
    tol = 1e-9
    if x + eps <= d.x_max:
        assert d.rho1(x + eps) <= y + tol
    if x - eps >= 0:
        assert d.rho1(x - eps) >= y - tol


@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.floats(1.05, 3.0))
def test_normalize_idempotent_and_exact(a, b, s):
    d = dm.hull([(0, 0), (a, 0), (a, b), (0, s * b)])
    n = d.normalize_vertical_disc()
    assert n.x_max == 1.0 and n.rho1(1.0) == 1.0
    assert n.normalize_vertical_disc().key == n.key


@given(profiles)
def test_transpose_swaps_classification(d):
    c, t = d.classify_boundary(), d.transpose().classify_boundary()
    assert (c.has_vertical_disc, c.has_horizontal_disc) == (t.has_horizontal_disc, t.has_vertical_disc)


@given(profiles)
def test_profile_is_non_increasing(d):
    x = np.linspace(0, d.x_max, 257)
    assert np.all(np.diff(d.rho1(x)) <= 1e-12)
