import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergmanlab import symbols as sy
from bergmanlab import tauberian as tb

harmonic = lambda k: 1.0 / (k + 1.0)


def seq(fn, n=64, lam=1.0, name="s"):
    return tb.CoefficientSequence.from_function(fn, n, lam, 1.0, name)


def test_abel_value_examples():
    t = 0.99
    assert tb.abel_value(seq(harmonic), t).value == pytest.approx((1 - t) * -math.log(1 - t) / t, abs=1e-12)
    assert tb.abel_value(seq(lambda k: 0.0 * k), t).value == 0
    for t in (0.5, 0.9, 0.9999):
        assert tb.abel_value(seq(lambda k: np.ones_like(k, float)), t).value == pytest.approx(1, abs=1e-12)


def test_prefix_too_short_names_required_length():
    s = tb.CoefficientSequence(np.ones(10))
    with pytest.raises(tb.PrefixTooShort) as exc:
        tb.abel_value(s, 0.99)
    assert exc.value.need > 10


def test_cesaro_ratio_examples():
    s = seq(harmonic)
    n = 10**4
    exact = math.fsum(1 / (k + 1) for k in range(n + 1)) / (n + 1)
    assert tb.cesaro_ratio(s, n) == pytest.approx(exact, rel=1e-13)
    assert tb.cesaro_ratio(seq(lambda k: 0.0 * k), 50) == 0
    assert tb.cesaro_ratio(seq(lambda k: np.ones_like(k, float)), 777) == pytest.approx(1, rel=1e-15)


def test_report_verdicts():
    assert tb.tauberian_report(seq(harmonic)).verdict == "consistent"
    alt = tb.tauberian_report(seq(lambda k: np.where(k % 2 == 0, 1.0, -1.0) * (k + 1.0)))
    assert not alt.hypothesis and alt.verdict == "not-applicable"
    ones = tb.tauberian_report(seq(lambda k: np.ones_like(k, float)))
    assert ones.hypothesis and not ones.abel_to_zero and ones.verdict == "not-applicable"


def test_violation_is_reported_not_suppressed(monkeypatch):
    # hypotheses hold and Abel means decay; force non-decaying Cesaro ratios
    monkeypatch.setattr(tb, "cesaro_ratio", lambda s, n: 0.5)
    r = tb.tauberian_report(seq(harmonic))
    assert r.verdict == "violation"
    assert any("investigate" in n for n in r.notes)


def test_trend_to_zero():
    assert tb.trend_to_zero([0.5, 0.1, 0.01, 0.001], 1e-2)
    assert not tb.trend_to_zero([0.5, 0.1, 0.01, 0.02], 1e-1)
    assert not tb.trend_to_zero([1, 1, 1, 1], 1e-2)


def test_berezin_sequence_closed_form_on_bidisc(bidisc):
    s = tb.berezin_coefficient_sequence(bidisc, sy.quasi_homogeneous("(1-x**2)*(1-y**2)"), 0.5, n_terms=64)
    k = np.arange(1, 40)
    c = s.b[k] * (k + 1) * (k + 2)
    assert np.allclose(c, c[0], rtol=1e-9)
    assert s.hypothesis


def test_berezin_sequence_report_consistent(hull):
    phi = sy.quasi_homogeneous("(1-x)*(1.5-0.5*x-y)")
    for regrouped in (True, False):
        s = tb.berezin_coefficient_sequence(hull, phi, 0.5, regrouped=regrouped)
        r = tb.tauberian_report(s)
        assert r.hypothesis and r.verdict == "consistent"


def test_unnormalized_domain_rejected():
    from bergmanlab import domain as dm
    with pytest.raises(ValueError):
        tb.berezin_coefficient_sequence(dm.polydisc(2, 2), sy.constant(1.0), 0.5)


# -- properties ---------------------------------------------------------------------------
coef = st.lists(st.floats(-2, 2), min_size=8, max_size=8)


@given(coef, coef, st.floats(-3, 3), st.floats(0.1, 0.95), st.integers(0, 2000))
def test_abel_and_cesaro_are_linear(a, b, c, t, n):
    # bounded periodic sequences so that auto-extension stays cheap
    A, B = np.array(a), np.array(b)
    fa = lambda k: A[k % 8]
    fb = lambda k: B[k % 8]
    fc = lambda k: A[k % 8] + c * B[k % 8]
    sa, sb, sc = seq(fa, 16), seq(fb, 16), seq(fc, 16)
    va, vb, vc = (tb.abel_value(s, t).value for s in (sa, sb, sc))
    assert vc == pytest.approx(va + c * vb, abs=1e-10)
    for s in (sa, sb, sc):
        s.ensure(n + 1)
    assert tb.cesaro_ratio(sc, n) == pytest.approx(tb.cesaro_ratio(sa, n) + c * tb.cesaro_ratio(sb, n), abs=1e-10)
