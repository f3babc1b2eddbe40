import math

import numpy as np
import pytest

from bergmanlab import domain as dm
from bergmanlab import symbols as sy
from bergmanlab import verify as vf
from bergmanlab.berezin import KernelTruncation, PathSpec


def test_moment_ratio_bidisc_exact(bidisc):
    r = vf.verify_moment_ratio(bidisc)
    assert r.status == "pass"
    assert max(r.measured["final_gap"].values()) < 1e-14


def test_moment_ratio_hull_alpha2_zero(hull):
    r = vf.verify_moment_ratio(hull, [0])
    assert r.status == "pass" and r.measured["final_gap"][0] < 2e-3


@pytest.mark.parametrize("d", [dm.ball(), dm.polydisc(2.0, 2.0)])
def test_moment_ratio_preconditions(d):
    with pytest.raises(dm.PreconditionError):
        vf.verify_moment_ratio(d)


def test_edge_limit_examples(bidisc, hull):
    r = vf.verify_edge_limit(bidisc, sy.conj_z2(), 1)
    assert r.measured["target"] == pytest.approx(math.sqrt(0.5), rel=1e-13)
    assert r.status == "pass"
    z = vf.verify_edge_limit(bidisc, sy.quasi_homogeneous("0"), 2)
    assert z.measured["target"] == 0 and z.measured["final"] == 0 and z.status == "pass"
    h = vf.verify_edge_limit(hull, sy.constant(1.0), 0)
    assert h.measured["target"] == pytest.approx(1.0, rel=1e-13) and h.status == "pass"


def test_edge_limit_rejects_x_dependent_symbol(bidisc):
    with pytest.raises(dm.PreconditionError):
        vf.verify_edge_limit(bidisc, sy.quasi_homogeneous("x*y"), 1)


def test_toeplitz_vanishing_symbol(bidisc):
    r = vf.verify_toeplitz_dichotomy(bidisc, sy.quasi_homogeneous("(1-x**2)*(1-y**2)"))
    assert r.status == "pass"
    assert r.measured["boundary_sup"] == 0 and r.measured["scans_to_zero"]
    assert r.measured["cross_check"]["gap"] < 1e-6


def test_toeplitz_non_vanishing_symbol(bidisc):
    r = vf.verify_toeplitz_dichotomy(bidisc, sy.quasi_homogeneous("1-y**2"), [("v", PathSpec("vertical", y0=0.0))])
    assert r.status == "pass"
    assert r.measured["boundary_sup"] > 0
    assert r.measured["scans"][0]["final_value"] == pytest.approx(0.5, abs=1e-9)


def test_toeplitz_zero_symbol_passes(hull):
    assert vf.verify_toeplitz_dichotomy(hull, sy.quasi_homogeneous("0")).status == "pass"


def test_toeplitz_budget_exhaustion_is_indeterminate(bidisc):
    r = vf.verify_toeplitz_dichotomy(bidisc, sy.quasi_homogeneous("(1-x**2)*(1-y**2)"),
                                     [("v", PathSpec("vertical", y0=0.0))], trunc=KernelTruncation(budget=(48, 4)))
    assert r.status == "indeterminate" and r.exit_code == 3
    assert r.diagnostics


def test_hankel_holomorphic_symbol(bidisc):
    r = vf.verify_hankel_dichotomy(bidisc, sy.z2())
    assert r.status == "pass"
    for fam in r.measured["families"].values():
        assert all(abs(x["R"]) < 1e-12 for x in fam["residuals"])
        assert fam["scans_to_zero"]


def test_hankel_conj_z2_limits(bidisc):
    r = vf.verify_hankel_dichotomy(bidisc, sy.conj_z2())
    assert r.status == "pass" and r.measured["verdict"] == "non-compact, consistent"
    res = r.measured["families"]["vertical"]["residuals"]
    for x in res:
        b = x["alpha2"]
        R = 0.25 if b == 0 else 1 / ((b + 1) * (b + 2) * (2 * b + 2) * (2 * b))
        assert x["R"] == pytest.approx(R, rel=1e-10) and x["R"] > 1e-8
        assert x["lambda_limit"] == pytest.approx(1 / ((b + 1) * (b + 2)), rel=1e-12)
        assert x["lambda_at_probe"] == pytest.approx(x["lambda_limit"], rel=1e-9)


def test_hankel_multiradial_vanishing_on_disc(hull):
    r = vf.verify_hankel_dichotomy(hull, sy.quasi_homogeneous("1-x"))
    assert r.status == "pass"
    fam = r.measured["families"]["vertical"]
    assert fam["holomorphic_on_discs"] and fam["scans_to_zero"]


def test_hankel_transposes_horizontal_only_domain(hull):
    r = vf.verify_hankel_dichotomy(hull.transpose(), sy.quasi_homogeneous("y", (-1, 0)))
    assert r.measured["transposed"] and r.status == "pass"


def test_hankel_requires_a_disc():
    with pytest.raises(dm.PreconditionError):
        vf.verify_hankel_dichotomy(dm.ball(), sy.conj_z2())


def test_cesaro_reduction_vanishing_components(bidisc):
    f = sy.sampled("y*cos(theta2)*(1-x**2)*(1-y**2)", 16, 16)
    r = vf.verify_cesaro_reduction(bidisc, f)
    assert r.status == "pass"
    assert r.measured["all_components_vanish_on_boundary"]


def test_cesaro_reduction_boundary_component(bidisc):
    f = sy.sampled("x*y*cos(theta1-theta2)/4", 16, 16)
    r = vf.verify_cesaro_reduction(bidisc, f)
    comp = r.measured["components"]["(1, -1)"]
    assert comp["boundary_sup"] == pytest.approx(0.125, rel=1e-9)
    assert not comp["scans_to_zero"] and comp["status"] == "pass"
    assert r.status == "pass"


def test_report_carries_claim_and_surrogate_note(bidisc):
    d = vf.verify_moment_ratio(bidisc).as_dict()
    assert d["expected"] and any("surrogate" in x for x in d["diagnostics"])


def test_failing_report_carries_offending_values(hull):
    r = vf.verify_moment_ratio(hull, [4])
    assert r.status == "fail" and 4 in r.measured["offending"]
