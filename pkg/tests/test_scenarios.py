import json

import numpy as np
import pytest

from lorentz_glue.errors import NotChronological
from lorentz_glue.plls_core import validate_space
from lorentz_glue.scenarios import lens_membership, plane_grid, reverse_time, scenario, symmetric_lens_points


# --- lens predicate --------------------------------------------------------------


@pytest.mark.parametrize("c, omega", [(1.0, 0.0), (0.5, 0.8), (2.0, 3.0)])
def test_origin_is_in_symmetric_lens(c, omega):
    bm, bp = symmetric_lens_points(c, omega)
    # both control points sit at Minkowski distance c from the origin
    for b in (bm, bp):
        assert b[0] ** 2 - b[1] ** 2 == pytest.approx(c * c)
    assert bm[1] == bp[1]
    assert lens_membership(bm, bp, np.zeros(2))


def test_lens_membership_examples():
    bm, bp = np.array([-1.0, 0.0]), np.array([1.0, 0.0])
    # R = 4; members need doubled-time separation above 4/3 from both ends
    assert lens_membership(bm, bp, [0.0, 0.0])
    assert lens_membership(bm, bp, [0.2, 0.5])
    assert not lens_membership(bm, bp, [0.3, 0.5])
    assert not lens_membership(bm, bp, [0.0, 1.9])
    assert not lens_membership(bm, bp, bp)
    assert not lens_membership(bm, bp, [0.7, 0.0])
    with pytest.raises(NotChronological):
        lens_membership(bp, bm, [0.0, 0.0])


# --- sampled planes --------------------------------------------------------------


def test_plane_grid_ids_and_extras():
    X, g = plane_grid((0, 1), (0, 2), 3, 5, prefix="A_", extra=[("p", (0.5, 0.25))])
    assert X.n == 16 and g[(2, 4)] == "A_t2x4" and X.points[-1] == "A_p"
    assert X.tau[X.index("A_t0x0"), X.index("A_t2x0")] == pytest.approx(1.0)
    R = reverse_time(X)
    assert np.array_equal(R.tau, X.tau.T) and validate_space(R).ok


# --- scenarios ---------------------------------------------------------------------


def test_lsc_scenario_small_grid():
    res = scenario("lsc-failure-point-gluing", grid=21)
    n = res.numbers
    assert res.expected and res.exit_code == 0 and res.verdict == "lsc fails"
    assert n["tau_tilde_pq"] == pytest.approx(0.5)
    assert all(v == 0 for v in n["tau_tilde_pn_q"])
    assert n["lsc_defect"] > 3 * n["sampling_modulus"]


def test_vertical_line_scenario_small_grid():
    res = scenario("vertical-line-gluing", grid=11)
    assert res.expected and res.numbers["violations"] == []
    assert res.numbers["n_classes"] == 121 - 11


def test_orientation_scenario_variants():
    res = scenario("orientation-reversal", grid=11, variant="both", plane_grid_size=9)
    sq, fp = res.numbers["square"], res.numbers["full_plane"]
    assert res.expected
    assert sq["causally_compatible"] is False and sq["compatibility_witness"]
    assert fp["tau_tilde_inf_on_glued_classes"] and all(c["verified"] for c in fp["certificates"])
    with pytest.raises(ValueError):
        scenario("orientation-reversal", grid=11, variant="sideways")


def test_reshetnyak_scenario_small():
    res = scenario("reshetnyak-flat", grid=11, n_triangles=30, n_oracle=500)
    assert res.expected
    for v in ("half-plane", "strip"):
        n = res.numbers[v]
        assert n["oracle"]["max_abs_error"] <= 1e-9
        assert n["curvature"]["verdict"] == "PASS"
        assert n["finite"]["max_tau_tilde_minus_plane"] <= 1e-9


def test_unknown_scenario():
    with pytest.raises(KeyError):
        scenario("nope")


def test_scenario_artifacts(tmp_path):
    res = scenario("lsc-failure-point-gluing", grid=21, out=str(tmp_path))
    assert len(res.artifacts) == 1
    with open(res.artifacts[0]) as fh:
        doc = json.load(fh)
    assert doc["scenario"] == "lsc-failure-point-gluing" and doc["expected"] is True
