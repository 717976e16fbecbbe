import numpy as np
import pytest

from lorentz_glue import model_spaces as ms
from lorentz_glue.errors import (
    CoordinateOffModel,
    GridTooCoarse,
    LegNotTimelike,
    ReverseTriangleViolated,
    SizeBoundViolated,
    SturmNotApplicable,
    UnrealizableTriple,
)

KS = (0.0, 1.0, -1.0)


def P(t, x):
    return ms.model_point(0, [t, x])


def test_point_constraint_is_enforced():
    ms.model_point(1, [0.0, 1.0, 0.0])
    ms.model_point(-1, [1.0, 0.0, 0.0])
    with pytest.raises(CoordinateOffModel):
        ms.model_point(1, [0.0, 2.0, 0.0])
    with pytest.raises(CoordinateOffModel):
        ms.model_point(-1, [0.0, 0.0, 1.0])


@pytest.mark.parametrize("K", KS)
def test_chart_round_trip(K):
    for t, x in [(0.3, 0.1), (-0.2, 0.4), (0.0, -0.5)]:
        p = ms.from_chart(K, t, x)
        assert np.allclose(ms.to_chart(p), (t, x), atol=1e-12)


def test_flat_tau_and_signed_distance():
    o = P(0, 0)
    assert ms.tau_K(0, o, P(2, 0)) == pytest.approx(2.0)
    assert ms.tau_K(0, P(2, 0), o) == 0.0
    assert ms.signed_distance(0, o, P(0, 3)) == pytest.approx(3.0)
    assert ms.signed_distance(0, o, P(2, 0)) == pytest.approx(-2.0)
    assert ms.signed_distance(0, o, P(1, 1)) == 0.0
    assert ms.causal_K(0, o, P(1, 1)) and not ms.chron_K(0, o, P(1, 1))


def test_nonnormalized_angle_examples():
    o = P(0, 0)
    assert ms.nonnormalized_angle(0, o, P(1, 0), P(2, 0)) == pytest.approx(-2.0)
    assert ms.nonnormalized_angle(0, o, P(0, 1), P(0, 2)) == pytest.approx(2.0)
    assert ms.nonnormalized_angle(0, o, P(1, 0), P(-1, 0)) == pytest.approx(1.0)


def test_hyperbolic_angle_examples():
    o = P(0, 0)
    s = 0.5
    r = P(np.cosh(s), np.sinh(s))
    assert ms.hyperbolic_angle(0, o, P(1, 0), r) == pytest.approx(0.5, abs=1e-12)
    assert ms.hyperbolic_angle(0, o, P(1, 0), P(3, 0)) == pytest.approx(0.0, abs=1e-12)
    doubled = P(2 * np.cosh(s), 2 * np.sinh(s))
    assert ms.hyperbolic_angle(0, o, P(1, 0), doubled) == pytest.approx(
        ms.hyperbolic_angle(0, o, P(1, 0), r), abs=1e-12
    )
    with pytest.raises(LegNotTimelike):
        ms.hyperbolic_angle(0, o, P(1, 0), P(0, 1))


def test_geodesic_point_examples():
    mid = ms.geodesic_point(0, P(0, 0), P(2, 0), 0.5)
    assert np.allclose(mid.coords, [1.0, 0.0])
    p = ms.model_point(1, [0.0, 1.0, 0.0])
    q = ms.model_point(1, [np.sinh(1.0), np.cosh(1.0), 0.0])
    m = ms.geodesic_point(1, p, q, 0.5)
    assert np.allclose(m.coords, [np.sinh(0.5), np.cosh(0.5), 0.0], atol=1e-12)
    assert ms.geodesic_point(1, p, q, 0.0) == p
    assert ms.geodesic_point(1, p, q, 1.0) == q


@pytest.mark.parametrize("K", KS)
def test_geodesic_point_is_affine_in_tau(K):
    a, b = ms.origin(K), ms.from_chart(K, 0.9, 0.3)
    L = ms.tau_K(K, a, b)
    for s in (0.1, 0.37, 0.8):
        assert ms.tau_K(K, a, ms.geodesic_point(K, a, b, s)) == pytest.approx(s * L, abs=1e-9)


def test_law_of_cosines_against_explicit_hinge():
    # legs of length 1 boosted apart by omega, measured end to end
    omega = 1.0
    x = P(0, 0)
    y = P(np.cosh(-0.5), np.sinh(-0.5))
    z = ms.model_point(0, y.coords + [np.cosh(0.5), np.sinh(0.5)])
    measured = ms.tau_K(0, x, z)
    assert measured == pytest.approx(2.2552519304127614, abs=1e-12)
    assert ms.law_of_cosines_third_side(0, 1, 1, omega) == pytest.approx(measured, abs=1e-9)
    assert ms.law_of_cosines_third_side(0, 1, 1, 0.0) == pytest.approx(2.0)
    assert ms.law_of_cosines_third_side(0, 1, 1, 1.5) > measured


@pytest.mark.parametrize("K", KS)
def test_law_of_cosines_matches_realized_angle(K):
    for a, b, c in [(0.3, 0.4, 0.9), (0.5, 0.2, 0.75)]:
        x, y, z = ms.realize_triangle(K, (a, b, c))
        # angle at y between the past leg to x and the future leg to z
        omega = ms.hyperbolic_angle(K, y, x, z)
        assert ms.law_of_cosines_third_side(K, a, b, omega) == pytest.approx(c, abs=1e-9)


def test_realize_triangle_frozen():
    x, y, z = ms.realize_triangle(0, (1, 1, 3))
    assert np.allclose(x.coords, [0, 0]) and np.allclose(z.coords, [3, 0])
    assert np.allclose(y.coords, [1.5, np.sqrt(1.25)], atol=1e-12)
    _, y, _ = ms.realize_triangle(0, (1, 1, 2))
    assert np.allclose(y.coords, [1.0, 0.0], atol=1e-12)
    x, y, z = ms.realize_triangle(1, (0.2, 0.2, 0.5))
    got = (ms.tau_K(1, x, y), ms.tau_K(1, y, z), ms.tau_K(1, x, z))
    assert np.allclose(got, (0.2, 0.2, 0.5), atol=1e-9)


def test_realize_triangle_errors():
    with pytest.raises(ReverseTriangleViolated):
        ms.realize_triangle(0, (1, 1, 1.5))
    with pytest.raises(SizeBoundViolated):
        ms.realize_triangle(-1, (1, 1, 3.2))


def test_size_bounds():
    assert ms.size_bounds_check(0, (1, 1, 50))
    assert ms.size_bounds_check(1, (1, 1, 3.0))
    assert not ms.size_bounds_check(-1, (1, 1, 3.2))
    assert ms.size_bounds_check(-1, (1, 1, 3.0))
    assert not ms.size_bounds_check(0, (1, 1, 1.9))


def test_hinge_probe_examples():
    grid = -np.linspace(2.1, 3.0, 10)
    pr = ms.hinge_monotonicity_probe(0, (-1.0, -1.0), grid)
    assert pr.ok and not pr.violations
    assert np.all(np.diff(pr.angle_pqr) < 0)
    assert np.all(np.diff(pr.angle_qpr) > 0)
    const = ms.hinge_monotonicity_probe(0, (-1.0, -1.0), [-2.5] * 5)
    assert np.ptp(const.angle_pqr) == 0 and np.ptp(const.angle_qrp) == 0
    with pytest.raises(UnrealizableTriple):
        ms.hinge_monotonicity_probe(0, (-1.0, -1.0), [-1.5])


def test_sturm_check_examples():
    t = np.linspace(0, 1, 50)
    assert ms.sturm_check(0, np.column_stack([t, np.zeros_like(t)]))
    assert ms.sturm_check(0, np.column_stack([t, t * (1 - t)]))
    with pytest.raises(SturmNotApplicable):
        ms.sturm_check(0, np.column_stack([t, -t * (1 - t)]))
    with pytest.raises(GridTooCoarse):
        ms.sturm_check(0, [(0, 0), (1, 0)])
    tl = np.linspace(0, 3.5, 50)
    with pytest.raises(SturmNotApplicable):
        ms.sturm_check(1, np.column_stack([tl, np.sin(tl)]))


@pytest.mark.parametrize("K", KS)
def test_pairwise_relations_agree_with_scalar(K):
    rng = np.random.default_rng(3)
    pts = [ms.from_chart(K, *rng.uniform(-0.7, 0.7, 2)) for _ in range(12)]
    tau, causal, chron = ms.pairwise_relations(K, np.array([p.coords for p in pts]))
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            assert tau[i, j] == pytest.approx(ms.tau_K(K, p, q), abs=1e-12)
            assert causal[i, j] == ms.causal_K(K, p, q)
            assert chron[i, j] == ms.chron_K(K, p, q)


def test_reverse_cauchy_schwarz_flat():
    rng = np.random.default_rng(4)
    for _ in range(200):
        v = np.array([rng.uniform(1, 2), rng.uniform(-0.9, 0.9)])
        w = np.array([rng.uniform(1, 2), rng.uniform(-0.9, 0.9)])
        ip = lambda a, b: -a[0] * b[0] + a[1] * b[1]  # noqa: E731
        assert ip(v, w) ** 2 >= ip(v, v) * ip(w, w) - 1e-12
