import numpy as np
import pytest

from lorentz_glue import model_spaces as ms
from lorentz_glue.errors import NotCausal
from lorentz_glue.plls_core import (
    DiscreteCausalCurve,
    FiniteLorentzSpace,
    isolation_report,
    lsc_defect,
    restrict_space,
    space_from_model_points,
    tau_length,
    validate_space,
)

from conftest import random_model_space


def chain_space(taus):
    """x <= y <= z with tau(x,y), tau(y,z), tau(x,z) given."""
    txy, tyz, txz = taus
    tau = np.array([[0, txy, txz], [0, 0, tyz], [0, 0, 0]], dtype=float)
    causal = np.triu(np.ones((3, 3), dtype=bool))
    return FiniteLorentzSpace.from_relations(["x", "y", "z"], tau, causal=causal)


def flat(points, ids=None):
    return space_from_model_points(0, [ms.model_point(0, p) for p in points], ids)


def diamond_sample(n=8):
    u = np.linspace(0, 1, n)
    pts = [((a + b) / 2, (a - b) / 2) for a in u for b in u]
    return flat(pts)


def test_one_point_space_is_valid():
    X = FiniteLorentzSpace.from_relations(["a"], [[0.0]])
    assert validate_space(X).ok


def test_reverse_triangle_violation_has_witness():
    rep = validate_space(chain_space((1.0, 1.0, 1.5)))
    assert rep.axioms() == ["reverse_triangle"]
    assert rep.violations[0].witness == ("x", "y", "z")
    assert validate_space(chain_space((1.0, 1.0, 2.0))).ok


def test_minkowski_diamond_sample_is_valid():
    X = diamond_sample(8)
    assert X.n == 64
    assert validate_space(X).ok


@pytest.mark.parametrize(
    "corrupt, axiom",
    [
        (lambda d, c, l, t: d.__setitem__((0, 1), -1.0), "d_nonnegative"),
        (lambda d, c, l, t: d.__setitem__((0, 1), d[0, 1] + 0.5), "d_symmetric"),
        (lambda d, c, l, t: c.__setitem__((2, 2), False), "causal_reflexive"),
        (lambda d, c, l, t: t.__setitem__((0, 3), 0.0), "tau_positive_iff_chron"),
    ],
)
def test_single_corruption_is_detected(corrupt, axiom):
    X = random_model_space(np.random.default_rng(7), 8)
    d, c, l, t = (np.array(a) for a in (X.d, X.causal, X.chron, X.tau))
    # make sure (0, 3) is chronological before the tau corruption
    if not l[0, 3]:
        X = flat([(0, 0), (0.1, 0.5), (0.2, -0.3), (1, 0), (1.2, 0.4), (2, 0), (0.5, 2), (3, 1)])
        d, c, l, t = (np.array(a) for a in (X.d, X.causal, X.chron, X.tau))
    assert validate_space(X).ok
    corrupt(d, c, l, t)
    bad = FiniteLorentzSpace(X.points, d, l, c, t)
    assert axiom in validate_space(bad).axioms()


def test_triangle_inequality_and_transitivity_detected():
    X = flat([(0, 0), (1, 0), (2, 0)])
    d = np.array(X.d)
    d[0, 2] = d[2, 0] = 5.0
    assert "d_triangle" in validate_space(FiniteLorentzSpace(X.points, d, X.chron, X.causal, X.tau)).axioms()
    c = np.array(X.causal)
    c[0, 2] = False
    assert "causal_transitive" in validate_space(FiniteLorentzSpace(X.points, X.d, X.chron, c, X.tau)).axioms()


def test_tau_length_examples():
    X = flat([(0, 0), (1, 0), (2, 0), (1, 0.5)], ["a", "b", "c", "k"])
    assert tau_length(X, DiscreteCausalCurve(("a", "b"))) == pytest.approx(1.0)
    assert tau_length(X, DiscreteCausalCurve(("a", "b", "c"))) == pytest.approx(2.0)
    assert tau_length(X, DiscreteCausalCurve(("a", "k", "c"))) == pytest.approx(2 * np.sqrt(0.75))
    assert tau_length(X, DiscreteCausalCurve(("c", "b", "a"), direction="past")) == pytest.approx(2.0)
    with pytest.raises(NotCausal):
        tau_length(X, DiscreteCausalCurve(("b", "a")))


def test_tau_length_bounded_by_endpoint_tau():
    rng = np.random.default_rng(2)
    ts = np.sort(rng.uniform(0, 3, 7))
    pts = [(t, 0.2 * np.sin(4 * t)) for t in ts]
    X = flat(pts)
    curve = DiscreteCausalCurve(X.points)
    assert tau_length(X, curve) <= X.tau[0, -1] + 1e-12
    # coarsening never decreases the sum
    coarse = DiscreteCausalCurve(X.points[::2] + ((X.points[-1],) if len(X.points) % 2 == 0 else ()))
    assert tau_length(X, coarse) >= tau_length(X, curve) - 1e-12


def test_lsc_defect_on_exact_sample():
    X = diamond_sample(6)
    assert all(v == 0 for _, v in lsc_defect(X, 0.0))
    worst = []
    for n in (6, 11):
        h = np.sqrt(2) / (n - 1) / 2
        eps = 1.01 * h
        worst.append(max(v for _, v in lsc_defect(diamond_sample(n), eps)))
        # moving both ends by eps changes tau^2 by at most 4 eps (|dt| + |dx|) + 8 eps^2
        assert 0 <= worst[-1] <= np.sqrt(8 * eps + 8 * eps**2)
    assert worst[1] < worst[0]


def test_isolation_examples():
    X = flat([(t, 0.0) for t in np.linspace(0, 1, 11)] + [(0.5, 3.0)])
    line = X.points[:11]
    rep = isolation_report(X, line, [0.11, 0.2])
    assert rep.passes()
    assert rep.future_witness[line[0]][0.11] == line[1]
    assert isolation_report(X, line, [0.05]).failures(0.05)
    two = flat([(0, 0), (0, 1), (1, 0), (1, 1)], ["a", "b", "fa", "fb"])
    rep = isolation_report(two, ["a", "b"], [2.0])
    assert not rep.passes()
    assert set(rep.failures(2.0)) == {("a", "future"), ("b", "future")}
    top = isolation_report(X, [line[-1]], [0.11])
    assert top.has_future[line[-1]] is False
    assert top.failures(0.11) == [(line[-1], "past")]


def test_restrict_space_examples():
    X = diamond_sample(5)
    assert restrict_space(X, X.points).points == X.points
    one = restrict_space(X, [X.points[3]])
    assert one.n == 1 and validate_space(one).ok
    spacelike = flat([(0, x) for x in np.linspace(-1, 1, 7)])
    assert not np.any(spacelike.chron) and not np.any(spacelike.tau)
    assert validate_space(spacelike).ok


def test_restriction_preserves_validity():
    rng = np.random.default_rng(11)
    for _ in range(20):
        X = random_model_space(rng, 15, float(rng.choice([0, 1, -1])))
        S = [p for p in X.points if rng.random() < 0.5]
        assert validate_space(restrict_space(X, S)).ok


@pytest.mark.parametrize("K", [0.0, 1.0, -1.0])
def test_manifold_backed_tau_matches_model(K):
    X = random_model_space(np.random.default_rng(5), 10, K)
    for i in range(X.n):
        for j in range(X.n):
            assert X.tau[i, j] == pytest.approx(ms.tau_K(K, X.coords[i], X.coords[j]), abs=1e-12)


def test_space_is_immutable():
    X = diamond_sample(3)
    with pytest.raises(ValueError):
        X.tau[0, 1] = 5.0
