import numpy as np
import pytest

from lorentz_glue import model_spaces as ms
from lorentz_glue.amalgamation import (
    Chain,
    GluedHalfPlanes,
    GluingSpec,
    brute_force_quotient_metric,
    brute_force_quotient_tau,
    build_quotient,
    causal_diamond,
    check_map_properties,
    disjoint_union,
    normalize_chain,
    quotient_space,
    short_form_tau,
    timelike_chain_witness,
    verify_certificate,
)
from lorentz_glue.errors import HypothesesNotMet, InvalidChain, NotABijection, NotChronological, TooLarge
from lorentz_glue.plls_core import FiniteLorentzSpace, space_from_model_points, validate_space
from lorentz_glue.scenarios import plane_grid, reverse_time

from conftest import random_gluing, random_model_space


def two_point(a, b, t):
    tau = np.array([[0.0, t], [0.0, 0.0]])
    return FiniteLorentzSpace.from_relations([a, b], tau)


def four_point_spec():
    return GluingSpec(two_point("x", "a1", 1.0), two_point("a2", "y", 2.0), [("a1", "a2")])


def cycle_spec():
    return GluingSpec(two_point("a1", "b1", 1.0), two_point("b2", "a2", 1.0), [("a1", "a2"), ("b1", "b2")])


def flat(points, ids):
    return space_from_model_points(0, [ms.model_point(0, p) for p in points], ids)


# --- disjoint union ---------------------------------------------------------------


def test_disjoint_union_examples():
    X1 = two_point("x", "y", 1.0)
    empty = FiniteLorentzSpace((), np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, 0)))
    U = disjoint_union(X1, empty)
    assert U.points == X1.points and np.array_equal(U.tau, X1.tau)
    U = disjoint_union(FiniteLorentzSpace.from_relations(["a"], [[0.0]]), FiniteLorentzSpace.from_relations(["b"], [[0.0]]))
    assert np.isinf(U.d[0, 1]) and U.tau[0, 1] == 0
    rng = np.random.default_rng(0)
    A, B = random_model_space(rng, 32, 0, "a"), random_model_space(rng, 32, 0, "b")
    U = disjoint_union(A, B)
    assert not U.tau[:32, 32:].any() and not U.chron[:32, 32:].any() and not U.causal[32:, :32].any()
    assert validate_space(U).ok


def test_clashing_ids_are_prefixed():
    U = disjoint_union(two_point("x", "y", 1.0), two_point("x", "z", 1.0))
    assert U.points == ("1:x", "1:y", "2:x", "2:z")


# --- quotient ---------------------------------------------------------------------


def test_four_point_gluing():
    spec = four_point_spec()
    Q = build_quotient(spec)
    assert Q.tau("x", "y") == 3.0
    w = Q.witness("x", "y")
    assert w.to_list() == [["x", "a1"], ["a2", "y"]]
    assert w.length(Q.base) == 3.0
    bf = brute_force_quotient_tau(spec, 6)
    i, j = Q.class_index("x"), Q.class_index("y")
    assert bf.tau[i, j] == 3.0 and not bf.growth.any()


def test_no_identifications_echo_the_union():
    spec = GluingSpec(two_point("x", "y", 1.0), two_point("u", "v", 2.0))
    Q = build_quotient(spec)
    U = spec.union()
    assert np.array_equal(Q.tilde_tau, U.tau)
    assert np.array_equal(Q.tilde_d, U.d)
    assert np.array_equal(brute_force_quotient_tau(spec, 4).tau, U.tau)


def test_positive_cycle_gives_infinity_with_certificate():
    spec = cycle_spec()
    Q = build_quotient(spec)
    assert np.all(np.isinf(Q.tilde_tau))
    cert = Q.certificate("a1", "b1")
    assert cert.cycle_length > 0
    assert verify_certificate(Q, "a1", "b1", cert)
    assert brute_force_quotient_tau(spec, 8).growth.all()
    doc = Q.to_dict()
    assert doc["certificates"] and all(t[2] == "inf" for t in doc["tau"])


def test_tampered_certificate_is_rejected():
    Q = build_quotient(cycle_spec())
    cert = Q.certificate("a1", "b1")
    bad = type(cert)(Chain((("b1", "a1"),)), 1.0, cert.entry, cert.exit)
    assert not verify_certificate(Q, "a1", "b1", bad)


def test_brute_force_size_limit():
    rng = np.random.default_rng(0)
    spec = GluingSpec(random_model_space(rng, 7, 0, "a"), random_model_space(rng, 6, 0, "b"), [("a0", "b0")])
    with pytest.raises(TooLarge):
        brute_force_quotient_tau(spec, 4)


def test_bad_pairs_raise():
    X = two_point("x", "y", 1.0)
    with pytest.raises(NotABijection):
        GluingSpec(X, X, [("x", "x"), ("y", "x")])
    with pytest.raises(NotABijection):
        GluingSpec(X, X, [("q", "x")])


def test_quotient_metric_matches_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(30):
        spec = random_gluing(rng, 10)
        Q = build_quotient(spec)
        assert np.allclose(Q.tilde_d, brute_force_quotient_metric(spec, 2 * Q.n + 2), rtol=0, atol=1e-12)


def test_seam_and_full_solvers_agree():
    X, g = plane_grid((-1, 1), (0, 2.5), 11, 11)
    pairs = [(X.index(g[(i, 4)]), X.index(g[(i, 8)])) for i in range(11)]
    Qf = quotient_space(X, pairs, method="full")
    Qs = quotient_space(X, pairs, method="seam")
    assert np.allclose(Qf.tilde_tau, Qs.tilde_tau, rtol=0, atol=1e-12)
    assert np.allclose(Qf.tilde_d, Qs.tilde_d, rtol=0, atol=1e-12)
    assert np.array_equal(Qf.tilde_causal, Qs.tilde_causal)
    # seam witnesses are valid chains of the advertised length
    for a, b in [(0, 109), (5, 100), (11, 60)]:
        w = Qs.witness(a, b)
        if w is not None:
            assert w.length(X) == pytest.approx(Qs.tilde_tau[a, b], abs=1e-12)


# --- map properties -----------------------------------------------------------


def test_identity_gluing_preserves_everything():
    X = random_model_space(np.random.default_rng(2), 6, 0)
    rep = check_map_properties(GluingSpec(X, X, [(p, p) for p in X.points]))
    assert all(c.holds for c in rep.checks.values())
    assert all(rep.inverse_inherits.values())


def test_null_to_spacelike_map():
    s = np.linspace(0, 1, 6)
    null = flat([(v, v) for v in s], [f"n{k}" for k in range(6)])
    spacelike = flat([(0, v) for v in s], [f"s{k}" for k in range(6)])
    spec = GluingSpec(null, spacelike, [(f"n{k}", f"s{k}") for k in range(6)], {"leq_preserving": True})
    rep = check_map_properties(spec)
    assert rep.holds("tau_preserving") is True
    assert rep.holds("ll_preserving") is True
    assert rep.holds("leq_preserving") is False
    assert rep.checks["leq_preserving"].witness == ("n0", "n1")
    assert rep.warnings
    assert all(rep.inverse_inherits.values())


def test_reversed_square_breaks_causal_compatibility():
    n = 5
    X1, g1 = plane_grid((0, 1), (0, 1), n, n, prefix="A_")
    X2f, g2 = plane_grid((0, 1), (0, 1), n, n, prefix="B_")
    spec = GluingSpec(X1, reverse_time(X2f), [(g1[(i, 2)], g2[(i, 2)]) for i in range(n)])
    cc = check_map_properties(spec).checks["causally_compatible"]
    assert cc.holds is False
    # both seam ends disagree; the first one in order is reported
    assert cc.witness == (g1[(0, 2)], g2[(0, 2)])
    assert cc.detail.startswith("future nonempty")
    top1, top2 = spec.X1.index(g1[(n - 1, 2)]), spec.X2.index(g2[(n - 1, 2)])
    assert not spec.X1.chron[top1].any() and spec.X2.chron[top2].any()


# --- structural lemmas ---------------------------------------------------------


def test_normalize_chain_examples():
    X = FiniteLorentzSpace.from_relations(
        ["u", "v", "w"],
        [[0, 1.0, 2.5], [0, 0, 1.0], [0, 0, 0]],
        causal=np.triu(np.ones((3, 3), dtype=bool)),
    )
    spec = GluingSpec(X, two_point("p", "q", 1.0))
    normal = Chain((("u", "w"),))
    assert normalize_chain(spec, normal) == normal
    merged = normalize_chain(spec, Chain((("u", "v"), ("v", "w"))))
    assert merged.steps == (("u", "w"),) and merged.length(spec.union()) == 2.5
    glued = four_point_spec()
    pinned = normalize_chain(glued, Chain((("a2", "y"),), start="a1"))
    assert pinned.steps == (("a1", "a1"), ("a2", "y"))
    assert pinned.length(glued.union()) == 2.0
    with pytest.raises(InvalidChain):
        normalize_chain(spec, Chain((("v", "w"),), start="u"))
    with pytest.raises(InvalidChain):
        normalize_chain(spec, Chain((("w", "u"),)))


def test_timelike_chain_witness_examples():
    spec = four_point_spec()
    Q = build_quotient(spec)
    res = timelike_chain_witness(Q, spec, "x", "y")
    assert res.chain.to_list() == [["x", "a1"], ["a2", "y"]] and res.gap == 0
    res = timelike_chain_witness(Q, spec, "x", "a1")
    assert res.chain.to_list() == [["x", "a1"]]
    with pytest.raises(NotChronological):
        timelike_chain_witness(Q, spec, "y", "x")


def test_short_form_examples():
    spec = four_point_spec()
    val, label = short_form_tau(spec, "x", "y")
    assert val == 3.0 and label == "a1~a2"
    spec0 = GluingSpec(two_point("x", "a1", 1.0), two_point("a2", "y", 2.0), [])
    assert short_form_tau(spec0, "x", "y") == (0.0, None)


def test_short_form_half_planes():
    ts = np.linspace(0, 3, 7)
    left = [("p", (0.0, -1.0))] + [(f"a{k}", (t, 0.0)) for k, t in enumerate(ts)]
    right = [("q", (3.0, 1.0))] + [(f"b{k}", (t, 0.0)) for k, t in enumerate(ts)]
    X1 = flat([c for _, c in left], [i for i, _ in left])
    X2 = flat([c for _, c in right], [i for i, _ in right])
    spec = GluingSpec(X1, X2, [(f"a{k}", f"b{k}") for k in range(len(ts))])
    val, label = short_form_tau(spec, "p", "q")
    assert val == pytest.approx(np.sqrt(5), abs=1e-12)
    assert label == "a3~b3"  # t = 1.5
    assert build_quotient(spec).tau("p", "q") == pytest.approx(val, abs=1e-12)
    assert GluedHalfPlanes().tau((0.0, -1.0), (3.0, 1.0)) == pytest.approx(np.sqrt(5), abs=1e-12)


def test_short_form_refuses_bad_maps():
    s = np.linspace(0, 1, 4)
    null = flat([(v, v) for v in s] + [(-1, 0)], [f"n{k}" for k in range(4)] + ["x"])
    spacelike = flat([(0, v) for v in s] + [(2, 0)], [f"s{k}" for k in range(4)] + ["y"])
    spec = GluingSpec(null, spacelike, [(f"n{k}", f"s{k}") for k in range(4)])
    with pytest.raises(HypothesesNotMet):
        short_form_tau(spec, "x", "y")


def test_causal_diamond_cases():
    spec = four_point_spec()
    Q = build_quotient(spec)
    rep = causal_diamond(Q, "a1", "a1")
    assert rep.classes == ("a1~a2",) and rep.case == "seam" and rep.holds
    # half-plane sample glued along x = 0
    X1, g1 = plane_grid((-1, 1), (-1, 0), 10, 5, prefix="L_")
    X2, g2 = plane_grid((-1, 1), (0, 1), 10, 5, prefix="R_")
    spec = GluingSpec(X1, X2, [(g1[(i, 4)], g2[(i, 0)]) for i in range(10)])
    Q = build_quotient(spec)
    rep = causal_diamond(Q, g1[(0, 4)], g1[(9, 4)])
    assert rep.case == "seam" and rep.holds
    assert len(rep.classes) > 10
    rep = causal_diamond(Q, g1[(0, 0)], g1[(2, 0)])
    assert rep.case == "one-space" and rep.holds
