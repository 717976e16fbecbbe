"""Timelike triangle comparison and the triangle lemmas behind gluing.

A timelike triangle x << y << z in some space is compared with the triangle
of equal side lengths in the model plane M_K.  A curvature bound from above
means tau(p, q) >= tau_K(p', q') for all p, q on the sides (the model
triangle is "thinner" in time), a bound from below the reverse.

Spaces enter through small geometry objects exposing ``tau(a, b)`` and
``curve(a, b)`` (a realizing curve with ``length``, ``point_at(s)`` and
``sample_param(rng)``).  Three backends are provided: the model planes,
finite spaces (realizing curves are maximal chains of points that saturate
the reverse triangle inequality) and, through ``point_along``, the glued
flat half-planes of :mod:`lorentz_glue.amalgamation`.

The module also checks the two quadrilateral lemmas (straightening two
triangles that share a side) and the gluing lemma for triangles together
with the one-variable "detour" functions its proof relies on.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.optimize import brentq

from . import model_spaces as ms
from .errors import (
    ConfigInfeasible,
    HypothesesNotMet,
    LegNotTimelike,
    NoUniqueGeodesic,
    NoRealizingCurve,
    OffSide,
    ParameterOutOfRange,
    ReverseTriangleViolated,
    SideMismatch,
    SizeBoundViolated,
    SubtriangleDegenerate,
)
from .plls_core import FiniteLorentzSpace

__all__ = [
    "ModelGeometry",
    "FiniteGeometry",
    "ReversedGeometry",
    "TimelikeTriangle",
    "timelike_triangle",
    "comparison_triangle",
    "comparison_point",
    "triangle_report",
    "TriangleReport",
    "CurvatureReport",
    "curvature_verdict",
    "box_sampler",
    "AlexandrovConfig",
    "AlexandrovReport",
    "alexandrov_check",
    "alexandrov_check_other",
    "sample_alexandrov_config",
    "UnionConfig",
    "glue_comparison_triangles",
    "DetourConfig",
    "detour_config",
    "detour_function",
    "detour_grid",
    "detour_sturm_check",
    "sample_detour_config",
    "GluingLemmaReport",
    "gluing_lemma_check",
    "gluing_lemma_manifold_check",
    "SIDES",
]

SIDES = ("xy", "yz", "xz")
_ENDS = {"xy": (0, 1), "yz": (1, 2), "xz": (0, 2)}


def _pt(p):
    """JSON form of a point of any backend."""
    if isinstance(p, ms.ModelPoint):
        return p.to_list()
    if isinstance(p, (int, np.integer)):
        return int(p)
    return [float(v) for v in np.asarray(p, dtype=float)]


# --- geometries ---------------------------------------------------------------


class ContinuousCurve:
    """Realizing curve of a continuous geometry, parametrized by tau from a."""

    def __init__(self, geometry, a, b, length):
        self.geometry = geometry
        self.a, self.b = a, b
        self.length = float(length)

    def point_at(self, s):
        if s < -1e-12 * max(1.0, self.length) or s > self.length * (1 + 1e-12) + 1e-15:
            raise OffSide(f"s={s} outside [0, {self.length}]")
        if s <= 0:
            return self.a
        if s >= self.length:
            return self.b
        return self.geometry.point_along(self.a, self.b, s)

    def sample_param(self, rng):
        return float(rng.uniform(0.0, self.length))

    def realization_error(self, n=3):
        g = self.geometry
        err = 0.0
        for k in range(1, n + 1):
            m = self.point_at(self.length * k / (n + 1))
            err = max(err, abs(g.tau(self.a, m) + g.tau(m, self.b) - self.length))
        return err


class DiscreteCurve:
    """Chain of points of a finite space; parameters are tau from the start."""

    def __init__(self, vertices, params):
        self.vertices = tuple(int(v) for v in vertices)
        self.params = np.asarray(params, dtype=float)
        self.length = float(self.params[-1])

    def point_at(self, s):
        k = int(np.argmin(np.abs(self.params - s)))
        if abs(self.params[k] - s) > 1e-9 * max(1.0, self.length):
            raise OffSide(f"no chain vertex at tau-parameter {s}")
        return self.vertices[k]

    def sample_param(self, rng):
        return float(self.params[rng.integers(len(self.params))])

    def realization_error(self, tau):
        total = sum(tau[u, v] for u, v in zip(self.vertices[:-1], self.vertices[1:]))
        return abs(total - self.length)


class _ReversedCurve:
    def __init__(self, inner):
        self.inner = inner
        self.length = inner.length

    def point_at(self, s):
        return self.inner.point_at(self.length - s)

    def sample_param(self, rng):
        return self.length - self.inner.sample_param(rng)


class ModelGeometry:
    """The model plane M_K; points are ModelPoints."""

    def __init__(self, K):
        self.K = float(K)

    def make_point(self, t, x):
        return ms.from_chart(self.K, t, x)

    def tau(self, a, b):
        return ms.tau_K(self.K, a, b)

    def signed_distance(self, a, b):
        return ms.signed_distance(self.K, a, b)

    def geodesic(self, a, b, frac):
        return ms.geodesic_point(self.K, a, b, frac)

    def point_along(self, a, b, s):
        L = self.tau(a, b)
        return a if L == 0 else ms.geodesic_point(self.K, a, b, s / L)

    def curve(self, a, b):
        return ContinuousCurve(self, a, b, self.tau(a, b))


class FiniteGeometry:
    """A finite space (or a quotient, through its class space)."""

    def __init__(self, X, tol=1e-9):
        if hasattr(X, "as_space"):
            X = X.as_space()
        if not isinstance(X, FiniteLorentzSpace):
            raise TypeError("expected a FiniteLorentzSpace or QuotientSpace")
        self.X = X
        self.tol = tol

    def _i(self, a):
        return a if isinstance(a, (int, np.integer)) else self.X.index(a)

    def tau(self, a, b):
        return float(self.X.tau[self._i(a), self._i(b)])

    def curve(self, a, b):
        """Maximal chain from a to b whose steps add up to tau(a, b)."""
        X = self.X
        a, b = self._i(a), self._i(b)
        L = X.tau[a, b]
        if not np.isfinite(L):
            raise NoRealizingCurve(f"tau({X.points[a]}, {X.points[b]}) is infinite")
        if L <= 0:
            raise NoRealizingCurve(f"{X.points[a]} and {X.points[b]} are not timelike related")
        T, C = X.tau, X.causal
        tol = self.tol * max(1.0, L)
        cand = [r for r in range(X.n) if C[a, r] and C[r, b] and abs(T[a, r] + T[r, b] - L) <= tol]
        cand.sort(key=lambda r: (T[a, r], r))
        chain = [a]
        for r in cand:
            last = chain[-1]
            if r in (a, b) or not C[last, r]:
                continue
            if abs(T[a, last] + T[last, r] - T[a, r]) <= tol and T[a, r] > T[a, last]:
                chain.append(r)
        chain.append(b)
        curve = DiscreteCurve(chain, [T[a, r] for r in chain])
        if curve.realization_error(T) > tol:
            raise NoRealizingCurve("no chain realizes the time separation")
        return curve

    def sample_triangle(self, rng):
        chron = self.X.chron
        starts = np.nonzero(chron.any(axis=1))[0]
        if len(starts) == 0:
            return None
        i = int(rng.choice(starts))
        mids = [j for j in np.nonzero(chron[i])[0] if np.any(chron[j] & chron[i])]
        if not mids:
            return None
        j = int(rng.choice(mids))
        ends = np.nonzero(chron[j] & chron[i])[0]
        return i, j, int(rng.choice(ends))

    def point_id(self, a):
        return self.X.points[self._i(a)]


class ReversedGeometry:
    """Time-reversed view of a geometry: tau'(a, b) = tau(b, a)."""

    def __init__(self, inner):
        self.inner = inner
        self.K = getattr(inner, "K", None)

    def tau(self, a, b):
        return self.inner.tau(b, a)

    def curve(self, a, b):
        return _ReversedCurve(_curve(self.inner, b, a))


def _curve(geometry, a, b):
    if hasattr(geometry, "curve"):
        return geometry.curve(a, b)
    return ContinuousCurve(geometry, a, b, geometry.tau(a, b))


def _as_geometry(space):
    if isinstance(space, FiniteLorentzSpace) or hasattr(space, "as_space"):
        return FiniteGeometry(space)
    return space


# --- triangles ----------------------------------------------------------------


@dataclass
class TimelikeTriangle:
    geometry: object
    vertices: tuple
    curves: dict
    sides: tuple  # (tau(x,y), tau(y,z), tau(x,z))

    def point(self, side, s):
        return self.curves[side].point_at(s)

    def to_dict(self):
        return {"vertices": [_pt(v) for v in self.vertices], "sides": [float(s) for s in self.sides]}


def timelike_triangle(geometry, x, y, z, tol=1e-9):
    """Triangle x << y << z with realizing side curves from the geometry."""
    g = _as_geometry(geometry)
    curves = {}
    for name, (i, j) in _ENDS.items():
        a, b = (x, y, z)[i], (x, y, z)[j]
        if not g.tau(a, b) > 0:
            raise LegNotTimelike(f"side {name} is not timelike")
        curves[name] = _curve(g, a, b)
    for name, c in curves.items():
        if isinstance(c, ContinuousCurve) and c.realization_error() > tol * max(1.0, c.length):
            raise NoRealizingCurve(f"side {name} is not realizing")
    sides = tuple(curves[k].length for k in SIDES)
    a, b, c = sides
    if c < a + b - tol * max(1.0, c):
        raise ReverseTriangleViolated(f"tau(x,z)={c} < {a + b}")
    return TimelikeTriangle(g, (x, y, z), curves, sides)


def comparison_triangle(K, T):
    """Canonical comparison triangle of T (or of a side-length triple) in M_K."""
    sides = T.sides if isinstance(T, TimelikeTriangle) else tuple(T)
    return ms.realize_triangle(K, sides)


def comparison_point(K, cmp_triangle, side, s, length=None, tol=1e-9):
    """Point of the comparison triangle at tau-distance s from the side's past vertex."""
    i, j = _ENDS[side]
    a, b = cmp_triangle[i], cmp_triangle[j]
    L = ms.tau_K(K, a, b) if length is None else float(length)
    if s < -tol * max(1.0, L) or s > L + tol * max(1.0, L):
        raise OffSide(f"s={s} outside [0, {L}] on side {side}")
    if L == 0 or s <= 0:
        return a
    if s >= L:
        return b
    return ms.geodesic_point(K, a, b, s / L)


@dataclass
class PairDefect:
    side_a: str
    s_a: float
    side_b: str
    s_b: float
    tau: float
    tau_bar: float

    @property
    def defect(self):
        return self.tau - self.tau_bar

    def to_dict(self):
        return {
            "side_a": self.side_a,
            "s_a": self.s_a,
            "side_b": self.side_b,
            "s_b": self.s_b,
            "tau": self.tau,
            "tau_bar": self.tau_bar,
            "defect": self.defect,
        }


@dataclass
class TriangleReport:
    triangle: TimelikeTriangle
    K: float
    comparison: tuple
    pairs: list
    bound: str
    tol: float
    coherence_error: float
    index: int = 0

    @property
    def defects(self):
        return np.array([p.defect for p in self.pairs])

    def violations(self):
        d = self.defects
        if self.bound == "upper":
            return [p for p, v in zip(self.pairs, d) if v < -self.tol]
        return [p for p, v in zip(self.pairs, d) if v > self.tol]

    @property
    def passed(self):
        return not self.violations()

    def worst(self):
        """Pair with the largest violation (or the largest |defect| when none)."""
        d = self.defects
        if len(d) == 0:
            return None
        k = int(np.argmin(d)) if self.bound == "upper" else int(np.argmax(d))
        if self.passed:
            k = int(np.argmax(np.abs(d)))
        return self.pairs[k]

    def to_dict(self, pairs=True):
        d = self.defects
        out = {
            "index": self.index,
            "triangle": self.triangle.to_dict(),
            "K": self.K,
            "bound": self.bound,
            "comparison": [_pt(v) for v in self.comparison],
            "verdict": "PASS" if self.passed else "FAIL",
            "min_defect": float(d.min()) if len(d) else 0.0,
            "max_defect": float(d.max()) if len(d) else 0.0,
            "coherence_error": self.coherence_error,
        }
        if pairs:
            out["pairs"] = [p.to_dict() for p in self.pairs]
        return out


def triangle_report(K, T, rng, n_pairs=18, bound="upper", tol=1e-9, index=0, extra_pairs=()):
    """Sample side pairs stratified over the 9 ordered side pairs and compare.

    Both orders (p, q) and (q, p) are evaluated for each sampled pair.
    extra_pairs lists (side_a, s_a, side_b, s_b) to evaluate in addition.
    """
    if bound not in ("upper", "lower"):
        raise ValueError("bound must be 'upper' or 'lower'")
    cmp_tri = comparison_triangle(K, T)
    g = T.geometry
    per = max(1, -(-n_pairs // 9))
    plan = []
    for sa, sb in product(SIDES, SIDES):
        for _ in range(per):
            plan.append((sa, T.curves[sa].sample_param(rng), sb, T.curves[sb].sample_param(rng)))
    plan.extend(extra_pairs)
    lengths = dict(zip(SIDES, T.sides))
    pairs = []
    coherence = 0.0
    for sa, s_a, sb, s_b in plan:
        p, q = T.point(sa, s_a), T.point(sb, s_b)
        pb = comparison_point(K, cmp_tri, sa, s_a, lengths[sa])
        qb = comparison_point(K, cmp_tri, sb, s_b, lengths[sb])
        for side, s, bar in ((sa, s_a, pb), (sb, s_b, qb)):
            past = cmp_tri[_ENDS[side][0]]
            coherence = max(coherence, abs(ms.tau_K(K, past, bar) - s))
        pairs.append(PairDefect(sa, s_a, sb, s_b, g.tau(p, q), ms.tau_K(K, pb, qb)))
        pairs.append(PairDefect(sb, s_b, sa, s_a, g.tau(q, p), ms.tau_K(K, qb, pb)))
    return TriangleReport(T, float(K), cmp_tri, pairs, bound, tol, coherence, index)


@dataclass
class CurvatureReport:
    K: float
    bound: str
    seed: int
    tol: float
    triangles: list

    @property
    def passed(self):
        return all(t.passed for t in self.triangles)

    @property
    def verdict(self):
        return "PASS" if self.passed else "FAIL"

    def _all(self):
        return np.concatenate([t.defects for t in self.triangles]) if self.triangles else np.zeros(0)

    @property
    def max_abs_defect(self):
        d = self._all()
        return float(np.abs(d).max()) if len(d) else 0.0

    @property
    def max_violation(self):
        d = self._all()
        if not len(d):
            return 0.0
        v = -d.min() if self.bound == "upper" else d.max()
        return float(max(v, 0.0))

    def worst(self):
        """(triangle report, pair) of the worst offender."""
        best = None
        for t in self.triangles:
            p = t.worst()
            if p is None:
                continue
            score = (-p.defect if self.bound == "upper" else p.defect) if not t.passed else abs(p.defect) - 1e300
            if best is None or score > best[0]:
                best = (score, t, p)
        return None if best is None else (best[1], best[2])

    def to_dict(self, per_triangle=False):
        d = self._all()
        out = {
            "K": self.K,
            "bound": self.bound,
            "seed": self.seed,
            "tol": self.tol,
            "n_triangles": len(self.triangles),
            "n_pairs": int(len(d)),
            "verdict": self.verdict,
            "min_defect": float(d.min()) if len(d) else 0.0,
            "max_defect": float(d.max()) if len(d) else 0.0,
            "max_abs_defect": self.max_abs_defect,
            "max_violation": self.max_violation,
            "coherence_error": max((t.coherence_error for t in self.triangles), default=0.0),
        }
        w = self.worst()
        if w is not None:
            t, p = w
            out["worst"] = {"triangle_index": t.index, "triangle": t.triangle.to_dict(), "pair": p.to_dict()}
        if per_triangle:
            out["triangles"] = [t.to_dict(pairs=False) for t in self.triangles]
        return out


def box_sampler(geometry, t_range=(-1.0, 1.0), x_range=(-1.0, 1.0), accept=None):
    """Sampler of timelike triangles with vertices uniform in a chart box.

    Three points are drawn and put in time order; the draw is rejected
    (None) unless they form a chronological chain.  accept(x, y, z) may
    reject further.
    """
    make = getattr(geometry, "make_point", None) or (lambda t, x: np.array([t, x], dtype=float))

    def sample(rng):
        ts = rng.uniform(*t_range, 3)
        xs = rng.uniform(*x_range, 3)
        order = np.argsort(ts)
        pts = [make(float(ts[k]), float(xs[k])) for k in order]
        x, y, z = pts
        if not (geometry.tau(x, y) > 0 and geometry.tau(y, z) > 0):
            return None
        if accept is not None and not accept(x, y, z):
            return None
        return x, y, z

    return sample


def _triangle_rng(seed, i):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))


def _one_triangle(space, K, sampler, bound, n_pairs, seed, tol, i, max_tries):
    rng = _triangle_rng(seed, i)
    for _ in range(max_tries):
        tri = sampler(rng)
        if tri is None:
            continue
        try:
            T = timelike_triangle(space, *tri)
        except (LegNotTimelike, ReverseTriangleViolated):
            continue
        if not ms.size_bounds_check(K, T.sides):
            continue
        return triangle_report(K, T, rng, n_pairs, bound, tol, index=i)
    raise ConfigInfeasible(f"no admissible triangle after {max_tries} draws")


def curvature_verdict(space, K, sampler=None, bound="upper", n_triangles=100, n_pairs=18, seed=0,
                      tol=1e-9, jobs=1, max_tries=10000) -> CurvatureReport:
    """Seeded curvature-bound check over sampled triangles.

    Each triangle uses its own generator spawned from the seed, so the result
    does not depend on jobs or on evaluation order.
    """
    g = _as_geometry(space)
    if sampler is None:
        sampler = g.sample_triangle
    run = lambda i: _one_triangle(g, K, sampler, bound, n_pairs, seed, tol, i, max_tries)  # noqa: E731
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(run, range(n_triangles)))
    else:
        reports = [run(i) for i in range(n_triangles)]
    return CurvatureReport(float(K), bound, int(seed), tol, reports)


# --- straightening two triangles --------------------------------------------


def _offset(K, a, b, r):
    """Signed normal coordinate of r relative to the line through a, b."""
    return ms.frame_coordinates(K, ms.segment_frame(K, a, b), r)[2]


def _classify(K, a, b, u, v, tol):
    """Where [a, b] meets [u, v], given that a, b straddle the line of [u, v]."""
    bu, bv = _offset(K, a, b, u), _offset(K, a, b, v)
    if abs(bu) <= tol:
        return "p"
    if bu * bv > 0:
        return "empty"
    return "interior"


@dataclass(frozen=True)
class AlexandrovConfig:
    """Two model triangles sharing a side, plus which side gets straightened.

    constellation "long": triangles (x,p,y), (p,y,z) share [p,y]; the
    straightened triangle has tau(x',z') = tau(x,p) + tau(p,z).
    constellation "short": triangles (x,p,z), (p,y,z) share [p,z] with
    x << p << y; the straightened triangle has tau(x',y') = tau(x,p) + tau(p,y).
    """

    K: float
    x: ms.ModelPoint
    p: ms.ModelPoint
    y: ms.ModelPoint
    z: ms.ModelPoint
    constellation: str = "long"

    def to_dict(self):
        return {
            "K": self.K,
            "constellation": self.constellation,
            **{k: getattr(self, k).to_list() for k in "xpyz"},
        }


@dataclass
class Comparison:
    name: str
    original: float
    straightened: float
    relation: str  # "ge": original >= straightened, "le": original <= straightened

    @property
    def diff(self):
        return self.original - self.straightened

    def holds(self, tol):
        return self.diff >= -tol if self.relation == "ge" else self.diff <= tol

    def to_dict(self, tol):
        return {
            "name": self.name,
            "original": self.original,
            "straightened": self.straightened,
            "relation": self.relation,
            "diff": self.diff,
            "holds": self.holds(tol),
        }


@dataclass
class AlexandrovReport:
    config: AlexandrovConfig
    intersection: str
    straightened: tuple
    comparisons: list
    printed: list
    tol: float

    @property
    def ok(self):
        return all(c.holds(self.tol) for c in self.comparisons)

    @property
    def all_equal(self):
        return all(abs(c.diff) <= self.tol for c in self.comparisons)

    @property
    def equality_consistent(self):
        return self.all_equal == (self.intersection == "p")

    @property
    def hinge_consistent(self):
        # third sides ordered => angles at the opposite vertex ordered
        side, angle = self.comparisons[-1], self.comparisons[0]
        return (not side.holds(self.tol)) or angle.holds(self.tol)

    def failures(self):
        return [c.name for c in self.comparisons if not c.holds(self.tol)]

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "intersection": self.intersection,
            "straightened": [v.to_list() for v in self.straightened],
            "comparisons": [c.to_dict(self.tol) for c in self.comparisons],
            "as_printed": [c.to_dict(self.tol) for c in self.printed],
            "ok": self.ok,
            "all_equal": self.all_equal,
            "equality_consistent": self.equality_consistent,
            "hinge_consistent": self.hinge_consistent,
            "tol": self.tol,
        }


def _check_opposite(K, u, v, a, b, what):
    try:
        su, sv = ms.side_of(K, u, v, a), ms.side_of(K, u, v, b)
    except NoUniqueGeodesic as e:
        raise HypothesesNotMet(str(e)) from None
    if su * sv != -1:
        raise HypothesesNotMet(f"{what} are not on opposite sides")


def _straighten(K, sides):
    if not ms.size_bounds_check(K, sides):
        raise ConfigInfeasible(f"straightened triangle {sides} is not realizable in M_{K}")
    try:
        return ms.realize_triangle(K, sides)
    except (SizeBoundViolated, ReverseTriangleViolated) as e:
        raise ConfigInfeasible(str(e)) from None


def alexandrov_check(cfg: AlexandrovConfig, tol=1e-8, intersection_tol=1e-10) -> AlexandrovReport:
    """Straighten along the long side and compare the five quantities.

    Always: angle at y between x and z does not decrease, |xz| does not
    decrease.  With [x,z] and [p,y] disjoint the angles at z (p,y) and at x
    (p,y) do not decrease and |py| does not increase; otherwise all three
    reverse.  Equality everywhere exactly when [x,z] meets [p,y] in p.
    """
    if cfg.constellation != "long":
        raise ValueError("use alexandrov_check_other for the short-side constellation")
    K, x, p, y, z = cfg.K, cfg.x, cfg.p, cfg.y, cfg.z
    for a, b in ((x, p), (p, z), (x, y), (y, z)):
        if not ms.chron_K(K, a, b):
            raise HypothesesNotMet("p and y must lie in I(x, z)")
    _check_opposite(K, p, y, x, z, "x and z")
    T = lambda a, b: ms.tau_K(K, a, b)  # noqa: E731
    txp, tpz, txy, tyz = T(x, p), T(p, z), T(x, y), T(y, z)
    if not txy + tyz < txp + tpz:
        raise ConfigInfeasible("tau(x,y) + tau(y,z) must be below tau(x,p) + tau(p,z)")
    xs, ys, zs = _straighten(K, (txy, tyz, txp + tpz))
    ps = ms.geodesic_point(K, xs, zs, txp / (txp + tpz))
    inter = _classify(K, x, z, p, y, intersection_tol)
    fwd = inter == "empty"
    ge, le = ("ge", "le") if fwd else ("le", "ge")
    NA, SD = ms.nonnormalized_angle, ms.signed_distance
    comps = [
        Comparison("angle_xyz", NA(K, y, x, z), NA(K, ys, xs, zs), "ge"),
        Comparison("angle_pzy", NA(K, z, p, y), NA(K, zs, ps, ys), ge),
        Comparison("angle_pxy", NA(K, x, p, y), NA(K, xs, ps, ys), ge),
        Comparison("signed_py", SD(K, p, y), SD(K, ps, ys), le),
        Comparison("signed_xz", SD(K, x, z), SD(K, xs, zs), "le"),
    ]
    return AlexandrovReport(cfg, inter, (xs, ys, zs, ps), comps, [], tol)


def alexandrov_check_other(cfg: AlexandrovConfig, tol=1e-8, intersection_tol=1e-10) -> AlexandrovReport:
    """Straighten along a short side: triangles (x,p,z), (p,y,z) share [p,z].

    Always: angle at z between x and y does not decrease, |xy| does not
    decrease.  With [x,y] and [p,z] disjoint the angles at x (p,z) and at y
    (p,z) do not decrease and |pz| does not increase; otherwise these three
    reverse.  The comparisons of the angles at z (p,y), at x (p,y) and of
    |py| are reported separately under ``printed`` and are not part of the
    verdict (see the notes in the README).
    """
    if cfg.constellation != "short":
        raise ValueError("use alexandrov_check for the long-side constellation")
    K, x, p, y, z = cfg.K, cfg.x, cfg.p, cfg.y, cfg.z
    for a, b in ((x, p), (p, y), (y, z), (x, z)):
        if not ms.chron_K(K, a, b):
            raise HypothesesNotMet("need x << p << y << z")
    _check_opposite(K, p, z, x, y, "x and y")
    T = lambda a, b: ms.tau_K(K, a, b)  # noqa: E731
    txp, tpy, tyz, txz = T(x, p), T(p, y), T(y, z), T(x, z)
    xs, ys, zs = _straighten(K, (txp + tpy, tyz, txz))
    ps = ms.geodesic_point(K, xs, ys, txp / (txp + tpy))
    inter = _classify(K, x, y, p, z, intersection_tol)
    fwd = inter == "empty"
    ge, le = ("ge", "le") if fwd else ("le", "ge")
    NA, SD = ms.nonnormalized_angle, ms.signed_distance
    comps = [
        Comparison("angle_xzy", NA(K, z, x, y), NA(K, zs, xs, ys), "ge"),
        Comparison("angle_pxz", NA(K, x, p, z), NA(K, xs, ps, zs), ge),
        Comparison("angle_pyz", NA(K, y, p, z), NA(K, ys, ps, zs), ge),
        Comparison("signed_pz", SD(K, p, z), SD(K, ps, zs), le),
        Comparison("signed_xy", SD(K, x, y), SD(K, xs, ys), "le"),
    ]
    printed = [
        Comparison("angle_pzy", NA(K, z, p, y), NA(K, zs, ps, ys), "ge"),
        Comparison("angle_pxy", NA(K, x, p, y), NA(K, xs, ps, ys), "ge"),
        Comparison("signed_py", SD(K, p, y), SD(K, ps, ys), "le"),
    ]
    return AlexandrovReport(cfg, inter, (xs, ys, zs, ps), comps, printed, tol)


def _diamond_size(K, rng):
    hi = 1.5 if K >= 0 else 1.2
    C = rng.uniform(0.3, hi)
    return C / np.sqrt(abs(K)) if K != 0 else C


def _diamond_point(K, rng, C, lo=0.0, hi=1.0):
    u, v = rng.uniform(lo, hi, 2)
    return ms.from_chart(K, (u + v) / 2 * C, (u - v) / 2 * C)


def sample_alexandrov_config(K, rng, constellation="long", intersection=None, margin=1e-6, max_tries=100000):
    """Random valid configuration; intersection in (None, "empty", "interior", "p").

    Vertices are drawn in the chart diamond between x (the origin) and z (on
    the time axis); "p" places p on the segment [x,z] (long) or [x,y]
    (short) so that the degenerate equality case is hit exactly.  Draws
    whose classification is within ``margin`` of a case boundary are
    rejected.
    """
    check = alexandrov_check if constellation == "long" else alexandrov_check_other
    for _ in range(max_tries):
        C = _diamond_size(K, rng)
        x, z = ms.origin(K), ms.from_chart(K, C, 0.0)
        if constellation == "long":
            y = _diamond_point(K, rng, C)
            if intersection == "p":
                p = ms.geodesic_point(K, x, z, rng.uniform(0.15, 0.85))
            else:
                p = _diamond_point(K, rng, C)
        else:
            if intersection == "p":
                y = _diamond_point(K, rng, C, 0.3, 1.0)
                if not (ms.chron_K(K, x, y) and ms.chron_K(K, y, z)):
                    continue
                p = ms.geodesic_point(K, x, y, rng.uniform(0.15, 0.85))
            else:
                p = _diamond_point(K, rng, C, 0.0, 0.6)
                y = _diamond_point(K, rng, C, 0.3, 1.0)
        cfg = AlexandrovConfig(float(K), x, p, y, z, constellation)
        try:
            rep = check(cfg)
        except (HypothesesNotMet, ConfigInfeasible, LegNotTimelike, NoUniqueGeodesic):
            continue
        if intersection is not None and rep.intersection != intersection:
            continue
        if rep.intersection != "p":
            a, b = (x, z) if constellation == "long" else (x, y)
            u, v = (p, y) if constellation == "long" else (p, z)
            scale = max(ms.tau_K(K, a, b), 1e-12)
            if min(abs(_offset(K, a, b, u)), abs(_offset(K, a, b, v)), abs(_offset(K, u, v, a)),
                   abs(_offset(K, u, v, b))) < margin * scale:
                continue
            if min(abs(c.diff) for c in rep.comparisons) < margin * 1e-2 * scale:
                continue
        return cfg
    raise ConfigInfeasible("no configuration found")


# --- the gluing configuration and detour functions ---------------------------


def _transport(K, src, dst, r, flip):
    return ms.from_frame_coordinates(K, dst, ms.frame_coordinates(K, src, r), flip=flip)


@dataclass
class UnionConfig:
    """Comparison triangles of (x,p,y) and (p,y,z) glued along [p,y].

    z is placed on the other side of the line through p, y than x.  q is the
    point where the extension of [z,p] beyond p meets [x,y] and r the point
    where the extension of [x,p] beyond p meets [y,z] (None if they do not
    exist, which happens when [x,z] meets [p,y]).
    """

    K: float
    x: ms.ModelPoint
    p: ms.ModelPoint
    y: ms.ModelPoint
    z: ms.ModelPoint
    sides: dict
    intersection: str
    q: ms.ModelPoint | None = None
    r: ms.ModelPoint | None = None

    def to_dict(self):
        return {
            "K": self.K,
            **{k: getattr(self, k).to_list() for k in "xpyz"},
            "sides": dict(self.sides),
            "intersection": self.intersection,
            "q": None if self.q is None else self.q.to_list(),
            "r": None if self.r is None else self.r.to_list(),
        }


def _extension_hit(K, a, b, u, v, past):
    """Point where the geodesic from a through b, continued past b, meets [u, v].

    past says the continuation runs into the past (then it can only hit
    while it stays in the future of u) or into the future (stays in the past
    of v).  Returns None when it leaves that region without hitting.
    """
    frame = ms.segment_frame(K, u, v)
    gamma = lambda s: ms.geodesic_point(K, a, b, s)  # noqa: E731
    beta = lambda s: ms.frame_coordinates(K, frame, gamma(s))[2]  # noqa: E731
    inside = (lambda r: ms.causal_K(K, u, r)) if past else (lambda r: ms.causal_K(K, r, v))
    prev, lo, step = beta(1.0), 1.0, 0.05
    if prev == 0:
        return b
    for _ in range(10000):
        s = lo + step
        r = gamma(s)
        cur = beta(s)
        if cur == 0 or np.sign(cur) != np.sign(prev):
            root = brentq(beta, lo, s, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            hit = gamma(root)
            L, t = ms.tau_K(K, u, v), ms.tau_K(K, u, hit)
            if ms.causal_K(K, u, hit) and ms.causal_K(K, hit, v) and t <= L * (1 + 1e-9):
                return hit
            return None
        if not inside(r):
            return None
        lo, prev = s, cur
    return None


def glue_comparison_triangles(K, tau_xp, tau_py, tau_xy, tau_yz, tau_pz, intersection_tol=1e-10) -> UnionConfig:
    """Realize the comparison triangles of (x,p,y) and (p,y,z) across [p,y]."""
    x, p, y = ms.realize_triangle(K, (tau_xp, tau_py, tau_xy))
    p2, y2, z2 = ms.realize_triangle(K, (tau_py, tau_yz, tau_pz))
    dst = ms.segment_frame(K, p, y)
    src = ms.segment_frame(K, p2, y2)
    side_x = ms.frame_coordinates(K, dst, x)[2]
    side_z = ms.frame_coordinates(K, src, z2)[2]
    z = _transport(K, src, dst, z2, flip=bool(side_x * side_z > 0))
    sides = {"xp": tau_xp, "py": tau_py, "xy": tau_xy, "yz": tau_yz, "pz": tau_pz}
    inter = _classify(K, x, z, p, y, intersection_tol)
    q = r = None
    if inter == "empty":
        q = _extension_hit(K, z, p, x, y, past=True)
        r = _extension_hit(K, x, p, y, z, past=False)
    return UnionConfig(float(K), x, p, y, z, sides, inter, q, r)


@dataclass
class DetourConfig:
    """Everything the detour function needs, in one model plane.

    ``union`` holds x, p, y, z (two comparison triangles glued along [p,y])
    and q; ``straight`` is the straightened triangle (x', y', z').  The
    parameter t runs over [0, m]: for K = 0 it is the affine parameter of
    [x, y], otherwise sqrt|K| times the time separation from x.
    """

    K: float
    union: UnionConfig
    straight: tuple
    m: float

    @property
    def c(self):
        return self.union.sides["xp"] + self.union.sides["pz"]

    def to_dict(self):
        return {
            "K": self.K,
            "union": self.union.to_dict(),
            "straight": [v.to_list() for v in self.straight],
            "m": self.m,
        }


def detour_config(K, x, p, y, z) -> DetourConfig:
    """Detour configuration from four model points (p << y, x and z apart)."""
    T = lambda a, b: ms.tau_K(K, a, b)  # noqa: E731
    if not (ms.chron_K(K, x, p) and ms.chron_K(K, p, y) and ms.chron_K(K, y, z) and ms.chron_K(K, p, z)):
        raise HypothesesNotMet("need x << p << y << z and p << z")
    U = glue_comparison_triangles(K, T(x, p), T(p, y), T(x, y), T(y, z), T(p, z))
    return _detour_from_union(U)


def _detour_from_union(U):
    K = U.K
    if U.intersection != "empty" or U.q is None:
        raise ConfigInfeasible(f"[x,z] meets [p,y] ({U.intersection}); no detour to take")
    s = U.sides
    straight = _straighten(K, (s["xy"], s["yz"], s["xp"] + s["pz"]))
    tq = ms.tau_K(K, U.x, U.q)
    m = tq / s["xy"] if K == 0 else np.sqrt(abs(K)) * tq
    return DetourConfig(float(K), U, straight, float(m))


def _detour_point(cfg, t):
    K, U = cfg.K, cfg.union
    L = U.sides["xy"]
    frac = t if K == 0 else t / (np.sqrt(abs(K)) * L)
    xs, ys, _ = cfg.straight
    return ms.geodesic_point(K, U.x, U.y, frac), ms.geodesic_point(K, xs, ys, frac)


def detour_function(K, cfg: DetourConfig, t) -> float:
    """Detour through p minus the direct distance in the straightened triangle.

    K = 0:  (tau(a,p) + tau(p,z))^2 - tau(a',z')^2
    K > 0:  cosh(k(tau(a,p) + tau(p,z))) - cosh(k tau(a',z'))
    K < 0:  cos(k tau(a',z')) - cos(k(tau(a,p) + tau(p,z)))
    with k = sqrt|K|; all three are >= 0 exactly when the detour is at least
    as long.  a runs over [x, q] and a' over the matching part of [x', y'].
    """
    if K != cfg.K:
        raise ValueError("K does not match the configuration")
    if t < 0 or t > cfg.m * (1 + 1e-12):
        raise ParameterOutOfRange(f"t={t} outside [0, {cfg.m}]")
    U = cfg.union
    if t == 0:
        # a = x and a' = x': both distances are construction lengths
        detour, direct = U.sides["xp"] + U.sides["pz"], cfg.c
    else:
        a, a_s = _detour_point(cfg, t)
        detour = ms.tau_K(K, a, U.p) + U.sides["pz"]
        direct = ms.tau_K(K, a_s, cfg.straight[2])
    if K == 0:
        return detour * detour - direct * direct
    k = np.sqrt(abs(K))
    if K > 0:
        return float(np.cosh(k * detour) - np.cosh(k * direct))
    return float(np.cos(k * direct) - np.cos(k * detour))


def detour_grid(cfg: DetourConfig, n=100):
    t = np.linspace(0.0, cfg.m, n)
    return t, np.array([detour_function(cfg.K, cfg, float(s)) for s in t])


def detour_sturm_check(cfg: DetourConfig, n=100, tol=1e-6):
    """Sturm comparison on the detour grid: f'' - f <= 0 (K>0), f'' + f <= 0 (K<0), f'' <= 0 (K=0)."""
    t, f = detour_grid(cfg, n)
    k = 0.0 if cfg.K == 0 else (-1.0 if cfg.K > 0 else 1.0)
    return ms.sturm_check(k, np.column_stack([t, f]), tol=tol)


def sample_detour_config(K, rng, min_m=1e-3, max_tries=100000) -> DetourConfig:
    """Random gluing configuration with [x,z] and [p,y] disjoint."""
    for _ in range(max_tries):
        C = _diamond_size(K, rng)
        x, z = ms.origin(K), ms.from_chart(K, C, 0.0)
        p = _diamond_point(K, rng, C, 0.0, 0.7)
        y = _diamond_point(K, rng, C, 0.2, 1.0)
        try:
            cfg = detour_config(K, x, p, y, z)
        except (HypothesesNotMet, ConfigInfeasible, LegNotTimelike, NoUniqueGeodesic):
            continue
        if cfg.m < min_m:
            continue
        return cfg
    raise ConfigInfeasible("no detour configuration found")


# --- gluing lemma --------------------------------------------------------------


@dataclass
class GluingLemmaReport:
    K: float
    side: str
    s: float
    time_reversed: bool
    union: UnionConfig | None
    hypothesis: list
    conclusion: TriangleReport
    case_counts: dict
    model_violations: list
    tol: float

    @property
    def hypothesis_ok(self):
        return all(r.passed for r in self.hypothesis)

    @property
    def conclusion_ok(self):
        return self.conclusion.passed

    @property
    def consistent(self):
        """The lemma holds on this instance: hypothesis implies conclusion."""
        return (not self.hypothesis_ok) or self.conclusion_ok

    def to_dict(self):
        d = self.conclusion.defects
        return {
            "K": self.K,
            "side": self.side,
            "s": self.s,
            "time_reversed": self.time_reversed,
            "union": None if self.union is None else self.union.to_dict(),
            "hypothesis": [r.to_dict(pairs=False) for r in self.hypothesis],
            "hypothesis_ok": self.hypothesis_ok,
            "conclusion": self.conclusion.to_dict(pairs=False),
            "conclusion_ok": self.conclusion_ok,
            "max_abs_defect": float(np.abs(d).max()) if len(d) else 0.0,
            "case_counts": dict(sorted(self.case_counts.items())),
            "model_violations": self.model_violations,
            "consistent": self.consistent,
        }


def _case_of(pair, sides, m_q, m_r, tol):
    """Proof case(s) of an unordered pair on the big triangle.

    m_q is tau(x, q) on [x,y], m_r is tau(y, r) on [y,z]; a parameter within
    tol of such a threshold belongs to both adjacent cases.
    """
    (sa, s_a), (sb, s_b) = sorted([(pair.side_a, pair.s_a), (pair.side_b, pair.s_b)])
    if sa == sb:
        return ["side"]
    if (sa, sb) == ("xy", "yz"):
        return ["A"]
    txp = sides["xp"]
    if (sa, sb) == ("xy", "xz"):
        a, u = s_a, s_b
        if u <= txp:
            return ["B.1"]
        if m_q is None:
            return ["B.2"]
        if abs(a - m_q) <= tol:
            return ["B.2.i", "B.2.ii"]
        return ["B.2.i"] if a > m_q else ["B.2.ii"]
    # (xz, yz)
    u, a = s_a, s_b
    if u >= txp:
        return ["C.1"]
    if m_r is None:
        return ["C.2"]
    if abs(a - m_r) <= tol:
        return ["C.2.i", "C.2.ii"]
    return ["C.2.i"] if a < m_r else ["C.2.ii"]


def _union_point(U, side, s):
    K = U.K
    if side == "xy":
        a, b, L = U.x, U.y, U.sides["xy"]
    elif side == "yz":
        a, b, L = U.y, U.z, U.sides["yz"]
    else:
        txp = U.sides["xp"]
        if s <= txp:
            a, b, L = U.x, U.p, txp
        else:
            a, b, L, s = U.p, U.z, U.sides["pz"], s - txp
    return a if L == 0 else ms.geodesic_point(K, a, b, min(max(s / L, 0.0), 1.0))


def _model_inequalities(U, conclusion, cases_per_pair, tol):
    """The model-plane inequality that holds in each case of the glued configuration."""
    K = U.K
    lengths = dict(zip(SIDES, conclusion.triangle.sides))
    cmp_tri = conclusion.comparison
    out = []
    for pair, cases in zip(conclusion.pairs, cases_per_pair):
        if cases == ["side"]:
            continue
        a = _union_point(U, pair.side_a, pair.s_a)
        b = _union_point(U, pair.side_b, pair.s_b)
        a_s = comparison_point(K, cmp_tri, pair.side_a, pair.s_a, lengths[pair.side_a])
        b_s = comparison_point(K, cmp_tri, pair.side_b, pair.s_b, lengths[pair.side_b])
        straight = ms.tau_K(K, a_s, b_s)
        if straight <= 0:
            continue
        for case in cases:
            if case.endswith(".ii"):
                bound = ms.tau_K(K, a, U.p) + ms.tau_K(K, U.p, b)
            else:
                bound = ms.tau_K(K, a, b)
            if bound < straight - tol * max(1.0, straight):
                out.append({"case": case, "pair": pair.to_dict(), "union_bound": bound, "straight": straight})
    return out


def gluing_lemma_check(K, T: TimelikeTriangle, side="xz", s=None, n_pairs=36, seed=0, tol=1e-9,
                       boundary_tol=1e-9) -> GluingLemmaReport:
    """Split T at the point p of ``side`` at tau-parameter s and test the lemma.

    Hypothesis: both subtriangles satisfy the upper bound for K on sampled
    pairs.  Conclusion: T satisfies it.  For p on [x,z] the conclusion pairs
    are sorted into cases by where the two points lie (A, B.1, B.2.i, B.2.ii and the time
    mirrored C cases) and the model-plane inequality used in each case is
    checked on the glued comparison triangles.  If y << p the whole check is
    run on the time-reversed triangle.
    """
    rng = np.random.default_rng(seed)
    L = T.sides[SIDES.index(side)]
    if s is None:
        s = 0.5 * L
    if not (0 < s < L):
        raise SubtriangleDegenerate(f"s={s} must lie strictly inside (0, {L})")
    g = T.geometry
    x, y, z = T.vertices
    p = T.point(side, s)
    reversed_ = False
    if side == "xz":
        if g.tau(p, y) > 0:
            pass
        elif g.tau(y, p) > 0:
            g = ReversedGeometry(g)
            x, z = z, x
            s = L - s
            reversed_ = True
        else:
            raise SubtriangleDegenerate("p and y are not timelike related")
        subs = [(x, p, y), (p, y, z)]
    elif side == "xy":
        subs = [(x, p, z), (p, y, z)]
    elif side == "yz":
        subs = [(x, y, p), (x, p, z)]
    else:
        raise ValueError(f"unknown side {side!r}")
    try:
        tris = [timelike_triangle(g, *v) for v in subs]
    except (LegNotTimelike, NoRealizingCurve, ReverseTriangleViolated) as e:
        raise SubtriangleDegenerate(str(e)) from None
    big = timelike_triangle(g, x, y, z)
    hyp = [triangle_report(K, t, rng, n_pairs, "upper", tol, index=i) for i, t in enumerate(tris)]
    concl = triangle_report(K, big, rng, n_pairs, "upper", tol)
    counts = {}
    union = None
    violations = []
    if side == "xz":
        t1, t2 = tris
        sides = {
            "xp": t1.sides[0], "py": t1.sides[1], "xy": t1.sides[2], "yz": t2.sides[1], "pz": t2.sides[2],
        }
        union = glue_comparison_triangles(K, **{f"tau_{k}": v for k, v in sides.items()})
        m_q = None if union.q is None else ms.tau_K(K, union.x, union.q)
        m_r = None if union.r is None else ms.tau_K(K, union.y, union.r)
        per_pair = []
        for pair in concl.pairs:
            cases = _case_of(pair, sides, m_q, m_r, boundary_tol * max(1.0, L))
            per_pair.append(cases)
            for c in cases:
                counts[c] = counts.get(c, 0) + 1
        violations = _model_inequalities(union, concl, per_pair, tol)
    else:
        for pair in concl.pairs:
            c = "side" if pair.side_a == pair.side_b else "cross"
            counts[c] = counts.get(c, 0) + 1
    return GluingLemmaReport(float(K), side, float(s), reversed_, union, hyp, concl, counts, violations, tol)


def _hinge_triangle(K, leg1, leg2, signed_opposite, past_legs=False):
    """Vertex with two timelike legs (lengths leg1, leg2) whose far ends are at signed distance signed_opposite."""
    o = ms.origin(K)
    _, et, ex = ms._base_frame(K)
    k = np.sqrt(abs(K)) if K != 0 else 1.0
    sgn = -1.0 if past_legs else 1.0

    def ends(phi):
        a = ms.exp_map(K, o, sgn * leg1 * et / k)
        b = ms.exp_map(K, o, sgn * leg2 * (np.cosh(phi) * et + np.sinh(phi) * ex) / k)
        return a, b

    def g(phi):
        a, b = ends(phi)
        return ms.signed_distance(K, a, b) - signed_opposite

    lo = g(0.0)
    if lo > 1e-12:
        raise SideMismatch("opposite side shorter than the legs allow")
    if abs(lo) <= 1e-12:
        return (o, *ends(0.0))
    hi = 0.5
    while g(hi) < 0:
        hi *= 2
        if hi > 50:
            raise ConfigInfeasible("cannot realize the hinge")
    phi = brentq(g, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return (o, *ends(phi))


def _ab_defects(K, geom, verts, cmp_verts, rng, n):
    """|ab| - |a'b'| over side pairs (parametrized affinely) of a geodesic triangle."""
    out = []
    segs = [(0, 1), (1, 2), (0, 2)]
    for i, j in product(range(3), range(3)):
        for _ in range(max(1, -(-n // 9))):
            fa, fb = rng.uniform(0, 1, 2)
            a = geom.geodesic(verts[segs[i][0]], verts[segs[i][1]], fa)
            b = geom.geodesic(verts[segs[j][0]], verts[segs[j][1]], fb)
            ab = ms.geodesic_point(K, cmp_verts[segs[i][0]], cmp_verts[segs[i][1]], fa)
            bb = ms.geodesic_point(K, cmp_verts[segs[j][0]], cmp_verts[segs[j][1]], fb)
            out.append(ms.signed_distance(K, ab, bb) - geom.signed_distance(a, b))
    return np.array(out)


@dataclass
class ManifoldGluingReport:
    K: float
    shared: float
    hypothesis_min: list
    conclusion: TriangleReport
    tol: float

    @property
    def hypothesis_ok(self):
        return all(v >= -self.tol for v in self.hypothesis_min)

    @property
    def conclusion_ok(self):
        return self.conclusion.passed

    @property
    def consistent(self):
        return (not self.hypothesis_ok) or self.conclusion_ok

    def to_dict(self):
        d = self.conclusion.defects
        return {
            "K": self.K,
            "shared_signed_length": self.shared,
            "hypothesis_min_margin": self.hypothesis_min,
            "hypothesis_ok": self.hypothesis_ok,
            "conclusion": self.conclusion.to_dict(pairs=False),
            "conclusion_ok": self.conclusion_ok,
            "max_abs_defect": float(np.abs(d).max()) if len(d) else 0.0,
            "consistent": self.consistent,
        }


def gluing_lemma_manifold_check(K, geom1, T1, geom2, T2, shared, glued, T3, n_pairs=36, seed=0, tol=1e-9):
    """Gluing lemma with a shared side of any causal character.

    T1 = (x1, p1, y1) lives in geom1, T2 = (p2, y2, z2) in geom2 (model
    geometries), T3 = (x, y, z) in the glued geometry with p on [x, z].  The
    matching side lengths are checked first (SideMismatch beyond 1e-9).  The
    hypothesis is the signed-distance bound |ab| <= |a'b'| on both
    subtriangles against model triangles with the same signed sides; the
    conclusion is the timelike bound on T3.
    """
    x1, p1, y1 = T1
    p2, y2, z2 = T2
    x, y, z = T3
    s1, s2 = geom1.signed_distance(p1, y1), geom2.signed_distance(p2, y2)
    if abs(s1 - shared) > 1e-9 or abs(s2 - shared) > 1e-9:
        raise SideMismatch(f"shared side lengths {s1}, {s2} differ from {shared}")
    txp, txy = geom1.tau(x1, p1), geom1.tau(x1, y1)
    tpz, tyz = geom2.tau(p2, z2), geom2.tau(y2, z2)
    big = timelike_triangle(glued, x, y, z)
    checks = {
        "tau(x,y)": (txy, big.sides[0]),
        "tau(y,z)": (tyz, big.sides[1]),
        "tau(x,p)+tau(p,z)": (txp + tpz, big.sides[2]),
    }
    for name, (a, b) in checks.items():
        if abs(a - b) > 1e-9 * max(1.0, abs(b)):
            raise SideMismatch(f"{name}: subtriangles give {a}, the glued triangle {b}")
    rng = np.random.default_rng(seed)
    # comparison geodesic triangles with the same signed sides
    c1 = _hinge_triangle(K, txp, txy, shared)  # vertex x, ends p, y
    c2 = _hinge_triangle(K, tpz, tyz, shared, past_legs=True)  # vertex z, ends p, y
    h1 = _ab_defects(K, geom1, (x1, p1, y1), c1, rng, n_pairs)
    h2 = _ab_defects(K, geom2, (z2, p2, y2), c2, rng, n_pairs)
    concl = triangle_report(K, big, rng, n_pairs, "upper", tol)
    return ManifoldGluingReport(float(K), float(shared), [float(h1.min()), float(h2.min())], concl, tol)
