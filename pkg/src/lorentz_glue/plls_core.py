"""Finite Lorentzian pre-length spaces and their diagnostics.

A finite space stores the distance matrix d, the chronological and causal
relations as boolean matrices and the time separation tau.  Infinite
distances and time separations are stored as ``np.inf``, whose IEEE
arithmetic is absorbing for the sums and maxima used here.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path

from . import model_spaces as ms
from .errors import NotCausal

__all__ = [
    "INF",
    "FiniteLorentzSpace",
    "Violation",
    "ValidationReport",
    "DiscreteCausalCurve",
    "IsolationReport",
    "validate_space",
    "tau_length",
    "lsc_defect",
    "isolation_report",
    "restrict_space",
    "space_from_model_points",
]

INF = np.inf


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteLorentzSpace:
    """Finite tuple (X, d, <<, <=, tau) indexed by point ids."""

    points: tuple
    d: np.ndarray
    chron: np.ndarray
    causal: np.ndarray
    tau: np.ndarray
    coords: tuple | None = None
    K: float | None = None
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple(str(p) for p in self.points)
        n = len(pts)
        if len(set(pts)) != n:
            raise ValueError("point ids must be unique")
        object.__setattr__(self, "points", pts)
        for name, dtype in (("d", float), ("tau", float), ("chron", bool), ("causal", bool)):
            arr = _frozen(getattr(self, name), dtype)
            if arr.shape != (n, n):
                raise ValueError(f"{name} has shape {arr.shape}, expected {(n, n)}")
            object.__setattr__(self, name, arr)
        if self.coords is not None:
            if len(self.coords) != n:
                raise ValueError("coords must have one entry per point")
            object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(pts)})

    @property
    def n(self):
        return len(self.points)

    def index(self, pid):
        try:
            return self._index[str(pid)]
        except KeyError:
            raise KeyError(f"unknown point id {pid!r}") from None

    def indices(self, pids):
        return np.array([self.index(p) for p in pids], dtype=int)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"FiniteLorentzSpace(n={self.n}, K={self.K})"

    @classmethod
    def from_relations(cls, points, tau, causal=None, chron=None, d=None, coords=None, K=None):
        """Build a space filling in omitted pieces.

        Omitted chron is derived as tau > 0, omitted causal as chron plus the
        diagonal, and omitted d from coordinates when a model is attached
        (the discrete metric otherwise).
        """
        n = len(points)
        tau = np.array(tau, dtype=float)
        if chron is None:
            chron = tau > 0
        chron = np.array(chron, dtype=bool)
        if causal is None:
            causal = chron | np.eye(n, dtype=bool)
        if d is None:
            if coords is not None and K is not None and all(c is not None for c in coords):
                d = _coordinate_metric(coords)
            else:
                d = 1.0 - np.eye(n)
        return cls(tuple(points), d, chron, causal, tau, coords, K)


def _coordinate_metric(coords):
    C = np.array([c.coords if isinstance(c, ms.ModelPoint) else c for c in coords], dtype=float)
    if C.size == 0:
        return np.zeros((0, 0))
    diff = C[:, None, :] - C[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def space_from_model_points(K, pts, ids=None):
    """Manifold-backed finite space: exact model tau, Euclidean ambient distance."""
    pts = list(pts)
    if ids is None:
        ids = [f"p{i}" for i in range(len(pts))]
    if not pts:
        e = np.zeros((0, 0))
        return FiniteLorentzSpace((), e, e.astype(bool), e.astype(bool), e, (), float(K))
    C = np.array([p.coords for p in pts])
    tau, causal, chron = ms.pairwise_relations(K, C)
    return FiniteLorentzSpace(tuple(ids), _coordinate_metric(pts), chron, causal, tau, tuple(pts), float(K))


# --- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    count: int
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self):
        return not self.violations

    def axioms(self):
        return [v.axiom for v in self.violations]

    def to_dict(self):
        return {
            "ok": self.ok,
            "violations": [
                {"axiom": v.axiom, "witness": list(v.witness), "count": v.count, "detail": v.detail}
                for v in self.violations
            ],
        }


def _first(mask):
    idx = np.argwhere(mask)
    return tuple(int(i) for i in idx[0]), int(len(idx))


def _bool_compose(A, B):
    # boolean matrix product via BLAS; counts stay exact in float64
    return (A.astype(float) @ B.astype(float)) > 0.5


def validate_space(X: FiniteLorentzSpace, tol: float = 1e-9) -> ValidationReport:
    """Check every axiom of a finite Lorentzian pre-length space.

    Each violated axiom is reported once with the lexicographically first
    witness (as point ids) and the number of offending tuples.
    """
    out = []
    n = X.n
    if n == 0:
        return ValidationReport(out)
    ids = X.points
    d, tau, C, L = X.d, X.tau, X.causal, X.chron
    finite_tau = tau[np.isfinite(tau)]
    finite_d = d[np.isfinite(d)]
    tol_tau = tol * max(1.0, float(np.max(np.abs(finite_tau))) if finite_tau.size else 1.0)
    tol_d = tol * max(1.0, float(np.max(np.abs(finite_d))) if finite_d.size else 1.0)

    def add(axiom, mask, detail=""):
        if np.any(mask):
            w, cnt = _first(mask)
            out.append(Violation(axiom, tuple(ids[i] for i in w), cnt, detail))

    add("d_nonnegative", (d < 0) | np.isnan(d))
    add("d_diagonal", np.eye(n, dtype=bool) & (d != 0))
    add("d_symmetric", d != d.T)
    # triangle inequality: screen with the metric closure, count triples only on failure
    first_tri = None
    tri_count = 0
    finite = np.isfinite(d) & (d >= 0)
    closure = d
    if n > 1 and np.all(finite):
        # dense csgraph input reads 0 as "no edge"
        g = np.where((d == 0) & ~np.eye(n, dtype=bool), np.finfo(float).tiny, d)
        closure = shortest_path(g, method="FW", directed=True)
    if np.any(np.isfinite(d) & (closure < d - tol_d)) or not np.all(finite):
        for y in range(n):
            via = d[:, y][:, None] + d[y, :][None, :]
            bad = d > via + tol_d
            if np.any(bad):
                tri_count += int(bad.sum())
                if first_tri is None:
                    i, k = np.argwhere(bad)[0]
                    first_tri = (int(i), y, int(k))
    if first_tri is not None:
        i, y, k = first_tri
        out.append(
            Violation(
                "d_triangle",
                (ids[i], ids[y], ids[k]),
                tri_count,
                f"d(x,z)={d[i, k]!r} > d(x,y)+d(y,z)={d[i, y] + d[y, k]!r}",
            )
        )
    add("causal_reflexive", np.eye(n, dtype=bool) & ~C)
    _add_transitivity(out, ids, C, "causal_transitive")
    _add_transitivity(out, ids, L, "chron_transitive")
    add("chron_in_causal", L & ~C)
    add("tau_nonnegative", (tau < 0) | np.isnan(tau))
    add("tau_positive_iff_chron", (tau > 0) != L)

    first_rt = None
    rt_count = 0
    for y in range(n):
        past, fut = np.nonzero(C[:, y])[0], np.nonzero(C[y, :])[0]
        if past.size == 0 or fut.size == 0:
            continue
        with np.errstate(invalid="ignore"):
            lhs = tau[past, y][:, None] + tau[y, fut][None, :]
            bad = tau[np.ix_(past, fut)] + tol_tau < lhs
        if np.any(bad):
            rt_count += int(bad.sum())
            cand = [(int(past[a]), int(fut[b])) for a, b in np.argwhere(bad)]
            i, k = min(cand)
            if first_rt is None or (i, y, k) < first_rt:
                first_rt = (i, y, k)
    if first_rt is not None:
        i, y, k = first_rt
        out.append(
            Violation(
                "reverse_triangle",
                (ids[i], ids[y], ids[k]),
                rt_count,
                f"tau(x,z)={tau[i, k]!r} < tau(x,y)+tau(y,z)={tau[i, y] + tau[y, k]!r}",
            )
        )
    return ValidationReport(out)


def _add_transitivity(out, ids, R, axiom):
    comp = _bool_compose(R, R)
    bad = comp & ~R
    if not np.any(bad):
        return
    i, k = (int(v) for v in np.argwhere(bad)[0])
    j = int(np.nonzero(R[i, :] & R[:, k])[0][0])
    out.append(Violation(axiom, (ids[i], ids[j], ids[k]), int(bad.sum())))


# --- curves ------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteCausalCurve:
    points: tuple
    timelike: bool = False
    direction: str = "future"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.direction not in ("future", "past"):
            raise ValueError("direction must be 'future' or 'past'")


def tau_length(X: FiniteLorentzSpace, curve: DiscreteCausalCurve) -> float:
    """Sum of tau over consecutive points of a discrete causal curve.

    Past-directed curves are measured along their reversal.  For a finite
    point sequence the sum over the full sequence is the smallest over all
    sub-partitions, since merging two steps can only increase the sum.
    """
    idx = X.indices(curve.points)
    if curve.direction == "past":
        idx = idx[::-1]
    if len(idx) < 2:
        return 0.0
    a, b = idx[:-1], idx[1:]
    rel = X.chron if curve.timelike else X.causal
    ok = rel[a, b]
    if not np.all(ok):
        k = int(np.argmin(ok))
        kind = "<<" if curve.timelike else "<="
        raise NotCausal(f"{X.points[a[k]]} {kind} {X.points[b[k]]} fails")
    return float(np.sum(X.tau[a, b]))


# --- diagnostics -------------------------------------------------------------


def lsc_defect(X: FiniteLorentzSpace, scale: float, pairs: Sequence | None = None):
    """Lower semi-continuity defect of tau at metric scale `scale`.

    For each ordered pair (x, y) the defect is tau(x, y) minus the smallest
    tau(x', y') over d(x, x') <= scale, d(y, y') <= scale.  On a sample of a
    continuous tau it is bounded by the modulus of continuity at that scale;
    a defect that stays large as the sample refines signals a jump down, i.e.
    failure of lower semi-continuity.  Returns a list of ((x, y), defect)
    with ids, in the order of `pairs` (all pairs by default).
    """
    near = X.d <= scale
    tau = X.tau
    if pairs is None:
        idx_pairs = [(i, j) for i in range(X.n) for j in range(X.n)]
    else:
        idx_pairs = [(X.index(a), X.index(b)) for a, b in pairs]
    out = []
    cache = {}
    for i, j in idx_pairs:
        if j not in cache:
            cols = np.nonzero(near[j])[0]
            cache[j] = tau[:, cols].min(axis=1)
        lo = float(cache[j][near[i]].min())
        t = float(tau[i, j])
        defect = 0.0 if t == lo else t - lo
        out.append(((X.points[i], X.points[j]), defect))
    return out


@dataclass
class IsolationReport:
    """Witnesses for the non-timelike local isolation condition."""

    scales: tuple
    has_future: dict
    has_past: dict
    future_witness: dict
    past_witness: dict

    def passes(self, scale=None):
        scales = self.scales if scale is None else (scale,)
        for eps in scales:
            for a, nonempty in self.has_future.items():
                if nonempty and self.future_witness[a][eps] is None:
                    return False
            for a, nonempty in self.has_past.items():
                if nonempty and self.past_witness[a][eps] is None:
                    return False
        return True

    def failures(self, scale):
        bad = []
        for a in self.has_future:
            if self.has_future[a] and self.future_witness[a][scale] is None:
                bad.append((a, "future"))
            if self.has_past[a] and self.past_witness[a][scale] is None:
                bad.append((a, "past"))
        return bad

    def to_dict(self):
        return {
            "scales": list(self.scales),
            "passes": {repr(eps): self.passes(eps) for eps in self.scales},
            "points": {
                a: {
                    "has_future": self.has_future[a],
                    "has_past": self.has_past[a],
                    "future_witness": {repr(e): self.future_witness[a][e] for e in self.scales},
                    "past_witness": {repr(e): self.past_witness[a][e] for e in self.scales},
                }
                for a in self.has_future
            },
        }


def isolation_report(X: FiniteLorentzSpace, A, scales) -> IsolationReport:
    """For each a in A and scale eps, find the nearest b in A with a << b
    (resp. b << a) and d(a, b) <= eps.  Neighbourhoods are metric eps-balls
    intersected with A; futures and pasts are taken in all of X."""
    A = list(A)
    aidx = X.indices(A)
    scales = tuple(float(e) for e in scales)
    hf, hp, fw, pw = {}, {}, {}, {}
    for a, i in zip(A, aidx):
        hf[a] = bool(np.any(X.chron[i, :]))
        hp[a] = bool(np.any(X.chron[:, i]))
        fut = aidx[X.chron[i, aidx]]
        past = aidx[X.chron[aidx, i]]
        fw[a] = {eps: _nearest(X, i, fut, eps) for eps in scales}
        pw[a] = {eps: _nearest(X, i, past, eps) for eps in scales}
    return IsolationReport(scales, hf, hp, fw, pw)


def _nearest(X, i, cand, eps):
    if cand.size == 0:
        return None
    dist = X.d[i, cand]
    k = int(np.argmin(dist))
    return X.points[cand[k]] if dist[k] <= eps else None


def restrict_space(X: FiniteLorentzSpace, S) -> FiniteLorentzSpace:
    """Restriction to the subset S (kept in the order of X)."""
    keep = set(str(s) for s in S)
    for s in keep:
        X.index(s)
    idx = np.array([i for i, p in enumerate(X.points) if p in keep], dtype=int)
    sub = np.ix_(idx, idx)
    coords = None if X.coords is None else tuple(X.coords[i] for i in idx)
    return FiniteLorentzSpace(
        tuple(X.points[i] for i in idx), X.d[sub], X.chron[sub], X.causal[sub], X.tau[sub], coords, X.K
    )
