"""Gluing finite Lorentzian pre-length spaces.

The quotient time separation of an equivalence relation ~ on a space X is
the supremum of sum tau(x_i, y_i) over chains x ~ x_1 <= y_1 ~ x_2 <= ... <=
y_n ~ y.  On a finite space this is a longest-walk problem on the graph of
equivalence classes, where class a has an edge to class b of weight
max tau(u, v) over representatives u in a, v in b with u <= v.  Walks through
a cycle of positive weight are unbounded, so strongly connected components
containing a positive edge force tau = inf; every other component only has
zero-weight edges and collapses to a point, leaving a longest-path problem
on a DAG.

Two solvers share this code.  The "full" solver runs the DAG longest path on
every class.  The "seam" solver only uses the classes with more than one
member as pivots: in a space that satisfies transitivity and the reverse
triangle inequality two consecutive steps inside one space can always be
merged, so optimal chains only change space at glued classes.
"""

from collections import deque
from dataclasses import dataclass, field
from graphlib import TopologicalSorter

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from . import model_spaces as ms
from .errors import (
    HypothesesNotMet,
    InvalidChain,
    NotABijection,
    NotChronological,
    TooLarge,
)
from .plls_core import INF, FiniteLorentzSpace, validate_space

__all__ = [
    "GluingSpec",
    "Chain",
    "CycleCertificate",
    "QuotientSpace",
    "disjoint_union",
    "quotient_space",
    "build_quotient",
    "brute_force_quotient_tau",
    "brute_force_quotient_metric",
    "BruteForceResult",
    "check_map_properties",
    "MapPropertyReport",
    "normalize_chain",
    "timelike_chain_witness",
    "short_form_tau",
    "causal_diamond",
    "verify_certificate",
    "DECLARABLE",
    "GluedHalfPlanes",
]

DECLARABLE = ("tau_preserving", "leq_preserving", "ll_preserving", "signed_distance_preserving")
FULL_SOLVER_LIMIT = 800


# --- union and specs -----------------------------------------------------------


def union_ids(X1, X2):
    """Point ids of X1 ⊔ X2: unchanged when disjoint, else prefixed '1:' / '2:'."""
    if set(X1.points).isdisjoint(X2.points):
        return list(X1.points), list(X2.points)
    return [f"1:{p}" for p in X1.points], [f"2:{p}" for p in X2.points]


def disjoint_union(X1: FiniteLorentzSpace, X2: FiniteLorentzSpace) -> FiniteLorentzSpace:
    """Block-diagonal union; distance inf and no relations across blocks."""
    n1, n2 = X1.n, X2.n
    ids1, ids2 = union_ids(X1, X2)
    n = n1 + n2
    d = np.full((n, n), INF)
    tau = np.zeros((n, n))
    chron = np.zeros((n, n), dtype=bool)
    causal = np.zeros((n, n), dtype=bool)
    for off, X in ((0, X1), (n1, X2)):
        sl = slice(off, off + X.n)
        d[sl, sl] = X.d
        tau[sl, sl] = X.tau
        chron[sl, sl] = X.chron
        causal[sl, sl] = X.causal
    coords = None
    if X1.coords is not None and X2.coords is not None:
        coords = X1.coords + X2.coords
    K = X1.K if X1.K == X2.K else None
    if n2 == 0:
        coords, K = X1.coords, X1.K
    elif n1 == 0:
        coords, K = X2.coords, X2.K
    return FiniteLorentzSpace(tuple(ids1 + ids2), d, chron, causal, tau, coords, K)


@dataclass(frozen=True)
class GluingSpec:
    """Two spaces and a bijection f: A1 -> A2 given as a list of id pairs."""

    X1: FiniteLorentzSpace
    X2: FiniteLorentzSpace
    pairs: tuple = ()
    declared: dict = field(default_factory=dict)

    def __post_init__(self):
        pairs = tuple((str(a), str(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "declared", dict(self.declared))
        left = [a for a, _ in pairs]
        right = [b for _, b in pairs]
        for name, ids, X in (("first", left, self.X1), ("second", right, self.X2)):
            missing = [p for p in ids if p not in X._index]
            if missing:
                raise NotABijection(f"{name} space has no point {missing[0]!r}")
            if len(set(ids)) != len(ids):
                dup = next(p for p in ids if ids.count(p) > 1)
                raise NotABijection(f"point {dup!r} of the {name} space is listed twice")
        unknown = set(self.declared) - set(DECLARABLE)
        if unknown:
            raise ValueError(f"unknown declared properties {sorted(unknown)}")

    @property
    def A1(self):
        return [a for a, _ in self.pairs]

    @property
    def A2(self):
        return [b for _, b in self.pairs]

    def union(self):
        return disjoint_union(self.X1, self.X2)

    def union_pairs(self):
        """Identification pairs as indices into the union."""
        n1 = self.X1.n
        return [(self.X1.index(a), n1 + self.X2.index(b)) for a, b in self.pairs]

    def inverse(self):
        return GluingSpec(self.X2, self.X1, tuple((b, a) for a, b in self.pairs), self.declared)


# --- chains --------------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    """Steps (x_1, y_1), ..., (x_n, y_n) as point ids of the glued space.

    start and end are the endpoints the chain connects (start ~ x_1,
    y_n ~ end); by default x_1 and y_n themselves.
    """

    steps: tuple
    start: str | None = None
    end: str | None = None

    def __post_init__(self):
        steps = tuple((str(a), str(b)) for a, b in self.steps)
        object.__setattr__(self, "steps", steps)
        if self.start is None and steps:
            object.__setattr__(self, "start", steps[0][0])
        if self.end is None and steps:
            object.__setattr__(self, "end", steps[-1][1])

    def points(self):
        return [p for st in self.steps for p in st]

    def length(self, X: FiniteLorentzSpace):
        return float(sum(X.tau[X.index(a), X.index(b)] for a, b in self.steps))

    def to_list(self):
        return [list(s) for s in self.steps]


@dataclass(frozen=True)
class CycleCertificate:
    """Evidence for tau = inf: a closed chain of positive length plus chains
    linking the source class into the cycle and the cycle out to the target."""

    cycle: Chain
    cycle_length: float
    entry: Chain | None
    exit: Chain | None

    def to_dict(self):
        return {
            "cycle": self.cycle.to_list(),
            "cycle_length": self.cycle_length,
            "entry": None if self.entry is None else self.entry.to_list(),
            "exit": None if self.exit is None else self.exit.to_list(),
        }


def _class_labels(points, classes):
    return ["~".join(points[i] for i in members) for members in classes]


def _equivalence(n, pairs):
    """Classes of the equivalence generated by pairs, ordered by first member."""
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = {}
    class_of = np.empty(n, dtype=int)
    classes = []
    for i in range(n):
        r = find(i)
        if r not in roots:
            roots[r] = len(classes)
            classes.append([])
        class_of[i] = roots[r]
        classes[roots[r]].append(i)
    return class_of, [tuple(c) for c in classes]


def _class_reduce(M, class_of, nc, op):
    """Reduce an n x n matrix to nc x nc by op over class members."""
    order = np.argsort(class_of, kind="stable")
    starts = np.searchsorted(class_of[order], np.arange(nc))
    R = op.reduceat(M[order], starts, axis=0)
    return op.reduceat(R[:, order], starts, axis=1)


# --- longest paths -------------------------------------------------------------


def _longest_paths(W):
    """All-pairs longest walks in a graph with nonnegative weights.

    W is a square matrix with -inf for missing edges.  Returns (L, info)
    where L has -inf for no walk, inf for unbounded walks, and info holds
    what the witness reconstruction needs.  A walk from a node to itself
    must use at least one edge.
    """
    k = W.shape[0]
    if k == 0:
        empty = np.zeros((0, 0))
        return empty, {
            "comp": np.zeros(0, dtype=int),
            "hot": np.zeros(0, dtype=bool),
            "pred": np.zeros((0, 0), dtype=int),
            "CW": empty,
            "A": empty,
            "internal": np.zeros((0, 0), dtype=bool),
        }
    E = W > -INF
    ncomp, comp = connected_components(csr_matrix(E), directed=True, connection="strong")
    internal = E & (comp[:, None] == comp[None, :])
    hot = np.zeros(ncomp, dtype=bool)
    has_internal = np.zeros(ncomp, dtype=bool)
    ii, jj = np.nonzero(internal)
    has_internal[comp[ii]] = True
    hot[comp[ii[W[ii, jj] > 0]]] = True

    # condensation: max weight between components, ignoring internal edges
    Wx = np.where(internal, -INF, W)
    CW = _class_reduce(Wx, comp, ncomp, np.maximum)
    CE = CW > -INF
    ts = TopologicalSorter({t: [int(u) for u in np.nonzero(CE[:, t])[0]] for t in range(ncomp)})
    topo = list(ts.static_order())

    A = np.full((ncomp, ncomp), -INF)
    np.fill_diagonal(A, 0.0)
    pred = np.full((ncomp, ncomp), -1, dtype=int)
    for t in topo:
        preds = np.nonzero(CE[:, t])[0]
        if preds.size == 0:
            continue
        cand = A[:, preds] + CW[preds, t][None, :]
        best = np.argmax(cand, axis=1)
        val = cand[np.arange(ncomp), best]
        better = val > A[:, t]
        better[t] = False
        A[better, t] = val[better]
        pred[better, t] = preds[best[better]]

    reach = A > -INF
    Lc = A.copy()
    diag = np.where(has_internal, 0.0, -INF)
    np.fill_diagonal(Lc, diag)
    if np.any(hot):
        through = (reach[:, hot].astype(float) @ reach[hot, :].astype(float)) > 0.5
        Lc[through] = INF
    L = Lc[np.ix_(comp, comp)]
    info = {"comp": comp, "hot": hot, "pred": pred, "CW": CW, "A": A, "internal": internal}
    return L, info


def _bfs(adj, src, dst, allowed=None):
    """Shortest edge path src -> dst (list of nodes, len >= 2), or None."""
    prev = {src: None}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        for v in np.nonzero(adj[u])[0]:
            v = int(v)
            if allowed is not None and not allowed[v]:
                continue
            if v == dst:
                path = [v, u]
                while prev[u] is not None:
                    u = prev[u]
                    path.append(u)
                return path[::-1]
            if v not in prev:
                prev[v] = u
                dq.append(v)
    return None


# --- quotient ------------------------------------------------------------------


@dataclass(eq=False)
class QuotientSpace:
    """Quotient of a finite space by an equivalence relation.

    Classes are listed by their first member in the base space.  tilde_tau
    uses inf for unbounded classes pairs and 0 for pairs without chains.
    """

    base: FiniteLorentzSpace
    classes: tuple
    class_of: np.ndarray
    labels: tuple
    tilde_tau: np.ndarray
    tilde_d: np.ndarray
    tilde_causal: np.ndarray
    tilde_chron: np.ndarray
    method: str
    blocks: np.ndarray
    _W: np.ndarray = field(repr=False)
    _pivots: np.ndarray = field(repr=False)
    _Lp: np.ndarray = field(repr=False)
    _info: dict = field(repr=False)

    @property
    def n(self):
        return len(self.classes)

    def class_index(self, key):
        """Class index from a class label or any member point id."""
        if isinstance(key, (int, np.integer)):
            return int(key)
        key = str(key)
        if key in self.base._index:
            return int(self.class_of[self.base.index(key)])
        try:
            return self.labels.index(key)
        except ValueError:
            raise KeyError(f"unknown class or point {key!r}") from None

    def tau(self, a, b):
        return float(self.tilde_tau[self.class_index(a), self.class_index(b)])

    def is_seam(self, c):
        return len(self.classes[self.class_index(c)]) > 1

    def as_space(self):
        """The quotient as a finite space on the class labels."""
        return FiniteLorentzSpace(self.labels, self.tilde_d, self.tilde_chron, self.tilde_causal, self.tilde_tau)

    # witnesses

    def _edge_rep(self, a, b):
        """Representatives (u, v), u in a, v in b, u <= v, maximizing tau."""
        X = self.base
        best = None
        for u in self.classes[a]:
            for v in self.classes[b]:
                if X.causal[u, v] and (best is None or X.tau[u, v] > X.tau[best[0], best[1]]):
                    best = (u, v)
        return best

    def _chain_from_classes(self, path, start, end):
        X = self.base
        if len(path) > 2:
            # repeated classes are zero-length self steps; drop them
            path = [c for k, c in enumerate(path) if k == 0 or c != path[k - 1]]
            if len(path) == 1:
                path = path * 2
        steps = []
        for a, b in zip(path[:-1], path[1:]):
            u, v = self._edge_rep(a, b)
            steps.append((X.points[u], X.points[v]))
        return Chain(tuple(steps), X.points[self.classes[start][0]], X.points[self.classes[end][0]])

    def _pivot_path(self, i, j):
        """Longest path between pivots i, j (pivot indices) as a pivot list."""
        info = self._info
        comp, pred, A = info["comp"], info["pred"], info["A"]
        internal = info["internal"]
        s, t = comp[i], comp[j]
        if s == t:
            if i == j:
                return [i, i] if internal[i, i] else _bfs(internal, i, i)
            return _bfs(internal, i, j)
        hops = [t]
        while hops[-1] != s:
            hops.append(int(pred[s, hops[-1]]))
        hops.reverse()
        CW = info["CW"]
        Wp = self._W[np.ix_(self._pivots, self._pivots)]
        path = [i]
        for u_c, v_c in zip(hops[:-1], hops[1:]):
            members_u = np.nonzero(comp == u_c)[0]
            members_v = np.nonzero(comp == v_c)[0]
            sub = Wp[np.ix_(members_u, members_v)]
            a, b = np.unravel_index(int(np.argmax(sub)), sub.shape)
            assert sub[a, b] == CW[u_c, v_c]
            a, b = int(members_u[a]), int(members_v[b])
            if a != path[-1]:
                path.extend(_bfs(internal, path[-1], a)[1:])
            path.append(b)
        if path[-1] != j:
            path.extend(_bfs(internal, path[-1], j)[1:])
        return path

    def witness(self, a, b):
        """A chain realizing tilde_tau, a CycleCertificate if it is inf, or None."""
        a, b = self.class_index(a), self.class_index(b)
        if not self.tilde_causal[a, b]:
            return None
        if np.isinf(self.tilde_tau[a, b]):
            return self.certificate(a, b)
        target = self.tilde_tau[a, b]
        piv = self._pivots
        if self.method == "full":
            path = self._pivot_path(a, b)
            return self._chain_from_classes(path, a, b)
        W, Lp = self._W, self._Lp
        if W[a, b] == target:
            return self._chain_from_classes([a, b], a, b)
        with np.errstate(invalid="ignore"):
            tot = W[a, piv][:, None] + Lp + W[piv, b][None, :]
        tot = np.where(np.isnan(tot), -INF, tot)
        i, j = np.unravel_index(int(np.argmax(tot)), tot.shape)
        mid = [int(piv[k]) for k in self._pivot_path(int(i), int(j))] if i != j else [int(piv[i])]
        return self._chain_from_classes([a] + mid + [b], a, b)

    def certificate(self, a, b):
        a, b = self.class_index(a), self.class_index(b)
        if not np.isinf(self.tilde_tau[a, b]):
            return None
        info = self._info
        comp, hot, internal = info["comp"], info["hot"], info["internal"]
        piv = self._pivots
        Wp = self._W[np.ix_(piv, piv)]
        E = self._W > -INF
        for h in np.nonzero(hot)[0]:
            members = np.nonzero(comp == h)[0]
            cls = piv[members]
            # is this hot component between a and b?
            into = [c for c in cls if c == a or _bfs(E, a, int(c)) is not None]
            outof = [c for c in cls if c == b or _bfs(E, int(c), b) is not None]
            if not into or not outof:
                continue
            sub = Wp[np.ix_(members, members)]
            sub = np.where(internal[np.ix_(members, members)], sub, -INF)
            u, v = np.unravel_index(int(np.argmax(sub)), sub.shape)
            u, v = int(members[u]), int(members[v])
            back = [u] if u == v else _bfs(internal, v, u)
            cyc = [u] + back if u == v else [u] + back
            cyc_classes = [int(piv[k]) for k in cyc]
            cycle = self._chain_from_classes(cyc_classes, cyc_classes[0], cyc_classes[0])
            start = cyc_classes[0]
            entry = None if a == start else self._chain_from_classes(_bfs(E, a, start), a, start)
            exit_ = None if b == start else self._chain_from_classes(_bfs(E, start, b), start, b)
            return CycleCertificate(cycle, cycle.length(self.base), entry, exit_)
        raise RuntimeError("no positive cycle found for an infinite entry")

    def to_dict(self, witnesses=True):
        def num(v):
            return "inf" if np.isinf(v) else float(v)

        out = {
            "method": self.method,
            "classes": [
                {"label": self.labels[i], "members": [self.base.points[m] for m in self.classes[i]]}
                for i in range(self.n)
            ],
            "tau": [
                [self.labels[i], self.labels[j], num(self.tilde_tau[i, j])]
                for i, j in zip(*np.nonzero(self.tilde_tau))
            ],
            "causal": [[self.labels[i], self.labels[j]] for i, j in zip(*np.nonzero(self.tilde_causal))],
            "d": [
                [self.labels[i], self.labels[j], num(self.tilde_d[i, j])]
                for i in range(self.n)
                for j in range(i + 1, self.n)
            ],
        }
        if witnesses:
            chains, certs = [], []
            for i, j in zip(*np.nonzero(self.tilde_chron)):
                w = self.witness(int(i), int(j))
                if isinstance(w, CycleCertificate):
                    certs.append({"from": self.labels[i], "to": self.labels[j], **w.to_dict()})
                else:
                    chains.append({"from": self.labels[i], "to": self.labels[j], "chain": w.to_list()})
            out["witnesses"] = chains
            out["certificates"] = certs
        return out


def _shortest(Dc):
    """All-pairs shortest paths of a dense nonnegative weight matrix (inf = no edge)."""
    m = Dc.shape[0]
    if m == 0:
        return Dc.copy()
    Dg = np.where(np.isfinite(Dc), Dc, 0.0)
    zero_edge = np.isfinite(Dc) & (Dc == 0) & ~np.eye(m, dtype=bool)
    if np.any(zero_edge):
        # csgraph drops explicit zeros; distinct classes at distance 0 get a tiny weight and are reset
        Dg = np.where(zero_edge, np.finfo(float).tiny, Dg)
    out = shortest_path(csr_matrix(Dg), method="D", directed=True)
    if np.any(zero_edge):
        out[out < 1e-300] = 0.0
    return out


def _minplus(A, B):
    """(A ⊗ B)[i, j] = min_k A[i, k] + B[k, j] with inf as the zero."""
    out = np.full((A.shape[0], B.shape[1]), INF)
    for k in range(A.shape[1]):
        np.minimum(out, A[:, k][:, None] + B[k, :][None, :], out=out)
    return out


def _maxplus(A, B):
    """(A ⊗ B)[i, j] = max_k A[i, k] + B[k, j] with -inf as the zero."""
    out = np.full((A.shape[0], B.shape[1]), -INF)
    with np.errstate(invalid="ignore"):
        for k in range(A.shape[1]):
            col = A[:, k]
            if not np.any(col > -INF):
                continue
            cand = col[:, None] + B[k, :][None, :]
            cand[np.isnan(cand)] = -INF
            np.maximum(out, cand, out=out)
    return out


def quotient_space(X: FiniteLorentzSpace, identifications, method="auto", blocks=None) -> QuotientSpace:
    """Quotient of X by the equivalence generated by index pairs.

    method is 'full', 'seam' or 'auto'.  The seam solver is only exact when
    X satisfies transitivity of <= and the reverse triangle inequality; 'auto'
    uses the full solver up to FULL_SOLVER_LIMIT classes and otherwise checks
    X with validate_space before using the seam solver.
    """
    n = X.n
    class_of, classes = _equivalence(n, identifications)
    nc = len(classes)
    if method == "auto":
        if nc <= FULL_SOLVER_LIMIT:
            method = "full"
        else:
            method = "seam" if validate_space(X).ok else "full"
    if method not in ("full", "seam"):
        raise ValueError(f"unknown method {method!r}")

    Wpt = np.where(X.causal, X.tau, -INF)
    W = _class_reduce(Wpt, class_of, nc, np.maximum) if n else np.zeros((0, 0))
    Dc = _class_reduce(X.d, class_of, nc, np.minimum) if n else np.zeros((0, 0))
    np.fill_diagonal(Dc, 0.0)

    if method == "full":
        pivots = np.arange(nc)
    else:
        pivots = np.array([i for i, c in enumerate(classes) if len(c) > 1], dtype=int)
    Wp = W[np.ix_(pivots, pivots)]
    Lp, info = _longest_paths(Wp)
    if method == "full":
        T = Lp
    else:
        T = np.maximum(W, _maxplus(_maxplus(W[:, pivots], Lp), W[pivots, :]))

    causal = T > -INF
    tilde_tau = np.where(causal, T, 0.0)
    chron = tilde_tau > 0

    # quotient semi-metric: shortest paths on the class graph
    if nc and method == "seam":
        # d already satisfies the triangle inequality, so shortest paths only
        # need to change representative at glued classes
        Lp_d = _shortest(Dc[np.ix_(pivots, pivots)])
        tilde_d = np.minimum(Dc, _minplus(_minplus(Dc[:, pivots], Lp_d), Dc[pivots, :]))
    elif nc:
        tilde_d = _shortest(Dc)
    else:
        tilde_d = np.zeros((0, 0))
    # path sums in different orders differ in the last bit
    tilde_d = np.minimum(tilde_d, tilde_d.T)

    if blocks is None:
        blocks = np.zeros(n, dtype=int)
    return QuotientSpace(
        X,
        tuple(classes),
        class_of,
        tuple(_class_labels(X.points, classes)),
        tilde_tau,
        tilde_d,
        causal,
        chron,
        method,
        np.asarray(blocks),
        W,
        pivots,
        Lp,
        info,
    )


def build_quotient(spec: GluingSpec, method="auto") -> QuotientSpace:
    """Lorentzian amalgamation X1 ⊔_A X2 of a gluing specification."""
    U = spec.union()
    blocks = np.r_[np.zeros(spec.X1.n, dtype=int), np.ones(spec.X2.n, dtype=int)]
    Q = quotient_space(U, spec.union_pairs(), method=method, blocks=blocks)
    return Q


def verify_certificate(Q: QuotientSpace, a, b, cert: CycleCertificate, tol=0.0) -> bool:
    """Independent check that a certificate proves tilde_tau(a, b) = inf."""
    a, b = Q.class_index(a), Q.class_index(b)
    X = Q.base
    cyc = cert.cycle

    def ok_chain(ch, ca, cb):
        if ch is None:
            return ca == cb
        try:
            _check_chain(X, Q.class_of, ch)
        except InvalidChain:
            return False
        return (
            Q.class_of[X.index(ch.steps[0][0])] == ca and Q.class_of[X.index(ch.steps[-1][1])] == cb
        )

    if not cyc.steps:
        return False
    c0 = int(Q.class_of[X.index(cyc.steps[0][0])])
    if not ok_chain(cyc, c0, c0):
        return False
    if not cyc.length(X) > tol:
        return False
    return ok_chain(cert.entry, a, c0) and ok_chain(cert.exit, c0, b)


def _check_chain(X, class_of, chain):
    if not chain.steps:
        raise InvalidChain("empty chain")
    for k, (u, v) in enumerate(chain.steps):
        try:
            i, j = X.index(u), X.index(v)
        except KeyError as exc:
            raise InvalidChain(str(exc)) from None
        if not X.causal[i, j]:
            raise InvalidChain(f"step {k}: {u} <= {v} fails")
        if k + 1 < len(chain.steps):
            nxt = X.index(chain.steps[k + 1][0])
            if class_of[j] != class_of[nxt]:
                raise InvalidChain(f"link {v} ~ {chain.steps[k + 1][0]} is not an identification")
    if chain.start is not None and class_of[X.index(chain.start)] != class_of[X.index(chain.steps[0][0])]:
        raise InvalidChain("chain does not start in the class of its start point")
    if chain.end is not None and class_of[X.index(chain.end)] != class_of[X.index(chain.steps[-1][1])]:
        raise InvalidChain("chain does not end in the class of its end point")


# --- brute force oracle --------------------------------------------------------


@dataclass
class BruteForceResult:
    """Hop-bounded chain optimum; ids follow the order of the first members of
    the classes, as in build_quotient."""

    tau: np.ndarray
    causal: np.ndarray
    growth: np.ndarray
    hops: int


def _brute_setup(spec, max_points=12):
    U = spec.union()
    if U.n > max_points:
        raise TooLarge(f"{U.n} points exceed the brute-force limit of {max_points}")
    n = U.n
    # equivalence as a boolean closure, independent of the union-find used above
    S = np.eye(n, dtype=bool)
    for a, b in spec.union_pairs():
        S[a, b] = S[b, a] = True
    while True:
        S2 = S | ((S.astype(int) @ S.astype(int)) > 0)
        if np.array_equal(S2, S):
            break
        S = S2
    reps = []
    seen = np.zeros(n, dtype=bool)
    for i in range(n):
        if not seen[i]:
            reps.append(i)
            seen |= S[i]
    return U, S, reps


def _hop_matrix(U, S, weights, empty):
    """M[u, v] = best weight of one step x' -> v with x' ~ u."""
    n = U.n
    M = np.full((n, n), empty)
    for u in range(n):
        rows = np.nonzero(S[u])[0]
        cand = weights[rows]
        M[u] = cand.max(axis=0) if empty == -INF else cand.min(axis=0)
    return M


def brute_force_quotient_tau(spec: GluingSpec, max_chain_hops: int) -> BruteForceResult:
    """Best chain length over all chains with at most max_chain_hops steps.

    Chains are enumerated exhaustively, one hop at a time over points of the
    union: val_k[v] is the best length of a k-step chain from [x] whose last
    step ends at the point v.  growth flags pairs whose optimum still
    improves between half the hop bound and the full bound (an unbounded
    supremum when the bound is at least twice the number of classes); their
    entries are set to inf.
    """
    U, S, reps = _brute_setup(spec)
    H = int(max_chain_hops)
    m = len(reps)
    step = np.where(U.causal, U.tau, -INF)
    M = _hop_matrix(U, S, step, -INF)
    best_half = np.full((m, m), -INF)
    best = np.full((m, m), -INF)
    half = max(1, H // 2)
    for ai, x in enumerate(reps):
        val = M[x].copy()
        run = val.copy()
        for k in range(1, H):
            if k == half:
                run_half = run.copy()
            with np.errstate(invalid="ignore"):
                cand = val[:, None] + M
            cand[np.isnan(cand)] = -INF
            val = cand.max(axis=0)
            run = np.maximum(run, val)
        if H <= half:
            run_half = run.copy()
        for bi, y in enumerate(reps):
            members = np.nonzero(S[y])[0]
            best[ai, bi] = run[members].max()
            best_half[ai, bi] = run_half[members].max()
    growth = best > best_half
    causal = best > -INF
    tau = np.where(causal, best, 0.0)
    tau[growth] = INF
    return BruteForceResult(tau, causal, growth, H)


def brute_force_quotient_metric(spec: GluingSpec, max_chain_hops: int) -> np.ndarray:
    """Smallest sum of d(x_i, y_i) over chains of at most max_chain_hops steps."""
    U, S, reps = _brute_setup(spec)
    M = _hop_matrix(U, S, U.d, INF)
    out = np.full((len(reps), len(reps)), INF)
    for ai, x in enumerate(reps):
        val = M[x].copy()
        run = val.copy()
        for _ in range(max_chain_hops - 1):
            val = (val[:, None] + M).min(axis=0)
            run = np.minimum(run, val)
        for bi, y in enumerate(reps):
            out[ai, bi] = 0.0 if ai == bi else float(run[np.nonzero(S[y])[0]].min())
    return out


# --- chain manipulations ------------------------------------------------------


def _glued(spec_or_q):
    if isinstance(spec_or_q, QuotientSpace):
        return spec_or_q.base, spec_or_q.class_of
    U = spec_or_q.union()
    class_of, _ = _equivalence(U.n, spec_or_q.union_pairs())
    return U, class_of


def normalize_chain(spec, chain: Chain) -> Chain:
    """Pin the endpoints and merge trivial links y_i = x_{i+1}.

    A chain that does not start at its start point gets the step
    (start, start) prepended, likewise for the end.  Two steps (u, v), (v, w)
    are replaced by (u, w), which is at least as long by the reverse triangle
    inequality.  The result is never shorter than the input.
    """
    X, class_of = _glued(spec)
    _check_chain(X, class_of, chain)
    steps = list(chain.steps)
    if chain.start is not None and steps[0][0] != chain.start:
        steps.insert(0, (chain.start, chain.start))
    if chain.end is not None and steps[-1][1] != chain.end:
        steps.append((chain.end, chain.end))
    merged = [steps[0]]
    for u, v in steps[1:]:
        pu, pv = merged[-1]
        if pv == u:
            merged[-1] = (pu, v)
        else:
            merged.append((u, v))
    out = Chain(tuple(merged), chain.start, chain.end)
    _check_chain(X, class_of, out)
    return out


@dataclass
class TimelikeChainResult:
    chain: Chain
    length: float
    gap: float


def timelike_chain_witness(Q: QuotientSpace, spec, a, b, slack=0.0) -> TimelikeChainResult:
    """Longest chain from [a] to [b] whose steps are all chronological.

    The gap to tilde_tau is reported rather than assumed to vanish; `slack`
    only documents the caller's tolerance and is echoed in the check
    gap <= slack by the caller.
    """
    a, b = Q.class_index(a), Q.class_index(b)
    t = Q.tilde_tau[a, b]
    if not t > 0:
        raise NotChronological(f"tilde_tau({Q.labels[a]}, {Q.labels[b]}) = 0")
    if np.isinf(t):
        raise ValueError("tilde_tau is infinite; no maximizing chain exists")
    X = Q.base
    Wt = np.where(Q._W > 0, Q._W, -INF)
    E = Wt > -INF
    # restrict to classes on some timelike path a -> b
    fwd = _reachable(E, a)
    bwd = _reachable(E.T, b)
    keep = fwd & bwd
    keep[a] = keep[b] = True
    nodes = np.nonzero(keep)[0]
    sub = {int(v): [int(u) for u in nodes if E[u, v] and u != v] for v in nodes}
    order = list(TopologicalSorter(sub).static_order())
    best = {int(v): -INF for v in nodes}
    prev = {}
    best[a] = 0.0
    for v in order:
        if v == a:
            continue
        for u in sub[v]:
            if best[u] > -INF and best[u] + Wt[u, v] > best[v]:
                best[v] = best[u] + Wt[u, v]
                prev[v] = u
    if a == b or best[b] == -INF:
        raise NotChronological("no chain with chronological steps")
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    path.reverse()
    chain = Q._chain_from_classes(path, a, b)
    length = chain.length(X)
    return TimelikeChainResult(chain, length, float(t - length))


def _reachable(E, s):
    seen = np.zeros(E.shape[0], dtype=bool)
    seen[s] = True
    frontier = np.array([s])
    while frontier.size:
        nxt = np.nonzero(E[frontier].any(axis=0) & ~seen)[0]
        seen[nxt] = True
        frontier = nxt
    return seen


# --- structure preserving maps ----------------------------------------------------


@dataclass
class PropertyCheck:
    name: str
    holds: bool | None
    witness: tuple | None = None
    detail: str = ""

    def to_dict(self):
        return {"holds": self.holds, "witness": None if self.witness is None else list(self.witness), "detail": self.detail}


@dataclass
class MapPropertyReport:
    checks: dict
    inverse_checks: dict
    bilipschitz: dict
    warnings: list

    def holds(self, name):
        return self.checks[name].holds

    @property
    def inverse_inherits(self):
        return {k: self.checks[k].holds == self.inverse_checks[k].holds for k in self.checks}

    def to_dict(self):
        return {
            "checks": {k: v.to_dict() for k, v in self.checks.items()},
            "inverse_checks": {k: v.to_dict() for k, v in self.inverse_checks.items()},
            "inverse_inherits": self.inverse_inherits,
            "bilipschitz": self.bilipschitz,
            "warnings": list(self.warnings),
        }


def _first_pair(mask, ids):
    idx = np.argwhere(mask)
    if idx.size == 0:
        return None
    i, j = idx[0]
    return (ids[i], ids[j])


def _map_checks(X1, X2, A1, A2, tol):
    i1, i2 = X1.indices(A1), X2.indices(A2)
    s1, s2 = np.ix_(i1, i1), np.ix_(i2, i2)
    checks = {}
    t1, t2 = X1.tau[s1], X2.tau[s2]
    with np.errstate(invalid="ignore"):
        bad = ~((t1 == t2) | (np.abs(t1 - t2) <= tol * np.maximum(1.0, np.abs(t1))))
    checks["tau_preserving"] = PropertyCheck("tau_preserving", not np.any(bad), _first_pair(bad, A1))
    bad = X1.chron[s1] != X2.chron[s2]
    checks["ll_preserving"] = PropertyCheck("ll_preserving", not np.any(bad), _first_pair(bad, A1))
    bad = X1.causal[s1] != X2.causal[s2]
    checks["leq_preserving"] = PropertyCheck("leq_preserving", not np.any(bad), _first_pair(bad, A1))
    fut1, fut2 = X1.chron[i1].any(axis=1), X2.chron[i2].any(axis=1)
    past1, past2 = X1.chron[:, i1].any(axis=0), X2.chron[:, i2].any(axis=0)
    bad_f = np.nonzero(fut1 != fut2)[0]
    bad_p = np.nonzero(past1 != past2)[0]
    wit = None
    detail = ""
    if bad_f.size:
        k = bad_f[0]
        wit = (A1[k], A2[k])
        detail = f"future nonempty: {bool(fut1[k])} vs {bool(fut2[k])}"
    elif bad_p.size:
        k = bad_p[0]
        wit = (A1[k], A2[k])
        detail = f"past nonempty: {bool(past1[k])} vs {bool(past2[k])}"
    checks["causally_compatible"] = PropertyCheck("causally_compatible", wit is None, wit, detail)
    if X1.coords is not None and X2.coords is not None and X1.K is not None and X2.K is not None:
        sd1 = _signed_matrix(X1, i1)
        sd2 = _signed_matrix(X2, i2)
        bad = np.abs(sd1 - sd2) > tol * np.maximum(1.0, np.abs(sd1))
        checks["signed_distance_preserving"] = PropertyCheck(
            "signed_distance_preserving", not np.any(bad), _first_pair(bad, A1)
        )
    else:
        checks["signed_distance_preserving"] = PropertyCheck(
            "signed_distance_preserving", None, None, "spaces carry no model coordinates"
        )
    return checks


def _signed_matrix(X, idx):
    m = len(idx)
    out = np.zeros((m, m))
    for a in range(m):
        for b in range(m):
            if a != b:
                out[a, b] = ms.signed_distance(X.K, X.coords[idx[a]], X.coords[idx[b]])
    return out


def _bilipschitz(X1, X2, A1, A2, eps):
    i1, i2 = X1.indices(A1), X2.indices(A2)
    d1 = X1.d[np.ix_(i1, i1)]
    d2 = X2.d[np.ix_(i2, i2)]
    off = ~np.eye(len(i1), dtype=bool)
    near = off & np.isfinite(d1) & np.isfinite(d2)
    if eps is not None:
        near &= (d1 <= eps) | (d2 <= eps)
    if not np.any(near):
        return {"scale": eps, "constant": 1.0, "pairs": 0}
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.maximum(d2[near] / d1[near], d1[near] / d2[near])
    const = float(np.max(r))
    return {"scale": eps, "constant": const if np.isfinite(const) else "inf", "pairs": int(near.sum())}


def check_map_properties(spec: GluingSpec, eps=None, tol=1e-9) -> MapPropertyReport:
    """Check the identification map f: A1 -> A2 for the structure properties.

    tau-, <<- and <=-preservation are checked over all pairs of A1 (as maps
    between the subsets with their restricted structure), together with the
    compatibility of nonempty futures and pasts, signed distances (when both
    spaces carry model coordinates) and the bi-Lipschitz constant on eps-balls.
    The same checks are run on f^{-1}; the report tells whether the inverse
    agrees on each property.
    """
    A1, A2 = spec.A1, spec.A2
    checks = _map_checks(spec.X1, spec.X2, A1, A2, tol)
    inv = _map_checks(spec.X2, spec.X1, A2, A1, tol)
    bl = _bilipschitz(spec.X1, spec.X2, A1, A2, eps)
    warnings = []
    for name, declared in sorted(spec.declared.items()):
        actual = checks[name].holds
        if declared and actual is False:
            warnings.append(f"declared {name} fails, witness {checks[name].witness}")
    return MapPropertyReport(checks, inv, bl, warnings)


# --- structural lemmas ------------------------------------------------------------


def _side(spec, pid):
    """(space number, index) of a point id given in X1 or X2 (union ids accepted)."""
    pid = str(pid)
    ids1, ids2 = union_ids(spec.X1, spec.X2)
    if pid in ids1:
        return 1, ids1.index(pid)
    if pid in ids2:
        return 2, ids2.index(pid)
    raise KeyError(f"unknown point {pid!r}")


def short_form_tau(spec: GluingSpec, x, y, report: MapPropertyReport | None = None):
    """tau~([x], [y]) = sup over glued a with x <= a <= y of tau(x, a) + tau(a, y).

    x must lie in one space outside the glued set and y in the other.  The
    formula requires f to be tau- and causality preserving; it returns
    (value, label of the maximizing glued class) with sup of the empty set 0.
    """
    if report is None:
        report = check_map_properties(spec)
    for name in ("tau_preserving", "ll_preserving", "leq_preserving"):
        if not report.holds(name):
            raise HypothesesNotMet(f"identification is not {name.replace('_', '-')}")
    sx, ix = _side(spec, x)
    sy, iy = _side(spec, y)
    if sx == sy:
        raise ValueError("x and y must lie in different spaces")
    Xa, Xb = (spec.X1, spec.X2) if sx == 1 else (spec.X2, spec.X1)
    Aa, Ab = (spec.A1, spec.A2) if sx == 1 else (spec.A2, spec.A1)
    if Xa.points[ix] in Aa or Xb.points[iy] in Ab:
        raise ValueError("x and y must lie outside the glued sets")
    ia, ib = Xa.indices(Aa), Xb.indices(Ab)
    ok = Xa.causal[ix, ia] & Xb.causal[ib, iy]
    if not np.any(ok):
        return 0.0, None
    vals = np.where(ok, Xa.tau[ix, ia] + Xb.tau[ib, iy], -INF)
    k = int(np.argmax(vals))
    U_ids1, U_ids2 = union_ids(spec.X1, spec.X2)
    a1, a2 = spec.pairs[k]
    label = f"{U_ids1[spec.X1.index(a1)]}~{U_ids2[spec.X2.index(a2)]}"
    return float(vals[k]), label


@dataclass
class DiamondReport:
    classes: tuple
    case: str | None
    expected: tuple | None
    holds: bool | None

    def to_dict(self):
        return {
            "classes": list(self.classes),
            "case": self.case,
            "expected": None if self.expected is None else list(self.expected),
            "holds": self.holds,
        }


def causal_diamond(Q: QuotientSpace, a, b) -> DiamondReport:
    """J([a], [b]) in the quotient and the decomposition predicted for it.

    Case 'seam': both endpoints are glued classes; the diamond should be the
    union of the projected diamonds of the two representatives.  Case
    'one-space': both endpoints are unglued points of one space whose
    diamond there misses the glued set; the diamond should be its
    projection.  Other pairs get no prediction.
    """
    a, b = Q.class_index(a), Q.class_index(b)
    C = Q.tilde_causal
    inside = np.nonzero(C[a, :] & C[:, b])[0]
    labels = tuple(Q.labels[i] for i in inside)
    X = Q.base
    ca, cb = Q.classes[a], Q.classes[b]

    def projected(pts):
        return tuple(Q.labels[i] for i in sorted(set(int(Q.class_of[p]) for p in pts)))

    if len(ca) > 1 and len(cb) > 1:
        pts = []
        for u in ca:
            for v in cb:
                if Q.blocks[u] == Q.blocks[v]:
                    pts.extend(np.nonzero(X.causal[u, :] & X.causal[:, v])[0].tolist())
        exp = projected(pts)
        return DiamondReport(labels, "seam", exp, exp == labels)
    if len(ca) == 1 and len(cb) == 1 and Q.blocks[ca[0]] == Q.blocks[cb[0]]:
        u, v = ca[0], cb[0]
        pts = np.nonzero(X.causal[u, :] & X.causal[:, v])[0]
        glued = np.array([len(Q.classes[Q.class_of[p]]) > 1 for p in pts], dtype=bool)
        if not np.any(glued):
            exp = projected(pts.tolist())
            return DiamondReport(labels, "one-space", exp, exp == labels)
    return DiamondReport(labels, None, None, None)


# --- continuum gluing of two flat half-planes --------------------------------


def _flat_tau(p, q):
    dt = q[0] - p[0]
    h = dt * dt - (q[1] - p[1]) ** 2
    if dt <= 0 or h <= 1e-12 * (dt * dt + (q[1] - p[1]) ** 2):
        return 0.0
    return float(np.sqrt(h))


def _flat_causal(p, q):
    dt, dx = q[0] - p[0], q[1] - p[1]
    if dt == 0 and dx == 0:
        return True
    return dt > 0 and dt * dt - dx * dx >= -1e-12 * (dt * dt + dx * dx)


@dataclass(frozen=True)
class GluedHalfPlanes:
    """Two flat half-planes glued along a line (or along an overlap strip).

    The seam is the line through the origin with direction ``seam`` (in
    (t, x) coordinates).  Writing side(p) = seam_t * p_x - seam_x * p_t, the
    first space is {side <= width} and the second {side >= 0}; the glued set
    is {0 <= side <= width}, identified by the identity.  width = 0 is the
    half-plane gluing, width > 0 the strip variant.

    Each space only knows its own time separation.  Pairs that do not share a
    space are joined through the seam: by the reverse triangle inequality a
    chain never needs more than one glued point, and the best glued point is
    where the straight segment crosses the line side = 0 (the sum of the two
    legs is stationary there).  The quotient is therefore isometric to the
    Minkowski plane, which makes the plane time separation an oracle.
    """

    seam: tuple = (1.0, 0.0)
    width: float = 0.0

    def __post_init__(self):
        d = np.asarray(self.seam, dtype=float)
        if d.shape != (2,) or not np.any(d):
            raise ValueError("seam must be a nonzero direction (dt, dx)")
        if self.width < 0:
            raise ValueError("width must be nonnegative")
        object.__setattr__(self, "seam", (float(d[0]), float(d[1])))

    def side(self, p):
        return self.seam[0] * float(p[1]) - self.seam[1] * float(p[0])

    def spaces_of(self, p):
        s = self.side(p)
        # points on the seam up to round-off belong to both spaces
        tol = 1e-12 * max(1.0, float(np.max(np.abs(p))))
        out = set()
        if s <= self.width + tol:
            out.add(1)
        if s >= -tol:
            out.add(2)
        return frozenset(out)

    def is_glued(self, p):
        return len(self.spaces_of(p)) == 2

    def _common(self, p, q):
        return self.spaces_of(p) & self.spaces_of(q)

    def seam_point(self, p, q):
        """Glued point on the straight segment from p to q (line side = 0)."""
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        sp, sq = self.side(p), self.side(q)
        if sp == sq:
            raise ValueError("segment is parallel to the seam")
        lam = sp / (sp - sq)
        return p + lam * (q - p)

    def _through_seam(self, p, q):
        s = self.seam_point(p, q)
        if not (_flat_causal(p, s) and _flat_causal(s, q)):
            return s, 0.0
        return s, _flat_tau(p, s) + _flat_tau(s, q)

    def tau(self, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if self._common(p, q):
            return _flat_tau(p, q)
        return self._through_seam(p, q)[1]

    def causal(self, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if self._common(p, q):
            return _flat_causal(p, q)
        s = self.seam_point(p, q)
        return _flat_causal(p, s) and _flat_causal(s, q)

    def chron(self, p, q):
        return self.tau(p, q) > 0

    def curve_breakpoints(self, p, q):
        """Vertices of a realizing curve from p to q (a broken line)."""
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if self._common(p, q):
            return [p, q]
        return [p, self.seam_point(p, q), q]

    def point_along(self, p, q, s):
        """Point at time separation s from p on the realizing curve to q."""
        pts = self.curve_breakpoints(p, q)
        for a, b in zip(pts[:-1], pts[1:]):
            L = _flat_tau(a, b)
            if s <= L or b is pts[-1]:
                lam = 0.0 if L == 0 else min(max(s / L, 0.0), 1.0)
                return a + lam * (b - a)
            s -= L
        return pts[-1]
