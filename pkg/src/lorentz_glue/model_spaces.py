"""Two-dimensional Lorentzian model planes of constant curvature K.

K = 0 is the Minkowski plane in coordinates (t, x) with metric diag(-1, 1).
K > 0 is de Sitter space, the quadric <x, x> = 1/K in R^3 with signature
(-, +, +).  K < 0 is anti-de Sitter space, the quadric <x, x> = 1/K in R^3
with signature (-, -, +).

Internally every curved computation is done on the unit model (|K| = 1) and
rescaled: coordinates by 1/sqrt|K|, lengths likewise.  Time separations are
computed from the chord between the two points rather than from the raw
ambient inner product, which keeps small separations accurate.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CoordinateOffModel,
    GridTooCoarse,
    LegNotTimelike,
    NoUniqueGeodesic,
    ReverseTriangleViolated,
    SizeBoundViolated,
    SturmNotApplicable,
    UnrealizableTriple,
)

__all__ = [
    "ModelPoint",
    "Hinge",
    "model_point",
    "origin",
    "from_chart",
    "to_chart",
    "inner",
    "log_map",
    "exp_map",
    "tau_K",
    "causal_K",
    "chron_K",
    "signed_distance",
    "nonnormalized_angle",
    "hyperbolic_angle",
    "hinge",
    "geodesic_point",
    "law_of_cosines_third_side",
    "realize_triangle",
    "size_bounds_check",
    "hinge_monotonicity_probe",
    "HingeProbe",
    "sturm_check",
    "segment_frame",
    "frame_coordinates",
    "from_frame_coordinates",
    "side_of",
    "pairwise_relations",
]

MEMBERSHIP_TOL = 1e-12
NULL_TOL = 1e-12

_G_FLAT = np.diag([-1.0, 1.0])
_G_DS = np.diag([-1.0, 1.0, 1.0])
_G_ADS = np.diag([-1.0, -1.0, 1.0])


def _gram(K):
    if K == 0:
        return _G_FLAT
    return _G_DS if K > 0 else _G_ADS


def _sigma(K):
    return 0 if K == 0 else (1 if K > 0 else -1)


def _scale(K):
    return 1.0 if K == 0 else float(np.sqrt(abs(K)))


def inner(K, u, v):
    """Ambient (or flat) Lorentzian inner product."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if K == 0:
        return float(-u[0] * v[0] + u[1] * v[1])
    if K > 0:
        return float(-u[0] * v[0] + u[1] * v[1] + u[2] * v[2])
    return float(-u[0] * v[0] - u[1] * v[1] + u[2] * v[2])


@dataclass(frozen=True, eq=False)
class ModelPoint:
    """A point of M_K given by its ambient coordinates."""

    coords: np.ndarray
    K: float = 0.0

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        K = float(self.K)
        if not np.all(np.isfinite(c)):
            raise CoordinateOffModel("non-finite coordinates")
        if K == 0:
            if c.shape != (2,):
                raise CoordinateOffModel(f"flat model needs 2 coordinates, got {c.shape[0]}")
        else:
            if c.shape != (3,):
                raise CoordinateOffModel(f"curved model needs 3 coordinates, got {c.shape[0]}")
            residual = abs(K * inner(K, c, c) - 1.0)
            if residual > MEMBERSHIP_TOL * max(1.0, abs(K) * float(c @ c)):
                raise CoordinateOffModel(f"|K<x,x> - 1| = {residual:.3e} for K={K}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "K", K)

    def __repr__(self):
        return f"ModelPoint({self.coords.tolist()}, K={self.K:g})"

    def __eq__(self, other):
        return (
            isinstance(other, ModelPoint)
            and self.K == other.K
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((self.K, self.coords.tobytes()))

    def to_list(self):
        return [float(v) for v in self.coords]


def model_point(K, coords):
    return ModelPoint(np.asarray(coords, dtype=float), K)


def _unit(p):
    return p.coords * _scale(p.K)


def _wrap(K, unit_coords):
    """Build a ModelPoint from unit-model coordinates, projecting out round-off."""
    c = np.asarray(unit_coords, dtype=float)
    if K != 0:
        s = _sigma(K)
        n = s * inner(K, c, c)
        if n > 0:
            c = c / np.sqrt(n)
        c = c / _scale(K)
    return ModelPoint(c, K)


def _base_frame(K):
    """Unit-model base point with future time direction and space direction."""
    if K == 0:
        return np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0])
    if K > 0:
        return np.array([0.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0])
    return np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])


def origin(K):
    return _wrap(K, _base_frame(K)[0])


def from_chart(K, t, x):
    """Image of exp at the origin of the vector t*e_t + x*e_x."""
    if K == 0:
        return ModelPoint(np.array([t, x], dtype=float), 0.0)
    o, et, ex = _base_frame(K)
    return exp_map(K, origin(K), (t * et + x * ex) / _scale(K))


def to_chart(p):
    """Normal coordinates (t, x) of p about the origin."""
    if p.K == 0:
        return float(p.coords[0]), float(p.coords[1])
    _, et, ex = _base_frame(p.K)
    v, _, _ = log_map(p.K, origin(p.K), p)
    v = v * _scale(p.K)
    return -inner(p.K, v, et), inner(p.K, v, ex)


# --- geodesic core -----------------------------------------------------------


def _classify(K, P, Q):
    """Return (kind, length, w, h) for the unit-model pair P, Q.

    w is the (unnormalized) tangent direction at P towards Q, h = <Q-P, Q-P>.
    """
    D = Q - P
    h = inner(K, D, D)
    scale2 = float(D @ D)
    if scale2 == 0.0:
        return "equal", 0.0, np.zeros_like(P), 0.0
    if abs(h) <= NULL_TOL * scale2:
        return "null", 0.0, D, h
    if K == 0:
        return ("timelike" if h < 0 else "spacelike"), float(np.sqrt(abs(h))), D, h
    s = _sigma(K)
    w = D + s * (h / 2.0) * P
    if K > 0:
        if h < 0:
            return "timelike", 2.0 * float(np.arcsinh(np.sqrt(-h) / 2.0)), w, h
        if h >= 4.0:
            raise NoUniqueGeodesic("points are antipodal or beyond in de Sitter space")
        return "spacelike", 2.0 * float(np.arcsin(np.sqrt(h) / 2.0)), w, h
    if h > 0:
        return "spacelike", 2.0 * float(np.arcsinh(np.sqrt(h) / 2.0)), w, h
    if h <= -4.0:
        raise NoUniqueGeodesic("timelike separation reaches the conjugate point in anti-de Sitter space")
    return "timelike", 2.0 * float(np.arcsin(np.sqrt(-h) / 2.0)), w, h


def _wnorm(K, kind, length):
    # |w| for the unit model as a function of geodesic length
    if K == 0 or kind in ("null", "equal"):
        return None
    hyperbolic = (K > 0) == (kind == "timelike")
    return float(np.sinh(length) if hyperbolic else np.sin(length))


def log_map(K, p, q):
    """Initial velocity of the geodesic [0,1] -> M_K from p to q.

    Returns (vector, kind, length) with kind one of
    'timelike', 'spacelike', 'null', 'equal'.
    """
    _check_same(K, p, q)
    P, Q = _unit(p), _unit(q)
    kind, length, w, _ = _classify(K, P, Q)
    if kind in ("null", "equal") or K == 0:
        v = w
    else:
        v = (length / _wnorm(K, kind, length)) * w if length > 0 else w
    k = _scale(K)
    return v / k, kind, length / k


def exp_map(K, p, v):
    """Point reached at parameter 1 by the geodesic with initial velocity v."""
    v = np.asarray(v, dtype=float)
    if K == 0:
        return ModelPoint(p.coords + v, 0.0)
    k = _scale(K)
    P = _unit(p)
    V = v * k
    n = inner(K, V, V)
    if abs(n) <= NULL_TOL * float(V @ V) or not np.any(V):
        return _wrap(K, P + V)
    L = float(np.sqrt(abs(n)))
    hyperbolic = (K > 0) == (n < 0)
    if hyperbolic:
        out = np.cosh(L) * P + (np.sinh(L) / L) * V
    else:
        out = np.cos(L) * P + (np.sin(L) / L) * V
    return _wrap(K, out)


def _is_future(K, P, w):
    """Time orientation test for a nonzero causal tangent vector w at unit point P."""
    if K >= 0:
        return w[0] > 0
    return w[1] * P[0] - w[0] * P[1] > 0


def _check_same(K, *pts):
    for p in pts:
        if not isinstance(p, ModelPoint):
            raise TypeError(f"expected ModelPoint, got {type(p).__name__}")
        if p.K != float(K):
            raise CoordinateOffModel(f"point lives on M_{p.K:g}, not M_{K:g}")


def _relation(K, p, q, strict=False):
    _check_same(K, p, q)
    P, Q = _unit(p), _unit(q)
    try:
        kind, length, w, _ = _classify(K, P, Q)
    except NoUniqueGeodesic:
        # in de Sitter space such pairs are not causally related at all
        if strict or K < 0:
            raise
        return "spacelike", np.inf, False
    future = kind in ("timelike", "null") and _is_future(K, P, w)
    return kind, length / _scale(K), future


def tau_K(K, p, q):
    """Time separation of the model: positive iff p << q."""
    kind, length, future = _relation(K, p, q)
    return length if (kind == "timelike" and future) else 0.0


def causal_K(K, p, q):
    kind, _, future = _relation(K, p, q)
    return kind == "equal" or future


def chron_K(K, p, q):
    kind, _, future = _relation(K, p, q)
    return kind == "timelike" and future


def signed_distance(K, p, q):
    """Signed length of the connecting geodesic: negative iff timelike."""
    kind, length, _ = _relation(K, p, q, strict=True)
    if kind == "timelike":
        return -length
    if kind == "spacelike":
        return length
    return 0.0


def nonnormalized_angle(K, p, q, r):
    """Pairing of the initial velocities of [p, q] and [p, r]."""
    v, _, _ = log_map(K, p, q)
    w, _, _ = log_map(K, p, r)
    return inner(K, v, w)


def _timelike_unit(K, p, q):
    v, kind, length = log_map(K, p, q)
    if kind != "timelike":
        raise LegNotTimelike(f"leg {p} -> {q} is {kind}")
    return v / length


def hyperbolic_angle(K, p, q, r):
    """Hyperbolic angle at p between the timelike legs towards q and r."""
    u = _timelike_unit(K, p, q)
    w = _timelike_unit(K, p, r)
    # for unit timelike u, w: <u-w,u-w> = 4 sinh^2(angle/2) in the same cone,
    # <u+w,u+w> = 4 sinh^2(angle/2) across cones
    same = inner(K, u, w) < 0
    D = u - w if same else u + w
    return 2.0 * float(np.arcsinh(np.sqrt(max(inner(K, D, D), 0.0)) / 2.0))


@dataclass(frozen=True)
class Hinge:
    vertex: ModelPoint
    leg_a_signed: float
    leg_b_signed: float
    angle: float | None
    nn_angle: float


def hinge(K, p, q, r):
    a = signed_distance(K, p, q)
    b = signed_distance(K, p, r)
    ang = hyperbolic_angle(K, p, q, r) if (a < 0 and b < 0) else None
    return Hinge(p, a, b, ang, nonnormalized_angle(K, p, q, r))


def geodesic_point(K, p, q, s):
    """gamma_{pq}(s); s outside [0, 1] extends the geodesic."""
    if K == 0:
        _check_same(K, p, q)
        return ModelPoint(p.coords + s * (q.coords - p.coords), 0.0)
    if s == 0:
        return p
    if s == 1:
        return q
    v, _, _ = log_map(K, p, q)
    return exp_map(K, p, s * v)


# --- triangles ---------------------------------------------------------------


def _side_tol(*xs):
    return 1e-12 * max(1.0, *[abs(x) for x in xs])


def law_of_cosines_third_side(K, a, b, omega):
    """Longest side of a timelike triangle from the hinge at its middle vertex.

    a and b are the time separations of the two short sides meeting at the
    middle vertex and omega is the hyperbolic angle between them.  Written in
    half-angle form so that small triangles keep full relative precision:
      K=0:  (c/2)^2        = ((a+b)/2)^2        + ab sinh^2(omega/2)
      K>0:  sinh^2(kc/2)  = sinh^2(k(a+b)/2)  + sinh(ka) sinh(kb) sinh^2(omega/2)
      K<0:  sin^2(kc/2)   = sin^2(k(a+b)/2)   + sin(ka) sin(kb) sinh^2(omega/2)
    with k = sqrt|K|.
    """
    if a < 0 or b < 0 or omega < 0:
        raise ValueError("sides and angle must be nonnegative")
    sh2 = np.sinh(omega / 2.0) ** 2
    if K == 0:
        return 2.0 * float(np.sqrt(((a + b) / 2.0) ** 2 + a * b * sh2))
    k = _scale(K)
    A, B = k * a, k * b
    if K > 0:
        val = np.sinh((A + B) / 2.0) ** 2 + np.sinh(A) * np.sinh(B) * sh2
        return 2.0 * float(np.arcsinh(np.sqrt(val))) / k
    if A + B >= np.pi:
        raise SizeBoundViolated(f"a + b = {a + b} reaches pi/sqrt(-K)")
    val = np.sin((A + B) / 2.0) ** 2 + np.sin(A) * np.sin(B) * sh2
    if val >= 1.0:
        raise SizeBoundViolated("third side would reach pi/sqrt(-K)")
    return 2.0 * float(np.arcsin(np.sqrt(val))) / k


def _angle_at_past_vertex(K, a, b, c):
    """Hyperbolic angle at x between [x,y] (length a) and [x,z] (length c)."""
    # sinh^2(phi/2) from the same-cone law of cosines, factored
    if K == 0:
        val = (c - a - b) * (c - a + b) / (4.0 * a * c)
    else:
        k = _scale(K)
        A, B, C = k * a, k * b, k * c
        if K > 0:
            val = np.sinh((C - A + B) / 2.0) * np.sinh((C - A - B) / 2.0) / (np.sinh(A) * np.sinh(C))
        else:
            val = np.sin((C - A + B) / 2.0) * np.sin((C - A - B) / 2.0) / (np.sin(A) * np.sin(C))
    return 2.0 * float(np.arcsinh(np.sqrt(max(float(val), 0.0))))


def size_bounds_check(K, sides):
    """True iff a comparison triangle with these sides exists in M_K.

    Degenerate (collinear) triangles with c = a + b count as realizable.
    Only anti-de Sitter space has a diameter bound, c < pi/sqrt(-K); timelike
    triangles of any size are realizable in de Sitter space.
    """
    a, b, c = (float(s) for s in sides)
    if min(a, b, c) < 0 or not np.all(np.isfinite([a, b, c])):
        return False
    if c < a + b - _side_tol(a, b, c):
        return False
    if K < 0 and c * _scale(K) >= np.pi:
        return False
    return True


def realize_triangle(K, sides):
    """Canonical comparison triangle (x, y, z) with x << y << z.

    x sits at the origin, z on the time axis through x, y in the half-plane
    of positive space direction.  sides = (tau(x,y), tau(y,z), tau(x,z)).
    """
    a, b, c = (float(s) for s in sides)
    if min(a, b, c) < 0:
        raise ValueError("side lengths must be nonnegative")
    if c < a + b - _side_tol(a, b, c):
        raise ReverseTriangleViolated(f"c={c} < a+b={a + b}")
    if K < 0 and c * _scale(K) >= np.pi:
        raise SizeBoundViolated(f"c={c} >= pi/sqrt(-K)")
    c = max(c, a + b) if c < a + b else c
    o = origin(K)
    _, et, ex = _base_frame(K)
    k = _scale(K)
    x = o
    z = exp_map(K, o, c * et / k) if c > 0 else o
    if a == 0:
        y = x
    elif b == 0:
        y = z
    else:
        phi = _angle_at_past_vertex(K, a, b, c)
        y = exp_map(K, o, a * (np.cosh(phi) * et + np.sinh(phi) * ex) / k)
    return x, y, z


def _vertex_angles(K, x, y, z):
    # nonnormalized angles at x (y,z), at y (x,z), at z (x,y)
    return (
        nonnormalized_angle(K, x, y, z),
        nonnormalized_angle(K, y, x, z),
        nonnormalized_angle(K, z, x, y),
    )


@dataclass
class HingeProbe:
    """Angles of the triangles (p, q, r) along a grid of |pr| values."""

    K: float
    pq: float
    qr: float
    pr_grid: np.ndarray
    angle_pqr: np.ndarray
    angle_qpr: np.ndarray
    angle_qrp: np.ndarray
    tol: float = 1e-9
    violations: list = field(default_factory=list)

    @property
    def pqr_decreasing(self):
        return bool(np.all(np.diff(self.angle_pqr) <= self.tol))

    @property
    def qpr_increasing(self):
        return bool(np.all(np.diff(self.angle_qpr) >= -self.tol))

    @property
    def qrp_increasing(self):
        return bool(np.all(np.diff(self.angle_qrp) >= -self.tol))

    @property
    def ok(self):
        return self.pqr_decreasing and self.qpr_increasing and self.qrp_increasing


def _place_timelike_triple(K, spq, sqr, spr):
    """Realize p, q, r with prescribed negative signed distances."""
    A, B, C = -spq, -sqr, -spr
    if min(A, B, C) <= 0:
        raise UnrealizableTriple("only all-timelike triples are supported")
    try:
        if C >= A + B - _side_tol(A, B, C):
            # p << q << r
            p, q, r = realize_triangle(K, (A, B, C))
        elif A >= B + C - _side_tol(A, B, C):
            # p << r << q
            p, r, q = realize_triangle(K, (C, B, A))
        elif B >= A + C - _side_tol(A, B, C):
            # q << p << r
            q, p, r = realize_triangle(K, (A, C, B))
        else:
            raise UnrealizableTriple(f"no time ordering fits |pq|={spq}, |qr|={sqr}, |pr|={spr}")
    except (SizeBoundViolated, ReverseTriangleViolated) as exc:
        raise UnrealizableTriple(str(exc)) from exc
    return p, q, r


def hinge_monotonicity_probe(K, fixed_sides, third_side_grid, tol=1e-9):
    """Evaluate the three nonnormalized angles along a grid of |pr| values.

    fixed_sides are the signed distances (|pq|, |qr|).  The grid is sorted by
    increasing signed value of |pr| before evaluation; along that order the
    angle at q should not increase and the angles at p and r should not
    decrease.
    """
    spq, sqr = (float(s) for s in fixed_sides)
    grid = np.sort(np.asarray(third_side_grid, dtype=float))
    at_q, at_p, at_r = [], [], []
    for spr in grid:
        p, q, r = _place_timelike_triple(K, spq, sqr, float(spr))
        at_q.append(nonnormalized_angle(K, q, p, r))
        at_p.append(nonnormalized_angle(K, p, q, r))
        at_r.append(nonnormalized_angle(K, r, q, p))
    probe = HingeProbe(K, spq, sqr, grid, np.array(at_q), np.array(at_p), np.array(at_r), tol)
    for name, seq, sign in (("pqr", probe.angle_pqr, -1), ("qpr", probe.angle_qpr, 1), ("qrp", probe.angle_qrp, 1)):
        bad = np.nonzero(sign * np.diff(seq) < -tol)[0]
        probe.violations.extend((name, int(i)) for i in bad)
    return probe


def sturm_check(k, samples, tol=1e-6):
    """Discrete comparison check for f'' + k f <= 0 with f >= 0 at the ends.

    samples is a sequence of (t, f) on a uniform grid over [0, L].  Raises
    SturmNotApplicable when the differential inequality or the boundary
    conditions fail (so nothing can be concluded); otherwise returns whether
    f >= -tol holds on the grid.  Nonnegative (rather than vanishing) end
    values suffice: a negative interior dip would produce two interior zeros
    and the argument applies between them.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 8:
        raise GridTooCoarse("at least 8 samples are needed")
    t, f = arr[:, 0], arr[:, 1]
    h = np.diff(t)
    if np.any(h <= 0) or np.max(np.abs(h - h[0])) > 1e-9 * max(1.0, abs(t[-1])):
        raise ValueError("samples must lie on an increasing uniform grid")
    L = t[-1] - t[0]
    if k > 0 and L >= np.pi / np.sqrt(k):
        raise SturmNotApplicable(f"interval length {L} >= pi/sqrt(k)")
    scale = max(1.0, float(np.max(np.abs(f))))
    if f[0] < -tol * scale or f[-1] < -tol * scale:
        raise SturmNotApplicable("f is negative at an interval end")
    d2 = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h[0] ** 2
    lhs = d2 + k * f[1:-1]
    if np.any(lhs > tol):
        i = int(np.argmax(lhs))
        raise SturmNotApplicable(f"f''+kf = {lhs[i]:.3e} > 0 at t={t[i + 1]:.6g}")
    return bool(np.all(f >= -tol))


# --- frames and isometries -------------------------------------------------


def segment_frame(K, a, b):
    """Orthonormal frame at a: (unit point, unit tangent towards b, normal).

    The tangent is the unit direction of [a, b] (which must be timelike or
    spacelike); the normal is chosen so that for a future timelike tangent the
    frame has the orientation of (e_t, e_x).
    """
    v, kind, length = log_map(K, a, b)
    if kind not in ("timelike", "spacelike"):
        raise NoUniqueGeodesic(f"segment is {kind}; a frame needs a non-null direction")
    A = _unit(a)
    u = v / length
    if K == 0:
        n = np.array([u[1], u[0]])
    else:
        G = _gram(K)
        n = -_sigma(K) * (G @ np.cross(A, u))
        n = n / np.sqrt(abs(inner(K, n, n)))
    return A, u, n


def frame_coordinates(K, frame, r):
    """Coefficients of r in the frame (unit model): (point, tangent, normal)."""
    A, u, n = frame
    R = _unit(r)
    eps_u = inner(K, u, u)
    eps_n = inner(K, n, n)
    if K == 0:
        D = R - A
        return 0.0, inner(K, D, u) / eps_u, inner(K, D, n) / eps_n
    return _sigma(K) * inner(K, R, A), inner(K, R, u) / eps_u, inner(K, R, n) / eps_n


def from_frame_coordinates(K, frame, coeffs, flip=False):
    A, u, n = frame
    g, al, be = coeffs
    if flip:
        be = -be
    if K == 0:
        return ModelPoint(A + al * u + be * n, 0.0)
    return _wrap(K, g * A + al * u + be * n)


def side_of(K, a, b, r):
    """Sign (+1, 0, -1) of r relative to the geodesic through a and b."""
    frame = segment_frame(K, a, b)
    _, _, beta = frame_coordinates(K, frame, r)
    scale = max(1.0, float(np.abs(_unit(r)).max()))
    if abs(beta) <= 1e-13 * scale:
        return 0
    return 1 if beta > 0 else -1


def pairwise_relations(K, coords):
    """Vectorized tau, causal and chronological matrices for many points of M_K.

    coords is an (n, 2) or (n, 3) array of ambient coordinates.  Agrees with
    tau_K / causal_K / chron_K entrywise (same formulas, same tolerances).
    """
    C = np.asarray(coords, dtype=float) * _scale(K)
    G = np.diag(_gram(K))
    D = C[None, :, :] - C[:, None, :]
    h = np.einsum("ijk,k,ijk->ij", D, G, D)
    scale2 = np.einsum("ijk,ijk->ij", D, D)
    equal = scale2 == 0.0
    null = ~equal & (np.abs(h) <= NULL_TOL * scale2)
    timelike = ~equal & ~null & (h < 0)
    if K == 0:
        future = D[:, :, 0] > 0
        length = np.sqrt(np.abs(h))
    else:
        s = _sigma(K)
        W = D + s * (h / 2.0)[:, :, None] * C[:, None, :]
        if K > 0:
            future = W[:, :, 0] > 0
            with np.errstate(invalid="ignore"):
                length = np.where(timelike, 2.0 * np.arcsinh(np.sqrt(np.maximum(-h, 0.0)) / 2.0), 0.0)
        else:
            P = C[:, None, :]
            future = W[:, :, 1] * P[:, :, 0] - W[:, :, 0] * P[:, :, 1] > 0
            if np.any(timelike & (h <= -4.0)):
                raise NoUniqueGeodesic("sample contains timelike pairs beyond the conjugate point")
            length = np.where(timelike, 2.0 * np.arcsin(np.sqrt(np.clip(-h, 0.0, 4.0)) / 2.0), 0.0)
        length = length / _scale(K)
    chron = timelike & future
    causal = equal | ((timelike | null) & future)
    tau = np.where(chron, length, 0.0)
    return tau, causal, chron
