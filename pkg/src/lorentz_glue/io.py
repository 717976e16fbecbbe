"""JSON documents for finite spaces and gluing specifications.

Space document::

    {"points": [{"id": "a", "coords": [t, x]}, ...],
     "tau": [[i, j, v], ...], "causal": [[i, j], ...],
     "chron": [[i, j], ...], "d": [[i, j, v], ...], "model": {"K": 0}}

i, j are point indices (point ids are accepted as well).  causal lists
every related pair, the diagonal (i, i) included.  Omitted tau
entries are 0, "inf" stands for an infinite value.  chron, d and model are
optional: chron defaults to tau > 0, d to the Euclidean distance of the
coordinates when a model is given (ambient coordinates of the model plane;
(t, x) for K = 0) and to the discrete metric otherwise.  A given d lists
each unordered pair once or both orders.

Gluing document::

    {"x1": <space or path>, "x2": <space or path>,
     "pairs": [["a1", "a2"], ...], "declared": {"tau_preserving": true}}

Paths are resolved relative to the gluing document.  Serialization writes
every field explicitly, so dump(load(dump(X))) == dump(X) byte for byte.
"""

import json
import os

import numpy as np

from . import model_spaces as ms
from .amalgamation import GluingSpec
from .errors import ModelSpaceError, SpaceFormatError
from .plls_core import FiniteLorentzSpace

__all__ = [
    "space_from_dict",
    "space_to_dict",
    "load_space",
    "dump_space",
    "spec_from_dict",
    "spec_to_dict",
    "load_spec",
    "load_document",
    "to_json",
    "encode_number",
    "decode_number",
]


def encode_number(v):
    v = float(v)
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def decode_number(v):
    if isinstance(v, str):
        if v in ("inf", "+inf", "Infinity"):
            return np.inf
        if v in ("-inf", "-Infinity"):
            return -np.inf
        raise SpaceFormatError(f"bad number {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpaceFormatError(f"bad number {v!r}")
    return float(v)


def to_json(obj, pretty=False):
    """Deterministic JSON text (sorted keys, exact float repr)."""
    if pretty:
        return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SpaceFormatError(f"{path}: {e}") from None
    except OSError as e:
        raise SpaceFormatError(f"{path}: {e.strerror}") from None


def space_from_dict(doc) -> FiniteLorentzSpace:
    if not isinstance(doc, dict) or "points" not in doc:
        raise SpaceFormatError("space document needs a 'points' list")
    pts = doc["points"]
    if not isinstance(pts, list):
        raise SpaceFormatError("'points' must be a list")
    ids, coords = [], []
    for k, p in enumerate(pts):
        if isinstance(p, str):
            p = {"id": p}
        if not isinstance(p, dict) or "id" not in p:
            raise SpaceFormatError(f"point {k} has no id")
        ids.append(str(p["id"]))
        coords.append(p.get("coords"))
    if len(set(ids)) != len(ids):
        raise SpaceFormatError("point ids must be unique")
    n = len(ids)
    index = {pid: i for i, pid in enumerate(ids)}

    def idx(v):
        if isinstance(v, bool):
            raise SpaceFormatError(f"bad point reference {v!r}")
        if isinstance(v, int):
            if not 0 <= v < n:
                raise SpaceFormatError(f"point index {v} out of range")
            return v
        if isinstance(v, str) and v in index:
            return index[v]
        raise SpaceFormatError(f"unknown point {v!r}")

    def entries(name, width):
        rows = doc.get(name, [])
        if not isinstance(rows, list):
            raise SpaceFormatError(f"'{name}' must be a list")
        for r in rows:
            if not isinstance(r, list) or len(r) != width:
                raise SpaceFormatError(f"'{name}' entries must have {width} items, got {r!r}")
            yield r

    tau = np.zeros((n, n))
    for i, j, v in entries("tau", 3):
        tau[idx(i), idx(j)] = decode_number(v)
    if "causal" not in doc:
        raise SpaceFormatError("space document needs a 'causal' list")
    causal = np.zeros((n, n), dtype=bool)
    for i, j in entries("causal", 2):
        causal[idx(i), idx(j)] = True
    chron = None
    if "chron" in doc:
        chron = np.zeros((n, n), dtype=bool)
        for i, j in entries("chron", 2):
            chron[idx(i), idx(j)] = True
    K = None
    if "model" in doc:
        m = doc["model"]
        if not isinstance(m, dict) or "K" not in m:
            raise SpaceFormatError("'model' must be {\"K\": value}")
        K = decode_number(m["K"])
    model_coords = None
    if any(c is not None for c in coords):
        if any(c is None for c in coords):
            raise SpaceFormatError("either all points or none carry coords")
        try:
            if K is not None:
                model_coords = [ms.model_point(K, [decode_number(v) for v in c]) for c in coords]
            else:
                model_coords = [np.array([decode_number(v) for v in c]) for c in coords]
        except (ModelSpaceError, TypeError) as e:
            raise SpaceFormatError(f"bad coordinates: {e}") from None
    d = None
    if "d" in doc:
        d = np.full((n, n), np.nan)
        np.fill_diagonal(d, 0.0)
        for i, j, v in entries("d", 3):
            d[idx(i), idx(j)] = decode_number(v)
        missing = np.isnan(d)
        d[missing] = d.T[missing]
        if np.any(np.isnan(d)):
            a, b = np.argwhere(np.isnan(d))[0]
            raise SpaceFormatError(f"no distance given for {ids[a]}, {ids[b]}")
    return FiniteLorentzSpace.from_relations(
        ids, tau, causal=causal, chron=chron, d=d, coords=None if model_coords is None else tuple(model_coords),
        K=K,
    )


def space_to_dict(X: FiniteLorentzSpace) -> dict:
    pts = []
    for i, pid in enumerate(X.points):
        entry = {"id": pid}
        if X.coords is not None and X.coords[i] is not None:
            c = X.coords[i]
            c = c.coords if isinstance(c, ms.ModelPoint) else np.asarray(c, dtype=float)
            entry["coords"] = [encode_number(v) for v in c]
        pts.append(entry)
    doc = {
        "points": pts,
        "tau": [[int(i), int(j), encode_number(X.tau[i, j])] for i, j in zip(*np.nonzero(X.tau))],
        "causal": [[int(i), int(j)] for i, j in zip(*np.nonzero(X.causal))],
        "chron": [[int(i), int(j)] for i, j in zip(*np.nonzero(X.chron))],
        "d": [[i, j, encode_number(X.d[i, j])] for i in range(X.n) for j in range(X.n) if i != j],
    }
    if X.K is not None:
        doc["model"] = {"K": encode_number(X.K)}
    return doc


def load_space(path) -> FiniteLorentzSpace:
    return space_from_dict(_read_json(path))


def dump_space(X, path=None, pretty=False):
    text = to_json(space_to_dict(X), pretty)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def _spec_keys(doc):
    # lower case is canonical; upper case is accepted on input
    for keys in (("x1", "x2"), ("X1", "X2")):
        if isinstance(doc, dict) and all(k in doc for k in keys):
            return keys
    return None


def spec_from_dict(doc, base_dir=".") -> GluingSpec:
    keys = _spec_keys(doc)
    if keys is None:
        raise SpaceFormatError("gluing document needs 'x1' and 'x2'")
    spaces = []
    for key in keys:
        v = doc[key]
        if isinstance(v, str):
            v = _read_json(os.path.join(base_dir, v))
        spaces.append(space_from_dict(v))
    pairs = doc.get("pairs", [])
    if not isinstance(pairs, list) or any(not isinstance(p, list) or len(p) != 2 for p in pairs):
        raise SpaceFormatError("'pairs' must be a list of [id1, id2]")
    declared = doc.get("declared", {})
    if not isinstance(declared, dict):
        raise SpaceFormatError("'declared' must be an object")
    return GluingSpec(spaces[0], spaces[1], tuple((str(a), str(b)) for a, b in pairs), declared)


def spec_to_dict(spec: GluingSpec) -> dict:
    return {
        "x1": space_to_dict(spec.X1),
        "x2": space_to_dict(spec.X2),
        "pairs": [list(p) for p in spec.pairs],
        "declared": dict(spec.declared),
    }


def load_spec(path) -> GluingSpec:
    return spec_from_dict(_read_json(path), os.path.dirname(os.path.abspath(path)))


def load_document(path):
    """A space or a gluing specification, depending on the document's keys."""
    doc = _read_json(path)
    if _spec_keys(doc) is not None:
        return spec_from_dict(doc, os.path.dirname(os.path.abspath(path)))
    return space_from_dict(doc)
