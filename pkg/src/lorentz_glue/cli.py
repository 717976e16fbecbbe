"""Command line interface: ``lorentz-glue <command> ...``.

Exit codes: 0 success (or expected outcome), 1 input / structural error,
2 violated axioms, failed curvature bound or unexpected scenario outcome.
All reports are JSON with sorted keys; the same command and seed give
byte-identical output.
"""

import argparse
import os
import sys

import numpy as np

from . import io
from .amalgamation import GluedHalfPlanes, build_quotient, causal_diamond, check_map_properties
from .comparison import ModelGeometry, box_sampler, curvature_verdict
from .errors import LorentzGlueError, NotChronological, SpaceFormatError
from .plls_core import FiniteLorentzSpace, validate_space
from .scenarios import SCENARIOS, lens_membership, scenario, symmetric_lens_points

SEED_ENV = "LORENTZ_GLUE_SEED"


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _default_seed():
    v = os.environ.get(SEED_ENV)
    if v is None or v == "":
        return 0
    try:
        return int(v)
    except ValueError:
        raise _Fail(1, f"{SEED_ENV} must be an integer, got {v!r}") from None


def _emit(args, payload, out=None):
    text = io.to_json(payload, args.pretty)
    target = out if out is not None else getattr(args, "out", None)
    if target:
        with open(target, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _point(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None
    return np.array(vals)


# --- commands ------------------------------------------------------------------


def cmd_validate(args):
    X = io.load_space(args.file)
    rep = validate_space(X, tol=args.tol)
    _emit(args, {"file": os.path.basename(args.file), "n_points": X.n, **rep.to_dict()})
    return 0 if rep.ok else 2


def _quotient(args):
    spec = io.load_spec(args.spec)
    props = check_map_properties(spec)
    Q = build_quotient(spec, method=args.method)
    return spec, props, Q


def cmd_glue(args):
    spec, props, Q = _quotient(args)
    doc = Q.to_dict(witnesses=not args.no_witnesses)
    doc["warnings"] = props.warnings
    doc["map_properties"] = props.to_dict()
    _emit(args, doc)
    return 0


def cmd_tau(args):
    doc = io.load_document(args.file)
    if isinstance(doc, FiniteLorentzSpace):
        i, j = doc.index(args.a), doc.index(args.b)
        v = doc.tau[i, j]
        _emit(args, {"from": args.a, "to": args.b, "tau": io.encode_number(v), "causal": bool(doc.causal[i, j])})
        return 0
    Q = build_quotient(doc, method=args.method)
    a, b = Q.class_index(args.a), Q.class_index(args.b)
    w = Q.witness(a, b)
    out = {
        "from": Q.labels[a],
        "to": Q.labels[b],
        "tau": io.encode_number(Q.tilde_tau[a, b]),
        "causal": bool(Q.tilde_causal[a, b]),
        "witness": None if w is None else (w.to_dict() if hasattr(w, "cycle") else w.to_list()),
    }
    _emit(args, out)
    return 0


def cmd_diamond(args):
    spec = io.load_spec(args.spec)
    Q = build_quotient(spec, method=args.method)
    rep = causal_diamond(Q, args.a, args.b)
    _emit(args, rep.to_dict())
    return 0 if rep.holds is not False else 2


def _geometry(args):
    if args.file is not None:
        doc = io.load_document(args.file)
        if not isinstance(doc, FiniteLorentzSpace):
            doc = build_quotient(doc, method="auto")
        return doc, None
    lo, hi = args.box
    if args.model is not None:
        G = ModelGeometry(args.model)
    elif args.glued is not None:
        G = GluedHalfPlanes(seam=(1.0, 0.0), width=args.glued)
    else:
        raise _Fail(1, "give a space/spec file, --model K0 or --glued WIDTH")
    return G, box_sampler(G, (lo, hi), (lo, hi))


def cmd_curvature(args):
    space, sampler = _geometry(args)
    rep = curvature_verdict(
        space, args.K, sampler, args.bound, args.triangles, args.pairs, args.seed, args.tol, args.jobs
    )
    _emit(args, rep.to_dict(per_triangle=args.per_triangle))
    return 0 if rep.passed else 2


def cmd_scenario(args):
    params = {}
    if args.variant is not None:
        if args.name not in ("orientation-reversal", "reshetnyak-flat"):
            raise _Fail(1, f"scenario {args.name} has no variants")
        params["variant"] = args.variant
    if args.name == "reshetnyak-flat":
        params["n_triangles"] = args.triangles
        params["n_pairs"] = args.pairs
        params["jobs"] = args.jobs
    res = scenario(args.name, seed=args.seed, grid=args.grid, out=args.out, **params)
    text = io.to_json(res.to_dict(), args.pretty)
    sys.stdout.write(text)
    return res.exit_code


def cmd_lens(args):
    if args.symmetric is not None:
        c, omega = args.symmetric
        bm, bp = symmetric_lens_points(c, omega)
    else:
        if args.b_minus is None or args.b_plus is None:
            raise _Fail(1, "give --b-minus and --b-plus, or --symmetric C OMEGA")
        bm, bp = args.b_minus, args.b_plus
    x = np.zeros_like(bm) if args.point is None else args.point
    member = lens_membership(bm, bp, x)
    _emit(args, {"b_minus": bm.tolist(), "b_plus": bp.tolist(), "point": x.tolist(), "member": member})
    return 0


# --- parser --------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent the JSON report")
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for batch checks")

    p = argparse.ArgumentParser(prog="lorentz-glue", description="Finite Lorentzian spaces, gluing and curvature checks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check the axioms of a space file")
    s.add_argument("file")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--out")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("glue", parents=[common], help="build the quotient of a gluing spec")
    s.add_argument("spec")
    s.add_argument("--out", help="write the quotient JSON here instead of stdout")
    s.add_argument("--method", choices=["auto", "full", "seam"], default="auto")
    s.add_argument("--no-witnesses", action="store_true")
    s.set_defaults(func=cmd_glue)

    s = sub.add_parser("tau", parents=[common], help="time separation (quotient value for a gluing spec)")
    s.add_argument("file")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--method", choices=["auto", "full", "seam"], default="auto")
    s.add_argument("--out")
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("diamond", parents=[common], help="causal diamond in a quotient")
    s.add_argument("spec")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--method", choices=["auto", "full", "seam"], default="auto")
    s.add_argument("--out")
    s.set_defaults(func=cmd_diamond)

    s = sub.add_parser("curvature", parents=[common], help="triangle comparison verdict")
    s.add_argument("file", nargs="?", help="space or gluing spec file")
    s.add_argument("--model", type=float, default=None, metavar="K0", help="sample the model plane M_K0")
    s.add_argument("--glued", type=float, default=None, metavar="WIDTH",
                   help="sample flat half-planes glued along x=0 (WIDTH > 0: overlap strip)")
    s.add_argument("--box", type=float, nargs=2, default=(-1.0, 1.0), metavar=("LO", "HI"))
    s.add_argument("--K", type=float, required=True)
    s.add_argument("--bound", choices=["upper", "lower"], default="upper")
    s.add_argument("--triangles", type=int, default=100)
    s.add_argument("--pairs", type=int, default=18)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--per-triangle", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_curvature)

    s = sub.add_parser("scenario", parents=[common], help="run a named experiment")
    s.add_argument("name", choices=sorted(SCENARIOS))
    s.add_argument("--grid", type=int, default=41)
    s.add_argument("--variant", default=None)
    s.add_argument("--triangles", type=int, default=500)
    s.add_argument("--pairs", type=int, default=18)
    s.add_argument("--out", help="directory for the JSON artifacts")
    s.set_defaults(func=cmd_scenario)

    s = sub.add_parser("lens", parents=[common], help="wide-lens membership test")
    s.add_argument("--b-minus", type=_point)
    s.add_argument("--b-plus", type=_point)
    s.add_argument("--symmetric", type=float, nargs=2, metavar=("C", "OMEGA"))
    s.add_argument("--point", type=_point, help="default: the origin")
    s.add_argument("--out")
    s.set_defaults(func=cmd_lens)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except _Fail as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (SpaceFormatError, NotChronological, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (LorentzGlueError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
