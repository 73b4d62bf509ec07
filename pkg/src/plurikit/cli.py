"""Command-line front end: ``plurikit <subcommand> [flags]``.

Every run writes a CSV table (to ``--output`` or stdout) and, when an output
path is given, a JSON manifest next to it (``--manifest`` overrides the
path).  Options may also come from a ``key = value`` file via ``--config``;
flags given on the command line win.

Exit status: 0 on success, 2 on bad input, 3 when a numerical guard aborts.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
import time
from importlib import metadata

import numpy as np
import scipy

from . import tolerances
from .asymptotics import GridSpec, parse_freud, run_example41, run_theorem41
from .bernstein import FAMILIES, bm_trace, homogeneous_split_check
from .errors import ConditioningError, InputError, NumericalGuardError, PlurikitError
from .extremal import green_unweighted, green_weighted
from .geometry import (
    Ball,
    Box,
    Torus,
    build_grid_set,
    gauss_legendre_grid,
    lift_circular,
    product_measure,
    uniform_measure,
)
from .minimax import tcheby_sequence
from .orthopoly import l2_optimal_sup_norm, orthonormalize
from .polyalg import Direction, Poly, eval_homogeneous, eval_poly, homogenize, monomials_upto
from .serialize import sample_set_from_csv, table_to_csv

WEIGHT_BUILTINS = ("const:c", "gauss:sigma", "exp-poly:c0,c1,...")
DOMAIN_KINDS = ("interval:a,b", "box:a1,b1;a2,b2", "ball:R[,N]", "circle:r", "torus:r1,r2", "csv:path")
MEASURE_KINDS = ("uniform", "counting", "gauss-legendre")


# --------------------------------------------------------------------------
# argument parsing


def _floats(text, what):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"cannot read numbers in {what} {text!r}") from None


def parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def parse_domain(text: str):
    """``interval:a,b``, ``box:a1,b1;a2,b2``, ``ball:R[,N]``, ``circle:r``, ``torus:r1,r2`` or ``csv:path``."""
    kind, _, rest = str(text).partition(":")
    kind = kind.strip().lower()
    if kind == "interval":
        v = _floats(rest, "domain")
        if len(v) != 2 or not v[0] < v[1]:
            raise InputError("interval needs a,b with a < b")
        return Box((v[0],), (v[1],))
    if kind == "box":
        lo, hi = [], []
        for part in rest.split(";"):
            v = _floats(part, "domain")
            if len(v) != 2 or not v[0] < v[1]:
                raise InputError("box needs a,b pairs with a < b separated by ';'")
            lo.append(v[0])
            hi.append(v[1])
        return Box(tuple(lo), tuple(hi))
    if kind == "ball":
        v = _floats(rest, "domain")
        if len(v) not in (1, 2) or v[0] <= 0:
            raise InputError("ball needs R[,N] with R > 0")
        return Ball(v[0], int(v[1]) if len(v) == 2 else 1)
    if kind in ("circle", "torus"):
        v = _floats(rest, "domain") or [1.0]
        if any(r <= 0 for r in v):
            raise InputError("radii must be positive")
        return Torus(tuple(v))
    if kind == "csv":
        return ("csv", rest)
    raise InputError(f"unknown domain {text!r}; valid forms: {', '.join(DOMAIN_KINDS)}")


def parse_weight(text: str | None):
    """``const:c``, ``gauss:sigma`` (``exp(-|x|^2 / 2 sigma^2)``) or ``exp-poly:c0,c1,...``
    (``exp(sum_k sum_j c_j x_k^j)``, real parts of the coordinates)."""
    if text is None:
        return None
    kind, _, rest = str(text).partition(":")
    kind = kind.strip().lower()
    if kind == "const":
        v = _floats(rest, "weight")
        if len(v) != 1 or v[0] < 0:
            raise InputError("const weight needs one nonnegative value")
        return v[0]
    if kind == "gauss":
        v = _floats(rest, "weight")
        if len(v) != 1 or v[0] <= 0:
            raise InputError("gauss weight needs one positive sigma")
        s = v[0]
        return lambda p: np.exp(-np.sum(np.abs(p) ** 2, axis=1) / (2 * s * s))
    if kind == "exp-poly":
        c = _floats(rest, "weight")
        if not c:
            raise InputError("exp-poly weight needs coefficients")
        return lambda p: np.exp(np.sum(np.polynomial.polynomial.polyval(p.real, c), axis=1))
    raise InputError(f"unknown weight {text!r}; valid builtins: {', '.join(WEIGHT_BUILTINS)}")


def build_problem(args):
    """Sample set and measure from the domain, weight and measure flags."""
    domain = parse_domain(args.domain)
    weight = parse_weight(args.weight)
    measure = (args.measure or "uniform").lower()
    if measure not in MEASURE_KINDS:
        raise InputError(f"unknown measure {args.measure!r}; valid: {', '.join(MEASURE_KINDS)}")
    if isinstance(domain, tuple):
        with open(domain[1], encoding="utf-8") as fh:
            E = sample_set_from_csv(fh.read())
        if weight is not None:
            E = E.with_weights(build_weights(E.points, weight))
    elif measure == "gauss-legendre":
        if not isinstance(domain, Box):
            raise InputError("gauss-legendre measure needs an interval or box domain")
        E, mu = gauss_legendre_grid(domain.lower, domain.upper, args.resolution, weight)
        return E, mu
    else:
        E = build_grid_set(domain, args.resolution, weight)
    if measure == "gauss-legendre":
        raise InputError("gauss-legendre measure needs an interval or box domain")
    total = float(len(E)) if measure == "counting" else 1.0
    return E, uniform_measure(E, total)


def build_weights(points, weight):
    if np.isscalar(weight):
        return np.full(points.shape[0], float(weight))
    return np.asarray(weight(points), dtype=float).reshape(-1)


def parse_theta(text, dim):
    v = _floats(text, "theta") if text is not None else [1.0 / dim] * dim
    return Direction(tuple(v))


def parse_probes(text, dim):
    """Points separated by ';', coordinates by ','; complex entries like ``1+2j``."""
    pts = []
    for part in str(text).split(";"):
        if not part.strip():
            continue
        try:
            row = [complex(v.replace(" ", "")) for v in part.split(",")]
        except ValueError:
            raise InputError(f"cannot read probe point {part!r}") from None
        if len(row) != dim:
            raise InputError(f"probe point {part!r} has {len(row)} coordinates, expected {dim}")
        pts.append(row)
    if not pts:
        raise InputError("no probe points given")
    return np.array(pts, dtype=complex)


def worker_count() -> int:
    raw = os.environ.get("PLURIKIT_THREADS", "0")
    try:
        return max(0, int(raw))
    except ValueError:
        raise InputError(f"PLURIKIT_THREADS must be an integer, got {raw!r}") from None


# --------------------------------------------------------------------------
# subcommands; each returns (header, rows, extra manifest entries)


def cmd_tcheby(args):
    E, _ = build_problem(args)
    theta = parse_theta(args.theta, E.dim)
    results = tcheby_sequence(E, theta, parse_ints(args.js), K=args.K, workers=worker_count())
    rows = [
        (j, r.degree, r.minimax_value, r.dth_root, r.solver_status, r.certificate_factor)
        for j, r in zip(parse_ints(args.js), results)
    ]
    return ["j", "d", "minimax_value", "dth_root", "status", "certificate_factor"], rows, {}


def cmd_ortho(args):
    E, mu = build_problem(args)
    rows = []
    for d in parse_ints(args.degrees):
        o = orthonormalize(E, mu, d)
        for alpha, a in o.leading.items():
            rows.append((alpha, d, a, 1.0 / a, l2_optimal_sup_norm(E, mu, d, alpha, o), o.condition_estimate))
    return ["alpha", "d", "leading", "l2_min", "sup_of_q", "condition_estimate"], rows, {}


def cmd_green(args):
    E, mu = build_problem(args)
    build = green_unweighted if args.kind == "unweighted" else green_weighted
    g = build(E, mu, args.dmax)
    probes = parse_probes(args.probes, E.dim)
    v = g(probes)
    arg = g.argmax_degree(probes)
    header = [h for k in range(1, E.dim + 1) for h in (f"re(x{k})", f"im(x{k})")] + ["V", "argmax_d"]
    rows = []
    for p, val, dd in zip(probes, v, arg):
        rows.append([c for z in p for c in (z.real, z.imag)] + [float(val), int(dd)])
    return header, rows, {}


def cmd_bm(args):
    E, mu = build_problem(args)
    t = bm_trace(E, mu, parse_ints(args.degrees), args.family, seed=args.seed)
    rows = [(d, r, q, t.family) for d, r, q in zip(t.degrees, t.ratios, t.dth_roots)]
    return ["d", "ratio", "dth_root", "family"], rows, {}


def _rel(a, b):
    s = max(abs(a), abs(b))
    return abs(a - b) / s if s > 0 else 0.0


def cmd_lift_check(args):
    E, mu = build_problem(args)
    m = args.m if args.m is not None else 2 * args.dmax + 1
    Z = lift_circular(E, m)
    nu = product_measure(E, mu, m)
    rng = np.random.default_rng(args.seed)
    act = E.active
    lam, w, mass = E.points[act], E.weights[act], mu.masses[act]
    rows = []
    for d in range(1, args.dmax + 1):
        terms = {b: complex(*rng.standard_normal(2)) for b in monomials_upto(E.dim, d)}
        G = Poly(E.dim, terms)
        P = homogenize(G, d)
        gv = w**d * np.abs(eval_poly(G, lam))
        pv = np.abs(eval_homogeneous(P, Z.samples))
        rows.append(("sup_lift", d, gv.max(), pv.max(), _rel(gv.max(), pv.max())))
        if m > 2 * d:
            l2E = math.sqrt(float(np.sum(mass * gv**2)))
            l2Z = math.sqrt(float(np.sum(nu.masses * pv**2)))
            rows.append(("l2_lift", d, l2E, l2Z, _rel(l2E, l2Z)))
    deg = min(args.dmax, (m - 1) // 2)
    terms = {b: complex(*rng.standard_normal(2)) for b in monomials_upto(E.dim + 1, deg)}
    rep = homogeneous_split_check(Z, nu, Poly(E.dim + 1, terms), m)
    rows.append(("pythagoras", deg, rep.total_sq, math.fsum(rep.parts_sq.values()), rep.pythagoras_residual))
    return ["check", "d", "lhs", "rhs", "residual"], rows, {"max_residual": max(r[-1] for r in rows), "m": m}


def cmd_asym(args):
    js = parse_ints(args.js)
    if args.resolution is None:
        args.resolution = GridSpec.resolution if args.freud else 2001
    if args.freud:
        fp = parse_freud(args.freud)
        grid = GridSpec(
            nodes=args.nodes, resolution=args.resolution,
            tail_budget=args.tail_budget, radius=args.radius,
        )
        rep = run_example41(fp, parse_theta(args.theta, fp.dim), js, grid, K=args.K, workers=worker_count())
        radius = rep.radius
    else:
        E, mu = build_problem(args)
        rep = run_theorem41(E, mu, parse_theta(args.theta, E.dim), js, K=args.K, workers=worker_count())
        radius = [float("nan")] * len(rep.js)
    rows = [
        (j, d, l, r, g, R, c)
        for j, d, l, r, g, R, c in zip(rep.js, rep.degrees, rep.lhs, rep.rhs_trace, rep.gap, radius, rep.condition)
    ]
    extra = {}
    if rep.stopped:
        if not rows:
            raise NumericalGuardError(f"no degree completed: {rep.stopped}")
        print(f"plurikit: trace stopped after j = {rep.js[-1]}: {rep.stopped}", file=sys.stderr)
        extra["stopped"] = rep.stopped
    return ["j", "d", "lhs", "rhs", "gap", "R", "condition_estimate"], rows, extra


COMMANDS = {
    "tcheby": cmd_tcheby,
    "ortho": cmd_ortho,
    "green": cmd_green,
    "bm": cmd_bm,
    "lift-check": cmd_lift_check,
    "asym": cmd_asym,
}


# --------------------------------------------------------------------------
# argument handling


def _problem_flags(p, resolution=2001):
    p.add_argument("--domain", default="interval:-1,1", help=f"one of {', '.join(DOMAIN_KINDS)}")
    p.add_argument("--resolution", type=int, default=resolution, help="grid points (or quadrature nodes) per axis")
    p.add_argument("--weight", default=None, help=f"one of {', '.join(WEIGHT_BUILTINS)}; default w = 1")
    p.add_argument("--measure", default="uniform", help=f"one of {', '.join(MEASURE_KINDS)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plurikit",
        description="Weighted Tchebyshev, orthogonal polynomial and Green function experiments.",
        epilog="Exit status: 0 on success, 2 on bad input, 3 when a numerical guard aborts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' lines; flags override it")
    common.add_argument("--output", "-o", help="CSV path (stdout when omitted)")
    common.add_argument("--manifest", help="JSON manifest path (default: OUTPUT.json)")
    common.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("tcheby", parents=[common], help="weighted Tchebyshev constants along a direction")
    _problem_flags(p)
    p.add_argument("--theta", default=None, help="direction, comma-separated, summing to 1")
    p.add_argument("--js", default="4,8,16")
    p.add_argument("--K", type=int, default=tolerances.POLYGON_SIDES, help="polygon sides for complex sets")

    p = sub.add_parser("ortho", parents=[common], help="leading coefficients of weighted orthonormal polynomials")
    _problem_flags(p)
    p.add_argument("--degrees", default="4,8")

    p = sub.add_parser("green", parents=[common], help="discrete Green function approximant at probe points")
    _problem_flags(p, resolution=201)
    p.add_argument("--dmax", type=int, default=tolerances.DEFAULT_DMAX)
    p.add_argument("--kind", choices=("weighted", "unweighted"), default="weighted")
    p.add_argument("--probes", default="2", help="points separated by ';', coordinates by ','")

    p = sub.add_parser("bm", parents=[common], help="sup/L2 ratio traces")
    _problem_flags(p, resolution=401)
    p.add_argument("--degrees", default="4,8,16")
    p.add_argument("--family", choices=FAMILIES, default="orthonormal")

    p = sub.add_parser("lift-check", parents=[common], help="sup and L2 identities on the circular lift")
    _problem_flags(p, resolution=41)
    p.add_argument("--dmax", type=int, default=8)
    p.add_argument("--m", type=int, default=None, help="circle points (default 2*dmax+1)")

    p = sub.add_parser("asym", parents=[common], help="leading-coefficient asymptotics")
    _problem_flags(p, resolution=None)
    p.add_argument("--freud", default=None, help="H for the weight exp(-H), e.g. 'x^2'")
    p.add_argument("--theta", default=None)
    p.add_argument("--js", default="4,8,16,32")
    p.add_argument("--nodes", type=int, default=GridSpec.nodes, help="starting Gauss-Legendre nodes per axis")
    p.add_argument("--tail-budget", type=float, default=GridSpec.tail_budget)
    p.add_argument("--radius", type=float, default=None, help="fixed truncation radius")
    p.add_argument("--K", type=int, default=tolerances.POLYGON_SIDES)
    return parser


def read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InputError(f"{path}:{lineno}: expected 'key = value'")
            out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        values = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(values) - known - {"command"}
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.pop("command", None)
        sub.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def manifest(args, extra, elapsed, status, rows):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("manifest",)}
    return {
        "schema": "plurikit-run/1",
        "command": args.command,
        "status": status,
        "config": config,
        "env": {"PLURIKIT_THREADS": os.environ.get("PLURIKIT_THREADS", "0")},
        "tolerances": tolerances.as_dict(),
        "versions": {
            "plurikit": _version(),
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "rows": rows,
        "elapsed_seconds": round(elapsed, 6),
        **extra,
    }


def run(args) -> int:
    t0 = time.perf_counter()
    status, code, extra, text, nrows = "ok", 0, {}, None, 0
    try:
        header, rows, extra = COMMANDS[args.command](args)
        text = table_to_csv(header, rows)
        nrows = len(rows)
    except ConditioningError as exc:
        status, code = "aborted", 3
        extra = {"error": str(exc), "condition_estimate": exc.condition_estimate}
        print(f"plurikit: numerical guard: {exc} (condition_estimate={exc.condition_estimate:.6e})", file=sys.stderr)
    except NumericalGuardError as exc:
        status, code = "aborted", 3
        extra = {"error": str(exc)}
        print(f"plurikit: numerical guard: {exc}", file=sys.stderr)
    except (InputError, OSError) as exc:
        status, code = "input-error", 2
        extra = {"error": str(exc)}
        print(f"plurikit: input error: {exc}", file=sys.stderr)
    if text is not None:
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    path = args.manifest or (args.output + ".json" if args.output else None)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(manifest(args, extra, time.perf_counter() - t0, status, nrows), fh, indent=2, default=str)
            fh.write("\n")
    return code


def main(argv=None) -> int:
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
    except PlurikitError as exc:
        print(f"plurikit: input error: {exc}", file=sys.stderr)
        return 2
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
