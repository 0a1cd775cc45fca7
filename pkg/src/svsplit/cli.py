"""Command line harness.

Every invocation prints exactly one JSON run report to stdout and exits with
0 (all certificates passed), 1 (a mathematical certificate failed), or
2 (bad configuration, unknown input, or malformed request).  Reports are
schema-versioned and deterministic: for a fixed command line, seed, and
tolerance profile the emitted bytes are identical across runs.  Timing is
reported as null unless ``--timing`` is passed, precisely so that the
default output stays reproducible.

CSV payloads (split traces, modulus curves, crease scans) go to ``--out``
when given and are embedded in the report otherwise; either way they can be
read back with :func:`read_csv_table`.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .bodies import (
    ConvexBody,
    VPolytope,
    ball_polytope,
    body_from_json,
    body_to_json,
    disk_polygon,
    minkowski_sum,
    support_point,
    support_value,
)
from .config import Tolerances, active_tolerances
from .errors import ConfigError, SvsplitError, UnknownBody
from .linalg import AffineSubspace, LinearSurjection
from .maps import (
    bundled_pair,
    empirical_modulus,
    intersection_map,
    map_from_json,
    same_domain,
    verify_intersection_modulus,
)
from .metrics import hausdorff_distance
from .polytopes import affine_slice, geometric_difference
from .pset import pset_check
from .selections import chebyshev_center, steiner_point
from .splitting import (
    DEMO_NAMES,
    SplitTrace,
    bundled_split,
    split_strict_sum,
    split_sum,
    split_sum_path,
    split_surjection,
    approx_split,
    sum_hreps,
)
from .zoo import ZOO_NAMES, body_zoo, crease_samples

REPORT_SCHEMA = "svsplit-report/1"

_EXTRA_BODIES = {
    "cube": lambda m: VPolytope(
        [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    ),
    "square": lambda m: VPolytope([[-1, -1], [1, -1], [1, 1], [-1, 1]]),
    "disk": lambda m: disk_polygon((0.0, 0.0), 1.0, 64),
    "icosphere-ball": lambda m: ball_polytope((0.0, 0.0, 0.0), 1.0, level=2),
}


def named_body(name: str, m: int = 360) -> ConvexBody:
    """Bundled body by CLI name: the zoo plus a few plain solids."""
    if name in _EXTRA_BODIES:
        return _EXTRA_BODIES[name](m)
    try:
        return body_zoo(name, m=m)
    except UnknownBody:
        known = sorted((*ZOO_NAMES, *_EXTRA_BODIES))
        raise UnknownBody(f"unknown body {name!r}; known names: {known}") from None


def _body_arg(token: str, m: int) -> ConvexBody:
    if token.endswith(".json") or os.sep in token or os.path.isfile(token):
        return body_from_json(_load_json_file(token))
    return named_body(token, m)


def _load_json_file(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path!r} is not valid JSON: {exc}") from None


def _parse_vector(text: str, label: str) -> np.ndarray:
    try:
        vec = np.array([float(v) for v in text.split(",")], float)
    except ValueError:
        raise ConfigError(f"{label} must be comma separated numbers, got {text!r}") from None
    if vec.size == 0:
        raise ConfigError(f"{label} must not be empty")
    return vec


def _py(obj):
    """Recursively convert numpy scalars and arrays for json emission."""
    if isinstance(obj, np.ndarray):
        return [_py(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    return obj


def _render(report: dict) -> str:
    return json.dumps(_py(report), indent=2, sort_keys=True)


def _emit_csv(args, report: dict, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
        report["results"]["csv_path"] = args.out
    else:
        report["results"]["csv"] = text


def _csv_table(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format(float(v), ".17g") for v in row))
    return "\n".join(lines) + "\n"


def read_csv_table(text: str):
    """Parse a CSV emitted by this module back into (header, float array)."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines:
        raise ConfigError("empty CSV")
    header = tuple(lines[0].split(","))
    try:
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]], float)
    except ValueError:
        raise ConfigError("CSV body contains a non-numeric field") from None
    if data.size and data.shape[1] != len(header):
        raise ConfigError("CSV rows do not match the header width")
    return header, data


def _cert_tolerances(args, t: Tolerances) -> Tolerances:
    return t if args.tol is None else replace(t, membership=args.tol)


# ---------------------------------------------------------------- commands


def cmd_support(args, t, report) -> int:
    body = _body_arg(args.body, args.arc_points or 360)
    d = _parse_vector(args.direction, "--direction")
    report["results"] = {
        "direction": d,
        "value": support_value(body, d),
        "point": support_point(body, d),
    }
    return 0


def cmd_hausdorff(args, t, report) -> int:
    m = args.arc_points or 360
    est = hausdorff_distance(_body_arg(args.body_a, m), _body_arg(args.body_b, m), tol=t)
    report["results"] = {
        "value": est.value,
        "gap": est.gap,
        "exact": est.exact,
        "directions_used": est.directions_used,
    }
    return 0


def cmd_steiner(args, t, report) -> int:
    body = _body_arg(args.body, args.arc_points or 360)
    est = steiner_point(body, samples=args.samples, seed=args.seed, method=args.method)
    report["results"] = {
        "point": est.point,
        "samples_used": est.samples_used,
        "stderr": est.stderr,
    }
    return 0


def cmd_chebyshev(args, t, report) -> int:
    body = _body_arg(args.body, args.arc_points or 360)
    center, radius = chebyshev_center(body, tol=t)
    report["results"] = {"center": center, "radius": radius}
    return 0


def cmd_minkowski(args, t, report) -> int:
    m = args.arc_points or 360
    a, b = _body_arg(args.body_a, m), _body_arg(args.body_b, m)
    if args.op == "sum":
        out = minkowski_sum(a, b)
        report["results"] = {"empty": False, "body": body_to_json(out)}
    else:
        out = geometric_difference(a, b, tol=t)
        report["results"] = {
            "empty": out is None,
            "body": None if out is None else body_to_json(out),
        }
    return 0


def cmd_slice(args, t, report) -> int:
    body = _body_arg(args.body, args.arc_points or 360)
    point = _parse_vector(args.point, "--point")
    dirs = np.stack(
        [_parse_vector(piece, "--dirs") for piece in args.dirs.split(";")], axis=1
    )
    if dirs.shape[0] != point.size:
        raise ConfigError("slice directions and point live in different dimensions")
    q, _ = np.linalg.qr(dirs)  # user directions need not be orthonormal
    out = affine_slice(body, AffineSubspace(point, q), tol=t)
    report["results"] = {
        "empty": out is None,
        "body": None if out is None else body_to_json(out),
        "basis": q,
    }
    return 0


def cmd_pset_check(args, t, report) -> int:
    body = _body_arg(args.body, args.arc_points or 360)
    v = pset_check(body, directions=args.directions, mesh=args.mesh, tol=t)
    report["config"]["resolutions"] = {"mesh": args.mesh, "directions": args.directions}
    report["results"] = {
        "verdict": v.verdict,
        "jump_size": v.jump_size,
        "witness_direction": v.witness_direction,
        "witness_point": v.witness_point,
        "resolution": v.resolution,
    }
    return 0


def cmd_pset_table(args, t, report) -> int:
    rows, bad = [], False
    for name in args.bodies:
        try:
            body = named_body(name, args.arc_points or 360)
        except UnknownBody as exc:
            rows.append({"name": name, "error": str(exc)})
            bad = True
            continue
        v = pset_check(body, tol=t)
        rows.append({"name": name, "verdict": v.verdict, "jump_size": v.jump_size})
    report["results"] = {"rows": rows}
    if bad:
        report["checks"] = {"passed": False, "failures": ["unknown body"]}
        return 2
    return 0


def _require(data: dict, key: str):
    if key not in data:
        raise ConfigError(f"split request missing {key!r}")
    return data[key]


def _request_trace(args, data: dict, t: Tolerances) -> SplitTrace:
    mode = data.get("mode", args.mode)
    if mode != args.mode:
        raise ConfigError(f"request mode {mode!r} does not match subcommand {args.mode!r}")
    epsilon = args.epsilon if args.epsilon is not None else data.get("epsilon")

    if "demo" in data:
        name = data["demo"]
        if name not in DEMO_NAMES:
            raise ConfigError(f"unknown demo {name!r}; known names: {sorted(DEMO_NAMES)}")
        if name.split("_")[0] != args.mode:
            raise ConfigError(f"demo {name!r} does not run in {args.mode!r} mode")
        kwargs = {"n": int(data.get("n", 41)), "m": int(data.get("m", 360)), "tol": t}
        if epsilon is not None:
            kwargs["epsilon"] = float(epsilon)
        return bundled_split(name, **kwargs)

    if args.mode == "sum":
        A = body_from_json(_require(data, "A"), path="$.A")
        B = body_from_json(_require(data, "B"), path="$.B")
        targets = np.asarray(_require(data, "targets"), float)
        return split_sum_path(A, B, targets, tol=t)

    f1 = map_from_json(_require(data, "f1"), path="$.f1")
    f2 = map_from_json(_require(data, "f2"), path="$.f2")
    selection = _require(data, "selection")
    if args.mode == "strict":
        return split_strict_sum(f1, f2, selection, tol=t)
    L = LinearSurjection(_require(data, "L"))
    if args.mode == "surjection":
        return split_surjection(f1, f2, L, selection, tol=t)
    if epsilon is None:
        raise ConfigError("approx mode requires epsilon (flag or request field)")
    return approx_split(f1, f2, L, selection, float(epsilon), tol=t)


def cmd_split(args, t, report) -> int:
    data = _load_json_file(args.request)
    if not isinstance(data, dict):
        raise ConfigError("split request must be a JSON object")
    trace = _request_trace(args, data, t)
    ok = trace.certificates_ok(_cert_tolerances(args, t))
    modulus = None
    if trace.modulus is not None:
        modulus = {format(s, "g"): trace.modulus(s) for s in (0.05, 0.1, 0.2)}
    report["results"] = {
        "mode": trace.mode,
        "samples": len(trace.results),
        "max_residual": trace.max_residual,
        "max_slack": trace.max_slack,
        "hypotheses": trace.hypotheses,
        "output_modulus": modulus,
    }
    _emit_csv(args, report, trace.to_csv())
    report["checks"] = {"passed": ok, "failures": [] if ok else ["certificates"]}
    return 0 if ok else 1


def cmd_modulus(args, t, report) -> int:
    if len(args.maps) == 1:
        f1, f2 = bundled_pair(args.maps[0], n=args.n)
        source = {"pair": args.maps[0], "n": args.n}
    elif len(args.maps) == 2:
        f1 = map_from_json(_load_json_file(args.maps[0]), path=args.maps[0])
        f2 = map_from_json(_load_json_file(args.maps[1]), path=args.maps[1])
        source = {"files": list(args.maps)}
    else:
        raise ConfigError("modulus takes one bundled pair name or two map files")
    if not same_domain(f1, f2):
        raise ConfigError("maps must share their parameter grid")
    rep = verify_intersection_modulus(f1, f2, segments=args.segments, tol=t)

    w1 = empirical_modulus(f1, tol=t)
    w2 = empirical_modulus(f2, tol=t)
    wg = None
    if rep.applicable:
        wg = empirical_modulus(intersection_map(f1, f2, segments=args.segments, tol=t), tol=t)
    dist = f1.pair_distances()
    iu, ju = np.triu_indices(len(f1), k=1)
    rows = []
    for tk in np.unique(np.round(dist[iu, ju], 12)):
        o1, o2 = w1(tk), w2(tk)
        if rep.applicable:
            bound = max(o1, o2) + rep.alpha * (o1 + o2) + rep.tolerance
            og = wg(tk)
            flag = 1.0 if og > bound else 0.0
        else:
            bound, og, flag = math.inf, math.nan, 0.0
        rows.append((tk, o1, o2, og, bound, flag))
    csv = _csv_table(("t", "omega_f1", "omega_f2", "omega_g", "bound", "violation"), rows)

    report["config"]["resolutions"] = {"segments": args.segments}
    report["results"] = {"source": source, **rep.to_dict()}
    _emit_csv(args, report, csv)
    ok = len(rep.violations) == 0
    report["checks"] = {"passed": ok, "failures": [] if ok else ["modulus bound"]}
    return 0 if ok else 1


def cmd_example11(args, t, report) -> int:
    ap = args.arc_points or 720
    if ap < 36:
        raise ConfigError(f"arc points must be at least 36, got {ap}")
    if ap % 2:
        raise ConfigError("arc points must be even")
    deltas = [float(v) for v in _parse_vector(args.deltas, "--deltas")]
    for d in deltas:
        if not 0.0 < d < math.pi / 2:
            raise ConfigError(f"delta {d} outside (0, pi/2)")
    deltas = sorted(deltas, reverse=True)

    def even(v: int) -> int:
        return v + v % 2

    levels = sorted({even(max(36, ap // 4)), even(max(36, ap // 2)), ap})
    refinement, gap_rows, csv_rows = [], [], []
    for m in levels:
        A, B = body_zoo("example11_A", m=m), body_zoo("example11_B", m=m)
        hreps = sum_hreps(A, B, t)
        for d in deltas:
            ts, cs = crease_samples(m, [d, -d])
            a_plus = split_sum(A, B, cs[0], tol=t, hreps=hreps).f1
            a_minus = split_sum(A, B, cs[1], tol=t, hreps=hreps).f1
            gap = float(np.linalg.norm(a_plus - a_minus))
            refinement.append({"arc_points": m, "delta": d, "gap": gap})
            if m == ap:
                gap_rows.append(
                    {
                        "delta": d,
                        "snapped": (float(ts[0]), float(ts[1])),
                        "gap": gap,
                        "a_plus": a_plus,
                        "a_minus": a_minus,
                    }
                )
                csv_rows.append((ts[1], *a_minus))
                csv_rows.append((ts[0], *a_plus))

    gaps = [row["gap"] for row in gap_rows]
    if len(deltas) >= 2:
        d1, d2 = deltas[-2], deltas[-1]  # two smallest
        g1, g2 = gaps[-2], gaps[-1]
        slope = (g1 - g2) / (d1 - d2)
        jump = g2 - slope * d2
    else:
        jump = gaps[0]

    csv_rows.sort(key=lambda r: r[0])
    report["config"]["resolutions"] = {"arc_points": ap, "deltas": deltas}
    report["results"] = {
        "gap_table": gap_rows,
        "extrapolated_jump": jump,
        "refinement_table": refinement,
    }
    _emit_csv(args, report, _csv_table(("t", "a_0", "a_1", "a_2"), csv_rows))
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="certificate tolerance override")
    common.add_argument("--arc-points", type=int, default=None, dest="arc_points")
    common.add_argument("--epsilon", type=float, default=None)
    common.add_argument("--out", default=None, help="write the CSV payload to this path")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte identity)")

    p = argparse.ArgumentParser(prog="svsplit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("support", parents=[common], help="support value and point")
    sp.add_argument("body")
    sp.add_argument("--direction", "-d", required=True)
    sp.set_defaults(func=cmd_support)

    sp = sub.add_parser("hausdorff", parents=[common], help="Hausdorff distance")
    sp.add_argument("body_a")
    sp.add_argument("body_b")
    sp.set_defaults(func=cmd_hausdorff)

    sp = sub.add_parser("steiner", parents=[common], help="Steiner point")
    sp.add_argument("body")
    sp.add_argument("--samples", type=int, default=20_000)
    sp.add_argument("--method", choices=("auto", "exact", "mc"), default="auto")
    sp.set_defaults(func=cmd_steiner)

    sp = sub.add_parser("chebyshev", parents=[common], help="Chebyshev center")
    sp.add_argument("body")
    sp.set_defaults(func=cmd_chebyshev)

    sp = sub.add_parser("minkowski", parents=[common], help="vector sum or erosion")
    sp.add_argument("op", choices=("sum", "diff"))
    sp.add_argument("body_a")
    sp.add_argument("body_b")
    sp.set_defaults(func=cmd_minkowski)

    sp = sub.add_parser("slice", parents=[common], help="affine slice in subspace coordinates")
    sp.add_argument("body")
    sp.add_argument("--point", required=True)
    sp.add_argument("--dirs", required=True, help="';' separated direction vectors")
    sp.set_defaults(func=cmd_slice)

    sp = sub.add_parser("pset-check", parents=[common], help="lower-height continuity verdict")
    sp.add_argument("body")
    sp.add_argument("--mesh", type=float, default=0.0125)
    sp.add_argument("--directions", type=int, default=None)
    sp.set_defaults(func=cmd_pset_check)

    sp = sub.add_parser("pset-table", parents=[common], help="verdicts for a list of bodies")
    sp.add_argument("bodies", nargs="*")
    sp.set_defaults(func=cmd_pset_table)

    sp = sub.add_parser("split", parents=[common], help="run a splitting request")
    sp.add_argument("mode", choices=("sum", "strict", "surjection", "approx"))
    sp.add_argument("request", help="request JSON file")
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("modulus", parents=[common], help="intersection modulus bound check")
    sp.add_argument("maps", nargs="+", help="bundled pair name, or two map JSON files")
    sp.add_argument("--n", type=int, default=101)
    sp.add_argument("--segments", type=int, default=64)
    sp.set_defaults(func=cmd_modulus)

    sp = sub.add_parser("example11", parents=[common], help="crease gap scan of the counter-arc sum")
    sp.add_argument("--deltas", default="0.05,0.02,0.01")
    sp.set_defaults(func=cmd_example11)

    return p


def _record_error(report: dict, exc: SvsplitError) -> None:
    entry = {"type": type(exc).__name__, "message": str(exc.args[0]) if exc.args else ""}
    if len(exc.args) > 1:
        entry["data"] = _py(exc.args[1])
    report["error"] = entry
    report["checks"] = {"passed": False, "failures": [type(exc).__name__]}


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    report = {
        "schema": REPORT_SCHEMA,
        "command": argv,
        "config": {
            "seed": args.seed,
            "tol_profile": os.environ.get("SVSPLIT_TOL_PROFILE", "default"),
            "certificate_tol": args.tol,
            "resolutions": {},
        },
        "results": {},
        "checks": {"passed": True, "failures": []},
        "timing": None,
    }
    try:
        t = active_tolerances()
        code = args.func(args, t, report)
    except (ConfigError, UnknownBody) as exc:
        _record_error(report, exc)
        code = 2
    except ValueError as exc:  # profile names, resolutions, malformed vectors
        _record_error(report, ConfigError(str(exc)))
        code = 2
    except SvsplitError as exc:
        _record_error(report, exc)
        code = 1
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    print(_render(report))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
