"""Command-line front end.

Exit status: 0 when every requested integral converged, 2 when a
divergence was diagnosed (or an integral failed to converge), 1 on
malformed input or validation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import functionals as fn
from .errors import OdeSurfaceError
from .odecurve import curve_from_json
from .quadrature import QuadConfig
from .surface import EDGES, surface_from_json
from .tables import TABLE_IDS, reproduce

SIG_DIGITS = 9


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"UsageError: {message}")


def _round(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.{SIG_DIGITS}g}") if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


def _load_spec(text: str):
    src = text.strip()
    if not src.startswith("{"):
        path = Path(text)
        if not path.is_file():
            raise CliError(f"SpecError: {text!r} is neither inline JSON nor a file")
        src = path.read_text()
    try:
        return json.loads(src)
    except json.JSONDecodeError as exc:
        raise CliError(f"JSONDecodeError: {exc}") from exc


def _config(args) -> QuadConfig:
    kw = {"threads": args.threads}
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    if args.abs_tol is not None:
        kw["abs_tol"] = args.abs_tol
    if args.max_half_width is not None:
        kw["max_half_width"] = args.max_half_width
        kw["initial_half_width"] = min(QuadConfig.initial_half_width, args.max_half_width)
    return QuadConfig(**kw)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--rel-tol", type=float)
    common.add_argument("--abs-tol", type=float)
    common.add_argument("--max-half-width", type=float)
    common.add_argument("--format", choices=("json", "csv"), help="default: csv for reproduce, json otherwise")
    common.add_argument("--out")
    common.add_argument("--threads", type=int, default=1)

    p = _Parser(prog="odesurface", description="Curvature integrals of ODE curves and tensor surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("curve-kappa", parents=[common], help="total first curvature of a curve")
    c.add_argument("spec")
    c = sub.add_parser("curve-theta", parents=[common], help="total signed second curvature of a curve")
    c.add_argument("spec")
    c.add_argument("--absolute", action="store_true")
    c = sub.add_parser("surface-gauss", parents=[common], help="total Gauss curvature of a surface")
    c.add_argument("spec")
    c.add_argument("--absolute", action="store_true")
    c = sub.add_parser("gauss-bonnet", parents=[common], help="Gauss-Bonnet residual of a surface")
    c.add_argument("spec")
    c = sub.add_parser("mean-lp", parents=[common], help="L^p diagnostic of the mean curvature")
    c.add_argument("spec")
    c.add_argument("--p", type=float, default=3.0)
    c = sub.add_parser("boundary-limit", parents=[common], help="edge geodesic curvature integrals")
    c.add_argument("spec")
    c.add_argument("--radii", default="4,6,8")
    c.add_argument("--edges", default=",".join(EDGES))
    c = sub.add_parser("reproduce", parents=[common], help="reproduce a reference table")
    c.add_argument("table", choices=TABLE_IDS)
    return p


def _status(converged: bool) -> int:
    return 0 if converged else 2


def _result_job(name, spec_json, res):
    body = {"command": name, "spec": spec_json}
    body.update(fn.result_to_dict(res))
    return body, _status(res.converged)


def run(args) -> tuple[object, int]:
    """Execute one parsed job; returns ``(report, exit_status)``."""
    cfg = _config(args)
    cmd = args.command
    if cmd == "reproduce":
        rows = reproduce(args.table, cfg)
        ok = all(r.get("converged", r.get("match", True)) for r in rows)
        return rows, 0 if ok else 2
    spec_json = _load_spec(args.spec)
    if cmd in ("curve-kappa", "curve-theta"):
        curve = curve_from_json(spec_json)
        if cmd == "curve-kappa":
            return _result_job(cmd, spec_json, fn.kappa_total(curve, cfg))
        total = fn.abs_theta_total if args.absolute else fn.theta_total
        return _result_job(cmd, spec_json, total(curve, cfg))
    surf = surface_from_json(spec_json)
    if cmd == "surface-gauss":
        return _result_job(cmd, spec_json, fn.gauss_total(surf, cfg, absolute=args.absolute))
    if cmd == "gauss-bonnet":
        rep = fn.gauss_bonnet_check(surf, cfg)
        body = {"command": cmd, "spec": spec_json}
        body.update(rep.to_dict())
        return body, _status(rep.converged)
    if cmd == "mean-lp":
        diag = fn.mean_curvature_lp(surf, args.p, cfg)
        body = {"command": cmd, "spec": spec_json}
        body.update(diag.to_dict())
        return body, {"convergent": 0, "divergent": 2}.get(diag.verdict, 2)
    if cmd == "boundary-limit":
        try:
            radii = [float(r) for r in args.radii.split(",") if r.strip()]
        except ValueError as exc:
            raise CliError(f"UsageError: bad --radii: {exc}") from exc
        edges = tuple(e.strip() for e in args.edges.split(",") if e.strip())
        rows = fn.boundary_limit_check(surf, cfg, radii, edges)
        return [r.to_dict() for r in rows], 0
    raise CliError(f"UsageError: unknown command {cmd!r}")


def render(report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_round(report), indent=2) + "\n"
    rows = report if isinstance(report, list) else [
        {k: v for k, v in report.items() if not isinstance(v, (dict, list))}
    ]
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_cell(v) for v in r.values()])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report, status = run(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except OdeSurfaceError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    fmt = args.format or ("csv" if args.command == "reproduce" else "json")
    text = render(report, fmt)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
