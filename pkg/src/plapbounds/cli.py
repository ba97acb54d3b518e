"""Command-line surface: domain file ingestion, bound computation, oracle
runs, soundness verification, annulus eigenvalue tables, and CSV emission.

Domain files are JSON with fields ``name``, ``p``, ``d`` (default 2),
``vertices`` ([[x, y], ...]), ``labels`` (["D"/"N", ...], one per edge), and
optional ``normals`` and ``origin``.

Exit codes: 0 success (or verification PASS), 1 input or infrastructure
error, 2 soundness violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import bounds, oracle
from .errors import BracketError, ConvergenceError
from .geometry import Domain, validate_domain
from .one_dim import (Arrangement, Exponent, RadialEigenProblem,
                      radial_eigenvalue, radial_fd_oracle)

# relative half-width of the oracle tolerance band used by `verify`
DEFAULT_BAND = 0.02


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class DomainFile:
    name: str
    p: float
    d: int
    domain: Domain


@dataclass
class RunConfig:
    grid_h: float = 1.0 / 128
    n_angles: int = 720
    n_boundary_samples: int = 2048
    admissibility_tol: float = 1e-9
    gamma_steps: int = 65
    csv: bool = False

    def __post_init__(self):
        for name in ("grid_h", "n_angles", "n_boundary_samples",
                     "admissibility_tol", "gamma_steps"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name} must be positive")


def load_domain_file(path: str) -> DomainFile:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    for key in ("name", "p", "vertices", "labels"):
        if key not in raw:
            raise ValueError(f"domain file is missing the field {key!r}")
    p = float(raw["p"])
    if not (1.0 < p < math.inf):
        raise ValueError(f"exponent p must satisfy 1 < p < infinity, got {p}")
    d = int(raw.get("d", 2))
    domain = validate_domain(raw["vertices"], raw["labels"],
                             normals=raw.get("normals"), origin=raw.get("origin"))
    return DomainFile(name=str(raw["name"]), p=p, d=d, domain=domain)


def save_domain_file(path: str, name: str, p: float, domain: Domain, d: int = 2) -> None:
    data = {
        "name": name,
        "p": p,
        "d": d,
        "vertices": [[float(x), float(y)] for x, y in domain.vertices],
        "labels": domain.edge_labels(),
    }
    if domain.normals is not None:
        data["normals"] = [[float(x), float(y)] for x, y in domain.normals]
    if domain.origin_hint is not None:
        data["origin"] = [float(domain.origin_hint[0]), float(domain.origin_hint[1])]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def _fmt(x, digits: int) -> str:
    if x is None:
        return ""
    return f"{x:.{digits}g}"


def _params_cell(cert: bounds.BoundCertificate, digits: int) -> str:
    return ";".join(f"{k}={_fmt(v, digits)}" for k, v in sorted(cert.parameters.items()))


def _cert_csv_rows(certs) -> list[str]:
    rows = ["method,value,applicable,params,witness_x,witness_y"]
    for c in certs:
        wx, wy = ("", "") if c.infimum_witness is None else (
            _fmt(c.infimum_witness[0], 10), _fmt(c.infimum_witness[1], 10))
        rows.append(",".join([c.method, _fmt(c.value, 10),
                              "true" if c.applicable else "false",
                              _params_cell(c, 10), wx, wy]))
    return rows


def _cert_table(certs) -> list[str]:
    rows = [f"{'method':<12} {'value':<14} {'details'}"]
    for c in certs:
        if c.applicable:
            val = _fmt(c.value, 6)
        else:
            fail = c.admissibility.first_failure()
            val = f"INAPPLICABLE({fail.name if fail else 'unknown'})"
        detail = _params_cell(c, 6)
        if c.infimum_witness is not None:
            detail += f" witness=({_fmt(c.infimum_witness[0], 6)},{_fmt(c.infimum_witness[1], 6)})"
        rows.append(f"{c.method:<12} {val:<14} {detail}")
    return rows


def _emit(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_bounds(df: DomainFile, cfg: RunConfig):
    return bounds.best_bound(df.domain, Exponent(df.p), d=df.d, grid_h=cfg.grid_h,
                             n_angles=cfg.n_angles,
                             n_boundary_samples=cfg.n_boundary_samples,
                             tol=cfg.admissibility_tol, gamma_steps=cfg.gamma_steps)


def _oracle_estimate(df: DomainFile, cfg: RunConfig):
    grid = oracle.build_grid(df.domain, cfg.grid_h)
    if df.p == 2.0:
        res = oracle.laplace_eigen_p2(grid)
        return grid, res.value, res, None
    est = oracle.rayleigh_minimize_p(grid, Exponent(df.p))
    return grid, est.value, None, est


def cmd_bound(args) -> int:
    df = load_domain_file(args.domain_file)
    cfg = _config_from(args)
    certs = _run_bounds(df, cfg)
    header = f"# domain {df.name}: p={_fmt(df.p, 6)} d={df.d} h={_fmt(cfg.grid_h, 6)}"
    lines = _cert_csv_rows(certs) if cfg.csv else [header] + _cert_table(certs)
    _emit(lines, args.out)
    return 0


def cmd_oracle(args) -> int:
    df = load_domain_file(args.domain_file)
    cfg = _config_from(args)
    grid = oracle.build_grid(df.domain, cfg.grid_h)
    rows = []
    field = None
    if df.p == 2.0:
        res = oracle.laplace_eigen_p2(grid)
        rows.append(("inverse-power", res.value, res.n_iterations, res.residual,
                     res.warning or ""))
        field = res.field
        est = oracle.rayleigh_minimize_p(grid, Exponent(df.p))
        rows.append(("rayleigh-descent", est.value, est.n_iterations, "", ""))
    else:
        est = oracle.rayleigh_minimize_p(grid, Exponent(df.p))
        rows.append(("rayleigh-descent", est.value, est.n_iterations, "", ""))
        field = est.field
    digits = 10 if cfg.csv else 6
    lines = ["solver,lambda,grid_h,iterations,residual,note"] if cfg.csv else [
        f"# domain {df.name}: p={_fmt(df.p, 6)} d={df.d} h={_fmt(cfg.grid_h, 6)}"]
    for solver, lam, iters, resid, note in rows:
        if cfg.csv:
            lines.append(",".join([solver, _fmt(lam, 10), _fmt(cfg.grid_h, 10),
                                   str(iters), _fmt(resid, 10) if resid != "" else "",
                                   note]))
        else:
            txt = f"{solver:<18} lambda={_fmt(lam, digits):<14} iterations={iters}"
            if resid != "":
                txt += f" residual={_fmt(resid, 3)}"
            if note:
                txt += f" note={note}"
            lines.append(txt)
    _emit(lines, args.out)
    if args.u1_out and field is not None:
        rows_u = ["x,y,value"]
        for (x, y), v in zip(field.grid.xy, field.values):
            rows_u.append(f"{x:.10g},{y:.10g},{v:.10g}")
        _emit(rows_u, args.u1_out)
    return 0


def cmd_verify(args) -> int:
    df = load_domain_file(args.domain_file)
    cfg = _config_from(args)
    certs = _run_bounds(df, cfg)
    _, estimate, _, _ = _oracle_estimate(df, cfg)
    band = args.band * abs(estimate)
    threshold = estimate + 3.0 * band
    violations = 0
    lines = [f"# domain {df.name}: p={_fmt(df.p, 6)} d={df.d} "
             f"oracle={_fmt(estimate, 6)} threshold={_fmt(threshold, 6)}"]
    for c in certs:
        if not c.applicable:
            fail = c.admissibility.first_failure()
            lines.append(f"{c.method:<12} INAPPLICABLE({fail.name if fail else 'unknown'})")
            continue
        value = c.value * args.corrupt
        ok = value <= threshold
        if not ok:
            violations += 1
        lines.append(f"{c.method:<12} {_fmt(value, 6):<14} "
                     f"{'OK' if ok else 'VIOLATION'}")
    lines.append(f"{'PASS' if violations == 0 else f'FAIL ({violations} violations)'}")
    _emit(lines, args.out)
    return 0 if violations == 0 else 2


def cmd_annulus(args) -> int:
    arrangement = Arrangement(args.arrangement)
    p = Exponent(args.p)
    if args.sweep:
        try:
            lo_s, hi_s, n_s = args.sweep.split(":")
            lo, hi, n = float(lo_s), float(hi_s), int(n_s)
        except ValueError as err:
            raise UsageError(f"bad --sweep spec {args.sweep!r} (want LO:HI:N)") from err
        outer_values = np.linspace(lo, hi, n)
    else:
        outer_values = [args.R]
    lines = ["r,R,p,d,arrangement,value,residual,fd_value,fd_rel_gap"] if args.csv else []
    for r_out in outer_values:
        problem = RadialEigenProblem(args.r, float(r_out), p, args.d, arrangement)
        result = radial_eigenvalue(problem, tol=args.tol, mesh_size=args.mesh)
        fd_val, gap = "", ""
        if p.p == 2.0:
            fd = radial_fd_oracle(problem, mesh_size=args.mesh)
            fd_val = fd
            gap = abs(result.eigenvalue - fd) / result.eigenvalue
        if args.csv:
            lines.append(",".join([_fmt(args.r, 10), _fmt(float(r_out), 10),
                                   _fmt(p.p, 10), str(args.d), arrangement.value,
                                   _fmt(result.eigenvalue, 10),
                                   _fmt(result.shooting_residual, 10),
                                   _fmt(fd_val, 10) if fd_val != "" else "",
                                   _fmt(gap, 10) if gap != "" else ""]))
        else:
            line = (f"annulus r={_fmt(args.r, 6)} R={_fmt(float(r_out), 6)} "
                    f"p={_fmt(p.p, 6)} d={args.d} {arrangement.value}: "
                    f"value={_fmt(result.eigenvalue, 6)} "
                    f"residual={_fmt(result.shooting_residual, 3)} mesh={args.mesh}")
            if fd_val != "":
                line += f" fd={_fmt(fd_val, 6)} gap={_fmt(gap, 3)}"
            lines.append(line)
    _emit(lines, args.out)
    return 0


def cmd_mfield(args) -> int:
    df = load_domain_file(args.domain_file)
    cfg = _config_from(args)
    grid = oracle.build_grid(df.domain, cfg.grid_h)
    weights = bounds.hardy_weight_field(df.domain, grid, Exponent(df.p), cfg.n_angles)
    pts = grid.xy[grid.interior_mask]
    lines = ["x,y,weight"]
    for (x, y), w in zip(pts, weights):
        lines.append(f"{x:.10g},{y:.10g},{w:.10g}")
    _emit(lines, args.out)
    return 0


def _config_from(args) -> RunConfig:
    return RunConfig(grid_h=args.grid_h, n_angles=args.angles,
                     n_boundary_samples=args.boundary_samples,
                     admissibility_tol=args.tol, gamma_steps=args.gamma_steps,
                     csv=args.csv)


def _add_common(sub, with_gamma: bool = True):
    sub.add_argument("--grid-h", dest="grid_h", type=float, default=1.0 / 128,
                     help="grid spacing (default 1/128)")
    sub.add_argument("--angles", type=int, default=720,
                     help="angular quadrature directions (default 720)")
    sub.add_argument("--boundary-samples", dest="boundary_samples", type=int,
                     default=2048, help="boundary sample count (default 2048)")
    sub.add_argument("--tol", type=float, default=1e-9,
                     help="admissibility tolerance (default 1e-9)")
    sub.add_argument("--gamma-steps", dest="gamma_steps", type=int, default=65,
                     help="gamma grid size for the mixed bound (default 65)")
    sub.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
    sub.add_argument("--out", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plapbounds",
                     description="Geometric lower bounds for the fundamental "
                                 "p-Laplacian eigenvalue, with verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="compute all bound certificates for a domain file")
    b.add_argument("domain_file")
    _add_common(b)
    b.set_defaults(func=cmd_bound)

    o = sub.add_parser("oracle", help="numerical eigenvalue estimate for a domain file")
    o.add_argument("domain_file")
    _add_common(o)
    o.add_argument("--u1-out", dest="u1_out", default=None,
                   help="write the eigenfunction as CSV (x,y,value)")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="check every applicable bound against the oracle")
    v.add_argument("domain_file")
    _add_common(v)
    v.add_argument("--band", type=float, default=DEFAULT_BAND,
                   help="relative oracle tolerance band (default 0.02; "
                          "pass threshold is estimate + 3*band*estimate)")
    v.add_argument("--corrupt", type=float, default=1.0, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("annulus", help="radial annulus eigenvalue (shooting)")
    a.add_argument("r", type=float, help="inner radius")
    a.add_argument("R", type=float, help="outer radius")
    a.add_argument("--p", type=float, default=2.0)
    a.add_argument("--d", type=int, default=2)
    a.add_argument("--arrangement", choices=[x.value for x in Arrangement],
                   default="nd",
                   help="nd: Neumann inner/Dirichlet outer; dn: the reverse; "
                        "dd: Dirichlet both; interval: unit interval mixed")
    a.add_argument("--tol", type=float, default=1e-9)
    a.add_argument("--mesh", type=int, default=4096, help="shooting mesh size")
    a.add_argument("--sweep", default=None,
                   help="sweep the outer radius: LO:HI:N (CSV friendly)")
    a.add_argument("--csv", action="store_true")
    a.add_argument("--out", default=None)
    a.set_defaults(func=cmd_annulus)

    m = sub.add_parser("mfield", help="export the averaged-distance weight field as CSV")
    m.add_argument("domain_file")
    _add_common(m)
    m.set_defaults(func=cmd_mfield)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, ValueError, KeyError,
            BracketError, ConvergenceError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
