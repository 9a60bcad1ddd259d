"""Command-line front end.

Subcommands:
  solve       solve the disk Dirichlet problem from a boundary file
  metric      evaluate family metric components at sample points (CSV)
  verify      run a verification suite (ricci | background | kerr-match |
              schwarzschild-analog | nogo | pde)
  invariants  Kretschmann / Ricci-norm CSV at sample points

Exit codes: 0 success/pass, 1 verification failure, 2 configuration or
precondition error, 3 solver failure.  Outputs are byte-deterministic for
a fixed config and seed; KERRFORGE_THREADS caps point-loop parallelism
without affecting output order.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .disksolve import fd_elliptic_solve, grid_pde_residual
from .errors import ConfigError, DegeneracyError, DomainError, KerrforgeError, \
    SignConditionError, SolverError
from .geometry import ChartPoint, MetricConfig, assemble_metric, family_metric_field
from .potentials import read_boundary_file
from .sampling import chart_samples, sphere_samples
from .tensor import ricci_coordinate_fd
from .util import format_float, parallel_map, write_csv
from .verification import (
    nogo_discriminant,
    verify_background_flat,
    verify_kerr_match,
    verify_pde,
    verify_ricci_flat,
    verify_schwarzschild_analog,
)

_SUITES = ("ricci", "background", "kerr-match", "schwarzschild-analog", "nogo", "pde")


def _build_parser():
    p = argparse.ArgumentParser(prog="kerrforge", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to a key=value config file")
    common.add_argument("--out", default=None, help="output file path")
    common.add_argument("--tol", type=float, default=None, help="override tolerance")
    common.add_argument("--fd-step", type=float, default=None, help="override FD step")
    common.add_argument("--seed", type=int, default=None, help="override sample seed")

    sub.add_parser("solve", parents=[common], help="solve the disk boundary problem")
    sub.add_parser("metric", parents=[common], help="metric components CSV")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=_SUITES)
    sub.add_parser("invariants", parents=[common], help="curvature invariants CSV")
    return p


def _overrides(cfg, args):
    if args.tol is not None:
        cfg.raw["tol"] = repr(args.tol)
    if args.fd_step is not None:
        cfg.raw["fd-step"] = repr(args.fd_step)
    if args.seed is not None:
        cfg.raw["seed"] = repr(args.seed)


def _family_config(cfg, k=None):
    ks = cfg.k_values() if k is None else [k]
    return MetricConfig(kappa=cfg.kappa, B=cfg.B, m=cfg.m, k=ks[0], potential=cfg.potential())


def _sample_points(cfg):
    pts = cfg.explicit_points()
    if pts is not None:
        return pts
    return chart_samples(cfg.potential(), cfg.sample_count, cfg.seed)


def cmd_solve(cfg, args):
    if cfg.raw.get("potential") != "boundary-file":
        raise ConfigError("solve requires potential = boundary-file")
    w, vals = read_boundary_file(cfg._path("boundary-file"))
    grid = fd_elliptic_solve(cfg.kappa, (w, vals),
                             (cfg._int("n-r", 64), cfg._int("n-theta", 128)),
                             radius=cfg._float("radius", 0.5))
    residual = grid_pde_residual(grid)
    out = args.out or cfg.raw.get("out", "solve_grid.txt")
    grid.save(out)
    tol = cfg._float("tol", 1e-2)
    print(f"max_pde_residual={format_float(residual)}")
    print(f"grid_file={out}")
    return 0 if residual <= tol else 1


def cmd_metric(cfg, args):
    family = _family_config(cfg)
    pts = _sample_points(cfg)
    rows = []
    for p in pts:
        try:
            mp = assemble_metric(family, ChartPoint(*[float(c) for c in p]))
        except (DomainError, DegeneracyError) as exc:
            print(f"warning: skipping point {tuple(p)}: {exc}", file=sys.stderr)
            continue
        upper = [mp.g[i, j] for i in range(4) for j in range(i, 4)]
        rows.append((*p, *upper))
    if not rows:
        print("error: no admissible points", file=sys.stderr)
        return 2
    header = ["x", "y", "v", "r"] + [f"g{i}{j}" for i in range(4) for j in range(i, 4)]
    out = args.out or cfg.raw.get("out", "metric.csv")
    write_csv(out, header, rows)
    print(f"rows={len(rows)} out={out}")
    return 0


def cmd_invariants(cfg, args):
    family = _family_config(cfg)
    metric = family_metric_field(family)
    pts = _sample_points(cfg)
    h = cfg.fd_step

    def one(p):
        rep = ricci_coordinate_fd(metric, p, h)
        return (*p, rep.kretschmann, rep.ricci_norm)

    rows = parallel_map(one, pts)
    out = args.out or cfg.raw.get("out", "invariants.csv")
    write_csv(out, ["x", "y", "v", "r", "kretschmann", "ricci_norm"], rows)
    print(f"rows={len(rows)} out={out}")
    return 0


def _emit_reports(reports, out_base):
    for rep in reports:
        print(rep.json_record())
    if out_base:
        with open(out_base, "w") as fh:
            for rep in reports:
                fh.write(rep.json_record() + "\n")
        csv_path = out_base.rsplit(".", 1)[0] + ".residuals.csv"
        rows = [row for rep in reports for row in rep.csv_rows()]
        write_csv(csv_path, ["check", "x", "y", "v", "r", "residual"], rows)


def cmd_verify(cfg, args):
    suite = args.suite
    tol = cfg.tol
    h = cfg.fd_step
    reports = []
    if suite == "nogo":
        table = [(n, nogo_discriminant(n)) for n in range(4, 17)]
        for n, d in table:
            print(f"D({n}) = {d}")
        ok = all((d == 0) == (n == 4) for n, d in table) and \
            all((nogo_discriminant(n) == 0) == (n == 4) for n in range(4, 65))
        print(f"nogo_pass={ok}")
        return 0 if ok else 1
    if suite == "pde":
        reports.append(verify_pde(cfg.potential(), tol=cfg._float("tol", 1e-8)))
    elif suite == "ricci":
        for k in cfg.k_values():
            family = MetricConfig(kappa=cfg.kappa, B=cfg.B, m=cfg.m, k=k,
                                  potential=cfg.potential())
            pts = _sample_points(cfg)
            reports.append(verify_ricci_flat(family, pts, tol=tol, fd_step=h))
    elif suite == "background":
        family = MetricConfig(kappa=cfg.kappa, B=cfg.B, m=0.0, k=cfg.k_values()[0],
                              potential=cfg.potential())
        if cfg.m != 0.0:
            raise ConfigError("background suite requires m = 0")
        pts = _sample_points(cfg)
        reports.append(verify_background_flat(family, pts, tol=tol, fd_step=h))
    elif suite == "kerr-match":
        a = cfg._float("a")
        lo = cfg._float("r-min", 1.5)
        hi = cfg._float("r-max", 6.0)
        sph = sphere_samples(cfg.sample_count, cfg.seed, rho_band=(lo, hi))
        reports.append(verify_kerr_match(cfg.m, a, sph, tol=cfg._float("tol", 1e-4),
                                         fd_step=h))
    elif suite == "schwarzschild-analog":
        lo = cfg._float("r-min", 2.0)
        hi = cfg._float("r-max", 10.0)
        sph = sphere_samples(cfg.sample_count, cfg.seed, rho_band=(lo, hi))
        reports.append(verify_schwarzschild_analog(cfg.m, sph, tol=tol, fd_step=h))
    _emit_reports(reports, args.out or cfg.raw.get("out"))
    return 0 if all(r.passed for r in reports) else 1


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        _overrides(cfg, args)
        if args.command == "solve":
            return cmd_solve(cfg, args)
        if args.command == "metric":
            return cmd_metric(cfg, args)
        if args.command == "invariants":
            return cmd_invariants(cfg, args)
        return cmd_verify(cfg, args)
    except (ConfigError, SignConditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except (OSError, KerrforgeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
