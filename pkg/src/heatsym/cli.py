"""Command-line driver for the verification suites.

Subcommands run the report paths (level-radius sweep, sphere-convolution
eigenvalue table, symmetry scenarios, boundary geometry) and the full
acceptance matrix.  Tables go to stdout or to ``--out`` in CSV or JSON;
``--plot`` additionally saves one PNG next to the table.  Exit codes are
a stable contract: 0 pass, 1 check failure, 2 structural error, 64 usage
error.

Commands run serially; row order always follows input order.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import acceptance, config, counterexample, harmonics, heat, profiles
from . import report, symmetry
from .errors import EvaluationError, StructureError

__all__ = ["RunConfig", "build_parser", "main"]

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_STRUCTURE = 2
EXIT_USAGE = 64

_SCENARIOS = ("radial-1d", "asymmetric-1d", "radial-3d", "perturbed-3d")
_SHAPES = ("circle", "ellipse", "sphere", "ellipsoid")


@dataclass(frozen=True)
class RunConfig:
    """Validated bundle of everything one command run needs."""

    command: str
    fmt: str = "csv"
    out: str | None = None
    plot: bool = False
    a: float = 1.0
    R: float = 1.0
    b: float = 2.0
    t_values: tuple[float, ...] = ()
    N: int = 3
    k_values: tuple[int, ...] = ()
    L_values: tuple[float, ...] = ()
    tol: float = 1e-12
    seed: int = config.DEFAULT_SEED
    scenario: str | None = None
    shape: str | None = None
    axes: tuple[float, ...] = ()
    noise: float = 0.0
    tol_scale: float = 1.0
    list_only: bool = False

    def __post_init__(self):
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.fmt!r}")
        if not self.tol > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if not self.tol_scale > 0.0:
            raise ValueError(
                f"tolerance scale must be positive, got {self.tol_scale}")
        if not self.a > 0.0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not self.R > 0.0:
            raise ValueError(f"R must be positive, got {self.R}")
        if self.noise < 0.0:
            raise ValueError(f"noise must be nonnegative, got {self.noise}")
        if self.N not in (2, 3):
            raise ValueError(f"N must be 2 or 3, got {self.N}")
        for t in self.t_values:
            if not t > 0.0:
                raise ValueError(f"times must be positive, got {t}")
        if any(b <= a for a, b in zip(self.t_values, self.t_values[1:])):
            raise ValueError(f"t grid must be strictly increasing: "
                             f"{self.t_values}")
        for k in self.k_values:
            if not 0 <= k <= harmonics.MAX_HARMONIC_DEGREE:
                raise ValueError(
                    f"k must lie in 0..{harmonics.MAX_HARMONIC_DEGREE}, "
                    f"got {k}")
        for L in self.L_values:
            if L == 0.0:
                raise ValueError("L = 0 is excluded; the kernel must tilt")
        for ax in self.axes:
            if not ax > 0.0:
                raise ValueError(f"axes must be positive, got {ax}")
        if self.plot and self.out is None:
            raise ValueError("--plot needs --out to anchor the figure path")


def _parse_times(spec: str) -> tuple[float, ...]:
    """Either '10,100,1000' or 'min:max:steps' filled in geometrically."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"geometric t spec needs min:max:steps, "
                             f"got {spec!r}")
        lo, hi = float(parts[0]), float(parts[1])
        steps = int(parts[2])
        if steps < 1:
            raise ValueError(f"steps must be at least 1, got {steps}")
        if steps == 1:
            return (lo,)
        if not 0.0 < lo < hi:
            raise ValueError(f"need 0 < min < max, got {spec!r}")
        return tuple(float(v) for v in np.geomspace(lo, hi, steps))
    return tuple(float(p) for p in spec.split(","))


def _parse_degrees(spec: str) -> tuple[int, ...]:
    """Either '0..6' or a comma list of degrees."""
    if ".." in spec:
        lo_s, hi_s = spec.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"empty degree range {spec!r}")
        return tuple(range(lo, hi + 1))
    return tuple(int(p) for p in spec.split(","))


def _parse_floats(spec: str) -> tuple[float, ...]:
    return tuple(float(p) for p in spec.split(","))


class _Parser(argparse.ArgumentParser):
    """argparse with the usage exit code of this CLI's contract."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heatsym",
                     description="Verification suites for heat-flow "
                                 "symmetry checks")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p, plot=True):
        p.add_argument("--format", default="csv", choices=("csv", "json"),
                       help="table format (default csv)")
        p.add_argument("--out", default=None, metavar="PATH",
                       help="write the table here instead of stdout")
        if plot:
            p.add_argument("--plot", action="store_true",
                           help="save a PNG figure next to --out")

    p = sub.add_parser("counterexample",
                       help="sweep the level radius of the non-radial "
                            "caloric example")
    p.add_argument("--a", type=float, default=1.0,
                   help="support radius of the odd-part seed (default 1)")
    p.add_argument("--t", default="10,100,1000,10000", metavar="GRID",
                   help="comma list or min:max:steps geometric "
                        "(default 10,100,1000,10000)")
    p.add_argument("--tol", type=float, default=config.ROOT_TOL,
                   help="level-radius bracket tolerance (default %(default)g)")
    add_output_flags(p)

    p = sub.add_parser("funk-hecke",
                       help="sphere convolution eigenvalue table")
    p.add_argument("--N", type=int, default=3, choices=(2, 3),
                   help="ambient dimension (default 3)")
    p.add_argument("--k", default="0..6", metavar="DEGREES",
                   help="degree range '0..6' or comma list (default 0..6)")
    p.add_argument("--L", default="0.5,1,2", metavar="LIST",
                   help="kernel tilt parameters, comma list "
                        "(default 0.5,1,2)")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="eigenrelation residual bound; the closed-vs-direct "
                        "bound is this over 100 (default %(default)g)")
    add_output_flags(p)

    p = sub.add_parser("symmetry",
                       help="run one built-in symmetry scenario")
    p.add_argument("scenario", choices=_SCENARIOS)
    p.add_argument("--b", type=float, default=2.0,
                   help="moving-point speed for the 1-D scenarios "
                        "(default 2)")
    p.add_argument("--R", type=float, default=0.35,
                   help="probe sphere radius for the 3-D scenarios "
                        "(default 0.35)")
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED,
                   help="rotation catalog seed (default %(default)d)")
    add_output_flags(p)

    p = sub.add_parser("geometry",
                       help="normal alignment verdict for a boundary shape")
    p.add_argument("shape", choices=_SHAPES)
    p.add_argument("--R", type=float, default=1.0,
                   help="radius for circle and sphere (default 1)")
    p.add_argument("--axes", default=None, metavar="LIST",
                   help="semi-axes for ellipse/ellipsoid "
                        "(defaults 2,1 and 2,1,1)")
    p.add_argument("--noise", type=float, default=0.0,
                   help="normal perturbation magnitude (default 0)")
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED,
                   help="noise seed (default %(default)d)")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="alignment verdict threshold (default %(default)g)")
    add_output_flags(p)

    p = sub.add_parser("verify-all",
                       help="run the acceptance matrix")
    p.add_argument("--list", action="store_true", dest="list_only",
                   help="print the suite without running it")
    p.add_argument("--tol-scale", type=float, default=1.0,
                   help="multiply upper-bound tolerances and divide "
                        "lower-bound requirements (default 1)")
    add_output_flags(p, plot=False)

    return parser


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = {"command": ns.command}
    if hasattr(ns, "format"):
        kw["fmt"] = ns.format
        kw["out"] = ns.out
    kw["plot"] = getattr(ns, "plot", False)
    if ns.command == "counterexample":
        kw.update(a=ns.a, t_values=_parse_times(ns.t), tol=ns.tol)
    elif ns.command == "funk-hecke":
        kw.update(N=ns.N, k_values=_parse_degrees(ns.k),
                  L_values=_parse_floats(ns.L), tol=ns.tol)
    elif ns.command == "symmetry":
        kw.update(scenario=ns.scenario, b=ns.b, R=ns.R, seed=ns.seed)
    elif ns.command == "geometry":
        axes = ns.axes
        if axes is None:
            axes = "2,1" if ns.shape == "ellipse" else "2,1,1"
        kw.update(shape=ns.shape, R=ns.R, axes=_parse_floats(axes),
                  noise=ns.noise, seed=ns.seed, tol=ns.tol)
    elif ns.command == "verify-all":
        kw.update(tol_scale=ns.tol_scale, list_only=ns.list_only)
    return RunConfig(**kw)


def _emit(cfg: RunConfig, columns, rows, extra_lines=()) -> None:
    """Print or write the table, then any trailing summary lines."""
    text = report.write_table(columns, rows, cfg.fmt, cfg.out)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        print(f"wrote {len(rows)} rows to {cfg.out} ({cfg.fmt})")
    for line in extra_lines:
        print(line)


def _figure_path(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    path = out.with_suffix(".png")
    if path == out:
        path = out.with_name(out.stem + "-figure.png")
    return path


def _cmd_counterexample(cfg: RunConfig) -> int:
    records = counterexample.counterexample_sweep(
        cfg.a, cfg.t_values, cfg.tol)
    rows = [rec.row() for rec in records]
    extra = []
    if cfg.plot:
        from . import plots
        path = _figure_path(cfg)
        plots.counterexample_figure(records, path)
        extra.append(f"figure saved to {path}")
    _emit(cfg, counterexample.LevelSphereRecord.COLUMNS, rows, extra)
    return EXIT_PASS


def _cmd_funk_hecke(cfg: RunConfig) -> int:
    columns = ("k", "N", "L", "lambda_closed", "lambda_direct",
               "rel_diff", "eigen_residual")
    rows = []
    ok = True
    for k in cfg.k_values:
        for L in cfg.L_values:
            res = harmonics.funk_hecke_eigenvalue(k, cfg.N, L)
            rel = abs(res.lambda_closed - res.lambda_direct)
            rel /= abs(res.lambda_closed)
            ok = ok and res.eigen_residual <= cfg.tol
            ok = ok and rel <= cfg.tol / 100.0
            rows.append((k, cfg.N, float(L), res.lambda_closed,
                         res.lambda_direct, rel, res.eigen_residual))
    extra = []
    if cfg.plot:
        from . import plots
        path = _figure_path(cfg)
        plots.funk_hecke_figure(rows, path)
        extra.append(f"figure saved to {path}")
    _emit(cfg, columns, rows, extra)
    return EXIT_PASS if ok else EXIT_FAIL


def _moment_rows(name: str, prof, b: float, n_max: int):
    """Detector rows for one 1-D datum; returns (rows, fired)."""
    diff = profiles.difference_profile(prof)
    rows = []
    fired = False
    for n in range(n_max + 1):
        t = float(2.0 ** n)
        val, err = symmetry.moment_1d(diff, b, t, with_estimate=True)
        bar = 100.0 * err
        above = abs(val) > bar
        fired = fired or above
        rows.append((name, "moment", f"t=2^{n}", val, bar,
                     "above" if above else "below"))
    return rows, fired


def _scenario_radial_1d(cfg: RunConfig):
    g = profiles.bump_1d()
    rows = []
    quiet = True
    gap_bar = 1e-12 * g.sup_bound
    for n in range(11):
        t = float(2.0 ** n)
        gap = abs(heat.solve_1d(g, t * cfg.b, t)
                  - heat.solve_1d(g, -t * cfg.b, t))
        ok = gap <= gap_bar
        quiet = quiet and ok
        rows.append(("radial-1d", "moving-point-gap", f"t=2^{n}", gap,
                     gap_bar, "below" if ok else "above"))
    moment_rows, fired = _moment_rows("radial-1d", g, cfg.b, 10)
    rows.extend(moment_rows)
    verdict = "symmetric" if quiet and not fired else "asymmetric"
    return rows, verdict, "symmetric"


def _scenario_asymmetric_1d(cfg: RunConfig):
    g = profiles.bump_1d(center=0.3)
    rows, fired = _moment_rows("asymmetric-1d", g, cfg.b, 10)
    verdict = "asymmetric" if fired else "symmetric"
    return rows, verdict, "asymmetric"


def _rotation_defect(name: str, g, rotations, r: float, bar: float):
    """One row per rotation; returns (rows, loudest coefficient)."""
    rows = []
    loudest = 0.0
    for i, mat in enumerate(rotations):
        def h(pts, mat=mat):
            return g.evaluate(r * pts) - g.evaluate(r * (pts @ mat.T))

        coeffs = symmetry.harmonic_coefficients(h)
        top = max(abs(c) for c in coeffs.values())
        loudest = max(loudest, top)
        rows.append((name, "rotation-defect", f"rotation-{i}", top, bar,
                     "below" if top <= bar else "above"))
    return rows, loudest


def _scenario_radial_3d(cfg: RunConfig):
    g = profiles.radial_bump_nd(3, 1.0)
    rotations = symmetry.rotation_catalog(3, seed=cfg.seed)[:6]
    rows, loudest = _rotation_defect(
        "radial-3d", g, rotations, cfg.R, 1e-10 * g.sup_bound)
    quiet = loudest <= 1e-10 * g.sup_bound

    def u(x, t):
        return heat.solve_radial_3d(g, float(np.linalg.norm(x)), t)

    boundary = symmetry.sphere_boundary(1.0)
    times = symmetry.TimeSequence.geometric(1.0, 2.0, 4)
    for rep in symmetry.check_scaled_boundary(u, boundary, times, 1e-12):
        quiet = quiet and rep.passed
        rows.append(("radial-3d", "scaled-boundary", f"t={rep.time:g}",
                     rep.spread, rep.tolerance * rep.scale,
                     "below" if rep.passed else "above"))
    verdict = "symmetric" if quiet else "asymmetric"
    return rows, verdict, "symmetric"


def _scenario_perturbed_3d(cfg: RunConfig):
    rotations = symmetry.rotation_catalog(3, seed=cfg.seed)[:6]
    rows = []
    tops = {}
    fired = False
    for eps in (1e-3, 1e-2):
        g = profiles.perturbed_bump_nd(eps)
        bar = 1e-4 * g.sup_bound
        eps_rows, loudest = _rotation_defect(
            "perturbed-3d", g, rotations, cfg.R, bar)
        rows.extend((name, check, f"eps={eps:g} {label}", val, ref, note)
                    for name, check, label, val, ref, note in eps_rows)
        tops[eps] = loudest
        if eps == 1e-2:
            fired = loudest >= bar
    ratio = tops[1e-2] / max(tops[1e-3], 1e-300)
    linear = 9.0 <= ratio <= 11.0
    rows.append(("perturbed-3d", "eps-linearity", "1e-2 vs 1e-3", ratio,
                 10.0, "within" if linear else "outside"))
    verdict = "asymmetric" if fired and linear else "symmetric"
    return rows, verdict, "asymmetric"


_SCENARIO_FUNCS = {
    "radial-1d": _scenario_radial_1d,
    "asymmetric-1d": _scenario_asymmetric_1d,
    "radial-3d": _scenario_radial_3d,
    "perturbed-3d": _scenario_perturbed_3d,
}


def _cmd_symmetry(cfg: RunConfig) -> int:
    rows, verdict, expected = _SCENARIO_FUNCS[cfg.scenario](cfg)
    columns = ("scenario", "check", "label", "value", "reference", "note")
    extra = [f"scenario {cfg.scenario}: verdict {verdict} "
             f"(expected {expected})"]
    if cfg.plot:
        from . import plots
        path = _figure_path(cfg)
        plots.symmetry_figure(rows, path)
        extra.insert(0, f"figure saved to {path}")
    _emit(cfg, columns, rows, extra)
    return EXIT_PASS if verdict == expected else EXIT_FAIL


def _cmd_geometry(cfg: RunConfig) -> int:
    if cfg.shape == "circle":
        boundary = symmetry.circle_boundary(cfg.R)
    elif cfg.shape == "sphere":
        boundary = symmetry.sphere_boundary(cfg.R)
    elif cfg.shape == "ellipse":
        if len(cfg.axes) != 2:
            raise ValueError(f"ellipse needs 2 axes, got {len(cfg.axes)}")
        boundary = symmetry.ellipse_boundary(*cfg.axes)
    else:
        if len(cfg.axes) != 3:
            raise ValueError(f"ellipsoid needs 3 axes, got {len(cfg.axes)}")
        boundary = symmetry.ellipsoid_boundary(cfg.axes)
    if cfg.noise > 0.0:
        boundary = symmetry.perturb_normals(boundary, cfg.noise, cfg.seed)

    res = symmetry.normal_alignment(boundary)
    aligned = (res.max_misalignment <= cfg.tol
               and res.radius_spread <= cfg.tol * max(cfg.axes, default=cfg.R))
    verdict = "aligned" if aligned else "misaligned"
    expected = "aligned" if cfg.shape in ("circle", "sphere") else "misaligned"
    columns = ("shape", "samples", "max_misalignment", "radius_spread",
               "verdict", "expected")
    rows = [(cfg.shape, len(boundary), res.max_misalignment,
             res.radius_spread, verdict, expected)]
    extra = []
    if cfg.plot:
        from . import plots
        path = _figure_path(cfg)
        plots.geometry_figure(boundary, path)
        extra.append(f"figure saved to {path}")
    _emit(cfg, columns, rows, extra)
    return EXIT_PASS if verdict == expected else EXIT_FAIL


def _cmd_verify_all(cfg: RunConfig) -> int:
    if cfg.list_only:
        for idx, title, budget in acceptance.suite_listing():
            print(f"criterion {idx} (budget {budget:g}s) {title}")
        return EXIT_PASS
    results = acceptance.run_all(cfg.tol_scale)
    for res in results:
        print(res.line())
    n_pass = sum(res.passed for res in results)
    print(f"{n_pass} of {len(results)} criteria passed")
    if cfg.out is not None:
        columns = ("criterion", "title", "passed", "elapsed_s",
                   "budget_s", "detail")
        rows = [(res.index, res.title, int(res.passed), res.elapsed,
                 res.budget, res.detail) for res in results]
        report.write_table(columns, rows, cfg.fmt, cfg.out)
        print(f"wrote {len(rows)} rows to {cfg.out} ({cfg.fmt})")
    return EXIT_PASS if n_pass == len(results) else EXIT_FAIL


_HANDLERS = {
    "counterexample": _cmd_counterexample,
    "funk-hecke": _cmd_funk_hecke,
    "symmetry": _cmd_symmetry,
    "geometry": _cmd_geometry,
    "verify-all": _cmd_verify_all,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(ns)
    except ValueError as exc:
        print(f"heatsym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _HANDLERS[cfg.command](cfg)
    except StructureError as exc:
        print(f"heatsym: structure error: {exc}", file=sys.stderr)
        trace_rows = [(str(name), float(value)) for name, value in exc.trace]
        if trace_rows:
            text = report.write_table(("name", "value"), trace_rows,
                                      cfg.fmt, cfg.out)
            if cfg.out is None:
                sys.stderr.write(text)
            else:
                print(f"wrote {len(trace_rows)} diagnostic rows to "
                      f"{cfg.out} ({cfg.fmt})", file=sys.stderr)
        return EXIT_STRUCTURE
    except EvaluationError as exc:
        print(f"heatsym: evaluation error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except AssertionError as exc:
        print(f"heatsym: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"heatsym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
