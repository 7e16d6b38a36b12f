"""
Command-line front end

    python -m ms_monotonicity scan --model crack_tip --center 1,0 --r-min 0.05 --r-max 50 --r-steps 400
    python -m ms_monotonicity twopoint --cert-n 4096

Exit status: 0 all verdicts pass, 1 a verdict failed, 2 configuration error,
3 an integral did not converge.
"""

import argparse
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

from . import __version__, competitors, diagnostics, twopoint
from .catalog import dump_catalog, parse_model
from .errors import ConfigError, GeometryError, NoConvergence
from .geometry import ON_JUMP_TOL, DiskProbe, FieldModel, Point2, catalog, circle_crossings
from .output import records_frame, scan_frame, write_table
from .quadrature import QuadratureSpec

logger = logging.getLogger(__name__)

COMMANDS = ("scan", "dlms", "prop31", "slice", "sharpness", "competitor", "twopoint", "equilibrium",
            "classify", "catalog")
DEFAULT_DELTAS = (0.01, 0.02, 0.05, 0.1, 0.2)
DEFAULT_BUMPS = 20
EXIT_OK, EXIT_VERDICT, EXIT_CONFIG, EXIT_NO_CONVERGENCE = 0, 1, 2, 3


# =========================
# Configuration
# =========================
@dataclass(frozen=True)
class RunConfig:
    command: str
    model_source: str = "crack_tip"
    center: Optional[Point2] = None
    r_min: float = 0.05
    r_max: float = 50.0
    r_steps: int = 400
    grid_kind: str = "geometric"
    quad: QuadratureSpec = field(default_factory=QuadratureSpec.for_scans)
    fourier_K: int = competitors.DEFAULT_FOURIER_MODES
    cert_n: int = twopoint.DEFAULT_CERT_N
    out_path: Optional[Path] = None
    out_format: str = "csv"
    seed: int = 0
    q_directions: int = diagnostics.PROP31_DIRECTIONS
    deltas: Tuple[float, ...] = DEFAULT_DELTAS
    bumps: int = DEFAULT_BUMPS
    workers: int = 1
    claims: Tuple[int, ...] = (1, 2, 3, 4)
    phi_tilde: float = 0.5 * math.pi

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}", field="command")
        if not 0.0 < self.r_min < self.r_max:
            raise ConfigError(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}", field="r_min")
        if self.r_steps < 2:
            raise ConfigError(f"need at least 2 radii, got {self.r_steps}", field="r_steps")
        if self.command == "scan" and self.r_steps < diagnostics.MIN_SCAN_POINTS:
            raise ConfigError(f"scan needs at least {diagnostics.MIN_SCAN_POINTS} radii, got {self.r_steps}",
                              field="r_steps")
        if self.cert_n < twopoint.MIN_CERT_N:
            raise ConfigError(f"certification needs n >= {twopoint.MIN_CERT_N}, got {self.cert_n}", field="cert_n")
        if any(not 0.0 <= d <= diagnostics.MAX_SHARPNESS_DELTA for d in self.deltas):
            raise ConfigError(f"deltas must lie in [0, {diagnostics.MAX_SHARPNESS_DELTA}], got {self.deltas}",
                              field="deltas")
        if self.fourier_K < 1:
            raise ConfigError(f"need at least one Fourier mode, got {self.fourier_K}", field="fourier_modes")
        if self.q_directions < 1:
            raise ConfigError(f"need at least one direction, got {self.q_directions}", field="q_directions")
        if self.bumps < 0:
            raise ConfigError(f"bumps must be >= 0, got {self.bumps}", field="bumps")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}", field="workers")
        if self.grid_kind not in ("geometric", "linear"):
            raise ConfigError(f"grid must be geometric or linear, got {self.grid_kind!r}", field="grid")
        if self.out_format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.out_format!r}", field="format")
        if any(c not in (1, 2, 3, 4) for c in self.claims):
            raise ConfigError(f"claims must be drawn from 1-4, got {self.claims}", field="claims")

    @property
    def output(self) -> Path:
        return self.out_path or Path("results") / f"{self.command}.{self.out_format}"

    def provenance(self) -> dict:
        """Every default and effective setting, written into each artifact header"""
        return {
            "version": __version__,
            "command": self.command,
            "model": self.model_source,
            "center": None if self.center is None else [self.center.x, self.center.y],
            "r_min": self.r_min,
            "r_max": self.r_max,
            "r_steps": self.r_steps,
            "grid": self.grid_kind,
            "quadrature": asdict(self.quad),
            "fourier_modes": self.fourier_K,
            "cert_n": self.cert_n,
            "q_directions": self.q_directions,
            "deltas": list(self.deltas),
            "bumps": self.bumps,
            "seed": self.seed,
            "claims": list(self.claims),
            "phi_tilde": self.phi_tilde,
            "format": self.out_format,
        }


def _point(text: str) -> Point2:
    try:
        x, y = (float(v) for v in text.split(","))
        return Point2(x, y)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected X,Y got {text!r}") from exc


def _floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default="crack_tip",
                        help="catalog name, path to a model .json, or inline JSON")
    common.add_argument("--center", type=_point, default=None, help="probe center X,Y (default: model reference point)")
    common.add_argument("--r-min", type=float, default=0.05)
    common.add_argument("--r-max", type=float, default=50.0)
    common.add_argument("--r-steps", type=int, default=400)
    common.add_argument("--grid", choices=["geometric", "linear"], default="geometric")
    common.add_argument("--quad-order", type=int, default=QuadratureSpec().nodes_per_panel)
    common.add_argument("--quad-tol", type=float, default=QuadratureSpec.for_scans().rel_tolerance)
    common.add_argument("--fourier-modes", type=int, default=competitors.DEFAULT_FOURIER_MODES)
    common.add_argument("--cert-n", type=int, default=twopoint.DEFAULT_CERT_N)
    common.add_argument("--claims", type=_ints, default=(1, 2, 3, 4))
    common.add_argument("--phi-tilde", type=float, default=0.5 * math.pi, help="landscape angle for twopoint")
    common.add_argument("--q-directions", type=int, default=diagnostics.PROP31_DIRECTIONS)
    common.add_argument("--deltas", type=_floats, default=DEFAULT_DELTAS)
    common.add_argument("--bumps", type=int, default=DEFAULT_BUMPS)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="ms_monotonicity",
                                     description="Numerical checks of monotonicity for 2D Mumford-Shah minimizers")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "scan": "F, E, D1, D2 and the boundary relation over radii",
        "dlms": "boundary relation residual over radii",
        "prop31": "crossing bound gap over radii and directions",
        "slice": "radial-slice and density bounds over radii",
        "sharpness": "F(1, delta e1) for the crack tip",
        "competitor": "disk and two-sector competitor energies",
        "twopoint": "certification of the two-crossing inequality",
        "equilibrium": "weak equilibrium residual for random bumps",
        "classify": "regular / interface / singular point from small radii",
        "catalog": "export the model catalog as JSON",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        quad = replace(QuadratureSpec.for_scans(nodes_per_panel=args.quad_order), rel_tolerance=args.quad_tol)
    except ValueError as exc:
        raise ConfigError(str(exc), field="quadrature") from exc
    return RunConfig(
        command=args.command, model_source=args.model, center=args.center, r_min=args.r_min,
        r_max=args.r_max, r_steps=args.r_steps, grid_kind=args.grid, quad=quad,
        fourier_K=args.fourier_modes, cert_n=args.cert_n, out_path=args.out, out_format=args.format,
        seed=args.seed, q_directions=args.q_directions, deltas=tuple(args.deltas), bumps=args.bumps,
        workers=args.workers, claims=tuple(args.claims), phi_tilde=args.phi_tilde,
    )


def load_model(source: str) -> FieldModel:
    named = catalog()
    if source in named:
        return named[source]
    return parse_model(source)


# =========================
# Commands
# =========================
def _radii(config: RunConfig) -> np.ndarray:
    return diagnostics.radius_grid(config.r_min, config.r_max, config.r_steps, config.grid_kind)


def _center(config: RunConfig, model: FieldModel) -> Point2:
    return config.center if config.center is not None else model.reference_point()


def _at_singular_point(model: FieldModel, x0: Point2) -> bool:
    if any(s.distance(x0) < ON_JUMP_TOL for s in model.singular_points()):
        return True
    return model.jump_set().distance_to(x0) < ON_JUMP_TOL


def _map_rows(fn, radii, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, radii))
    return [fn(r) for r in radii]


def cmd_scan(config: RunConfig):
    model = load_model(config.model_source)
    x0 = _center(config, model)
    report = diagnostics.scan(model, x0, _radii(config), config.quad, workers=config.workers)
    live = [r for r in report.rows if not r.skipped_tangential]
    checks = [diagnostics.case_estimates(r) for r in live]
    verdicts = {
        "monotone": report.verdict,
        "differential": report.differential_verdict,
        "case_estimates": all(c.passed for c in checks),
        "dlms": all(abs(r.dlms_residual) < 1e-6 for r in live),
        "representations_agree": all(abs(r.D1 - r.D2) < 1e-6 for r in live),
    }
    if _at_singular_point(model, x0):
        verdicts["density_bound"] = all(r.E >= 2.0 - 1e-8 for r in report.rows if math.isfinite(r.E))
    summary = report.summary()
    summary["final_F"] = report.rows[-1].F
    return scan_frame(report.rows), verdicts, summary


def cmd_dlms(config: RunConfig):
    model = load_model(config.model_source)
    x0 = _center(config, model)

    def row(r):
        disk = DiskProbe(x0, float(r))
        try:
            res = diagnostics.dlms_residual(model, disk, config.quad)
            return {"r": r, "dlms_residual": res, "skipped": 0}
        except GeometryError as exc:
            logger.warning("skipping r=%.6g: %s", r, exc)
            return {"r": r, "dlms_residual": float("nan"), "skipped": 1}

    df = pd.DataFrame(_map_rows(row, _radii(config), config.workers))
    live = df[df["skipped"] == 0]["dlms_residual"].abs()
    worst = float(live.max()) if len(live) else 0.0
    return df, {"dlms": worst < 1e-6}, {"max_abs_residual": worst}


def cmd_prop31(config: RunConfig):
    model = load_model(config.model_source)
    x0 = _center(config, model)

    def row(r):
        disk = DiskProbe(x0, float(r))
        try:
            grid_gap, exact_gap, q = diagnostics.prop31_grid_gap(model, disk, config.q_directions, config.quad)
            return {"r": r, "min_gap": grid_gap, "exact_gap": exact_gap, "q_angle": q.angle, "skipped": 0}
        except GeometryError as exc:
            logger.warning("skipping r=%.6g: %s", r, exc)
            nan = float("nan")
            return {"r": r, "min_gap": nan, "exact_gap": nan, "q_angle": nan, "skipped": 1}

    df = pd.DataFrame(_map_rows(row, _radii(config), config.workers))
    live = df[df["skipped"] == 0]
    worst = float(live["min_gap"].min()) if len(live) else 0.0
    return df, {"prop31": worst >= -1e-8}, {"min_gap": worst}


def cmd_slice(config: RunConfig):
    model = load_model(config.model_source)
    x0 = _center(config, model)

    def row(r):
        disk = DiskProbe(x0, float(r))
        E = diagnostics.energy_density(model, disk, config.quad)
        try:
            bound = diagnostics.radial_slice_bound(model, disk, config.quad)
            return {"r": r, "slice_bound": bound, "E": E, "skipped": 0}
        except GeometryError as exc:
            logger.warning("skipping r=%.6g: %s", r, exc)
            return {"r": r, "slice_bound": float("nan"), "E": E, "skipped": 1}

    df = pd.DataFrame(_map_rows(row, _radii(config), config.workers))
    live = df[df["skipped"] == 0]
    verdicts = {}
    if _at_singular_point(model, x0):
        verdicts["slice_bound"] = bool((live["slice_bound"] >= -1e-8).all())
        verdicts["density_bound"] = bool((df["E"] >= 2.0 - 1e-8).all())
    summary = {"min_slice_bound": float(live["slice_bound"].min()) if len(live) else float("nan"),
               "min_E": float(df["E"].min())}
    return df, verdicts, summary


def cmd_sharpness(config: RunConfig):
    rows = diagnostics.sharpness_scan(config.deltas, spec=config.quad)
    df = records_frame(rows)
    positive = [r for r in rows if r.delta > 0.0]
    verdicts = {"above_cap": all(r.F > diagnostics.F_CAP for r in positive)}
    small = [r for r in positive if r.delta <= 0.01]
    if small:
        verdicts["slope"] = all(0.4 <= r.slope <= 0.6 for r in small)
    return df, verdicts, {"rows": len(rows)}


def cmd_competitor(config: RunConfig):
    model = load_model(config.model_source)
    x0 = _center(config, model)
    rows = []
    for r in _radii(config):
        disk = DiskProbe(x0, float(r))
        nan = float("nan")
        rec = {"r": r, "kind": "", "competitor_E": nan, "model_E": nan, "gap": nan, "bound": nan,
               "extension": nan, "boundary_tau_energy": nan, "bound_rhs": nan, "tail": nan, "note": ""}
        try:
            n = len(circle_crossings(model.jump_set(), disk))
            if n == 0:
                res = competitors.disk_competitor(model, disk, config.fourier_K)
                rec.update(kind="disk", competitor_E=res.competitor_E, model_E=res.model_E, gap=res.gap,
                           extension=res.competitor_E, boundary_tau_energy=res.boundary, bound_rhs=res.bound_rhs,
                           tail=res.tail)
            elif n == 2:
                res = competitors.two_sector_competitor(model, disk, config.fourier_K)
                rec.update(kind="two_sector", competitor_E=res.competitor_E, model_E=res.model_E, gap=res.gap,
                           bound=res.bound, extension=res.extension, boundary_tau_energy=res.boundary,
                           bound_rhs=res.bound_rhs, tail=res.tail)
            else:
                rec["note"] = f"{n} crossings"
        except GeometryError as exc:
            rec["note"] = str(exc)
        rows.append(rec)
    df = pd.DataFrame(rows)
    done = df[df["kind"] != ""]
    two = done[done["kind"] == "two_sector"]
    verdicts = {
        "minimality": bool((done["gap"] >= -1e-6).all()),
        "two_sector_bound": bool((two["competitor_E"] <= two["bound"] + 1e-12).all()),
        "extension_bound": bool((done["extension"] <= done["bound_rhs"] * (1.0 + 1e-12) + 1e-12).all()),
    }
    return df, verdicts, {"evaluated": len(done), "skipped": len(df) - len(done)}


def cmd_twopoint(config: RunConfig):
    reports = twopoint.certify_lemma54(config.cert_n, config.claims, strict=False)
    df = records_frame(reports)
    verdicts = {f"claim_{r.claim_id}": r.verdict for r in reports}
    sym = twopoint.symmetrization_check(128)
    signs = twopoint.derivative_sign_check(twopoint.MIN_CERT_N)
    best, argmin = twopoint.f_min(0.5 * math.pi)
    verdicts["symmetrization"] = sym >= -1e-12
    verdicts["derivative_signs"] = signs.verdict
    verdicts["f_min"] = abs(best - math.sqrt(2.0)) < 1e-6

    landscape = twopoint.f_landscape(config.phi_tilde)
    path = config.output.with_name(config.output.stem + "_landscape.csv")
    write_table(landscape, path, "csv", config.provenance())
    summary = {
        "certified": {r.claim_id: r.certified_lower_bound for r in reports},
        "symmetrization_worst": sym,
        "f_min": best,
        "argmin": argmin,
        "landscape": str(path),
    }
    return df, verdicts, summary


def cmd_equilibrium(config: RunConfig):
    model = load_model(config.model_source)
    rng = np.random.default_rng(config.seed)
    bumps = diagnostics.random_bumps(model, config.bumps, rng)
    rows = []
    for b in bumps:
        bulk, jump = diagnostics.equilibrium_terms(model, b, config.quad)
        rows.append({"center_x": b.center.x, "center_y": b.center.y, "radius": b.radius,
                     "direction": b.direction.angle, "amplitude": b.amplitude,
                     "bulk": bulk, "jump": jump, "residual": bulk - jump})
    df = pd.DataFrame(rows)
    worst = float(df["residual"].abs().max()) if len(df) else 0.0
    return df, {"equilibrium": worst < 1e-6}, {"max_abs_residual": worst}


def cmd_classify(config: RunConfig):
    model = load_model(config.model_source)
    x0 = _center(config, model)
    res = diagnostics.classify_point(model, x0)
    df = pd.DataFrame([{"x": x0.x, "y": x0.y, "label": res.label,
                        **{f"F_{i}": v for i, v in enumerate(res.small_radius_entropy)}}])
    return df, {}, {"label": res.label}


def cmd_catalog(config: RunConfig):
    if config.model_source in catalog():
        models = catalog()
    else:
        models = {"model": load_model(config.model_source)}
    docs = dump_catalog(models)
    df = pd.DataFrame([{"name": k, **v} for k, v in docs.items()])
    return df, {}, {"models": sorted(docs)}


HANDLERS = {
    "scan": cmd_scan, "dlms": cmd_dlms, "prop31": cmd_prop31, "slice": cmd_slice,
    "sharpness": cmd_sharpness, "competitor": cmd_competitor, "twopoint": cmd_twopoint,
    "equilibrium": cmd_equilibrium, "classify": cmd_classify, "catalog": cmd_catalog,
}


# =========================
# Entry points
# =========================
def run(config: RunConfig, quiet: bool = False) -> int:
    """Execute one command, write its artifact and return the exit status"""
    df, verdicts, summary = HANDLERS[config.command](config)
    path = write_table(df, config.output, config.out_format, config.provenance(), verdicts)
    passed = all(verdicts.values())
    if not quiet:
        print("=" * 60)
        print(config.command.upper())
        print("=" * 60)
        for key, value in summary.items():
            print(f"{key}: {value}")
        for key, ok in verdicts.items():
            print(f"{'✓' if ok else '✗'} {key}")
        print(f"\n💾 Results saved to {path}")
    return EXIT_OK if passed else EXIT_VERDICT


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING
    if args.quiet:
        level = logging.ERROR
    elif args.verbose:
        level = logging.DEBUG if args.verbose > 1 else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        config = config_from_args(args)
        return run(config, quiet=args.quiet)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        for err in exc.errors():
            print(f"{'.'.join(map(str, err['loc']))}: {err['msg']}", file=sys.stderr)
        return EXIT_CONFIG
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except ValueError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
