#!/usr/bin/env python3
"""Command-line entry point for the Ising lab.

Every command resolves a RunConfig, runs, and emits either a JSON RunRecord
(scalars, reports) or a CSV table (grids, traces) whose header lines carry
the resolved configuration. Results go to stdout unless --out names a
directory.

Exit status: 0 on success, 1 on tolerance violations, 2 on input errors.
"""

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

from src.config import get_fixtures_path, get_log_level, get_seed, get_tolerance
from src.continuum.bc import ContinuumBC
from src.continuum.closed_forms import closed_form_m0, drift, residue_closed_form
from src.continuum.maps import RectangleMap, observable_in_domain, transport
from src.continuum.observable import condition_residuals, evaluate_grid, residue_R, solve_observable
from src.crossing.fk import fk_crossing_continuum
from src.crossing.gfunction import G_quad, make_g
from src.crossing.spin import spin_crossing_prediction
from src.errors import EvaluationError, LabError, ToleranceViolation
from src.lattice.geometry import Site
from src.lowtemp.configs import ConfigSpace
from src.lowtemp.fk import fk_crossing_exact
from src.lowtemp.spins import sample_spins
from src.models.crossing import CrossingQuery
from src.models.results import RunConfig, RunRecord, VerifyReport
from src.observables.montecarlo import monte_carlo_observable
from src.observables.observable import observable
from src.observables.suite import load_fixture, verify_identities
from src.sle.harness import hitting_probability, martingale_check
from src.sle.integrator import simulate
from src.utils.debug import TimingContext, to_jsonable

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


class Table:
    """CSV payload."""

    def __init__(self, rows: Iterable[Dict[str, Any]]):
        self.rows = list(rows)


# Payloads


def _real(values) -> tuple:
    return tuple(complex(x).real for x in values)


def _continuum_bc(args) -> ContinuumBC:
    return ContinuumBC(a=_real(args.a), b=_real(args.b), zeta=tuple(args.zeta))


def _grid(text: str) -> np.ndarray:
    """'start:stop:num' -> linspace, or a comma-separated list."""
    if ":" in text:
        start, stop, num = text.split(":")
        return np.linspace(float(start), float(stop), int(num))
    return np.array([float(x) for x in text.split(",")])


def lowtemp_z(args, config: RunConfig):
    bc = load_fixture(args.domain)
    sources = [Site.parse(s) for s in args.sources]
    space = ConfigSpace(bc.domain, sources, bc.free_edges, args.cap)
    return space.total_weight(), space.size


def lowtemp_crossing_exact(args, config: RunConfig):
    bc = load_fixture(args.domain)
    return fk_crossing_exact(bc, [i - 1 for i in args.subset], args.cap), None


def lowtemp_sample(args, config: RunConfig):
    bc = load_fixture(args.domain)
    samples = sample_spins(bc, args.count, seed=config.seed, method=args.method)
    rows = []
    for index, spin in enumerate(samples):
        rows.extend({"sample": index, "i": f[0], "j": f[1], "spin": s} for f, s in sorted(spin.spins.items()))
    return Table(rows)


def obs_eval(args, config: RunConfig):
    bc = load_fixture(args.domain)
    sites = [Site.parse(s) for s in args.sites] or None
    if args.mc_samples:
        if sites is None:
            raise ValueError("--mc-samples needs explicit --sites")
        obs = monte_carlo_observable(bc, sites, args.mc_samples, seed=config.seed, rule=args.rule)
    else:
        obs = observable(bc, sites, args.normalization, args.rule, jobs=config.jobs, cap=args.cap)
    rows = []
    for site, value in sorted(obs.values.items()):
        z = site.position(bc.domain.mesh)
        rows.append({"site": str(site), "x": z.real, "y": z.imag, "re": value.real, "im": value.imag})
    return Table(rows)


def obs_verify(args, config: RunConfig):
    paths = [Path(p) for p in args.domains]
    if args.all or not paths:
        paths += sorted(Path(config.fixtures).glob("*.json")) + sorted(Path(config.fixtures).glob("*.yaml"))
    if not paths:
        raise FileNotFoundError(f"no fixture domains under {config.fixtures}")
    report = VerifyReport()
    for path in paths:
        report.fixtures.append(str(path))
        for check in verify_identities(load_fixture(path), config.tol, config.jobs, args.cap):
            check.name = f"{path.stem}: {check.name}"
            report.checks.append(check)
    return report


def cont_solve(args, config: RunConfig):
    bc = _continuum_bc(args)
    obs = solve_observable(bc)
    value: Dict[str, Any] = {
        "representation": obs.representation,
        "poly_coeffs": list(obs.poly_coeffs),
        "condition_number": obs.condition_number,
        "residuals": condition_residuals(obs),
    }
    if bc.m:
        value["residue"] = residue_R(obs)
        if bc.m == 1:
            value["residue_closed_form"] = residue_closed_form(bc)
    elif not bc.at_infinity:
        value["closed_form_coefficients"] = closed_form_m0(bc)
    return value, None


def cont_drift(args, config: RunConfig):
    return drift(_continuum_bc(args)), None


def cont_eval(args, config: RunConfig):
    xs, ys = _grid(args.xs), _grid(args.ys)
    if args.rect is None:
        obs = solve_observable(_continuum_bc(args))
        return Table(evaluate_grid(obs, xs, ys, with_h=not args.no_h))
    rect = RectangleMap(args.rect)
    obs = observable_in_domain(rect, [complex(x) for x in args.a], [complex(x) for x in args.b], args.zeta)
    rows = []
    for y in ys:
        for x in xs:
            try:
                value = transport(obs, rect, complex(x, y))
            except (EvaluationError, ZeroDivisionError):
                continue
            rows.append({"x": float(x), "y": float(y), "re": value.real, "im": value.imag})
    return Table(rows)


def sle_simulate(args, config: RunConfig):
    traces = simulate(
        _continuum_bc(args),
        horizon=args.horizon,
        dt=args.dt,
        seed=config.seed,
        n_paths=args.paths,
        jobs=config.jobs,
        record_every=args.record_every,
        zero=args.zero_drift,
        with_curve=args.curve,
    )
    return Table({"path": i, **row} for i, trace in enumerate(traces) for row in trace.rows())


def sle_hit(args, config: RunConfig):
    bc = _continuum_bc(args)
    estimate = hitting_probability(bc, args.paths, args.dt, config.seed, args.horizon, config.jobs)
    return asdict(estimate), None


def sle_martingale(args, config: RunConfig):
    bc = _continuum_bc(args)
    stat = martingale_check(bc, make_g(args.kind), args.paths, args.dt, config.seed, args.horizon, config.jobs)
    if abs(stat.z) >= 3.0:
        raise ToleranceViolation("martingale z-score", abs(stat.z), 3.0)
    return asdict(stat), None


def crossing_fk(args, config: RunConfig):
    result = fk_crossing_continuum(CrossingQuery(points=args.points, subset=args.subset), order=args.order)
    return result.model_dump(), None


def crossing_g(args, config: RunConfig):
    g = make_g(args.kind)
    return {"G": g(args.lam), "G_quad": G_quad(g, args.lam)}, None


def crossing_spin(args, config: RunConfig):
    plus, minus = spin_crossing_prediction(
        complex(args.a1), complex(args.a2), complex(args.b1), complex(args.b2), args.kind, args.rect
    )
    return {"plus": plus, "minus": minus}, None


# Emission


def _config_lines(config: RunConfig) -> str:
    return f"# config: {json.dumps(to_jsonable(config.model_dump()), sort_keys=True)}\n"


def render(payload, config: RunConfig, wall_time: float) -> tuple[str, str]:
    """(text, file suffix) for a command payload."""
    if isinstance(payload, Table):
        buffer = io.StringIO()
        buffer.write(_config_lines(config))
        if payload.rows:
            fields = list(dict.fromkeys(key for row in payload.rows for key in row))
            writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
            writer.writeheader()
            writer.writerows(to_jsonable(payload.rows))
        return buffer.getvalue(), ".csv"
    if isinstance(payload, VerifyReport):
        data = {"config": config.model_dump(), "ok": payload.ok, "wall_time": wall_time, **payload.model_dump()}
        return json.dumps(to_jsonable(data), indent=2, sort_keys=True) + "\n", ".json"
    value, count = payload
    record = RunRecord(
        command=config.command,
        inputs=config.inputs,
        value=to_jsonable(value),
        config_count=count,
        wall_time=wall_time,
        config=config.model_dump(),
    )
    return json.dumps(to_jsonable(record.model_dump()), indent=2, sort_keys=True) + "\n", ".json"


def emit(text: str, suffix: str, config: RunConfig) -> Optional[Path]:
    if config.out is None:
        sys.stdout.write(text)
        return None
    directory = Path(config.out)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{config.slug()}{suffix}"
    path.write_text(text)
    logger.info("Wrote result", extra={"path": str(path)})
    return path


# Parser


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="Master seed (default: IFL_SEED)")
    parser.add_argument("--tol", type=float, default=None, help="Identity tolerance (default: IFL_TOL)")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes (default: 1)")
    parser.add_argument("--out", type=str, default=None, help="Output directory (default: stdout)")


def _continuum_args(parser: argparse.ArgumentParser, kind=float) -> None:
    parser.add_argument("--a", type=kind, nargs="*", default=[], help="Marked points a_1..a_m")
    parser.add_argument("--b", type=kind, nargs="+", required=True, help="Free-arc endpoints b_1..b_2k (inf allowed last)")
    parser.add_argument("--zeta", type=int, nargs="*", default=[], help="Signs zeta_1..zeta_{k-1}")


def _sle_args(parser: argparse.ArgumentParser) -> None:
    _continuum_args(parser)
    parser.add_argument("--paths", type=int, default=1000, help="Number of paths")
    parser.add_argument("--dt", type=float, default=None, help="Time step (default: IFL_DT)")
    parser.add_argument("--horizon", type=float, default=None, help="Capacity time horizon (default: IFL_HORIZON x scale^2)")


def _add(subparsers, name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(name, help=help_text, description=help_text)
    _common(parser)
    parser.set_defaults(handler=handler)
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ising-lab",
        description="Fermionic observables, Loewner drifts and crossing probabilities of the critical Ising model",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s lowtemp z tests/fixtures/domains/rect3x3_pmf.json
  %(prog)s obs verify --all
  %(prog)s cont drift --a 0 1 --b 2 inf
  %(prog)s sle hit --a 0 -1 --b 1 inf --paths 10000
  %(prog)s crossing fk --points -3 -1 1 3 --subset 1 2
        """,
    )
    groups = parser.add_subparsers(dest="group", required=True)

    lowtemp = groups.add_parser("lowtemp", help="Exact low-temperature expansion").add_subparsers(dest="command", required=True)
    p = _add(lowtemp, "z", lowtemp_z, "Partition function Z(domain, sources)")
    p.add_argument("domain", help="Domain file (JSON or YAML)")
    p.add_argument("--sources", nargs="*", default=[], help="Source sites, e.g. 'normal(0,1;4)'")
    p.add_argument("--cap", type=int, default=None, help="Enumeration cap in full edges")
    p = _add(lowtemp, "crossing-exact", lowtemp_crossing_exact, "FK crossing by exact enumeration")
    p.add_argument("domain")
    p.add_argument("--subset", type=int, nargs="+", required=True, help="Wired arcs (1-based)")
    p.add_argument("--cap", type=int, default=None)
    p = _add(lowtemp, "sample", lowtemp_sample, "Sample spin configurations")
    p.add_argument("domain")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--method", choices=["auto", "exact", "metropolis"], default="auto")

    obs = groups.add_parser("obs", help="Discrete observable").add_subparsers(dest="command", required=True)
    p = _add(obs, "eval", obs_eval, "Evaluate F at sites (default: all admissible)")
    p.add_argument("domain")
    p.add_argument("--sites", nargs="*", default=[])
    p.add_argument("--normalization", choices=["raw", "normalized"], default="raw")
    p.add_argument("--rule", choices=["right", "left"], default="right")
    p.add_argument("--mc-samples", type=int, default=0, help="Use the Monte Carlo estimator with this many samples")
    p.add_argument("--cap", type=int, default=None)
    p = _add(obs, "verify", obs_verify, "Run the discrete identity suite")
    p.add_argument("domains", nargs="*", default=[])
    p.add_argument("--all", action="store_true", help="Every fixture under IFL_FIXTURES")
    p.add_argument("--cap", type=int, default=None)

    cont = groups.add_parser("cont", help="Continuum observable").add_subparsers(dest="command", required=True)
    p = _add(cont, "solve", cont_solve, "Solve the boundary-value problem")
    _continuum_args(p)
    p = _add(cont, "drift", cont_drift, "Drift -3 d/da_1 log|R|")
    _continuum_args(p)
    p = _add(cont, "eval", cont_eval, "Evaluate f (and h) on a grid")
    _continuum_args(p, kind=complex)
    p.add_argument("--xs", required=True, help="start:stop:num or comma list")
    p.add_argument("--ys", required=True)
    p.add_argument("--rect", type=float, default=None, help="Evaluate in [0, L] x [0, 1]; points are boundary points")
    p.add_argument("--no-h", action="store_true", help="Skip the h column")

    sle = groups.add_parser("sle", help="Drifted Loewner evolution").add_subparsers(dest="command", required=True)
    p = _add(sle, "simulate", sle_simulate, "Simulate and record paths")
    _sle_args(p)
    p.add_argument("--record-every", type=int, default=10)
    p.add_argument("--zero-drift", action="store_true")
    p.add_argument("--curve", action="store_true", help="Reconstruct planar traces")
    p = _add(sle, "hit", sle_hit, "Probability of swallowing b1 before a2")
    _sle_args(p)
    p = _add(sle, "martingale", sle_martingale, "Martingale z-score of G(lambda)")
    _sle_args(p)
    p.add_argument("--kind", choices=["pmpf", "pmpm", "pmff"], default="pmpf")

    crossing = groups.add_parser("crossing", help="Crossing probabilities").add_subparsers(dest="command", required=True)
    p = _add(crossing, "fk", crossing_fk, "Continuum FK crossing")
    p.add_argument("--points", type=float, nargs="+", required=True)
    p.add_argument("--subset", type=int, nargs="+", required=True)
    p.add_argument("--order", choices=["asc", "desc"], default="asc")
    p = _add(crossing, "g", crossing_g, "Spin-crossing function G")
    p.add_argument("--kind", choices=["pmpf", "pmpm", "pmff"], default="pmpf")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p = _add(crossing, "spin", crossing_spin, "Plus/minus crossing prediction")
    for name in ("a1", "a2", "b1", "b2"):
        p.add_argument(f"--{name}", type=complex, required=True)
    p.add_argument("--kind", choices=["pmpf", "pmpm", "pmff"], default="pmpf")
    p.add_argument("--rect", type=float, default=None, help="Rectangle length L; points on [0, L] x [0, 1]")
    return parser


def resolve_config(args) -> RunConfig:
    inputs = {
        key: value
        for key, value in vars(args).items()
        if key not in ("handler", "group", "command", "seed", "tol", "jobs", "out")
    }
    return RunConfig(
        command=f"{args.group} {args.command}",
        inputs=to_jsonable(inputs),
        seed=get_seed() if args.seed is None else args.seed,
        tol=get_tolerance() if args.tol is None else args.tol,
        jobs=args.jobs,
        out=args.out,
        fixtures=str(get_fixtures_path()),
    )


def run(args) -> int:
    """Run one parsed command; returns the exit status."""
    try:
        config = resolve_config(args)
        with TimingContext(None, config.command) as timer:
            payload = args.handler(args, config)
        text, suffix = render(payload, config, timer.elapsed)
        emit(text, suffix, config)
    except ToleranceViolation as e:
        logger.error("Tolerance violation", extra={"error": str(e)})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValidationError as e:
        print(f"error: invalid input\n{e}", file=sys.stderr)
        return EXIT_INPUT
    except (LabError, ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(payload, VerifyReport) and not payload.ok:
        failed = [check.name for check in payload.checks if not check.ok]
        logger.error("Identity suite failed", extra={"failed": failed})
        print(f"error: {len(failed)} identity checks failed", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    logging.basicConfig(
        level=get_log_level(),
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
