"""Command-line front end.

Angles are degrees and bandwidths are Hz on the command line; both are
converted at the boundary. Rates are reported normalized to I0^2/4.

Exit codes: 0 success, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .analyzers import AnalyzerSettings, singles_mc
from .bellstats import ChshAngles, DegenerateCorrelationError, analytic_rate_fn, chsh_s, classical_rate_fn, mc_rate_fn
from .coincidence import (
    CoincidenceMode,
    classical_rate_analytic,
    coincidence_grid_mc,
    coincidence_rate_analytic,
    cross_term_contrast,
    decoherence_scan,
    fringe_visibility,
)
from .ensemble import DEFAULT_SEED
from .pairmodel import SourceConfig, hz_to_rad_s

EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_TRIALS = 100_000
MODES = {"post": "post_selected", "post_selected": "post_selected", "classical": "classical"}


class UsageError(Exception):
    pass


def _num(x: float) -> float:
    # Outputs are O(1) normalized quantities; 12 significant digits and a
    # roundoff floor keep them byte-stable across kernel backends.
    if abs(x) < 1e-14:
        return 0.0
    return float(f"{x:.12g}")


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{_num(x):.12g}"
    return str(x)


@dataclass(frozen=True)
class SweepRequest:
    xi_start: float
    xi_end: float
    xi_steps: int
    theta_start: float
    theta_end: float
    theta_steps: int
    mode: CoincidenceMode
    output: str = "csv"
    trials: int | None = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.xi_steps < 1 or self.theta_steps < 1:
            raise UsageError("steps must be >= 1")
        if self.xi_start > self.xi_end or self.theta_start > self.theta_end:
            raise UsageError("start must not exceed end")

    @staticmethod
    def axis(start: float, end: float, steps: int) -> list[float]:
        if steps == 1:
            return [start]
        return [float(v) for v in np.linspace(start, end, steps)]


# ---------------------------------------------------------------- helpers


def _load_source(args) -> tuple[SourceConfig, int]:
    seed = args.seed
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise UsageError("config document must be a JSON object")
        try:
            config = SourceConfig.from_dict(doc)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad config: {exc}") from exc
        if seed is None and "master_seed" in doc:
            seed = int(doc["master_seed"])
    else:
        config = SourceConfig()
    bandwidth = getattr(args, "bandwidth", None)
    if bandwidth is not None:
        if bandwidth < 0:
            raise UsageError("--bandwidth must be >= 0")
        config = config.with_(bandwidth_sigma=hz_to_rad_s(bandwidth))
    return config, DEFAULT_SEED if seed is None else seed


def _trials(args, default=DEFAULT_TRIALS) -> int:
    n = default if args.trials is None else args.trials
    if n < 1:
        raise UsageError("--trials must be >= 1")
    return n


def _table(columns: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(
            [{c: (_num(v) if isinstance(v, float) else v) for c, v in zip(columns, row)} for row in rows],
            indent=2,
        ) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _mode(name: str, tau: float = 0.0, time_model: str = "path_time") -> CoincidenceMode:
    return CoincidenceMode(MODES[name], tau, time_model)


def _rate_norm(settings: AnalyzerSettings, mode: CoincidenceMode) -> float:
    if mode.mode == "post_selected":
        return coincidence_rate_analytic(settings) * 4
    return classical_rate_analytic(settings) * 4


def _grid_rates(grid, config, mode, trials, seed, workers, analytic):
    """Normalized (rate, stderr) for each settings in ``grid``."""
    if analytic:
        return [(_rate_norm(s, mode), 0.0) for s in grid]
    norm = 4.0 / config.i0 ** 2
    points = coincidence_grid_mc(grid, config, mode, trials, seed, workers)
    return [(p.rate * norm, p.stat_error * norm) for p in points]


# ---------------------------------------------------------------- commands


def cmd_singles(args) -> int:
    config, seed = _load_source(args)
    trials = _trials(args)
    if args.xi is None and args.theta is None:
        raise UsageError("give --xi and/or --theta")
    rows = []
    for detector, angle in (("Ds", args.xi), ("Di", args.theta)):
        if angle is None:
            continue
        acc = singles_mc(config, math.radians(angle), detector, trials, seed, args.workers)
        rows.append([detector, float(angle), float(acc.mean), float(acc.stderr), trials, seed])
    _emit(_table(["detector", "angle_deg", "mean_intensity", "stderr", "trials", "seed"], rows, args.format), args)
    return 0


def cmd_coincidence(args) -> int:
    config, seed = _load_source(args)
    mode = _mode(args.mode, args.tau, args.time_model)
    settings = AnalyzerSettings.from_degrees(args.xi, args.theta)
    analytic = args.analytic and mode.tau == 0
    trials = _trials(args)
    [(rate, err)] = _grid_rates([settings], config, mode, trials, seed, args.workers, analytic)
    row = [float(args.xi), float(args.theta), rate, err, mode.mode, "analytic" if analytic else trials, seed]
    _emit(_table(["xi_deg", "theta_deg", "rate_norm", "stderr", "mode", "trials", "seed"], [row], args.format), args)
    return 0


def cmd_sweep(args) -> int:
    config, seed = _load_source(args)
    req = SweepRequest(
        args.xi_start, args.xi_end, args.xi_steps,
        args.theta_start, args.theta_end, args.theta_steps,
        _mode(args.mode), args.format, args.trials, seed,
    )
    xis = req.axis(req.xi_start, req.xi_end, req.xi_steps)
    thetas = req.axis(req.theta_start, req.theta_end, req.theta_steps)
    cells = [(x, t) for x in xis for t in thetas]
    grid = [AnalyzerSettings.from_degrees(x, t) for x, t in cells]
    analytic = req.trials is None
    rates = _grid_rates(grid, config, req.mode, req.trials or 1, seed, args.workers, analytic)
    rows = [[x, t, r, e] for (x, t), (r, e) in zip(cells, rates)]
    _emit(_table(["xi_deg", "theta_deg", "rate_norm", "stderr"], rows, args.format), args)
    return 0


def _parse_angles(text: str) -> ChshAngles:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed angle list {text!r}") from None
    if len(values) != 4 or not all(math.isfinite(v) for v in values):
        raise UsageError(f"--angles needs four comma-separated degrees, got {text!r}")
    return ChshAngles.from_degrees(*values)


def cmd_chsh(args) -> int:
    angles = _parse_angles(args.angles)
    config, seed = _load_source(args)
    mode = _mode(args.mode)
    analytic = args.analytic or args.trials is None
    if analytic:
        rate_fn = analytic_rate_fn(config.i0) if mode.mode == "post_selected" else classical_rate_fn(config.i0)
    else:
        rate_fn = mc_rate_fn(config, mode, _trials(args), seed, args.workers)
    try:
        res = chsh_s(angles, rate_fn)
    except DegenerateCorrelationError as exc:
        raise UsageError(str(exc)) from exc
    report = {
        "e_ab": _num(res.e_values[0]),
        "e_abp": _num(res.e_values[1]),
        "e_apb": _num(res.e_values[2]),
        "e_apbp": _num(res.e_values[3]),
        "s": _num(res.s_value),
        "stderr": _num(res.stat_error),
        "mode": mode.mode,
        "angles_deg": [_num(math.degrees(a)) for a in (angles.a, angles.a_prime, angles.b, angles.b_prime)],
        "trials": None if analytic else _trials(args),
        "seed": None if analytic else seed,
    }
    _emit(json.dumps(report, indent=2) + "\n", args)
    return 0


def cmd_decohere(args) -> int:
    if args.bandwidth is None or not args.bandwidth > 0:
        raise UsageError("--bandwidth must be > 0 (decoherence is undefined at zero bandwidth)")
    if not args.tau_max > 0 or args.steps < 2:
        raise UsageError("--tau-max must be > 0 and --steps >= 2")
    config, seed = _load_source(args)
    sigma = config.bandwidth_sigma
    config = config.with_(
        spectrum_kind="gaussian", phase_sampling="physical", time_window=max(config.time_window, 10.0 / sigma)
    )
    settings = AnalyzerSettings.from_degrees(args.xi, args.theta)
    taus = [float(t) for t in np.linspace(0.0, args.tau_max, args.steps)]
    trials = _trials(args)
    points = decoherence_scan(settings, config, taus, trials, seed, args.workers)
    norm = 4.0 / config.i0 ** 2
    rows = []
    for tau, p in zip(taus, points):
        try:
            c, ce = cross_term_contrast(p, config.i0)
        except ValueError:
            c, ce = float("nan"), float("nan")
        rows.append([tau, p.rate * norm, p.stat_error * norm, c, ce])
    _emit(_table(["tau_s", "rate_norm", "stderr", "contrast", "contrast_stderr"], rows, args.format), args)
    return 0


def cmd_classical(args) -> int:
    config, seed = _load_source(args)
    trials = _trials(args)
    thetas = SweepRequest.axis(0.0, 180.0, args.theta_steps + 1)[:-1]
    grid = [AnalyzerSettings.from_degrees(args.xi, t) for t in thetas]
    rates = _grid_rates(grid, config, _mode("classical"), trials, seed, args.workers, False)
    oracle = [_rate_norm(s, _mode("classical")) for s in grid]
    rows = [[args.xi, t, r, e, o] for t, (r, e), o in zip(thetas, rates, oracle)]
    columns = ["xi_deg", "theta_deg", "rate_norm", "stderr", "oracle_norm"]
    if args.format == "json":
        doc = {
            "xi_deg": _num(args.xi),
            "visibility": _num(fringe_visibility([r for r, _ in rates])),
            "oracle_visibility": _num(abs(math.sin(2 * math.radians(args.xi))) / 2),
            "trials": trials,
            "seed": seed,
            "rows": json.loads(_table(columns, rows, "json")),
        }
        _emit(json.dumps(doc, indent=2) + "\n", args)
    else:
        _emit(_table(columns, rows, "csv"), args)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"master seed (default {DEFAULT_SEED})")
    common.add_argument("--trials", type=int, default=None, help="Monte Carlo trials")
    common.add_argument("--config", metavar="PATH", help="JSON source configuration")
    common.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo chunks")

    parser = argparse.ArgumentParser(prog="sagnac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("singles", parents=[common], help="single-detector mean intensities")
    p.add_argument("--xi", type=float, help="signal polarizer angle, degrees")
    p.add_argument("--theta", type=float, help="idler polarizer angle, degrees")
    p.add_argument("--bandwidth", type=float, help="detuning std. dev., Hz")
    p.set_defaults(func=cmd_singles)

    p = sub.add_parser("coincidence", parents=[common], help="coincidence rate at one setting")
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--mode", choices=sorted(MODES), default="post")
    p.add_argument("--tau", type=float, default=0.0, help="idler delay, s")
    p.add_argument("--time-model", choices=["path_time", "detector_time"], default="path_time")
    p.add_argument("--analytic", action="store_true")
    p.add_argument("--bandwidth", type=float, help="detuning std. dev., Hz")
    p.set_defaults(func=cmd_coincidence)

    p = sub.add_parser("sweep", parents=[common], help="(xi, theta) grid of normalized coincidence rates")
    for name in ("xi", "theta"):
        p.add_argument(f"--{name}-start", type=float, default=0.0)
        p.add_argument(f"--{name}-end", type=float, default=180.0)
        p.add_argument(f"--{name}-steps", type=int, default=37, help="grid points, endpoints included")
    p.add_argument("--mode", choices=sorted(MODES), default="post")
    p.add_argument("--bandwidth", type=float, help="detuning std. dev., Hz")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("chsh", parents=[common], help="CHSH Bell parameter report (JSON)")
    p.add_argument("--angles", default="0,45,22.5,67.5", help="a,a',b,b' in degrees")
    p.add_argument("--mode", choices=sorted(MODES), default="post")
    p.add_argument("--analytic", action="store_true", help="closed-form rates even if --trials is given")
    p.add_argument("--bandwidth", type=float, help="detuning std. dev., Hz")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("decohere", parents=[common], help="post-selected rate versus idler delay")
    p.add_argument("--bandwidth", type=float, help="Gaussian detuning std. dev., Hz (required, > 0)")
    p.add_argument("--tau-max", type=float, required=True, help="largest delay, s")
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--xi", type=float, default=45.0)
    p.add_argument("--theta", type=float, default=135.0)
    p.set_defaults(func=cmd_decohere)

    p = sub.add_parser("classical", parents=[common], help="theta fringe without post-selection")
    p.add_argument("--xi", type=float, default=45.0)
    p.add_argument("--theta-steps", type=int, default=36, help="points over [0, 180)")
    p.add_argument("--bandwidth", type=float, help="detuning std. dev., Hz")
    p.set_defaults(func=cmd_classical)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog} {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
