"""Command-line interface.

Exit codes: 0 success or fit passed, 1 fit failed, 2 usage error, 3 I/O error.
Every output file gets a sibling ``*.manifest.json`` from which the run can
be replayed with ``linefield replay``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, analytic
from .errors import BadEccentricity
from .montecarlo import ConfigError, EmpiricalDistribution, SimulationConfig, default_workers, run
from .sampling import (
    FIXED_LINES,
    AngleModel,
    AngleRange,
    Circle,
    FixedLine,
    Interval,
    Rectangle,
    Square,
    ThreeRandom,
    Weighting,
    draw_window_lines,
    inclination_of_normal,
)
from .stats import gof_report
from .svg import overlay

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
DENSITY_CASES = {"A": "A", "B": "B", "C": "C", "D": "D", "diag-const": "DiagConst", "diag-sine": "DiagSine"}


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def env_seed() -> int:
    raw = os.environ.get("LINEFIELD_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LINEFIELD_SEED must be an integer, got {raw!r}") from None


def manifest_path(out: Path) -> Path:
    return out.with_name(out.stem + ".manifest.json")


def write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def histogram_csv(e: EmpiricalDistribution) -> str:
    lines = ["bin_left,bin_right,count,density"]
    for lo, hi, c, d in zip(e.edges[:-1], e.edges[1:], e.counts, e.density):
        lines.append(f"{fmt(lo)},{fmt(hi)},{int(c)},{fmt(d)}")
    return "\n".join(lines) + "\n"


def write_manifest(out: Path, manifest: dict) -> None:
    write_text(manifest_path(out), json.dumps(manifest, indent=2, sort_keys=True) + "\n")


# -- scenario flags -------------------------------------------------------------


def add_scenario_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--case", choices=["A", "B", "C", "D"], help="three random lines under model A-D")
    g.add_argument("--fixed", choices=sorted(FIXED_LINES), help="one fixed line plus two restricted random lines")
    p.add_argument("--model", choices=["constant", "sine"], help="weighting for --fixed scenarios")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, help="defaults to $LINEFIELD_SEED, then 0")
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--workers", type=int, default=None)


def scenario_from_args(args):
    if args.case:
        if args.model:
            raise UsageError("--model only applies to --fixed scenarios")
        return ThreeRandom(AngleModel.for_case(args.case))
    if not args.model:
        raise UsageError("--fixed needs --model {constant,sine}")
    return FixedLine(args.fixed, AngleModel(Weighting(args.model), AngleRange.RESTRICTED))


def config_from_args(args, retain: bool) -> SimulationConfig:
    seed = env_seed() if args.seed is None else args.seed
    cfg = SimulationConfig(
        scenario=scenario_from_args(args),
        n=args.n,
        seed=seed,
        bins=args.bins,
        retain_samples=retain,
        workers=args.workers or default_workers(),
    )
    try:
        cfg.validate()
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    return cfg


def base_manifest(args, argv, cfg: SimulationConfig | None = None) -> dict:
    m = {"command": args.command, "argv": list(argv), "tool_version": __version__}
    if cfg is not None:
        s = cfg.scenario
        m.update(
            scenario=s.label if isinstance(s, ThreeRandom) else f"fixed:{s.name}",
            model=f"{s.model.weighting.value}/{s.model.range.value}",
            n=cfg.n,
            seed=cfg.seed,
            bins=cfg.bins,
        )
    return m


def reference_for(scenario):
    """(cdf, pdf, breakpoints, obtuse probability, curve label) for a scenario."""
    if isinstance(scenario, ThreeRandom):
        case = scenario.model.case_id
    elif scenario.name in ("diagonal", "antidiagonal"):
        case = "DiagConst" if scenario.model.weighting is Weighting.CONSTANT else "DiagSine"
    else:
        cdf = analytic.tabulated_oracle_cdf(scenario.fixed.omega, scenario.model)
        p = 1.0 - analytic.scenario_cdf_oracle(scenario.fixed.omega, scenario.model, math.pi / 2)
        return cdf, None, (), p, "quadrature oracle"
    d = analytic.density(case)
    return d.cdf, d.pdf, (math.pi / 2,), d.obtuse_prob, f"case {case}"


def curve_points(cdf, pdf, lo, hi, points=400):
    xs = np.linspace(lo, hi, points)
    if pdf is not None:
        return xs, np.asarray(pdf(xs), dtype=float)
    # oracle scenarios: density from the tabulated CDF
    return xs, np.gradient(np.asarray(cdf(xs), dtype=float), xs)


# -- commands -------------------------------------------------------------------


def cmd_simulate(args, argv) -> int:
    cfg = config_from_args(args, retain=False)
    t0 = time.perf_counter()
    e = run(cfg)
    out = Path(args.out)
    write_text(out, histogram_csv(e))
    m = base_manifest(args, argv, cfg)
    m.update(
        outputs=[str(out)],
        obtuse_count=e.obtuse_count,
        degenerate_resamples=e.degenerate_resamples,
        duration_s=time.perf_counter() - t0,
    )
    write_manifest(out, m)
    return EXIT_OK


def cmd_density(args, argv) -> int:
    case = DENSITY_CASES[args.case]
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    t0 = time.perf_counter()
    d = analytic.density(case)
    xs = np.linspace(*d.support, args.points)
    pdf, cdf = d.pdf(xs), d.cdf(xs)
    lines = ["alpha,pdf,cdf"] + [f"{fmt(x)},{fmt(p)},{fmt(c)}" for x, p, c in zip(xs, pdf, cdf)]
    out = Path(args.out)
    write_text(out, "\n".join(lines) + "\n")
    m = base_manifest(args, argv)
    m.update(
        case=case,
        points=args.points,
        support=list(d.support),
        obtuse_prob=d.obtuse_prob,
        mode=d.mode,
        outputs=[str(out)],
        duration_s=time.perf_counter() - t0,
    )
    write_manifest(out, m)
    return EXIT_OK


def cmd_compare(args, argv) -> int:
    cfg = config_from_args(args, retain=True)
    t0 = time.perf_counter()
    e = run(cfg)
    cdf, pdf, brk, p_obtuse, label = reference_for(cfg.scenario)
    report = gof_report(e, cdf, alpha=args.alpha, pdf=pdf, obtuse_p=p_obtuse, breakpoints=brk)
    out, svg = Path(args.out), Path(args.svg)
    cx, cy = curve_points(cdf, pdf, e.edges[0], e.edges[-1])
    write_text(svg, overlay(e.edges, e.density, cx, cy, title=f"{base_manifest(args, argv, cfg)['scenario']} vs {label}"))
    m = base_manifest(args, argv, cfg)
    m.update(alpha=args.alpha, reference=label, outputs=[str(out), str(svg)], duration_s=time.perf_counter() - t0)
    write_text(out, json.dumps({**report.as_dict(), "manifest": m}, indent=2) + "\n")
    write_manifest(out, m)
    return EXIT_OK if report.pass_ else EXIT_FAIL


def window_from_args(args):
    if args.window != "rect" and args.eps is not None:
        raise UsageError("--eps only applies to --window rect")
    if args.window == "rect":
        try:
            return Rectangle.from_eccentricity(0.0 if args.eps is None else args.eps)
        except BadEccentricity as exc:
            raise UsageError(str(exc)) from None
    return {"circle": Circle(1.0), "square": Square(1.0), "interval": Interval(1.0)}[args.window]


def cmd_window(args, argv) -> int:
    window = window_from_args(args)
    if args.n < 1 or args.bins < 4:
        raise UsageError("--n must be >= 1 and --bins >= 4")
    seed = env_seed() if args.seed is None else args.seed
    reference = {"window": window, "interval": Interval(1.0), "circle": Circle(1.0)}[args.reference]
    t0 = time.perf_counter()
    _, theta = draw_window_lines(window, seed, 0, args.n)
    omega = inclination_of_normal(theta)
    e = EmpiricalDistribution.from_samples(omega, np.linspace(0.0, math.pi, args.bins + 1), retain=True)
    report = gof_report(
        e,
        lambda w: analytic.window_cdf(reference, w),
        alpha=args.alpha,
        pdf=lambda w: analytic.window_pdf(reference, w),
        breakpoints=(math.pi / 2,),
    )
    out, svg = Path(args.out), Path(args.svg)
    cx = np.linspace(0.0, math.pi, 400, endpoint=False)
    write_text(
        svg,
        overlay(e.edges, e.density, cx, analytic.window_pdf(reference, cx), title=f"{args.window} window", xlabel="inclination (rad)"),
    )
    hist = out.with_name(out.stem + ".histogram.csv")
    write_text(hist, histogram_csv(e))
    m = base_manifest(args, argv)
    m.update(
        window=repr(window),
        reference=args.reference,
        n=args.n,
        seed=seed,
        bins=args.bins,
        alpha=args.alpha,
        outputs=[str(out), str(svg), str(hist)],
        duration_s=time.perf_counter() - t0,
    )
    write_text(out, json.dumps({**report.as_dict(), "manifest": m}, indent=2) + "\n")
    write_manifest(out, m)
    return EXIT_OK if report.pass_ else EXIT_FAIL


def cmd_replay(args, argv) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"linefield: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        raise UsageError(f"not a manifest: {exc}") from None
    if "argv" not in manifest:
        raise UsageError("manifest has no argv")
    return main(manifest["argv"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linefield", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="histogram maximum angles of random triangles")
    add_scenario_flags(p)
    p.add_argument("--out", default="histogram.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("density", help="tabulate a closed-form maximum-angle law")
    p.add_argument("--case", required=True, choices=list(DENSITY_CASES))
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--out", default="density.csv")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("compare", help="simulate and test the fit against the analytic law")
    add_scenario_flags(p)
    p.add_argument("--alpha", type=float, choices=[0.05, 0.01, 0.001], default=0.001)
    p.add_argument("--out", default="report.json")
    p.add_argument("--svg", default="report.svg")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("window", help="inclinations of uniform lines hitting a window")
    p.add_argument("--window", required=True, choices=["interval", "square", "rect", "circle"])
    p.add_argument("--eps", type=float, default=None, help="rectangle eccentricity in [0, 1)")
    p.add_argument("--reference", choices=["window", "interval", "circle"], default="window")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--alpha", type=float, choices=[0.05, 0.01, 0.001], default=0.001)
    p.add_argument("--out", default="window.json")
    p.add_argument("--svg", default="window.svg")
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("replay", help="re-run a command from its manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"linefield {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"linefield: {exc}", file=sys.stderr)
        return EXIT_IO
