"""Command-line experiment runners: profiles | converge | decay | bench.

Configuration comes from an INI-style ``key = value`` file (``--config``)
overridden by command-line flags of the same names; unset keys fall back
to the built-in defaults (alpha=1, beta=1.5, pi_t=0.5, pi_c=1, e33=1,
grid_n=10000, order=1).  Each experiment writes CSV files (canonical
output, scientific notation with 16 significant digits) plus SVG charts
into ``output_dir``; file names are stable: <experiment>_<eps>.csv for
per-eps curve data and <experiment>_summary.csv for the cross-eps table.
Exit code is 0 on success and nonzero with a diagnostic on stderr for
configuration, validation or solver failures.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .analysis import convergence_study, decay_study
from .charts import line_chart
from .exact import exact_p, exact_q
from .grid import make_grid
from .model import Parameters, derive_constants, make_parameters
from .profiles import approximant, build_expansion
from .solver import (LayerResolutionError, layer_resolved, min_intervals,
                     solve_coupled_fd, solve_p_fd, solve_q_fd)

#: bench solves on a grid this many times finer than the minimal resolution
#: rule, so the FD discretization error stays well below the approximant gap
BENCH_REFINE = 4

TIMING_REPEATS = 5


class ConfigError(ValueError):
    """Bad configuration file or flag combination."""


@dataclass
class RunConfig:
    alpha: float = 1.0
    beta: float = 1.5
    pi_t: float = 0.5
    pi_c: float = 1.0
    e33: float = 1.0
    eps_list: tuple | None = None  # None -> per-experiment default
    grid_n: int = 10000
    order: int = 1
    norm_weight: str = "none"   # none | r2
    cutoff: str = "off"         # off | on
    cutoff_d: float = 0.25
    output_dir: str = "."
    experiment: str = ""

    def parameters(self, eps: float) -> Parameters:
        return make_parameters(self.alpha, self.beta, eps,
                               self.pi_t, self.pi_c, self.e33)

    @property
    def cutoff_margin(self) -> float | None:
        return self.cutoff_d if self.cutoff == "on" else None

    @property
    def weighted(self) -> bool:
        return self.norm_weight == "r2"


def _parse_eps_list(text: str) -> tuple:
    values = tuple(float(part) for part in text.split(",") if part.strip())
    if not values:
        raise ValueError("empty list")
    return values


def _parse_choice(*allowed):
    def parse(text: str) -> str:
        if text not in allowed:
            raise ValueError(f"must be one of {', '.join(allowed)}")
        return text
    return parse


_KEY_PARSERS = {
    "alpha": float,
    "beta": float,
    "pi_t": float,
    "pi_c": float,
    "e33": float,
    "eps_list": _parse_eps_list,
    "grid_n": int,
    "order": int,
    "norm_weight": _parse_choice("none", "r2"),
    "cutoff": _parse_choice("off", "on"),
    "cutoff_d": float,
    "output_dir": str,
}


def parse_config(path=None, overrides=None) -> RunConfig:
    """Merge config-file values and flag overrides onto the defaults.

    Unknown keys and malformed values are reported with the key name and
    the config-file line number.
    """
    config = RunConfig()
    if path is not None:
        text = Path(path).read_text()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line {lineno}: expected key=value, "
                                  f"got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _KEY_PARSERS:
                raise ConfigError(f"config line {lineno}: unknown key {key!r}")
            try:
                parsed = _KEY_PARSERS[key](value)
            except ValueError as exc:
                raise ConfigError(f"config line {lineno}: invalid value for "
                                  f"{key!r}: {value!r} ({exc})") from None
            setattr(config, key, parsed)
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(config, key, value)
    return config


def _geometric(start: float, stop: float, count: int) -> tuple:
    return tuple(float(e) for e in np.geomspace(start, stop, count))


_EPS_DEFAULTS = {
    "profiles": (0.1, 0.07, 0.04),
    "converge": _geometric(0.1, 0.01, 8),
    "decay": _geometric(0.1, 0.01, 8),
    "bench": _geometric(0.1, 0.02, 6),
}


def _eps_sweep(config: RunConfig) -> tuple:
    eps = config.eps_list
    if eps is None:
        eps = _EPS_DEFAULTS[config.experiment]
    return tuple(sorted(eps, reverse=True))


def _fmt(x) -> str:
    return f"{x:.15e}"


def _write_csv(path: Path, header, rows) -> Path:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell)
                              for cell in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _outdir(config: RunConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require_resolved(config: RunConfig, grid, params, eps):
    if not layer_resolved(grid, params, eps=eps):
        raise LayerResolutionError(
            f"eps={eps:g} with grid_n={grid.n} leaves the boundary layer "
            f"unresolved: dr={grid.dr:.3e} > eps/(10*gamma)="
            f"{eps / (10 * derive_constants(params).gamma):.3e}; "
            f"need grid_n >= {min_intervals(params, eps=eps)}")


def run_profiles(config: RunConfig) -> list:
    """Solve and tabulate q and p curves for each eps (FD, exact, approximant)."""
    config.experiment = config.experiment or "profiles"
    out = _outdir(config)
    eps_sweep = _eps_sweep(config)
    grid = make_grid(config.grid_n)
    expansion = None
    written = []
    summary_rows = []
    q_series = []
    p_series = []
    for eps in eps_sweep:
        params = config.parameters(eps)
        _require_resolved(config, grid, params, eps)
        if expansion is None:
            expansion = build_expansion(params, config.order)
        q_fd = solve_q_fd(params, grid)
        p_fd = solve_p_fd(params, grid, q_fd)
        r = grid.nodes
        q_ex = exact_q(params, r)
        p_ex = exact_p(params, r)
        q_ap = approximant(expansion, params, r, "q", config.cutoff_margin)
        p_ap = approximant(expansion, params, r, "p", config.cutoff_margin)
        rows = zip(r, q_fd.values, q_ex, q_ap, p_fd.values, p_ex, p_ap)
        written.append(_write_csv(
            out / f"{config.experiment}_{eps:g}.csv",
            ["r", "q_fd", "q_exact", "q_approx", "p_fd", "p_exact", "p_approx"],
            rows))
        summary_rows.append((eps,
                             np.max(np.abs(q_fd.values - q_ex)),
                             np.max(np.abs(p_fd.values - p_ex)),
                             np.max(np.abs(q_ap - q_ex)),
                             np.max(np.abs(p_ap - p_ex))))
        q_series.append((f"eps={eps:g}", r, q_fd.values))
        p_series.append((f"eps={eps:g}", r, p_fd.values))
    written.append(_write_csv(
        out / f"{config.experiment}_summary.csv",
        ["eps", "linf_q_fd", "linf_p_fd", "linf_q_approx", "linf_p_approx"],
        summary_rows))
    written.append(line_chart(out / f"{config.experiment}_q.svg", q_series,
                              "r", "q", "pressure difference q"))
    written.append(line_chart(out / f"{config.experiment}_p.svg", p_series,
                              "r", "p", "mean pressure p"))
    return written


def run_convergence(config: RunConfig) -> list:
    """Approximant-vs-closed-form error norms over the eps sweep, with slopes."""
    config.experiment = config.experiment or "converge"
    out = _outdir(config)
    eps_sweep = _eps_sweep(config)
    params = config.parameters(eps_sweep[0])
    report = convergence_study(params, eps_sweep, config.order,
                               grid_n=config.grid_n,
                               weighted=config.weighted,
                               cutoff=config.cutoff_margin)
    rows = [(eps, qn.l2, qn.h1, pn.l2, pn.h1)
            for eps, qn, pn in zip(report.eps_values, report.q_norms, report.p_norms)]
    rows.append(("slope", report.slopes["l2_q"], report.slopes["h1_q"],
                 report.slopes["l2_p"], report.slopes["h1_p"]))
    written = [_write_csv(out / f"{config.experiment}_summary.csv",
                          ["eps", "l2_q", "h1_q", "l2_p", "h1_p"], rows)]

    eps_arr = list(report.eps_values)
    k = config.order
    written.append(line_chart(
        out / f"{config.experiment}_l2.svg",
        [("q error", eps_arr, [n.l2 for n in report.q_norms]),
         ("p error", eps_arr, [n.l2 for n in report.p_norms])],
        "eps", "L2 error", f"L2 convergence, order {k}",
        logx=True, logy=True, guides=[(k + 1, f"slope {k + 1}")]))
    written.append(line_chart(
        out / f"{config.experiment}_h1.svg",
        [("q error", eps_arr, [n.h1 for n in report.q_norms]),
         ("p error", eps_arr, [n.h1 for n in report.p_norms])],
        "eps", "H1 error", f"H1 convergence, order {k}",
        logx=True, logy=True, guides=[(k + 0.5, f"slope {k + 0.5}")]))
    return written


def run_decay(config: RunConfig) -> list:
    """Inner-domain decay of q: fitted slope of log||q|| against 1/eps."""
    config.experiment = config.experiment or "decay"
    out = _outdir(config)
    eps_sweep = _eps_sweep(config)
    params = config.parameters(eps_sweep[0])
    report = decay_study(params, eps_sweep, d=config.cutoff_d)
    rows = [(eps, norm) for eps, norm in zip(report.eps_values, report.inner_norms)]
    rows.append(("slope", report.slope))
    rows.append(("reference_slope", report.reference_slope))
    written = [_write_csv(out / f"{config.experiment}_summary.csv",
                          ["eps", "l2_q_inner"], rows)]
    if not report.exact_decay:
        inv_eps = [1.0 / e for e in report.eps_values]
        fitted = [math.exp(report.slope * (x - inv_eps[0])) * report.inner_norms[0]
                  for x in inv_eps]
        written.append(line_chart(
            out / f"{config.experiment}.svg",
            [("||q|| on [0, 1-d]", inv_eps, list(report.inner_norms)),
             (f"fitted slope {report.slope:.4f}", inv_eps, fitted)],
            "1/eps", "L2 norm", f"decay at margin d={report.margin:g}",
            logy=True))
    return written


def _best_of(fn, repeats: int = TIMING_REPEATS) -> float:
    fn()  # warm-up
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run_bench(config: RunConfig) -> list:
    """Wall-clock cost of the full coupled solve vs approximant evaluation.

    For each eps the coupled system is solved on a layer-resolving grid
    (BENCH_REFINE times finer than the minimal resolution rule, so its
    discretization error stays below the approximant gap), and the order-k
    approximant is evaluated on the same grid.  Reports best-of-5 timings,
    the speedup, and the L2 gap between the two phase-pair solutions.
    """
    config.experiment = config.experiment or "bench"
    out = _outdir(config)
    eps_sweep = _eps_sweep(config)
    expansion = build_expansion(config.parameters(eps_sweep[0]), config.order)
    rows = []
    for eps in eps_sweep:
        params = config.parameters(eps)
        n = BENCH_REFINE * min_intervals(params)
        grid = make_grid(n)
        r = grid.nodes

        def full_solve():
            return solve_coupled_fd(params, grid)

        def approx_eval():
            q = approximant(expansion, params, r, "q", config.cutoff_margin)
            p = approximant(expansion, params, r, "p", config.cutoff_margin)
            return p + q, p - q

        t_full = _best_of(full_solve)
        t_approx = _best_of(approx_eval)
        pt_fd, pc_fd = full_solve()
        pt_ap, pc_ap = approx_eval()
        gap_t = np.trapezoid((pt_fd.values - pt_ap) ** 2, r)
        gap_c = np.trapezoid((pc_fd.values - pc_ap) ** 2, r)
        l2_gap = math.sqrt(gap_t + gap_c)
        rows.append((eps, str(n), t_full, t_approx, t_full / t_approx, l2_gap))
        print(f"eps={eps:<10g} n={n:<8d} t_full={t_full:.3e}s "
              f"t_approx={t_approx:.3e}s speedup={t_full / t_approx:.1f} "
              f"gap={l2_gap:.3e}")
    return [_write_csv(out / f"{config.experiment}_summary.csv",
                       ["eps", "n", "t_full", "t_approx", "speedup",
                        "l2_gap_between_them"], rows)]


_RUNNERS = {
    "profiles": run_profiles,
    "converge": run_convergence,
    "decay": run_decay,
    "bench": run_bench,
}


def _build_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biphaselab",
        description="biphase pressure problem: finite differences, closed "
                    "forms, and boundary-layer approximants")
    sub = parser.add_subparsers(dest="experiment", required=True)
    descriptions = {
        "profiles": "q and p curves per eps (FD, exact, approximant)",
        "converge": "approximant error norms and fitted slopes over an eps sweep",
        "decay": "inner-domain exponential decay study",
        "bench": "full coupled solve vs approximant evaluation timing",
    }
    for name, runner in _RUNNERS.items():
        p = sub.add_parser(name, help=descriptions[name])
        p.add_argument("--config", type=str, default=None,
                       help="INI-style key=value configuration file")
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--pi-t", dest="pi_t", type=float)
        p.add_argument("--pi-c", dest="pi_c", type=float)
        p.add_argument("--e33", type=float)
        p.add_argument("--eps-list", dest="eps_list", type=_parse_eps_list,
                       help="comma-separated eps values")
        p.add_argument("--grid-n", dest="grid_n", type=int)
        p.add_argument("--order", type=int)
        p.add_argument("--norm-weight", dest="norm_weight",
                       choices=("none", "r2"))
        p.add_argument("--cutoff", choices=("off", "on"))
        p.add_argument("--cutoff-d", dest="cutoff_d", type=float)
        p.add_argument("--output-dir", dest="output_dir", type=str)
    return parser


def main(argv=None) -> int:
    args = _build_argparser().parse_args(argv)
    overrides = {f.name: getattr(args, f.name, None) for f in fields(RunConfig)
                 if f.name != "experiment"}
    try:
        config = parse_config(args.config, overrides)
        config.experiment = args.experiment
        written = _RUNNERS[args.experiment](config)
    except (ConfigError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


def console_main():
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
