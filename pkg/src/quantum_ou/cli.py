"""Command-line entry point: ``qou verify | norms | optimal-time | report-merge``.

Every check in a report has the form

    {id, suite, inputs, value, bound, relation, tolerance, slack, passed, wall_time}

where ``slack`` is positive exactly when the relation holds with room to
spare.  Exit codes: 0 when every check passes, 1 when any fails, 2 for an
invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import partial
from typing import Callable

import numpy as np

from . import hypercontractivity as hc
from . import meixner, ou_semigroup, schatten_lp, weighted_sequences
from .errors import QOUError
from .fock_space import GibbsSpec

SUITES = ("meixner", "bounds", "sequences", "schatten", "semigroup", "hypercontractivity")
AUX_COMMANDS = ("norms", "optimal-time")

DEFAULT_TOLS = {
    "orthogonality": 1e-8,
    "structure": 1e-11,
    "norm_oracle": 1e-9,
    "gram": 1e-8,
    "ccr": 1e-10,
    "eigen": 1e-6,
    "tau": 1e-12,
    "ratio": hc.RATIO_TOL,
    "bcl": 1e-10,
    "bisection": hc.DEFAULT_BISECTION_TOL,
}


ROUNDOFF_FLOOR = 1e-13


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    suite: str = "all"
    beta_grid: list = field(default_factory=lambda: [0.5, 1.0, 2.0])
    p_grid: list = field(default_factory=lambda: [3.0, 4.0, 8.0])
    dim: int | None = None
    degree_cap: int = 4
    seed: int = 0
    tol: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str = "json"
    jobs: int = 1
    timestamp: bool = True
    budget: int = hc.DEFAULT_BUDGET
    families: int = 200

    def validate(self) -> None:
        if self.suite not in SUITES + ("all",) + AUX_COMMANDS:
            raise ConfigError(f"unknown suite {self.suite!r}")
        if not self.beta_grid or not self.p_grid:
            raise ConfigError("beta and p grids must be nonempty")
        if any(not (b > 0 and math.isfinite(b)) for b in self.beta_grid):
            raise ConfigError("every beta must be positive and finite")
        if any(p < 2 for p in self.p_grid):
            raise ConfigError("every p must be >= 2")
        if self.dim is not None and self.dim < 16:
            raise ConfigError(f"dim must be >= 16, got {self.dim}")
        if self.degree_cap < 1:
            raise ConfigError("degree_cap must be >= 1")
        if self.degree_cap > self.min_dim() / 8:
            raise ConfigError(f"degree_cap={self.degree_cap} exceeds dim/8 for dim={self.min_dim()}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")
        if self.jobs < 1 or self.budget < 0 or self.families < 1:
            raise ConfigError("jobs and families must be >= 1 and budget >= 0")
        unknown = set(self.tol) - set(DEFAULT_TOLS)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
        if any(not (v >= 0) for v in self.tol.values()):
            raise ConfigError("tolerances must be nonnegative")

    def min_dim(self) -> int:
        if self.dim is not None:
            return self.dim
        return min(hc.recommended_dim(b) for b in self.beta_grid)

    def tols(self) -> dict:
        return {**DEFAULT_TOLS, **self.tol}


# --- check records ----------------------------------------------------------


def _num(x):
    if isinstance(x, (np.floating, np.integer)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def check(suite, cid, inputs, value, bound, relation, tolerance=0.0, wall_time=0.0) -> dict:
    """Build one record.  ``relation`` is ``"<="``, ``">="`` or ``">"``."""
    value, bound = float(value), float(bound)
    if relation == "<=":
        slack = bound + tolerance - value
        passed = slack >= 0
    elif relation == ">=":
        slack = value - bound + tolerance
        passed = slack >= 0
    elif relation == ">":
        slack = value - bound
        passed = slack > 0
    else:
        raise ValueError(relation)
    return {
        "id": cid,
        "suite": suite,
        "inputs": {k: _num(v) for k, v in inputs.items()},
        "value": _num(value),
        "bound": _num(bound),
        "relation": relation,
        "tolerance": _num(float(tolerance)),
        "slack": _num(slack),
        "passed": bool(passed),
        "wall_time": wall_time,
    }


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# --- suites (one task per beta) ---------------------------------------------


def _suite_meixner(beta: float, cfg: SuiteConfig) -> list[dict]:
    tol = cfg.tols()["orthogonality"]
    out = []
    for m in range(11):
        for l in range(11):
            with _Timer() as tm:
                value = meixner.orthogonality_sum(m, l, beta)
                target = meixner.orthogonality_target(m, l, beta)
                scale = math.sqrt(meixner.orthogonality_target(m, m, beta) * meixner.orthogonality_target(l, l, beta))
                err = abs(value - target) / scale
            out.append(check("meixner", f"orthogonality[m={m},l={l}]", {"beta": beta, "m": m, "l": l},
                             err, tol, "<=", 0.0, tm.elapsed))
    return out


def _suite_bounds(beta: float, cfg: SuiteConfig) -> list[dict]:
    out = []
    s = np.linspace(1.0, 50.0, 197)
    grids = [
        (meixner.BoundKind.POWER_SUM_SANDWICH, {"s": s, "beta": [beta]}),
        (meixner.BoundKind.MEIXNER_POINTWISE, {"k": range(21), "n": range(201), "beta": [beta]}),
    ]
    if beta == cfg.beta_grid[0]:
        grids.insert(0, (meixner.BoundKind.GAMMA_SANDWICH, {"s": np.linspace(1 + 1e-6, 50.0, 500)}))
    for kind, grid in grids:
        with _Timer() as tm:
            rep = meixner.verify_bounds(kind, grid)
        rel = ">" if rep.strict else ">="
        out.append(check("bounds", kind.value, {"beta": beta, "points": len(rep.grid)},
                         rep.worst_slack, 0.0, rel, 0.0, tm.elapsed))
    return out


def _random_families(n: int, seed: int, k_max: int = 10):
    rng = np.random.default_rng(seed)
    fams = []
    for _ in range(n):
        k = int(rng.integers(1, k_max + 1))
        m = int(rng.integers(-k, k + 1))
        fams.append(weighted_sequences.OffDiagonalCoeffs.random(k, m, rng))
    return fams


def _suite_sequences(beta: float, cfg: SuiteConfig) -> list[dict]:
    tol = cfg.tols()["structure"]
    fams = _random_families(cfg.families, cfg.seed)
    out = []
    if beta == cfg.beta_grid[0]:
        with _Timer() as tm:
            worst = 0.0
            for c in fams:
                modes = (["factor_out", "shift_up"] if c.m >= 1 else []) + (["negative_mirror"] if c.m < 0 else [])
                for mode in modes:
                    worst = max(worst, weighted_sequences.structure_residual(c, mode))
        out.append(check("sequences", "structure_maps", {"families": len(fams)}, worst, tol, "<=", 0.0, tm.elapsed))
    ps = sorted(set([2.0] + list(cfg.p_grid)))
    chain = weighted_sequences.constants(beta)
    with _Timer() as tm:
        worst_main, worst_ind = 0.0, 0.0
        for c in fams:
            norms = weighted_sequences.weighted_norm_grid(c, ps, [beta])[0]
            l2 = norms[ps.index(2.0)]
            for p, lhs in zip(ps, norms):
                rhs = weighted_sequences.band_prefactor(c.m, p, beta) * (chain.C_of_beta * p) ** (c.k / 2) * l2
                worst_main = max(worst_main, lhs / rhs)
                if c.m >= 0:
                    rhs_i = (2 * math.exp(beta / 2)) ** c.m * (chain.C3 * p) ** (c.k / 2) * l2
                    worst_ind = max(worst_ind, lhs / rhs_i)
    inputs = {"beta": beta, "families": len(fams), "p_grid": ",".join(f"{p:g}" for p in ps)}
    out.append(check("sequences", "main_lemma_ratio", inputs, worst_main, 1.0, "<=", 0.0, tm.elapsed))
    out.append(check("sequences", "induction_ratio", inputs, worst_ind, 1.0, "<=", 0.0, 0.0))
    return out


def _suite_schatten(beta: float, cfg: SuiteConfig) -> list[dict]:
    tols = cfg.tols()
    rng = np.random.default_rng(cfg.seed)
    out = []
    if beta == cfg.beta_grid[0]:
        for p in (1.0, 1.5, 2.0, 3.0, 8.0):
            with _Timer() as tm:
                worst = math.inf
                for _ in range(cfg.families):
                    a = rng.standard_normal(int(rng.integers(1, 201)))
                    lo, mid, hi, _ok = schatten_lp.sandwich_check(a, p)
                    worst = min(worst, mid - lo, hi - mid)
            out.append(check("schatten", f"sandwich[p={p:g}]", {"p": p, "samples": cfg.families},
                             worst, 0.0, ">=", 1e-12, tm.elapsed))
    dim = min(cfg.dim or 64, 64)
    spec = GibbsSpec(beta, dim, renormalize=True)
    for p in cfg.p_grid:
        with _Timer() as tm:
            worst = -math.inf
            for _ in range(cfg.families):
                h = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
                lhs, rhs, _ok = schatten_lp.bcl_check(h + h.conj().T, p, spec)
                worst = max(worst, lhs - rhs)
        out.append(check("schatten", f"bcl[p={p:g}]", {"beta": beta, "p": p, "dim": dim},
                         worst, 0.0, "<=", tols["bcl"], tm.elapsed))
    spec128 = GibbsSpec(beta, max(cfg.dim or 128, 128))
    fam_rng = np.random.default_rng(cfg.seed + 1)
    with _Timer() as tm:
        worst = 0.0
        for k in range(1, 7):
            for m in range(-k, k + 1):
                c = weighted_sequences.OffDiagonalCoeffs.random(k, m, fam_rng)
                for p in (2.0, 3.0, 4.0):
                    a = schatten_lp.band_norm_svd(c, p, spec128)
                    f = schatten_lp.band_norm_formula(c, p, beta)
                    worst = max(worst, abs(a - f) / f)
    out.append(check("schatten", "norm_oracle", {"beta": beta, "dim": spec128.dim}, worst,
                     tols["norm_oracle"], "<=", 0.0, tm.elapsed))
    return out


def semigroup_dim(beta: float) -> int:
    return 64 * math.ceil(1 / beta)


def _suite_semigroup(beta: float, cfg: SuiteConfig) -> list[dict]:
    tols = cfg.tols()
    params = ou_semigroup.solve_params(beta)
    dim = cfg.dim or semigroup_dim(beta)
    K = min(6, dim // 8)
    spec = GibbsSpec(beta, dim)
    out = [check("semigroup", "tau_closed_form", {"beta": beta}, abs(params.tau - math.tanh(beta / 2)),
                 tols["tau"], "<=")]
    with _Timer() as tm:
        basis = ou_semigroup.EigenBasis.build(spec, params, K)
    out.append(check("semigroup", "gram_defect", {"beta": beta, "dim": dim, "K": K}, basis.gram_defect,
                     tols["gram"], "<=", 0.0, tm.elapsed))
    for system in ("D", "A"):
        with _Timer() as tm:
            r = ou_semigroup.ccr_residual(spec, params, 8, system)
        out.append(check("semigroup", f"ccr[{system}]", {"beta": beta, "dim": dim, "buffer": 8}, r,
                         tols["ccr"], "<=", 0.0, tm.elapsed))
    big = GibbsSpec(beta, 2 * dim)
    for m in range(K + 1):
        for n in range(K + 1 - m):
            with _Timer() as tm:
                coarse = ou_semigroup.eigen_residual(m, n, spec, params)
                fine = ou_semigroup.eigen_residual(m, n, big, params)
            inputs = {"beta": beta, "m": m, "n": n, "dim": 2 * dim}
            out.append(check("semigroup", f"eigen[{m},{n}]", inputs, fine, tols["eigen"], "<=", 0.0, tm.elapsed))
            if m + n > 0:
                # once both sizes sit at the roundoff floor the ordering is noise
                out.append(check("semigroup", f"eigen_decrease[{m},{n}]", {**inputs, "coarse_dim": dim},
                                 fine, coarse, "<=", ROUNDOFF_FLOOR, 0.0))
    return out


def _hc_basis(beta: float, cfg: SuiteConfig):
    params = ou_semigroup.solve_params(beta)
    spec = GibbsSpec(beta, cfg.dim or hc.recommended_dim(beta))
    return spec, params, ou_semigroup.EigenBasis.build(spec, params, cfg.degree_cap)


def _suite_hypercontractivity(beta: float, cfg: SuiteConfig) -> list[dict]:
    tol = cfg.tols()["ratio"]
    spec, params, basis = _hc_basis(beta, cfg)
    out = []
    for p in cfg.p_grid:
        base = {"beta": beta, "p": p, "dim": spec.dim, "K": cfg.degree_cap, "budget": cfg.budget, "seed": cfg.seed}
        t_star = hc.certificate_time(p, params)
        with _Timer() as tm:
            r = hc.sup_ratio(t_star, p, spec, basis, cfg.budget, cfg.seed)
        out.append(check("hypercontractivity", f"contraction[p={p:g}]", {**base, "t": t_star}, r, 1.0, "<=",
                         tol, tm.elapsed))
        t_w = hc.witness_lower_bound(p, beta, params)
        t_fail = t_w - 0.05 / params.tau
        with _Timer() as tm:
            # any sample above 1 settles it, so the search may stop early
            r = hc.sup_ratio(t_fail, p, spec, basis, cfg.budget, cfg.seed, stop_above=1.0)
        out.append(check("hypercontractivity", f"failure[p={p:g}]", {**base, "t": t_fail}, r, 1.0, ">", 0.0,
                         tm.elapsed))
        lower = min(1 / beta, beta**-0.5) / (6 * math.sqrt(math.e)) * math.sqrt(p)
        out.append(check("hypercontractivity", f"witness_bound[p={p:g}]", {"beta": beta, "p": p},
                         math.exp(params.tau * t_w), lower, ">="))
    with _Timer() as tm:
        slope = hc.witness_growth_slope(beta, params)
    inputs = {"beta": beta, "p_grid": "4,8,16,32"}
    out.append(check("hypercontractivity", "growth_slope_min", inputs, slope, 0.8, ">=", 0.0, tm.elapsed))
    out.append(check("hypercontractivity", "growth_slope_max", inputs, slope, 1.2, "<="))
    return out


def _task_norms(beta: float, cfg: SuiteConfig) -> list[dict]:
    params = ou_semigroup.solve_params(beta)
    out = []
    for p in cfg.p_grid:
        with _Timer() as tm:
            nrm, err = hc.witness_norm(p, beta)
        lower = min(1 / beta, beta**-0.5) / (6 * math.sqrt(math.e)) * math.sqrt(p)
        inputs = {"beta": beta, "p": p, "truncation_error": err, "tau": params.tau,
                  "witness_time": hc.witness_lower_bound(p, beta, params),
                  "certificate_time": hc.certificate_time(p, params)}
        out.append(check("norms", f"witness_norm[p={p:g}]", inputs, nrm, lower, ">=", 0.0, tm.elapsed))
        if p > 2:
            lo, hi = hc.theory_bounds(p, beta)
            inner = hc.contraction_bound(p, beta)
            out.append(check("norms", f"ceiling_chain[p={p:g}]", {"beta": beta, "p": p, "C_tilde_bound": hi},
                             inner, hi, "<="))
            out.append(check("norms", f"witness_vs_lower[p={p:g}]", {"beta": beta, "p": p},
                             nrm**2, lo, ">="))
    return out


def _task_optimal_time(beta: float, cfg: SuiteConfig) -> list[dict]:
    spec, params, basis = _hc_basis(beta, cfg)
    tol = cfg.tols()["bisection"]
    out = []
    for p in cfg.p_grid:
        with _Timer() as tm:
            est = hc.optimal_time_estimate(p, spec, basis, cfg.budget, cfg.seed, tol)
        inputs = {"beta": beta, "p": p, "dim": spec.dim, "K": cfg.degree_cap, "budget": cfg.budget,
                  "seed": cfg.seed, "witness_lower": est.witness_lower, "theory_lower": est.theory_lower,
                  "theory_upper": est.theory_upper, "evaluations": est.evaluations, "note": est.note}
        out.append(check("optimal-time", f"t_hat_vs_witness[p={p:g}]", inputs, est.t_hat, est.witness_lower,
                         ">=", 0.0, tm.elapsed))
        out.append(check("optimal-time", f"t_hat_vs_theory[p={p:g}]", inputs, est.t_hat, est.theory_upper,
                         "<=", tol))
    return out


SUITE_TASKS: dict[str, Callable] = {
    "meixner": _suite_meixner,
    "bounds": _suite_bounds,
    "sequences": _suite_sequences,
    "schatten": _suite_schatten,
    "semigroup": _suite_semigroup,
    "hypercontractivity": _suite_hypercontractivity,
}


# --- running and reporting --------------------------------------------------


def _run_tasks(fn: Callable, cfg: SuiteConfig) -> list[dict]:
    task = partial(fn, cfg=cfg)
    if cfg.jobs > 1 and len(cfg.beta_grid) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(task, cfg.beta_grid))
    else:
        chunks = [task(b) for b in cfg.beta_grid]
    return [c for chunk in chunks for c in chunk]


def build_report(cfg: SuiteConfig, checks: list[dict], wall_time: float) -> dict:
    # where the report goes and how many workers made it do not change its content
    config = {k: v for k, v in dataclasses.asdict(cfg).items() if k not in ("output_path", "jobs")}
    report = {"config": config, "checks": checks}
    n_pass = sum(c["passed"] for c in checks)
    report["summary"] = {"passed": n_pass, "failed": len(checks) - n_pass, "wall_time": wall_time}
    if cfg.timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    else:
        for c in checks:
            c.pop("wall_time", None)
        report["summary"].pop("wall_time")
    return report


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    cols = ["id", "suite", "inputs", "value", "bound", "relation", "tolerance", "slack", "passed", "wall_time"]
    writer = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for c in report["checks"]:
        writer.writerow({**c, "inputs": json.dumps(c["inputs"], sort_keys=True)})
    return buf.getvalue()


def emit(report: dict, cfg: SuiteConfig) -> int:
    text = render(report, cfg.format)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["failed"] == 0 else 1


def run_suite(cfg: SuiteConfig, tasks: list[Callable] | None = None) -> int:
    """Run the configured suite(s), write the report and return the exit code."""
    cfg.validate()
    if tasks is None:
        names = SUITES if cfg.suite == "all" else (cfg.suite,)
        tasks = [SUITE_TASKS[n] for n in names]
    t0 = time.perf_counter()
    checks = [c for fn in tasks for c in _run_tasks(fn, cfg)]
    return emit(build_report(cfg, checks, time.perf_counter() - t0), cfg)


def merge_reports(paths: list[str]) -> dict:
    configs, checks, wall, stamped = [], [], 0.0, False
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            rep = json.load(fh)
        configs.append(rep["config"])
        checks.extend(rep["checks"])
        if "wall_time" in rep["summary"]:
            wall += rep["summary"]["wall_time"]
            stamped = True
    n_pass = sum(c["passed"] for c in checks)
    summary = {"passed": n_pass, "failed": len(checks) - n_pass}
    if stamped:
        summary["wall_time"] = wall
    return {"config": configs, "checks": checks, "summary": summary}


# --- argument parsing -------------------------------------------------------


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _tol_pair(text: str) -> tuple[str, float]:
    key, sep, val = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), float(val)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta", type=_floats, help="comma-separated inverse temperatures")
    parser.add_argument("--p", type=_floats, help="comma-separated exponents (>= 2)")
    parser.add_argument("--dim", type=int, help="truncation dimension (default depends on beta)")
    parser.add_argument("--degree-cap", type=int, help="largest m + n in the eigenbasis")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--budget", type=int, help="random samples per sup-ratio search")
    parser.add_argument("--families", type=int, help="random coefficient families / samples per check")
    parser.add_argument("--tol", type=_tol_pair, action="append", metavar="KEY=VALUE",
                        help=f"tolerance override; keys: {', '.join(DEFAULT_TOLS)}")
    parser.add_argument("--out", help="output file (default stdout)")
    parser.add_argument("--format", choices=["json", "csv"])
    parser.add_argument("--jobs", type=int, help="worker processes across beta values")
    parser.add_argument("--no-timestamp", action="store_true", help="omit timestamp and wall times")
    parser.add_argument("--config", help="JSON file with SuiteConfig fields; flags override it")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qou", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    _common(v)
    _common(sub.add_parser("norms", help="witness norms and the constant ceiling chain"))
    _common(sub.add_parser("optimal-time", help="bisection estimate of the optimal time"))
    m = sub.add_parser("report-merge", help="concatenate JSON reports")
    m.add_argument("reports", nargs="+")
    m.add_argument("--out")
    return parser


def config_from_args(args: argparse.Namespace, suite: str) -> SuiteConfig:
    base: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
        known = {f.name for f in dataclasses.fields(SuiteConfig)}
        unknown = set(base) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
    cfg = SuiteConfig(**base)
    cfg.suite = suite
    overrides = {
        "beta_grid": args.beta,
        "p_grid": args.p,
        "dim": args.dim,
        "degree_cap": args.degree_cap,
        "seed": args.seed,
        "budget": args.budget,
        "families": args.families,
        "output_path": args.out,
        "format": args.format,
        "jobs": args.jobs,
    }
    for key, val in overrides.items():
        if val is not None:
            setattr(cfg, key, val)
    if args.tol:
        cfg.tol = {**cfg.tol, **dict(args.tol)}
    if args.no_timestamp:
        cfg.timestamp = False
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "report-merge":
            report = merge_reports(args.reports)
            text = json.dumps(report, indent=2) + "\n"
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return 0 if report["summary"]["failed"] == 0 else 1
        suite = args.suite if args.command == "verify" else args.command
        cfg = config_from_args(args, suite)
        if args.command == "verify":
            return run_suite(cfg)
        task = _task_norms if args.command == "norms" else _task_optimal_time
        return run_suite(cfg, [task])
    except (ConfigError, QOUError, OSError, KeyError, json.JSONDecodeError, TypeError) as exc:
        print(f"qou: invalid configuration: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
