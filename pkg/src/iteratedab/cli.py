"""Command line front end: ``iteratedab eval | verify | solve``.

Settings come from an optional JSON config file (``--config``) overridden
by flags.  Outputs go to ``--out``, else ``$ITERATEDAB_OUTPUT_DIR``, else
the working directory.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input or a
domain/convergence error, 3 an equation without a real series solution.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, ode_series
from .classical_ops import MULTIPLIERS
from .errors import (
    DiscriminantError,
    IteratedABError,
    ResonanceError,
    SingularDenominatorError,
)
from .fps import FracPowerSeries, SampledSignal, eval_fps, sample_fps, shift_count
from .iterated_ab import IteratedOrder, iab_apply_fps, iab_apply_sampled, iab_iterate_check
from .specfun import Tolerance, mittag_leffler

OUTPUT_ENV = "ITERATEDAB_OUTPUT_DIR"

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_NO_SOLUTION = 0, 1, 2, 3


@dataclass
class RunConfig:
    alpha: float = 0.5
    beta: float = 1.0
    multiplier: str = "one"
    interval: tuple = (0.0, 1.0)
    n_points: int = 101
    tolerance: float = 1e-15
    max_terms: int = 2000
    out: str | None = None
    seed: int = 0

    def order(self) -> IteratedOrder:
        return IteratedOrder(self.alpha, self.beta)

    def tol(self) -> Tolerance:
        return Tolerance(self.tolerance, self.max_terms)

    def B(self):
        try:
            return MULTIPLIERS[self.multiplier]
        except KeyError:
            raise IteratedABError(
                f"unknown multiplier {self.multiplier!r}; available: {sorted(MULTIPLIERS)}"
            ) from None

    def output_dir(self) -> Path:
        path = Path(self.out or os.environ.get(OUTPUT_ENV) or ".")
        path.mkdir(parents=True, exist_ok=True)
        return path

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["interval"] = list(self.interval)
        return d


# --- function specs ----------------------------------------------------------

@dataclass(frozen=True)
class FunctionSpec:
    """``const:VALUE``, ``power:MU`` (t**MU on the grid) or ``fps:ALPHA:c0,c1,...``."""

    kind: str
    params: tuple

    @classmethod
    def parse(cls, text: str) -> "FunctionSpec":
        kind, _, rest = text.partition(":")
        if kind == "const":
            return cls("const", (float(rest),))
        if kind == "power":
            mu = float(rest)
            if mu < 0:
                raise IteratedABError("power exponent must be >= 0")
            return cls("power", (mu,))
        if kind == "fps":
            alpha, _, coeffs = rest.partition(":")
            values = tuple(float(c) for c in coeffs.split(",") if c.strip())
            FracPowerSeries(float(alpha), values)
            return cls("fps", (float(alpha),) + values)
        raise IteratedABError(f"cannot parse function spec {text!r}")

    def __str__(self):
        if self.kind == "fps":
            return f"fps:{self.params[0]!r}:" + ",".join(repr(c) for c in self.params[1:])
        return f"{self.kind}:{self.params[0]!r}"

    def laplace_power(self) -> float:
        """Exponent ``p`` such that the function is a nonzero multiple of ``t**p``."""
        if self.kind == "power":
            return self.params[0]
        if self.kind == "const" and self.params[0] != 0.0:
            return 0.0
        raise IteratedABError("Laplace checks need const:V with V != 0 or power:MU")

    def evaluate(self, t: np.ndarray, a: float) -> np.ndarray:
        if self.kind == "const":
            return np.full_like(t, self.params[0])
        if self.kind == "power":
            return (t - a) ** self.params[0]
        return eval_fps(self.series(a), t)

    def series(self, a: float, alpha: float | None = None) -> FracPowerSeries | None:
        """Representation as a series with base order ``alpha``, if one exists."""
        if self.kind == "fps":
            s = FracPowerSeries(self.params[0], self.params[1:], a)
            return s if alpha is None or alpha == s.alpha else None
        if alpha is None or not 0.0 < alpha < 1.0:
            return None
        if self.kind == "const":
            return FracPowerSeries(alpha, [self.params[0]], a)
        n = shift_count(self.params[0], alpha)
        if n is None:
            return None
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        return FracPowerSeries(alpha, coeffs, a)


def _fmt(x) -> str:
    return repr(float(x))


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: Path, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- commands ----------------------------------------------------------------

def cmd_eval(config: RunConfig, func: FunctionSpec, method: str = "auto") -> Path:
    """Write ``(t, f, iab_f)`` rows over the configured grid to ``eval.csv``."""
    a, b = config.interval
    order, B, tol = config.order(), config.B(), config.tol()
    t = np.linspace(a, b, config.n_points)
    f_values = func.evaluate(t, a)
    series = func.series(a, order.alpha if order.alpha > 0 else None)
    if method == "series" and series is None and order.alpha > 0:
        raise IteratedABError(f"{func} has no series form with base order {order.alpha}")
    if method != "sampled" and series is not None:
        result = iab_apply_fps(order, B, series, tol, interval_length=b - a)
        g = eval_fps(result, t)
    else:
        g = iab_apply_sampled(order, B, SampledSignal(a, b, f_values), tol).values
    path = config.output_dir() / "eval.csv"
    _write_csv(path, ["t", "f", "iab_f"], zip(t, f_values, g))
    return path


def _check(name, passed, **detail):
    return {"name": name, "status": "pass" if passed else "fail", **detail}


def _random_series(rng, alpha, origin=0.0, max_len=10):
    return FracPowerSeries(alpha, rng.uniform(-1.0, 1.0, rng.integers(1, max_len + 1)), origin)


def suite_semigroup(config: RunConfig, n_random: int = 200) -> list:
    rng = np.random.default_rng(config.seed)
    B, tol = config.B(), config.tol()
    checks = []
    for i in range(n_random):
        alpha = float(rng.uniform(0.1, 0.9))
        beta, gamma = (float(x) for x in rng.uniform(-2.0, 2.0, 2))
        f = _random_series(rng, alpha)
        res = analysis.semigroup_residual(alpha, beta, gamma, B, f, tol, n_terms=30, relative=True)
        inv = analysis.semigroup_residual(alpha, beta, -beta, B, f, tol, n_terms=30, relative=True)
        checks.append(_check(f"semigroup[{i}]", res <= 1e-9 and inv <= 1e-9, alpha=alpha,
                             beta=beta, gamma=gamma, residual=res, inverse_residual=inv))
    if 0.0 < config.alpha < 1.0:
        f = FracPowerSeries(config.alpha, [1.0])
        res = analysis.semigroup_residual(config.alpha, config.beta, 0.7, B, f, tol,
                                          n_terms=30, relative=True)
        checks.append(_check("semigroup[config]", res <= 1e-9, residual=res))
    return checks


def suite_laplace(config: RunConfig, s_values=(1.0, 2.0, 4.0, 8.0), powers=(0.0, 1.0, 0.5)) -> list:
    checks = []
    for p in powers:
        report = analysis.laplace_check(config.order(), config.B(), p, s_values, tol=config.tol())
        checks.append(_check(f"laplace[t^{p:g}]", report.max_rel_error <= 1e-3,
                             entries=report.entries(), T_horizon=report.T_horizon))
    return checks


def suite_bounds(config: RunConfig, n_random: int = 20) -> list:
    rng = np.random.default_rng(config.seed)
    a, b = config.interval
    order = config.order()
    fs = [_random_series(rng, 0.5, a) for _ in range(n_random)]
    try:
        report = analysis.verify_bound(order, config.B(), a, b, fs, config.n_points, config.tol())
    except analysis.BoundViolation as exc:
        return [_check("bounds", False, error=str(exc), ratio=exc.ratio, K=exc.bound)]
    return [_check("bounds", True, **report.to_dict())]


def suite_reductions(config: RunConfig) -> list:
    B, tol = config.B(), config.tol()
    alpha = config.alpha
    a, b = config.interval
    t = np.linspace(a, b, config.n_points)
    rng = np.random.default_rng(config.seed)
    checks = []
    sig = SampledSignal(a, b, np.cos(3.0 * t) + t)
    if alpha == 0.0:
        out = iab_apply_sampled(IteratedOrder(0.0, config.beta), B, sig, tol)
        checks.append(_check("identity", np.array_equal(out.values, sig.values)))
        return checks
    f = _random_series(rng, alpha, a)
    out = iab_apply_fps(IteratedOrder(alpha, 0.0), B, f, tol)
    checks.append(_check("identity", np.array_equal(out.coeffs, f.coeffs)))
    for n in range(1, 9):
        direct, composed = iab_iterate_check(IteratedOrder(alpha, n), B, f)
        gap = float(np.max(np.abs(direct.coeffs - composed.coeffs)))
        checks.append(_check(f"beta={n}", gap <= 1e-11, gap=gap))
    one = FracPowerSeries(alpha, [1.0], a)
    abr = iab_apply_fps(IteratedOrder(alpha, -1.0), B, one, tol, interval_length=b - a)
    lam = alpha / (1.0 - alpha)
    exact = np.array([B(alpha) / (1.0 - alpha) * mittag_leffler(alpha, -lam * (x - a) ** alpha / B(alpha), tol)
                      for x in t])
    gap = float(np.max(np.abs(eval_fps(abr, t) - exact)))
    checks.append(_check("beta=-1", gap <= 1e-9, gap=gap))
    for n in range(2, 5):
        m = len(f) + 12
        direct = iab_apply_fps(IteratedOrder(alpha, -n), B, f, n_terms=m)
        composed = f
        for _ in range(n):
            composed = iab_apply_fps(IteratedOrder(alpha, -1.0), B, composed, n_terms=m)
        scale = max(1.0, float(np.max(np.abs(direct.coeffs))))
        gap = float(np.max(np.abs(direct.coeffs - composed.coeffs))) / scale
        checks.append(_check(f"beta=-{n}", gap <= 1e-9, gap=gap))
    return checks


SUITES = {
    "semigroup": suite_semigroup,
    "laplace": suite_laplace,
    "bounds": suite_bounds,
    "reductions": suite_reductions,
}


def cmd_verify(config: RunConfig, suite: str, **options) -> tuple[Path, bool]:
    """Run a verification suite and write ``verify_<suite>.json``."""
    checks = SUITES[suite](config, **options)
    passed = all(c["status"] == "pass" for c in checks)
    payload = {
        "suite": suite,
        "config": config.to_dict(),
        "passed": passed,
        "summary": [f"{c['name']}: {c['status']}" for c in checks],
        "checks": checks,
    }
    path = config.output_dir() / f"verify_{suite}.json"
    _write_json(path, payload)
    return path, passed


def cmd_solve(config: RunConfig, equation: str, params) -> tuple[Path, Path]:
    """Solve one of the two equations; write ``solution.json`` and ``solution.csv``."""
    order, B = config.order(), config.B()
    if equation == "quadratic":
        if params.R == 0.0:
            sol = ode_series.solve_linear(order, B, params)
        else:
            sol = ode_series.solve_quadratic(order, B, params)
        eq_params = dataclasses.asdict(params)
    else:
        sol = ode_series.solve_relaxation(order, B, params)
        eq_params = {"C": params.C, "forcing": params.forcing.to_dict(), "M": params.M}
    out_dir = config.output_dir()
    payload = sol.to_dict()
    payload["equation"] = equation
    payload["params"] = eq_params
    payload["config"] = config.to_dict()
    json_path = out_dir / "solution.json"
    _write_json(json_path, payload)
    a, b = config.interval
    sig = sample_fps(FracPowerSeries(order.alpha, sol.coeffs, a), b, config.n_points)
    csv_path = out_dir / "solution.csv"
    _write_csv(csv_path, ["t", "f"], zip(sig.grid, sig.values))
    return json_path, csv_path


# --- argument handling -------------------------------------------------------

def _load_config(args) -> RunConfig:
    config = RunConfig()
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise IteratedABError(f"unknown config keys: {sorted(unknown)}")
        if "interval" in data:
            data["interval"] = tuple(float(x) for x in data["interval"])
        config = dataclasses.replace(config, **data)
    overrides = {}
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if args.beta is not None:
        overrides["beta"] = args.beta
    if args.grid is not None:
        parts = args.grid.split(",")
        if len(parts) != 3:
            raise IteratedABError("--grid expects a,b,n_points")
        overrides["interval"] = (float(parts[0]), float(parts[1]))
        overrides["n_points"] = int(parts[2])
    if args.tol is not None:
        overrides["tolerance"] = args.tol
    if args.out is not None:
        overrides["out"] = args.out
    if args.multiplier is not None:
        overrides["multiplier"] = args.multiplier
    config = dataclasses.replace(config, **overrides)
    a, b = config.interval
    if not a < b or config.n_points < 2:
        raise IteratedABError("grid needs a < b and at least 2 points")
    config.order()
    config.B()
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iteratedab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--grid", help="a,b,n_points")
    common.add_argument("--tol", type=float, help="absolute series tail tolerance")
    common.add_argument("--multiplier", help=f"one of {sorted(MULTIPLIERS)}")
    common.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or .)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="apply the operator on a grid")
    p_eval.add_argument("--function", default="const:1", help="const:V | power:MU | fps:ALPHA:c0,c1,...")
    p_eval.add_argument("--method", choices=["auto", "series", "sampled"], default="auto")

    p_verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p_verify.add_argument("--suite", choices=sorted(SUITES), required=True)
    p_verify.add_argument("--s-values", default="1,2,4,8", help="Laplace variables (laplace suite)")
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--function", help="laplace suite only: const:V or power:MU (default 1, t, t^0.5)")

    p_solve = sub.add_parser("solve", parents=[common], help="series solution of an equation")
    p_solve.add_argument("--equation", choices=["quadratic", "relaxation"], required=True)
    p_solve.add_argument("--P", type=float, default=0.0)
    p_solve.add_argument("--Q", type=float, default=0.0)
    p_solve.add_argument("--R", type=float, default=1.0)
    p_solve.add_argument("--branch", choices=["+", "-"])
    p_solve.add_argument("--C", type=float, default=1.0)
    p_solve.add_argument("--forcing", default="1", help="coefficients c0,c1,... of q in t**alpha")
    p_solve.add_argument("--M", type=int, default=ode_series.DEFAULT_ORDER)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "eval":
            path = cmd_eval(config, FunctionSpec.parse(args.function), args.method)
            print(path)
            return EXIT_OK
        if args.command == "verify":
            if args.seed is not None:
                config = dataclasses.replace(config, seed=args.seed)
            options = {}
            if args.suite == "laplace":
                options["s_values"] = tuple(float(x) for x in args.s_values.split(","))
                if args.function is not None:
                    options["powers"] = (FunctionSpec.parse(args.function).laplace_power(),)
            path, passed = cmd_verify(config, args.suite, **options)
            print(path)
            return EXIT_OK if passed else EXIT_CHECK_FAILED
        if args.equation == "quadratic":
            params = ode_series.QuadraticODEParams(args.P, args.Q, args.R, args.branch, args.M)
        else:
            coeffs = [float(c) for c in args.forcing.split(",")]
            params = ode_series.RelaxationODEParams(args.C, FracPowerSeries(config.alpha, coeffs), args.M)
        for path in cmd_solve(config, args.equation, params):
            print(path)
        return EXIT_OK
    except (DiscriminantError, SingularDenominatorError, ResonanceError) as exc:
        print(f"error: no real series solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except (IteratedABError, ValueError, OSError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
