"""Verification sweeps and the command-line surface.

``run_sweep`` evaluates every applicable bound check over a grid of
functions, theorem families, degrees and exponents, records inapplicable
cells as skipped with a machine-readable reason, and assembles a
deterministic report (cells sorted by key, no wall-clock data unless
explicitly requested).  Reports serialize to JSON or CSV with a fixed
schema; the exit code reflects whether any cell was violated.

Commands: ``verify`` (run a sweep from a config file or flags),
``list-functions``, ``selftest``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import __version__, bounds, corpus
from .errors import (
    ConfigInvalid,
    EvaluationFailure,
    HKTaylorError,
    NonConvergence,
    OutputUnwritable,
    UnboundedSample,
)
from .quadrature import Interval
from .taylor import Func

__all__ = ["SweepConfig", "Report", "run_sweep", "emit_report", "load_report",
           "selftest", "main"]

THEOREMS = ("thm2", "thm3", "thm4")
A_WHICH = ("A1", "A2", "A3", "A4")

SKIP_REASONS = frozenset({
    "insufficient-order",
    "derivative-missing-at-base",
    "derivative-missing-at-x0",
    "requires-continuous-derivative",
    "nonconvergent-quadrature",
    "evaluation-error",
})

DEFAULT_N = (1, 2, 3)
DEFAULT_P = (1.0, 2.0, math.inf)
DEFAULT_ALPHA = (1.0, 2.0, math.inf)
DEFAULT_X_SAMPLES = 4
DEFAULT_TOL = 1e-7
DEFAULT_SEED = 0
DEFAULT_INTERVAL = (0.0, 1.0)


@dataclass(frozen=True)
class SweepConfig:
    """Grid definition for one verification sweep."""

    function_labels: tuple[str, ...] = tuple(corpus.DEFAULT_LABELS)
    theorems: tuple[str, ...] = THEOREMS
    n_values: tuple[int, ...] = DEFAULT_N
    p_values: tuple[float, ...] = DEFAULT_P
    alpha_values: tuple[float, ...] = DEFAULT_ALPHA
    x_samples: int = DEFAULT_X_SAMPLES
    interval: tuple[float, float] = DEFAULT_INTERVAL
    tol: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    output_path: str | None = None
    output_format: str = "json"

    def validate(self) -> None:
        if not self.tol > 0:
            raise ConfigInvalid(f"tol must be positive, got {self.tol}")
        if not self.interval[0] < self.interval[1]:
            raise ConfigInvalid(f"interval must satisfy a < b, got {self.interval}")
        for t in self.theorems:
            if t not in THEOREMS:
                raise ConfigInvalid(f"unknown theorem {t!r}; choose from {THEOREMS}")
        if self.output_format not in ("json", "csv"):
            raise ConfigInvalid(f"format must be json or csv, got {self.output_format}")
        if self.x_samples < 0 or any(n < 1 for n in self.n_values):
            raise ConfigInvalid("x_samples must be >= 0 and n values >= 1")
        for p in tuple(self.p_values) + tuple(self.alpha_values):
            if not (p >= 1.0):
                raise ConfigInvalid(f"p and alpha values must be >= 1, got {p}")
        for label in self.function_labels:
            try:
                corpus.registry_lookup(label)
            except HKTaylorError as exc:
                raise ConfigInvalid(f"unresolvable label {label!r}: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "function_labels": list(self.function_labels),
            "theorems": list(self.theorems),
            "n_values": list(self.n_values),
            "p_values": [_num_out(p) for p in self.p_values],
            "alpha_values": [_num_out(a) for a in self.alpha_values],
            "x_samples": self.x_samples,
            "interval": list(self.interval),
            "tol": self.tol,
            "seed": self.seed,
            "output_path": self.output_path,
            "output_format": self.output_format,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if not isinstance(data, dict):
            raise ConfigInvalid("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        kw: dict = {}
        for key, value in data.items():
            if key in ("p_values", "alpha_values"):
                kw[key] = tuple(_num_in(v) for v in value)
            elif key in ("function_labels", "theorems"):
                kw[key] = tuple(value)
            elif key == "n_values":
                kw[key] = tuple(int(v) for v in value)
            elif key == "interval":
                kw[key] = (float(value[0]), float(value[1]))
            else:
                kw[key] = value
        cfg = cls(**kw)
        cfg.validate()
        return cfg


def _num_in(v):
    if isinstance(v, str):
        if v in ("inf", "Infinity", "∞"):
            return math.inf
        return float(v)
    return float(v)


def _num_out(v):
    if v is None:
        return None
    if v == math.inf:
        return "inf"
    return v


@dataclass
class Report:
    """Sweep result: metadata, one record per grid cell, verdict tallies."""

    metadata: dict
    cells: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def _cell(function: str, label: str, params: dict, check=None, reason=None) -> dict:
    out = {
        "label": label,
        "function": function,
        "params": {
            "n": params.get("n"),
            "p": _num_out(params.get("p")),
            "alpha": _num_out(params.get("alpha")),
            "x0": params.get("x0"),
            "x": params.get("x"),
        },
    }
    if check is not None:
        out["lhs"] = {"value": check.lhs_value, "err": check.lhs_error}
        out["rhs"] = {"value": check.rhs, "err": check.rhs_error}
        out["slack"] = check.slack
        out["verdict"] = check.verdict
    else:
        out["lhs"] = None
        out["rhs"] = None
        out["slack"] = None
        out["verdict"] = "skipped"
        out["reason"] = reason
    return out


def _sort_key(cell: dict):
    p = cell["params"]
    return (cell["function"], cell["label"], p["n"] or 0,
            str(p["p"]), str(p["alpha"]), str(p["x0"]), str(p["x"]))


def _base_derivs_defined(F: Func, a: float, upto: int):
    for k in range(upto + 1):
        if not F.derivative_defined(k, a):
            return False
    return True


def _x_draws(label: str, n: int, cfg: SweepConfig) -> list[float]:
    # stable per (seed, label, n) so cell evaluation order cannot matter
    rng = np.random.default_rng([cfg.seed, zlib.crc32(label.encode()), n])
    lo, hi = cfg.interval
    return sorted(float(x) for x in rng.uniform(lo, hi, size=cfg.x_samples))


def _function_cells(F: Func, cfg: SweepConfig) -> list[dict]:
    iv = Interval(*cfg.interval)
    tol = cfg.tol
    label = F.label
    cells: list[dict] = []

    def run(cell_label, params, fn):
        try:
            chk = fn()
        except NonConvergence:
            cells.append(_cell(label, cell_label, params,
                               reason="nonconvergent-quadrature"))
        except (EvaluationFailure, UnboundedSample):
            cells.append(_cell(label, cell_label, params,
                               reason="evaluation-error"))
        else:
            cells.append(_cell(label, cell_label, chk.params | params, chk))

    for n in cfg.n_values:
        if "thm2" in cfg.theorems:
            reason = None
            x0 = None
            if F.max_order < n:
                reason = "insufficient-order"
            elif not _base_derivs_defined(F, iv.lo, n - 1):
                reason = "derivative-missing-at-base"
            else:
                x0 = bounds.resolve_x0(F, iv, "auto")
                if not F.derivative_defined(n, x0):
                    reason = "derivative-missing-at-x0"
            fams = ([("thm2.alexiewicz", {"n": n, "x0": x0}, None)]
                    + [("thm2.pointwise", {"n": n, "x0": x0, "x": x}, None)
                       for x in _x_draws(label, n, cfg)]
                    + [("thm2.lp", {"n": n, "x0": x0, "p": p}, None)
                       for p in cfg.p_values])
            for name, params, _ in fams:
                if reason:
                    cells.append(_cell(label, name, params, reason=reason))
                elif name == "thm2.alexiewicz":
                    run(name, params,
                        lambda: bounds.bound_thm2_alexiewicz(F, iv, x0, n, tol))
                elif name == "thm2.pointwise":
                    run(name, params,
                        lambda x=params["x"]: bounds.bound_thm2_pointwise(
                            F, iv, x0, n, x, tol))
                else:
                    run(name, params,
                        lambda p=params["p"]: bounds.bound_thm2_lp(
                            F, iv, x0, n, p, tol))

        if "thm3" in cfg.theorems:
            plain_reason = None
            if F.max_order < n + 1:
                plain_reason = "insufficient-order"
            elif not _base_derivs_defined(F, iv.lo, n):
                plain_reason = "derivative-missing-at-base"
            plain = ([("thm3.alexiewicz", {"n": n})]
                     + [("thm3.pointwise", {"n": n, "x": x})
                        for x in _x_draws(label, n, cfg)]
                     + [("thm3.lp", {"n": n, "p": p}) for p in cfg.p_values])
            for name, params in plain:
                if plain_reason:
                    cells.append(_cell(label, name, params, reason=plain_reason))
                elif name == "thm3.alexiewicz":
                    run(name, params,
                        lambda: bounds.bound_thm3_alexiewicz(F, iv, n, tol))
                elif name == "thm3.pointwise":
                    run(name, params,
                        lambda x=params["x"]: bounds.bound_thm3_pointwise(
                            F, iv, n, x, tol))
                else:
                    run(name, params,
                        lambda p=params["p"]: bounds.bound_thm3_lp(
                            F, iv, n, p, tol))
            # the A-route needs only f^(n): functions whose top derivative
            # exists get these cells even when f^(n+1) does not
            via_reason = None
            if F.max_order < n:
                via_reason = "insufficient-order"
            elif not _base_derivs_defined(F, iv.lo, n):
                via_reason = "derivative-missing-at-base"
            via = []
            for p in cfg.p_values:
                if p == math.inf:
                    via.append(("thm3.lp.Ainf",
                                {"n": n, "p": p, "alpha": None}, "A1"))
                else:
                    for alpha in cfg.alpha_values:
                        for which in A_WHICH:
                            via.append((f"thm3.lp.{which}",
                                        {"n": n, "p": p, "alpha": alpha}, which))
            for name, params, which in via:
                if via_reason:
                    cells.append(_cell(label, name, params, reason=via_reason))
                else:
                    run(name, params,
                        lambda p=params["p"], a=params["alpha"], w=which:
                        bounds.bound_thm3_lp_via_A(
                            F, iv, n, p, 2.0 if a is None else a, w, tol))

        if "thm4" in cfg.theorems:
            params = {"n": n}
            if F.max_order < n:
                cells.append(_cell(label, "thm4.alexiewicz", params,
                                   reason="insufficient-order"))
            elif not F.continuous_at_order(n) or \
                    not _base_derivs_defined(F, iv.lo, n):
                cells.append(_cell(label, "thm4.alexiewicz", params,
                                   reason="requires-continuous-derivative"))
            else:
                run("thm4.alexiewicz", params,
                    lambda: bounds.bound_thm4(F, iv, n, tol))
    return cells


def run_sweep(cfg: SweepConfig, stamp: bool = False) -> Report:
    """Evaluate every applicable check in the grid; deterministic for a
    fixed config (timestamp stays null unless ``stamp``)."""
    cfg.validate()
    cells: list[dict] = []
    for label in cfg.function_labels:
        F = corpus.registry_lookup(label)
        cells.extend(_function_cells(F, cfg))
    cells.sort(key=_sort_key)
    summary = {"holds": 0, "holds_within_error": 0, "violated": 0, "skipped": 0}
    for cell in cells:
        summary[cell["verdict"]] += 1
    timestamp = None
    if stamp:
        import datetime

        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    metadata = {
        "version": __version__,
        "seed": cfg.seed,
        "timestamp": timestamp,
        "config": cfg.to_dict(),
    }
    return Report(metadata=metadata, cells=cells, summary=summary)


CSV_COLUMNS = ("function", "label", "n", "p", "alpha", "x0", "x",
               "lhs", "lhs_err", "rhs", "rhs_err", "slack", "verdict", "reason")


def emit_report(report: Report, fmt: str = "json") -> bytes:
    """Serialize a report; byte-stable for a fixed report."""
    if fmt == "json":
        doc = {
            "version": report.metadata["version"],
            "seed": report.metadata["seed"],
            "timestamp": report.metadata["timestamp"],
            "config": report.metadata["config"],
            "cells": report.cells,
            "summary": report.summary,
        }
        return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode()
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell in report.cells:
        p = cell["params"]
        lhs = cell["lhs"] or {}
        rhs = cell["rhs"] or {}
        writer.writerow([
            cell["function"], cell["label"], p["n"],
            "" if p["p"] is None else p["p"],
            "" if p["alpha"] is None else p["alpha"],
            "" if p["x0"] is None else repr(p["x0"]),
            "" if p["x"] is None else repr(p["x"]),
            "" if not lhs else repr(lhs["value"]),
            "" if not lhs else repr(lhs["err"]),
            "" if not rhs else repr(rhs["value"]),
            "" if not rhs else repr(rhs["err"]),
            "" if cell["slack"] is None else repr(cell["slack"]),
            cell["verdict"],
            cell.get("reason", ""),
        ])
    return buf.getvalue().encode()


def load_report(data: bytes) -> Report:
    doc = json.loads(data.decode())
    return Report(
        metadata={"version": doc["version"], "seed": doc["seed"],
                  "timestamp": doc["timestamp"], "config": doc["config"]},
        cells=doc["cells"],
        summary=doc["summary"],
    )


# --------------------------------------------------------------------------
# Self-test: a compact run of the cross-cutting invariants.
# --------------------------------------------------------------------------

def selftest(out=None) -> int:
    out = out or sys.stdout
    failures = 0

    def report(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        if not ok:
            failures += 1
        print(f"{'PASS' if ok else 'FAIL'}  {name}" +
              (f"  ({detail})" if detail else ""), file=out)

    import numpy as _np

    from .norms import alexiewicz_norm, subinterval_norm
    from .quadrature import SingularitySpec, integrate
    from .taylor import (
        finite_difference_errors,
        remainder_by_parts,
        remainder_direct,
        remainder_integral,
    )

    for label in corpus.DEFAULT_LABELS:
        F = corpus.registry_lookup(label)
        errs = finite_difference_errors(F, _np.random.default_rng(11))
        worst = max(errs.values()) if errs else 0.0
        report(f"derivative-chain {label}", worst <= 1e-4, f"max rel err {worst:.2e}")

    EXP = corpus.registry_lookup("exp")
    rng = _np.random.default_rng(5)
    worst = 0.0
    for x in rng.uniform(0.0, 1.0, size=5):
        d = remainder_direct(EXP, 0.0, 2, x)
        i = remainder_integral(EXP, 0.0, 2, x, tol=1e-10)
        b = remainder_by_parts(EXP, 0.0, 2, x, tol=1e-10)
        budget = 10.0 * (i.error_bound + b.error_bound) + 1e-12
        worst = max(worst, abs(d - i.value) - budget, abs(d - b.value) - budget)
    report("three-form remainder agreement (exp, n=2)", worst <= 0.0)

    f = lambda t: _np.cos(_np.pi * t)
    iv = Interval(0.0, 1.0)
    alex = alexiewicz_norm(f, iv, tol=1e-9)
    sub = subinterval_norm(f, iv, tol=1e-9)
    pad = 10.0 * (alex.error_bound + sub.error_bound) + 1e-12
    report("norm sandwich (cos)", alex.value <= sub.value + pad
           and sub.value <= 2.0 * alex.value + pad)

    osc = corpus.make_hk_oscillator()
    est = integrate(osc.derivative(1), iv,
                    SingularitySpec(0.0, "left", "oscillatory-improper"), 1e-8)
    report("limit quadrature hits sin(1)",
           abs(est.value - math.sin(1.0)) <= 10.0 * est.error_bound,
           f"value {est.value:.10f}")

    CUBE = corpus.registry_lookup("poly:k=3")
    chk = bounds.bound_thm3_alexiewicz(CUBE, iv, 2, tol=1e-9)
    report("spot value thm3 (x^3): lhs 1/4, rhs 1",
           abs(chk.lhs_value - 0.25) < 1e-6 and abs(chk.rhs - 1.0) < 1e-6)
    chk = bounds.bound_thm2_alexiewicz(CUBE, iv, 0.5, 2, tol=1e-9)
    report("spot value thm2 (x^3): lhs 1/4, rhs 3/8",
           abs(chk.lhs_value - 0.25) < 1e-6 and abs(chk.rhs - 0.375) < 1e-6)
    chk = bounds.bound_thm4(corpus.registry_lookup("kink"), iv, 1, tol=1e-9)
    report("spot value thm4 (kink): lhs 1/8, rhs 1/4",
           abs(chk.lhs_value - 0.125) < 1e-6 and abs(chk.rhs - 0.25) < 1e-6)

    return 0 if failures == 0 else 2


# --------------------------------------------------------------------------
# argparse surface
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hktaylor",
        description="verify Taylor-remainder norm inequalities over a "
                    "function corpus")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification sweep")
    v.add_argument("--config", help="JSON file mirroring SweepConfig")
    v.add_argument("--function", action="append", dest="functions",
                   metavar="LABEL", help="function label (repeatable)")
    v.add_argument("--theorem", action="append", dest="theorems",
                   choices=THEOREMS, help="theorem id (repeatable)")
    v.add_argument("--n", action="append", dest="n_values", type=int,
                   metavar="K", help="polynomial degree (repeatable)")
    v.add_argument("--p", action="append", dest="p_values", metavar="P",
                   help="Lp exponent, number or 'inf' (repeatable)")
    v.add_argument("--alpha", action="append", dest="alpha_values",
                   metavar="A", help="Holder exponent, number or 'inf'")
    v.add_argument("--x0", default="auto",
                   help="auxiliary point for thm2 ('auto' or a number); "
                        "auto is always used inside sweeps")
    v.add_argument("--x-samples", type=int, default=DEFAULT_X_SAMPLES)
    v.add_argument("--interval", default="0,1", metavar="A,B")
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--out", dest="output_path")
    v.add_argument("--format", dest="output_format",
                   choices=("json", "csv"), default="json")
    v.add_argument("--stamp", action="store_true",
                   help="record wall-clock time (forfeits byte-identical "
                        "reports)")

    sub.add_parser("list-functions", help="print the registered labels")
    sub.add_parser("selftest", help="run the invariant suite")
    return parser


def _config_from_args(args) -> SweepConfig:
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config {args.config!r}: {exc}") from exc
        return SweepConfig.from_dict(data)
    try:
        lo, hi = (float(part) for part in args.interval.split(","))
    except ValueError as exc:
        raise ConfigInvalid(f"--interval expects 'a,b', got {args.interval!r}") from exc
    kw = dict(interval=(lo, hi), tol=args.tol, seed=args.seed,
              x_samples=args.x_samples, output_path=args.output_path,
              output_format=args.output_format)
    if args.functions:
        kw["function_labels"] = tuple(args.functions)
    if args.theorems:
        kw["theorems"] = tuple(dict.fromkeys(args.theorems))
    if args.n_values:
        kw["n_values"] = tuple(args.n_values)
    if args.p_values:
        kw["p_values"] = tuple(_num_in(p) for p in args.p_values)
    if args.alpha_values:
        kw["alpha_values"] = tuple(_num_in(a) for a in args.alpha_values)
    cfg = SweepConfig(**kw)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list-functions":
        for label in corpus.DEFAULT_LABELS:
            print(label)
        print("\nlabel grammar: name[:key=value,...] with names "
              "{poly, exp, sin, cos, kink, bump, weier, hkosc}")
        return 0
    if args.command == "selftest":
        return selftest()
    try:
        cfg = _config_from_args(args)
        report = run_sweep(cfg, stamp=args.stamp)
        payload = emit_report(report, cfg.output_format)
        if cfg.output_path:
            try:
                with open(cfg.output_path, "wb") as fh:
                    fh.write(payload)
            except OSError as exc:
                raise OutputUnwritable(str(exc)) from exc
        else:
            sys.stdout.write(payload.decode())
    except (ConfigInvalid, OutputUnwritable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    counts = report.summary
    print(f"cells: {len(report.cells)}  holds: {counts['holds']}  "
          f"within-error: {counts['holds_within_error']}  "
          f"violated: {counts['violated']}  skipped: {counts['skipped']}",
          file=sys.stderr)
    return 0 if counts["violated"] == 0 else 2


if __name__ == "__main__":
    raise SystemExit(main())
