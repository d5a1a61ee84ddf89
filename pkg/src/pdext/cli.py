"""Command-line front end.

Exit codes: 0 pass, 1 fail/refuted, 2 usage or input errors, 3 numeric failures.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bochner, gp, mercer, pdcheck, polya, rkhs
from .model import (CATALOG_IDS, ConfigurationError, DataError, DomainError, Interval,
                    PdFunction, catalog_measure, function_from_json, measure_from_json)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class CommandConfig:
    command: str
    options: dict = field(default_factory=dict)
    out_dir: Path = Path(".")


# --------------------------------------------------------------------------
# output helpers


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else ("inf" if f > 0 else "-inf" if f < 0 else "nan")
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_json(path: Path, payload: dict) -> str:
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    path.write_text(text + "\n")
    return text


def write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def emit_table(results: list, out_dir: Path, name: str = "catalog_table") -> None:
    """One CSV row and one JSON record per result dict (header only when empty)."""
    header = ["id", "pd_verdict", "min_eigenvalue", "index", "verify_ext_sup_error",
              "verify_ext_pass", "mercer_trace_error"]
    write_csv(out_dir / f"{name}.csv", header, ([r[h] for h in header] for r in results))
    write_json(out_dir / f"{name}.json", {"rows": results})


# --------------------------------------------------------------------------
# input parsing


def _load_json(text: str):
    if text is None:
        raise UsageError("missing JSON input")
    p = Path(text)
    try:
        if not text.lstrip().startswith(("{", "[")) and p.exists():
            return json.loads(p.read_text())
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc


def _function(text: str):
    spec = _load_json(text)
    try:
        return function_from_json(spec)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"bad function description: {exc}") from exc


def _measure(text: str):
    spec = _load_json(text)
    try:
        return measure_from_json(spec)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"bad measure description: {exc}") from exc


def _range(text: str, default_count: int = 101) -> np.ndarray:
    """'lo:hi:count' (count points, endpoints included) or a JSON list."""
    if text.lstrip().startswith("["):
        return np.asarray(json.loads(text), dtype=float)
    parts = text.split(":")
    try:
        if len(parts) == 3:
            return np.linspace(float(parts[0]), float(parts[1]), int(parts[2]))
        if len(parts) == 2:
            return np.linspace(float(parts[0]), float(parts[1]), default_count)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc
    raise UsageError(f"bad range {text!r}; use lo:hi:count")


def _grid_points(F, spec: str) -> np.ndarray:
    if spec.lstrip().startswith("[") or ":" in spec:
        return _range(spec)
    n = int(spec)
    if n < 1:
        raise UsageError("grid size must be positive")
    a = F.a if math.isfinite(F.a) else 1.0
    return np.linspace(0.0, a, n, endpoint=False)


def _xi(text: str):
    spec = _load_json(text)
    kind = spec.get("kind")
    if kind == "exp":
        rate = float(spec.get("rate", -1.0))
        return lambda x: np.exp(rate * np.asarray(x, dtype=float))
    if kind == "constant":
        v = float(spec.get("value", 1.0))
        return lambda x: np.full(np.shape(x), v)
    if kind == "sampled":
        nodes = np.asarray(spec["nodes"], dtype=float)
        re = np.asarray(spec["re"], dtype=float)
        im = np.asarray(spec.get("im", np.zeros_like(re)), dtype=float)
        return lambda x: np.interp(x, nodes, re) + 1j * np.interp(x, nodes, im)
    raise UsageError(f"unknown xi kind {kind!r}")


# --------------------------------------------------------------------------
# commands


def cmd_pd_check(cfg: CommandConfig) -> int:
    o = cfg.options
    F = _function(o["F"])
    pts = _grid_points(F, o["grid"])
    rep = pdcheck.is_pd_grid(F, pts, o["tol"])
    print(write_json(cfg.out_dir / "gram_report.json", rep.to_json()))
    if o.get("eigs_csv"):
        write_csv(cfg.out_dir / "eigenvalues.csv", ["index", "eigenvalue"],
                  enumerate(rep.eigenvalues.tolist()))
    return EXIT_PASS if rep.psd else EXIT_FAIL


def cmd_polya_extend(cfg: CommandConfig) -> int:
    o = cfg.options
    F = _function(o["input"])
    if o["mode"] == "auto":
        E = polya.build_spline_extension(F, "auto_tangent")
    else:
        E = polya.build_spline_extension(F, "knots", knots=_load_json(o["knots"]))
    cls = polya.classify_extension(E, seed=o["seed"])
    write_json(cfg.out_dir / "extension.json", E.to_json())
    x = np.linspace(-1.25 * E.c, 1.25 * E.c, 1001)
    write_csv(cfg.out_dir / "extension.csv", ["x", "F_ex"], zip(x, E(x)))
    report = {"op": "polya_extend", "verdict": cls.verdict, "support_radius": E.c,
              "witness": None if cls.witness is None else cls.witness.tolist(),
              "min_eigenvalue": cls.min_eigenvalue}
    print(write_json(cfg.out_dir / "classification.json", report))
    return EXIT_PASS if cls.verdict == "polya_pd" else EXIT_FAIL


def cmd_mercer(cfg: CommandConfig) -> int:
    o = cfg.options
    F = _function(o["F"])
    a, n, k = o["a"], o["n"], o["k"]
    D = mercer.mercer(F, a, n)
    f0 = float(np.real(F(np.array([0.0]))[0]))
    write_csv(cfg.out_dir / "eigenvalues.csv", ["index", "eigenvalue"],
              ((i + 1, v) for i, v in enumerate(D.eigenvalues.tolist())))
    cols = D.eigenvectors[:, :k]
    header = ["x"] + [f"xi_{j + 1}" for j in range(cols.shape[1])]
    if np.iscomplexobj(cols):
        header = ["x"] + [f"{p}_xi_{j + 1}" for j in range(cols.shape[1]) for p in ("re", "im")]
        rows = (np.concatenate(([x], np.column_stack([c.real, c.imag]).ravel()))
                for x, c in zip(D.grid.nodes, cols))
    else:
        rows = (np.concatenate(([x], c)) for x, c in zip(D.grid.nodes, cols))
    write_csv(cfg.out_dir / "eigenfunctions.csv", header, rows)
    err = abs(D.trace - a * f0)
    tol = o["trace_tol"] if o["trace_tol"] is not None else 2.0 * a / n
    report = {"op": "mercer", "a": a, "n": n, "trace": D.trace, "expected_trace": a * f0,
              "trace_error": err, "pass": err <= tol, "top_eigenvalues": D.eigenvalues[:k].tolist()}
    print(write_json(cfg.out_dir / "trace_report.json", report))
    return EXIT_PASS if err <= tol else EXIT_FAIL


def cmd_shannon(cfg: CommandConfig) -> int:
    o = cfg.options
    F, mu = _function(o["F"]), _measure(o["mu"])
    v = mercer.ext_membership_shannon(F, mu, N_max=o["N_max"], tol=o["tol"])
    print(write_json(cfg.out_dir / "shannon.json", v.to_json()))
    return EXIT_PASS if v.passed else EXIT_FAIL


def cmd_rkhs(cfg: CommandConfig) -> int:
    o = cfg.options
    op = o["op"]
    if op == "membership":
        F = _function(o["F"])
        xi = _xi(o["xi"])
        lo, hi = o["omega"] if o["omega"] else (0.0, F.a)
        res = rkhs.membership_test(F, xi, Interval(lo, hi))
        payload = {"op": "membership", "verdict": res.verdict, "A": res.A,
                   "history": res.history}
        print(write_json(cfg.out_dir / "membership.json", payload))
        return EXIT_PASS if res.verdict == "member-evidence" else EXIT_FAIL
    if op == "greens":
        which = o["which"]
        a = 0.5 if which == "F2" else 1.0
        phi = rkhs.TestFunction.bump(a / 2, 0.3 * a)
        r = rkhs.greens_residual(which, phi, o["n"])
        payload = {"op": "greens", "which": which, "n": o["n"], "residual": r, "pass": r < o["tol"]}
        print(write_json(cfg.out_dir / "greens.json", payload))
        return EXIT_PASS if r < o["tol"] else EXIT_FAIL
    if op == "boundary":
        coeffs = _load_json(o["poly"]) if o["poly"] else [0.0, 0.0, 1.0]
        p = np.polynomial.Polynomial(coeffs)
        r = rkhs.boundary_reproducing(o["which"], o["x"], p, p.deriv())
        payload = {"op": "boundary", "which": o["which"], "x": o["x"], "lhs": r.lhs, "rhs": r.rhs,
                   "error": r.error, "pass": r.error < 1e-8}
        print(write_json(cfg.out_dir / "boundary.json", payload))
        return EXIT_PASS if r.error < 1e-8 else EXIT_FAIL
    if op == "deficiency":
        mu = _measure(o["mu"])
        d = rkhs.deficiency_integral(o["x"] if o["x"] is not None else 1.0, mu)
        payload = {"op": "deficiency", "value": d.value, "finite": d.finite,
                   "tail_bound": d.tail_bound, "second_moment_indices": d.second_moment_indices,
                   "agrees": d.agrees}
        print(write_json(cfg.out_dir / "deficiency.json", payload))
        return EXIT_PASS if d.finite else EXIT_FAIL
    raise UsageError(f"unknown rkhs op {op!r}")


def cmd_gp_sim(cfg: CommandConfig) -> int:
    o = cfg.options
    k = gp.CovKernel(o["kernel"], alpha=o["alpha"], hurst=o["hurst"])
    times = _range(o["times"])
    ens = gp.sample_paths(k, times, o["m"], o["seed"])
    thin = max(1, o["thin"])
    write_csv(cfg.out_dir / "paths.csv", ["path"] + [f"t={_fmt(t)}" for t in times],
              (np.concatenate(([i], p)) for i, p in list(enumerate(ens.paths))[::thin]))
    model = gp.cov_matrix(k, times)
    err = float(np.max(np.abs(ens.empirical_cov() - model)))
    bound = 5.0 / math.sqrt(o["m"])
    payload = {"op": "gp_sim", "kernel": k.label, "m": o["m"], "seed": o["seed"],
               "max_cov_error": err, "bound": bound, "pass": err < bound, "jitter": ens.jitter}
    print(write_json(cfg.out_dir / "cov_report.json", payload))
    return EXIT_PASS if err < bound else EXIT_FAIL


def cmd_bochner(cfg: CommandConfig) -> int:
    o = cfg.options
    mu = _measure(o["mu"])
    q = bochner.QuadratureSpec(R=o["R"], nodes_per_unit=o["nodes_per_unit"])
    x = _range(o["x"])
    res = bochner.bochner_transform(mu, x, q, full_output=True)
    vals = np.atleast_1d(res.values)
    F = _function(o["F"]) if o["F"] else None
    Fx = np.asarray(F(x), dtype=complex) if F is not None else np.full(x.size, np.nan + 0j)
    write_csv(cfg.out_dir / "transform.csv", ["x", "ReF", "ImF", "Remu", "Immu"],
              zip(x, Fx.real, Fx.imag, vals.real, vals.imag))
    if F is None:
        payload = {"op": "bochner", "tail_bound": res.tail_bound, "radius": res.radius}
        print(write_json(cfg.out_dir / "bochner.json", payload))
        return EXIT_PASS
    err = float(np.max(np.abs(vals - Fx)))
    payload = {"op": "verify_ext", "sup_error": err, "pass": err <= o["tol"],
               "tail_bound": res.tail_bound}
    print(write_json(cfg.out_dir / "verify_ext.json", payload))
    return EXIT_PASS if err <= o["tol"] else EXIT_FAIL


def cmd_periodize(cfg: CommandConfig) -> int:
    o = cfg.options
    F = _function(o["F"])
    w = bochner.periodize(F, o["window"], o["N"])
    wr = np.asarray(w.weights)
    write_csv(cfg.out_dir / "weights.csv", ["n", "re_w", "im_w"],
              zip(w.n, np.real(wr), np.imag(wr) if np.iscomplexobj(wr) else np.zeros(wr.size)))
    total = w.total
    payload = {"op": "periodize", "window": o["window"], "N": o["N"], "positive": w.positive,
               "sum": [total.real, total.imag], "convention": w.convention}
    print(write_json(cfg.out_dir / "periodize.json", payload))
    return EXIT_PASS if w.positive else EXIT_FAIL


def cmd_invert(cfg: CommandConfig) -> int:
    o = cfg.options
    F = _function(o["F"])
    a0, b0 = (float(v) for v in o["window"].split(","))
    schedule = tuple(float(v) for v in o["T"].split(","))
    r = bochner.invert(F, (a0, b0), schedule, o["tol"])
    payload = {"op": "invert", "window": [a0, b0], "value": r.value, "values": r.values,
               "schedule": r.schedule, "converged": r.converged}
    print(write_json(cfg.out_dir / "invert.json", payload))
    return EXIT_PASS if r.converged else EXIT_FAIL


def catalog_row(ident: str, n_gram: int = 32, n_mercer: int = 1024) -> dict:
    F = PdFunction.catalog(ident)
    mu = catalog_measure(ident)
    pts = np.linspace(0.0, F.a, n_gram, endpoint=False)
    rep = pdcheck.is_pd_grid(F, pts)
    idx = bochner.second_moment_index_diagnostic(mu)
    ext = bochner.verify_ext(F, mu)
    D = mercer.mercer(F, F.a, n_mercer)
    return {"id": ident, "pd_verdict": rep.verdict, "min_eigenvalue": rep.min_eigenvalue,
            "index": idx.verdict, "verify_ext_sup_error": ext.sup_error,
            "verify_ext_pass": ext.passed, "mercer_trace_error": abs(D.trace - F.a)}


def cmd_catalog_table(cfg: CommandConfig) -> int:
    ids = [s for s in cfg.options["ids"].split(",") if s.strip()]
    bad = [s for s in ids if s not in CATALOG_IDS]
    if bad:
        raise UsageError(f"unknown catalog ids {bad}")
    rows = [catalog_row(i) for i in ids]
    emit_table(rows, cfg.out_dir)
    print(json.dumps(_jsonable({"op": "catalog_table", "rows": rows}), indent=2, sort_keys=True))
    ok = all(r["pd_verdict"] == "psd" and r["verify_ext_pass"] for r in rows)
    return EXIT_PASS if ok else EXIT_FAIL


COMMANDS = {
    "pd-check": cmd_pd_check, "polya-extend": cmd_polya_extend, "mercer": cmd_mercer,
    "shannon": cmd_shannon, "rkhs": cmd_rkhs, "gp-sim": cmd_gp_sim, "bochner": cmd_bochner,
    "periodize": cmd_periodize, "invert": cmd_invert, "catalog-table": cmd_catalog_table,
}


def _thread_limit():
    limit = os.environ.get("PDEXT_THREADS")
    if not limit:
        return contextlib.nullcontext()
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return contextlib.nullcontext()
    return threadpool_limits(limits=int(limit))


def run(cfg: CommandConfig) -> int:
    if cfg.command not in COMMANDS:
        print(f"unknown command {cfg.command!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        with _thread_limit():
            return COMMANDS[cfg.command](cfg)
    except (UsageError, DomainError, DataError, ConfigurationError, polya.ConstructionError,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (mercer.NumericError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pdext", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", default=".", help="output directory")
        return p

    p = add("pd-check", "Gram-matrix test of a function on a grid")
    p.add_argument("--F", required=True)
    p.add_argument("--grid", required=True, help="point count, lo:hi:count or JSON list")
    p.add_argument("--tol", type=float, default=pdcheck.PSD_TOL)
    p.add_argument("--eigs-csv", action="store_true")

    p = add("polya-extend", "piecewise-linear extension and its classification")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("auto", "knots"), default="auto")
    p.add_argument("--knots", help="JSON list of [x, value] pairs")
    p.add_argument("--seed", type=int, default=0)

    p = add("mercer", "spectrum of the discretized integral operator")
    p.add_argument("--F", "--input", dest="F", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--trace-tol", type=float, default=None)

    p = add("shannon", "lattice sums of Shannon functions against F")
    p.add_argument("--F", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--N-max", dest="N_max", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-3)

    p = add("rkhs", "RKHS diagnostics")
    p.add_argument("--op", required=True, choices=("membership", "greens", "boundary", "deficiency"))
    p.add_argument("--F")
    p.add_argument("--xi")
    p.add_argument("--mu")
    p.add_argument("--omega", type=float, nargs=2)
    p.add_argument("--which", choices=("F2", "F3"), default="F3")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--x", type=float)
    p.add_argument("--poly", help="JSON list of polynomial coefficients for g")
    p.add_argument("--tol", type=float, default=1e-4)

    p = add("gp-sim", "Gaussian path ensembles")
    p.add_argument("--kernel", required=True, choices=("bm", "bridge", "ou", "fbm"))
    p.add_argument("--m", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--times", default="0:1:64")
    p.add_argument("--alpha", type=float)
    p.add_argument("--hurst", type=float)
    p.add_argument("--thin", type=int, default=1, help="write every k-th path")

    p = add("bochner", "transform of a measure, optionally compared with F")
    p.add_argument("--mu", required=True)
    p.add_argument("--F")
    p.add_argument("--x", default="-1:1:201")
    p.add_argument("--R", type=float)
    p.add_argument("--nodes-per-unit", dest="nodes_per_unit", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-4)

    p = add("periodize", "Fourier weights of the periodization")
    p.add_argument("--F", required=True)
    p.add_argument("--window", choices=("none", "unit_box"), default="none")
    p.add_argument("--N", type=int, default=100)

    p = add("invert", "measure of an interval from transform values")
    p.add_argument("--F", required=True)
    p.add_argument("--window", required=True, help="a0,b0")
    p.add_argument("--T", default="10,100,1000")
    p.add_argument("--tol", type=float, default=1e-2)

    p = add("catalog-table", "summary row per catalog function")
    p.add_argument("--ids", default=",".join(CATALOG_IDS))
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    opts = vars(ns).copy()
    cmd = opts.pop("command")
    out = Path(opts.pop("out"))
    return run(CommandConfig(cmd, opts, out))


if __name__ == "__main__":
    sys.exit(main())
