"""Simulation experiments, file-based estimation and solver timing."""
import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .cglasso import cglasso_path, partial_coherence
from .classo import classo, lambda_max, scale_columns
from .exceptions import InvalidInputError
from .metrics import auroc, rmse, support_scores
from .nodewise import nodewise_path
from .realify import real_group_lasso_oracle
from .simulate import DgpSpec, build_dgp, simulate_path, true_precision, true_support
from .spectral import averaged_periodogram, dft_data_matrix, nearest_fourier_index, smoothing_span, wrap_index

METHODS = ("cglasso", "cglasso_I", "cglasso_II", "nodewise", "inverse_periodogram")
METRICS = (
    "oracle_rmse", "bic_rmse", "selected_lambda", "auroc",
    "precision", "recall", "accuracy", "n_lambdas", "n_converged",
)


@dataclass
class ExperimentConfig:
    dgp: DgpSpec
    frequencies: list = field(default_factory=lambda: [0.0])
    m_rule: object = "floor_sqrt_n"
    methods: list = field(default_factory=lambda: ["cglasso"])
    variant: str = "plain"
    lambda_grid: tuple = (50, 3.0)
    gamma: float = 0.0
    replicates: int = 20
    base_seed: int = 0
    output_dir: str = "results"
    threads: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise InvalidInputError("replicates must be >= 1")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise InvalidInputError(f"unknown methods {bad}; expected a subset of {METHODS}")
        if not self.methods:
            raise InvalidInputError("no methods requested")


def parse_frequency(token):
    """Parse a frequency request.

    ``"j=5"`` is a Fourier index; anything else is radians and may use
    ``pi``, e.g. ``"pi/2"`` or ``"0.25pi"``.  Returns ``("index", int)`` or
    ``("radians", float)``.
    """
    if isinstance(token, (int, float)) and not isinstance(token, bool):
        return ("radians", float(token))
    s = str(token).strip().lower().replace(" ", "")
    if s.startswith("j="):
        try:
            return ("index", int(s[2:]))
        except ValueError:
            raise InvalidInputError(f"bad Fourier index {token!r}") from None
    if "pi" in s:
        num, _, den = s.partition("/")
        head = num.replace("pi", "").replace("*", "")
        try:
            coef = {"": 1.0, "+": 1.0, "-": -1.0}.get(head) or float(head)
            return ("radians", coef * math.pi / (float(den) if den else 1.0))
        except ValueError:
            raise InvalidInputError(f"cannot parse frequency {token!r}") from None
    try:
        return ("radians", float(s))
    except ValueError:
        raise InvalidInputError(f"cannot parse frequency {token!r}") from None


def resolve_frequency(token, n):
    """Map a request to ``(j, omega_j, omega_requested)``."""
    kind, val = parse_frequency(token)
    if kind == "index":
        j = int(wrap_index(val, n))
        return j, 2 * math.pi * j / n, 2 * math.pi * val / n
    j, om = nearest_fourier_index(val, n)
    return j, om, val


def _variant(method, default):
    return {"cglasso": default, "cglasso_I": "I", "cglasso_II": "II"}[method]


def _nan_row():
    return {k: float("nan") for k in METRICS}


def _fit_method(method, X, j, m, config, truth, tsupport):
    n, p = X.shape
    row = _nan_row()
    row["available"] = 1
    extra = None
    num, decades = config.lambda_grid
    if method == "inverse_periodogram":
        if 2 * m + 1 < p:
            row["available"] = 0
            return row, None
        f = averaged_periodogram(X, j, m, center=False).fhat
        row["oracle_rmse"] = rmse(np.linalg.inv(f), truth)
        return row, None
    if method == "nodewise":
        Z = dft_data_matrix(X, j, m, center=False)
        lams, results = nodewise_path(Z, num=num, decades=decades)
        row["n_lambdas"] = len(lams)
        row["auroc"] = _safe_auroc([r.support for r in results], tsupport)
        return row, {"lambdas": lams.tolist()}
    f = averaged_periodogram(X, j, m, center=False).fhat
    path = cglasso_path(
        f, variant=_variant(method, config.variant), truth=truth, n_eff=2 * m + 1,
        n_raw=n, gamma=config.gamma, num=num, decades=decades,
    )
    sel = path.selected
    sc = support_scores(sel.theta, truth, truth_support=tsupport)
    row.update(
        oracle_rmse=float(np.min(path.rmse)), bic_rmse=float(path.rmse[path.selected_index]),
        selected_lambda=sel.lam, auroc=_safe_auroc(path, tsupport),
        precision=float("nan") if sc.precision is None else sc.precision,
        recall=sc.recall, accuracy=sc.accuracy, n_lambdas=len(path.estimates),
        n_converged=sum(e.converged for e in path.estimates),
    )
    extra = {
        "variant": path.variant,
        "lambda": sel.lam,
        "converged": sel.converged,
        "kkt_residual": sel.kkt_residual,
        "theta_re": sel.theta.real.tolist(),
        "theta_im": sel.theta.imag.tolist(),
        "lambdas": [float(x) for x in path.lambdas],
        "ebic": path.ebic,
        "rmse": path.rmse,
    }
    return row, extra


def _safe_auroc(path, tsupport):
    try:
        return auroc(path, truth_support=tsupport)
    except InvalidInputError:
        return float("nan")


def run_replicate(config, r):
    """All frequencies and methods for one replicate; returns (rows, estimates, timings)."""
    spec = config.dgp
    model = build_dgp(spec)
    seed = config.base_seed + r
    X = simulate_path(model, spec.n, seed=seed)
    n, p = X.shape
    m = smoothing_span(n, config.m_rule)
    rows, estimates, timings = [], [], []
    for token in config.frequencies:
        j, om, req = resolve_frequency(token, n)
        truth = true_precision(model, om)
        tsupport = true_support(model, om)
        for method in config.methods:
            t0 = time.perf_counter()
            row, extra = _fit_method(method, X, j, m, config, truth, tsupport)
            elapsed = time.perf_counter() - t0
            base = {"replicate": r, "seed": seed, "freq_index": j, "omega": om,
                    "omega_requested": req, "m": m, "method": method}
            rows.append({**base, **row})
            timings.append({**base, "runtime_s": elapsed})
            if extra is not None:
                estimates.append((r, j, method, {**base, **extra}))
    return rows, estimates, timings


def _fmt(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(round(v, 12))
    return str(v)


def _write_csv(path, rows):
    if not rows:
        return
    keys = list(rows[0])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(keys)
        for row in rows:
            w.writerow([_fmt(row[k]) for k in keys])


def summarize(rows):
    """Mean and sample sd of each metric per (frequency, method) over available replicates."""
    groups = {}
    for row in rows:
        groups.setdefault((row["freq_index"], row["method"]), []).append(row)
    out = []
    for (j, method), grp in groups.items():
        rec = {"freq_index": j, "omega": grp[0]["omega"], "method": method,
               "replicates": len(grp), "available": sum(g["available"] for g in grp)}
        for k in METRICS:
            vals = np.array([g[k] for g in grp if g["available"]], dtype=float)
            vals = vals[~np.isnan(vals)]
            rec[k + "_mean"] = float(vals.mean()) if vals.size else float("nan")
            rec[k + "_sd"] = float(vals.std(ddof=1)) if vals.size > 1 else float("nan")
        out.append(rec)
    return out


def run_experiment(config):
    """Run replicates and write ``summary.csv``, ``per_replicate.csv``,
    ``timings.csv`` and ``estimates/<rep>/<freq>/<method>.json``.

    Everything except ``timings.csv`` is a deterministic function of the
    config.  Returns the summary records.
    """
    out = Path(config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise InvalidInputError(f"output directory {out} is not writable: {exc}") from None
    reps = range(config.replicates)
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(run_replicate, [config] * len(reps), reps))
    else:
        results = [run_replicate(config, r) for r in reps]
    rows = [row for res in results for row in res[0]]
    timings = [t for res in results for t in res[2]]
    for res in results:
        for r, j, method, payload in res[1]:
            d = out / "estimates" / str(r) / str(j)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"{method}.json").write_text(json.dumps(payload, indent=1, sort_keys=True))
    summary = summarize(rows)
    _write_csv(out / "per_replicate.csv", rows)
    _write_csv(out / "summary.csv", summary)
    _write_csv(out / "timings.csv", timings)
    cfg = asdict(config)
    (out / "config.json").write_text(json.dumps(cfg, indent=1, sort_keys=True, default=str))
    return summary


def read_panel(path):
    """Read an (n, p) CSV with a header row of series names."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise InvalidInputError(f"{path}: file is empty")
    names = [c.strip() for c in rows[0]]
    if len(rows) < 2:
        raise InvalidInputError(f"{path}: header row but no data")
    p = len(names)
    X = np.empty((len(rows) - 1, p))
    for i, r in enumerate(rows[1:], start=2):
        if len(r) != p:
            raise InvalidInputError(f"{path}: row {i} has {len(r)} fields, expected {p}")
        for k, c in enumerate(r):
            try:
                X[i - 2, k] = float(c)
            except ValueError:
                raise InvalidInputError(f"{path}: row {i}, column {k + 1} ({names[k]}): not a number: {c!r}") from None
            if not math.isfinite(X[i - 2, k]):
                raise InvalidInputError(f"{path}: row {i}, column {k + 1} ({names[k]}): non-finite value")
    return names, X


def estimate_panel(X, frequency=0.0, m_rule="ceil_4_sqrt_n", variant="plain", gamma=0.0,
                   lambda_grid=(50, 3.0)):
    """Center the panel, form the smoothed periodogram and fit a penalty path."""
    n = X.shape[0]
    j, om, req = resolve_frequency(frequency, n)
    m = smoothing_span(n, m_rule)
    if 2 * m + 1 > n:
        raise InvalidInputError(f"need n >= 2m+1 = {2 * m + 1} observations, got {n}")
    f = averaged_periodogram(X, j, m, center=True).fhat
    path = cglasso_path(f, variant=variant, n_eff=2 * m + 1, n_raw=n, gamma=gamma,
                        num=lambda_grid[0], decades=lambda_grid[1])
    return {"frequency_index": j, "omega": om, "omega_requested": req, "m": m, "path": path}


def estimate_file(input_path, output_dir, frequency=0.0, m_rule="ceil_4_sqrt_n", variant="plain",
                  gamma=0.0, lambda_grid=(50, 3.0)):
    """Estimate the precision of a CSV panel and write ``estimate.json`` and ``edges.csv``."""
    names, X = read_panel(input_path)
    res = estimate_panel(X, frequency, m_rule, variant, gamma, lambda_grid)
    path = res["path"]
    sel = path.selected
    pc = partial_coherence(sel.theta)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "series": names,
        "frequency_index": res["frequency_index"],
        "omega": res["omega"],
        "omega_requested": res["omega_requested"],
        "m": res["m"],
        "variant": variant,
        "lambda": sel.lam,
        "converged": sel.converged,
        "theta_re": sel.theta.real.tolist(),
        "theta_im": sel.theta.imag.tolist(),
        "partial_coherence_re": pc.real.tolist(),
        "partial_coherence_im": pc.imag.tolist(),
        "lambdas": [float(x) for x in path.lambdas],
        "ebic": path.ebic,
    }
    (out / "estimate.json").write_text(json.dumps(payload, indent=1))
    edges = []
    p = len(names)
    for k in range(p):
        for l in range(k + 1, p):
            if abs(sel.theta[k, l]) > 1e-8:
                edges.append({"k": k, "l": l, "source": names[k], "target": names[l],
                              "abs_partial_coherence": float(abs(pc[k, l]))})
    with open(out / "edges.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["k", "l", "source", "target", "abs_partial_coherence"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(edges)
    return payload


def benchmark_design(p, n, seed):
    """Random complex design with unit-scaled columns, every other coefficient ``1 - 1i``."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p)) + 1j * rng.standard_normal((n, p))
    beta = np.zeros(p, dtype=complex)
    beta[::2] = 1 - 1j  # odd positions counting from one
    y = X @ beta + rng.standard_normal(n)
    Xs, _ = scale_columns(X)
    return Xs, y, beta


def benchmark_classo(p=50, n=50, replicates=20, seed=0, lam_ratio=0.1):
    """Time one complex lasso fit per replicate at ``lam_ratio * lambda_max``."""
    X, y, _ = benchmark_design(p, n, seed)
    classo(X, y, lam_ratio * lambda_max(X, y))  # compile outside the timed loop
    times, first = [], None
    for r in range(replicates):
        X, y, _ = benchmark_design(p, n, seed + r)
        lam = lam_ratio * lambda_max(X, y)
        t0 = time.perf_counter()
        sol = classo(X, y, lam)
        times.append(time.perf_counter() - t0)
        if first is None:
            oracle = real_group_lasso_oracle(X, y, lam)
            first = {"lambda": lam, "max_abs_diff_vs_oracle": float(np.abs(oracle - sol.beta).max()),
                     "nonzeros": int(np.count_nonzero(sol.beta))}
    t = np.array(times)
    return {
        "p": p, "n": n, "replicates": replicates, "seed": seed,
        "mean_s": float(t.mean()), "median_s": float(np.median(t)),
        "sd_s": float(t.std(ddof=1)) if t.size > 1 else 0.0,
        "first_replicate": first, "times_s": t.tolist(),
    }
