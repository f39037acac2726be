"""Command line entry point: ``specglasso {simulate,estimate,experiment,benchmark}``."""
import argparse
import csv
import json
import sys

from .exceptions import ConvergenceError, InvalidInputError
from .experiment import ExperimentConfig, benchmark_classo, estimate_file, run_experiment
from .simulate import FAMILIES, DgpSpec, build_dgp, simulate_path

DEFAULTS = {
    "dgp": "WhiteNoise", "p": 10, "n": 200, "freq": "0", "m_rule": "floor_sqrt_n",
    "method": "cglasso", "variant": "plain", "lambda_grid": "50:3", "gamma": 0.0,
    "replicates": 20, "seed": 0, "threads": 1, "out": None,
}


def _grid(text):
    try:
        num, _, dec = str(text).partition(":")
        return int(num), float(dec) if dec else 3.0
    except ValueError:
        raise InvalidInputError(f"--lambda-grid expects COUNT[:DECADES], got {text!r}") from None


def _m_rule(text):
    text = str(text)
    return int(text) if text.lstrip("-").isdigit() else text


def _split(text):
    return [t for t in str(text).split(",") if t.strip()]


def build_parser():
    parser = argparse.ArgumentParser(prog="specglasso", description=__doc__)
    parser.add_argument("--config", help="JSON file whose keys set flag defaults (e.g. \"p\", \"lambda_grid\")")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, *names):
        opts = {
            "dgp": dict(choices=FAMILIES, help="data generating family"),
            "p": dict(type=int, help="dimension"),
            "n": dict(type=int, help="series length"),
            "freq": dict(help="comma separated frequencies: radians such as 0,pi/2,pi or Fourier indices j=K"),
            "m_rule": dict(help="smoothing half-width: floor_sqrt_n, ceil_4_sqrt_n or an integer"),
            "method": dict(help="comma separated subset of cglasso,cglasso_I,cglasso_II,nodewise,inverse_periodogram"),
            "variant": dict(choices=("plain", "I", "II"), help="scaling used by the cglasso method"),
            "lambda_grid": dict(help="penalty grid as COUNT:DECADES below the diagonal threshold"),
            "gamma": dict(type=float, help="EBIC gamma in [0, 1]"),
            "replicates": dict(type=int),
            "seed": dict(type=int),
            "threads": dict(type=int, help="worker processes for replicates"),
            "out": dict(help="output file or directory"),
        }
        for name in names:
            sp.add_argument("--" + name.replace("_", "-"), dest=name, default=None, **opts[name])

    sp = sub.add_parser("simulate", help="write a simulated panel to CSV")
    common(sp, "dgp", "p", "n", "seed", "out")
    sp = sub.add_parser("estimate", help="estimate the spectral precision of a CSV panel")
    sp.add_argument("input", help="CSV file, header row of names then one row per time point")
    common(sp, "freq", "m_rule", "variant", "lambda_grid", "gamma", "out")
    sp = sub.add_parser("experiment", help="Monte Carlo study on a simulated family")
    common(sp, "dgp", "p", "n", "freq", "m_rule", "method", "variant", "lambda_grid", "gamma",
           "replicates", "seed", "threads", "out")
    sp = sub.add_parser("benchmark", help="time complex lasso fits on a random design")
    common(sp, "p", "n", "replicates", "seed", "out")
    return parser


def _resolve(args):
    conf = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        conf.update(loaded)
    for k, v in vars(args).items():
        if v is not None and k in conf:
            conf[k] = v
    return conf


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        conf = _resolve(args)
        if args.command == "simulate":
            model = build_dgp(DgpSpec(conf["dgp"], conf["p"], conf["n"], conf["seed"]))
            X = simulate_path(model, conf["n"], seed=conf["seed"])
            fh = open(conf["out"], "w", newline="") if conf["out"] else sys.stdout
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"X{k + 1}" for k in range(X.shape[1])])
            w.writerows([[repr(float(v)) for v in row] for row in X])
            if conf["out"]:
                fh.close()
        elif args.command == "estimate":
            freqs = _split(conf["freq"])
            if len(freqs) != 1:
                raise InvalidInputError("estimate takes a single --freq")
            m_rule = _m_rule(args.m_rule) if args.m_rule else "ceil_4_sqrt_n"
            res = estimate_file(args.input, conf["out"] or "estimate_out", freqs[0], m_rule,
                                conf["variant"], conf["gamma"], _grid(conf["lambda_grid"]))
            print(json.dumps({k: res[k] for k in ("frequency_index", "omega", "m", "lambda", "converged")}))
        elif args.command == "experiment":
            config = ExperimentConfig(
                dgp=DgpSpec(conf["dgp"], conf["p"], conf["n"], conf["seed"]),
                frequencies=_split(conf["freq"]), m_rule=_m_rule(conf["m_rule"]),
                methods=_split(conf["method"]), variant=conf["variant"],
                lambda_grid=_grid(conf["lambda_grid"]), gamma=conf["gamma"],
                replicates=conf["replicates"], base_seed=conf["seed"],
                output_dir=conf["out"] or "results", threads=conf["threads"],
            )
            summary = run_experiment(config)
            for rec in summary:
                print(f"{rec['method']:>20} j={rec['freq_index']:<5} oracle_rmse={rec['oracle_rmse_mean']:.4f} "
                      f"bic_rmse={rec['bic_rmse_mean']:.4f} auroc={rec['auroc_mean']:.4f}")
        else:
            rep = benchmark_classo(conf["p"] if args.p else 50, conf["n"] if args.n else 50,
                                   conf["replicates"], conf["seed"])
            text = json.dumps(rep, indent=1)
            if conf["out"]:
                with open(conf["out"], "w") as fh:
                    fh.write(text)
            print(f"mean {rep['mean_s']:.5f} s, median {rep['median_s']:.5f} s, sd {rep['sd_s']:.5f} s "
                  f"over {rep['replicates']} fits (p={rep['p']}, n={rep['n']})")
    except (InvalidInputError, ConvergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
