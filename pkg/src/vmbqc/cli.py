"""Command-line experiment runner.

    python -m vmbqc.cli --experiment learn-mixed --out results/
    python -m vmbqc.cli --experiment kl-uniform --smoke --out results/
    python -m vmbqc.cli --experiment sample --params-file target.json --shots 100
    python -m vmbqc.cli --experiment oracle-check

Exit codes: 0 on success, 2 on validation errors (argparse uses 2 as well),
1 when oracle-check fails.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import experiments, mbqc
from .sim import bitstring


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="vmbqc",
        description="Run the generative-MBQC experiments and utilities.",
    )
    ap.add_argument("--experiment", required=True, choices=experiments.EXPERIMENTS)
    ap.add_argument("--n", type=int, default=5, help="qubits (ring size)")
    ap.add_argument("--d", type=int, default=4, help="circuit depth")
    ap.add_argument("--epochs", type=int, default=None)
    ap.add_argument("--reps", type=int, default=None, help="repetitions / initializations")
    ap.add_argument("--samples", type=int, default=None, help="training dataset size")
    ap.add_argument("--seed", type=int, default=0, help="master seed")
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--smoke", action="store_true", help="scaled-down quick run")
    ap.add_argument("--branch-budget", type=int, default=2000,
                    help="Monte-Carlo branches for mixture distributions")
    ap.add_argument("--batch", type=int, default=None,
                    help="samples per expectation term (default: dataset size; 2000 for n>=8)")
    ap.add_argument("--shots", type=int, default=1000, help="samples for --experiment sample")
    ap.add_argument("--params-file", default=None, help="model parameter JSON for sampling")
    ap.add_argument("--kind", default="corrected",
                    choices=["unitary", "uncorrected", "corrected"])
    ap.add_argument("--corrupt-oracle", action="store_true",
                    help="inject a wrong convention into oracle-check (negative test)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = experiments.ExperimentSpec(
            experiment=args.experiment,
            n=args.n,
            d=args.d,
            epochs=args.epochs,
            reps=args.reps,
            samples=args.samples,
            seed=args.seed,
            out=args.out,
            smoke=args.smoke,
            branch_budget=args.branch_budget,
            batch=args.batch,
            shots=args.shots,
            params_file=args.params_file,
            kind=args.kind,
        )
        if args.n < 3 or args.d < 1:
            raise ValueError("need n >= 3 and d >= 1")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if spec.experiment == "learn-mixed":
        path, _ = experiments.run_learn_mixed(spec)
        print(f"wrote {path}")
    elif spec.experiment == "learn-gauss":
        path, _ = experiments.run_learn_gauss(spec)
        print(f"wrote {path}")
    elif spec.experiment == "cross-compare":
        paths, _ = experiments.run_cross_compare(spec)
        for p in paths:
            print(f"wrote {p}")
    elif spec.experiment == "kl-uniform":
        path, _ = experiments.run_kl_uniform(spec)
        print(f"wrote {path}")
    elif spec.experiment == "sample":
        try:
            kind, params, values = experiments.run_sample(spec)
        except (OSError, ValueError, KeyError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        for v in values:
            print(bitstring(params.n, int(v)))
    elif spec.experiment == "oracle-check":
        cal = None
        if args.corrupt_oracle:
            good = mbqc.calibrate()
            cal = mbqc.Calibration(good.angle_factor, good.reverse_bits, good.frame_x ^ 1)
        if not mbqc.oracle_check(calibration=cal):
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
