"""Experiment drivers: model-vs-model learning studies and the KL decay scan.

Every driver takes an :class:`ExperimentSpec`, runs deterministically from
its master seed (one spawned seed per repetition), and writes CSV result
files whose leading ``#``-comment lines echo the spec verbatim, so reruns
with identical specs are byte-identical. Parameter dumps are JSON.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .learn import TrainConfig, train
from .models import (
    ModelKind,
    ModelParams,
    exact_distribution,
    random_target,
    sample_model,
)
from .targets import (
    DiscreteDistribution,
    SampleSet,
    default_double_gaussian,
    draw,
    kl_divergence,
    uniform,
)

EXPERIMENTS = (
    "learn-mixed",
    "learn-gauss",
    "cross-compare",
    "kl-uniform",
    "sample",
    "oracle-check",
)

_KIND_LABEL = {
    ModelKind.UNITARY: "unitary",
    ModelKind.UNCORRECTED: "uncorrected",
    ModelKind.CORRECTED: "corrected",
}


@dataclass(frozen=True)
class ExperimentSpec:
    experiment: str
    n: int = 5
    d: int = 4
    epochs: int | None = None
    reps: int | None = None
    samples: int | None = None
    seed: int = 0
    out: str = "results"
    smoke: bool = False
    branch_budget: int = 2000
    batch: int | None = None
    shots: int = 1000
    params_file: str | None = None
    kind: str = "corrected"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")

    def echo(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _write_csv(path: Path, spec: ExperimentSpec, header: list, rows: list):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# spec={spec.echo()}\n")
        fh.write(f"# master_seed={spec.seed}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(f"{v:.12g}" if isinstance(v, float) else str(v) for v in row)
                + "\n"
            )
    return path


def save_params(path, params: ModelParams, kind: ModelKind, seed: int, extra=None):
    payload = {
        "kind": _KIND_LABEL[kind],
        "n": params.n,
        "depth": params.depth,
        "theta": params.theta.tolist(),
        "zeta": params.zeta.tolist(),
        "seed": seed,
    }
    if extra:
        payload.update(extra)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_params(path):
    payload = json.loads(Path(path).read_text())
    kind = ModelKind(payload["kind"])
    params = ModelParams(
        payload["n"], payload["depth"], np.array(payload["theta"]), np.array(payload["zeta"])
    )
    return kind, params


def _default_batch(spec: ExperimentSpec, n_samples: int) -> int:
    if spec.batch is not None:
        return spec.batch
    return 2000 if spec.n >= 8 else n_samples


def _train_many(
    spec: ExperimentSpec,
    kind: ModelKind,
    dataset: SampleSet,
    epochs: int,
    reps: int,
    batch: int,
    seed_seq: np.random.SeedSequence,
) -> np.ndarray:
    """Loss curves for `reps` independently initialized runs: (reps, epochs)."""
    curves = np.empty((reps, epochs))
    for r, child in enumerate(seed_seq.spawn(reps)):
        cfg = TrainConfig(
            kind=kind,
            n=spec.n,
            depth=spec.d,
            epochs=epochs,
            batch=batch,
            seed=child.generate_state(1)[0],
        )
        curves[r] = train(cfg, dataset).losses
    return curves


def _learning_study(
    spec: ExperimentSpec,
    dataset: SampleSet,
    kinds: list,
    epochs: int,
    reps: int,
    out_name: str,
):
    batch = _default_batch(spec, len(dataset))
    seq = np.random.SeedSequence(spec.seed)
    blocks = {}
    for kind, child in zip(kinds, seq.spawn(len(kinds))):
        blocks[kind] = _train_many(spec, kind, dataset, epochs, reps, batch, child)
    header = ["epoch"]
    for kind in kinds:
        header += [f"mean_{_KIND_LABEL[kind]}", f"std_{_KIND_LABEL[kind]}"]
    rows = []
    for e in range(epochs):
        row = [e]
        for kind in kinds:
            row += [float(blocks[kind][:, e].mean()), float(blocks[kind][:, e].std())]
        rows.append(row)
    path = _write_csv(Path(spec.out) / out_name, spec, header, rows)
    return path, blocks


def run_learn_mixed(spec: ExperimentSpec):
    """Mixed-channel target: unitary vs corrected-channel learners."""
    if spec.smoke:
        spec = replace(
            spec,
            n=spec.n if spec.n != 5 else 4,
            d=spec.d if spec.d != 4 else 3,
            epochs=spec.epochs or 20,
            reps=spec.reps or 4,
            samples=spec.samples or 1000,
        )
    n_samples = spec.samples or (10000 if spec.n >= 8 else 5000)
    epochs = spec.epochs or 100
    reps = spec.reps or 12
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed).generate_state(1)[0])
    target = random_target(ModelKind.CORRECTED, spec.n, spec.d, rng)
    dataset = SampleSet(spec.n, sample_model(ModelKind.CORRECTED, target, n_samples, rng))
    save_params(
        Path(spec.out) / "learn_mixed_target.json", target, ModelKind.CORRECTED, spec.seed
    )
    return _learning_study(
        spec,
        dataset,
        [ModelKind.UNITARY, ModelKind.CORRECTED],
        epochs,
        reps,
        "learn_mixed_loss.csv",
    )


def run_learn_gauss(spec: ExperimentSpec):
    """Double-Gaussian target: unitary vs corrected-channel learners."""
    if spec.smoke:
        spec = replace(
            spec,
            n=spec.n if spec.n != 5 else 4,
            d=spec.d if spec.d != 4 else 3,
            epochs=spec.epochs or 20,
            reps=spec.reps or 2,
            samples=spec.samples or 1000,
        )
    n_samples = spec.samples or (20000 if spec.n >= 8 else 8000)
    epochs = spec.epochs or 200
    reps = spec.reps or 8
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed).generate_state(1)[0])
    dist = default_double_gaussian(spec.n)
    dataset = draw(dist, n_samples, rng)
    _write_csv(
        Path(spec.out) / "learn_gauss_target.csv",
        spec,
        ["x", "prob"],
        [[x, float(p)] for x, p in enumerate(dist.probs)],
    )
    return _learning_study(
        spec,
        dataset,
        [ModelKind.UNITARY, ModelKind.CORRECTED],
        epochs,
        reps,
        "learn_gauss_loss.csv",
    )


def run_cross_compare(spec: ExperimentSpec):
    """3x3 grid: a target from each model class, all three learner classes."""
    if spec.smoke:
        spec = replace(
            spec,
            n=4,
            d=3,
            epochs=spec.epochs or 10,
            reps=spec.reps or 2,
            samples=spec.samples or 1000,
        )
    n_samples = spec.samples or 6000
    epochs = spec.epochs or 100
    reps = spec.reps or 10
    all_kinds = [ModelKind.CORRECTED, ModelKind.UNCORRECTED, ModelKind.UNITARY]
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed).generate_state(1)[0])
    paths, results = [], {}
    for target_kind in all_kinds:
        target = random_target(target_kind, spec.n, spec.d, rng)
        dataset = SampleSet(spec.n, sample_model(target_kind, target, n_samples, rng))
        label = _KIND_LABEL[target_kind]
        path, blocks = _learning_study(
            spec, dataset, all_kinds, epochs, reps, f"cross_target_{label}.csv"
        )
        paths.append(path)
        results[target_kind] = blocks
    return paths, results


def run_kl_uniform(spec: ExperimentSpec, sizes=None):
    """KL(uniform || model) decay for the two mixture channels, D = N - 1."""
    if spec.smoke:
        spec = replace(spec, reps=spec.reps or 10, branch_budget=min(spec.branch_budget, 200))
        sizes = sizes or (5, 6)
    sizes = sizes or (5, 6, 7, 8, 9, 10)
    reps = spec.reps or 100
    seq = np.random.SeedSequence(spec.seed)
    rows = []
    results = {}
    for n, child in zip(sizes, seq.spawn(len(sizes))):
        d = n - 1
        for kind, kchild in zip(
            (ModelKind.CORRECTED, ModelKind.UNCORRECTED), child.spawn(2)
        ):
            unif = uniform(n)
            kls = np.empty(reps)
            for r, rchild in enumerate(kchild.spawn(reps)):
                rng = np.random.default_rng(rchild.generate_state(1)[0])
                theta = rng.uniform(0, 2 * np.pi, size=(n, d))
                p = rng.uniform(0.8, 1.0, size=(n, d))
                params = ModelParams(n, d, theta, np.log(p / (1 - p)))
                probs = exact_distribution(
                    kind, params, branch_budget=spec.branch_budget, rng=rng
                )
                kls[r] = kl_divergence(unif, DiscreteDistribution(n, probs / probs.sum()))
            rows.append(
                [n, _KIND_LABEL[kind], float(kls.mean()), float(kls.std())]
            )
            results[(n, kind)] = kls
    path = _write_csv(
        Path(spec.out) / "kl_uniform.csv", spec, ["n", "kind", "mean_kl", "std_kl"], rows
    )
    return path, results


def run_sample(spec: ExperimentSpec):
    """Draw shots from a parameter file (or a fresh random target)."""
    rng = np.random.default_rng(spec.seed)
    if spec.params_file:
        kind, params = load_params(spec.params_file)
    else:
        kind = ModelKind(spec.kind)
        params = random_target(kind, spec.n, spec.d, rng)
    values = sample_model(kind, params, spec.shots, rng)
    return kind, params, values
