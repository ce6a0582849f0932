"""Command-line front end.

Subcommands: gen-synth, train, predict, eval, cv, shrinkage-curve,
norm-ball, pac-bound.  Every command is deterministic given its flags and
seed; all tabular output is CSV with a header row, and files are written
with "\\n" newlines so reruns are byte-identical.
"""

import argparse
import csv
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .bounds import BoundInputs, margin_sample_count, pac_bound
from .chain import ChainModel, FeatureSpec, decode
from .curves import (
    identity_points,
    kl_norm_2d,
    l1_unit_ball,
    l2_unit_ball,
    norm_ball_boundary,
    norm_ball_level,
    shrinkage_eta_grid,
    shrinkage_points,
)
from .dataio import ModelFile, read_dataset, read_model_file, write_dataset, write_model_file
from .metrics import evaluate_weights, mean_std
from .models import LaplaceConfig, train_gaussian, train_l1m3n, train_laplace
from .optimize import SubgradConfig, structured_hinge_objective
from .synth import GeneratorConfig, gen_dataset

__all__ = ["main", "build_parser"]

# Default hyperparameter grids for cross-validation sweeps.
DEFAULT_LAMBDA_GRID = (9.0, 16.0, 25.0, 36.0, 49.0, 64.0)
DEFAULT_BETA_GRID = (1.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0)
DEFAULT_RADIUS_GRID = (10.0,)

EVAL_COLUMNS = ["model", "dataset", "n_train", "per_label_err", "seq_err", "seed"]
CV_COLUMNS = [
    "model",
    "lambda",
    "beta",
    "radius",
    "fold",
    "n_train",
    "per_label_err",
    "seq_err",
    "seed",
]


def _fmt(value) -> str:
    """Canonical text for a float CSV field."""
    return format(float(value), ".12g")


def _write_csv(path, columns, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


# ----------------------------------------------------------------------
# gen-synth


def _cmd_gen_synth(args) -> int:
    cfg = GeneratorConfig(
        d=args.d,
        d_rel=args.d_rel,
        L=args.length,
        m=args.m,
        n_samples=args.n,
        gibbs_iters=args.gibbs_iters,
        correlated=args.correlated,
        group_size=args.group_size,
        noise_sd=args.noise_sd,
        seed=args.seed,
    )
    dataset = gen_dataset(cfg)
    spec = FeatureSpec(cfg.d, cfg.m)
    meta = {
        "generator": asdict(cfg),
        "relevant": dataset.crf.relevant.tolist(),
    }
    write_dataset(args.out, dataset.instances, spec, meta=meta)
    weights = dataset.crf.model.weights
    state_norm = float(np.linalg.norm(spec.state_view(weights)))
    trans_norm = float(np.linalg.norm(spec.transition_view(weights)))
    print(f"wrote {cfg.n_samples} instances to {args.out}")
    print(
        f"true model: relevant features {dataset.crf.relevant.tolist()}, "
        f"state weight norm {state_norm:.4f}, transition weight norm {trans_norm:.4f}"
    )
    if dataset.instances:
        labels = np.concatenate([inst.labels for inst in dataset.instances])
        freqs = [float(np.mean(labels == c)) for c in range(cfg.m)]
        print("label frequencies: " + ", ".join(f"{f:.3f}" for f in freqs))
    return 0


# ----------------------------------------------------------------------
# train


def _train_one(model_name, instances, spec, *, lam, beta, c, iters, outer_iters, radius, seed):
    """Train one model; returns (weights, var_diag or None, hyper dict, objective)."""
    if model_name == "m3n":
        c_eff = 200.0 * beta if c is None else c
        cfg = SubgradConfig(beta=beta, iterations=iters, C=c_eff, seed=seed)
        post = train_gaussian(instances, spec, cfg)
        objective = structured_hinge_objective(
            instances, ChainModel(spec, post.mean), c_eff, inv_diag=np.ones(spec.K)
        )
        hyper = {"beta": beta, "c": c_eff, "iters": iters, "seed": seed}
        return post.mean, post.var_diag, hyper, objective
    if model_name == "lapmedn":
        if lam is None:
            raise ValueError("lapmedn requires --lambda")
        c_eff = 1.0 if c is None else c
        inner = SubgradConfig(beta=beta, iterations=iters, C=c_eff, seed=seed)
        lcfg = LaplaceConfig(lam=lam, inner=inner, C=c_eff, outer_iters=outer_iters)
        post = train_laplace(instances, spec, lcfg)
        objective = structured_hinge_objective(
            instances, ChainModel(spec, post.mean), c_eff, inv_diag=1.0 / post.var_diag
        )
        hyper = {
            "lambda": lam,
            "beta": beta,
            "c": c_eff,
            "iters": iters,
            "outer_iters": outer_iters,
            "seed": seed,
        }
        return post.mean, post.var_diag, hyper, objective
    if model_name == "l1m3n":
        if radius is None:
            raise ValueError("l1m3n requires --radius")
        c_eff = 1.0 if c is None else c
        cfg = SubgradConfig(beta=beta, iterations=iters, C=c_eff, seed=seed)
        model = train_l1m3n(instances, spec, radius, cfg)
        objective = structured_hinge_objective(instances, model, c_eff)
        hyper = {"radius": radius, "beta": beta, "c": c_eff, "iters": iters, "seed": seed}
        return model.weights, None, hyper, objective
    raise ValueError(f"unknown model {model_name!r}")


def _cmd_train(args) -> int:
    instances, spec, _ = read_dataset(args.data)
    started = time.perf_counter()
    weights, var_diag, hyper, objective = _train_one(
        args.model,
        instances,
        spec,
        lam=args.lam,
        beta=args.beta,
        c=args.c,
        iters=args.iters,
        outer_iters=args.outer_iters,
        radius=args.radius,
        seed=args.seed,
    )
    elapsed = time.perf_counter() - started
    hyper["n_train"] = len(instances)
    write_model_file(
        args.out,
        ModelFile(kind=args.model, spec=spec, weights=weights, var_diag=var_diag, hyper=hyper),
    )
    print(f"trained {args.model} on {len(instances)} instances in {elapsed:.2f} s")
    print(f"final objective: {objective:.6f}")
    print(f"model written to {args.out}")
    return 0


# ----------------------------------------------------------------------
# predict / eval


def _check_compatible(model: ModelFile, spec: FeatureSpec):
    if model.spec != spec:
        raise ValueError(
            f"model dimensions (d={model.spec.d}, m={model.spec.m}) do not match "
            f"dataset (d={spec.d}, m={spec.m})"
        )


def _cmd_predict(args) -> int:
    model = read_model_file(args.model_file)
    instances, spec, _ = read_dataset(args.data)
    _check_compatible(model, spec)
    chain = ChainModel(spec, model.weights)
    rows = []
    for i, inst in enumerate(instances):
        pred = decode(chain, inst.features)
        rows.append([i, " ".join(str(int(v)) for v in pred)])
    _write_csv(args.out, ["index", "y_pred"], rows)
    print(f"wrote predictions for {len(rows)} instances to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    model = read_model_file(args.model_file)
    instances, spec, _ = read_dataset(args.data)
    _check_compatible(model, spec)
    report = evaluate_weights(spec, model.weights, instances)
    row = [
        model.kind,
        Path(args.data).name,
        model.hyper.get("n_train", ""),
        _fmt(report.per_label_err),
        _fmt(report.seq_err),
        model.hyper.get("seed", ""),
    ]
    if args.out:
        _write_csv(args.out, EVAL_COLUMNS, [row])
    print(
        f"{model.kind}: per-label error {report.per_label_err:.4f}, "
        f"sequence error {report.seq_err:.4f} "
        f"({report.n_sequences} sequences, {report.n_positions} positions)"
    )
    return 0


# ----------------------------------------------------------------------
# cv


def _hyper_grid(model_name, lambdas, betas, radii):
    """Hyperparameter combinations swept for one model family."""
    if model_name == "m3n":
        return [(None, beta, None) for beta in betas]
    if model_name == "lapmedn":
        return [(lam, beta, None) for lam in lambdas for beta in betas]
    if model_name == "l1m3n":
        return [(None, beta, radius) for radius in radii for beta in betas]
    raise ValueError(f"unknown model {model_name!r}")


def _cmd_cv(args) -> int:
    instances, spec, _ = read_dataset(args.data)
    n = len(instances)
    if args.folds < 2:
        raise ValueError("need at least 2 folds")
    if args.folds > n:
        raise ValueError("more folds than instances")
    rng = np.random.default_rng(args.seed)
    folds = np.array_split(rng.permutation(n), args.folds)
    models = [name.strip() for name in args.models.split(",") if name.strip()]
    rows = []
    for model_name in models:
        for lam, beta, radius in _hyper_grid(model_name, args.lambdas, args.betas, args.radii):
            label_errs, seq_errs = [], []
            for fold_idx, fold in enumerate(folds):
                # Inverted split: train on the single fold, test on the rest.
                held = set(fold.tolist())
                train_set = [instances[i] for i in fold]
                test_set = [instances[i] for i in range(n) if i not in held]
                weights, _, _, _ = _train_one(
                    model_name,
                    train_set,
                    spec,
                    lam=lam,
                    beta=beta,
                    c=args.c,
                    iters=args.iters,
                    outer_iters=args.outer_iters,
                    radius=radius,
                    seed=args.seed + fold_idx,
                )
                report = evaluate_weights(spec, weights, test_set)
                label_errs.append(report.per_label_err)
                seq_errs.append(report.seq_err)
                rows.append(
                    [
                        model_name,
                        "" if lam is None else _fmt(lam),
                        _fmt(beta),
                        "" if radius is None else _fmt(radius),
                        fold_idx,
                        len(train_set),
                        _fmt(report.per_label_err),
                        _fmt(report.seq_err),
                        args.seed + fold_idx,
                    ]
                )
            for stat_name, stat in zip(
                ("mean", "std"), zip(mean_std(label_errs), mean_std(seq_errs))
            ):
                rows.append(
                    [
                        model_name,
                        "" if lam is None else _fmt(lam),
                        _fmt(beta),
                        "" if radius is None else _fmt(radius),
                        stat_name,
                        "",
                        _fmt(stat[0]),
                        _fmt(stat[1]),
                        args.seed,
                    ]
                )
    _write_csv(args.out, CV_COLUMNS, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


# ----------------------------------------------------------------------
# curves


def _parse_eta_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("--eta-grid must look like MIN:MAX:COUNT")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 2 or not lo < hi:
        raise ValueError("--eta-grid needs MIN < MAX and COUNT >= 2")
    return np.linspace(lo, hi, count)


def _cmd_shrinkage_curve(args) -> int:
    rows = []
    explicit = _parse_eta_grid(args.eta_grid) if args.eta_grid else None
    widest = None
    for lam in args.lambdas:
        etas = explicit if explicit is not None else shrinkage_eta_grid(lam, args.points)
        for point in shrinkage_points(lam, etas):
            rows.append(["laplace", _fmt(lam), _fmt(point.x), _fmt(point.y)])
        if widest is None or etas[-1] > widest[-1]:
            widest = etas
    for point in identity_points(widest):
        rows.append(["gaussian", "", _fmt(point.x), _fmt(point.y)])
    _write_csv(args.out, ["prior", "lambda", "eta", "posterior_mean"], rows)
    print(f"wrote {len(rows)} curve points to {args.out}")
    return 0


def _cmd_norm_ball(args) -> int:
    rows = []
    for lam in args.lambdas:
        level = norm_ball_level(lam)
        for w1, w2 in norm_ball_boundary(lam, args.angles):
            rows.append(["kl", _fmt(lam), _fmt(w1), _fmt(w2), _fmt(level)])
    for w1, w2 in l1_unit_ball(args.angles):
        rows.append(["l1", "", _fmt(w1), _fmt(w2), _fmt(1.0)])
    for w1, w2 in l2_unit_ball(args.angles):
        rows.append(["l2", "", _fmt(w1), _fmt(w2), _fmt(1.0)])
    _write_csv(args.out, ["curve", "lambda", "w1", "w2", "level"], rows)
    print(f"wrote {len(rows)} boundary points to {args.out}")
    return 0


# ----------------------------------------------------------------------
# pac-bound


def _cmd_pac_bound(args) -> int:
    inputs = BoundInputs(
        n=args.n,
        y_card=args.y_card,
        c=args.c,
        gamma=args.gamma,
        kl=args.kl,
        delta=args.delta,
        empirical_margin_rate=args.margin_rate,
    )
    m = margin_sample_count(inputs)
    bound = pac_bound(inputs)
    print(f"m = {m}")
    print(f"bound = {bound:.10f}")
    if args.out:
        _write_csv(
            args.out,
            ["n", "y_card", "c", "gamma", "kl", "delta", "empirical_margin_rate", "m", "bound"],
            [
                [
                    args.n,
                    args.y_card,
                    _fmt(args.c),
                    _fmt(args.gamma),
                    _fmt(args.kl),
                    _fmt(args.delta),
                    _fmt(args.margin_rate),
                    m,
                    _fmt(bound),
                ]
            ],
        )
    return 0


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medn", description="Max-margin chain models: data, training, analysis."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-synth", help="generate a synthetic dataset file")
    p.add_argument("--d", type=int, default=20, help="input features per position")
    p.add_argument("--d-rel", type=int, default=5, help="relevant input features")
    p.add_argument("--length", "--L", dest="length", type=int, default=8, help="sequence length")
    p.add_argument("--m", type=int, default=2, help="label arity")
    p.add_argument("--n", type=int, default=250, help="number of instances")
    p.add_argument("--gibbs-iters", type=int, default=500, help="labeling sweeps per instance")
    p.add_argument("--correlated", action="store_true", help="group-correlated relevant features")
    p.add_argument("--group-size", type=int, default=1)
    p.add_argument("--noise-sd", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_synth)

    p = sub.add_parser("train", help="train a model and write a model file")
    p.add_argument("--model", choices=("m3n", "lapmedn", "l1m3n"), required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="prior scale (lapmedn)")
    p.add_argument("--beta", type=float, default=1.0, help="step-size scale")
    p.add_argument("--c", type=float, default=None, help="slack penalty (default 200*beta for m3n, 1 otherwise)")
    p.add_argument("--iters", type=int, default=50, help="epochs per subgradient solve")
    p.add_argument("--outer-iters", type=int, default=4, help="outer loop bound T (lapmedn)")
    p.add_argument("--radius", type=float, default=None, help="L1 ball radius (l1m3n)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="decode a dataset under a trained model")
    p.add_argument("--model-file", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("eval", help="error rates of a trained model on a dataset")
    p.add_argument("--model-file", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", default=None, help="optional CSV destination")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("cv", help="inverted cross-validation with hyperparameter sweeps")
    p.add_argument("--data", required=True)
    p.add_argument("--folds", type=int, required=True)
    p.add_argument("--models", default="m3n,lapmedn", help="comma-separated model list")
    p.add_argument("--lambdas", type=_float_list, default=list(DEFAULT_LAMBDA_GRID))
    p.add_argument("--betas", type=_float_list, default=list(DEFAULT_BETA_GRID))
    p.add_argument("--radii", type=_float_list, default=list(DEFAULT_RADIUS_GRID))
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--outer-iters", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("shrinkage-curve", help="posterior-mean shrinkage curves as CSV")
    p.add_argument("--lambdas", type=_float_list, default=[4.0, 6.0])
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--eta-grid", default=None, help="explicit grid MIN:MAX:COUNT")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_shrinkage_curve)

    p = sub.add_parser("norm-ball", help="penalty-ball boundaries as CSV")
    p.add_argument("--lambdas", type=_float_list, default=[1.0, 4.0, 16.0])
    p.add_argument("--angles", type=int, default=360)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_norm_ball)

    p = sub.add_parser("pac-bound", help="evaluate the generalization bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y-card", type=int, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--kl", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--margin-rate", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_pac_bound)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
