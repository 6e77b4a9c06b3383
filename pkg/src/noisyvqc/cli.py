"""Command-line surface.

Subcommands: train (one INI configuration -> curves/summary CSVs),
verify-gradient (Monte Carlo check of the estimator decomposition),
bounds / privacy / qsq (calculator sweeps -> CSV tables), and data prep
(raw CSV or synthetic blobs -> circuit-ready features).

Numeric sweep flags accept either a single value or start:step:stop
(inclusive). Every CSV has a header row and 12-significant-digit numbers;
infeasible sweep points carry status "inf" instead of aborting the table.
Exit codes: 0 success, 1 validation/config error, 2 numeric or statistical
failure. All commands are deterministic for a fixed --seed.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
from configparser import ConfigParser
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import bounds
from .circuits import AnsatzSpec, EncoderSpec
from .dataprep import filter_binary, load_csv, pca_reduce, reduced_to_csv, split, synthesize
from .formatting import csv_line, sig12
from .gradients import GradContext, verify_decomposition
from .measure import readout_povm
from .noise import NO_NOISE, NoiseSpec, merged_rate
from .seeding import derive_rng
from .training import (
    ShiftObservables,
    TrainConfig,
    TrainingDiverged,
    encode_features,
    predictions,
    records_to_csv,
    train,
    utility_r1,
    utility_r2,
)

OUTDIR_ENV = "NOISYVQC_OUTDIR"


def sweep_values(text: str, integer: bool = False) -> List:
    """Parse a flag value: either one number or start:step:stop (inclusive)."""
    parts = text.split(":")
    if len(parts) == 1:
        values = [float(text)]
    elif len(parts) == 3:
        start, step, stop = (float(p) for p in parts)
        if step <= 0.0:
            raise ValueError(f"sweep step must be > 0 in {text!r}")
        values = []
        v = start
        while v <= stop + step * 1e-9:
            values.append(v)
            v += step
    else:
        raise ValueError(f"bad sweep syntax {text!r}; use a value or start:step:stop")
    if integer:
        out = []
        for v in values:
            if abs(v - round(v)) > 1e-9:
                raise ValueError(f"expected integers in sweep {text!r}")
            out.append(int(round(v)))
        return out
    return values


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_labels(raw: str) -> Tuple[int, int]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 2:
        raise ValueError(f"labels must be two comma-separated integers, got {raw!r}")
    return int(parts[0]), int(parts[1])


def _parse_shots(raw: str) -> Optional[int]:
    return None if raw.strip().lower() == "exact" else int(raw)


def _parse_opt_float(raw: str) -> Optional[float]:
    return None if raw.strip().lower() == "default" else float(raw)


def _parse_opt_int(raw: str) -> Optional[int]:
    return None if raw.strip().lower() == "default" else int(raw)


@dataclass
class RunConfig:
    """Everything one training run needs, collected from one INI file."""

    seed: int = 0
    seeds: int = 1
    outdir: Optional[str] = None
    csv: Optional[str] = None
    synthesize_rows: Optional[int] = None
    labels: Tuple[int, int] = (0, 1)
    n_train: int = 280
    n_test: int = 80
    split_seed: int = 1
    components: int = 3
    qubits: int = 3
    blocks: int = 3
    layers: int = 5
    noise_kind: str = "none"
    noise_p: float = 0.0
    iterations: int = 400
    shots: Optional[int] = 20
    lam: float = 0.0
    eta: Optional[float] = None
    batches: Optional[int] = None
    batch_size: int = 1
    clip_to_pl_box: bool = False
    half_shift_convention: bool = False
    reference_theta: Optional[str] = None


_INI_SCHEMA = {
    ("run", "seed"): ("seed", int),
    ("run", "seeds"): ("seeds", int),
    ("run", "outdir"): ("outdir", str),
    ("data", "csv"): ("csv", str),
    ("data", "synthesize"): ("synthesize_rows", int),
    ("data", "labels"): ("labels", _parse_labels),
    ("data", "n_train"): ("n_train", int),
    ("data", "n_test"): ("n_test", int),
    ("data", "split_seed"): ("split_seed", int),
    ("data", "components"): ("components", int),
    ("encoder", "qubits"): ("qubits", int),
    ("encoder", "blocks"): ("blocks", int),
    ("ansatz", "layers"): ("layers", int),
    ("noise", "kind"): ("noise_kind", str),
    ("noise", "p"): ("noise_p", float),
    ("train", "iterations"): ("iterations", int),
    ("train", "shots"): ("shots", _parse_shots),
    ("train", "lam"): ("lam", float),
    ("train", "eta"): ("eta", _parse_opt_float),
    ("train", "batches"): ("batches", _parse_opt_int),
    ("train", "batch_size"): ("batch_size", int),
    ("train", "clip_to_pl_box"): ("clip_to_pl_box", _parse_bool),
    ("train", "half_shift_convention"): ("half_shift_convention", _parse_bool),
    ("train", "reference_theta"): ("reference_theta", str),
}


def load_run_config(path: str) -> RunConfig:
    parser = ConfigParser()
    if not parser.read(path):
        raise ValueError(f"cannot read config file {path}")
    config = RunConfig()
    for section in parser.sections():
        for key, raw in parser.items(section):
            entry = _INI_SCHEMA.get((section, key))
            if entry is None:
                raise ValueError(f"unknown config key [{section}] {key}")
            attr, parse = entry
            try:
                setattr(config, attr, parse(raw))
            except ValueError as exc:
                raise ValueError(f"bad value for [{section}] {key}: {exc}") from None
    if config.noise_kind not in ("none", "depolarize"):
        raise ValueError(
            f"[noise] kind must be 'none' or 'depolarize' for training, got {config.noise_kind!r}"
        )
    if config.csv is None and config.synthesize_rows is None:
        raise ValueError("config needs [data] csv = PATH or [data] synthesize = N")
    if config.seeds < 1:
        raise ValueError("[run] seeds must be >= 1")
    return config


def _resolve_outdir(flag_value: Optional[str], config_value: Optional[str] = None) -> str:
    outdir = flag_value or config_value or os.environ.get(OUTDIR_ENV) or "."
    os.makedirs(outdir, exist_ok=True)
    return outdir


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="") as handle:
        handle.write(text)


def _emit_table(header: str, rows: List[str], out: Optional[str]) -> None:
    text = "\n".join([header] + rows) + "\n"
    if out:
        _write(out, text)
    else:
        print(text, end="")


def _load_theta(path: str) -> np.ndarray:
    values = []
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line or line == "theta":
                continue
            values.append(float(line))
    if not values:
        raise ValueError(f"{path}: no parameter values")
    return np.array(values)


def _theta_csv(theta: np.ndarray) -> str:
    return "\n".join(["theta"] + [sig12(v) for v in theta]) + "\n"


def cmd_train(args) -> int:
    config = load_run_config(args.config)
    if args.iterations is not None:
        config.iterations = args.iterations
    if args.seed is not None:
        config.seed = args.seed
    outdir = _resolve_outdir(args.outdir, config.outdir)

    if config.synthesize_rows is not None:
        raw = synthesize(config.synthesize_rows, config.split_seed)
    else:
        raw = load_csv(config.csv)
    raw = filter_binary(raw, config.labels)
    reduced = pca_reduce(raw, config.components)
    train_split, test_split = split(reduced, config.n_train, config.n_test, config.split_seed)

    encoder = EncoderSpec(config.qubits, config.blocks)
    if config.components != encoder.feature_dim:
        raise ValueError(
            f"components ({config.components}) must equal the qubit count ({encoder.feature_dim})"
        )
    train_data = encode_features(train_split.features, train_split.labels.astype(float), encoder)
    test_data = encode_features(test_split.features, test_split.labels.astype(float), encoder)
    ansatz = AnsatzSpec(config.qubits, config.layers)
    noise = (
        NoiseSpec("depolarize", p=config.noise_p)
        if config.noise_kind == "depolarize"
        else NO_NOISE
    )

    runs = []
    for offset in range(config.seeds):
        seed = config.seed + offset
        train_config = TrainConfig(
            iterations=config.iterations,
            shots=config.shots,
            lam=config.lam,
            eta=config.eta,
            batches=config.batches,
            batch_size=config.batch_size,
            noise=noise,
            seed=seed,
            clip_to_pl_box=config.clip_to_pl_box,
            half_shift_convention=config.half_shift_convention,
        )
        records = train(train_config, train_data, ansatz, test_data)
        runs.append(records)
        if offset == 0:
            _write(os.path.join(outdir, "curves.csv"), records_to_csv(records))
        if config.seeds > 1:
            _write(os.path.join(outdir, f"curves_seed{seed}.csv"), records_to_csv(records))
        _write(os.path.join(outdir, f"theta_seed{seed}.csv"), _theta_csv(records[-1].theta))

    finals = [records[-1] for records in runs]
    thetas = [record.theta for record in finals]
    d = ansatz.n_params
    total_layers = config.blocks + config.layers
    p_tilde = merged_rate(config.noise_p, total_layers) if config.noise_kind == "depolarize" else 0.0

    r1 = utility_r1(thetas, train_data, ansatz, config.lam)
    r2 = float("nan")
    if config.reference_theta:
        theta_star = _load_theta(config.reference_theta)
        r2 = utility_r2(thetas, theta_star, train_data, ansatz, config.lam)
    r1_bound_value = float("nan")
    r2_bound_value = float("nan")
    if config.shots is not None and config.iterations >= 1:
        inputs = bounds.BoundInputs(
            d=d,
            iterations=config.iterations,
            shots=config.shots,
            batches=config.batches if config.batches is not None else config.n_train,
            lam=config.lam,
            p_tilde=p_tilde,
        )
        r1_bound_value = bounds.r1_bound(inputs)
        if config.lam > 1.0 / math.pi:
            r2_bound_value = bounds.r2_bound(inputs)

    def mean(attr: str) -> float:
        return float(np.mean([getattr(f, attr) for f in finals]))

    summary_header = (
        "seeds,iterations,d,p,p_tilde,shots,final_loss,final_noisy_loss,"
        "final_train_acc,final_test_acc,r1,r1_bound,r2,r2_bound,total_shots"
    )
    summary_row = csv_line(
        [
            config.seeds,
            config.iterations,
            d,
            config.noise_p if config.noise_kind == "depolarize" else 0.0,
            p_tilde,
            config.shots if config.shots is not None else float("nan"),
            mean("loss"),
            mean("noisy_loss"),
            mean("train_acc"),
            mean("test_acc"),
            r1,
            r1_bound_value,
            r2,
            r2_bound_value,
            finals[0].shots,
        ]
    )
    _write(os.path.join(outdir, "summary.csv"), summary_header + "\n" + summary_row + "\n")

    shots_text = "exact" if config.shots is None else str(config.shots)
    print(
        f"data: {config.n_train} train / {config.n_test} test rows, "
        f"{config.qubits} qubits, d={d}"
    )
    print(
        f"noise: kind={config.noise_kind} p={sig12(config.noise_p)} "
        f"merged p_tilde={sig12(p_tilde)}, shots={shots_text}, seeds={config.seeds}"
    )
    print(
        f"final: loss={sig12(mean('loss'))} noisy_loss={sig12(mean('noisy_loss'))} "
        f"train_acc={sig12(mean('train_acc'))} test_acc={sig12(mean('test_acc'))}"
    )
    print(
        f"utility: r1={sig12(r1)} (bound {sig12(r1_bound_value)}), "
        f"r2={sig12(r2)} (bound {sig12(r2_bound_value)})"
    )
    print(f"wrote curves.csv, summary.csv and theta files under {outdir}")
    return 0


def cmd_verify_gradient(args) -> int:
    p_tilde = merged_rate(args.p, args.layers)
    encoder = EncoderSpec(3, 3)
    ansatz = AnsatzSpec(3, 2)
    engine = ShiftObservables(ansatz, readout_povm(3))
    d = ansatz.n_params
    rng = derive_rng(args.seed, "verify", "contexts")
    all_passed = True
    for index in range(args.contexts):
        x = rng.uniform(0.0, math.pi, size=3)
        label = float(rng.integers(0, 2))
        theta = rng.uniform(math.pi, 3.0 * math.pi, size=d)
        j = int(rng.integers(0, d))
        state = encode_features(x[None, :], np.array([label]), encoder)
        y = predictions(engine.all_shifts(theta), state.states)
        ctx = GradContext(
            y_hat=float(y[0, 0]),
            y_hat_plus=float(y[1 + j, 0]),
            y_hat_minus=float(y[1 + d + j, 0]),
            label=label,
            theta_j=float(theta[j]),
            lam=args.lam,
            p_tilde=p_tilde,
            ratio=0.5,
            shots=args.shots,
        )
        report = verify_decomposition(ctx, args.trials, derive_rng(args.seed, "verify", "mc", index))
        verdict = "PASS" if report.passed else "FAIL"
        flag = " (degenerate)" if report.degenerate else ""
        print(
            f"context {index}: z={report.z_score:.3f} "
            f"var_ratio={report.var_ratio:.4f}{flag} -> {verdict}"
        )
        all_passed = all_passed and report.passed
    print(
        f"{'all checks passed' if all_passed else 'decomposition check FAILED'} "
        f"(p={sig12(args.p)}, layers={args.layers}, p_tilde={sig12(p_tilde)}, "
        f"shots={args.shots}, trials={args.trials})"
    )
    return 0 if all_passed else 2


def cmd_bounds(args) -> int:
    grid = itertools.product(
        sweep_values(args.d, integer=True),
        sweep_values(args.iterations, integer=True),
        sweep_values(args.shots, integer=True),
        sweep_values(args.batches, integer=True),
        sweep_values(args.lam),
        sweep_values(args.p_tilde),
    )
    rows = []
    for d, iterations, shots, batches, lam, p_tilde in grid:
        r1_value = r2_value = float("nan")
        status = "ok"
        try:
            inputs = bounds.BoundInputs(
                d=d, iterations=iterations, shots=shots, batches=batches,
                lam=lam, p_tilde=p_tilde,
            )
            if args.metric in ("r1", "both"):
                r1_value = bounds.r1_bound(inputs, args.channel)
            if args.metric in ("r2", "both"):
                try:
                    r2_value = bounds.r2_bound(inputs, args.channel)
                except ValueError:
                    r2_value = float("inf")
                    status = "inf"
        except ValueError:
            r1_value = r2_value = float("inf")
            status = "inf"
        rows.append(
            csv_line([d, iterations, shots, batches, lam, p_tilde, args.channel,
                      r1_value, r2_value, status])
        )
    _emit_table(
        "d,iterations,shots,batches,lam,p_tilde,channel,r1_bound,r2_bound,status",
        rows,
        args.out,
    )
    return 0


def cmd_privacy(args) -> int:
    grid = itertools.product(
        sweep_values(args.p_tilde),
        sweep_values(args.ratio),
        sweep_values(args.shots, integer=True),
        sweep_values(args.iterations, integer=True),
        sweep_values(args.d, integer=True),
    )
    rows = []
    for p_tilde, ratio, shots, iterations, d in grid:
        status = "ok"
        eps = (float("inf"),) * 3
        try:
            inputs = bounds.PrivacyInputs(
                p_tilde=p_tilde, ratio=ratio, shots=shots, iterations=iterations,
                d=d, delta_grad=args.delta_grad, delta_total=args.delta_total,
            )
            eps = bounds.epsilon_chain(inputs, args.variant)
            if not all(math.isfinite(e) for e in eps):
                status = "inf"
        except ValueError:
            status = "inf"
        rows.append(
            csv_line([p_tilde, ratio, shots, iterations, d,
                      args.delta_grad, args.delta_total, args.variant,
                      eps[0], eps[1], eps[2], status])
        )
    _emit_table(
        "p_tilde,ratio,shots,iterations,d,delta_grad,delta_total,variant,"
        "eps_query,eps_grad,eps_total,status",
        rows,
        args.out,
    )
    return 0


def cmd_qsq(args) -> int:
    grid = itertools.product(
        sweep_values(args.tau),
        sweep_values(args.fail_prob),
        sweep_values(args.p_tilde),
        sweep_values(args.nu),
        sweep_values(args.trm_ratio),
    )
    rows = []
    any_failed = False
    for index, (tau, fail_prob, p_tilde, nu, trm_ratio) in enumerate(grid):
        status = "ok"
        shots_text = "inf"
        coverage = floor = float("nan")
        try:
            inputs = bounds.QsqInputs(
                tau=tau, fail_prob=fail_prob, p_tilde=p_tilde, nu=nu, trm_ratio=trm_ratio
            )
            count = bounds.qsq_shot_count(inputs)
            if isinstance(count, bounds.Infeasible):
                status = "inf"
            else:
                shots_text = str(count)
                if args.simulate:
                    coverage = bounds.simulate_qsq_query(
                        inputs, count, args.simulate, args.seed + index
                    )
                    floor = bounds.qsq_coverage_floor(fail_prob, args.simulate)
                    if coverage < floor:
                        status = "fail"
                        any_failed = True
        except ValueError:
            status = "inf"
        rows.append(
            csv_line([tau, fail_prob, p_tilde, nu, trm_ratio, shots_text,
                      coverage, floor, status])
        )
    _emit_table(
        "tau,fail_prob,p_tilde,nu,trm_ratio,shots,coverage,coverage_floor,status",
        rows,
        args.out,
    )
    return 2 if any_failed else 0


def cmd_data_prep(args) -> int:
    if (args.csv is None) == (args.synthesize is None):
        raise ValueError("data prep needs exactly one of --csv or --synthesize")
    if args.synthesize is not None:
        raw = synthesize(args.synthesize, args.seed)
    else:
        raw = load_csv(args.csv)
    labels = _parse_labels(args.labels)
    raw = filter_binary(raw, labels)
    reduced = pca_reduce(raw, args.components)
    outdir = _resolve_outdir(args.outdir)
    _write(os.path.join(outdir, "reduced.csv"), reduced_to_csv(reduced))
    written = ["reduced.csv"]
    if args.n_train is not None and args.n_test is not None:
        train_split, test_split = split(reduced, args.n_train, args.n_test, args.seed)
        _write(os.path.join(outdir, "train.csv"), reduced_to_csv(train_split))
        _write(os.path.join(outdir, "test.csv"), reduced_to_csv(test_split))
        written += ["train.csv", "test.csv"]
    counts = {int(l): int((raw.labels == l).sum()) for l in labels}
    print(f"rows: {raw.n_rows} (" + ", ".join(f"label {l}: {c}" for l, c in counts.items()) + ")")
    print(f"components: {args.components}, features scaled to [0, pi]")
    print(f"wrote {', '.join(written)} under {outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisyvqc",
        description="Noisy variational-circuit training and theory calculators.",
    )
    sub = parser.add_subparsers(dest="command")

    p_train = sub.add_parser(
        "train",
        help="run one training configuration from an INI file",
        description=(
            "Runs training per the INI config and writes curves.csv, summary.csv "
            "and per-seed theta files. Config sections/keys: [run] seed, seeds, "
            "outdir; [data] csv, synthesize, labels, n_train, n_test, split_seed, "
            "components; [encoder] qubits, blocks; [ansatz] layers; [noise] kind, p; "
            "[train] iterations, shots ('exact' for exact expectations), lam, eta "
            "('default' = 1/S), batches ('default' = n), batch_size, clip_to_pl_box, "
            "half_shift_convention, reference_theta. Unknown keys are rejected."
        ),
    )
    p_train.add_argument("--config", required=True, help="INI configuration file")
    p_train.add_argument("--iterations", type=int, default=None, help="override [train] iterations")
    p_train.add_argument("--seed", type=int, default=None, help="override [run] seed")
    p_train.add_argument("--outdir", default=None, help=f"output directory (default: ${OUTDIR_ENV} or .)")
    p_train.set_defaults(func=cmd_train)

    p_verify = sub.add_parser(
        "verify-gradient",
        help="Monte Carlo check of the estimated-gradient mean/variance decomposition",
    )
    p_verify.add_argument("--p", type=float, default=0.0025, help="per-layer depolarization rate")
    p_verify.add_argument("--layers", type=int, default=8, help="noise layer count merged into p_tilde")
    p_verify.add_argument("--shots", type=int, default=20)
    p_verify.add_argument("--trials", type=int, default=100_000)
    p_verify.add_argument("--contexts", type=int, default=3, help="random contexts to test")
    p_verify.add_argument("--lam", type=float, default=0.1)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=cmd_verify_gradient)

    p_bounds = sub.add_parser("bounds", help="utility-bound calculator (sweepable flags)")
    p_bounds.add_argument("--metric", choices=("r1", "r2", "both"), default="both")
    p_bounds.add_argument("--channel", choices=("depolarize", "general"), default="depolarize")
    p_bounds.add_argument("--d", default="15", help="parameter count (sweepable)")
    p_bounds.add_argument("--iterations", default="400", help="sweepable")
    p_bounds.add_argument("--shots", default="20", help="sweepable")
    p_bounds.add_argument("--batches", default="280", help="sweepable")
    p_bounds.add_argument("--lam", default="0", help="sweepable")
    p_bounds.add_argument("--p-tilde", dest="p_tilde", default="0.0198", help="sweepable")
    p_bounds.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p_bounds.set_defaults(func=cmd_bounds)

    p_priv = sub.add_parser("privacy", help="privacy-loss chain calculator (sweepable flags)")
    p_priv.add_argument("--p-tilde", dest="p_tilde", default="0.1", help="sweepable")
    p_priv.add_argument("--ratio", default="0.5", help="sweepable")
    p_priv.add_argument("--shots", default="20", help="sweepable")
    p_priv.add_argument("--iterations", default="400", help="sweepable")
    p_priv.add_argument("--d", default="15", help="sweepable")
    p_priv.add_argument("--delta-grad", dest="delta_grad", type=float, default=1e-5)
    p_priv.add_argument("--delta-total", dest="delta_total", type=float, default=1e-5)
    p_priv.add_argument("--variant", choices=("literal", "composed"), default="literal")
    p_priv.add_argument("--out", default=None)
    p_priv.set_defaults(func=cmd_privacy)

    p_qsq = sub.add_parser("qsq", help="statistical-query shot counts (sweepable flags)")
    p_qsq.add_argument("--tau", default="0.1", help="sweepable")
    p_qsq.add_argument("--fail-prob", dest="fail_prob", default="0.05", help="sweepable")
    p_qsq.add_argument("--p-tilde", dest="p_tilde", default="0", help="sweepable")
    p_qsq.add_argument("--nu", default="0", help="sweepable")
    p_qsq.add_argument("--trm-ratio", dest="trm_ratio", default="0", help="sweepable")
    p_qsq.add_argument("--simulate", type=int, default=0, help="empirical coverage trials (0 = off)")
    p_qsq.add_argument("--seed", type=int, default=0)
    p_qsq.add_argument("--out", default=None)
    p_qsq.set_defaults(func=cmd_qsq)

    p_data = sub.add_parser("data", help="dataset utilities")
    data_sub = p_data.add_subparsers(dest="data_command")
    p_prep = data_sub.add_parser("prep", help="reduce raw features to circuit angles")
    p_prep.add_argument("--csv", default=None, help="raw CSV (features...,label)")
    p_prep.add_argument("--synthesize", type=int, default=None, help="rows of synthetic blobs instead")
    p_prep.add_argument("--labels", default="0,1", help="two classes to keep")
    p_prep.add_argument("--components", type=int, default=3)
    p_prep.add_argument("--n-train", dest="n_train", type=int, default=None)
    p_prep.add_argument("--n-test", dest="n_test", type=int, default=None)
    p_prep.add_argument("--seed", type=int, default=0)
    p_prep.add_argument("--outdir", default=None)
    p_prep.set_defaults(func=cmd_data_prep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map those to validation status
        return 0 if exc.code == 0 else 1
    if getattr(args, "command", None) is None:
        parser.print_help()
        return 1
    if args.command == "data" and getattr(args, "data_command", None) is None:
        print("usage: noisyvqc data prep ...", flush=True)
        return 1
    try:
        return args.func(args)
    except TrainingDiverged as exc:
        print(f"numeric failure: {exc}", flush=True)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", flush=True)
        return 1


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
