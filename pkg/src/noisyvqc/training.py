"""Empirical-risk training of the layered circuit under gate noise.

Loss: (1/n) sum_i (y_hat_i - y_i)^2 + (lam/2) ||theta||^2. One update is
theta <- theta - (eta/B) sum_i grad_i with grad_i the per-batch estimated
gradient; with the defaults B = n, B_s = 1 this is plain full-batch descent.

Per-layer depolarization is folded into the closed form
q = (1 - p_tilde) y_hat + p_tilde r with p_tilde = merged_rate(p, L_Q), which
is exact (the merging identity is tested separately), so the loop never
simulates noisy density matrices. Measurement sampling draws all
B * (2d + 1) binomials of an iteration in one vectorized call; the unshifted
sample mean of a batch is shared by all d parameter shifts, matching the
2d + 1 circuit evaluations an iteration costs on hardware.

Exact-expectation mode (shots=None) replaces every sample mean by its mean;
with noise "none" that is the analytic-gradient baseline.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import qcore
from .bounds import smoothness
from .circuits import AnsatzSpec, EncoderSpec, build_encoder, empty_circuit, evaluate
from .formatting import csv_line
from .measure import PovmSpec, readout_povm
from .noise import NO_NOISE, NoiseSpec, merged_general_state, merged_rate
from .seeding import derive_rng

PL_BOX = (math.pi, 3.0 * math.pi)

CURVE_HEADER = "iter,loss,noisy_loss,train_acc,test_acc,shots"


class TrainingDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class EncodedDataset:
    """Feature vectors already pushed through the (noiseless) encoder.

    states: (n, D, D) density matrices; labels: (n,) floats in {0, 1};
    encoder_layers counts the encoder's noise-insertion points so merged
    rates cover the whole circuit.
    """

    states: np.ndarray
    labels: np.ndarray
    encoder_layers: int

    def __post_init__(self):
        if self.states.ndim != 3 or self.states.shape[1] != self.states.shape[2]:
            raise ValueError(f"states must be (n, D, D), got {self.states.shape}")
        if self.labels.shape != (self.states.shape[0],):
            raise ValueError("labels must match states in length")
        if self.encoder_layers < 0:
            raise ValueError("encoder_layers must be >= 0")

    @property
    def n_samples(self) -> int:
        return self.states.shape[0]

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.states.shape[1])))


def encode_features(
    features: np.ndarray, labels: np.ndarray, encoder: EncoderSpec
) -> EncodedDataset:
    """Run every feature row through the encoder on |0...0>."""
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float)
    if features.ndim != 2:
        raise ValueError("features must be a 2-D array")
    nothing = empty_circuit(encoder.n_qubits)
    states = np.stack(
        [evaluate(build_encoder(encoder, row), nothing) for row in features]
    )
    return EncodedDataset(states, labels, encoder_layers=encoder.n_blocks)


class ShiftObservables:
    """Heisenberg-picture observables for a parameter vector and all its
    +-pi/2 single-parameter shifts.

    For the layered circuit U = V_{L-1} ... V_0 with V_l = C R_l (R_l the
    tensor product of per-qubit Y rotations, C the fixed entangling chain),
    a shift of theta[l, j] rotates qubit j by an extra +-pi/2 inside layer l:
    R_l -> R_l G_{j,+-}. Caching the layer prefixes, suffixes and the
    conjugated projector per layer makes all 2d + 1 observables cost O(d)
    small matrix products, and predictions for a whole dataset become one
    einsum against the precomputed encoder states.
    """

    def __init__(self, ansatz: AnsatzSpec, povm: PovmSpec):
        self.ansatz = ansatz
        self.n = ansatz.n_qubits
        self.dim = 2**self.n
        self.projector = np.asarray(povm.projector, dtype=complex)
        if self.projector.shape != (self.dim, self.dim):
            raise ValueError("POVM dimension does not match the ansatz register")
        chain = np.eye(self.dim, dtype=complex)
        for q in range(self.n - 1):
            gate = qcore.expand_gate(qcore.GateOp("cx", (q, q + 1)), self.n)
            chain = gate @ chain
        self._chain = chain
        self._shift_plus = [
            qcore._single(qcore.ry(math.pi / 2.0), q, self.n) for q in range(self.n)
        ]
        self._shift_minus = [
            qcore._single(qcore.ry(-math.pi / 2.0), q, self.n) for q in range(self.n)
        ]

    def _layer_unitaries(self, theta: np.ndarray) -> List[np.ndarray]:
        layers = []
        for l in range(self.ansatz.n_layers):
            rot = np.array([[1.0 + 0.0j]])
            for q in range(self.n):
                rot = np.kron(rot, qcore.ry(theta[l * self.n + q]))
            layers.append(self._chain @ rot)
        return layers

    def full_unitary(self, theta: np.ndarray) -> np.ndarray:
        u = np.eye(self.dim, dtype=complex)
        for v in self._layer_unitaries(theta):
            u = v @ u
        return u

    def center(self, theta: np.ndarray) -> np.ndarray:
        u = self.full_unitary(theta)
        return u.conj().T @ self.projector @ u

    def all_shifts(self, theta: np.ndarray) -> np.ndarray:
        """(2d+1, D, D): row 0 unshifted, rows 1..d the +pi/2 shifts in
        parameter order, rows d+1..2d the matching -pi/2 shifts."""
        d = self.ansatz.n_params
        layers = self._layer_unitaries(theta)
        count = self.ansatz.n_layers
        prefixes = [np.eye(self.dim, dtype=complex)]
        for v in layers:
            prefixes.append(v @ prefixes[-1])
        # suffixes[l] = V_{L-1} ... V_l, so the product excluding layer l is
        # suffixes[l + 1]
        suffixes = [np.eye(self.dim, dtype=complex)] * (count + 1)
        for l in range(count - 1, -1, -1):
            suffixes[l] = suffixes[l + 1] @ layers[l]
        out = np.empty((2 * d + 1, self.dim, self.dim), dtype=complex)
        full = prefixes[count]
        out[0] = full.conj().T @ self.projector @ full
        for l in range(count):
            conj_proj = suffixes[l + 1].conj().T @ self.projector @ suffixes[l + 1]
            for q in range(self.n):
                k = l * self.n + q
                for offset, shift in ((1, self._shift_plus[q]), (1 + d, self._shift_minus[q])):
                    w = layers[l] @ shift @ prefixes[l]
                    out[offset + k] = w.conj().T @ conj_proj @ w
        return out


def predictions(observables: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Tr(O_k rho_i) for every observable row and state; clipped to [0, 1]."""
    if observables.ndim == 2:
        observables = observables[None]
        squeeze = True
    else:
        squeeze = False
    y = np.einsum("kab,nba->kn", observables, states).real
    y = np.clip(y, 0.0, 1.0)
    return y[0] if squeeze else y


@dataclass(frozen=True)
class TrainConfig:
    iterations: int
    shots: Optional[int] = 20
    lam: float = 0.0
    eta: Optional[float] = None
    batches: Optional[int] = None
    batch_size: int = 1
    noise: NoiseSpec = NO_NOISE
    seed: int = 0
    clip_to_pl_box: bool = False
    half_shift_convention: bool = False

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1 (or None for exact expectations)")
        if self.lam < 0.0:
            raise ValueError("lam must be >= 0")
        if self.eta is not None and self.eta <= 0.0:
            raise ValueError("eta must be > 0")
        if self.batches is not None and self.batches < 1:
            raise ValueError("batches must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")

    @property
    def effective_eta(self) -> float:
        return self.eta if self.eta is not None else 1.0 / smoothness(self.lam)


@dataclass(frozen=True)
class TrainRecord:
    iteration: int
    loss: float
    noisy_loss: float
    train_acc: float
    test_acc: float
    theta: np.ndarray = field(repr=False)
    shots: int

    def __post_init__(self):
        if self.loss < 0.0:
            raise ValueError("loss cannot be negative")

    def csv_row(self) -> str:
        return csv_line(
            [
                self.iteration,
                self.loss,
                self.noisy_loss,
                self.train_acc,
                self.test_acc,
                self.shots,
            ]
        )


def records_to_csv(records: Sequence[TrainRecord]) -> str:
    lines = [CURVE_HEADER]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


def _accuracy(y_hat: np.ndarray, labels: np.ndarray) -> float:
    predicted = (y_hat > 0.5).astype(float)
    return float((predicted == labels).mean())


def _merged_rate_for(noise: NoiseSpec, total_layers: int) -> float:
    if noise.kind == "none":
        return 0.0
    if noise.kind == "depolarize":
        return merged_rate(noise.p, total_layers)
    raise ValueError(
        "the training loop supports kinds 'none' and 'depolarize'; "
        "evaluate general channels through objective()"
    )


def train(
    config: TrainConfig,
    dataset: EncodedDataset,
    ansatz: AnsatzSpec,
    test_dataset: Optional[EncodedDataset] = None,
    povm: Optional[PovmSpec] = None,
) -> List[TrainRecord]:
    """Gradient descent on the estimated gradients; one record per iteration
    (plus the initial one). Bit-for-bit deterministic given config.seed."""
    if dataset.n_samples == 0:
        raise ValueError("empty dataset")
    if dataset.n_qubits != ansatz.n_qubits:
        raise ValueError("dataset and ansatz disagree on qubit count")
    povm = povm if povm is not None else readout_povm(ansatz.n_qubits)
    n = dataset.n_samples
    batches = config.batches if config.batches is not None else n
    if batches * config.batch_size > n:
        raise ValueError(
            f"batches*batch_size = {batches * config.batch_size} exceeds n = {n}"
        )
    d = ansatz.n_params
    total_layers = dataset.encoder_layers + ansatz.n_layers
    p_tilde = _merged_rate_for(config.noise, total_layers)
    r = povm.ratio
    eta = config.effective_eta
    engine = ShiftObservables(ansatz, povm)

    init_rng = derive_rng(config.seed, "train", "init")
    batch_rng = derive_rng(config.seed, "train", "batch")
    shot_rng = derive_rng(config.seed, "train", "shots")
    theta = init_rng.uniform(PL_BOX[0], PL_BOX[1], size=d)

    full_batch = batches == n and config.batch_size == 1
    shots_per_iter = (
        0 if config.shots is None else batches * config.batch_size * (2 * d + 1) * config.shots
    )

    def metrics(theta_now: np.ndarray, iteration: int, total_shots: int) -> TrainRecord:
        center = engine.center(theta_now)
        y_hat = predictions(center, dataset.states)
        reg = 0.5 * config.lam * float(theta_now @ theta_now)
        loss = float(((y_hat - dataset.labels) ** 2).mean()) + reg
        q = (1.0 - p_tilde) * y_hat + p_tilde * r
        noisy_loss = float(((q - dataset.labels) ** 2).mean()) + reg
        test_acc = float("nan")
        if test_dataset is not None:
            test_acc = _accuracy(predictions(center, test_dataset.states), test_dataset.labels)
        record = TrainRecord(
            iteration=iteration,
            loss=loss,
            noisy_loss=noisy_loss,
            train_acc=_accuracy(y_hat, dataset.labels),
            test_acc=test_acc,
            theta=theta_now.copy(),
            shots=total_shots,
        )
        if not math.isfinite(loss) or loss > 1e6:
            raise TrainingDiverged(
                f"loss {loss:.6g} at iteration {iteration} exceeds the 1e6 guard; "
                f"eta={eta:.6g} is likely too large"
            )
        return record

    records = [metrics(theta, 0, 0)]
    total_shots = 0
    for t in range(1, config.iterations + 1):
        if full_batch:
            batch_states, batch_labels = dataset.states, dataset.labels
        else:
            idx = batch_rng.choice(n, size=batches * config.batch_size, replace=False)
            idx = idx.reshape(batches, config.batch_size)
            batch_states = dataset.states[idx].mean(axis=1)
            batch_labels = dataset.labels[idx].mean(axis=1)
        y_hat = predictions(engine.all_shifts(theta), batch_states)
        q = np.clip((1.0 - p_tilde) * y_hat + p_tilde * r, 0.0, 1.0)
        if config.shots is None:
            y_bar = q
        else:
            y_bar = shot_rng.binomial(config.shots, q) / config.shots
        product = (y_bar[0] - batch_labels)[None, :] * (y_bar[1 : d + 1] - y_bar[d + 1 :])
        if config.half_shift_convention:
            product *= 0.5
        gradient = product.mean(axis=1) + config.lam * theta
        theta = theta - eta * gradient
        if config.clip_to_pl_box:
            theta = np.clip(theta, PL_BOX[0], PL_BOX[1])
        total_shots += shots_per_iter
        records.append(metrics(theta, t, total_shots))
    return records


def objective(
    theta: np.ndarray,
    dataset: EncodedDataset,
    ansatz: AnsatzSpec,
    lam: float = 0.0,
    noise: NoiseSpec = NO_NOISE,
    povm: Optional[PovmSpec] = None,
) -> float:
    """Regularized quadratic loss at theta, under any supported channel."""
    if dataset.n_samples == 0:
        raise ValueError("empty dataset")
    theta = np.asarray(theta, dtype=float)
    povm = povm if povm is not None else readout_povm(ansatz.n_qubits)
    engine = ShiftObservables(ansatz, povm)
    total_layers = dataset.encoder_layers + ansatz.n_layers
    reg = 0.5 * lam * float(theta @ theta)
    if noise.kind == "general":
        u = engine.full_unitary(theta)
        projector = np.asarray(povm.projector, dtype=complex)
        y = np.empty(dataset.n_samples)
        for i in range(dataset.n_samples):
            out = u @ dataset.states[i] @ u.conj().T
            out = merged_general_state(out, noise, total_layers)
            y[i] = qcore.expectation(out, projector)
        y = np.clip(y, 0.0, 1.0)
    else:
        y_hat = predictions(engine.center(theta), dataset.states)
        p_tilde = _merged_rate_for(noise, total_layers)
        y = (1.0 - p_tilde) * y_hat + p_tilde * povm.ratio
    return float(((y - dataset.labels) ** 2).mean()) + reg


def analytic_loss_gradient(
    theta: np.ndarray,
    dataset: EncodedDataset,
    ansatz: AnsatzSpec,
    lam: float = 0.0,
    povm: Optional[PovmSpec] = None,
) -> np.ndarray:
    """Exact noiseless gradient of the regularized loss (parameter shift)."""
    theta = np.asarray(theta, dtype=float)
    povm = povm if povm is not None else readout_povm(ansatz.n_qubits)
    engine = ShiftObservables(ansatz, povm)
    d = ansatz.n_params
    y = predictions(engine.all_shifts(theta), dataset.states)
    product = (y[0] - dataset.labels)[None, :] * (y[1 : d + 1] - y[d + 1 :])
    return product.mean(axis=1) + lam * theta


def utility_r1(
    thetas: Sequence[np.ndarray],
    dataset: EncodedDataset,
    ansatz: AnsatzSpec,
    lam: float = 0.0,
    povm: Optional[PovmSpec] = None,
) -> float:
    """Mean squared gradient norm at the trained parameters, over seeds."""
    if len(thetas) == 0:
        raise ValueError("need at least one trained parameter vector")
    norms = [
        float(np.sum(analytic_loss_gradient(t, dataset, ansatz, lam, povm) ** 2))
        for t in thetas
    ]
    return float(np.mean(norms))


def utility_r2(
    thetas: Sequence[np.ndarray],
    theta_star: np.ndarray,
    dataset: EncodedDataset,
    ansatz: AnsatzSpec,
    lam: float = 0.0,
    povm: Optional[PovmSpec] = None,
) -> float:
    """Mean excess loss over seeds relative to a reference optimum."""
    if len(thetas) == 0:
        raise ValueError("need at least one trained parameter vector")
    reference = objective(theta_star, dataset, ansatz, lam, povm=povm)
    mean_loss = float(
        np.mean([objective(t, dataset, ansatz, lam, povm=povm) for t in thetas])
    )
    gap = mean_loss - reference
    if gap < -1e-9:
        warnings.warn(
            f"reference loss {reference:.6g} exceeds the mean trained loss "
            f"{mean_loss:.6g}; the reference parameters are not optimal",
            stacklevel=2,
        )
    return gap
