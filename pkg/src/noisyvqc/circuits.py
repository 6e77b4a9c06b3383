"""Feature-encoding circuit, layered trainable ansatz, and circuit evaluation.

Layout (pinned for reproducibility; theory checks are layout-independent):

encoder block, repeated n_blocks times, one noise layer per block:
    H on every qubit
    RY(x_j) on qubit j
    CRY(phi) along the adjacent chain q0->q1, q1->q2, ...
    with phi = prod_j (pi - x_j)

ansatz layer l (of L), one noise layer per layer:
    RY(theta[l, j]) on qubit j
    CX along the adjacent chain

Parameter count d = n_qubits * L, flattened layer-major: theta[l * n + j].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import qcore
from .noise import NoiseSpec, NO_NOISE


@dataclass(frozen=True)
class CircuitSpec:
    """Gate lists grouped into layers; each layer is one noise-insertion point."""

    n_qubits: int
    layers: Tuple[Tuple[qcore.GateOp, ...], ...]

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def gates(self):
        for layer in self.layers:
            yield from layer


@dataclass(frozen=True)
class EncoderSpec:
    n_qubits: int = 3
    n_blocks: int = 3

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        if self.n_blocks < 1:
            raise ValueError("need at least one encoder block")

    @property
    def feature_dim(self) -> int:
        return self.n_qubits


@dataclass(frozen=True)
class AnsatzSpec:
    n_qubits: int = 3
    n_layers: int = 5

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        if self.n_layers < 0:
            raise ValueError("layer count must be >= 0")

    @property
    def n_params(self) -> int:
        return self.n_qubits * self.n_layers


def build_encoder(spec: EncoderSpec, x: np.ndarray) -> CircuitSpec:
    """Encoding circuit for one feature vector (features scaled into [0, pi])."""
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.feature_dim,):
        raise ValueError(f"expected {spec.feature_dim} features, got shape {x.shape}")
    if x.min() < -1e-9 or x.max() > math.pi + 1e-9:
        raise ValueError(f"features outside [0, pi]: min={x.min()}, max={x.max()}")
    phi = float(np.prod(math.pi - x))
    block = []
    for q in range(spec.n_qubits):
        block.append(qcore.GateOp("h", (q,)))
    for q in range(spec.n_qubits):
        block.append(qcore.GateOp("ry", (q,), angle=float(x[q])))
    for q in range(spec.n_qubits - 1):
        block.append(qcore.GateOp("cry", (q, q + 1), angle=phi))
    layer = tuple(block)
    return CircuitSpec(spec.n_qubits, tuple(layer for _ in range(spec.n_blocks)))


def build_ansatz(spec: AnsatzSpec, theta: np.ndarray) -> CircuitSpec:
    """Trainable circuit for one parameter vector (length n_qubits * n_layers)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (spec.n_params,):
        raise ValueError(f"expected {spec.n_params} parameters, got shape {theta.shape}")
    layers = []
    for l in range(spec.n_layers):
        layer = [
            qcore.GateOp("ry", (q,), angle=float(theta[l * spec.n_qubits + q]))
            for q in range(spec.n_qubits)
        ]
        for q in range(spec.n_qubits - 1):
            layer.append(qcore.GateOp("cx", (q, q + 1)))
        layers.append(tuple(layer))
    return CircuitSpec(spec.n_qubits, tuple(layers))


def empty_circuit(n_qubits: int) -> CircuitSpec:
    return CircuitSpec(n_qubits, ())


def evaluate(encoder: CircuitSpec, ansatz: CircuitSpec, noise: NoiseSpec = NO_NOISE) -> np.ndarray:
    """Run both circuits on |0...0>, applying the noise channel after each layer."""
    if encoder.n_qubits != ansatz.n_qubits:
        raise ValueError(
            f"qubit count mismatch: encoder {encoder.n_qubits}, ansatz {ansatz.n_qubits}"
        )
    state = qcore.zero_state(encoder.n_qubits)
    for circuit in (encoder, ansatz):
        for layer in circuit.layers:
            for gate in layer:
                state = qcore.apply_gate(state, gate)
            state = noise.apply(state)
    return state


def circuit_unitary(circuit: CircuitSpec) -> np.ndarray:
    """Product of all gate unitaries (later layers act from the left)."""
    dim = 2**circuit.n_qubits
    u = np.eye(dim, dtype=complex)
    for gate in circuit.gates():
        u = qcore.expand_gate(gate, circuit.n_qubits) @ u
    return u


def shift_parameter(theta: np.ndarray, j: int, sign: int) -> np.ndarray:
    """theta +- (pi/2) e_j; other entries are copied bit-for-bit."""
    theta = np.asarray(theta, dtype=float)
    if not 0 <= j < theta.shape[0]:
        raise ValueError(f"parameter index {j} out of range for d={theta.shape[0]}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    shifted = theta.copy()
    shifted[j] += sign * (math.pi / 2.0)
    return shifted
