"""Exact density-matrix linear algebra for few-qubit systems.

States are always D x D complex density matrices (D = 2**n_qubits, n <= 5),
stored as plain numpy arrays. Qubit 0 is the leftmost (most significant)
tensor factor, so a gate on qubit 0 of a 3-qubit register expands as
U (x) I (x) I.

Gates are described by :class:`GateOp` records and expanded to the full
D x D unitary on demand; at these dimensions dense kron products are cheap
and keep noisy and noiseless evaluation on a single code path.

All functions are pure. Validation helpers (`check_density`, `check_unitary`)
are meant for tests and debug paths; the hot paths trust their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIG_FLOOR = -1e-9
UNITARY_ATOL = 1e-10

# single-qubit primitives
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
P0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
P1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    """Single-qubit Y rotation.

    Uses the half-angle convention: ry(2a) = [[cos a, -sin a], [sin a, cos a]],
    so the parameter-shift rule at +-pi/2 holds exactly for expectation values.
    """
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """One gate: kind, qubit indices, and (for rotations) an angle.

    kinds:
      "h"    -- Hadamard on qubits[0]
      "ry"   -- Y rotation by `angle` on qubits[0]
      "cry"  -- controlled Y rotation, control qubits[0], target qubits[1]
      "cx"   -- controlled X, control qubits[0], target qubits[1]
      "custom" -- explicit unitary `matrix` on qubits (1 or 2 qubits)
    """

    kind: str
    qubits: Tuple[int, ...]
    angle: Optional[float] = None
    matrix: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubit indices in gate: {self.qubits}")
        if self.kind in ("ry", "cry") and self.angle is None:
            raise ValueError(f"{self.kind} gate needs an angle")
        if self.kind == "custom":
            if self.matrix is None:
                raise ValueError("custom gate needs a matrix")
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (2 ** len(self.qubits),) * 2:
                raise ValueError(
                    f"custom matrix shape {m.shape} does not match {len(self.qubits)} qubit(s)"
                )
            if not np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=UNITARY_ATOL):
                raise ValueError("custom gate matrix is not unitary")


def _single(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Expand a 2x2 operator acting on one qubit to the full register."""
    mat = np.array([[1.0 + 0.0j]])
    for q in range(n_qubits):
        mat = np.kron(mat, op if q == qubit else np.eye(2, dtype=complex))
    return mat


def _controlled(u: np.ndarray, control: int, target: int, n_qubits: int) -> np.ndarray:
    """|0><0|_c (x) I + |1><1|_c (x) U_t, any qubit placement."""
    branch0 = np.array([[1.0 + 0.0j]])
    branch1 = np.array([[1.0 + 0.0j]])
    for q in range(n_qubits):
        eye = np.eye(2, dtype=complex)
        branch0 = np.kron(branch0, P0 if q == control else eye)
        branch1 = np.kron(branch1, P1 if q == control else (u if q == target else eye))
    return branch0 + branch1


def expand_gate(gate: GateOp, n_qubits: int) -> np.ndarray:
    """Return the full D x D unitary for `gate` on an n-qubit register."""
    for q in gate.qubits:
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit index {q} out of range for {n_qubits} qubits")
    if gate.kind == "h":
        return _single(HADAMARD, gate.qubits[0], n_qubits)
    if gate.kind == "ry":
        return _single(ry(gate.angle), gate.qubits[0], n_qubits)
    if gate.kind == "cry":
        return _controlled(ry(gate.angle), gate.qubits[0], gate.qubits[1], n_qubits)
    if gate.kind == "cx":
        return _controlled(PAULI_X, gate.qubits[0], gate.qubits[1], n_qubits)
    if gate.kind == "custom":
        m = np.asarray(gate.matrix, dtype=complex)
        if len(gate.qubits) == 1:
            return _single_custom(m, gate.qubits[0], n_qubits)
        if len(gate.qubits) == 2 and gate.qubits == (gate.qubits[0], gate.qubits[0] + 1):
            return _adjacent_pair(m, gate.qubits[0], n_qubits)
        raise ValueError("custom gates support 1 qubit or an adjacent ascending pair")
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def _single_custom(m: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    return _single(m, qubit, n_qubits)


def _adjacent_pair(m: np.ndarray, first: int, n_qubits: int) -> np.ndarray:
    mat = np.array([[1.0 + 0.0j]])
    q = 0
    while q < n_qubits:
        if q == first:
            mat = np.kron(mat, m)
            q += 2
        else:
            mat = np.kron(mat, np.eye(2, dtype=complex))
            q += 1
    return mat


def zero_state(n_qubits: int) -> np.ndarray:
    """Density matrix of |0...0>."""
    dim = 2**n_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def apply_unitary(state: np.ndarray, u: np.ndarray) -> np.ndarray:
    """U rho U^dagger."""
    if u.shape != state.shape:
        raise ValueError(f"dimension mismatch: gate {u.shape} vs state {state.shape}")
    return u @ state @ u.conj().T


def apply_gate(state: np.ndarray, gate: GateOp) -> np.ndarray:
    """Apply one gate to a density matrix, expanding it to the state's size."""
    dim = state.shape[0]
    n_qubits = int(round(np.log2(dim)))
    if 2**n_qubits != dim:
        raise ValueError(f"state dimension {dim} is not a power of two")
    return apply_unitary(state, expand_gate(gate, n_qubits))


def apply_depolarize(state: np.ndarray, p: float) -> np.ndarray:
    """(1-p) rho + p I/D."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarization rate {p} outside [0, 1]")
    dim = state.shape[0]
    return (1.0 - p) * state + p * np.eye(dim, dtype=complex) / dim


def apply_general_channel(
    state: np.ndarray, p1: float, p2: float, p3: float, kappa: np.ndarray
) -> np.ndarray:
    """(1-p1) rho + p2 kappa + p3 I/D, with p2 + p3 = p1 and p3 > 0."""
    if not 0.0 <= p1 <= 1.0 or p2 < 0.0 or p3 <= 0.0:
        raise ValueError(f"invalid channel weights p1={p1}, p2={p2}, p3={p3}")
    if abs((p2 + p3) - p1) > 1e-12:
        raise ValueError(f"weights must satisfy p2 + p3 = p1, got {p2} + {p3} != {p1}")
    if kappa.shape != state.shape:
        raise ValueError(f"kappa dimension {kappa.shape} does not match state {state.shape}")
    dim = state.shape[0]
    return (1.0 - p1) * state + p2 * kappa + p3 * np.eye(dim, dtype=complex) / dim


def expectation(state: np.ndarray, observable: np.ndarray) -> float:
    """Tr(Pi rho) as a real number.

    Raises if the observable is not Hermitian or the imaginary residue of the
    trace exceeds tolerance.
    """
    if observable.shape != state.shape:
        raise ValueError(
            f"observable dimension {observable.shape} does not match state {state.shape}"
        )
    if not np.allclose(observable, observable.conj().T, atol=HERMITIAN_ATOL):
        raise ValueError("observable is not Hermitian")
    value = np.trace(observable @ state)
    if abs(value.imag) > HERMITIAN_ATOL:
        raise ValueError(f"expectation has imaginary residue {value.imag}")
    return float(value.real)


def check_density(state: np.ndarray, context: str = "state") -> None:
    """Assert the density-matrix invariants (Hermitian, trace 1, PSD)."""
    if not np.allclose(state, state.conj().T, atol=HERMITIAN_ATOL):
        raise ValueError(f"{context}: not Hermitian within {HERMITIAN_ATOL}")
    tr = np.trace(state)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValueError(f"{context}: trace {tr} differs from 1")
    eigs = np.linalg.eigvalsh((state + state.conj().T) / 2.0)
    if eigs.min() < EIG_FLOOR:
        raise ValueError(f"{context}: eigenvalue {eigs.min()} below {EIG_FLOOR}")


def check_unitary(u: np.ndarray, context: str = "gate") -> None:
    eye = np.eye(u.shape[0], dtype=complex)
    if not np.allclose(u.conj().T @ u, eye, atol=UNITARY_ATOL):
        raise ValueError(f"{context}: matrix is not unitary within {UNITARY_ATOL}")
