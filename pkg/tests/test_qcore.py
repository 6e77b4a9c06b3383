import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisyvqc import qcore


def test_ry_half_angle_entries():
    m = qcore.ry(np.pi / 2)
    c = np.cos(np.pi / 4)
    expected = np.array([[c, -c], [c, c]])
    assert np.allclose(m, expected)


def test_ry_zero_is_identity():
    assert np.allclose(qcore.ry(0.0), np.eye(2))


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_ry_angles_add(a, b):
    assert np.allclose(qcore.ry(a) @ qcore.ry(b), qcore.ry(a + b), atol=1e-12)


def test_hadamard_is_involution():
    assert np.allclose(qcore.HADAMARD @ qcore.HADAMARD, np.eye(2), atol=1e-12)


def test_qubit_zero_is_most_significant():
    # H on qubit 0 of a 2-qubit register must be H (x) I, not I (x) H
    gate = qcore.GateOp("h", (0,))
    assert np.allclose(qcore.expand_gate(gate, 2), np.kron(qcore.HADAMARD, np.eye(2)))
    gate1 = qcore.GateOp("h", (1,))
    assert np.allclose(qcore.expand_gate(gate1, 2), np.kron(np.eye(2), qcore.HADAMARD))


def test_cx_matrix_big_endian():
    cx = qcore.expand_gate(qcore.GateOp("cx", (0, 1)), 2)
    expected = np.array(
        [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
        ],
        dtype=complex,
    )
    assert np.allclose(cx, expected)


def test_cx_reversed_control():
    cx = qcore.expand_gate(qcore.GateOp("cx", (1, 0)), 2)
    expected = np.array(
        [
            [1, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
            [0, 1, 0, 0],
        ],
        dtype=complex,
    )
    assert np.allclose(cx, expected)


def test_cry_controls_rotation():
    theta = 1.3
    cry = qcore.expand_gate(qcore.GateOp("cry", (0, 1), angle=theta), 2)
    top = cry[:2, :2]
    bottom = cry[2:, 2:]
    assert np.allclose(top, np.eye(2))
    assert np.allclose(bottom, qcore.ry(theta))


def test_expanded_gates_are_unitary():
    rng = np.random.default_rng(0)
    for kind, nq in [("h", 1), ("ry", 1), ("cry", 2), ("cx", 2)]:
        qubits = (0,) if nq == 1 else (0, 2)
        angle = float(rng.uniform(-np.pi, np.pi)) if kind in ("ry", "cry") else None
        u = qcore.expand_gate(qcore.GateOp(kind, qubits, angle=angle), 3)
        qcore.check_unitary(u)


def test_gate_validation():
    with pytest.raises(ValueError):
        qcore.GateOp("ry", (0,))  # missing angle
    with pytest.raises(ValueError):
        qcore.GateOp("cx", (1, 1))
    with pytest.raises(ValueError):
        qcore.expand_gate(qcore.GateOp("h", (5,)), 3)
    with pytest.raises(ValueError):
        qcore.GateOp("custom", (0,), matrix=np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_zero_state():
    rho = qcore.zero_state(2)
    assert rho.shape == (4, 4)
    assert rho[0, 0] == 1.0
    assert np.count_nonzero(rho) == 1
    qcore.check_density(rho)


def test_maximally_mixed():
    rho = qcore.maximally_mixed(8)
    assert np.allclose(rho, np.eye(8) / 8)
    qcore.check_density(rho)


def test_apply_unitary_conjugates():
    rho = qcore.zero_state(1)
    u = qcore.ry(np.pi / 2)
    out = qcore.apply_unitary(rho, u)
    assert np.allclose(out, u @ rho @ u.conj().T)
    qcore.check_density(out)


def test_apply_gate_matches_expand_route():
    rng = np.random.default_rng(4)
    rho = qcore.zero_state(3)
    gate = qcore.GateOp("cry", (0, 2), angle=float(rng.uniform(0, np.pi)))
    direct = qcore.apply_gate(rho, gate)
    u = qcore.expand_gate(gate, 3)
    assert np.allclose(direct, u @ rho @ u.conj().T, atol=1e-14)


def test_depolarize_endpoints():
    rho = qcore.apply_unitary(qcore.zero_state(2), qcore.expand_gate(qcore.GateOp("h", (0,)), 2))
    assert np.allclose(qcore.apply_depolarize(rho, 0.0), rho)
    assert np.allclose(qcore.apply_depolarize(rho, 1.0), np.eye(4) / 4)


@settings(max_examples=40)
@given(st.floats(0, 1))
def test_depolarize_preserves_trace(p):
    rho = qcore.zero_state(2)
    out = qcore.apply_depolarize(rho, p)
    assert abs(np.trace(out).real - 1.0) < 1e-12


def test_depolarize_rejects_bad_rate():
    with pytest.raises(ValueError):
        qcore.apply_depolarize(qcore.zero_state(1), 1.5)


def test_general_channel_combines_components():
    rho = qcore.zero_state(2)
    kappa = np.zeros((4, 4), dtype=complex)
    kappa[3, 3] = 1.0
    out = qcore.apply_general_channel(rho, 0.2, 0.15, 0.05, kappa)
    expected = 0.8 * rho + 0.15 * kappa + 0.05 * np.eye(4) / 4
    assert np.allclose(out, expected)
    qcore.check_density(out)


def test_general_channel_rejects_bad_weights():
    kappa = qcore.zero_state(1)
    with pytest.raises(ValueError):
        qcore.apply_general_channel(qcore.zero_state(1), 0.2, 0.1, 0.05, kappa)


def test_expectation_is_real_trace():
    rho = qcore.zero_state(1)
    proj = qcore.P1
    assert qcore.expectation(rho, proj) == pytest.approx(0.0, abs=1e-15)
    u = qcore.ry(np.pi)
    flipped = qcore.apply_unitary(rho, u)
    assert qcore.expectation(flipped, proj) == pytest.approx(1.0, abs=1e-12)


def test_check_density_rejections():
    with pytest.raises(ValueError):
        qcore.check_density(np.array([[0.5, 0.1], [0.2, 0.5]], dtype=complex))
    with pytest.raises(ValueError):
        qcore.check_density(np.diag([2.0, -1.0]).astype(complex))
    with pytest.raises(ValueError):
        qcore.check_density(np.diag([0.25, 0.25]).astype(complex))


def test_check_unitary_rejects():
    with pytest.raises(ValueError):
        qcore.check_unitary(np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex))
