"""Two-outcome measurement handling and finite-shot statistics.

The closed forms used throughout: measuring a merged-noise state gives a
Bernoulli outcome with success probability

    q = (1 - p_tilde) * y_hat + p_tilde * r,    r = Tr(Pi) / D,

and the K-shot sample mean has mean q and variance q(1-q)/K. `sample_shots`
offers two independently implemented sampling routes (the two-stage mixture
draw and the direct Bernoulli-q draw); tests verify they agree in
distribution, so do not fold one into the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qcore


@dataclass(frozen=True)
class PovmSpec:
    """Projector-like POVM element Pi with cached ratio r = Tr(Pi)/D."""

    projector: np.ndarray
    ratio: float

    def __post_init__(self):
        pi = np.asarray(self.projector)
        if not np.allclose(pi, pi.conj().T, atol=qcore.HERMITIAN_ATOL):
            raise ValueError("POVM element must be Hermitian")
        eigs = np.linalg.eigvalsh((pi + pi.conj().T) / 2.0)
        if eigs.min() < -1e-10 or eigs.max() > 1.0 + 1e-10:
            raise ValueError("POVM element eigenvalues must lie in [0, 1]")
        recomputed = float(np.trace(pi).real) / pi.shape[0]
        if abs(recomputed - self.ratio) > 1e-12:
            raise ValueError(f"stored ratio {self.ratio} != Tr(Pi)/D = {recomputed}")


def povm_from_projector(projector: np.ndarray) -> PovmSpec:
    pi = np.asarray(projector, dtype=complex)
    return PovmSpec(pi, float(np.trace(pi).real) / pi.shape[0])


def readout_povm(n_qubits: int, qubit: int = 0) -> PovmSpec:
    """Pi = |1><1| on one qubit, identity elsewhere. Ratio is always 1/2."""
    pi = qcore._single(qcore.P1, qubit, n_qubits)
    return povm_from_projector(pi)


def noisy_expectation(y_hat: float, p_tilde: float, r: float) -> float:
    """Mean outcome under merged depolarization: (1-p_tilde) y_hat + p_tilde r."""
    return (1.0 - p_tilde) * y_hat + p_tilde * r


def sample_mean_variance(y_hat: float, p_tilde: float, r: float, shots: int) -> float:
    """Variance of the K-shot sample mean: q(1-q)/K."""
    if shots < 1:
        raise ValueError("need at least one shot")
    q = noisy_expectation(y_hat, p_tilde, r)
    return q * (1.0 - q) / shots


def sample_shots(
    y_hat: float,
    p_tilde: float,
    r: float,
    shots: int,
    rng: np.random.Generator,
    route: str = "direct",
) -> float:
    """K-shot sample mean.

    route "direct": one Binomial(K, q) draw with q = (1-p_tilde) y_hat + p_tilde r.
    route "mixture": per shot, with probability p_tilde the outcome is Ber(r)
    (noise event), otherwise Ber(y_hat). The two routes are distribution-equal;
    both are kept on purpose as mutual checks.
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    if route == "direct":
        q = noisy_expectation(y_hat, p_tilde, r)
        return float(rng.binomial(shots, min(max(q, 0.0), 1.0))) / shots
    if route == "mixture":
        noisy = rng.random(shots) < p_tilde
        outcomes = np.where(
            noisy,
            rng.random(shots) < r,
            rng.random(shots) < y_hat,
        )
        return float(outcomes.sum()) / shots
    raise ValueError(f"unknown sampling route {route!r}")


def sample_mean_pmf(q: float, shots: int, y: float) -> float:
    """P(sample mean = y) for the K-shot Bernoulli(q) mean; y must sit on the
    1/K grid."""
    if shots < 1:
        raise ValueError("need at least one shot")
    ky = y * shots
    k_int = round(ky)
    if abs(ky - k_int) > 1e-9 or not 0 <= k_int <= shots:
        raise ValueError(f"value {y} is not on the 1/{shots} outcome grid")
    return math.comb(shots, k_int) * q**k_int * (1.0 - q) ** (shots - k_int)
