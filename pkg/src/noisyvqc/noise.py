"""Noise-model bookkeeping: per-layer channels and their merged equivalents."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import qcore


@dataclass(frozen=True)
class NoiseSpec:
    """Per-layer channel description.

    kind: "none", "depolarize" (rate p) or "general" (p1, p2, p3, kappa).
    The channel is applied once per circuit layer during evaluation; the layer
    count L_Q is taken from the circuits being evaluated.
    """

    kind: str = "none"
    p: float = 0.0
    p1: float = 0.0
    p2: float = 0.0
    p3: float = 0.0
    kappa: Optional[np.ndarray] = None
    layers: Optional[int] = None

    def __post_init__(self):
        if self.layers is not None and self.layers < 0:
            raise ValueError("layer count must be >= 0")
        if self.kind == "none":
            return
        if self.kind == "depolarize":
            if not 0.0 <= self.p <= 1.0:
                raise ValueError(f"depolarization rate {self.p} outside [0, 1]")
            return
        if self.kind == "general":
            if not 0.0 <= self.p1 <= 1.0 or self.p2 < 0.0 or self.p3 <= 0.0:
                raise ValueError("general channel needs p1 in [0,1], p2 >= 0, p3 > 0")
            if abs((self.p2 + self.p3) - self.p1) > 1e-12:
                raise ValueError("general channel weights must satisfy p2 + p3 = p1")
            if self.kappa is None:
                raise ValueError("general channel needs a kappa state")
            return
        raise ValueError(f"unknown noise kind {self.kind!r}")

    def apply(self, state: np.ndarray) -> np.ndarray:
        if self.kind == "none":
            return state
        if self.kind == "depolarize":
            return qcore.apply_depolarize(state, self.p)
        return qcore.apply_general_channel(state, self.p1, self.p2, self.p3, self.kappa)


NO_NOISE = NoiseSpec()


def merged_rate(p: float, layers: int) -> float:
    """Effective rate of `layers` interleaved depolarizing channels.

    Applying rate-p depolarization after each of L unitary layers equals one
    rate-(1 - (1-p)**L) depolarization after the composed unitary, because the
    maximally mixed state is unitarily invariant.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"rate {p} outside [0, 1]")
    if layers < 0:
        raise ValueError("layer count must be >= 0")
    return 1.0 - (1.0 - p) ** layers


def general_weights(p1: float, p2: float, p3: float, layers: int) -> Tuple[float, float, float]:
    """Component weights (input state, kappa, identity) after `layers`
    applications of the general channel with a fixed kappa.

    Derived by composing the channel: the input-state weight is (1-p1)**layers
    exactly, and the kappa / identity masses accumulate geometrically as
    p2 * sum_k (1-p1)**k and p3 * sum_k (1-p1)**k. The three weights sum to 1.
    """
    w_state = (1.0 - p1) ** layers
    acc = sum((1.0 - p1) ** k for k in range(layers))
    return w_state, p2 * acc, p3 * acc


def merged_general_state(
    noiseless_state: np.ndarray, noise: NoiseSpec, layers: Optional[int] = None
) -> np.ndarray:
    """State after L_Q applications of the general channel to
    `noiseless_state`, computed by actually composing the channel.

    The layer count comes from `noise.layers` unless overridden here.
    """
    if noise.kind != "general":
        raise ValueError("merged_general_state expects a general-channel NoiseSpec")
    if layers is None:
        layers = noise.layers
    if layers is None:
        raise ValueError("layer count missing: set NoiseSpec.layers or pass layers=")
    state = noiseless_state
    for _ in range(layers):
        state = noise.apply(state)
    return state
