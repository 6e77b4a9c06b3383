"""Closed-form calculators: loss-landscape constants, utility-bound right-hand
sides, the privacy-loss chain, and statistical-query shot counts.

Everything here is arithmetic on scalars; the only stochastic routine is
`simulate_qsq_query`, which empirically checks a shot-count prescription.
Calculators raise ValueError on domain violations and return either
float('inf') (privacy chain saturation) or an :class:`Infeasible` record
(statistical-query tolerances) instead of silently producing garbage, so CLI
sweeps stay parseable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

from . import measure
from .seeding import derive_rng

# beyond this, exp() in the composition terms overflows float64
_EXP_SATURATION = 700.0


@dataclass(frozen=True)
class Infeasible:
    reason: str


def smoothness(lam: float) -> float:
    """S = 3/2 + lam."""
    if lam < 0.0:
        raise ValueError("lam must be >= 0")
    return 1.5 + lam


def lipschitz(lam: float, d: int) -> float:
    """G = d (1 + 3 pi lam)."""
    if lam < 0.0 or d < 1:
        raise ValueError("need lam >= 0 and d >= 1")
    return d * (1.0 + 3.0 * math.pi * lam)


def pl_constant(lam: float, d: int) -> float:
    """mu = (lam pi - 1)^2 / (1 + 9 pi^2 lam d); requires lam > 1/pi."""
    if d < 1:
        raise ValueError("need d >= 1")
    if lam <= 1.0 / math.pi:
        raise ValueError(f"pl constant defined only for lam > 1/pi, got {lam}")
    return (lam * math.pi - 1.0) ** 2 / (1.0 + lam * d * (3.0 * math.pi) ** 2)


def constants(lam: float, d: int) -> Tuple[float, float, float]:
    """(S, G, mu) for the regularized loss; raises when mu is undefined."""
    return smoothness(lam), lipschitz(lam, d), pl_constant(lam, d)


@dataclass(frozen=True)
class BoundInputs:
    d: int
    iterations: int
    shots: int
    batches: int
    lam: float
    p_tilde: float

    def __post_init__(self):
        if self.d < 1 or self.shots < 1 or self.batches < 1:
            raise ValueError("d, shots, batches must be >= 1")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.lam < 0.0:
            raise ValueError("lam must be >= 0")
        if not 0.0 <= self.p_tilde < 1.0:
            raise ValueError(f"p_tilde={self.p_tilde} must lie in [0, 1)")

    @property
    def s(self) -> float:
        return smoothness(self.lam)

    @property
    def g(self) -> float:
        return lipschitz(self.lam, self.d)

    @property
    def mu(self) -> float:
        return pl_constant(self.lam, self.d)


def r1_bound(inputs: BoundInputs, channel: str = "depolarize") -> float:
    """Upper bound on the expected squared gradient norm after training.

    channel "depolarize" is the standard form; "general" swaps in the
    fixed-state-channel constants (and expects p_tilde merged from p1).
    """
    if inputs.iterations < 1:
        raise ValueError("r1_bound needs iterations >= 1")
    d, t, k, b = inputs.d, inputs.iterations, inputs.shots, inputs.batches
    lam, p = inputs.lam, inputs.p_tilde
    s, g = inputs.s, inputs.g
    keep2 = (1.0 - p) ** 2
    decay = 2.0 * p - p * p
    if channel == "depolarize":
        return (
            2.0 * s * (1.0 + 90.0 * lam * d) / (t * keep2)
            + decay * (2.0 * g + d) * (1.0 + 10.0 * lam) ** 2 / keep2
            + (6.0 * d * k + 8.0 * d) / (keep2 * b * k * k)
        )
    if channel == "general":
        return (
            2.0 * s * (1.0 + 9.0 * lam * d) / (t * keep2)
            + (2.0 * g + d) * (5.0 + 3.0 * decay * lam * math.pi) / keep2
            + (12.0 * d * k + 18.0 * d) / (keep2 * b * k * k)
        )
    raise ValueError(f"unknown channel {channel!r}")


def r2_bound(inputs: BoundInputs, channel: str = "depolarize") -> float:
    """Upper bound on the expected excess empirical risk after training."""
    d, t, k, b = inputs.d, inputs.iterations, inputs.shots, inputs.batches
    lam, p = inputs.lam, inputs.p_tilde
    s, g, mu = inputs.s, inputs.g, inputs.mu
    keep2 = (1.0 - p) ** 2
    decay = 2.0 * p - p * p
    if channel == "depolarize":
        return (1.0 + 90.0 * lam * d) * math.exp(-mu * keep2 * t / s) + t * (
            decay * (g + 2.0 * d) * (1.0 + 10.0 * lam) ** 2 * b * k * k
            + 6.0 * d * k
            + 8.0 * d
        ) / (2.0 * s * b * k * k)
    if channel == "general":
        return (
            15.0 * lam * d * math.exp(-mu * keep2 * t / s)
            + t * (2.0 * g + d) * (5.0 + 3.0 * decay * lam * math.pi) / (2.0 * s)
            + t * (6.0 * d * k + 9.0 * d) / (s * b * k * k)
        )
    raise ValueError(f"unknown channel {channel!r}")


@dataclass(frozen=True)
class PrivacyInputs:
    p_tilde: float
    ratio: float
    shots: int
    iterations: int
    d: int
    delta_grad: float
    delta_total: float

    def __post_init__(self):
        if not 0.0 < self.p_tilde < 1.0:
            raise ValueError("p_tilde must lie strictly inside (0, 1)")
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("ratio must lie strictly inside (0, 1)")
        if self.shots < 1 or self.d < 1:
            raise ValueError("shots and d must be >= 1")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        for name in ("delta_grad", "delta_total"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1)")


def per_query_epsilon(p_tilde: float, ratio: float, shots: int) -> float:
    """Privacy loss of a single K-shot sample-mean release.

    ln[ ((1-p) + p r) / (p (1-p) (1-r))^K ], evaluated in log space so large K
    cannot underflow the denominator.
    """
    if not 0.0 < p_tilde < 1.0:
        raise ValueError("p_tilde must lie strictly inside (0, 1)")
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must lie strictly inside (0, 1)")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    numerator = (1.0 - p_tilde) + p_tilde * ratio
    base = p_tilde * (1.0 - p_tilde) * (1.0 - ratio)
    return math.log(numerator) - shots * math.log(base)


def compose(
    k: int,
    eps: float,
    delta: float,
    delta_slack: float,
    variant: str = "composed",
) -> Tuple[float, float]:
    """Adaptive k-fold composition of an (eps, delta)-private mechanism.

    Returns (eps_out, k*delta + delta_slack). variant "composed" is the
    standard advanced-composition form sqrt(2 k ln(1/delta_slack)) * eps;
    variant "literal" moves eps inside the square root, matching the chain
    instantiations used downstream. Saturates to inf instead of overflowing.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if not 0.0 < delta_slack < 1.0:
        raise ValueError("delta_slack must lie in (0, 1)")
    if eps < 0.0 or delta < 0.0:
        raise ValueError("eps and delta must be >= 0")
    delta_out = k * delta + delta_slack
    if eps > _EXP_SATURATION:
        return math.inf, delta_out
    log_term = 2.0 * k * math.log(1.0 / delta_slack)
    if variant == "composed":
        eps_out = math.sqrt(log_term) * eps + k * eps * (math.exp(eps) - 1.0)
    elif variant == "literal":
        eps_out = math.sqrt(log_term * eps) + k * eps * (math.exp(eps) - 1.0)
    else:
        raise ValueError(f"unknown composition variant {variant!r}")
    return eps_out, delta_out


def gradient_epsilon(eps_query: float, delta_grad: float, variant: str = "literal") -> float:
    """Privacy loss of one gradient component (three sample-mean queries)."""
    return compose(3, eps_query, 0.0, delta_grad, variant)[0]


def total_epsilon(
    eps_grad: float, d: int, iterations: int, delta_total: float, variant: str = "literal"
) -> float:
    """Privacy loss of the full training run: d components per iteration
    (basic composition, eps -> d*eps) then advanced composition over T."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if eps_grad < 0.0:
        raise ValueError("eps_grad must be >= 0")
    per_iteration = d * eps_grad
    if not math.isfinite(per_iteration):
        return math.inf
    return compose(iterations, per_iteration, 0.0, delta_total, variant)[0]


def epsilon_chain(inputs: PrivacyInputs, variant: str = "literal") -> Tuple[float, float, float]:
    """(eps_query, eps_grad, eps_total) for one parameter setting."""
    eps_query = per_query_epsilon(inputs.p_tilde, inputs.ratio, inputs.shots)
    eps_grad = gradient_epsilon(eps_query, inputs.delta_grad, variant)
    eps_total = total_epsilon(eps_grad, inputs.d, inputs.iterations, inputs.delta_total, variant)
    return eps_query, eps_grad, eps_total


@dataclass(frozen=True)
class QsqInputs:
    tau: float
    fail_prob: float
    p_tilde: float = 0.0
    nu: float = 0.0
    trm_ratio: float = 0.0

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ValueError("tolerance tau must be > 0")
        if not 0.0 < self.fail_prob < 1.0:
            raise ValueError("failure probability must lie in (0, 1)")
        if not 0.0 <= self.p_tilde <= 1.0:
            raise ValueError("p_tilde outside [0, 1]")
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError("nu outside [0, 1]")
        if self.trm_ratio < 0.0:
            raise ValueError("trm_ratio must be >= 0")

    @property
    def effective_tolerance(self) -> float:
        return self.tau - self.p_tilde * self.nu - self.trm_ratio


def qsq_shot_count(inputs: QsqInputs) -> Union[int, Infeasible]:
    """Measurements needed so the sample mean is a tau-accurate statistical
    query with failure probability fail_prob (Hoeffding).

    K = ceil( ln(2/b) / (2 (tau - p_tilde nu - trm_ratio)^2) ).
    """
    eff = inputs.effective_tolerance
    if eff <= 0.0:
        return Infeasible(
            f"effective tolerance {eff:.6g} <= 0: noise bias "
            f"p_tilde*nu + trm_ratio = {inputs.p_tilde * inputs.nu + inputs.trm_ratio:.6g} "
            f"exceeds tau = {inputs.tau:.6g}"
        )
    return math.ceil(math.log(2.0 / inputs.fail_prob) / (2.0 * eff * eff))


def simulate_qsq_query(inputs: QsqInputs, shots: int, trials: int, seed: int) -> float:
    """Empirical coverage of |sample mean - nu| <= tau over `trials` queries.

    The sampled mean is the physical one, (1-p_tilde) nu + p_tilde trm_ratio;
    deterministic given seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = derive_rng(seed, "qsq")
    hits = 0
    for _ in range(trials):
        y_bar = measure.sample_shots(inputs.nu, inputs.p_tilde, inputs.trm_ratio, shots, rng)
        if abs(y_bar - inputs.nu) <= inputs.tau:
            hits += 1
    return hits / trials


def qsq_coverage_floor(fail_prob: float, trials: int) -> float:
    """Smallest coverage a correct K should reach: 1 - b - 3 sqrt(b(1-b)/M)."""
    return 1.0 - fail_prob - 3.0 * math.sqrt(fail_prob * (1.0 - fail_prob) / trials)
