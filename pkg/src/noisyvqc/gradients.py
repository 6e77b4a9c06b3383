"""Per-component gradients of the regularized quadratic loss, and the moment
decomposition of their finite-shot estimators.

All quantities here are scalars for a single sample and a single parameter
index j. The shifted expectations must come from the same circuit evaluated at
theta +- (pi/2) e_j. The default gradient convention,

    g_j = (Y_hat - Y)(Y_hat_plus - Y_hat_minus) + lam * theta_j,

is exactly d/dtheta_j [ (y_hat - y)^2 + (lam/2) theta_j^2 ] because the
parameter-shift identity contributes the matching factor of 2. Passing
half_shift_convention=True halves the product term for callers who define the
shift derivative with an explicit 1/2.

The estimator replaces each expectation with an independent K-shot sample mean
of the noisy outcome. Its first two moments decompose into five constants
(scale (1-p_tilde)^2 and C1..C5): mean = scale * analytic + C1 and variance =
C2^2 C4 + C3^2 C5 + C4 C5. `verify_decomposition` checks both statements by
Monte Carlo. The constants are defined for the default convention only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import measure
from .formatting import csv_line


@dataclass(frozen=True)
class GradContext:
    """Inputs for one gradient component: expectations at theta and at the
    two shifted points, the target label, and the noise/shot parameters."""

    y_hat: float
    y_hat_plus: float
    y_hat_minus: float
    label: float
    theta_j: float
    lam: float = 0.0
    p_tilde: float = 0.0
    ratio: float = 0.5
    shots: int = 1

    def __post_init__(self):
        for name in ("y_hat", "y_hat_plus", "y_hat_minus"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if not 0.0 <= self.p_tilde <= 1.0:
            raise ValueError(f"p_tilde={self.p_tilde} outside [0, 1]")
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError(f"ratio={self.ratio} outside [0, 1]")
        if self.lam < 0.0:
            raise ValueError("lam must be >= 0")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


@dataclass(frozen=True)
class GradDecomposition:
    scale: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    def __post_init__(self):
        # C4, C5 are variances
        if self.c4 < -1e-15 or self.c5 < -1e-15:
            raise ValueError("variance constants must be non-negative")

    @property
    def predicted_variance(self) -> float:
        return self.c2**2 * self.c4 + self.c3**2 * self.c5 + self.c4 * self.c5


def analytic_gradient(ctx: GradContext, half_shift_convention: bool = False) -> float:
    product = (ctx.y_hat - ctx.label) * (ctx.y_hat_plus - ctx.y_hat_minus)
    if half_shift_convention:
        product *= 0.5
    return product + ctx.lam * ctx.theta_j


def estimated_gradient(
    ctx: GradContext,
    rng: np.random.Generator,
    half_shift_convention: bool = False,
) -> float:
    """Finite-shot gradient estimate from three independent sample means."""
    center_rng, plus_rng, minus_rng = rng.spawn(3)
    y_bar = measure.sample_shots(ctx.y_hat, ctx.p_tilde, ctx.ratio, ctx.shots, center_rng)
    y_bar_plus = measure.sample_shots(
        ctx.y_hat_plus, ctx.p_tilde, ctx.ratio, ctx.shots, plus_rng
    )
    y_bar_minus = measure.sample_shots(
        ctx.y_hat_minus, ctx.p_tilde, ctx.ratio, ctx.shots, minus_rng
    )
    product = (y_bar - ctx.label) * (y_bar_plus - y_bar_minus)
    if half_shift_convention:
        product *= 0.5
    return product + ctx.lam * ctx.theta_j


def decomposition_constants(ctx: GradContext) -> GradDecomposition:
    """The five moment constants of the estimator, default convention.

    The lam * theta_j coefficients of scale*analytic and C1 sum to exactly
    lam * theta_j: (1-p)^2 + (2p - p^2) = 1 for every p.
    """
    p, r, k = ctx.p_tilde, ctx.ratio, ctx.shots
    keep = 1.0 - p
    diff = ctx.y_hat_plus - ctx.y_hat_minus
    q = measure.noisy_expectation(ctx.y_hat, p, r)
    q_plus = measure.noisy_expectation(ctx.y_hat_plus, p, r)
    q_minus = measure.noisy_expectation(ctx.y_hat_minus, p, r)
    return GradDecomposition(
        scale=keep**2,
        c1=keep * p * (r - ctx.label) * diff + (2.0 * p - p * p) * ctx.lam * ctx.theta_j,
        c2=keep * diff,
        c3=q - ctx.label,
        c4=q * (1.0 - q) / k,
        c5=(q_plus * (1.0 - q_plus) + q_minus * (1.0 - q_minus)) / k,
    )


def predicted_mean(ctx: GradContext) -> float:
    dec = decomposition_constants(ctx)
    return dec.scale * analytic_gradient(ctx) + dec.c1


@dataclass(frozen=True)
class DecompositionReport:
    empirical_mean: float
    predicted_mean: float
    z_score: float
    empirical_var: float
    predicted_var: float
    var_ratio: float
    trials: int
    degenerate: bool
    passed: bool

    CSV_HEADER = (
        "empirical_mean,predicted_mean,z_score,"
        "empirical_var,predicted_var,var_ratio,trials,degenerate,passed"
    )

    def csv_row(self) -> str:
        return csv_line(
            [
                self.empirical_mean,
                self.predicted_mean,
                self.z_score,
                self.empirical_var,
                self.predicted_var,
                self.var_ratio,
                self.trials,
                str(int(self.degenerate)),
                str(int(self.passed)),
            ]
        )


def verify_decomposition(
    ctx: GradContext,
    trials: int,
    rng: np.random.Generator,
    z_limit: float = 4.0,
    ratio_band: float = 0.1,
) -> DecompositionReport:
    """Monte Carlo check of the estimator's mean and variance.

    Draws `trials` independent gradient estimates (vectorized, one binomial
    array per stream) and compares moments against the closed forms. A context
    whose predicted variance is zero is reported degenerate and passes by
    definition (there is nothing statistical to test; the mean check still
    applies when exact).
    """
    if trials < 1000:
        raise ValueError("need at least 1000 trials for a meaningful check")
    k = ctx.shots
    qs = [
        measure.noisy_expectation(ctx.y_hat, ctx.p_tilde, ctx.ratio),
        measure.noisy_expectation(ctx.y_hat_plus, ctx.p_tilde, ctx.ratio),
        measure.noisy_expectation(ctx.y_hat_minus, ctx.p_tilde, ctx.ratio),
    ]
    streams = rng.spawn(3)
    draws = [
        s.binomial(k, min(max(q, 0.0), 1.0), size=trials) / k
        for s, q in zip(streams, qs)
    ]
    values = (draws[0] - ctx.label) * (draws[1] - draws[2]) + ctx.lam * ctx.theta_j

    dec = decomposition_constants(ctx)
    pred_mean = dec.scale * analytic_gradient(ctx) + dec.c1
    pred_var = dec.predicted_variance
    emp_mean = float(values.mean())
    emp_var = float(values.var(ddof=1))

    if pred_var <= 0.0:
        degenerate = True
        z = 0.0 if emp_var == 0.0 and emp_mean == pred_mean else float("nan")
        ratio = 1.0 if emp_var == 0.0 else float("inf")
        passed = emp_var == 0.0 and abs(emp_mean - pred_mean) < 1e-12
    else:
        degenerate = False
        z = (emp_mean - pred_mean) / np.sqrt(pred_var / trials)
        ratio = emp_var / pred_var
        passed = abs(z) < z_limit and 1.0 - ratio_band <= ratio <= 1.0 + ratio_band
    return DecompositionReport(
        empirical_mean=emp_mean,
        predicted_mean=pred_mean,
        z_score=float(z),
        empirical_var=emp_var,
        predicted_var=pred_var,
        var_ratio=float(ratio),
        trials=trials,
        degenerate=degenerate,
        passed=passed,
    )
