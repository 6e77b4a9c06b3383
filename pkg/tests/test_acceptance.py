"""End-to-end checks of the package's headline guarantees.

Covered here, in order: per-layer noise merging, parameter-shift exactness,
the estimator's mean/variance decomposition, the loss-landscape constants,
experiment-scale training comparisons, utility-bound sandwiches, the privacy
chain, statistical-query shot counts, and byte-level determinism. Each check
carries its runtime budget as an assertion so regressions in speed fail too.
"""

import itertools
import math
import os
import time

import numpy as np
import pytest

from noisyvqc import bounds, qcore
from noisyvqc.circuits import (
    AnsatzSpec,
    EncoderSpec,
    build_ansatz,
    build_encoder,
    circuit_unitary,
    empty_circuit,
    evaluate,
    shift_parameter,
)
from noisyvqc.cli import main as cli_main
from noisyvqc.gradients import GradContext, verify_decomposition
from noisyvqc.measure import readout_povm
from noisyvqc.noise import NoiseSpec, merged_rate
from noisyvqc.seeding import derive_rng
from noisyvqc.training import (
    TrainConfig,
    analytic_loss_gradient,
    objective,
    train,
    utility_r1,
)

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIG_DIR = os.path.join(REPO_ROOT, "configs")
CONFIGS = ("baseline_dep5", "qnn_dep5", "baseline_dep20", "qnn_dep20")

MASTER_SEED = 2026
ANSATZ15 = AnsatzSpec(3, 5)
LAM_PL = 0.5
P_GATE = 0.0025


def read_summary(outdir):
    with open(os.path.join(outdir, "summary.csv")) as handle:
        header, row = handle.read().strip().split("\n")
    return {
        key: (value if key in ("seeds", "iterations", "d") else float(value))
        for key, value in zip(header.split(","), row.split(","))
    }


# ------------------------------------------------------------- noise merging


def test_per_layer_noise_equals_single_merged_channel():
    start = time.monotonic()
    rng = derive_rng(MASTER_SEED, "acceptance", "merge")
    rates = (0.001, 0.01, 0.1)
    for i in range(50):
        p = rates[i % 3]
        total = 1 + (i % 10)
        blocks = int(rng.integers(1, min(3, total) + 1))
        layers = total - blocks
        x = rng.uniform(0.0, math.pi, 3)
        encoder = build_encoder(EncoderSpec(3, blocks), x)
        if layers:
            theta = rng.uniform(math.pi, 3.0 * math.pi, 3 * layers)
            tail = build_ansatz(AnsatzSpec(3, layers), theta)
        else:
            tail = empty_circuit(3)
        per_layer = evaluate(encoder, tail, noise=NoiseSpec("depolarize", p=p))
        u = circuit_unitary(tail) @ circuit_unitary(encoder)
        clean = u @ qcore.zero_state(3) @ u.conj().T
        merged = qcore.apply_depolarize(clean, merged_rate(p, total))
        assert np.max(np.abs(per_layer - merged)) <= 1e-12
    assert time.monotonic() - start < 10.0


# ----------------------------------------------------- parameter-shift checks


def test_parameter_shift_matches_finite_differences():
    start = time.monotonic()
    rng = derive_rng(0, "acceptance", "psr")
    projector = readout_povm(3).projector

    def prediction(theta, state, ansatz):
        u = circuit_unitary(build_ansatz(ansatz, theta))
        return qcore.expectation(u @ state @ u.conj().T, projector)

    informative = 0
    for _ in range(100):
        ansatz = AnsatzSpec(3, int(rng.integers(1, 5)))
        encoder = EncoderSpec(3, int(rng.integers(1, 4)))
        x = rng.uniform(0.0, math.pi, 3)
        state = evaluate(build_encoder(encoder, x), empty_circuit(3))
        theta = rng.uniform(math.pi, 3.0 * math.pi, ansatz.n_params)
        j = int(rng.integers(0, ansatz.n_params))
        shift = 0.5 * (
            prediction(shift_parameter(theta, j, +1), state, ansatz)
            - prediction(shift_parameter(theta, j, -1), state, ansatz)
        )
        h = 1e-5
        up, down = theta.copy(), theta.copy()
        up[j] += h
        down[j] -= h
        fd = (prediction(up, state, ansatz) - prediction(down, state, ansatz)) / (2.0 * h)
        # relative agreement; the absolute floor covers parameters the readout
        # provably cannot see (rotations that commute past the measured qubit),
        # where both routes return zero up to roundoff
        assert abs(shift - fd) <= 1e-6 * max(abs(shift), abs(fd)) + 1e-9
        if max(abs(shift), abs(fd)) > 1e-3:
            informative += 1
    assert informative >= 30
    assert time.monotonic() - start < 30.0


# ------------------------------------------------- estimator moment structure


def test_estimator_moments_match_closed_forms_on_grid():
    start = time.monotonic()
    grid = itertools.product((0.0, 0.05, 0.5), (1, 20, 200), (0.0, 0.1, 0.5))
    for index, (p_tilde, shots, lam) in enumerate(grid):
        ctx = GradContext(
            y_hat=0.3,
            y_hat_plus=0.6,
            y_hat_minus=0.2,
            label=0.5,
            theta_j=math.pi,
            lam=lam,
            p_tilde=p_tilde,
            ratio=0.5,
            shots=shots,
        )
        report = verify_decomposition(
            ctx, 100_000, derive_rng(MASTER_SEED, "acceptance", "decomposition", index)
        )
        assert report.passed, (
            f"cell p_tilde={p_tilde} shots={shots} lam={lam}: "
            f"z={report.z_score:.3f} var_ratio={report.var_ratio:.4f}"
        )
        assert abs(report.z_score) < 4.0
        if not report.degenerate:
            assert abs(report.var_ratio - 1.0) <= 0.1
    assert time.monotonic() - start < 300.0


# ----------------------------------------------------- loss-landscape bounds


@pytest.fixture(scope="module")
def pl_reference(encoded_digits):
    """Best loss over 50 restarts of exact clipped descent at lam = 0.5,
    plus the restart spread and wall time (charged to the landscape check)."""
    train_data, _ = encoded_digits
    start = time.monotonic()
    finals = [
        train(
            TrainConfig(
                iterations=100, shots=None, lam=LAM_PL, clip_to_pl_box=True, seed=seed
            ),
            train_data,
            ANSATZ15,
        )[-1].loss
        for seed in range(50)
    ]
    elapsed = time.monotonic() - start
    return min(finals), max(finals), elapsed


def test_landscape_constants_hold_on_box_samples(encoded_digits, pl_reference):
    train_data, _ = encoded_digits
    l_star, l_star_worst, restart_elapsed = pl_reference
    start = time.monotonic()
    d = ANSATZ15.n_params
    s_const = bounds.smoothness(LAM_PL)
    g_const = bounds.lipschitz(LAM_PL, d)
    mu = bounds.pl_constant(LAM_PL, d)

    # all restarts agree with each other and with the box-corner optimum
    corner = objective(np.full(d, math.pi), train_data, ANSATZ15, LAM_PL)
    assert l_star_worst - l_star <= 1e-9
    assert abs(l_star - corner) <= 1e-9

    rng = derive_rng(MASTER_SEED, "acceptance", "landscape")
    samples = rng.uniform(math.pi, 3.0 * math.pi, size=(100, d))
    grads = np.array(
        [analytic_loss_gradient(t, train_data, ANSATZ15, LAM_PL) for t in samples]
    )
    losses = np.array([objective(t, train_data, ANSATZ15, LAM_PL) for t in samples])

    for i in range(100):
        j = (i + 1) % 100
        gap = float(np.linalg.norm(samples[i] - samples[j]))
        assert np.linalg.norm(grads[i] - grads[j]) <= s_const * gap + 1e-9
        assert abs(losses[i] - losses[j]) <= g_const * gap + 1e-9
        assert np.linalg.norm(grads[i]) <= g_const
        assert float(grads[i] @ grads[i]) >= 2.0 * mu * (losses[i] - l_star) - 1e-9

    assert restart_elapsed + (time.monotonic() - start) < 120.0


# ------------------------------------------------- experiment-scale training


@pytest.fixture(scope="module")
def experiment_runs(tmp_path_factory, digits_path):
    base = tmp_path_factory.mktemp("experiment")
    outdirs = {}
    cwd = os.getcwd()
    start = time.monotonic()
    os.chdir(REPO_ROOT)
    try:
        for name in CONFIGS:
            outdir = str(base / name)
            code = cli_main(
                ["train", "--config", os.path.join(CONFIG_DIR, name + ".ini"),
                 "--outdir", outdir]
            )
            assert code == 0, f"training run {name} failed"
            outdirs[name] = outdir
    finally:
        os.chdir(cwd)
    return outdirs, time.monotonic() - start


def test_noise_widens_the_loss_gap_with_depth(experiment_runs):
    outdirs, elapsed = experiment_runs
    assert elapsed < 1200.0
    summary = {name: read_summary(outdirs[name]) for name in CONFIGS}
    for depth in (5, 20):
        clean = summary[f"baseline_dep{depth}"]
        noisy = summary[f"qnn_dep{depth}"]
        assert clean["final_loss"] <= noisy["final_loss"]
        assert clean["final_loss"] <= noisy["final_noisy_loss"]
    gap = {
        depth: summary[f"qnn_dep{depth}"]["final_noisy_loss"]
        - summary[f"baseline_dep{depth}"]["final_loss"]
        for depth in (5, 20)
    }
    assert gap[20] > gap[5]
    clean_gap = {
        depth: summary[f"qnn_dep{depth}"]["final_loss"]
        - summary[f"baseline_dep{depth}"]["final_loss"]
        for depth in (5, 20)
    }
    assert clean_gap[20] > clean_gap[5]
    assert summary["baseline_dep5"]["final_test_acc"] >= 0.9


def test_measured_utility_stays_below_bounds(experiment_runs, encoded_digits, pl_reference):
    outdirs, _ = experiment_runs
    for name in ("qnn_dep5", "qnn_dep20"):
        summary = read_summary(outdirs[name])
        assert summary["r1"] <= summary["r1_bound"], name

    # shot-noise training in the strongly regularized regime, where the
    # excess-risk bound applies
    train_data, _ = encoded_digits
    l_star, _, _ = pl_reference
    finals = []
    for seed in range(5):
        config = TrainConfig(
            iterations=400,
            shots=20,
            lam=LAM_PL,
            noise=NoiseSpec("depolarize", p=P_GATE),
            clip_to_pl_box=True,
            seed=seed,
        )
        finals.append(train(config, train_data, ANSATZ15)[-1].theta)
    inputs = bounds.BoundInputs(
        d=ANSATZ15.n_params,
        iterations=400,
        shots=20,
        batches=280,
        lam=LAM_PL,
        p_tilde=merged_rate(P_GATE, 8),
    )
    r1 = utility_r1(finals, train_data, ANSATZ15, LAM_PL)
    assert r1 <= bounds.r1_bound(inputs)
    mean_loss = float(np.mean([objective(t, train_data, ANSATZ15, LAM_PL) for t in finals]))
    r2 = mean_loss - l_star
    assert -1e-9 <= r2 <= bounds.r2_bound(inputs)


def non_increasing(values):
    return all(a >= b for a, b in zip(values, values[1:]))


def non_decreasing(values):
    return all(a <= b for a, b in zip(values, values[1:]))


def test_bounds_are_monotone_in_shots_noise_and_width():
    shot_grid = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000)
    noise_grid = (0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4, 0.6, 0.9)
    width_grid = (1, 2, 5, 10, 15, 30, 60, 120)
    for channel in ("depolarize", "general"):
        for bound in (bounds.r1_bound, bounds.r2_bound):
            by_shots = [
                bound(
                    bounds.BoundInputs(
                        d=15, iterations=400, shots=k, batches=280, lam=0.5, p_tilde=0.02
                    ),
                    channel,
                )
                for k in shot_grid
            ]
            assert non_increasing(by_shots), (channel, bound.__name__, "shots")
            by_noise = [
                bound(
                    bounds.BoundInputs(
                        d=15, iterations=400, shots=20, batches=280, lam=0.5, p_tilde=p
                    ),
                    channel,
                )
                for p in noise_grid
            ]
            assert non_decreasing(by_noise), (channel, bound.__name__, "p_tilde")
            by_width = [
                bound(
                    bounds.BoundInputs(
                        d=d, iterations=400, shots=20, batches=280, lam=0.5, p_tilde=0.02
                    ),
                    channel,
                )
                for d in width_grid
            ]
            assert non_decreasing(by_width), (channel, bound.__name__, "d")


# --------------------------------------------------------------- privacy chain


def test_privacy_chain_reference_values():
    assert abs(bounds.per_query_epsilon(0.5, 0.5, 1) - math.log(6.0)) < 1e-12
    inputs = bounds.PrivacyInputs(
        p_tilde=0.5, ratio=0.5, shots=1, iterations=3, d=2,
        delta_grad=1e-5, delta_total=1e-5,
    )
    eps_query, eps_grad, eps_total = bounds.epsilon_chain(inputs, variant="literal")
    assert eps_query == pytest.approx(1.7917594692280550008124773583807022727, rel=1e-12)
    assert eps_grad == pytest.approx(38.001604814914732987313930204557502939, rel=1e-12)
    assert eps_total == pytest.approx(2.3212811081785420537587561950e35, rel=5e-13)
    _, eps_grad_c, eps_total_c = bounds.epsilon_chain(inputs, variant="composed")
    assert eps_grad_c == pytest.approx(41.768225818228606617227543192083274999, rel=1e-12)
    assert eps_total_c == pytest.approx(4.7688895282433529097322483978840e38, rel=5e-13)


def test_privacy_chain_monotonicity():
    queries = [bounds.per_query_epsilon(0.3, 0.5, k) for k in range(1, 11)]
    assert all(a < b for a, b in zip(queries, queries[1:]))
    base = dict(p_tilde=0.5, ratio=0.5, shots=1, delta_grad=1e-5, delta_total=1e-5)
    by_iterations = [
        bounds.epsilon_chain(bounds.PrivacyInputs(iterations=t, d=2, **base))[2]
        for t in (1, 2, 5, 10, 50)
    ]
    assert non_decreasing(by_iterations)
    assert all(v > 0 for v in by_iterations)
    by_width = [
        bounds.epsilon_chain(bounds.PrivacyInputs(iterations=3, d=d, **base))[2]
        for d in (1, 2, 4, 8, 16)
    ]
    assert non_decreasing(by_width)


# ------------------------------------------------------- statistical queries


def test_qsq_count_and_empirical_coverage():
    start = time.monotonic()
    assert bounds.qsq_shot_count(bounds.QsqInputs(0.1, 0.05)) == 185
    # the guarantee is distribution-free in nu; check at the worst-variance
    # point nu = 0.5 with the same shot count
    inputs = bounds.QsqInputs(0.1, 0.05, p_tilde=0.0, nu=0.5, trm_ratio=0.0)
    assert bounds.qsq_shot_count(inputs) == 185
    trials = 10_000
    coverage = bounds.simulate_qsq_query(inputs, 185, trials, seed=MASTER_SEED)
    assert coverage >= 0.95 - 3.0 * math.sqrt(0.05 * 0.95 / trials)
    assert time.monotonic() - start < 60.0


# ---------------------------------------------------------------- determinism


def test_experiment_reruns_are_byte_identical(experiment_runs, tmp_path_factory):
    outdirs, _ = experiment_runs
    redo = tmp_path_factory.mktemp("experiment_redo")
    cwd = os.getcwd()
    os.chdir(REPO_ROOT)
    try:
        for name in CONFIGS:
            second = str(redo / name)
            code = cli_main(
                ["train", "--config", os.path.join(CONFIG_DIR, name + ".ini"),
                 "--outdir", second]
            )
            assert code == 0
            first = outdirs[name]
            assert sorted(os.listdir(first)) == sorted(os.listdir(second))
            for filename in sorted(os.listdir(first)):
                with open(os.path.join(first, filename), "rb") as a:
                    left = a.read()
                with open(os.path.join(second, filename), "rb") as b:
                    right = b.read()
                assert left == right, f"{name}/{filename} differs between reruns"
    finally:
        os.chdir(cwd)
