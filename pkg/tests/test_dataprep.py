import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisyvqc.dataprep import (
    RawDataset,
    ReducedDataset,
    filter_binary,
    jacobi_eigh,
    load_csv,
    load_reduced_csv,
    pca_reduce,
    reduced_to_csv,
    split,
    synthesize,
)


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_load_csv_parses_features_and_labels(tmp_path):
    path = write(tmp_path, "1.5,2.5,0\n\n3.0,4.0,1\n")
    data = load_csv(path)
    assert data.n_rows == 2
    assert np.array_equal(data.features, [[1.5, 2.5], [3.0, 4.0]])
    assert np.array_equal(data.labels, [0, 1])
    assert data.labels.dtype == np.dtype(int)


def test_load_csv_reports_line_numbers(tmp_path):
    with pytest.raises(ValueError, match="line 2"):
        load_csv(write(tmp_path, "1,2,0\n1,2\n"))
    with pytest.raises(ValueError, match="line 1.*non-numeric"):
        load_csv(write(tmp_path, "a,2,0\n"))
    with pytest.raises(ValueError, match="line 2.*label"):
        load_csv(write(tmp_path, "1,2,0\n1,2,0.5\n"))


def test_load_csv_rejects_degenerate_files(tmp_path):
    with pytest.raises(ValueError, match="no rows"):
        load_csv(write(tmp_path, "\n\n"))
    with pytest.raises(ValueError, match="at least one feature"):
        load_csv(write(tmp_path, "7\n"))


def test_filter_binary_keeps_requested_classes_in_order():
    data = RawDataset(
        np.arange(10, dtype=float).reshape(5, 2), np.array([3, 0, 1, 2, 1])
    )
    kept = filter_binary(data, (0, 1))
    assert np.array_equal(kept.labels, [0, 1, 1])
    assert np.array_equal(kept.features[:, 0], [2.0, 4.0, 8.0])
    with pytest.raises(ValueError):
        filter_binary(data, (7, 8))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 7))
def test_jacobi_matches_numpy_eigh(seed, m):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(m, m))
    sym = (a + a.T) / 2.0
    values, vectors = jacobi_eigh(sym)
    reference = np.sort(np.linalg.eigvalsh(sym))[::-1]
    assert np.allclose(values, reference, atol=1e-10)
    assert np.allclose(vectors.T @ vectors, np.eye(m), atol=1e-10)
    assert np.allclose(sym @ vectors, vectors * values, atol=1e-9)
    assert (np.diff(values) <= 1e-12).all()


def test_jacobi_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0.0, 1.0], [2.0, 0.0]]))


def test_jacobi_zero_matrix():
    values, vectors = jacobi_eigh(np.zeros((3, 3)))
    assert np.array_equal(values, np.zeros(3))
    assert np.array_equal(vectors, np.eye(3))


def test_pca_reduce_scales_each_component_to_full_range():
    data = synthesize(60, seed=4)
    reduced = pca_reduce(data, 3)
    assert reduced.features.shape == (60, 3)
    assert np.allclose(reduced.features.min(axis=0), 0.0, atol=1e-12)
    assert np.allclose(reduced.features.max(axis=0), math.pi, atol=1e-12)
    assert np.allclose(reduced.basis @ reduced.basis.T, np.eye(3), atol=1e-9)
    for row in reduced.basis:
        assert row[np.argmax(np.abs(row))] > 0.0
    assert np.array_equal(reduced.labels, data.labels)


def test_pca_reduce_is_deterministic():
    data = synthesize(40, seed=9)
    a = pca_reduce(data, 3)
    b = pca_reduce(data, 3)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.basis, b.basis)


def test_pca_unscale_recovers_projection():
    data = synthesize(30, seed=2)
    reduced = pca_reduce(data, 2)
    centered = data.features - data.features.mean(axis=0)
    projected = centered @ reduced.basis.T
    assert np.allclose(reduced.unscale(reduced.features), projected, atol=1e-9)


def test_pca_reduce_rejects_rank_deficient_data():
    rng = np.random.default_rng(0)
    column = rng.normal(size=(20, 1))
    data = RawDataset(np.hstack([column, 2.0 * column, -column]), np.zeros(20, dtype=int))
    with pytest.raises(ValueError, match="rank"):
        pca_reduce(data, 2)


def test_pca_reduce_rejects_small_inputs():
    data = RawDataset(np.random.default_rng(1).normal(size=(2, 5)), np.zeros(2, dtype=int))
    with pytest.raises(ValueError):
        pca_reduce(data, 3)
    narrow = RawDataset(np.random.default_rng(1).normal(size=(10, 2)), np.zeros(10, dtype=int))
    with pytest.raises(ValueError):
        pca_reduce(narrow, 3)


def test_split_sizes_and_disjointness():
    data = synthesize(50, seed=3)
    train, test = split(data, 30, 15, seed=7)
    assert train.features.shape == (30, 64) and test.features.shape == (15, 64)
    train_rows = {tuple(row) for row in train.features}
    test_rows = {tuple(row) for row in test.features}
    assert not train_rows & test_rows
    again = split(data, 30, 15, seed=7)
    assert np.array_equal(again[0].features, train.features)
    shuffled = split(data, 30, 15, seed=8)
    assert not np.array_equal(shuffled[0].features, train.features)


def test_split_validation():
    data = synthesize(10, seed=0)
    with pytest.raises(ValueError):
        split(data, 8, 3, seed=0)
    with pytest.raises(ValueError):
        split(data, 0, 3, seed=0)


def test_split_works_on_reduced_datasets():
    reduced = pca_reduce(synthesize(40, seed=5), 3)
    train, test = split(reduced, 20, 10, seed=1)
    assert isinstance(train, ReducedDataset)
    assert np.array_equal(train.basis, reduced.basis)


def test_synthesize_properties():
    data = synthesize(100, seed=6)
    assert data.features.shape == (100, 64)
    assert np.array_equal(data.labels, np.arange(100) % 2)
    assert data.features.min() >= 0.0 and data.features.max() <= 16.0
    mean_zero = data.features[data.labels == 0].mean()
    mean_one = data.features[data.labels == 1].mean()
    assert mean_one - mean_zero > 3.0
    assert np.array_equal(synthesize(100, seed=6).features, data.features)
    with pytest.raises(ValueError):
        synthesize(1, seed=0)


def test_reduced_csv_round_trip(tmp_path):
    reduced = pca_reduce(synthesize(25, seed=8), 3)
    text = reduced_to_csv(reduced)
    lines = text.strip().split("\n")
    assert lines[0] == "f1,f2,f3,label"
    assert len(lines) == 26
    path = write(tmp_path, text, "reduced.csv")
    loaded = load_reduced_csv(path)
    assert np.allclose(loaded.features, reduced.features, atol=1e-10)
    assert np.array_equal(loaded.labels, reduced.labels)


def test_load_reduced_csv_validation(tmp_path):
    with pytest.raises(ValueError, match="header"):
        load_reduced_csv(write(tmp_path, "a,b\n1,0\n"))
    with pytest.raises(ValueError, match="line 3"):
        load_reduced_csv(write(tmp_path, "f1,label\n0.5,0\n0.5\n"))
    with pytest.raises(ValueError, match="no rows"):
        load_reduced_csv(write(tmp_path, "f1,label\n"))


def test_reduced_dataset_validation():
    ok = dict(
        labels=np.array([0, 1]),
        basis=np.eye(2),
        component_min=np.zeros(2),
        component_max=np.ones(2),
    )
    with pytest.raises(ValueError, match="0, pi"):
        ReducedDataset(features=np.array([[4.0, 0.0], [0.0, 1.0]]), **ok)
    with pytest.raises(ValueError, match="orthonormal"):
        ReducedDataset(
            features=np.zeros((2, 2)),
            labels=np.array([0, 1]),
            basis=np.array([[1.0, 1.0], [0.0, 1.0]]),
            component_min=np.zeros(2),
            component_max=np.ones(2),
        )
    with pytest.raises(ValueError, match="row count"):
        ReducedDataset(
            features=np.zeros((2, 2)),
            labels=np.array([0, 1]),
            basis=np.eye(3),
            component_min=np.zeros(3),
            component_max=np.ones(3),
        )


def test_digits_file_matches_pipeline_expectations(digits_path):
    data = filter_binary(load_csv(digits_path), (0, 1))
    assert data.n_rows >= 360
    assert set(np.unique(data.labels)) == {0, 1}
    reduced = pca_reduce(data, 3)
    assert reduced.features.min() >= 0.0
    assert reduced.features.max() <= math.pi + 1e-9
