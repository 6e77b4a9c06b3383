import os

import numpy as np
import pytest

from noisyvqc import EncoderSpec, encode_features, filter_binary, load_csv, pca_reduce, split

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DIGITS_CSV = os.path.join(REPO_ROOT, "data", "digits_01.csv")
CONFIG_DIR = os.path.join(REPO_ROOT, "configs")


@pytest.fixture(scope="session")
def digits_path():
    if not os.path.exists(DIGITS_CSV):
        pytest.skip("digits fixture CSV not present")
    return DIGITS_CSV


@pytest.fixture(scope="session")
def digits_splits(digits_path):
    """The 280/80 reduced digit split used by the training-scale tests."""
    raw = filter_binary(load_csv(digits_path), (0, 1))
    reduced = pca_reduce(raw, 3)
    return split(reduced, 280, 80, seed=1)


@pytest.fixture(scope="session")
def encoded_digits(digits_splits):
    encoder = EncoderSpec(3, 3)
    train_split, test_split = digits_splits
    train_data = encode_features(train_split.features, train_split.labels.astype(float), encoder)
    test_data = encode_features(test_split.features, test_split.labels.astype(float), encoder)
    return train_data, test_data


@pytest.fixture(scope="session")
def small_encoded():
    """A 12-row synthetic encoded dataset for fast training-loop tests."""
    rng = np.random.default_rng(11)
    features = rng.uniform(0.0, np.pi, size=(12, 3))
    labels = (np.arange(12) % 2).astype(float)
    return encode_features(features, labels, EncoderSpec(3, 3))
