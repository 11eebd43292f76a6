import numpy as np
import pytest
from scipy.spatial.distance import pdist

from semshift.errors import ConfigError, DomainError, ValidationError
from semshift.metrics import cosine_distance, distance_matrix
from semshift.spaces import (
    RankError,
    SpaceConfig,
    SpaceKind,
    apply_space,
    fit_pca,
    project_definition_space,
    select_random_dims,
    stress_schedule,
)


# --- definition space ---


def test_def_projection_self_coordinate_zero(rng):
    defs = rng.standard_normal((3, 6))
    a = defs[0][None, :].copy()
    pair = project_definition_space(a, rng.standard_normal((2, 6)), defs)
    assert pair.a[0, 0] == 0.0
    assert pair.a[0, 1] > 0.0 and pair.a[0, 2] > 0.0
    assert pair.space.k == 3


def test_def_projection_orthogonal_is_all_ones():
    defs = np.eye(3, 4)  # three defs along the first three axes
    v = np.array([[0.0, 0.0, 0.0, 1.0]])
    pair = project_definition_space(v, v, defs)
    assert pair.a.tolist() == [[1.0, 1.0, 1.0]]


def test_def_projection_matches_scalar(rng):
    defs = rng.standard_normal((4, 5))
    a = rng.standard_normal((6, 5))
    b = rng.standard_normal((3, 5))
    pair = project_definition_space(a, b, defs)
    for i in range(6):
        for k in range(4):
            assert pair.a[i, k] == pytest.approx(
                cosine_distance(a[i], defs[k]), abs=1e-12
            )
    assert pair.b.shape == (3, 4)


def test_def_projection_zero_row_rejected(rng):
    defs = np.array([[1.0, 0.0]])
    a = np.array([[2.0, 0.0]])  # cosine-identical to the single definition
    with pytest.raises(DomainError, match="all-zero"):
        project_definition_space(a, a, defs)


# --- PCA ---


def test_pca_rank_one_preserves_distances(rng):
    direction = rng.standard_normal(8)
    coeffs = rng.uniform(-3, 3, size=10)
    data = 1.5 + np.outer(coeffs, direction)  # rank-1 around a mean
    a, b = data[:6], data[6:]
    pair = fit_pca(a, b, k=1)
    before = pdist(np.vstack([a, b]))
    after = pdist(np.vstack([pair.a, pair.b]))
    assert np.allclose(before, after, atol=1e-9)


def test_pca_full_rank_preserves_distances(rng):
    a = rng.standard_normal((7, 5))
    b = rng.standard_normal((6, 5))
    pair = fit_pca(a, b, k=5)
    before = pdist(np.vstack([a, b]))
    after = pdist(np.vstack([pair.a, pair.b]))
    assert np.allclose(before, after, atol=1e-9)


def test_pca_variance_ordering(rng):
    a = rng.standard_normal((20, 6)) * np.array([5, 4, 3, 2, 1, 0.5])
    b = rng.standard_normal((20, 6)) * np.array([5, 4, 3, 2, 1, 0.5])
    pair = fit_pca(a, b, k=6)
    variances = pair.a.var(axis=0) * len(pair.a) + pair.b.var(axis=0) * len(pair.b)
    # joint variance per component is non-increasing
    joint = np.vstack([pair.a, pair.b]).var(axis=0)
    assert np.all(np.diff(joint) <= 1e-12)


def test_pca_rank_error_lists_maximum(rng):
    a = rng.standard_normal((3, 10))
    b = rng.standard_normal((2, 10))
    # 5 points span at most a rank-4 centred subspace
    with pytest.raises(RankError, match="achievable rank 4") as err:
        fit_pca(a, b, k=5)
    assert err.value.max_rank == 4


def test_pca_degenerate_input(rng):
    row = rng.standard_normal(4)
    a = np.tile(row, (3, 1))
    with pytest.raises(RankError, match="achievable rank 0"):
        fit_pca(a, a, k=1)


def test_pca_sign_convention_deterministic(rng):
    a = rng.standard_normal((10, 4))
    b = rng.standard_normal((10, 4))
    p1 = fit_pca(a, b, k=3)
    p2 = fit_pca(a, b, k=3)
    assert np.array_equal(p1.a, p2.a)


# --- random dims ---


def test_rand_full_selection_is_identity(rng):
    a = rng.standard_normal((5, 6))
    b = rng.standard_normal((4, 6))
    pair = select_random_dims(a, b, k=6, seed=99)
    assert np.array_equal(pair.a, a)
    assert np.array_equal(pair.b, b)
    assert np.allclose(
        distance_matrix(pair.a, pair.b), distance_matrix(a, b), atol=0
    )


def test_rand_deterministic_per_seed(rng):
    a = rng.standard_normal((5, 12))
    b = rng.standard_normal((5, 12))
    p1 = select_random_dims(a, b, k=4, seed=7)
    p2 = select_random_dims(a, b, k=4, seed=7)
    assert np.array_equal(p1.a, p2.a)
    p3 = select_random_dims(a, b, k=4, seed=8)
    assert not np.array_equal(p1.a, p3.a)


def test_rand_k1_collinear(rng):
    # all vectors share coordinate 0; selecting it makes every distance 0
    a = np.column_stack([np.full(4, 2.0), rng.standard_normal(4)])
    b = np.column_stack([np.full(3, 2.0), rng.standard_normal(3)])
    for seed in range(50):
        pair = select_random_dims(a, b, k=1, seed=seed)
        if pair.a.shape[1] == 1 and np.all(pair.a == 2.0):
            assert np.all(distance_matrix(pair.a, pair.b) == 0.0)
            break


def test_rand_k_too_large(rng):
    a = rng.standard_normal((2, 3))
    with pytest.raises(ValidationError, match="k must be"):
        select_random_dims(a, a, k=4, seed=0)


# --- schedule ---


def test_schedule_powers_of_two():
    assert stress_schedule(1024, 4) == [512, 256, 128, 64, 32, 16, 8, 4]


def test_schedule_non_power():
    assert stress_schedule(768, 4) == [384, 192, 96, 48, 24, 12, 6]


def test_schedule_degenerate():
    assert stress_schedule(4, 4) == []


def test_schedule_invalid():
    with pytest.raises(ValidationError):
        stress_schedule(2, 4)


# --- dispatch ---


def test_apply_full_identity(rng):
    a = rng.standard_normal((3, 5)).astype(np.float32)
    b = rng.standard_normal((2, 5)).astype(np.float32)
    pair = apply_space(a, b, SpaceConfig(kind=SpaceKind.FULL))
    assert pair.a is a or np.array_equal(pair.a, a)
    assert pair.space.k == 5


def test_apply_def_requires_definitions(rng):
    a = rng.standard_normal((3, 5))
    with pytest.raises(ConfigError):
        apply_space(a, a, SpaceConfig(kind=SpaceKind.DEF))


def test_apply_def_dimension(rng):
    a = rng.standard_normal((3, 5))
    defs = rng.standard_normal((3, 5))
    pair = apply_space(a, a, SpaceConfig(kind=SpaceKind.DEF), def_embeddings=defs)
    assert pair.a.shape == (3, 3)


def test_apply_pca_matches_def_count(rng):
    # k chosen as the word's definition count gives output dimension k
    a = rng.standard_normal((6, 8))
    b = rng.standard_normal((7, 8))
    k = 3
    pair = apply_space(a, b, SpaceConfig(kind=SpaceKind.PCA, k=k))
    assert pair.a.shape == (6, k) and pair.b.shape == (7, k)


def test_space_config_validation():
    with pytest.raises(ValidationError):
        SpaceConfig(kind=SpaceKind.PCA)
    with pytest.raises(ValidationError):
        SpaceConfig(kind=SpaceKind.RAND, k=0)
