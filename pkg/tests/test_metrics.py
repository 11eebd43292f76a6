import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from semshift.errors import DomainError, ValidationError
from semshift.metrics import (
    amd,
    amd_directional,
    apd,
    cosine_distance,
    distance_matrix,
    prt,
    samd_greedy,
    samd_hungarian,
    subsample_equal,
)

SQ2 = math.sqrt(2.0) / 2.0


def matrices(min_rows=1, max_rows=8, min_d=2, max_d=8):
    """Hypothesis strategy: a random usage matrix with well-scaled rows."""
    return st.integers(min_rows, max_rows).flatmap(
        lambda n: st.integers(min_d, max_d).flatmap(
            lambda d: st.lists(
                st.lists(
                    st.floats(-4, 4).filter(lambda v: abs(v) > 1e-3),
                    min_size=d,
                    max_size=d,
                ),
                min_size=n,
                max_size=n,
            ).map(np.array)
        )
    )


def paired_matrices(**kw):
    return matrices(**kw).flatmap(
        lambda a: matrices(min_d=a.shape[1], max_d=a.shape[1], **{
            k: v for k, v in kw.items() if not k.endswith("_d")
        }).map(lambda b: (a, b))
    )


# --- cosine distance ---


def test_cosine_identity():
    assert cosine_distance([1, 0], [1, 0]) == 0.0


def test_cosine_orthogonal():
    assert cosine_distance([1, 0], [0, 1]) == 1.0


def test_cosine_antipodal():
    assert cosine_distance([1, 0], [-1, 0]) == 2.0


def test_cosine_zero_vector():
    with pytest.raises(DomainError):
        cosine_distance([0, 0], [1, 0])


def test_cosine_scale_invariant(rng):
    for _ in range(50):
        x = rng.standard_normal(6)
        y = rng.standard_normal(6)
        c = float(rng.uniform(0.01, 100))
        assert cosine_distance(c * x, y) == pytest.approx(
            cosine_distance(x, y), abs=1e-12
        )


def test_cosine_self_exact_zero(rng):
    for _ in range(100):
        x = rng.standard_normal(int(rng.integers(1, 40)))
        assert cosine_distance(x, x) == 0.0


# --- distance matrix ---


def test_distance_matrix_trivial():
    assert distance_matrix([[1, 0]], [[0, 1]]).tolist() == [[1.0]]
    got = distance_matrix([[1, 0], [0, 1]], [[1, 0]])
    assert got.tolist() == [[0.0], [1.0]]


def test_distance_matrix_matches_scalar_loop(rng):
    a = rng.standard_normal((5, 7))
    b = rng.standard_normal((6, 7))
    got = distance_matrix(a, b)
    for i in range(5):
        for j in range(6):
            assert got[i, j] == pytest.approx(
                cosine_distance(a[i], b[j]), abs=1e-12
            )


def test_distance_matrix_dimension_mismatch(rng):
    with pytest.raises(ValidationError, match="dimension mismatch"):
        distance_matrix(rng.standard_normal((2, 3)), rng.standard_normal((2, 4)))


def test_distance_matrix_range(rng):
    d = distance_matrix(rng.standard_normal((20, 4)), rng.standard_normal((30, 4)))
    assert np.all(d >= 0.0) and np.all(d <= 2.0)


# --- apd / prt / amd spec examples ---


def test_apd_single_pair():
    assert apd([[1, 0]], [[0, 1]]) == 1.0


def test_apd_mean_of_two():
    assert apd([[1, 0], [0, 1]], [[1, 0]]) == pytest.approx(0.5, abs=1e-15)


def test_apd_self_is_mean_not_zero(rng):
    a = rng.standard_normal((6, 4))
    assert apd(a, a) == pytest.approx(oracles.apd(a.tolist(), a.tolist()), abs=1e-12)
    assert apd(a, a) > 0.0


def test_prt_identical_sets(rng):
    a = rng.standard_normal((5, 3))
    assert prt(a, a) == 0.0


def test_prt_centroid_example():
    want = 1.0 - 1.0 / math.sqrt(2.0)
    assert prt([[1, 0], [0, 1]], [[1, 0]]) == pytest.approx(want, abs=1e-15)


def test_prt_scaling_invariance():
    assert prt([[1, 1]], [[2, 2]]) == 0.0


def test_prt_zero_centroid():
    with pytest.raises(DomainError, match="centroid"):
        prt([[1, 0], [-1, 0]], [[1, 1]])


def test_amd_directional_example():
    d = amd_directional([[1, 0], [0, 1]], [[1, 0]])
    assert d.a_to_b == pytest.approx(0.5, abs=1e-15)
    assert d.b_to_a == 0.0
    assert amd([[1, 0], [0, 1]], [[1, 0]]) == pytest.approx(0.25, abs=1e-15)


def test_amd_directional_matches_matrix_minima(rng):
    a = rng.standard_normal((6, 5))
    b = rng.standard_normal((6, 5))
    d = distance_matrix(a, b)
    got = amd_directional(a, b)
    assert got.a_to_b == pytest.approx(d.min(axis=1).mean(), abs=1e-12)
    assert got.b_to_a == pytest.approx(d.min(axis=0).mean(), abs=1e-12)


def test_amd_self_exact_zero(rng):
    a = rng.standard_normal((7, 4))
    assert amd(a, a) == 0.0
    got = amd_directional(a, a)
    assert (got.a_to_b, got.b_to_a) == (0.0, 0.0)


def test_amd_shuffled_self_exact_zero(rng):
    a = rng.standard_normal((9, 4))
    assert amd(a, a[rng.permutation(9)]) == 0.0


# --- sampling ---


def test_subsample_noop_when_equal(rng):
    a = rng.standard_normal((10, 3))
    b = rng.standard_normal((10, 3))
    sa, sb = subsample_equal(a, b, seed=7)
    assert np.array_equal(sa, a) and np.array_equal(sb, b)


def test_subsample_deterministic(rng):
    a = rng.standard_normal((10, 3))
    b = rng.standard_normal((4, 3))
    s1, _ = subsample_equal(a, b, seed=7)
    s2, _ = subsample_equal(a, b, seed=7)
    assert np.array_equal(s1, s2)
    s3, _ = subsample_equal(a, b, seed=8)
    assert not np.array_equal(s1, s3)


def test_subsample_without_replacement(rng):
    a = rng.standard_normal((10, 3))
    b = rng.standard_normal((4, 3))
    sa, sb = subsample_equal(a, b, seed=0)
    assert sa.shape == (4, 3)
    assert np.array_equal(sb, b)
    rows = {tuple(r) for r in a.tolist()}
    sampled = [tuple(r) for r in sa.tolist()]
    assert len(set(sampled)) == 4
    assert all(r in rows for r in sampled)


# --- samd ---


def test_samd_identical_sets(rng):
    a = rng.standard_normal((6, 4))
    score, match = samd_greedy(a, a, seed=0)
    assert score == 0.0
    assert set(match.pairs) == {(i, i) for i in range(6)}
    assert samd_hungarian(a, a, seed=0)[0] == 0.0


def test_samd_greedy_hand_trace():
    a = [[1, 0], [0, 1]]
    b = [[1, 0], [SQ2, SQ2]]
    score, match = samd_greedy(a, b, seed=0)
    assert set(match.pairs) == {(0, 0), (1, 1)}
    assert score == pytest.approx((0.0 + (1.0 - SQ2)) / 2.0, abs=1e-12)


def test_samd_greedy_ge_hungarian(rng):
    for _ in range(60):
        n = int(rng.integers(1, 7))
        a = rng.standard_normal((n, 4))
        b = rng.standard_normal((n, 4))
        g, _ = samd_greedy(a, b, seed=1)
        h, _ = samd_hungarian(a, b, seed=1)
        assert g >= h - 1e-12


def test_samd_hungarian_matches_enumeration(rng):
    for _ in range(40):
        n = int(rng.integers(1, 6))
        a = rng.standard_normal((n, 3))
        b = rng.standard_normal((n, 3))
        got, _ = samd_hungarian(a, b, seed=0)
        want = oracles.assignment_minimum(oracles.dist_matrix(a.tolist(), b.tolist()))
        assert got == pytest.approx(want, abs=1e-12)


def test_samd_sampling_respects_seed(rng):
    a = rng.standard_normal((12, 4))
    b = rng.standard_normal((5, 4))
    s1, m1 = samd_greedy(a, b, seed=3)
    s2, m2 = samd_greedy(a, b, seed=3)
    assert s1 == s2 and m1 == m2
    assert len(m1.pairs) == 5
    rows_used = {r for r, _ in m1.pairs}
    assert rows_used < set(range(12))


# --- invariants (property-based) ---


@settings(max_examples=60, deadline=None)
@given(paired_matrices())
def test_symmetry_and_ordering(pair):
    a, b = pair
    assert apd(a, b) == apd(b, a)
    assert amd(a, b) == amd(b, a)
    assert amd(a, b) <= apd(a, b) + 1e-12


@settings(max_examples=40, deadline=None)
@given(matrices(min_rows=2))
def test_equal_size_chain(a):
    # directional AMD <= greedy SAMD; hungarian SAMD <= APD (equal sizes)
    rng = np.random.default_rng(0)
    b = a + 0.1 * rng.standard_normal(a.shape)
    if np.any(~b.any(axis=1)):
        return
    d = amd_directional(a, b)
    g, _ = samd_greedy(a, b, seed=0)
    h, _ = samd_hungarian(a, b, seed=0)
    assert g >= max(d.a_to_b, d.b_to_a) - 1e-12
    assert h <= apd(a, b) + 1e-12
    assert h <= g + 1e-12


def test_row_shuffle_exact_invariance(rng):
    a = rng.standard_normal((7, 5))
    b = rng.standard_normal((9, 5))
    pa = rng.permutation(7)
    pb = rng.permutation(9)
    assert apd(a[pa], b[pb]) == apd(a, b)
    assert prt(a[pa], b[pb]) == prt(a, b)
    assert amd(a[pa], b[pb]) == amd(a, b)
    # equal sizes: no sampling, matching score exactly invariant
    b_eq = rng.standard_normal((7, 5))
    assert samd_greedy(a[pa], b_eq, seed=0)[0] == samd_greedy(a, b_eq, seed=0)[0]
    assert (
        samd_hungarian(a[pa], b_eq, seed=0)[0]
        == samd_hungarian(a, b_eq, seed=0)[0]
    )


def test_per_vector_scaling_invariance(rng):
    a = rng.standard_normal((6, 5))
    b = rng.standard_normal((8, 5))
    scales_a = rng.uniform(0.2, 5.0, size=(6, 1))
    scales_b = rng.uniform(0.2, 5.0, size=(8, 1))
    sa, sb = a * scales_a, b * scales_b
    assert apd(sa, sb) == pytest.approx(apd(a, b), abs=1e-12)
    assert prt(sa, sb) == pytest.approx(prt(a, b), abs=1e-12)
    assert amd(sa, sb) == pytest.approx(amd(a, b), abs=1e-12)
    d0 = amd_directional(a, b)
    d1 = amd_directional(sa, sb)
    assert d1.a_to_b == pytest.approx(d0.a_to_b, abs=1e-12)
    assert d1.b_to_a == pytest.approx(d0.b_to_a, abs=1e-12)


def test_dimension_mismatch_raises(rng):
    a = rng.standard_normal((3, 4))
    b = rng.standard_normal((3, 5))
    for fn in (apd, prt, amd):
        with pytest.raises(ValidationError):
            fn(a, b)
    with pytest.raises(ValidationError):
        samd_greedy(a, b, seed=0)
