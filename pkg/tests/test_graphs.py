import numpy as np
import pytest

from netmanifold import (
    CosieParameters,
    GraphCollection,
    ValidationError,
    balanced_membership,
    build_block_probability,
    msbm_to_cosie,
    noiseless_collection,
    probability_matrix,
    sample_adjacency,
    sample_collection,
)
from netmanifold.graphs import (
    CURVE_A_DIAG_SCALE,
    CURVE_A_OFFDIAG_SCALE,
    membership_onehot,
)


def test_curve_a_block_at_half():
    # a = sqrt(2)/sin(1), b = sqrt(2)/cos(1); values frozen from a pilot run
    block = build_block_probability(0.5, "curve-A")
    assert block[0, 0] == pytest.approx(0.29751, abs=1e-5)
    assert block[0, 1] == pytest.approx(0.19103, abs=1e-5)
    assert block[0, 0] == 0.5 / CURVE_A_DIAG_SCALE
    assert block[0, 1] == 0.5 / CURVE_A_OFFDIAG_SCALE
    assert np.array_equal(block, block.T)


def test_curve_a_is_arclength_parameterized():
    # the whole point of the a, b constants: |psi'(t)| = 1
    direction = np.array(
        [
            1.0 / CURVE_A_DIAG_SCALE,
            1.0 / CURVE_A_OFFDIAG_SCALE,
            1.0 / CURVE_A_OFFDIAG_SCALE,
            1.0 / CURVE_A_DIAG_SCALE,
        ]
    )
    assert np.linalg.norm(direction) == pytest.approx(1.0, abs=1e-14)


def test_curve_b_block():
    block = build_block_probability(1.0, "curve-B")
    assert block[0, 0] == 0.5
    assert block[0, 1] == 0.2


def test_block_probability_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        build_block_probability(0.5, "curve-C")
    with pytest.raises(ValidationError):
        build_block_probability(-0.1, "curve-A")
    with pytest.raises(ValidationError):
        build_block_probability(2.5, "curve-B")
    # curve-A admits t up to a = sqrt(2)/sin(1) ~ 1.68
    build_block_probability(1.68, "curve-A")
    with pytest.raises(ValidationError):
        build_block_probability(1.69, "curve-A")


def test_balanced_membership_and_onehot():
    assignment = balanced_membership(6, 2)
    assert assignment.tolist() == [0, 0, 0, 1, 1, 1]
    z = membership_onehot(assignment)
    assert np.array_equal(z.T @ z, np.diag([3.0, 3.0]))
    assert np.array_equal(z.sum(axis=1), np.ones(6))


def test_balanced_membership_requires_divisibility():
    with pytest.raises(ValidationError):
        balanced_membership(7, 2)
    with pytest.raises(ValidationError):
        balanced_membership(0, 2)


def test_probability_matrix_block_expansion():
    block = np.array([[0.5, 0.2], [0.2, 0.5]])
    p = probability_matrix([0, 0, 1, 1], block)
    expected = np.array(
        [
            [0.5, 0.5, 0.2, 0.2],
            [0.5, 0.5, 0.2, 0.2],
            [0.2, 0.2, 0.5, 0.5],
            [0.2, 0.2, 0.5, 0.5],
        ]
    )
    assert np.array_equal(p, expected)


def test_probability_matrix_validation():
    with pytest.raises(ValidationError):
        probability_matrix([0, 1, 2], np.eye(2) * 0.5)
    with pytest.raises(ValidationError):
        probability_matrix([0, 1], np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(ValidationError):
        probability_matrix([0, 1], np.array([[0.5, 1.2], [1.2, 0.5]]))


def test_sample_adjacency_extremes():
    assert np.array_equal(sample_adjacency(np.zeros((5, 5)), 1), np.zeros((5, 5)))
    complete = np.ones((5, 5)) - np.eye(5)
    assert np.array_equal(sample_adjacency(complete, 1), complete)


def test_sample_adjacency_density_concentration():
    """Edge density of P = 0.3 graphs concentrates (binomial, 4 sigma)."""
    n = 1000
    p = np.full((n, n), 0.3)
    a = sample_adjacency(p, 12345)
    m = n * (n - 1) / 2
    density = a[np.triu_indices(n, 1)].mean()
    assert abs(density - 0.3) < 4.0 * np.sqrt(0.3 * 0.7 / m)


def test_sample_adjacency_invariants_and_determinism():
    p = probability_matrix(balanced_membership(20, 2), np.array([[0.8, 0.3], [0.3, 0.8]]))
    a = sample_adjacency(p, 77)
    assert np.array_equal(a, a.T)
    assert np.array_equal(np.diag(a), np.zeros(20))
    assert set(np.unique(a)) <= {0.0, 1.0}
    assert np.array_equal(a, sample_adjacency(p, 77))
    assert not np.array_equal(a, sample_adjacency(p, 78))


def test_sample_adjacency_seed_validation():
    with pytest.raises(ValidationError):
        sample_adjacency(np.zeros((2, 2)), -1)
    with pytest.raises(ValidationError):
        sample_adjacency(np.zeros((2, 2)), 2**64)
    with pytest.raises(ValidationError):
        sample_adjacency(np.zeros((2, 2)), 1.5)


def test_msbm_to_cosie_balanced_identity():
    # n=4, K=2, B = 0.5 I: (Z'Z)^{1/2} B (Z'Z)^{1/2} = 2B = I
    params = msbm_to_cosie([0, 0, 1, 1], [0.5 * np.eye(2)])
    assert np.array_equal(params.scores[0], np.eye(2))
    v = params.subspace
    assert np.abs(v.T @ v - np.eye(2)).max() < 1e-15


def test_msbm_to_cosie_reconstructs_probability_matrix():
    assignment = balanced_membership(10, 2)
    block = build_block_probability(0.7, "curve-A")
    params = msbm_to_cosie(assignment, [block])
    p = probability_matrix(assignment, block)
    v = params.subspace
    assert np.abs(v @ params.scores[0] @ v.T - p).max() < 1e-12


def test_msbm_to_cosie_scaled_scores_are_half_the_block():
    """Balanced 2-block: R/n = B/2 holds bitwise (integer sqrt products)."""
    assignment = balanced_membership(8, 2)
    block = build_block_probability(0.5, "curve-B")
    params = msbm_to_cosie(assignment, [block])
    assert np.array_equal(params.scores[0] / 8.0, block / 2.0)


def test_msbm_to_cosie_rejects_empty_community():
    with pytest.raises(ValidationError):
        msbm_to_cosie([0, 0, 2, 2], [np.eye(3) * 0.5])


def test_cosie_parameters_checks_orthonormality():
    with pytest.raises(ValidationError):
        CosieParameters(subspace=np.ones((4, 2)), scores=(np.eye(2),))


def test_graph_collection_validation():
    a = np.zeros((4, 4))
    with pytest.raises(ValidationError):
        GraphCollection(graphs=())
    with pytest.raises(ValidationError):
        GraphCollection(graphs=(a, np.zeros((5, 5))))
    with pytest.raises(ValidationError):
        GraphCollection(graphs=(a,), responses=(1.0, 2.0))
    with pytest.raises(ValidationError):
        GraphCollection(graphs=(a,), responses=(float("nan"),))
    coll = GraphCollection(graphs=(a, a), responses=(1.0,))
    assert coll.node_count == 4
    assert coll.n_graphs == 2
    assert coll.n_labeled == 1
    assert GraphCollection(graphs=(a,)).n_labeled == 0


def test_sample_collection_per_graph_seeding():
    """Graph k is exactly the base_seed ^ k sample; graphs are re-derivable."""
    ts = [0.4, 0.9, 0.6]
    coll = sample_collection(ts, 10, "curve-B", 100, responses=[1.0, 2.0])
    assignment = balanced_membership(10, 2)
    for k, t in enumerate(ts):
        p = probability_matrix(assignment, build_block_probability(t, "curve-B"))
        assert np.array_equal(coll.graphs[k], sample_adjacency(p, 100 ^ k))
    assert coll.responses == (1.0, 2.0)
    assert coll.true_regressors == (0.4, 0.9, 0.6)
    assert not coll.noiseless


def test_sample_collection_odd_n_rejected():
    with pytest.raises(ValidationError):
        sample_collection([0.5], 9, "curve-A", 1)


def test_noiseless_collection_keeps_diagonal():
    coll = noiseless_collection([0.5, 0.8], 6, "curve-A")
    assert coll.noiseless
    block = build_block_probability(0.5, "curve-A")
    assert coll.graphs[0][0, 0] == block[0, 0]  # not hollowed
    assert np.array_equal(
        coll.graphs[0], probability_matrix(balanced_membership(6, 2), block)
    )
