"""Balanced multilayer blockmodel generators and their common-subspace form.

All randomness flows through numpy's counter-based Philox generator so that
every sampled object is a pure function of its seed. Graph k of a collection
is seeded with ``base_seed ^ k`` (k counted from 0).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

# Arclength-parameterized curve: psi(t) = (t/a, t/b, t/b, t/a) with
# a = sqrt(2)/sin(1), b = sqrt(2)/cos(1), so |psi'(t)| = 1 and the geodesic
# between psi(t_h) and psi(t_k) is exactly |t_h - t_k|.
CURVE_A_DIAG_SCALE = math.sqrt(2.0) / math.sin(1.0)
CURVE_A_OFFDIAG_SCALE = math.sqrt(2.0) / math.cos(1.0)

VARIANTS = ("curve-A", "curve-B")

_SEED_LIMIT = 2**64


def _check_seed(seed):
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < _SEED_LIMIT:
        raise ValidationError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    return int(seed)


def build_block_probability(t, variant):
    """Return the 2x2 block probability matrix B(t) for one curve variant.

    curve-A has diagonal t/a and off-diagonal t/b with a = sqrt(2)/sin(1),
    b = sqrt(2)/cos(1); curve-B has diagonal t/2 and off-diagonal t/5.
    t must keep every entry inside [0, 1].
    """
    if variant == "curve-A":
        t_max = CURVE_A_DIAG_SCALE
        diag, off = t / CURVE_A_DIAG_SCALE, t / CURVE_A_OFFDIAG_SCALE
    elif variant == "curve-B":
        t_max = 2.0
        diag, off = t / 2.0, t / 5.0
    else:
        raise ValidationError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    if not (0.0 <= t <= t_max):
        raise ValidationError(
            f"t={t} outside the admissible range [0, {t_max:.6g}] for {variant}"
        )
    return np.array([[diag, off], [off, diag]])


def balanced_membership(n, n_communities):
    """Assign n nodes to equally sized communities, labels counted from 0.

    The first n/K nodes get community 0, the next n/K community 1, and so on.
    K must divide n.
    """
    if n_communities < 1 or n < 1:
        raise ValidationError("need n >= 1 and n_communities >= 1")
    if n % n_communities != 0:
        raise ValidationError(
            f"community count {n_communities} does not divide node count {n}"
        )
    return np.repeat(np.arange(n_communities), n // n_communities)


def membership_onehot(assignment):
    """One-hot membership matrix Z with row sums 1."""
    assignment = np.asarray(assignment)
    n_communities = int(assignment.max()) + 1
    z = np.zeros((assignment.size, n_communities))
    z[np.arange(assignment.size), assignment] = 1.0
    return z


def probability_matrix(assignment, block):
    """Expand block probabilities to the n x n edge probability matrix."""
    assignment = np.asarray(assignment)
    block = np.asarray(block, dtype=float)
    if assignment.max() >= block.shape[0]:
        raise ValidationError("community index out of range for the block matrix")
    if not np.allclose(block, block.T):
        raise ValidationError("block matrix must be symmetric")
    if block.min() < 0.0 or block.max() > 1.0:
        raise ValidationError("block probabilities must lie in [0, 1]")
    return block[np.ix_(assignment, assignment)]


def sample_adjacency(p, seed):
    """Sample a symmetric hollow binary adjacency matrix from P.

    Independent Bernoulli draws on the strict upper triangle are mirrored
    below; the diagonal is forced to zero even when P has a nonzero diagonal.
    Deterministic given the seed (Philox).
    """
    p = np.asarray(p, dtype=float)
    n = p.shape[0]
    if p.shape != (n, n):
        raise ValidationError("probability matrix must be square")
    if p.min() < 0.0 or p.max() > 1.0:
        raise ValidationError("edge probabilities must lie in [0, 1]")
    rng = np.random.Generator(np.random.Philox(_check_seed(seed)))
    iu = np.triu_indices(n, k=1)
    draws = (rng.random(iu[0].size) < p[iu]).astype(float)
    a = np.zeros((n, n))
    a[iu] = draws
    a += a.T
    return a


@dataclass(frozen=True)
class CosieParameters:
    """Shared subspace plus per-graph score matrices (V; R^(1..N); rho)."""

    subspace: np.ndarray
    scores: tuple
    sparsity: float = 1.0

    def __post_init__(self):
        v = self.subspace
        gram_err = np.abs(v.T @ v - np.eye(v.shape[1])).max()
        if gram_err >= 1e-10:
            raise ValidationError(f"subspace columns not orthonormal (error {gram_err:.2e})")
        if not 0.0 < self.sparsity <= 1.0:
            raise ValidationError("sparsity must lie in (0, 1]")


def msbm_to_cosie(assignment, blocks, sparsity=1.0):
    """Map blockmodel parameters to the common-subspace form.

    V = Z (ZᵀZ)^{-1/2} and R^(k) = (ZᵀZ)^{1/2} B^(k) (ZᵀZ)^{1/2}. With
    balanced communities of size c the entries use sqrt(c_i * c_j) directly,
    so R = c B holds bitwise and the scaled score R/n equals B/K exactly
    (note the 1/K factor relative to B itself).
    """
    assignment = np.asarray(assignment)
    counts = np.bincount(assignment)
    if (counts == 0).any():
        raise ValidationError("every community must be non-empty")
    root_outer = np.sqrt(np.outer(counts, counts).astype(float))
    scores = []
    for block in blocks:
        block = np.asarray(block, dtype=float)
        if block.shape != (counts.size, counts.size):
            raise ValidationError("block matrix shape does not match community count")
        scores.append(root_outer * block)
    z = membership_onehot(assignment)
    subspace = z / np.sqrt(counts.astype(float))[assignment][:, None]
    return CosieParameters(subspace=subspace, scores=tuple(scores), sparsity=sparsity)


@dataclass(frozen=True)
class GraphCollection:
    """Ordered graphs on a shared node set, responses on the first s.

    true_regressors holds the generating t's in simulations; real data has
    none. Adjacency matrices are real-valued in noiseless mode, binary
    otherwise.
    """

    graphs: tuple
    responses: tuple = None
    true_regressors: tuple = None
    noiseless: bool = field(default=False, compare=False)

    def __post_init__(self):
        if len(self.graphs) == 0:
            raise ValidationError("a collection needs at least one graph")
        n = self.graphs[0].shape[0]
        for a in self.graphs:
            if a.shape != (n, n):
                raise ValidationError("all graphs must share the node set")
        if self.responses is not None:
            if len(self.responses) > len(self.graphs):
                raise ValidationError("more responses than graphs")
            if not all(math.isfinite(y) for y in self.responses):
                raise ValidationError("responses must be finite")

    @property
    def node_count(self):
        return self.graphs[0].shape[0]

    @property
    def n_graphs(self):
        return len(self.graphs)

    @property
    def n_labeled(self):
        return 0 if self.responses is None else len(self.responses)


def _block_sequence(ts, variant):
    return [build_block_probability(t, variant) for t in ts]


def sample_collection(ts, n, variant, base_seed, responses=None):
    """Sample one graph per t from the balanced 2-block model.

    Graph k is seeded with base_seed ^ k, so collections are reproducible
    and individual graphs can be re-sampled in isolation.
    """
    base_seed = _check_seed(base_seed)
    assignment = balanced_membership(n, 2)
    graphs = []
    for k, block in enumerate(_block_sequence(ts, variant)):
        p = probability_matrix(assignment, block)
        graphs.append(sample_adjacency(p, base_seed ^ k))
    return GraphCollection(
        graphs=tuple(graphs),
        responses=None if responses is None else tuple(float(y) for y in responses),
        true_regressors=tuple(float(t) for t in ts),
    )


def noiseless_collection(ts, n, variant, responses=None):
    """Deterministic collection with A^(k) := P^(k) (real-valued mode).

    P keeps its diagonal: hollowing would break the exact rank-d structure
    that makes noiseless score recovery exact. Pair with a sparsity override
    of 1.0 when embedding.
    """
    assignment = balanced_membership(n, 2)
    graphs = tuple(
        probability_matrix(assignment, block) for block in _block_sequence(ts, variant)
    )
    return GraphCollection(
        graphs=graphs,
        responses=None if responses is None else tuple(float(y) for y in responses),
        true_regressors=tuple(float(t) for t in ts),
        noiseless=True,
    )
