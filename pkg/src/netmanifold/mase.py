"""Multiple adjacency spectral embedding with sparsity correction.

Estimates the shared invariant subspace of a graph collection and projects
each adjacency matrix onto it, yielding per-graph score matrices whose
scaled vectorizations are the manifold-point estimates consumed by the
isomap stage.

Subspace bases are defined only up to orthogonal rotation; every consumer in
this package uses rotation-invariant functionals (pairwise Frobenius
distances), and outputs are made reproducible by a sign convention on
singular vectors.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SparsityError, ValidationError

# Dense symmetric eigendecomposition up to this size; deterministic subspace
# iteration beyond it.
DENSE_MAX_N = 3000

_TIE_RTOL = 1e-10


def canonical_signs(basis):
    """Flip each column so its largest-absolute entry is positive.

    Ties go to the lowest index (argmax picks the first maximum). Returns a
    copy only when a flip happens.
    """
    basis = np.array(basis, copy=True)
    for j in range(basis.shape[1]):
        col = basis[:, j]
        anchor = int(np.argmax(np.abs(col)))
        if col[anchor] < 0:
            basis[:, j] = -col
    return basis


def _warn_on_tie(singular_values, d):
    if len(singular_values) <= d:
        return
    gap = singular_values[d - 1] - singular_values[d]
    if gap <= _TIE_RTOL * max(singular_values[0], 1.0):
        warnings.warn(
            f"singular values {d} and {d + 1} are tied "
            f"(gap {gap:.2e}); the rank-{d} subspace is ill-defined",
            RuntimeWarning,
            stacklevel=3,
        )


def _subspace_iteration(a, k, max_iter=1000, tol=1e-13):
    """Deterministic block iteration on A @ A with a Rayleigh-Ritz finish.

    Iterating on A squared targets the top-k eigenvalues of A by modulus;
    the Rayleigh-Ritz step on A itself recovers signed eigenvalues. The
    starting block is drawn from a fixed Philox stream, so results are
    reproducible.
    """
    n = a.shape[0]
    rng = np.random.Generator(np.random.Philox(0x5EED5EED))
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    for _ in range(max_iter):
        q_next, _ = np.linalg.qr(a @ (a @ q))
        # subspace distance via the cross Gram: ||P_new - P_old||_F^2 = 2k - 2||QᵀQ'||_F^2
        overlap = np.linalg.norm(q.T @ q_next) ** 2
        q = q_next
        if 2.0 * (k - overlap) < tol:
            break
    ritz = q.T @ a @ q
    theta, s = np.linalg.eigh((ritz + ritz.T) / 2.0)
    order = np.argsort(-np.abs(theta), kind="stable")
    return np.abs(theta)[order], q @ s[:, order]


def top_left_singular_vectors(a, d, method="auto"):
    """Top-d left singular vectors of a real symmetric matrix.

    Parameters
    ----------
    a : (n, n) array_like
        Symmetric matrix. Left singular vectors coincide with eigenvectors
        ordered by absolute eigenvalue.
    d : int
        Subspace dimension, 1 <= d <= n.
    method : {"auto", "dense", "iterative"}
        "auto" picks dense eigendecomposition for n <= 3000 and subspace
        iteration above. Both routes are deterministic.

    Returns
    -------
    (n, d) ndarray with orthonormal, sign-canonicalized columns.

    Warns when the singular values at the d/(d+1) boundary are tied, in which
    case the subspace is ill-defined.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise ValidationError("expected a square matrix")
    if not 1 <= d <= n:
        raise ValidationError(f"d={d} must satisfy 1 <= d <= n={n}")
    if method == "auto":
        method = "dense" if n <= DENSE_MAX_N else "iterative"
    if method == "dense":
        eigvals, eigvecs = np.linalg.eigh(a)
        order = np.argsort(-np.abs(eigvals), kind="stable")
        svals = np.abs(eigvals)[order]
        basis = eigvecs[:, order[:d]]
    elif method == "iterative":
        k = min(d + 1, n)
        svals, vecs = _subspace_iteration(a, k)
        basis = vecs[:, :d]
    else:
        raise ValidationError(f"unknown method {method!r}")
    _warn_on_tie(svals, d)
    return canonical_signs(basis)


def joint_subspace(bases, d):
    """Top-d left singular vectors of the column-wise basis concatenation."""
    if len(bases) == 0:
        raise ValidationError("need at least one basis")
    concat = np.hstack(bases)
    if d > min(concat.shape):
        raise ValidationError(f"d={d} exceeds the concatenation rank bound")
    u, svals, _ = np.linalg.svd(concat, full_matrices=False)
    _warn_on_tie(svals, d)
    return canonical_signs(u[:, :d])


def estimate_sparsity(collection):
    """Average edge density over all graphs: total edges / (N * C(n, 2))."""
    n = collection.node_count
    if n < 2:
        raise ValidationError("sparsity needs n >= 2")
    iu = np.triu_indices(n, k=1)
    total = sum(float(a[iu].sum()) for a in collection.graphs)
    return total / (collection.n_graphs * iu[0].size)


def project_scores(graphs, basis, sparsity):
    """Score matrices (1/rho) V̂ᵀ A^(k) V̂ for one fixed basis.

    The product is symmetrized explicitly; floating point leaves ~1e-11
    asymmetry at n ~ 1000 otherwise.
    """
    if sparsity <= 0.0:
        raise SparsityError("sparsity must be positive to scale scores")
    out = []
    for a in graphs:
        m = basis.T @ a @ basis / sparsity
        out.append((m + m.T) / 2.0)
    return out


def sparse_mase(collection, d, per_graph_basis=False, sparsity=None):
    """Estimate score matrices for every graph in the collection.

    Parameters
    ----------
    collection : GraphCollection
    d : int
        Embedding dimension.
    per_graph_basis : bool
        When False (default) project every graph onto the joint subspace
        estimated from all per-graph bases. When True project each graph
        onto its own basis instead; the two coincide when all graphs share
        an exact invariant subspace.
    sparsity : float or None
        Override for the sparsity estimate. Pass 1.0 in noiseless mode,
        where the estimator would return the mean of P and uniformly rescale
        every score. None estimates from the data.

    Returns
    -------
    (scores, sparsity) : list of (d, d) symmetric ndarrays, and the sparsity
    actually used.
    """
    n = collection.node_count
    if d > n:
        raise ValidationError(f"d={d} exceeds node count {n}")
    if sparsity is None:
        rho = estimate_sparsity(collection)
        if rho <= 0.0:
            raise SparsityError("all graphs are empty; sparsity estimate is zero")
    else:
        rho = float(sparsity)
        if not 0.0 < rho <= 1.0:
            raise ValidationError("sparsity override must lie in (0, 1]")
    bases = [top_left_singular_vectors(a, d) for a in collection.graphs]
    if per_graph_basis:
        scores = [
            project_scores([a], basis, rho)[0]
            for a, basis in zip(collection.graphs, bases)
        ]
    else:
        basis = joint_subspace(bases, d)
        scores = project_scores(collection.graphs, basis, rho)
    return scores, rho


@dataclass(frozen=True)
class ScaledScorePoint:
    """Vectorized scaled score matrix Q̂ = R̂/n.

    coords is the full column-stacked vec(Q̂) of length d*d; upper_triangle
    reads the upper triangle (diagonal included) row by row, d*(d+1)/2
    entries, the feature used for the real-data workflow.
    """

    coords: np.ndarray
    upper_triangle: np.ndarray

    @property
    def dimension(self):
        return int(round(np.sqrt(self.coords.size)))


def scaled_score_points(scores, n):
    """Scale score matrices by 1/n and vectorize them."""
    if n < 1:
        raise ValidationError("n must be positive")
    points = []
    for r in scores:
        q = np.asarray(r, dtype=float) / n
        d = q.shape[0]
        points.append(
            ScaledScorePoint(
                coords=np.ravel(q, order="F"),
                upper_triangle=q[np.triu_indices(d)],
            )
        )
    return points


def coords_matrix(points, upper_triangle=False):
    """Stack score points into an (N, D) array for the manifold stage."""
    if upper_triangle:
        return np.array([p.upper_triangle for p in points])
    return np.array([p.coords for p in points])


def pairwise_frobenius(points):
    """Euclidean distances between score points (= Frobenius on matrices)."""
    x = points if isinstance(points, np.ndarray) else coords_matrix(points)
    diff = x[:, None, :] - x[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    dist = (dist + dist.T) / 2.0
    np.fill_diagonal(dist, 0.0)
    return dist
