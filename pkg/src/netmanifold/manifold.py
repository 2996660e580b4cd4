"""One-dimensional isomap: localization graph, geodesic proxies, raw stress.

The embedding pipeline is localization graph -> shortest-path dissimilarities
-> classical-scaling initializer -> iterative majorization of the raw stress
sum_{h,k} (|z_h - z_k| - delta_hk)^2 over all ordered pairs. Embeddings are
determined only up to sign and translation; outputs are centered at zero and
sign-fixed for reproducibility.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import ConnectivityError, ValidationError


@dataclass(frozen=True)
class LocalizationGraph:
    """Undirected neighborhood graph: edge iff point distance < radius."""

    node_count: int
    edges: tuple  # (i, j, weight) with i < j
    radius: float


@dataclass(frozen=True)
class StressTrace:
    """Per-iteration raw stress values; non-increasing by construction."""

    values: tuple
    converged: bool

    @property
    def iterations(self):
        return len(self.values) - 1

    @property
    def final(self):
        return self.values[-1]


def localization_graph(points, radius):
    """Join points strictly closer than `radius`; weights are the distances.

    Ties at exactly the radius are excluded. Zero-weight edges (coincident
    points) are kept.
    """
    if radius <= 0.0:
        raise ValidationError("neighborhood radius must be positive")
    x = np.asarray(points, dtype=float)
    if x.ndim != 2:
        raise ValidationError("expected an (m, D) point array")
    diff = x[:, None, :] - x[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    edges = []
    m = x.shape[0]
    for i in range(m):
        for j in range(i + 1, m):
            if dist[i, j] < radius:
                edges.append((i, j, float(dist[i, j])))
    return LocalizationGraph(node_count=m, edges=tuple(edges), radius=float(radius))


def _to_sparse(graph):
    if graph.edges:
        rows = np.array([e[0] for e in graph.edges] + [e[1] for e in graph.edges])
        cols = np.array([e[1] for e in graph.edges] + [e[0] for e in graph.edges])
        data = np.array([e[2] for e in graph.edges] * 2)
    else:
        rows = cols = np.array([], dtype=int)
        data = np.array([])
    # explicit zero entries stay stored so coincident points remain joined
    return csr_matrix((data, (rows, cols)), shape=(graph.node_count, graph.node_count))


def shortest_path_matrix(graph, l):
    """Shortest-path distances among the first l nodes, routed anywhere.

    Runs Dijkstra from each of the first l sources over the whole graph and
    keeps the l x l block. Every pair among the first l must be connected;
    a disconnected pair raises ConnectivityError naming it.
    """
    if not 1 <= l <= graph.node_count:
        raise ValidationError(f"l={l} must lie in [1, {graph.node_count}]")
    dist = dijkstra(_to_sparse(graph), directed=False, indices=np.arange(l))
    block = dist[:, :l]
    if not np.isfinite(block).all():
        h, k = np.argwhere(~np.isfinite(block))[0]
        raise ConnectivityError(
            f"points {h} and {k} are disconnected in the localization graph; "
            f"increase the neighborhood radius (currently {graph.radius:g})"
        )
    block = (block + block.T) / 2.0
    np.fill_diagonal(block, 0.0)
    return block


def raw_stress(z, delta):
    """Raw stress of a 1-D configuration against a dissimilarity matrix.

    Double sum over all ordered pairs (h, k), diagonal included (it
    contributes zero), with unit weights.
    """
    z = np.asarray(z, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if delta.shape != (z.size, z.size):
        raise ValidationError("dissimilarity matrix shape does not match z")
    gaps = np.abs(z[:, None] - z[None, :])
    return float(((gaps - delta) ** 2).sum())


def cmds_embed(delta):
    """Classical-scaling initializer: top eigenpair of the centered Gram.

    Doubly centers -1/2 * (delta o delta) and scales the top eigenvector by
    the square root of its eigenvalue. For any nonzero hollow dissimilarity
    matrix the top eigenvalue is strictly positive (the centered Gram has
    positive trace), so the degenerate all-zeros branch fires only at
    delta = 0, with a warning.
    """
    delta = np.asarray(delta, dtype=float)
    l = delta.shape[0]
    if l == 1:
        return np.zeros(1)
    centering = np.eye(l) - np.ones((l, l)) / l
    gram = -0.5 * centering @ (delta * delta) @ centering
    eigvals, eigvecs = np.linalg.eigh(gram)
    top = eigvals[-1]
    if top <= 0.0:
        warnings.warn(
            "centered Gram matrix has no positive eigenvalue; "
            "returning the all-zero embedding",
            RuntimeWarning,
            stacklevel=2,
        )
        return np.zeros(l)
    vec = eigvecs[:, -1]
    anchor = int(np.argmax(np.abs(vec)))
    if vec[anchor] < 0:
        vec = -vec
    z = np.sqrt(top) * vec
    return z - z.mean()


def smacof_minimize(delta, z0, tol=1e-8, max_iter=1000):
    """Minimize raw stress by iterative majorization (unit weights, 1-D).

    The update is z+_h = (1/l) sum_k [z_k + delta_hk * sgn(z_h - z_k)] with
    sgn(0) = 0, a monotone-descent step. Stops when the relative stress
    decrease drops below tol or max_iter is reached. If floating point ever
    produces an increase, the previous iterate is kept and iteration stops,
    so the trace is non-increasing unconditionally.

    Returns (embedding centered at zero, StressTrace).
    """
    delta = np.asarray(delta, dtype=float)
    if not np.isfinite(delta).all():
        raise ValidationError("dissimilarities must be finite")
    if tol <= 0.0 or max_iter < 1:
        raise ValidationError("need tol > 0 and max_iter >= 1")
    z = np.asarray(z0, dtype=float)
    if delta.shape != (z.size, z.size):
        raise ValidationError("dissimilarity matrix shape does not match z0")
    z = z - z.mean()
    l = z.size
    stress = raw_stress(z, delta)
    trace = [stress]
    converged = False
    for _ in range(max_iter):
        if stress == 0.0:
            converged = True
            break
        signs = np.sign(z[:, None] - z[None, :])
        z_next = z.mean() + (delta * signs).sum(axis=1) / l
        z_next = z_next - z_next.mean()
        stress_next = raw_stress(z_next, delta)
        if stress_next > stress:
            converged = True
            break
        z = z_next
        trace.append(stress_next)
        if (stress - stress_next) < tol * stress:
            converged = True
            stress = stress_next
            break
        stress = stress_next
    return z, StressTrace(values=tuple(trace), converged=converged)


def isomap_1d(points, radius, l, tol=1e-8, max_iter=1000, full_output=False):
    """Embed the first l of the given points into one dimension.

    Composition: localization graph on all given points, shortest paths from
    the first l sources, classical-scaling initialization, then raw-stress
    majorization. Callers restricting the manifold-learning set pass the
    slice themselves.

    With full_output=True returns (embedding, StressTrace, dissimilarities).
    """
    x = np.asarray(points, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValidationError("expected a non-empty (m, D) point array")
    if not 1 <= l <= x.shape[0]:
        raise ValidationError(f"l={l} must lie in [1, {x.shape[0]}]")
    graph = localization_graph(x, radius)
    delta = shortest_path_matrix(graph, l)
    z0 = cmds_embed(delta)
    z, trace = smacof_minimize(delta, z0, tol=tol, max_iter=max_iter)
    if full_output:
        return z, trace, delta
    return z
