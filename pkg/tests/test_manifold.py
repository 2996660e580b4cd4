import itertools

import numpy as np
import pytest

from netmanifold import (
    ConnectivityError,
    ValidationError,
    cmds_embed,
    isomap_1d,
    localization_graph,
    raw_stress,
    shortest_path_matrix,
    smacof_minimize,
)
from netmanifold.graphs import CURVE_A_DIAG_SCALE, CURVE_A_OFFDIAG_SCALE


def _edge_set(graph):
    return {(i, j) for i, j, _ in graph.edges}


def _brute_force_distances(points, radius, l):
    """All-simple-paths shortest distances; exponential, fine for <= 7 nodes."""
    x = np.asarray(points, dtype=float)
    m = x.shape[0]
    dist = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=-1))
    adjacent = dist < radius
    out = np.full((l, l), np.inf)
    np.fill_diagonal(out, 0.0)
    nodes = list(range(m))
    for h in range(l):
        for k in range(l):
            if h == k:
                continue
            rest = [v for v in nodes if v not in (h, k)]
            for extra in range(len(rest) + 1):
                for middle in itertools.permutations(rest, extra):
                    path = (h, *middle, k)
                    if all(adjacent[a, b] for a, b in zip(path, path[1:])):
                        length = sum(dist[a, b] for a, b in zip(path, path[1:]))
                        out[h, k] = min(out[h, k], length)
    return out


def test_localization_graph_extremes():
    points = np.array([[0.0], [1.0], [2.0]])
    assert len(localization_graph(points, 10.0).edges) == 3  # complete
    assert len(localization_graph(points, 0.5).edges) == 0


def test_localization_graph_path():
    points = np.array([[0.0], [1.0], [2.0]])
    graph = localization_graph(points, 1.5)
    assert _edge_set(graph) == {(0, 1), (1, 2)}
    assert all(w == 1.0 for _, _, w in graph.edges)


def test_localization_graph_strict_inequality():
    # distance exactly equal to the radius is excluded
    points = np.array([[0.0], [1.0]])
    assert len(localization_graph(points, 1.0).edges) == 0
    assert len(localization_graph(points, 1.0 + 1e-9).edges) == 1


def test_localization_graph_keeps_coincident_points_joined():
    points = np.array([[0.5], [0.5], [3.0]])
    graph = localization_graph(points, 1.0)
    assert (0, 1, 0.0) in graph.edges
    delta = shortest_path_matrix(graph, 2)
    assert delta[0, 1] == 0.0


def test_localization_graph_validation():
    with pytest.raises(ValidationError):
        localization_graph(np.zeros((3, 1)), 0.0)
    with pytest.raises(ValidationError):
        localization_graph(np.zeros(3), 1.0)


def test_shortest_path_unit_path_graph():
    points = np.array([[0.0], [1.0], [2.0]])
    graph = localization_graph(points, 1.5)
    delta = shortest_path_matrix(graph, 3)
    assert delta[0, 2] == 2.0
    assert np.array_equal(delta, delta.T)
    assert np.array_equal(np.diag(delta), np.zeros(3))


def test_shortest_path_disconnected_names_radius():
    graph = localization_graph(np.array([[0.0], [5.0]]), 1.0)
    with pytest.raises(ConnectivityError, match="radius \\(currently 1\\)"):
        shortest_path_matrix(graph, 2)


def test_shortest_path_routes_through_non_source_nodes():
    # sources 0 and 1 are far apart; the only route passes node 2
    points = np.array([[0.0], [2.0], [1.0]])
    graph = localization_graph(points, 1.5)
    delta = shortest_path_matrix(graph, 2)
    assert delta[0, 1] == 2.0


def test_shortest_path_arc_exceeds_chord():
    """Chord excluded by the radius: path length strictly beats it, and the
    Dijkstra result matches a brute-force enumeration."""
    angles = np.linspace(0.0, np.pi / 2.0, 4)
    points = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    chord = np.linalg.norm(points[0] - points[3])
    radius = 0.75  # adjacent gaps ~0.52, chord ~1.41
    graph = localization_graph(points, radius)
    delta = shortest_path_matrix(graph, 4)
    assert delta[0, 3] > chord
    brute = _brute_force_distances(points, radius, 4)
    assert np.abs(delta - brute).max() < 1e-12


def test_shortest_path_matches_brute_force_random_instances():
    rng = np.random.default_rng(17)
    for trial in range(20):
        points = rng.uniform(0.0, 1.0, size=(6, 2))
        radius = float(rng.uniform(0.4, 1.2))
        graph = localization_graph(points, radius)
        brute = _brute_force_distances(points, radius, 6)
        if not np.isfinite(brute).all():
            with pytest.raises(ConnectivityError):
                shortest_path_matrix(graph, 6)
            continue
        delta = shortest_path_matrix(graph, 6)
        assert np.abs(delta - brute).max() < 1e-12


def test_raw_stress_hand_values():
    assert raw_stress(np.zeros(1), np.zeros((1, 1))) == 0.0
    delta = np.array([[0.0, 2.0], [2.0, 0.0]])
    assert raw_stress(np.zeros(2), delta) == 8.0  # ordered pairs, both (h,k) and (k,h)


def test_raw_stress_gauge_freedom():
    rng = np.random.default_rng(2)
    z = rng.standard_normal(7)
    delta = np.abs(rng.standard_normal((7, 7)))
    delta = (delta + delta.T) / 2.0
    np.fill_diagonal(delta, 0.0)
    assert raw_stress(-z, delta) == raw_stress(z, delta)  # exact: negation is exact
    assert raw_stress(z + 3.7, delta) == pytest.approx(raw_stress(z, delta), rel=1e-12)


def test_cmds_two_points():
    delta = np.array([[0.0, 4.0], [4.0, 0.0]])
    z = cmds_embed(delta)
    assert sorted(z.tolist()) == pytest.approx([-2.0, 2.0], abs=1e-12)


def test_cmds_zero_matrix_warns():
    with pytest.warns(RuntimeWarning, match="no positive eigenvalue"):
        z = cmds_embed(np.zeros((3, 3)))
    assert np.array_equal(z, np.zeros(3))
    assert np.array_equal(cmds_embed(np.zeros((1, 1))), np.zeros(1))


def test_cmds_recovers_line_configuration():
    truth = np.array([0.0, 1.0, 3.0, 6.0])
    delta = np.abs(truth[:, None] - truth[None, :])
    z = cmds_embed(delta)
    est = np.abs(z[:, None] - z[None, :])
    assert np.abs(est - delta).max() < 1e-10


def test_smacof_recovers_realizable_line():
    rng = np.random.default_rng(23)
    truth = np.sort(rng.uniform(0.0, 2.0, 5))
    delta = np.abs(truth[:, None] - truth[None, :])
    z0 = truth - truth.mean() + rng.normal(0.0, 0.01, 5)
    z, trace = smacof_minimize(delta, z0)
    est = np.abs(z[:, None] - z[None, :])
    assert np.abs(est - delta).max() < 1e-6
    assert trace.final < 1e-10
    assert trace.converged


def test_smacof_trace_non_increasing():
    rng = np.random.default_rng(31)
    for _ in range(25):
        l = int(rng.integers(2, 21))
        delta = np.abs(rng.standard_normal((l, l)))
        delta = (delta + delta.T) / 2.0
        np.fill_diagonal(delta, 0.0)
        z, trace = smacof_minimize(delta, cmds_embed(delta))
        values = np.array(trace.values)
        assert (np.diff(values) <= 0.0).all()
        assert values[-1] == pytest.approx(raw_stress(z, delta), rel=1e-12)


def test_smacof_zero_stress_start():
    truth = np.array([-1.0, 0.0, 1.0])
    delta = np.abs(truth[:, None] - truth[None, :])
    z, trace = smacof_minimize(delta, truth)
    assert trace.final == 0.0
    assert trace.iterations == 0
    assert trace.converged


def test_smacof_validation():
    delta = np.zeros((2, 2))
    with pytest.raises(ValidationError):
        smacof_minimize(delta, np.zeros(3))
    with pytest.raises(ValidationError):
        smacof_minimize(np.array([[0.0, np.inf], [np.inf, 0.0]]), np.zeros(2))
    with pytest.raises(ValidationError):
        smacof_minimize(delta, np.zeros(2), tol=0.0)


def test_isomap_single_source():
    z = isomap_1d(np.array([[0.0], [1.0]]), 5.0, 1)
    assert np.array_equal(z, np.zeros(1))


def test_isomap_straight_segment_exact():
    """Points on a segment with the radius above the max gap: chords exact."""
    truth = np.linspace(0.0, 3.0, 7)
    points = np.stack([truth, 2.0 * truth], axis=1)  # a line in R^2
    gaps = np.linalg.norm(points[1] - points[0])
    z, trace, delta = isomap_1d(points, gaps * 1.1, 7, full_output=True)
    chord = np.sqrt(5.0) * np.abs(truth[:, None] - truth[None, :])
    assert np.abs(np.abs(z[:, None] - z[None, :]) - chord).max() < 1e-6
    assert np.abs(delta - chord).max() < 1e-9


def test_isomap_curve_a_geodesic_fidelity_small():
    """Desk-size version of the geodesic-fidelity acceptance check."""
    ts = np.concatenate([np.linspace(0.25, 1.0, 6), np.linspace(0.25, 1.0, 54)])
    direction = np.array(
        [
            1.0 / CURVE_A_DIAG_SCALE,
            1.0 / CURVE_A_OFFDIAG_SCALE,
            1.0 / CURVE_A_OFFDIAG_SCALE,
            1.0 / CURVE_A_DIAG_SCALE,
        ]
    )
    points = ts[:, None] * direction[None, :]
    z, trace, delta = isomap_1d(points, 0.1, 6, full_output=True)
    geodesic = np.abs(ts[:6, None] - ts[None, :6])
    off = ~np.eye(6, dtype=bool)
    assert (np.abs(delta - geodesic)[off] <= 0.05 * geodesic[off]).all()
    est = np.abs(z[:, None] - z[None, :])
    assert np.abs(est - geodesic).max() < 0.01


def test_isomap_validation():
    points = np.zeros((3, 2))
    with pytest.raises(ValidationError):
        isomap_1d(points, 1.0, 4)
    with pytest.raises(ValidationError):
        isomap_1d(np.zeros((0, 2)), 1.0, 1)
