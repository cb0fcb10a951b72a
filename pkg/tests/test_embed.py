from itertools import combinations
from unittest.mock import Mock

import numpy as np
import pytest

from grembed.embed import (
    HOPE,
    Embedding,
    Node2VecParams,
    WalkCorpus,
    generate_walks,
    heat_kernel_weights,
    hope_embed,
    initial_vectors,
    katz_proximity,
    load_embedding,
    next_node,
    node2vec_embed,
    normalized_laplacian,
    save_embedding,
    sgns_loss_and_grads,
    spectral_embed,
    train_sgns,
    transition_weights,
)
from grembed.cluster import elbow_scan
from grembed.errors import BetaTooLargeError, DegenerateEmbeddingError, DisconnectedGraphError
from grembed.numerics import spectral_radius, truncated_svd
from grembed.socialgraph import WeightedGraph


def clique_edges(nodes, weight=1.0):
    return [(a, b, weight) for a, b in combinations(nodes, 2)]


@pytest.fixture
def triangle():
    return WeightedGraph.from_edges("tuv", clique_edges("tuv"))


@pytest.fixture
def barbell():
    left = [f"a{i}" for i in range(5)]
    right = [f"b{i}" for i in range(5)]
    edges = clique_edges(left) + clique_edges(right) + [("a0", "b0", 0.1)]
    return WeightedGraph.from_edges(left + right, edges)


@pytest.fixture
def small_params():
    return Node2VecParams(walks_per_node=10, walk_length=20, window=3, negatives=3, epochs=5)


def corpus_of(walks, n):
    return WalkCorpus(
        walks=[np.array(w, dtype=np.int64) for w in walks],
        n_nodes=n,
        walk_length=max(len(w) for w in walks),
        walks_per_node=1,
        p=1.0,
        q=1.0,
    )


# Test that two disconnected triangles embed as component indicators
def test_spectral_two_components():
    edges = clique_edges("abc") + clique_edges("xyz")
    graph = WeightedGraph.from_edges("abcxyz", edges)
    embedding = spectral_embed(graph, d=1)

    column = embedding.vectors[:, 0]
    np.testing.assert_allclose(column[:3], column[0], atol=1e-10)
    np.testing.assert_allclose(column[3:], column[3], atol=1e-10)


# Test that spectral embedding of K4 returns eigenvectors of the repeated eigenvalue
def test_spectral_k4_residuals():
    graph = WeightedGraph.from_edges("abcd", clique_edges("abcd"))
    embedding = spectral_embed(graph, d=2)
    laplacian = normalized_laplacian(graph).toarray()

    v = embedding.vectors
    np.testing.assert_allclose(v.T @ v, np.eye(2), atol=1e-10)
    np.testing.assert_allclose(laplacian @ v, (4.0 / 3.0) * v, atol=1e-10)


# Test the spectral embedding of a path against a dense eigensolver
def test_spectral_path_matches_dense_oracle():
    graph = WeightedGraph.from_edges("abc", [("a", "b", 1.0), ("b", "c", 1.0)])
    embedding = spectral_embed(graph, d=2)
    _, vectors = np.linalg.eigh(normalized_laplacian(graph).toarray())

    np.testing.assert_allclose(np.abs(embedding.vectors), np.abs(vectors[:, 1:3]), atol=1e-10)


# Test the spectral preconditions on dimension and connectivity
def test_spectral_rejects_bad_input(triangle):
    with pytest.raises(ValueError):
        spectral_embed(triangle, d=3)

    split = WeightedGraph.from_edges("abcd", [("a", "b", 1.0), ("c", "d", 1.0)])
    with pytest.raises(DisconnectedGraphError):
        spectral_embed(split, d=1, strict=True)


# Test that heat-kernel weighting scales each eigenvector column by exp(-t * eigenvalue)
def test_spectral_diffusion_time_scales_columns():
    graph = WeightedGraph.from_edges("abc", [("a", "b", 1.0), ("b", "c", 1.0)])
    plain = spectral_embed(graph, d=2)
    weighted = spectral_embed(graph, d=2, diffusion_time=0.5)

    # Check the path's normalized Laplacian spectrum is 0, 1, 2
    np.testing.assert_allclose(np.linalg.norm(weighted.vectors, axis=0), np.exp([-0.5, -1.0]), atol=1e-10)
    np.testing.assert_allclose(weighted.vectors, plain.vectors * np.exp([-0.5, -1.0]), atol=1e-10)
    np.testing.assert_allclose(heat_kernel_weights(np.array([-1e-15, 2.0]), 1.0), [1.0, np.exp(-2.0)])
    with pytest.raises(ValueError):
        spectral_embed(graph, d=2, diffusion_time=-1.0)


# Test that the heat-weighted spectral embedding of three weakly linked communities has its elbow at three
def test_spectral_diffusion_elbow_finds_planted_communities():
    rng = np.random.default_rng(4)
    users = [f"c{c}_{i:02d}" for c in range(3) for i in range(30)]
    edges = []
    for c in range(3):
        block = users[30 * c : 30 * (c + 1)]
        for i, j in combinations(range(30), 2):
            if j == i + 1 or rng.random() < 0.4:
                edges.append((block[i], block[j], 1.0))
    for a, b in ((0, 1), (1, 2), (2, 0)):
        edges += [(f"c{a}_00", f"c{b}_15", 0.05), (f"c{a}_07", f"c{b}_22", 0.05)]
    graph = WeightedGraph.from_edges(users, edges)

    embedding = spectral_embed(graph, d=10, diffusion_time=10.0)
    scan = elbow_scan(embedding.vectors, k_min=2, k_max=8, seed=0)
    assert scan.k == 3


# Test the return and in-out biases of the second-order transition weights
def test_transition_weights_biases(triangle):
    weights = transition_weights(triangle, 0, 1, p=2.0, q=0.5)
    np.testing.assert_allclose(weights, [0.5, 1.0])

    path = WeightedGraph.from_edges("abc", [("a", "b", 1.0), ("b", "c", 1.0)])
    np.testing.assert_allclose(transition_weights(path, 0, 1, p=1.0, q=0.5), [1.0, 2.0])


# Test that first steps follow the edge weights when p = q = 1
def test_next_node_follows_edge_weights():
    graph = WeightedGraph.from_edges("hxyz", [("h", "x", 0.2), ("h", "y", 0.3), ("h", "z", 0.5)])
    rng = np.random.default_rng(3)
    draws = np.array([next_node(graph, None, 0, 1.0, 1.0, rng) for _ in range(20000)])

    frequencies = np.bincount(draws, minlength=4)[1:] / len(draws)
    np.testing.assert_allclose(frequencies, [0.2, 0.3, 0.5], atol=0.02)


# Test that a walk on a star leaf always moves to the hub
def test_next_node_star_leaf_goes_to_hub():
    graph = WeightedGraph.from_edges("hab", [("h", "a", 0.4), ("h", "b", 0.9)])
    hub, leaf = graph.index_of["h"], graph.index_of["a"]
    rng = np.random.default_rng(0)
    assert {next_node(graph, hub, leaf, 0.5, 2.0, rng) for _ in range(50)} == {hub}


# Test the return probability on a triangle with p=2, q=0.5
def test_next_node_return_probability(triangle):
    rng = np.random.default_rng(7)
    draws = [next_node(triangle, 0, 1, 2.0, 0.5, rng) for _ in range(20000)]
    assert draws.count(0) / len(draws) == pytest.approx(1.0 / 3.0, abs=0.02)


# Test that walks start at their source, have full length and do not depend on the worker count
def test_generate_walks_shape_and_determinism(barbell):
    serial = generate_walks(barbell, walks_per_node=3, walk_length=12, seed=5)
    threaded = generate_walks(barbell, walks_per_node=3, walk_length=12, seed=5, workers=3)

    assert len(serial) == barbell.n * 3
    assert [int(w[0]) for w in serial.walks] == [i for i in range(barbell.n) for _ in range(3)]
    assert all(len(w) == 12 for w in serial.walks)
    for a, b in zip(serial.walks, threaded.walks):
        np.testing.assert_array_equal(a, b)


# Test that every step of a walk follows an edge
def test_generate_walks_follow_edges(barbell):
    corpus = generate_walks(barbell, walks_per_node=2, walk_length=15, p=0.5, q=2.0, seed=1)
    for walk in corpus.walks:
        for a, b in zip(walk[:-1], walk[1:]):
            assert b in barbell.neighbors[a]


# Test the walk parameter checks
@pytest.mark.parametrize("kwargs", [{"p": 0.0}, {"q": -1.0}, {"walk_length": 1}, {"walks_per_node": 0}])
def test_generate_walks_rejects_bad_parameters(triangle, kwargs):
    with pytest.raises(ValueError):
        generate_walks(triangle, **kwargs)


# Test the SGNS gradients against central finite differences
def test_sgns_gradients_match_finite_differences():
    rng = np.random.default_rng(11)
    center, positives, negatives = rng.normal(size=3), rng.normal(size=(2, 3)), rng.normal(size=(2, 4, 3))
    _, g_center, g_pos, g_neg = sgns_loss_and_grads(center, positives, negatives)

    def numeric(array, index):
        h = 1e-6
        plus, minus = array.copy(), array.copy()
        plus[index] += h
        minus[index] -= h
        args_plus = [plus if a is array else a for a in (center, positives, negatives)]
        args_minus = [minus if a is array else a for a in (center, positives, negatives)]
        return (sgns_loss_and_grads(*args_plus)[0] - sgns_loss_and_grads(*args_minus)[0]) / (2 * h)

    for array, grad in ((center, g_center), (positives, g_pos), (negatives, g_neg)):
        for index in np.ndindex(array.shape):
            assert grad[index] == pytest.approx(numeric(array, index), abs=1e-6)


# Test that zero epochs return the initial vectors untouched
def test_train_sgns_zero_epochs_returns_initialization():
    corpus = corpus_of([[0, 1, 2], [2, 1, 0]], 3)
    embedding, losses = train_sgns(corpus, ["a", "b", "c"], 4, epochs=0, seed=9)

    assert losses == []
    np.testing.assert_array_equal(embedding.vectors, initial_vectors(3, 4, 9))


# Test that nodes sharing a context end up closer than nodes that do not
def test_train_sgns_groups_shared_contexts():
    walks = [[0, 4, 1, 4, 0, 4, 1, 4], [2, 5, 3, 5, 2, 5, 3, 5]] * 50
    on_epoch_end = Mock()
    embedding, losses = train_sgns(
        corpus_of(walks, 6), list("abcdef"), 8, window=1, negatives=2, epochs=10, seed=2, on_epoch_end=on_epoch_end
    )

    def cosine(i, j):
        u, v = embedding.vectors[i], embedding.vectors[j]
        return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))

    assert cosine(0, 1) > cosine(0, 2)
    assert cosine(2, 3) > cosine(2, 1)
    assert on_epoch_end.call_count == 10
    assert losses[-1] < losses[0]


# Test the SGNS input checks
def test_train_sgns_rejects_bad_input():
    corpus = corpus_of([[0, 1]], 2)
    with pytest.raises(ValueError):
        train_sgns(corpus, ["a", "b"], 0)
    with pytest.raises(ValueError):
        train_sgns(corpus, ["a"], 2)


# Test that node2vec separates two bridged cliques and is deterministic
def test_node2vec_two_cliques(barbell, small_params):
    first = node2vec_embed(barbell, small_params, d=25, seed=4)
    second = node2vec_embed(barbell, small_params, d=25, seed=4)

    assert first.vectors.shape == (10, 25)
    np.testing.assert_array_equal(first.vectors, second.vectors)

    unit = first.vectors / np.linalg.norm(first.vectors, axis=1, keepdims=True)
    cosines = unit @ unit.T
    intra = np.mean([cosines[i, j] for i, j in combinations(range(5), 2)])
    inter = np.mean([cosines[i, j] for i in range(5) for j in range(5, 10)])
    assert intra > inter


# Test that different seeds give different node2vec embeddings
def test_node2vec_seed_changes_result(barbell, small_params):
    a = node2vec_embed(barbell, small_params, d=4, seed=1)
    b = node2vec_embed(barbell, small_params, d=4, seed=2)
    assert not np.array_equal(a.vectors, b.vectors)


# Test the Katz proximity against a truncated power series
def test_katz_proximity_matches_power_series():
    rng = np.random.default_rng(5)
    w = np.triu(rng.random((6, 6)) * (rng.random((6, 6)) < 0.6), 1)
    w = w + w.T
    beta = 0.5 / spectral_radius(w)

    series = np.zeros_like(w)
    power = np.eye(6)
    for k in range(1, 51):
        power = power @ w
        series += beta**k * power
    np.testing.assert_allclose(katz_proximity(w, beta), series, atol=1e-10)


# Test that HOPE factors the Katz matrix with its leading singular triplets
def test_hope_rank_16_reconstruction():
    rng = np.random.default_rng(8)
    users = [f"u{i:02d}" for i in range(30)]
    weights = {(min(i, (i + 1) % 30), max(i, (i + 1) % 30)): 1.0 for i in range(30)}
    for i, j in rng.integers(0, 30, (40, 2)).tolist():
        if i != j:
            weights.setdefault((min(i, j), max(i, j)), float(rng.uniform(0.1, 1.0)))
    edges = [(users[i], users[j], w) for (i, j), w in weights.items()]
    graph = WeightedGraph.from_edges(users, edges)

    embedding = hope_embed(graph, d=16)
    w = graph.to_dense()
    proximity = katz_proximity(w, 0.5 / spectral_radius(w))
    svd = truncated_svd(proximity, 16)

    u, s, vt = np.linalg.svd(proximity)
    oracle = np.linalg.norm(proximity - (u[:, :16] * s[:16]) @ vt[:16])
    assert np.linalg.norm(proximity - (svd.u * svd.s) @ svd.v.T) <= oracle + 1e-6
    assert embedding.method == HOPE
    np.testing.assert_allclose(embedding.vectors, svd.u * np.sqrt(svd.s), atol=1e-12)


# Test that a node attached only by a vanishing weight makes HOPE degenerate
def test_hope_near_zero_row_is_degenerate():
    graph = WeightedGraph.from_edges("abc", [("a", "b", 1.0), ("b", "c", 1e-12)])
    with pytest.raises(DegenerateEmbeddingError):
        hope_embed(graph, d=1)


# Test that HOPE ignores a uniform weight rescale, so an epsilon-floor graph is not degenerate
def test_hope_ignores_uniform_weight_scale():
    left = [f"a{i}" for i in range(5)]
    right = [f"b{i}" for i in range(5)]
    edges = clique_edges(left) + clique_edges(right) + [("a0", "b0", 0.1)]
    unit = WeightedGraph.from_edges(left + right, edges)
    floor = WeightedGraph.from_edges(left + right, [(a, b, w * 1e-3) for a, b, w in edges])

    expected = hope_embed(unit, d=10).vectors
    actual = hope_embed(floor, d=10).vectors
    np.testing.assert_allclose(actual @ actual.T, expected @ expected.T, atol=1e-8)


# Test that a Katz decay at the convergence bound is refused
def test_hope_beta_too_large(triangle):
    with pytest.raises(BetaTooLargeError):
        hope_embed(triangle, d=2, beta=0.5)


# Test that embeddings round-trip through their CSV artifact
def test_embedding_round_trip(tmp_path):
    embedding = Embedding(method="spectral", vectors=np.array([[1 / 3, -2.5], [1e-17, 4.0]]), users=["a", "b"])
    path = str(tmp_path / "embedding_spectral.csv")
    save_embedding(path, embedding)
    loaded = load_embedding(path, "spectral")

    assert loaded.users == ["a", "b"]
    np.testing.assert_array_equal(loaded.vectors, embedding.vectors)


# Test that validation names the user with a zero row
def test_embedding_validate_zero_row():
    embedding = Embedding(method="hope", vectors=np.array([[1.0, 0.0], [0.0, 0.0]]), users=["a", "b"])
    with pytest.raises(DegenerateEmbeddingError, match="'b'"):
        embedding.validate()
