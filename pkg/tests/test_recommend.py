import numpy as np
import pytest

from grembed.cluster import Clustering
from grembed.embed import Embedding
from grembed.errors import ColdUserError
from grembed.recommend import (
    GroundTruth,
    WeightedRecommendations,
    common_recommendations,
    eligible_recommenders,
    load_recommendations,
    nearest_in_cluster,
    random_recommendations,
    rank_votes,
    recommend_all,
    recommend_for_user,
    save_recommendations,
    select_top_users,
)
from grembed.socialgraph import WeightedGraph


def truth(**sets):
    return GroundTruth({user: frozenset(items) for user, items in sets.items()})


@pytest.fixture
def setup():
    """Two clusters on a line: q, n1, n2, n3 near the origin and far1, far2 around x = 10."""
    users = ["far1", "far2", "n1", "n2", "n3", "q"]
    vectors = np.array([[10.0, 0.0], [11.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [0.0, 0.0]])
    embedding = Embedding(method="spectral", vectors=vectors, users=users)
    clustering = Clustering(
        k=2,
        centroids=np.array([[1.5, 0.0], [10.5, 0.0]]),
        assignment=np.array([1, 1, 0, 0, 0, 0]),
        inertia=0.0,
    )
    ground_truth = truth(
        q={"a"},
        n1={"a", "b"},
        n2={"a", "b"},
        n3={"a", "b", "c"},
        far1={"z"},
        far2={"z"},
    )
    return embedding, clustering, ground_truth


# Test that top users are ranked by weighted degree
def test_select_top_users_weighted_degree():
    graph = WeightedGraph.from_edges("abc", [("a", "b", 0.9), ("a", "c", 0.5), ("b", "c", 0.1)])
    assert select_top_users(graph, 3) == ["a", "b", "c"]
    assert select_top_users(graph, 1, among=["b", "c", "zz"]) == ["b"]
    with pytest.raises(ValueError):
        select_top_users(graph, 4)


# Test that eligibility keeps users whose high-rated count lies within the bounds
def test_eligible_recommenders_bounds():
    sizes = {"u3": 3, "u5": 5, "u50": 50, "u51": 51}
    ground_truth = GroundTruth({u: frozenset(f"{u}-{i}" for i in range(n)) for u, n in sizes.items()})
    assert eligible_recommenders(ground_truth, 5, 50) == {"u5", "u50"}


# Test the vote ranking by weight then id
def test_rank_votes_orders_by_weight_then_id():
    ground_truth = truth(
        u=set(), v1={"R1", "R3"}, v2={"R1", "R3", "R2"}, v3={"R3"}, v4={"R3"}, v5={"R3"}
    )
    result = rank_votes("u", ["v1", "v2", "v3", "v4", "v5"], ground_truth)
    assert result.items == [("R3", 5), ("R1", 2), ("R2", 1)]


# Test that neighbors come from the query user's cluster, nearest first
def test_nearest_in_cluster(setup):
    embedding, clustering, _ = setup
    eligible = {"n1", "n2", "n3", "far1", "far2", "q"}
    assert nearest_in_cluster("q", embedding, clustering, eligible, 2) == ["n1", "n2"]
    assert nearest_in_cluster("q", embedding, clustering, eligible, 10) == ["n1", "n2", "n3"]


# Test that the user's own high-rated items are never recommended
def test_recommend_for_user_worked_example(setup):
    embedding, clustering, ground_truth = setup
    result = recommend_for_user("q", embedding, clustering, ground_truth, {"n1", "n2", "n3"}, n_neighbors=3)

    assert result.items[0] == ("b", 3)
    assert "a" not in result.item_ids
    assert result.items == [("b", 3), ("c", 1)]


# Test that a cluster without eligible neighbors yields an empty list
def test_recommend_for_user_isolated_cluster(setup):
    embedding, clustering, ground_truth = setup
    result = recommend_for_user("far1", embedding, clustering, ground_truth, {"n1", "n2"})
    assert len(result) == 0


# Test that a user without an embedding row is refused
def test_recommend_for_user_cold_user(setup):
    embedding, clustering, ground_truth = setup
    with pytest.raises(ColdUserError):
        recommend_for_user("stranger", embedding, clustering, ground_truth, {"n1"})


# Test that recommendations are the same with or without worker threads
def test_recommend_all_workers(setup):
    embedding, clustering, ground_truth = setup
    eligible = {"n1", "n2", "n3", "far2"}
    serial = recommend_all(["q", "far1", "n1"], embedding, clustering, ground_truth, eligible, k=1)
    threaded = recommend_all(["q", "far1", "n1"], embedding, clustering, ground_truth, eligible, k=1, workers=2)

    assert serial == threaded
    assert serial["q"].items == [("b", 3)]
    assert serial["far1"].items == []


# Test the intersection of a list with the truth set
def test_common_recommendations():
    recommended = WeightedRecommendations(user="u", items=[("a", 1), ("b", 1), ("c", 1)])
    assert common_recommendations(recommended, {"b", "c", "d"}) == {"b", "c"}


# Test that malformed recommendation lists are rejected
def test_weighted_recommendations_invariants():
    with pytest.raises(ValueError):
        WeightedRecommendations(user="u", items=[("a", 1), ("a", 2)])
    with pytest.raises(ValueError):
        WeightedRecommendations(user="u", items=[("a", 1), ("b", 2)])
    with pytest.raises(ValueError):
        WeightedRecommendations(user="u", items=[("a", 0)])


# Test that the random baseline is seeded per user and skips the user's own items
def test_random_recommendations():
    universe = [f"r{i}" for i in range(20)]
    own = truth(u1={"r0", "r1"})
    first = random_recommendations(["u1", "u2"], universe, 5, seed=3, exclude=own)
    second = random_recommendations(["u2", "u1"], universe, 5, seed=3, exclude=own)

    assert first == second
    assert len(first["u1"]) == 5
    assert not {"r0", "r1"} & set(first["u1"].item_ids)
    assert first["u1"].item_ids == sorted(first["u1"].item_ids)


# Test that recommendations survive their JSON artifact
def test_recommendations_round_trip(tmp_path):
    recs = {
        "u2": WeightedRecommendations(user="u2", items=[("b", 3), ("a", 1)]),
        "u1": WeightedRecommendations(user="u1", items=[]),
    }
    path = str(tmp_path / "recommendations_hope.json")
    save_recommendations(path, recs)
    assert load_recommendations(path) == recs
