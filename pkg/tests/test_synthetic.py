import json

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from grembed.cli import SyntheticSpec, generate_synthetic, sample_synthetic
from grembed.errors import ConfigValidationError
from grembed.ingest import parse_dataset


@pytest.fixture
def spec():
    return SyntheticSpec(
        communities=3, users_per_community=15, restaurants_per_community=10, intra_friend=0.5, inter_friend=0.0, seed=4
    )


# Test that without cross-community friendships every community is its own component
def test_components_match_communities(spec):
    dataset = sample_synthetic(spec)
    users = sorted(dataset.friends)
    index = {u: i for i, u in enumerate(users)}
    rows = [index[u] for u in users for _ in dataset.friends[u]]
    cols = [index[f] for u in users for f in dataset.friends[u]]
    adjacency = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(users), len(users)))

    components, labels = connected_components(adjacency, directed=False)
    assert components == spec.communities
    per_community = {}
    for u in users:
        per_community.setdefault(dataset.user_community[u], set()).add(int(labels[index[u]]))
    assert all(len(found) == 1 for found in per_community.values())


# Test that users like restaurants of their own community far more often
def test_tastes_follow_communities(spec):
    dataset = sample_synthetic(spec)
    likes = [r for r in dataset.reviews if r["stars"] == 5]
    own = sum(dataset.user_community[r["user_id"]] == dataset.restaurant_community[r["business_id"]] for r in likes)
    assert own > 0.8 * len(likes)


# Test that the same settings give the same sample
def test_sample_is_deterministic(spec):
    assert sample_synthetic(spec) == sample_synthetic(spec)


# Test that the written files parse as a dataset
def test_generate_synthetic_files(tmp_path, spec):
    reviews_path, friends_path, communities_path = generate_synthetic(spec, str(tmp_path))
    reviews, friendships = parse_dataset(reviews_path, friends_path)

    assert len(reviews) == len(sample_synthetic(spec).reviews)
    assert len(friendships) > 0
    labels = json.loads(open(communities_path, encoding="utf-8").read())
    assert labels["spec"]["communities"] == 3
    assert len(labels["users"]) == 45


# Test that invalid settings are refused
def test_invalid_synthetic_settings():
    with pytest.raises(ConfigValidationError):
        sample_synthetic(SyntheticSpec(intra_like=0.01, cross_like=0.5))
