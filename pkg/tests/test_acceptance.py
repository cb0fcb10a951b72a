import csv
import json

import pytest

from grembed.cli import Pipeline, PipelineConfig, SyntheticSpec, generate_synthetic
from grembed.embed import METHODS

COUNT = 20


@pytest.fixture(scope="module")
def planted_run(tmp_path_factory):
    """Full default pipeline on the default planted dataset: three communities of 100 users, seed 11."""
    root = tmp_path_factory.mktemp("planted")
    generate_synthetic(SyntheticSpec(), str(root / "data"))
    config = PipelineConfig.from_dict(
        {
            "output_dir": str(root / "out"),
            "ingest": {
                "reviews_path": str(root / "data" / "reviews.json"),
                "friends_path": str(root / "data" / "users.json"),
            },
        }
    )
    assert COUNT in config.evaluate.k_values
    Pipeline(config).run("all")
    return root / "out"


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def coverage_at(out_dir, k):
    reports = json.loads((out_dir / "report.json").read_text())
    return {r["method"]: r["coverage_percent"] for r in reports if r["k"] == k}


# Test that the elbow rule finds the three planted communities in every embedding
@pytest.mark.parametrize("method", METHODS)
def test_planted_elbow_finds_three_communities(planted_run, method):
    rows = read_rows(planted_run / f"elbow_{method}.csv")
    selected = [int(r["k"]) for r in rows if r["selected"] == "1"]
    assert selected == [3]


# Test that every embedding recommender at least doubles the random baseline's coverage
@pytest.mark.parametrize("method", METHODS)
def test_planted_recommender_beats_random(planted_run, method):
    coverage = coverage_at(planted_run, COUNT)
    assert coverage[method] >= 2.0 * coverage["random"]


# Test that the fused recommender covers at least as much as the best single embedding on test users
def test_planted_hybrid_matches_best_embedding(planted_run):
    coverage = coverage_at(planted_run, COUNT)
    best = max(coverage[f"{m} (test)"] for m in METHODS)
    assert coverage["hybrid (test)"] >= best


# Test that the skip-gram epoch loss never rises over the default five epochs
def test_planted_sgns_loss_non_increasing(planted_run):
    losses = [float(r["loss"]) for r in read_rows(planted_run / "node2vec_losses.csv")]

    assert len(losses) == 5
    for earlier, later in zip(losses, losses[1:]):
        assert later <= earlier


# Test that forty epochs of the fusion network at its default learning rate lower the training loss
def test_planted_mlp_loss_decreases(planted_run):
    rows = read_rows(planted_run / "hybrid_losses.csv")

    assert len(rows) == 40
    assert float(rows[-1]["train_mse"]) < float(rows[0]["train_mse"])
