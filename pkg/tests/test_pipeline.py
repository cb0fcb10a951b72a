import json
import os
from unittest.mock import Mock

import pytest

from grembed.cli import STAGES, Pipeline, PipelineConfig, SyntheticSpec, generate_synthetic
from grembed.cli.main import EXIT_INVALID, EXIT_MISSING_ARTIFACT, EXIT_OK, main
from grembed.errors import MissingArtifactError

SMALL_SETTINGS = {
    "seed": 5,
    "dimensions": 4,
    "ingest": {"min_reviews": 3},
    "node2vec": {"walks_per_node": 2, "walk_length": 10, "window": 2, "negatives": 2, "epochs": 1},
    "cluster": {"k_min": 2, "k_max": 4, "max_iter": 50, "n_init": 1},
    "recommend": {"lower_bound": 2, "cohort_size": 10, "max_items": 20},
    "hybrid": {"epochs": 3, "hidden": [4], "blend_epochs": 10},
    "evaluate": {"k_values": [5, 10], "sweep_k": [5]},
}


@pytest.fixture
def data_dir(tmp_path):
    spec = SyntheticSpec(
        communities=3,
        users_per_community=20,
        restaurants_per_community=15,
        intra_friend=0.3,
        inter_friend=0.02,
        seed=8,
    )
    generate_synthetic(spec, str(tmp_path / "data"))
    return tmp_path / "data"


def small_config(data_dir, out_dir) -> PipelineConfig:
    settings = json.loads(json.dumps(SMALL_SETTINGS))
    settings["output_dir"] = str(out_dir)
    settings["ingest"]["reviews_path"] = str(data_dir / "reviews.json")
    settings["ingest"]["friends_path"] = str(data_dir / "users.json")
    return PipelineConfig.from_dict(settings)


# Test that a full run writes every stage's artifacts and the manifest
def test_run_all_writes_artifacts(tmp_path, data_dir):
    config = small_config(data_dir, tmp_path / "out")
    on_complete = Mock()
    written = Pipeline(config, onStageComplete=on_complete).run("all")

    assert list(written) == list(STAGES)
    assert on_complete.call_count == len(STAGES)
    for artifacts in written.values():
        for path in artifacts:
            assert os.path.exists(path)

    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["config_hash"] == config.config_hash()
    assert sorted(manifest["stages"]) == sorted(STAGES)

    report = json.loads((tmp_path / "out" / "report.json").read_text())
    methods = {r["method"] for r in report}
    # Check the per-embedding, baseline and fused rows are all present
    assert {"hope", "spectral", "node2vec", "random", "hybrid (train)", "blend (train)"} <= methods
    assert (tmp_path / "out" / "table.txt").read_text().startswith("Method")


# Test that two runs with the same seed produce identical artifacts
def test_run_all_is_deterministic(tmp_path, data_dir):
    Pipeline(small_config(data_dir, tmp_path / "a")).run("all")
    Pipeline(small_config(data_dir, tmp_path / "b")).run("all")

    names = [
        "graph.tsv",
        "embedding_node2vec.csv",
        "embedding_hope.csv",
        "recommendations_spectral.json",
        "hybrid_model_w0.csv",
        "report.json",
        "sweep.csv",
    ]
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


# Test that stages can be rerun one by one for a subset of methods
def test_single_stage_for_one_method(tmp_path, data_dir):
    config = small_config(data_dir, tmp_path / "out")
    pipeline = Pipeline(config, methods=["spectral"])
    for stage in ("ingest", "graph", "embed", "cluster"):
        pipeline.run(stage)

    assert (tmp_path / "out" / "clusters_spectral.csv").exists()
    assert not (tmp_path / "out" / "embedding_hope.csv").exists()


# Test that a stage without its inputs reports the missing artifact through the error handler
def test_missing_artifact_calls_error_handler(tmp_path):
    on_error = Mock()
    pipeline = Pipeline(PipelineConfig(output_dir=str(tmp_path)), onStageError=on_error)

    with pytest.raises(MissingArtifactError):
        pipeline.run("embed")

    # Check that the handler received the stage name and the error
    stage, error = on_error.call_args[0]
    assert stage == "embed"
    assert isinstance(error, MissingArtifactError)


# Test that an unknown stage name is refused
def test_unknown_stage(tmp_path):
    with pytest.raises(ValueError):
        Pipeline(PipelineConfig(output_dir=str(tmp_path))).run("deploy")


# Test the exit code of the command line when an input artifact is missing
def test_main_missing_graph_exit_code(tmp_path):
    assert main(["embed", "--out", str(tmp_path)]) == EXIT_MISSING_ARTIFACT


# Test the exit code of the command line on an invalid config file
def test_main_invalid_config_exit_code(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"cluster": {"k_min": 1}}))
    assert main(["graph", "--config", str(path), "--out", str(tmp_path)]) == EXIT_INVALID


# Test that the command line generates data and runs the first stages on it
def test_main_synth_then_ingest(tmp_path, data_dir):
    config = small_config(data_dir, tmp_path / "out")
    config_path = tmp_path / "config.json"
    config.save(str(config_path))

    assert main(["synth", "--out", str(tmp_path / "synth"), "--communities", "2"]) == EXIT_OK
    assert (tmp_path / "synth" / "reviews.json").exists()
    assert main(["ingest", "--config", str(config_path)]) == EXIT_OK
    assert main(["graph", "--config", str(config_path), "--seed", "9"]) == EXIT_OK
    assert (tmp_path / "out" / "graph.tsv").exists()


# Test that blend weights saved for another method set are refused with a validation error
def test_evaluate_rejects_blend_without_all_methods(tmp_path, data_dir):
    config = small_config(data_dir, tmp_path / "out")
    config_path = tmp_path / "config.json"
    config.save(str(config_path))
    Pipeline(config).run("all")
    (tmp_path / "out" / "blend_weights.json").write_text(json.dumps({"hope": 0.5}))

    with pytest.raises(ValueError, match="lacks weights"):
        Pipeline(config).run("evaluate")
    assert main(["evaluate", "--config", str(config_path)]) == EXIT_INVALID


# Test that the network-only fusion still reports train and test rows
def test_network_fusion_reports_hybrid(tmp_path, data_dir):
    config = small_config(data_dir, tmp_path / "out")
    config.hybrid.fusion = "network"
    Pipeline(config).run("all")

    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert {"hybrid (train)", "hybrid (test)"} <= {r["method"] for r in report}
