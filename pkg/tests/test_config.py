import json

import pytest

from grembed.cli import Node2VecConfig, PipelineConfig
from grembed.embed import Node2VecParams
from grembed.errors import ConfigValidationError


# Test that the default configuration is valid
def test_default_config_is_valid():
    config = PipelineConfig()
    assert config.validate() == []
    assert config.check() is config


# Test that the config hash is stable and changes with any field
def test_config_hash_changes_with_fields():
    base = PipelineConfig()
    assert base.config_hash() == PipelineConfig().config_hash()

    changed = PipelineConfig.from_dict({"node2vec": {"q": 2.0}})
    assert changed.config_hash() != base.config_hash()
    assert PipelineConfig(seed=1).config_hash() != base.config_hash()


# Test that a partial mapping keeps the defaults for every missing key
def test_from_dict_partial():
    config = PipelineConfig.from_dict({"seed": 7, "cluster": {"k_max": 6}})

    assert config.seed == 7
    assert config.cluster.k_max == 6
    assert config.cluster.k_min == 2
    assert config.node2vec.walk_length == 80


# Test that unknown keys are rejected at the top level and inside sections
def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ConfigValidationError) as info:
        PipelineConfig.from_dict({"colour": "blue", "graph": {"epsilon": 0.1, "delta": 2}})

    # Check that both offending keys are listed
    assert "unknown key 'colour'" in info.value.violations
    assert "unknown key 'graph.delta'" in info.value.violations


# Test that every violated constraint is reported at once
def test_validate_lists_every_violation():
    config = PipelineConfig(dimensions=0, methods=["hope", "hope"])
    config.node2vec.p = 0.0
    config.hybrid.split_ratio = 1.0
    errors = config.validate()

    assert len(errors) == 4
    with pytest.raises(ConfigValidationError):
        config.check()


# Test the fusion and heat-kernel settings of the fused and spectral stages
def test_fusion_and_diffusion_settings():
    config = PipelineConfig()
    assert config.hybrid.fusion == "support"
    assert config.spectral.diffusion_time > 0
    assert 20 in config.evaluate.k_values

    with pytest.raises(ConfigValidationError) as info:
        PipelineConfig.from_dict({"hybrid": {"fusion": "vote"}, "spectral": {"diffusion_time": -1.0}})
    assert info.value.violations == [
        "spectral.diffusion_time must be >= 0",
        "hybrid.fusion must be one of ['support', 'network']",
    ]


# Test that a saved config loads back to the same hash
def test_save_and_load(tmp_path):
    config = PipelineConfig.from_dict({"seed": 3, "evaluate": {"k_values": [5]}})
    path = str(tmp_path / "config.json")
    config.save(path)

    assert PipelineConfig.load(path).config_hash() == config.config_hash()


# Test that a config file that is not a JSON object is refused
def test_load_rejects_bad_files(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    not_object = tmp_path / "list.json"
    not_object.write_text(json.dumps([1, 2]))

    with pytest.raises(ConfigValidationError):
        PipelineConfig.load(str(bad_json))
    with pytest.raises(ConfigValidationError):
        PipelineConfig.load(str(not_object))


# Test that the node2vec section maps onto the trainer parameters
def test_node2vec_params():
    assert Node2VecConfig(p=0.5, epochs=1).params() == Node2VecParams(p=0.5, epochs=1)
