import json

import pytest

from bounds_layer.partition import SearchBudget
from bounds_layer.zarankiewicz.extremal import ExtremalRecord, z_exact
from core.graph import BipartiteGraph, complete_bipartite
from core.patterns import BicliquePattern
from integration.cache import ExtremalCache
from integration.settings import RunSettings


# =======================
# Settings
# =======================
def test_defaults_file_matches_dataclass():
    assert RunSettings.load(env={}).to_json() == RunSettings().to_json()


def test_env_overrides_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"threads": 2, "seed": 5, "z_max_side": 5}))
    s = RunSettings.load(cfg, env={"BRLAB_THREADS": "3", "BRLAB_TIME_LIMIT": "1.5", "BRLAB_SEED": ""})
    assert s.threads == 3
    assert s.time_limit == 1.5
    assert s.seed == 5
    assert s.z_max_side == 5


def test_unknown_keys_are_ignored(tmp_path, caplog):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"threads": 2, "colour": "red"}))
    with caplog.at_level("WARNING"):
        s = RunSettings.load(cfg, env={})
    assert s.threads == 2
    assert "colour" in caplog.text


def test_bad_config_files(tmp_path):
    with pytest.raises(FileNotFoundError):
        RunSettings.load(tmp_path / "missing.json", env={})
    broken = tmp_path / "broken.json"
    broken.write_text("{threads: 2")
    with pytest.raises(ValueError):
        RunSettings.load(broken, env={})


def test_budget_from_settings():
    s = RunSettings(threads=4, node_limit=100)
    s.set("time_limit", "2")
    s.set("node_limit", None)
    b = s.budget(5)
    assert (b.max_side, b.node_limit, b.time_limit, b.workers) == (5, 100, 2.0, 4)


# =======================
# Cache
# =======================
def test_put_then_reload(tmp_path, budget):
    path = tmp_path / "nested" / "cache.jsonl"
    cache = ExtremalCache(path)
    record = z_exact(4, 2, budget, cache)
    assert record.value == 9
    assert len(cache) == 1
    again = ExtremalCache(path)
    hit = again.get(4, BicliquePattern(2))
    assert hit is not None and hit.value == 9


def test_cache_hit_skips_side_cap(tmp_path, budget):
    cache = ExtremalCache(tmp_path / "c.jsonl")
    z_exact(4, 2, budget, cache)
    assert z_exact(4, 2, SearchBudget(max_side=3), cache).value == 9


def test_put_ignores_duplicates_and_partial_records(tmp_path, budget):
    path = tmp_path / "c.jsonl"
    cache = ExtremalCache(path)
    record = z_exact(3, 2, budget)
    cache.put(record)
    cache.put(record)
    partial = ExtremalRecord(5, BicliquePattern(2), 10, record.witness, 7, exhausted=False)
    cache.put(partial)
    assert len(path.read_text().splitlines()) == 1


def test_corrupt_and_false_lines_are_skipped(tmp_path, budget):
    path = tmp_path / "c.jsonl"
    good = z_exact(3, 2, budget)
    lying = ExtremalRecord(3, BicliquePattern(2), 9, complete_bipartite(3, 3))
    path.write_text(
        "not json\n"
        + json.dumps({"r": 3})
        + "\n\n"
        + json.dumps(lying.to_json())
        + "\n"
        + json.dumps(good.to_json())
        + "\n"
    )
    cache = ExtremalCache(path)
    assert len(cache) == 1
    assert cache.get(3, BicliquePattern(2)).value == 6


def test_lowered_record_is_skipped(tmp_path, budget):
    good = z_exact(3, 2, budget)
    assert good.saturated()
    edges = good.witness.edges()
    lowered = ExtremalRecord(3, BicliquePattern(2), 5, BipartiteGraph.from_edges(3, 3, edges[:-1]))
    assert lowered.verify() and not lowered.saturated()
    path = tmp_path / "c.jsonl"
    path.write_text(json.dumps(lowered.to_json()) + "\n")
    cache = ExtremalCache(path)
    assert cache.get(3, BicliquePattern(2)) is None
    assert z_exact(3, 2, budget, cache).value == 6
