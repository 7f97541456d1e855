import io
import json

import pytest

from core.codec import canonical_json, sha256_hex
from core.coloring import EdgeColoring
from core.graph import complete_bipartite, path_graph, perfect_matching
from integration.cli import EXIT_INDETERMINATE, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, dispatch


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for key in ("THREADS", "SEED", "NODE_LIMIT", "TIME_LIMIT", "CACHE_PATH", "Z_MAX_SIDE", "RAMSEY_MAX_SIDE"):
        monkeypatch.delenv(f"BRLAB_{key}", raising=False)


def run(*argv):
    buf = io.StringIO()
    code = dispatch(list(argv), out=buf)
    return code, json.loads(buf.getvalue())


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(canonical_json(obj.to_json() if hasattr(obj, "to_json") else obj))
    return str(path)


# =======================
# gen / pattern
# =======================
def test_gen_complete():
    code, out = run("gen", "complete", "--a", "2", "--b", "3")
    assert code == EXIT_OK
    assert out == complete_bipartite(2, 3).to_json()


def test_pattern_find(tmp_path):
    host = write(tmp_path, "k33.json", complete_bipartite(3, 3))
    code, out = run("pattern", "find", "--host", host, "--kind", "biclique", "--s", "2")
    assert code == EXIT_OK and out["found"]
    sparse = write(tmp_path, "m3.json", perfect_matching(3))
    code, out = run("pattern", "find", "--host", sparse, "--kind", "cycle", "--length", "4")
    assert code == EXIT_NEGATIVE and out["witness"] is None
    code, _ = run("pattern", "find", "--host", sparse, "--kind", "cycle", "--length", "5")
    assert code == EXIT_USAGE


# =======================
# z
# =======================
def test_z_exact_uses_cache(tmp_path):
    code, out = run("z", "exact", "--r", "4", "--s", "2")
    assert code == EXIT_OK
    assert out["value"] == 9
    assert out["certificate"]["claims"][0] == "z(4;K2,2) >= 9"
    assert (tmp_path / ".brlab" / "extremal_cache.jsonl").exists()


def test_z_side_cap_is_indeterminate():
    code, out = run("--no-cache", "--z-max-side", "3", "z", "exact", "--r", "4", "--s", "2")
    assert code == EXIT_INDETERMINATE
    assert out["flag"] == "--z-max-side"


def test_z_bound_needs_exactly_one_pattern():
    code, out = run("z", "bound", "--r", "10", "--s", "2", "--t", "2")
    assert code == EXIT_USAGE
    code, out = run("z", "bound", "--r", "10", "--t", "2")
    assert code == EXIT_OK and out["agrees"]


# =======================
# br
# =======================
def test_br_exact(tmp_path):
    p3 = write(tmp_path, "p3.json", path_graph(2))
    code, out = run("--no-cache", "br", "exact", "--red", p3, "--blue", p3)
    assert code == EXIT_OK
    assert out["value"] == 3
    assert out["certificate_digest"]


def test_br_exact_out_of_nodes(tmp_path):
    k22 = write(tmp_path, "k22.json", complete_bipartite(2, 2))
    code, out = run("--node-limit", "1", "br", "exact", "--red", k22, "--blue", k22)
    assert code == EXIT_INDETERMINATE
    assert out["value"] is None


def test_g1_g2_and_trailing_global_flags(tmp_path):
    k11 = write(tmp_path, "k11.json", complete_bipartite(1, 1))
    code, out = run("br", "exact", "--g1", k11, "--g2", k11, "--nmax", "2", "--threads", "1", "--node-limit", "1000")
    assert code == EXIT_OK
    assert out["value"] == 1


def test_global_flags_after_subcommand(tmp_path):
    k22 = write(tmp_path, "k22.json", complete_bipartite(2, 2))
    args = ["lll", "construct", "--pattern", k22, "--N", "4", "--n", "2", "--red-prob", "0.5", "--budget", "100000"]
    before = run("--seed", "7", *args)
    after = run(*args, "--seed", "7")
    assert before[0] == after[0] == EXIT_OK
    assert before[1] == after[1]
    code, out = run("--no-cache", "z", "exact", "--r", "4", "--s", "2", "--z-max-side", "3")
    assert code == EXIT_INDETERMINATE
    assert out["flag"] == "--z-max-side"


def test_br_upper():
    code, out = run("--no-cache", "br", "upper", "--n", "2", "--r", "5")
    assert code == EXIT_OK and out["certified"]
    code, _ = run("--no-cache", "br", "upper", "--n", "2", "--r", "4")
    assert code == EXIT_NEGATIVE


def test_short_n_option_is_not_a_prefix():
    code, out = run("br", "upper", "--n", "2", "--r", "5")
    assert code == EXIT_OK and out["certified"]
    code, out = run("lll", "counts", "--p", "3", "--n", "2", "--N", "3")
    assert code == EXIT_OK
    assert out["counts"]["N_AA"] == "9"
    assert dispatch(["--no", "br", "upper", "--n", "2", "--r", "5"], out=io.StringIO()) == EXIT_USAGE


def test_br_size_linear():
    code, out = run("br", "size-linear", "--p", "3", "--q", "4")
    assert code == EXIT_OK
    assert out["lower_bound_exponent"] == 3.0
    code, _ = run("br", "size-linear", "--p", "4", "--q", "5")
    assert code == EXIT_NEGATIVE


# =======================
# lll
# =======================
def test_lll_check():
    code, out = run("lll", "check", "--p", "4", "--q", "4", "--c1", "10", "--c2", "4", "--C4", "33", "--N", "1000000")
    assert code == EXIT_NEGATIVE
    assert out["constants"]["ok"]
    code, out = run("lll", "check", "--p", "4", "--q", "4", "--c1", "0.05", "--c2", "200", "--C4", "300", "--N", "1000000000000")
    assert code == EXIT_OK and out["verified"]


def test_lll_construct_then_verify(tmp_path):
    k22 = write(tmp_path, "k22.json", complete_bipartite(2, 2))
    code, out = run("--seed", "7", "lll", "construct", "--pattern", k22, "--N", "4", "--n", "2", "--red-prob", "0.5", "--budget", "100000")
    assert code == EXIT_OK
    cert = write(tmp_path, "cert.json", out)
    code, report = run("verify", "--certificate", cert)
    assert code == EXIT_OK and report["verified"]

    out["certificate"]["claims"][-1] = "br(K2,2,K2,2) > 5"
    bad = write(tmp_path, "bad.json", out)
    code, report = run("verify", "--certificate", bad)
    assert code == EXIT_NEGATIVE
    assert report["failing"] == ["br(K2,2,K2,2) > 5"]


def test_lll_certify(tmp_path):
    k22 = write(tmp_path, "k22.json", complete_bipartite(2, 2))
    good = write(tmp_path, "good.json", EdgeColoring.from_red_graph(perfect_matching(2)))
    code, out = run("lll", "certify", "--pattern", k22, "--n", "2", "--coloring", good)
    assert code == EXIT_OK and out["certified"]
    red = write(tmp_path, "red.json", EdgeColoring.constant(2, 2, 0))
    code, out = run("lll", "certify", "--pattern", k22, "--n", "2", "--coloring", red)
    assert code == EXIT_NEGATIVE and out["certificate"] is None


# =======================
# embed
# =======================
def test_embed_run_and_diagnose(tmp_path):
    k22 = write(tmp_path, "k22.json", complete_bipartite(2, 2))
    small = write(tmp_path, "small.json", EdgeColoring.from_red_graph(perfect_matching(3)))
    code, out = run("embed", "run", "--coloring", small, "--target", k22)
    assert code == EXIT_INDETERMINATE
    assert out["status"] == "stuck"
    report = write(tmp_path, "stuck.json", out)
    code, diag = run("embed", "diagnose", "--report", report, "--coloring", small)
    assert code == EXIT_OK
    assert diag["case"] == "case2"


def test_embed_run_embeds(tmp_path):
    code, tree = run("--seed", "3", "gen", "tree", "--m", "9")
    code, coloring = run("--seed", "3", "gen", "matching-coloring", "--N", "92")
    target = write(tmp_path, "tree.json", tree)
    host = write(tmp_path, "host.json", coloring)
    code, out = run("embed", "run", "--coloring", host, "--target", target)
    assert code == EXIT_OK
    assert out["certificate"]["kind"] == "embedding"


# =======================
# Errors and manifest
# =======================
def test_usage_errors(tmp_path):
    buf = io.StringIO()
    assert dispatch(["br", "nonsense"], out=buf) == EXIT_USAGE
    code, out = run("pattern", "find", "--host", str(tmp_path / "missing.json"), "--kind", "biclique")
    assert code == EXIT_USAGE
    broken = tmp_path / "broken.json"
    broken.write_text('{"left": 2, "right": 2, "edges": [[0, 5]]}')
    code, out = run("pattern", "find", "--host", str(broken), "--kind", "biclique")
    assert code == EXIT_USAGE
    assert out["error"] == "GraphFormatError"


def test_manifest(tmp_path):
    manifest = tmp_path / "manifest.json"
    buf = io.StringIO()
    code = dispatch(["--no-cache", "--seed", "4", "--manifest", str(manifest), "z", "exact", "--r", "3", "--s", "2"], out=buf)
    assert code == EXIT_OK
    m = json.loads(manifest.read_text())
    assert m["subcommand"] == "z exact"
    assert m["seed"] == 4
    assert m["digest"] == sha256_hex(buf.getvalue().rstrip("\n"))
    assert m["budgets"]["z_max_side"] == 6


def test_output_is_deterministic():
    first = io.StringIO()
    second = io.StringIO()
    dispatch(["--no-cache", "--seed", "1", "gen", "matching-coloring", "--N", "6"], out=first)
    dispatch(["--no-cache", "--seed", "1", "gen", "matching-coloring", "--N", "6"], out=second)
    assert first.getvalue() == second.getvalue()
