import json
import os
import subprocess

import pytest

BIN = os.environ.get("HICLUSTER_BIN", "hicluster")
SOURCE = os.environ.get("HICLUSTER_SOURCE_DIR", os.path.join(os.path.dirname(__file__), "..", ".."))

TRIANGLE = "hicluster-graph 1 3 3 dis\n0 1 1\n0 2 1\n1 2 3\n"
TWO_BLOCKS = "hicluster-graph 1 4 6 sim\n0 1 3\n2 3 3\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n"
P4 = "hicluster-graph 1 4 3 sim\n0 1 1\n1 2 1\n2 3 1\n"


def run(*args, env=None, check=True):
    full_env = dict(os.environ)
    full_env.pop("HICLUSTER_MAX_N", None)
    full_env.update(env or {})
    r = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=full_env)
    if check and r.returncode != 0:
        raise AssertionError(f"exit {r.returncode}: {r.stderr}")
    return r


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {"triangle": TRIANGLE, "blocks": TWO_BLOCKS, "p4": P4}.items():
        p = tmp_path / f"{name}.graph"
        p.write_text(text)
        out[name] = p
    return out


def test_average_linkage_triangle(files):
    out = run("cluster", "-i", files["triangle"], "--algo", "average").stdout.split("\n")
    assert out[0] == "((0,1),2)"
    assert out[1] == "objective 14"


def test_json_output(files):
    doc = json.loads(run("--json", "cluster", "-i", files["blocks"], "--algo", "pivot", "--seed", 3).stdout)
    assert doc["objective"] == 28
    assert doc["tree"] == "((0,1),(2,3))"
    assert doc["n"] == 4


def test_densest_needs_dissimilarity(files):
    r = run("cluster", "-i", files["blocks"], "--algo", "densest-ls", "--mode", "sim", check=False)
    assert r.returncode == 2


def test_opt_and_eval(files):
    assert "8" in run("opt", "-i", files["p4"]).stdout.split()
    out = run("eval", "-i", files["blocks"], "-t", "((0,1),(2,3))").stdout
    assert "28" in out


def test_check_generating(files):
    r = run("check", "-i", files["blocks"], "-t", "((0,2),(1,3))", "--generating")
    assert r.stdout.startswith("no")
    r = run("check", "-i", files["blocks"], "-t", "((0,1),(2,3))", "--generating")
    assert r.stdout.startswith("yes")


def test_generation_is_deterministic(tmp_path):
    a, b = tmp_path / "a.graph", tmp_path / "b.graph"
    ha = run("gen", "ultrametric", "--n", 12, "--seed", 5, "-o", a).stdout.split()
    hb = run("gen", "ultrametric", "--n", 12, "--seed", 5, "-o", b).stdout.split()
    assert ha[-1] == hb[-1]
    assert a.read_bytes() == b.read_bytes()


def test_resource_guard(tmp_path):
    g = tmp_path / "path.graph"
    run("gen", "path", "--n", 18, "-o", g)
    assert run("opt", "-i", g, check=False).returncode == 3
    assert run("opt", "-i", g, env={"HICLUSTER_MAX_N": "18"}).returncode == 0


def test_missing_input_is_usage_error(tmp_path):
    assert run("eval", "-i", tmp_path / "nope", "-t", "(0,1)", check=False).returncode == 2
    assert run("cluster", check=False).returncode == 2


def test_empty_bench_spec(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text("{}")
    out = run("bench", "--spec", spec).stdout.strip().split("\n")
    assert out == ["instance,n,seed,algo,objective_value,oracle_or_bound,ratio,wall_ms,ok"]


def test_bench_rows_are_reproducible(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"experiments": [{"type": "avg-bound", "n": [3, 8], "seeds": 2}]}))
    a = run("bench", "--spec", spec, "--no-timing").stdout
    assert a == run("bench", "--spec", spec, "--no-timing").stdout
    rows = a.strip().split("\n")[1:]
    assert len(rows) == 12
    assert all(r.endswith(",true") for r in rows)


@pytest.mark.parametrize("name", sorted(os.listdir(os.path.join(SOURCE, "instances", "scripts"))))
def test_shipped_scripts_replay(name, tmp_path):
    stem = name.rsplit(".", 1)[0]
    family, size = stem.rsplit("_", 1)
    g = tmp_path / "g.graph"
    run("gen", "ties", "--family", family, "--size", size, "-o", tmp_path / "fresh.ties")
    assert (tmp_path / "fresh.ties").read_text() == open(os.path.join(SOURCE, "instances", "scripts", name)).read()
    if family == "star":
        run("gen", "star", "--n", size, "-o", g)
        algo = "single"
    elif family == "path":
        run("gen", "path", "--n", size, "-o", g)
        algo = "complete"
    else:
        run("gen", "spine", "--k", size, "-o", g)
        algo = "average"
    script = os.path.join(SOURCE, "instances", "scripts", name)
    out = run("cluster", "-i", g, "--algo", algo, "--ties", f"script:{script}").stdout
    assert out.startswith("(")
