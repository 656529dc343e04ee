import io
import json
import subprocess
import sys

import pytest

from fibdyck import periodic
from fibdyck.cli import main


@pytest.fixture(autouse=True)
def _restore_cache():
    yield
    periodic.set_cache_dir(None)


@pytest.fixture(scope="module")
def shared_cache(tmp_path_factory):
    return str(tmp_path_factory.mktemp("cache"))


@pytest.fixture
def run(shared_cache, monkeypatch):
    for var in ("FIBDYCK_CACHE_DIR", "FIBDYCK_ENUM_LIMIT", "FIBDYCK_K_MAX",
                "FIBDYCK_SERIES_ORDER", "FIBDYCK_THREADS"):
        monkeypatch.delenv(var, raising=False)

    def _run(*argv, cache=shared_cache):
        out = io.StringIO()
        code = main(list(argv) + ["--cache-dir", cache], out=out)
        return code, out.getvalue()
    return _run


@pytest.fixture
def golden_mean(tmp_path):
    p = tmp_path / "golden_mean.json"
    p.write_text('{"n": 2, "adj": [[1, 1], [1, 0]]}')
    return str(p)


def test_orbits(run):
    code, out = run("orbits", "3", "--json")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert {"sign": "negative", "multiplier": "0", "count": 2} in rows


def test_orbits_period_one(run):
    code, out = run("orbits", "1", "--json")
    assert code == 0 and json.loads(out)["orbits"] == 2


@pytest.mark.parametrize("n", ["0", "13"])
def test_orbits_out_of_range(run, n):
    assert run("orbits", n)[0] == 64


@pytest.mark.parametrize("max_n,pairs", [
    ("1", {("0", 1)}),
    ("2", {("0", 1), ("1", 2)}),
    ("12", {("0", 1), ("0", 3), ("0", 5), ("1", 2)}),
])
def test_exceptional(run, max_n, pairs):
    code, out = run("exceptional", max_n, "--json")
    assert code == 0
    assert {(p["multiplier"], p["n"]) for p in json.loads(out)["pairs"]} == pairs


def test_zeta(run):
    code, out = run("zeta", "full", "8", "--json")
    assert code == 0 and json.loads(out)["points"][:2] == [2, 12]


def test_zeta_bad_kind(run):
    assert run("zeta", "bogus", "8")[0] == 64


def test_classify_tokens(run):
    code, out = run("classify", "m0", "m", "p", "m", "m1", "p1", "m1", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["word"] == "acCcbBb" and obj["multiplier"] == "01"
    assert obj["nu"] == [1, 1]


@pytest.mark.parametrize("word", ["ab", "xyz"])
def test_classify_rejects(run, word):
    assert run("classify", word)[0] == 64


def test_eta_verify_pass(run):
    code, out = run("eta-verify", "M1", "4")
    assert code == 0 and "pass" in out


def test_eta_verify_below_threshold(run):
    code, out = run("eta-verify", "M0", "6")
    assert code == 2 and "not covered by paper construction" in out


def test_eta_verify_unknown_family(run):
    assert run("eta-verify", "X9", "7")[0] == 64


def test_eta_verify_failure_exits_one(run):
    code, out = run("eta-verify", "M0", "7", "--json")
    assert code == 1
    recs = [json.loads(x) for x in out.splitlines()]
    assert any(r["type"] == "witness" and r["check"] == "injective" for r in recs)


def test_eta_verify_output_independent_of_threads(run):
    a = run("eta-verify", "L2", "6", "--json", "--threads", "1")
    b = run("eta-verify", "L2", "6", "--json", "--threads", "2")
    assert a == b


def test_embed_golden_mean(run, golden_mean):
    code, out = run("embed", golden_mean, "--json")
    obj = json.loads(out)
    assert code == 0 and obj["summary"].startswith("embeddable (holds to horizon")


def test_embed_three_shift(run, tmp_path):
    p = tmp_path / "three.json"
    p.write_text('{"n": 1, "adj": [[3]]}')
    assert run("embed", str(p))[0] == 1


@pytest.mark.parametrize("content", ['{"n": 2, "adj": [[1, 1], [0, 1]]}', "not json"])
def test_embed_bad_input(run, tmp_path, content):
    p = tmp_path / "m.json"
    p.write_text(content)
    assert run("embed", str(p))[0] == 64
    assert run("embed", str(tmp_path / "missing.json"))[0] == 64


def test_cache_inspect_and_clear(run, tmp_path):
    own = str(tmp_path / "own")
    run("orbits", "4", cache=own)
    code, out = run("cache", "inspect", "--json", cache=own)
    tables = json.loads(out)["tables"]
    assert code == 0 and [t["n"] for t in tables] == [4] and tables[0]["valid"]
    code, out = run("cache", "clear", "--json", cache=own)
    assert json.loads(out)["removed"] == 1
    assert json.loads(run("cache", "inspect", "--json", cache=own)[1])["tables"] == []


def test_env_overrides(run, monkeypatch):
    monkeypatch.setenv("FIBDYCK_ENUM_LIMIT", "3")
    assert run("orbits", "4")[0] == 64
    assert run("orbits", "4", "--enum-limit", "4")[0] == 0
    monkeypatch.setenv("FIBDYCK_K_MAX", "nope")
    assert run("orbits", "2")[0] == 64


@pytest.mark.parametrize("flags", [["--enum-limit", "15"], ["--k-max", "70"], ["--threads", "0"]])
def test_config_limits(run, flags):
    assert run("orbits", "2", *flags)[0] == 64


def test_usage_errors(run):
    assert run()[0] == 64
    assert run("bogus")[0] == 64


def test_report(run, tmp_path, golden_mean):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    code, _ = run("report", str(out_a), "--max-n", "6", "--matrix", golden_mean)
    assert code == 0
    run("report", str(out_b), "--max-n", "6", "--matrix", golden_mean)
    names = sorted(p.name for p in out_a.iterdir())
    assert names == ["embed.json", "embed.png", "embed.tsv", "orbits.json", "orbits.png", "orbits.tsv"]
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    tsv = (out_a / "orbits.tsv").read_text().splitlines()
    assert tsv[0].split("\t")[0] == "n" and len(tsv) == 7


def test_console_script(golden_mean, tmp_path):
    r = subprocess.run([sys.executable, "-m", "fibdyck.cli", "embed", golden_mean,
                        "--cache-dir", str(tmp_path / "c"), "--k-max", "12"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "embeddable (holds to horizon 12)" in r.stdout
