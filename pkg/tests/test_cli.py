import io
import json

import pytest

from hopfweil import cli


def call(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_simplex_integrate_json():
    code, out = call("simplex", "integrate", "--p", "2", "--exponents", "1,1")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"tool_version", "config_echo", "results", "checks"}
    assert doc["results"]["integral"] == "1/24"
    assert doc["config_echo"]["command"] == "simplex integrate"


def test_weil_cohomology_passes():
    code, out = call("weil", "cohomology", "--n", "1")
    assert code == 0
    assert json.loads(out)["checks"]


def test_failing_check_gives_exit_one():
    code, out = call("cyclic", "verify", "--module", "relative", "--n", "1")
    assert code == 1
    names = {c["name"]: c["pass"] for c in json.loads(out)["checks"]}
    assert names["tau_representative_independence"] is False


@pytest.mark.parametrize("argv", [
    ("weil", "cohomology"),
    ("weil", "cohomology", "--n", "-1"),
    ("nonsense",),
    ("weil", "basic", "--n", "1", "--subgroup", "U"),
])
def test_bad_arguments_exit_two(argv):
    assert call(*argv)[0] == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 1, "m": 1}))
    code, out = call("weil", "cohomology", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["config_echo"]["n"] == 1


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 1, "bogus": 3}))
    assert call("weil", "cohomology", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize("fmt", ["text", "latex"])
def test_other_formats(fmt):
    code, out = call("wo", "cohomology", "--n", "1", "--format", fmt)
    assert code == 0 and out.strip()
    if fmt == "latex":
        assert r"\begin{tabular}" in out


def test_output_is_deterministic_and_cache_independent(tmp_path):
    argv = ("hn", "derive", "--n", "2", "--R", "2", "--cache-dir", str(tmp_path))
    first = call(*argv)
    second = call(*argv)  # served from cache
    assert first == second and first[0] == 0
    files = list(tmp_path.iterdir())
    assert files
    for f in files:
        f.unlink()
    assert call(*argv) == first
