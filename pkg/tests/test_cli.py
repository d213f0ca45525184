import json

import pytest
from click.testing import CliRunner

from fsig.cli import main

STD = ["-v", "x:1,y:1,z:1"]


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)

    return invoke


def test_bound_a2(run):
    res = run("bound", "-p", "5", "-v", "x:3,y:3,z:2", "-f", "x^2+y^2+z^3")
    assert res.exit_code == 0
    lines = dict(line.split(None, 1) for line in res.output.splitlines() if line.split()[0] != "series")
    assert lines["a(R)"] == "-2" and lines["e'"] == "1/3" and lines["bound"] == "1/3"


def test_bound_json_and_approx(run):
    res = run("bound", "-p", "3", "-v", "x:1,y:1,z:1", "--json")
    doc = json.loads(res.output)
    assert doc["bound"] == "9/8" and doc["d"] == 3 and doc["a"] == -3
    res = run("bound", "-p", "3", "-v", "x:1,y:1,z:1", "--approx")
    assert "9/8" in res.output and "1.125" in res.output


@pytest.mark.parametrize(
    "args, code",
    [
        (["bound", "-p", "5", *STD, "-f", "x+y^2"], 3),
        (["bound", "-p", "4", *STD, "-f", "x"], 2),
        (["bound", "-p", "5", *STD, "-f", "x+*y"], 2),
        (["bound", "-p", "5", *STD, "-f", "x+t"], 2),
        (["bound", "-p", "5", "-v", "x:0", "-f", "x"], 2),
        (["aq", "-p", "5", *STD, "-f", "x^2+y^2+z^2", "-e", "3", "--budget", "1000"], 5),
        (["classify", "-p", "5", *STD, "-f", "x+y^2"], 3),
    ],
)
def test_exit_codes(run, args, code):
    assert run(*args).exit_code == code


def test_aq_regular(run):
    res = run("fsignature", "-p", "3", *STD, "-f", "x", "--e-max", "2", "--json")
    doc = json.loads(res.output)
    assert [r["a_q"] for r in doc["reports"]] == [9, 81]


def test_aq_fermat_and_oracle(run):
    res = run("aq", "-p", "7", *STD, "-f", "x^3+y^3+z^3", "--json")
    assert json.loads(res.output)["reports"][0]["a_q"] == 1
    res = run("aq", "-p", "3", *STD, "-f", "x^2+y^2+z^2", "--oracle")
    assert res.exit_code == 0


def test_oracle_mismatch_exit(run, monkeypatch):
    import fsig.cli

    monkeypatch.setattr(fsig.cli, "naive_free_rank_oracle", lambda *a, **k: -1)
    res = run("aq", "-p", "3", *STD, "-f", "x^2+y^2+z^2", "--oracle")
    assert res.exit_code == 4


@pytest.mark.parametrize("p, verdict", [(7, "UniqueSummand"), (5, "NotFPure")])
def test_classify_fermat(run, p, verdict):
    res = run("classify", "-p", str(p), *STD, "-f", "x^3+y^3+z^3")
    assert res.exit_code == 0 and res.stdout.strip() == verdict


def test_classify_a1(run):
    assert run("classify", "-p", "3", *STD, "-f", "x^2+y^2+z^2").stdout.strip() == "FPureRationalLike"


def test_job_file_flags_win(run, tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"prime": 5, "vars": "x:1,y:1,z:1", "poly": "x^3+y^3+z^3"}))
    assert run("classify", "--job", str(job)).stdout.strip() == "NotFPure"
    assert run("classify", "--job", str(job), "-p", "7").stdout.strip() == "UniqueSummand"


def test_bad_job_file(run, tmp_path):
    job = tmp_path / "job.json"
    job.write_text("{not json")
    assert run("classify", "--job", str(job)).exit_code == 2


def test_verify_paper_tiny_budget(run, tmp_path):
    res = run("verify-paper", "--out", str(tmp_path), "--budget", "30", "--e-max", "2")
    assert res.exit_code == 0
    rows = (tmp_path / "suite.csv").read_text().splitlines()
    assert any(",skip," in r for r in rows)


def test_verify_paper_tampered_golden(run, tmp_path):
    from importlib import resources

    text = resources.files("fsig").joinpath("data/golden_table.csv").read_text()
    lines = text.splitlines()
    idx = next(i for i, line in enumerate(lines) if line.startswith("E8,"))
    lines[idx] = lines[idx].replace("1/120", "1/100")
    golden = tmp_path / "golden.csv"
    golden.write_text("\n".join(lines) + "\n")
    res = run("verify-paper", "--out", str(tmp_path / "out"), "--e-max", "1", "--golden", str(golden))
    assert res.exit_code == 1
    assert "E8" in res.output


def test_corpus_command(run, tmp_path):
    args = ["corpus", "--seed", "4", "--count", "12", "--out"]
    assert run(*args, str(tmp_path / "a")).exit_code == 0
    assert run(*args, str(tmp_path / "b")).exit_code == 0
    for name in ("corpus.csv", "corpus.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
