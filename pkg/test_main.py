"""Command line tests: exit codes and stdout of each subcommand."""

import json

import pytest

from app.config import settings
from app.main import main

KLEIN_FOUR = "4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert settings.app_version in out


def test_missing_command_is_a_usage_error(capsys):
    code, _, _ = run(capsys)
    assert code == 2
    code, _, _ = run(capsys, "check", "--claim", "CHK-01")
    assert code == 2


def test_list_claims(capsys):
    code, out, _ = run(capsys, "-q", "list-claims")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 22
    assert lines[0].startswith("CHK-01  cited-fact")


def test_check_one_claim(capsys):
    code, out, _ = run(capsys, "-q", "check", "--claim", "CHK-02", "--group", "S3")
    assert code == 0
    assert out.splitlines()[0] == "CHK-02  S3         PASS"
    assert out.splitlines()[-1] == "1 checks: 1 pass, 0 fail, 0 info"


def test_check_json(capsys):
    code, out, _ = run(capsys, "-q", "check", "--claim", "CHK-10", "--group", "Q8", "--json")
    assert code == 0
    assert json.loads(out)[0]["status"] == "pass"


@pytest.mark.parametrize(
    "argv",
    [
        ("check", "--claim", "CHK-99", "--group", "S3"),
        ("check", "--claim", "CHK-01", "--group", "Monster"),
        ("check-all", "--groups", "S3", "--claims", "CHK-01,CHK-77"),
    ],
)
def test_unknown_names_are_input_errors(capsys, argv):
    code, out, err = run(capsys, "-q", *argv)
    assert code == 2
    assert out == ""
    assert "error:" in err


def test_check_all_writes_report(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "reports_dir", str(tmp_path))
    code, out, _ = run(capsys, "-q", "check-all", "--groups", "S3,Q8", "--claims", "CHK-01,CHK-02", "--output", "run.txt")
    assert code == 0
    assert out.splitlines()[-1] == "4 checks: 4 pass, 0 fail, 0 info"
    assert (tmp_path / "run.txt").read_text(encoding="utf-8") == out


def test_check_all_is_byte_identical(capsys):
    argv = ("-q", "check-all", "--groups", "S4,D8", "--claims", "CHK-13,CHK-18")
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


def test_engel_set(capsys):
    code, out, _ = run(capsys, "-q", "engel-set", "--side", "left", "--n", "2", "--group", "S3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "L_2(S3): 3 of 6 elements"
    assert len(lines) == 4


def test_radical(capsys):
    code, out, _ = run(capsys, "-q", "radical", "--kind", "baer", "--group", "S4")
    assert code == 0
    assert out.startswith("baer radical of S4: order 4, generated by ")


def test_eval_expr(capsys):
    code, out, _ = run(capsys, "-q", "eval-expr", "--group", "S3", "--base", "b", "--expr", "2a-1", "--env", "a=a")
    assert code == 0
    assert out == "1\n"
    code, _, err = run(capsys, "-q", "eval-expr", "--group", "S3", "--base", "b", "--expr", "2a-1")
    assert code == 2
    assert "not bound" in err


def test_collect(capsys):
    code, out, _ = run(capsys, "-q", "collect", "--rank", "2", "--class", "2", "--word", "abab^-1")
    assert code == 0
    assert out.splitlines() == ["a^2 [b,a]", "2 0 1"]
    code, _, _ = run(capsys, "-q", "collect", "--rank", "5", "--class", "2", "--word", "a")
    assert code == 2


def test_hall_basis(capsys):
    code, out, _ = run(capsys, "-q", "hall-basis", "--rank", "2", "--class", "3")
    assert code == 0
    assert [line.split()[-1] for line in out.splitlines()] == ["a", "b", "[b,a]", "[b,a,a]", "[b,a,b]"]


def test_symbolic_exit_codes(capsys):
    code, out, _ = run(capsys, "-q", "theorem2-sym", "--instance-len", "1", "--conj-len", "0")
    assert code == 1
    assert out.startswith("Inconclusive")
    code, out, _ = run(capsys, "-q", "theorem2-sym", "--instance-len", "1", "--conj-len", "1")
    assert code == 0
    assert out.startswith("Verified (L=1, C=1, 20 relator instances;")
    code, _, _ = run(capsys, "-q", "theorem2-sym", "--instance-len", "0", "--conj-len", "1")
    assert code == 2
    code, _, _ = run(capsys, "-q", "theorem2-sym", "--instance-len", "1", "--conj-len", "-1")
    assert code == 2
    code, _, err = run(capsys, "-q", "theorem2-sym", "--instance-len", "3", "--conj-len", "3", "--cap", "10")
    assert code == 2
    assert "cap" in err


def test_load_cayley_table(capsys, tmp_path):
    path = tmp_path / "v4.txt"
    path.write_text(KLEIN_FOUR, encoding="utf-8")
    code, out, _ = run(capsys, "-q", "load", "--cayley", str(path), "--name", "V4")
    assert code == 0
    assert out.split()[:3] == ["V4", "order", "4"]

    code, out, _ = run(capsys, "-q", "load", "--cayley", str(path), "--name", "V4", "--dump")
    assert code == 0
    assert out == "# V4\n" + KLEIN_FOUR

    code, out, _ = run(capsys, "-q", "load", "--cayley", str(path), "--claims", "CHK-01,CHK-02")
    assert code == 0
    assert out.splitlines()[-1] == "2 checks: 2 pass, 0 fail, 0 info"


def test_load_errors(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 1\n1 1\n", encoding="utf-8")
    assert run(capsys, "-q", "load", "--cayley", str(bad))[0] == 2
    assert run(capsys, "-q", "load", "--cayley", str(tmp_path / "missing.txt"))[0] == 2
    assert run(capsys, "-q", "load")[0] == 2


def test_load_permutations(capsys, tmp_path):
    path = tmp_path / "s3.perms"
    path.write_text("a = (1 2)\nb = (1 2 3)\n", encoding="utf-8")
    code, out, _ = run(capsys, "-q", "load", "--perms", str(path), "--name", "MyS3")
    assert code == 0
    assert out.split()[:3] == ["MyS3", "order", "6"]


@pytest.mark.slow
def test_list_groups(capsys):
    code, out, _ = run(capsys, "-q", "list-groups")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) >= 30
    assert any(line.split()[0] == "A5" and "class  -" in line for line in lines)
