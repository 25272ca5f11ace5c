"""
Command-line entry point: exit codes, manifests and the run store.
"""
import io
import json
import os
import tempfile
from contextlib import contextmanager, redirect_stdout

from cli import main, parse_param, parse_range


@contextmanager
def scratch_db():
    with tempfile.TemporaryDirectory() as tmp:
        os.environ["XLAB_DB"] = os.path.join(tmp, "runs.db")
        try:
            yield
        finally:
            del os.environ["XLAB_DB"]


def run(*argv):
    out = io.StringIO()
    with redirect_stdout(out):
        code = main(list(argv))
    return code, json.loads(out.getvalue())


def test_argument_helpers():
    assert parse_range("6..9") == (6, 9)
    assert parse_range("7") == (7, 7)
    assert parse_param("shape=triangle") == ("shape", "triangle")
    assert parse_param("target-part=2") == ("target_part", 2)


def test_decompose():
    code, manifest = run("--no-store", "--deterministic", "decompose", "--family", "K3")
    assert code == 0
    assert manifest["payload"]["family_M"] == ["A_"]
    assert manifest["payload"]["condition_ii"] is True
    assert manifest["started"] is None


def test_deterministic_output_is_stable():
    argv = ("--no-store", "--deterministic", "ex", "--n", "5", "--family", "K3", "--mode", "oracle")
    first = io.StringIO()
    second = io.StringIO()
    with redirect_stdout(first):
        main(list(argv))
    with redirect_stdout(second):
        main(list(argv))
    assert first.getvalue() == second.getvalue()
    assert json.loads(first.getvalue())["payload"]["value"] == 6


def test_resumed_run_prints_the_same_document():
    argv = ("--deterministic", "ex", "--n", "6", "--family", "K3")
    with scratch_db():
        first = io.StringIO()
        second = io.StringIO()
        with redirect_stdout(first):
            main(list(argv))
        with redirect_stdout(second):
            main(list(argv))
    assert first.getvalue() == second.getvalue()
    payload = json.loads(first.getvalue())["payload"]
    assert payload["value"] == 9
    assert payload["nodes_explored"] > 0


def test_levels_follow_family_contents():
    with tempfile.TemporaryDirectory() as tmp, scratch_db():
        path = os.path.join(tmp, "fam.g6")
        with open(path, "w") as f:
            f.write("Bw\n")
        code, triangle = run("ex", "--n", "5", "--family", f"@{path}")
        assert code == 0 and triangle["payload"]["value"] == 6
        with open(path, "w") as f:
            f.write("C~\n")
        code, k4 = run("ex", "--n", "5", "--family", f"@{path}")
        assert code == 0 and k4["payload"]["value"] == 8


def test_runs_prune():
    with scratch_db():
        code, _ = run("ex", "--n", "4", "--family", "K3")
        assert code == 0
        code, counts = run("runs", "--prune", "30")
        assert code == 0
        assert counts == {"runs_deleted": 0, "levels_deleted": 0}
        code, counts = run("runs", "--prune", "-1")
        assert counts["runs_deleted"] == 1 and counts["levels_deleted"] > 0
        code, rows = run("runs")
        assert rows == []


def test_exit_codes():
    code, manifest = run("--no-store", "decompose", "--family", "K2")
    assert code == 3
    assert manifest["error"].startswith("DomainError")
    code, _ = run("--no-store", "ex", "--n", "5", "--family", "Q7")
    assert code == 2
    code, _ = run("--no-store", "ex", "--n", "12", "--family", "K3")
    assert code == 4
    code, manifest = run("--no-store", "--budget", "10", "ex", "--n", "8", "--family", "K3")
    assert code == 5
    assert manifest["payload"]["complete"] is False


def test_construct():
    code, manifest = run("--no-store", "construct", "--name", "spex", "--param", "n=9", "--param", "r=3",
                         "--param", "k=4")
    assert code == 0
    assert manifest["payload"]["edge_count"] == 30
    assert manifest["payload"]["partition"]["sizes"] == [3, 3, 3]


def test_verify_exit_code():
    code, manifest = run("--no-store", "verify", "--id", "L3.3", "--n-max", "8", "--r", "2")
    assert code == 0
    assert manifest["payload"]["summary"]["pass"] > 0


def test_runs_are_stored_and_listed():
    with scratch_db():
        code, _ = run("ex", "--n", "4", "--family", "K3")
        assert code == 0
        code, rows = run("runs", "--filter", "ex")
        assert code == 0 and len(rows) == 1
        code, manifest = run("runs", "--show", rows[0]["run_id"])
        assert manifest["payload"]["value"] == 4


def test_schema():
    code, schema = run("schema", "--command", "ex")
    assert code == 0
    assert "value" in schema["properties"]


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
