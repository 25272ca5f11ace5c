"""
Run store: manifests and saved generation levels in a scratch database.
"""
import os
import tempfile
from contextlib import contextmanager
from datetime import datetime

import run_store
from models import ExtremalReport, RunManifest


@contextmanager
def scratch_db():
    with tempfile.TemporaryDirectory() as tmp:
        os.environ[run_store.DB_ENV] = os.path.join(tmp, "runs.db")
        try:
            run_store.init_db()
            yield
        finally:
            del os.environ[run_store.DB_ENV]


def _manifest(command="ex", started=None, exit_code=0):
    payload = ExtremalReport(
        n=5, family="K3", value=6, extremal=["DFw"], method="exhaustive", nodes_explored=10, elapsed=0.0
    )
    return RunManifest(
        command=command,
        parameters={"n": 5, "family": "K3"},
        tool_version="test",
        started=started,
        elapsed=0.0,
        exit_code=exit_code,
        payload=payload,
    )


def test_save_and_get_run():
    with scratch_db():
        run_id = run_store.save_run(_manifest())
        stored = run_store.get_run(run_id)
        assert stored is not None
        assert stored.payload.value == 6
        assert stored.parameters == {"n": 5, "family": "K3"}
        assert run_store.get_run("missing") is None


def test_list_runs_filters_by_command():
    with scratch_db():
        run_store.save_run(_manifest("ex"))
        run_store.save_run(_manifest("spex"))
        run_store.save_run(_manifest("ex", exit_code=5))
        assert len(run_store.list_runs()) == 3
        rows = run_store.list_runs("ex")
        assert {row["exit_code"] for row in rows} == {0, 5}
        assert len(run_store.list_runs(limit=1)) == 1


def test_delete_old_runs():
    with scratch_db():
        run_store.save_run(_manifest(started=datetime(2000, 1, 1)), "old")
        run_store.save_run(_manifest(), "new")
        run_store.save_level("fam", 6, 0, 1, 0, ["@"], run_id="old")
        run_store.save_level("fam", 7, 0, 1, 0, ["@"], run_id="new")
        run_store.save_level("fam", 8, 0, 1, 0, ["@"])
        assert run_store.delete_runs_older_than(30) == (1, 2)
        assert len(run_store.list_runs()) == 1
        assert run_store.load_level("fam", 6, 0) is None
        assert run_store.load_level("fam", 7, 0) is not None


def test_levels_keep_the_deepest():
    with scratch_db():
        assert run_store.load_level("K3", 6, 0) is None
        run_store.save_level("K3", 6, 0, 1, 0, ["@"], nodes=1)
        digest = run_store.save_level("K3", 6, 0, 2, 0, ["A_", "A?"], nodes=3)
        stored = run_store.load_level("K3", 6, 0)
        assert (stored.level, stored.threshold) == (2, 0)
        assert stored.graphs == ["A?", "A_"]
        assert stored.frontier_hash == digest
        assert stored.nodes == 3
        assert run_store.load_level("K3", 7, 0) is None


def test_loading_levels_hands_them_to_the_run():
    with scratch_db():
        run_store.save_run(_manifest(started=datetime(2000, 1, 1)), "first")
        run_store.save_level("K3", 6, 0, 1, 0, ["@"], run_id="first")
        run_store.save_run(_manifest(), "second")
        run_store.load_level("K3", 6, 0, run_id="second")
        assert run_store.delete_runs_older_than(30) == (1, 0)
        assert run_store.load_level("K3", 6, 0) is not None


def test_older_schema_gains_columns():
    with scratch_db():
        with run_store.get_cursor() as cursor:
            cursor.execute("DROP TABLE levels")
            cursor.execute("""
                CREATE TABLE levels (
                    family TEXT NOT NULL, n INTEGER NOT NULL, target INTEGER NOT NULL,
                    level INTEGER NOT NULL, threshold INTEGER NOT NULL, graphs TEXT NOT NULL,
                    frontier_hash TEXT NOT NULL, PRIMARY KEY (family, n, target, level)
                )
            """)
        run_store.init_db()
        run_store.save_level("K3", 5, 0, 1, 0, ["@"], nodes=2, run_id="x")
        assert run_store.load_level("K3", 5, 0).nodes == 2


def test_frontier_hash_ignores_order():
    assert run_store.frontier_hash(["A_", "A?"]) == run_store.frontier_hash(["A?", "A_"])
    assert run_store.frontier_hash(["A_"]) != run_store.frontier_hash(["A?"])
    assert len(run_store.frontier_hash([])) == 16


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
