"""
Run store for xlab.
Thread-safe SQLite operations with thread-local connections.

``runs`` keeps one manifest per CLI invocation; ``levels`` keeps completed
generation levels of extremal searches so an interrupted run can resume.
"""

import hashlib
import json
import logging
import os
import sqlite3
import threading
import uuid
from contextlib import contextmanager
from datetime import datetime, timedelta
from pathlib import Path
from typing import NamedTuple, Optional

from models import RunManifest

logger = logging.getLogger(__name__)

DB_ENV = "XLAB_DB"
_local = threading.local()


class StoredLevel(NamedTuple):
    level: int
    threshold: int
    graphs: list[str]
    frontier_hash: str
    nodes: int


def db_path() -> Path:
    return Path(os.environ.get(DB_ENV) or Path(__file__).parent / "xlab_runs.db")


def get_connection() -> sqlite3.Connection:
    """Get a thread-local database connection."""
    path = str(db_path())
    if getattr(_local, "path", None) != path:
        if getattr(_local, "connection", None) is not None:
            _local.connection.close()
        _local.connection = sqlite3.connect(path, check_same_thread=False)
        _local.connection.row_factory = sqlite3.Row
        _local.path = path
    return _local.connection


@contextmanager
def get_cursor():
    """Context manager for database cursor with auto-commit."""
    conn = get_connection()
    cursor = conn.cursor()
    try:
        yield cursor
        conn.commit()
    except Exception:
        conn.rollback()
        raise
    finally:
        cursor.close()


def init_db():
    """Initialize the database schema."""
    with get_cursor() as cursor:
        cursor.execute("""
            CREATE TABLE IF NOT EXISTS runs (
                run_id TEXT PRIMARY KEY,
                command TEXT NOT NULL,
                parameters TEXT NOT NULL,
                created TEXT NOT NULL,
                exit_code INTEGER NOT NULL,
                manifest TEXT NOT NULL
            )
        """)
        cursor.execute("""
            CREATE TABLE IF NOT EXISTS levels (
                family TEXT NOT NULL,
                n INTEGER NOT NULL,
                target INTEGER NOT NULL,
                level INTEGER NOT NULL,
                threshold INTEGER NOT NULL,
                graphs TEXT NOT NULL,
                frontier_hash TEXT NOT NULL,
                nodes INTEGER NOT NULL DEFAULT 0,
                run_id TEXT NOT NULL DEFAULT '',
                PRIMARY KEY (family, n, target, level)
            )
        """)
        cursor.execute("PRAGMA table_info(levels)")
        columns = [row[1] for row in cursor.fetchall()]
        if "nodes" not in columns:
            cursor.execute("ALTER TABLE levels ADD COLUMN nodes INTEGER NOT NULL DEFAULT 0")
        if "run_id" not in columns:
            cursor.execute("ALTER TABLE levels ADD COLUMN run_id TEXT NOT NULL DEFAULT ''")
        cursor.execute("""
            CREATE INDEX IF NOT EXISTS idx_runs_created
            ON runs(created)
        """)


def frontier_hash(graphs_g6: list[str]) -> str:
    """Order-independent digest of a generation level."""
    digest = hashlib.sha256()
    for text in sorted(graphs_g6):
        digest.update(text.encode())
        digest.update(b"\n")
    return digest.hexdigest()[:16]


def save_run(manifest: RunManifest, run_id: Optional[str] = None) -> str:
    """Store a manifest and return its run id."""
    run_id = run_id or str(uuid.uuid4())
    created = (manifest.started or datetime.utcnow()).isoformat()
    with get_cursor() as cursor:
        cursor.execute(
            """
            INSERT INTO runs (run_id, command, parameters, created, exit_code, manifest)
            VALUES (?, ?, ?, ?, ?, ?)
            """,
            (
                run_id,
                manifest.command,
                json.dumps(manifest.parameters, sort_keys=True, default=str),
                created,
                manifest.exit_code,
                manifest.model_dump_json(),
            ),
        )
    return run_id


def get_run(run_id: str) -> Optional[RunManifest]:
    with get_cursor() as cursor:
        cursor.execute("SELECT manifest FROM runs WHERE run_id = ?", (run_id,))
        row = cursor.fetchone()
    if row is None:
        return None
    return RunManifest.model_validate_json(row["manifest"])


def list_runs(command: Optional[str] = None, limit: int = 50) -> list[dict]:
    """Newest runs first, without their payloads."""
    query = "SELECT run_id, command, parameters, created, exit_code FROM runs"
    args: tuple = ()
    if command is not None:
        query += " WHERE command = ?"
        args = (command,)
    query += " ORDER BY created DESC LIMIT ?"
    with get_cursor() as cursor:
        cursor.execute(query, args + (limit,))
        rows = cursor.fetchall()
    return [
        {
            "run_id": row["run_id"],
            "command": row["command"],
            "parameters": json.loads(row["parameters"]),
            "created": row["created"],
            "exit_code": row["exit_code"],
        }
        for row in rows
    ]


def save_level(
    family_key: str,
    n: int,
    target: int,
    level: int,
    threshold: int,
    graphs_g6: list[str],
    nodes: int = 0,
    run_id: str = "",
) -> str:
    """Record a completed generation level; returns its frontier hash.

    ``family_key`` names the family by content; ``nodes`` is the search
    effort spent up to and including this level.
    """
    digest = frontier_hash(graphs_g6)
    with get_cursor() as cursor:
        cursor.execute(
            """
            INSERT OR REPLACE INTO levels
                (family, n, target, level, threshold, graphs, frontier_hash, nodes, run_id)
            VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
            """,
            (family_key, n, target, level, threshold, json.dumps(sorted(graphs_g6)), digest, nodes, run_id),
        )
    return digest


def load_level(family_key: str, n: int, target: int, run_id: str = "") -> Optional[StoredLevel]:
    """Deepest stored level, or None.

    With ``run_id`` the search's levels are handed to that run, so they stay
    referenced as long as it is kept.
    """
    with get_cursor() as cursor:
        cursor.execute(
            """
            SELECT level, threshold, graphs, frontier_hash, nodes FROM levels
            WHERE family = ? AND n = ? AND target = ?
            ORDER BY level DESC LIMIT 1
            """,
            (family_key, n, target),
        )
        row = cursor.fetchone()
        if row is not None and run_id:
            cursor.execute(
                "UPDATE levels SET run_id = ? WHERE family = ? AND n = ? AND target = ?",
                (run_id, family_key, n, target),
            )
    if row is None:
        return None
    graphs = json.loads(row["graphs"])
    if frontier_hash(graphs) != row["frontier_hash"]:
        logger.warning(f"Stored level {row['level']} for {family_key} n={n} fails its hash; ignoring")
        return None
    return StoredLevel(row["level"], row["threshold"], graphs, row["frontier_hash"], row["nodes"])


def delete_runs_older_than(days: int = 30) -> tuple[int, int]:
    """Remove manifests older than ``days`` and every level no kept run refers to.

    Returns (runs deleted, levels deleted).
    """
    threshold = (datetime.utcnow() - timedelta(days=days)).isoformat()
    with get_cursor() as cursor:
        cursor.execute("DELETE FROM runs WHERE created < ?", (threshold,))
        runs = cursor.rowcount
        cursor.execute("DELETE FROM levels WHERE run_id NOT IN (SELECT run_id FROM runs)")
        levels = cursor.rowcount
    logger.info(f"Pruned {runs} runs and {levels} levels")
    return runs, levels
