"""Shared process pool for search fan-out.

The pool is created lazily inside the event loop of the search that needs
it and torn down when that search finishes (``close_pool``) or at
interpreter exit (``shutdown_pool``). A singleton ``multiprocessing.Manager``
supplies the cross-process stop event workers poll between parent graphs.
"""

import atexit
import logging
import multiprocessing
import multiprocessing.managers
import os
import platform
import threading
from typing import Optional

import aiomultiprocess as amp

logger = logging.getLogger(__name__)

if platform.system() != "Windows":
    amp.set_start_method("fork")

THREADS_ENV = "XLAB_THREADS"

_pool: amp.Pool | None = None
_manager: multiprocessing.managers.SyncManager | None = None
_pool_lock = threading.Lock()


def resolve_threads(threads: Optional[int] = None) -> int:
    """--threads, else XLAB_THREADS, else the core count; never below 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError:
                logger.warning(f"Ignoring non-integer {THREADS_ENV}={env!r}")
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, threads)


def get_pool(processes: int) -> amp.Pool:
    """Return the shared pool, creating it on first call.

    Must be called from inside a running event loop.
    """
    global _pool
    with _pool_lock:
        if _pool is None:
            _pool = amp.Pool(processes=processes)
            logger.info(f"Pool created with {processes} processes")
        return _pool


async def close_pool() -> None:
    """Let running chunks finish, then join the worker processes."""
    global _pool
    with _pool_lock:
        if _pool is None:
            return
        pool = _pool
        _pool = None
    pool.close()
    await pool.join()
    logger.info("Pool closed")


def shutdown_pool() -> None:
    """Terminate the pool and kill all its subprocesses."""
    global _pool
    with _pool_lock:
        if _pool is None:
            return
        pool = _pool
        _pool = None
    logger.info("Terminating pool and killing subprocesses")
    try:
        pool.terminate()
    except Exception as e:
        logger.warning(f"pool.terminate() error: {e}")
    logger.info("Pool shut down")


def get_manager() -> multiprocessing.managers.SyncManager:
    """Return a singleton Manager for cross-process proxy objects."""
    global _manager
    if _manager is None:
        _manager = multiprocessing.Manager()
    return _manager


atexit.register(shutdown_pool)
