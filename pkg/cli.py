"""
xlab command line.

Every command prints one JSON document on stdout (a RunManifest, or a JSON
schema for ``schema``); logs go to stderr.

Exit codes: 0 success, 1 verification failure, 2 parse or graph error,
3 domain precondition, 4 budget, 5 incomplete search.
"""

import argparse
import json
import logging
import sys
import time
import uuid
from datetime import datetime
from typing import Optional

from pydantic import BaseModel

import run_store
from constructions import named_construction
from decomposition import decomposition_family
from errors import XlabError
from extremal_search import ex_oracle, ex_search
from families import parse_family
from graph_core import to_graph6
from models import (
    ConstructionReport,
    DecompositionReport,
    ExtremalReport,
    RunManifest,
    SpexReport,
    VerifyReport,
)
from spectral import TIE_TOL, TOL, spex_search
from verify import SUITES, exceptions_of, run_suite

logger = logging.getLogger(__name__)

__version__ = "0.1.0"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INCOMPLETE = 5

SCHEMAS: dict[str, type[BaseModel]] = {
    "decompose": DecompositionReport,
    "ex": ExtremalReport,
    "spex": SpexReport,
    "verify": VerifyReport,
    "construct": ConstructionReport,
    "manifest": RunManifest,
}


def parse_range(text: str) -> tuple[int, int]:
    """``6..9`` -> (6, 9); a bare ``7`` -> (7, 7)."""
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected N or A..B, got {text!r}")


def parse_param(text: str) -> tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"Expected key=value, got {text!r}")
    try:
        return key.replace("-", "_"), int(value)
    except ValueError:
        return key.replace("-", "_"), value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xlab", description="Exact desk-scale extremal graph computations")
    parser.add_argument("--threads", type=int, default=None, help="worker processes (default: XLAB_THREADS or cores)")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    parser.add_argument("--deterministic", action="store_true", help="omit timestamps and timings")
    parser.add_argument("--budget", type=int, default=None, help="search node budget")
    parser.add_argument("--store", action=argparse.BooleanOptionalAction, default=True,
                        help="record manifests and search levels in the run store")
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decomposition family and the matching/star criterion")
    p.add_argument("--family", required=True)

    p = sub.add_parser("ex", help="ex(n,H) and EX(n,H)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--mode", choices=["oracle", "search"], default="search")

    p = sub.add_parser("spex", help="spex(n,H) and SPEX(n,H)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--tol", type=float, default=TOL)
    p.add_argument("--tie-tol", type=float, default=TIE_TOL)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--id", required=True, choices=sorted(SUITES))
    p.add_argument("--n", type=parse_range, default=None, help="N or A..B")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--F", dest="pattern", default=None)
    p.add_argument("--families", nargs="+", default=None)
    p.add_argument("--r", type=int, nargs="+", default=None)
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--nu-max", type=int, default=None)
    p.add_argument("--delta-max", type=int, default=None)
    p.add_argument("--s", type=int, default=None)

    p = sub.add_parser("construct", help="emit a named construction")
    p.add_argument("--name", required=True)
    p.add_argument("--param", type=parse_param, action="append", default=[], help="key=value")

    p = sub.add_parser("runs", help="list stored manifests")
    p.add_argument("--show", default=None, help="print one stored manifest")
    p.add_argument("--filter", dest="only", default=None, help="only this command")
    p.add_argument("--limit", type=int, default=50)
    p.add_argument("--prune", type=int, default=None, metavar="DAYS",
                   help="delete runs older than DAYS and the levels no kept run uses")

    p = sub.add_parser("schema", help="JSON schema of a payload")
    p.add_argument("--command", dest="target", required=True, choices=sorted(SCHEMAS))
    return parser


def _search_options(args: argparse.Namespace, run_id: str) -> dict:
    return {"threads": args.threads, "budget": args.budget, "store": args.store, "run_id": run_id}


def _verify_params(args: argparse.Namespace, run_id: str) -> dict:
    """Translate generic verify flags into the chosen suite's keywords."""
    claim = args.id
    params: dict = {}
    if args.n is not None:
        if claim == "Ex6":
            params["n"] = args.n[1]
        else:
            params["n_min"], params["n_max"] = args.n
    if args.n_max is not None:
        params["n_max"] = args.n_max
    if claim in ("1.2", "1.3", "1.4", "1.5"):
        params.update(threads=args.threads, budget=args.budget, store=args.store, run_id=run_id)
        if args.families and claim in ("1.2", "1.3"):
            params["families"] = tuple(args.families)
        if claim in ("1.4", "1.5"):
            if args.pattern:
                params["pattern"] = args.pattern
            if args.k is not None:
                params["k"] = args.k
    elif claim == "L2.2":
        if args.nu_max is not None:
            params["nu_max"] = args.nu_max
        if args.delta_max is not None:
            params["delta_max"] = args.delta_max
    elif claim in ("L3.3", "L3.4", "E5.1"):
        if args.r:
            params["r_values"] = tuple(args.r)
        if claim == "L3.3":
            params.pop("n_min", None)
        if claim == "E5.1":
            params.pop("n_min", None)
            if args.k is not None:
                params["k_max"] = args.k
        if claim == "L3.4" and args.k is not None:
            params["alpha_max"] = args.k
    elif claim == "E5.6":
        params.pop("n_min", None)
        params["seed"] = args.seed
        if args.cases is not None:
            params["cases"] = args.cases
    elif claim == "Ex6":
        if args.s is not None:
            params["s"] = args.s
        if args.budget is not None:
            params["budget"] = args.budget
    return params


def _run(args: argparse.Namespace, run_id: str) -> tuple[BaseModel, int, list]:
    """Dispatch one command; returns (payload, exit code, exceptions log)."""
    if args.command == "decompose":
        return decomposition_family(parse_family(args.family)), EXIT_OK, []
    if args.command == "ex":
        fam = parse_family(args.family)
        if args.mode == "oracle":
            report = ex_oracle(args.n, fam)
        else:
            report = ex_search(args.n, fam, **_search_options(args, run_id))
        return report, EXIT_OK if report.complete else EXIT_INCOMPLETE, []
    if args.command == "spex":
        fam = parse_family(args.family)
        report = spex_search(args.n, fam, tol=args.tol, tie_tol=args.tie_tol, **_search_options(args, run_id))
        return report, EXIT_OK if report.complete else EXIT_INCOMPLETE, []
    if args.command == "verify":
        report = run_suite(args.id, **_verify_params(args, run_id))
        code = EXIT_VERIFY_FAILED if report.hard_failures else EXIT_OK
        return report, code, exceptions_of(report)
    if args.command == "construct":
        params = dict(args.param)
        g, partition = named_construction(args.name, **params)
        report = ConstructionReport(
            name=args.name,
            parameters=params,
            graph6=to_graph6(g),
            n=g.n,
            edge_count=g.edge_count,
            partition=partition,
        )
        return report, EXIT_OK, []
    raise XlabError(f"Unknown command {args.command!r}")


def _scrub(payload: Optional[BaseModel]) -> Optional[BaseModel]:
    if payload is not None and "elapsed" in type(payload).model_fields:
        return payload.model_copy(update={"elapsed": 0.0})
    return payload


def _parameters(args: argparse.Namespace) -> dict:
    skip = {"verbose", "deterministic"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s [%(process)d] %(name)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )

    if args.command == "schema":
        _emit(json.dumps(SCHEMAS[args.target].model_json_schema(), indent=2, sort_keys=True))
        return EXIT_OK
    if args.command == "runs":
        run_store.init_db()
        if args.prune is not None:
            runs, levels = run_store.delete_runs_older_than(args.prune)
            _emit(json.dumps({"runs_deleted": runs, "levels_deleted": levels}, indent=2))
        elif args.show:
            manifest = run_store.get_run(args.show)
            if manifest is None:
                logger.error(f"No stored run {args.show}")
                return 3
            _emit(manifest.model_dump_json(indent=2))
        else:
            _emit(json.dumps(run_store.list_runs(args.only, args.limit), indent=2))
        return EXIT_OK

    run_id = str(uuid.uuid4())
    started = datetime.utcnow()
    clock = time.perf_counter()
    payload, exceptions, error = None, [], None
    try:
        payload, code, exceptions = _run(args, run_id)
    except XlabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        code, error = e.exit_code, f"{type(e).__name__}: {e}"

    manifest = RunManifest(
        command=args.command,
        parameters=_parameters(args),
        tool_version=__version__,
        started=None if args.deterministic else started,
        elapsed=0.0 if args.deterministic else time.perf_counter() - clock,
        exit_code=code,
        payload=_scrub(payload) if args.deterministic else payload,
        error=error,
        exceptions=exceptions,
    )
    if args.store:
        try:
            run_store.init_db()
            saved = run_store.save_run(manifest, run_id)
            logger.info(f"Stored run {saved}")
        except Exception as e:
            logger.warning(f"Could not store run: {e}")
    _emit(manifest.model_dump_json(indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
