"""Command-line front end.

Subcommands: ``enumerate``, ``classify``, ``hom``, ``lift``, ``export-dot``.
Exit codes: 0 ok, 2 verdict mismatch, 3 inconclusive search present,
4 usage error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .cover import LiftFailure, lift_or_explain
from .digraph import (
    Digraph,
    as_cycle,
    automorphisms,
    cycle_of_word,
    enumerate_cycles,
    path_of_word,
    product_of_words,
    to_dot,
)
from .homsearch import Homomorphism, hom_search
from .pathcond import (
    DEFAULT_BRUTEFORCE_GIRTH,
    WitnessParams,
    path_condition_bruteforce,
    path_condition_syntactic,
    path_condition_word_criterion,
)
from .slupecki import INCONCLUSIVE, find_slupecki_counterexample
from .words import WordError, check_word

log = logging.getLogger("reflexcycles")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_MISMATCH, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 2, 3, 4
ALL_METHODS = ("syntactic", "bruteforce", "word-criterion", "slupecki")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    girth_lo: int
    girth_hi: int
    methods: tuple[str, ...] = ("syntactic", "bruteforce")
    witness_N: Optional[int] = None
    arities: Optional[tuple[int, ...]] = None  # None: the default ladder
    budget_nodes: int = 10**8
    budget_secs: Optional[float] = None
    jobs: int = 1
    cache: Optional[str] = None
    fmt: str = "json"
    max_bruteforce_girth: int = DEFAULT_BRUTEFORCE_GIRTH

    def __post_init__(self):
        if not 3 <= self.girth_lo <= self.girth_hi:
            raise UsageError("girth range must satisfy 3 <= A <= B")
        bad = [m for m in self.methods if m not in ALL_METHODS]
        if bad or not self.methods:
            raise UsageError(f"unknown method(s) {bad}; choose from {', '.join(ALL_METHODS)}")
        if self.budget_nodes < 1 or (self.budget_secs is not None and self.budget_secs <= 0):
            raise UsageError("budgets must be positive")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.witness_N is not None and self.witness_N < 1:
            raise UsageError("--witness-N must be positive")
        if self.arities is not None and any(k < 2 for k in self.arities):
            raise UsageError("--arity must be at least 2")
        if self.fmt not in ("json", "csv"):
            raise UsageError("--format must be json or csv")

    def arities_for(self, girth: int) -> tuple[int, ...]:
        if self.arities is not None:
            return self.arities
        # k=2 up to girth 6, k=3 only at girth 4
        if girth == 4:
            return (2, 3)
        return (2,) if girth <= 6 else ()

    def fingerprint(self) -> str:
        d = asdict(self)
        for k in ("girth_lo", "girth_hi", "jobs", "cache", "fmt"):
            d.pop(k)
        return json.dumps(d, sort_keys=True)


def classify_one(word: str, config: RunConfig) -> tuple[dict, dict]:
    """One record plus its timings (kept apart so reports stay reproducible)."""
    cid = as_cycle(word)
    cyc = cid.graph
    timings: dict = {}
    pc: dict = {}
    slup: list = []
    mismatch = []
    syn = None
    if "syntactic" in config.methods:
        syn = path_condition_syntactic(cid)
        pc["syntactic"] = syn.to_json()
        timings["syntactic"] = syn.seconds
    if "bruteforce" in config.methods:
        if cid.girth > config.max_bruteforce_girth:
            pc["bruteforce"] = {"skipped": f"girth above {config.max_bruteforce_girth}"}
        else:
            bf = path_condition_bruteforce(cid, max_girth=config.max_bruteforce_girth)
            pc["bruteforce"] = bf.to_json()
            timings["bruteforce"] = bf.seconds
            if syn is not None and syn.fails != bf.fails:
                mismatch.append("syntactic!=bruteforce")
    if "word-criterion" in config.methods:
        params = WitnessParams(config.witness_N) if config.witness_N else None
        wc = path_condition_word_criterion(cid, params)
        pc["word-criterion"] = wc.to_json()
        timings["word-criterion"] = wc.seconds
    if "slupecki" in config.methods:
        for k in config.arities_for(cid.girth):
            o = find_slupecki_counterexample(cyc, k, config.budget_nodes, config.budget_secs)
            slup.append(o.to_json())
            timings[f"slupecki_k{k}"] = o.wall_time
            # a counterexample on a cycle that satisfies the path condition contradicts the theory
            if o.is_counterexample and syn is not None and not syn.fails and cid.girth >= 4:
                mismatch.append(f"slupecki-k{k}-counterexample-with-path-condition")
    record = {
        "schema_version": SCHEMA_VERSION,
        "canonical_word": cid.canonical_word,
        "girth": cid.girth,
        "path_condition": pc,
        "slupecki": slup,
        "automorphism_count": len(automorphisms(cyc)),
        "mismatch": mismatch,
    }
    return record, timings


def _cache_path(cache: str, word: str, config: RunConfig) -> Path:
    key = hashlib.sha256(f"{word}\0{config.fingerprint()}\0{__version__}".encode()).hexdigest()
    return Path(cache) / f"{key}.json"


def _job(args):
    word, config = args
    if config.cache:
        p = _cache_path(config.cache, word, config)
        if p.exists():
            return json.loads(p.read_text()), {"cached": True}
    rec, tim = classify_one(word, config)
    if config.cache:
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(".tmp")
        tmp.write_text(json.dumps(rec, sort_keys=True))
        tmp.replace(p)
    return rec, tim


def run_classify(config: RunConfig) -> tuple[list[dict], list[dict]]:
    words = [c.canonical_word for n in range(config.girth_lo, config.girth_hi + 1) for c in enumerate_cycles(n)]
    tasks = [(w, config) for w in words]
    if config.jobs > 1:
        with ProcessPoolExecutor(config.jobs) as ex:
            results = list(ex.map(_job, tasks))
    else:
        results = [_job(t) for t in tasks]
    records = [r for r, _ in results]
    timings = [{"canonical_word": r["canonical_word"], **t} for r, t in results]
    return records, timings


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["canonical_word", "girth", "syntactic_fails", "bruteforce_fails", "slupecki", "automorphism_count", "mismatch"])
    for r in records:
        pc = r["path_condition"]
        bf = pc.get("bruteforce")
        w.writerow([
            r["canonical_word"],
            r["girth"],
            pc["syntactic"]["fails"] if "syntactic" in pc else "",
            ("skipped" if "skipped" in bf else bf["fails"]) if bf else "",
            ";".join(f"{o['arity']}:{o['verdict']}" for o in r["slupecki"]),
            r["automorphism_count"],
            ";".join(r["mismatch"]),
        ])
    return buf.getvalue()


def exit_code(records: list[dict]) -> int:
    if any(r["mismatch"] for r in records):
        return EXIT_MISMATCH
    if any(o["verdict"] == INCONCLUSIVE for r in records for o in r["slupecki"]):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _girth_range(s: str) -> tuple[int, int]:
    parts = s.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {s!r}") from None
    return lo, hi


def _word(s: str) -> str:
    try:
        return check_word(s)
    except WordError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _pin(s: str) -> tuple[int, int]:
    try:
        a, b = s.split("=")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"pin must look like SRC=DST, got {s!r}") from None


def _graph(word: str, cycle: bool) -> Digraph:
    return cycle_of_word(word) if cycle else path_of_word(word)


def cmd_enumerate(args) -> int:
    if args.n < 3:
        raise UsageError("girth must be at least 3")
    for c in enumerate_cycles(args.n):
        print(c.canonical_word)
    return EXIT_OK


def cmd_classify(args) -> int:
    lo, hi = args.girth
    config = RunConfig(
        lo,
        hi,
        methods=tuple(m.strip() for m in args.methods.split(",") if m.strip()),
        witness_N=args.witness_N,
        arities=tuple(args.arity) if args.arity else None,
        budget_nodes=args.budget_nodes,
        budget_secs=args.budget_secs,
        jobs=args.jobs,
        cache=args.cache,
        fmt=args.format,
    )
    t0 = time.perf_counter()
    records, timings = run_classify(config)
    text = render(records, config.fmt)
    if args.out:
        Path(args.out).write_text(text)
        tpath = Path(args.out + ".timings.json")
        tpath.write_text(json.dumps({"total_seconds": time.perf_counter() - t0, "records": timings}, indent=1))
    else:
        sys.stdout.write(text)
    code = exit_code(records)
    for r in records:
        if r["mismatch"]:
            log.error("verdict mismatch on %s: %s", r["canonical_word"], ", ".join(r["mismatch"]))
    return code


def cmd_hom(args) -> int:
    k = _graph(args.source, args.from_cycle)
    h = _graph(args.target, args.to_cycle)
    pins = dict(args.pin or [])
    for a, b in pins.items():
        if not (0 <= a < k.n and 0 <= b < h.n):
            raise UsageError(f"pin {a}={b} out of range")
    f = hom_search(k, h, pins)
    if f is None:
        print("none")
    else:
        print(" ".join(f"{v}->{x}" for v, x in enumerate(f.assignment)))
    return EXIT_OK


def cmd_lift(args) -> int:
    g = cycle_of_word(args.cycle)
    if args.product:
        k = product_of_words(args.product)
        f = hom_search(k, g, rng=random.Random(args.seed))
        if f is None:
            print("none: no homomorphism from the product")
            return EXIT_OK
    else:
        k = g
        f = Homomorphism(g, g, tuple(range(g.n)))
    try:
        lf = lift_or_explain(k, f, u=args.base)
    except LiftFailure as e:
        print(e)
        return EXIT_OK
    for v in range(k.n):
        print(f"{v} -> ({f[v]}, {lf.levels[v]})")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    g = _graph(args.word, not args.path)
    text = to_dot(g, name=args.name, loops=args.loops)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="reflexcycles", description="Verification workbench for reflexive cycles.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", help="list canonical cycle words of one girth")
    e.add_argument("n", type=int)
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("classify", help="run the deciders over a girth range")
    c.add_argument("--girth", type=_girth_range, required=True, metavar="A..B")
    c.add_argument("--methods", default="syntactic,bruteforce")
    c.add_argument("--arity", type=int, action="append", help="repeatable; default ladder otherwise")
    c.add_argument("--witness-N", type=int, dest="witness_N")
    c.add_argument("--budget-nodes", type=int, default=10**8)
    c.add_argument("--budget-secs", type=float)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--cache", metavar="DIR")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--out", metavar="FILE")
    c.set_defaults(func=cmd_classify)

    h = sub.add_parser("hom", help="find a homomorphism between two path or cycle words")
    h.add_argument("--from", dest="source", type=_word, required=True)
    h.add_argument("--to", dest="target", type=_word, required=True)
    h.add_argument("--from-cycle", action="store_true", help="read --from as a cycle word")
    h.add_argument("--to-cycle", action="store_true", help="read --to as a cycle word")
    h.add_argument("--pin", type=_pin, action="append", metavar="SRC=DST")
    h.set_defaults(func=cmd_hom)

    lf = sub.add_parser("lift", help="lift a map into a cycle through its cover")
    lf.add_argument("--cycle", type=_word, required=True)
    lf.add_argument(
        "--product", type=_word, nargs="+", action="extend",
        help="path words (repeatable; write --product=-** for words starting with -); default lifts the identity",
    )
    lf.add_argument("--seed", type=int, default=0)
    lf.add_argument("--base", type=int, default=0)
    lf.set_defaults(func=cmd_lift)

    d = sub.add_parser("export-dot", help="write a cycle (or path) as Graphviz DOT")
    d.add_argument("word", type=_word)
    d.add_argument("--path", action="store_true", help="read the word as a path")
    d.add_argument("--loops", action="store_true")
    d.add_argument("--name", default="G")
    d.add_argument("--out", metavar="FILE")
    d.set_defaults(func=cmd_export_dot)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, WordError) as e:
        print(f"reflexcycles: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
