"""Command-line surface.

Every run writes its outputs plus a `<command>-manifest.json` recording
the command, parameters, seed, input hashes, output files, versions and
timings, which is enough to reproduce the run bit for bit.

Exit codes: 0 success or pass, 1 verified counterexample found, 2 usage
error, 3 budget exceeded, 4 pipeline failure (extraction failed or
generation gave up), all chosen so CI can tell a genuine counterexample
from a breakdown.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__, catalog, jsonio
from .generators import gen_generic, gen_named
from .ksets import (
    encode_colouring,
    enumerate_presentations,
    find_sunflower_copies,
    verify_witness,
)
from .partitionlab import (
    basic_open_set,
    min_embedding_colouring,
    named_partition,
    partition_report,
)
from .ramsey import (
    GenerationError,
    gen_witness_hypergraph,
    hypergraph_girth,
    is_counterexample_tuple,
    witness_adversary,
)
from .structures import BudgetExceeded, check_3dap_over_empty
from .witness import (
    ExtractionFailed,
    build_witness_chain,
    extract_sunflower,
    paste,
    replay_trace,
    verify_certificate,
)

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_PIPELINE = 4


class _Run:
    """Collects manifest data and writes output files."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.out = Path(getattr(args, "out", ".") or ".")
        self.out.mkdir(parents=True, exist_ok=True)
        self.params = {k: v for k, v in vars(args).items()
                       if k not in ("func", "out") and v is not None}
        self.inputs = []
        self.outputs = []
        self.t0 = time.time()

    def read_json(self, path: str):
        data = Path(path).read_bytes()
        self.inputs.append({"path": str(path),
                            "sha256": hashlib.sha256(data).hexdigest()})
        return json.loads(data)

    def write(self, name: str, payload) -> Path:
        path = self.out / name
        if isinstance(payload, str):
            path.write_text(payload)
        else:
            path.write_text(jsonio.dumps(payload))
        self.outputs.append(str(path))
        return path

    def finish(self, exit_code: int) -> int:
        manifest = {
            "command": self.command,
            "parameters": self.params,
            "seed": self.params.get("seed"),
            "inputs": self.inputs,
            "outputs": self.outputs,
            "versions": {"sunlab": __version__,
                         "python": sys.version.split()[0]},
            "timings": {"wall_seconds": round(time.time() - self.t0, 6)},
            "exit_code": exit_code,
        }
        (self.out / f"{self.command}-manifest.json").write_text(jsonio.dumps(manifest))
        return exit_code


def _load_class(run: _Run, spec: str):
    if spec.startswith("@"):
        return jsonio.classspec_from_json(run.read_json(spec[1:]))
    return catalog.class_by_name(spec)


def _load_structure(run: _Run, spec: str):
    if spec.startswith("@"):
        return jsonio.structure_from_json(run.read_json(spec[1:]))
    return catalog.structure_by_name(spec)


# ---------------------------------------------------------------------------
# Command handlers


def _cmd_gen(args) -> int:
    if not args.id and not args.klass:
        print("error: gen needs --id or --klass", file=sys.stderr)
        return EXIT_USAGE
    run = _Run("gen", args)
    if args.klass:
        K = _load_class(run, args.klass)
        S = gen_generic(K, args.size, args.seed)
    else:
        S = gen_named(args.id, args.size, args.seed)
    run.write("structure.json", jsonio.structure_to_json(S))
    return run.finish(EXIT_OK)


def _cmd_partition(args) -> int:
    run = _Run("partition", args)
    S = jsonio.structure_from_json(run.read_json(args.structure))
    P = named_partition(S, args.scheme, args.anchor)
    run.write("partition.json", jsonio.partition_to_json(P))
    if args.klass:
        K = _load_class(run, args.klass)
        probes = [_load_structure(run, p) for p in (args.probes or [])]
        report = partition_report(S, P, K, probes, args.base_bound)
        if args.format == "csv":
            run.write("report.csv", jsonio.partition_report_to_csv(report))
        else:
            run.write("report.json", jsonio.partition_report_to_json(report))
    return run.finish(EXIT_OK)


def _cmd_open_set(args) -> int:
    run = _Run("open-set", args)
    S = jsonio.structure_from_json(run.read_json(args.structure))
    p = jsonio.qftype_from_json(run.read_json(args.type))
    params = [int(x) for x in args.params.split(",")] if args.params else []
    vertices = basic_open_set(S, params, p)
    run.write("open_set.json", {"vertices": vertices})
    return run.finish(EXIT_OK)


def _cmd_min_colouring(args) -> int:
    run = _Run("min-colouring", args)
    S = jsonio.structure_from_json(run.read_json(args.structure))
    A = jsonio.structure_from_json(run.read_json(args.pattern))
    p = jsonio.qftype_from_json(run.read_json(args.type))
    res = min_embedding_colouring(S, A, p)
    run.write("colouring.json", jsonio.colouring_to_json(res.colouring))
    run.write("min_colouring.json", {
        "sentinel": res.sentinel,
        "flagged": list(res.flagged),
        "embedding_count": res.embedding_count,
    })
    return run.finish(EXIT_OK)


def _cmd_encode(args) -> int:
    run = _Run("encode", args)
    S = jsonio.structure_from_json(run.read_json(args.structure))
    chi = jsonio.colouring_from_json(run.read_json(args.colouring))
    P = encode_colouring(S, chi)
    run.write("presentation.json", jsonio.presentation_to_json(P))
    return run.finish(EXIT_OK)


def _cmd_sunflower_check(args) -> int:
    run = _Run("sunflower-check", args)
    S = jsonio.structure_from_json(run.read_json(args.structure))
    P = jsonio.presentation_from_json(run.read_json(args.presentation), S)
    B = _load_structure(run, args.target)
    certs = find_sunflower_copies(P, B, limit=args.limit)
    run.write("certificates.json",
              {"count": len(certs), "certificates": [jsonio.cert_to_json(c) for c in certs]})
    return run.finish(EXIT_OK)


def _cmd_enumerate(args) -> int:
    run = _Run("enumerate-presentations", args)
    if args.structure:
        C = jsonio.structure_from_json(run.read_json(args.structure))
    else:
        C = catalog.pure_set(args.size)
    try:
        pres = list(enumerate_presentations(C, args.k, args.budget))
    except BudgetExceeded as e:
        run.write("error.json", {"error": str(e)})
        return run.finish(EXIT_BUDGET)
    run.write("presentations.json", {
        "count": len(pres),
        "presentations": [jsonio.presentation_to_json(P)["sets"] for P in pres],
    })
    return run.finish(EXIT_OK)


def _cmd_verify_witness(args) -> int:
    run = _Run("verify-witness", args)
    if args.b_size is not None:
        B = catalog.pure_set(args.b_size)
    else:
        B = _load_structure(run, args.target)
    if args.c_size is not None:
        C = catalog.pure_set(args.c_size)
    else:
        C = jsonio.structure_from_json(run.read_json(args.witness))
    try:
        verdict = verify_witness(C, B, args.k, mode=args.mode,
                                 trials=args.trials, seed=args.seed or 0,
                                 ground_budget=args.budget)
    except BudgetExceeded as e:
        run.write("error.json", {"error": str(e)})
        return run.finish(EXIT_BUDGET)
    run.write("verdict.json", {"passed": verdict.passed, "checked": verdict.checked})
    if verdict.passed:
        return run.finish(EXIT_OK)
    run.write("counterexample.json",
              jsonio.presentation_to_json(verdict.counterexample))
    return run.finish(EXIT_COUNTEREXAMPLE)


def _cmd_hypergraph(args) -> int:
    if args.action == "generate" and args.seed is None:
        print("error: hypergraph generate needs an explicit --seed",
              file=sys.stderr)
        return EXIT_USAGE
    if args.action in ("girth", "adversary") and not args.input:
        print(f"error: hypergraph {args.action} needs --input", file=sys.stderr)
        return EXIT_USAGE
    run = _Run(f"hypergraph-{args.action}", args)
    if args.action == "generate":
        try:
            H = gen_witness_hypergraph(args.n, args.s, args.g, args.seed,
                                       c_override=args.c, c_cap=args.c_cap)
        except GenerationError as e:
            run.write("error.json", {"error": str(e)})
            return run.finish(EXIT_PIPELINE)
        run.write("hypergraph.json", jsonio.hypergraph_to_json(H))
        return run.finish(EXIT_OK)
    H = jsonio.hypergraph_from_json(run.read_json(args.input))
    if args.action == "girth":
        g = hypergraph_girth(H, cap=args.cap)
        run.write("girth.json", {"girth": None if g == float("inf") else g,
                                 "cap": args.cap})
        return run.finish(EXIT_OK)
    if args.action == "adversary":
        try:
            result = witness_adversary(H, args.s, mode=args.mode,
                                       trials=args.trials, seed=args.seed or 0,
                                       budget=args.budget)
        except BudgetExceeded as e:
            run.write("error.json", {"error": str(e)})
            return run.finish(EXIT_BUDGET)
        if result is None:
            run.write("adversary.json", {"counterexample": None})
            return run.finish(EXIT_OK)
        payload = [[list(block) for block in partition] for partition in result]
        assert is_counterexample_tuple(H, result)
        run.write("adversary.json", {"counterexample": payload})
        return run.finish(EXIT_COUNTEREXAMPLE)
    raise AssertionError(args.action)


def _cmd_paste(args) -> int:
    run = _Run("paste", args)
    H = jsonio.hypergraph_from_json(run.read_json(args.hypergraph))
    B = _load_structure(run, args.target)
    K = _load_class(run, args.klass)
    pasted = paste(H, B, K)
    out = jsonio.structure_to_json(pasted.structure)
    run.write("pasted.json", {"structure": out,
                              "parts": [list(p) for p in pasted.parts]})
    return run.finish(EXIT_OK)


def _cmd_build_witness(args) -> int:
    run = _Run("build-witness", args)
    B = _load_structure(run, args.target)
    K = _load_class(run, args.klass)
    chain = build_witness_chain(K, B, args.k, args.seed, c_override=args.c,
                                c_cap=args.c_cap)
    run.write("chain.json", jsonio.chain_to_json(chain))
    return run.finish(EXIT_OK)


def _cmd_extract(args) -> int:
    run = _Run("extract", args)
    chain = jsonio.chain_from_json(run.read_json(args.chain))
    level = args.level or chain.k
    base = chain.levels[level - 1].structure
    P = jsonio.presentation_from_json(run.read_json(args.presentation), base)
    try:
        cert, trace = extract_sunflower(chain, P, level)
    except ExtractionFailed as e:
        run.write("counterexample.json",
                  jsonio.presentation_to_json(e.presentation))
        return run.finish(EXIT_PIPELINE)
    run.write("certificate.json", jsonio.cert_to_json(cert))
    run.write("trace.json", jsonio.trace_to_json(trace))
    if not verify_certificate(cert, chain.target, P):
        run.write("error.json", {"error": "certificate failed re-validation"})
        return run.finish(EXIT_PIPELINE)
    return run.finish(EXIT_OK)


def _cmd_verify_trace(args) -> int:
    run = _Run("verify-trace", args)
    chain = jsonio.chain_from_json(run.read_json(args.chain))
    base = chain.top()
    P = jsonio.presentation_from_json(run.read_json(args.presentation), base)
    trace = jsonio.trace_from_json(run.read_json(args.trace))
    ok = replay_trace(chain, P, trace)
    run.write("trace_verdict.json", {"replay_ok": ok})
    return run.finish(EXIT_OK if ok else EXIT_COUNTEREXAMPLE)


def _cmd_verify_cert(args) -> int:
    run = _Run("verify-cert", args)
    S = jsonio.structure_from_json(run.read_json(args.structure))
    P = jsonio.presentation_from_json(run.read_json(args.presentation), S)
    B = _load_structure(run, args.target)
    cert = jsonio.cert_from_json(run.read_json(args.cert), B, S)
    ok = verify_certificate(cert, B, P)
    run.write("cert_verdict.json", {"valid": ok})
    return run.finish(EXIT_OK if ok else EXIT_COUNTEREXAMPLE)


def _cmd_check_3dap(args) -> int:
    run = _Run("check-3dap", args)
    K = _load_class(run, args.klass)
    try:
        report = check_3dap_over_empty(K, args.bound, budget=args.budget)
    except BudgetExceeded as e:
        run.write("error.json", {"error": str(e)})
        return run.finish(EXIT_BUDGET)
    if report.passed:
        run.write("3dap.json", {"passed": True,
                                "families_checked": report.families_checked})
        return run.finish(EXIT_OK)
    fam = report.counterexample
    run.write("3dap.json", {
        "passed": False,
        "families_checked": report.families_checked,
        "sides": [jsonio.structure_to_json(s) for s in fam.sides],
        "pair_amalgams": {f"{i}{j}": jsonio.structure_to_json(a)
                          for (i, j), a in sorted(fam.amalgams.items())},
    })
    return run.finish(EXIT_COUNTEREXAMPLE)


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="sunlab",
        description="sunflower search workbench for finite relational structures")
    top.add_argument("--threads", type=int, default=1,
                     help="parallelism hint recorded in the manifest")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--out", default=".", help="output directory")
        p.set_defaults(func=fn)
        return p

    p = add("gen", _cmd_gen, help="generate a named or class-generic structure")
    p.add_argument("--id", help="generator name, e.g. knfree:3 or local-order")
    p.add_argument("--klass", "--class", dest="klass",
                   help="class name or @file for the generic builder")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("partition", _cmd_partition, help="apply a named partition scheme")
    p.add_argument("--structure", required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--anchor", type=int)
    p.add_argument("--klass", "--class", dest="klass")
    p.add_argument("--probes", nargs="*")
    p.add_argument("--base-bound", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("open-set", _cmd_open_set, help="realisations of a type over parameters")
    p.add_argument("--structure", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--type", required=True)

    p = add("min-colouring", _cmd_min_colouring,
            help="least-embedding colouring for a pattern and type")
    p.add_argument("--structure", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--type", required=True)

    p = add("encode", _cmd_encode, help="encode a colouring as 2-sets")
    p.add_argument("--structure", required=True)
    p.add_argument("--colouring", required=True)

    p = add("sunflower-check", _cmd_sunflower_check,
            help="search sunflower copies of a target in a presentation")
    p.add_argument("--structure", required=True)
    p.add_argument("--presentation", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--limit", type=int)

    p = add("enumerate-presentations", _cmd_enumerate,
            help="canonical presentations of a structure on k-sets")
    p.add_argument("--structure")
    p.add_argument("--size", type=int, help="pure-set size shortcut")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=18)

    p = add("verify-witness", _cmd_verify_witness,
            help="check that every presentation carries a sunflower copy")
    p.add_argument("--klass", "--class", dest="klass", default="pure")
    p.add_argument("--target", help="target structure name or @file")
    p.add_argument("--b-size", type=int, help="pure-set target size shortcut")
    p.add_argument("--witness", help="witness structure @file")
    p.add_argument("--c-size", type=int, help="pure-set witness size shortcut")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int, default=18)

    p = add("hypergraph", _cmd_hypergraph,
            help="generate / measure / adversarially test witness hypergraphs")
    p.add_argument("action", choices=("generate", "girth", "adversary"))
    p.add_argument("--input")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--g", type=int, default=4)
    p.add_argument("--c", type=int)
    p.add_argument("--c-cap", type=int, default=32)
    p.add_argument("--cap", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--budget", type=int, default=2 * 10 ** 10)

    p = add("paste", _cmd_paste, help="paste a structure into hypergraph edges")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--klass", "--class", dest="klass", required=True)

    p = add("build-witness", _cmd_build_witness, help="build a witness chain")
    p.add_argument("--klass", "--class", dest="klass", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--c", type=int)
    p.add_argument("--c-cap", type=int, default=32)

    p = add("extract", _cmd_extract, help="extract a sunflower certificate")
    p.add_argument("--chain", required=True)
    p.add_argument("--presentation", required=True)
    p.add_argument("--level", type=int)

    p = add("verify-trace", _cmd_verify_trace, help="replay an extraction trace")
    p.add_argument("--chain", required=True)
    p.add_argument("--presentation", required=True)
    p.add_argument("--trace", required=True)

    p = add("verify-cert", _cmd_verify_cert, help="re-validate a certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--presentation", required=True)

    p = add("check-3dap", _cmd_check_3dap,
            help="exhaustive disjoint 3-amalgamation check over the empty base")
    p.add_argument("--klass", "--class", dest="klass", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--budget", type=int, default=1 << 20)

    return top


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except BudgetExceeded:
        return EXIT_BUDGET
    except (ExtractionFailed, GenerationError):
        return EXIT_PIPELINE
    except (ValueError, KeyError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
