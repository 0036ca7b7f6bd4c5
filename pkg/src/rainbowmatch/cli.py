"""Command-line front door.

Exit codes are a stable contract:
  0  success
  1  I/O or parse error
  2  precondition violation / unsatisfiable generator spec
  3  internal-invariant failure (a bug, never bad input)
  4  Hall failure during decomposition (possible only for t <= 10)
  5  verification failed / a check trial failed
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from .decompose import Decomposition, decompose, verify_decomposition
from .errors import (
    EcgFormatError,
    HallViolation,
    InternalInvariantError,
    PreconditionError,
    UnsatisfiableSpec,
)
from .extend import rainbow_matching, rainbow_matching_bipartite
from .genlab import (
    GenSpec,
    STATEMENTS,
    exhaustive_check,
    generate,
    run_trial,
    sweep_specs,
)
from .graphs import is_rainbow_matching, read_ecg, write_ecg
from .oracle import max_rainbow_matching_exact

EXIT_OK = 0
EXIT_IO = 1
EXIT_PRECONDITION = 2
EXIT_INTERNAL = 3
EXIT_HALL = 4
EXIT_VERIFY = 5


def _dump(data: dict, out: Optional[str]) -> None:
    text = json.dumps(data, separators=(",", ":")) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_graph(path: str):
    try:
        return read_ecg(path)
    except OSError as exc:
        raise SystemExit2(EXIT_IO, f"cannot read {path}: {exc}")
    except EcgFormatError as exc:
        raise SystemExit2(EXIT_IO, f"parse error in {path}: {exc}")


class SystemExit2(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message
        super().__init__(message)


def _cmd_solve(args) -> int:
    graph = _load_graph(args.input)
    trace_records = []
    sink = trace_records.append if args.trace else None
    try:
        if args.bipartite:
            eps = Fraction(args.epsilon) if args.epsilon else Fraction(1, 2)
            found = rainbow_matching_bipartite(graph, args.k, eps, trace=sink)
        else:
            if args.epsilon:
                raise SystemExit2(EXIT_IO, "--epsilon only makes sense with --bipartite")
            found = rainbow_matching(graph, args.k, trace=sink)
    except ValueError as exc:  # PreconditionError included
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InternalInvariantError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for record in trace_records:
                fh.write(json.dumps(record, separators=(",", ":")) + "\n")
    verified = None
    if not args.no_verify:
        verified = is_rainbow_matching(graph, found) and len(found) == args.k
        if not verified:
            print("self-verification failed", file=sys.stderr)
            return EXIT_INTERNAL
    _dump(
        {"k": args.k, "matching": [list(e) for e in found.edges], "verified": verified},
        args.out,
    )
    return EXIT_OK


def _cmd_decompose(args) -> int:
    graph = _load_graph(args.input)
    try:
        result = decompose(graph, args.t, keep_completion=args.keep_completion)
    except ValueError as exc:  # PreconditionError included
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except HallViolation as exc:
        certificate = {
            "failed_colour": exc.colour,
            "class_size": len(exc.class_edges),
            "violator": [list(e) for e in exc.violator_edges],
            "compatible_parts": exc.part_indices,
        }
        _dump({"hall_failure": certificate}, None)
        return EXIT_HALL
    except InternalInvariantError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    verified = None
    if not args.no_verify and not args.keep_completion:
        verified = verify_decomposition(graph, result)
        if not verified:
            print("self-verification failed", file=sys.stderr)
            return EXIT_INTERNAL
    _dump(result.to_json_dict(), args.out)
    summary = {
        "parts": len(result.parts),
        "nonempty": result.nonempty_count,
        "verified": verified,
    }
    if args.out:
        _dump(summary, None)
    return EXIT_OK


def _cmd_verify(args) -> int:
    graph = _load_graph(args.input)
    if (args.parts is None) == (args.matching is None):
        raise SystemExit2(EXIT_IO, "pass exactly one of --parts or --matching")
    try:
        if args.parts is not None:
            with open(args.parts, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            result = Decomposition.from_json_dict(data)
            ok = verify_decomposition(graph, result)
            if not ok:
                print("decomposition does not verify", file=sys.stderr)
        else:
            if args.k is None:
                raise SystemExit2(EXIT_IO, "--matching needs --k")
            with open(args.matching, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            edges = [tuple(int(x) for x in e) for e in data["matching"]]
            try:
                ok = is_rainbow_matching(graph, edges) and len(edges) >= args.k
            except ValueError as exc:
                print(f"matching does not verify: {exc}", file=sys.stderr)
                ok = False
            if not ok:
                print("matching does not verify", file=sys.stderr)
    except OSError as exc:
        raise SystemExit2(EXIT_IO, f"cannot read input: {exc}")
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise SystemExit2(EXIT_IO, f"malformed JSON input: {exc}")
    return EXIT_OK if ok else EXIT_VERIFY


def _spec_from_args(args) -> GenSpec:
    if args.spec:
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                return GenSpec.from_json_dict(json.load(fh))
        except OSError as exc:
            raise SystemExit2(EXIT_IO, f"cannot read {args.spec}: {exc}")
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise SystemExit2(EXIT_IO, f"malformed spec JSON: {exc}")
    if not args.model or args.n is None:
        raise SystemExit2(EXIT_IO, "pass --spec or both --model and --n")
    return GenSpec(
        model=args.model,
        n=args.n,
        seed=args.seed,
        k=args.k,
        t=args.t,
        epsilon=args.epsilon,
        edge_probability=args.p,
        colours=args.colours,
    )


def _cmd_gen(args) -> int:
    spec = _spec_from_args(args)
    try:
        graph = generate(spec)
    except UnsatisfiableSpec as exc:
        print(f"unsatisfiable spec: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    try:
        write_ecg(args.out, graph)
    except OSError as exc:
        raise SystemExit2(EXIT_IO, f"cannot write {args.out}: {exc}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    graph = _load_graph(args.input)
    size, witness = max_rainbow_matching_exact(graph)
    _dump(
        {"max_rainbow_matching": size, "matching": [list(e) for e in witness.edges]},
        args.out,
    )
    return EXIT_OK


def _trial_entry(item):
    theorem, spec_dict = item
    report = run_trial(theorem, GenSpec.from_json_dict(spec_dict))
    return report.to_json_dict()


def _cmd_check(args) -> int:
    suites = {
        "T1": ["T1"],
        "T2": ["T2"],
        "T3": ["T3"],
        "lemmas": ["L_general", "P_bipartite"],
        "adapters": [],
        "all": ["T1", "T2", "T3", "L_general", "P_bipartite"],
    }
    if args.suite not in suites:
        raise SystemExit2(EXIT_IO, f"unknown suite {args.suite!r}")
    out_fh = open(args.out, "w", encoding="utf-8") if args.out else None

    def emit(record: dict) -> None:
        line = json.dumps(record, separators=(",", ":")) + "\n"
        sys.stdout.write(line)
        if out_fh:
            out_fh.write(line)

    counts = {"verified": 0, "failed": 0, "precondition_unmet": 0}
    failures = []
    try:
        reports = []
        if args.suite in ("adapters", "lemmas", "all"):
            names = (
                list(STATEMENTS)
                if args.suite == "all"
                else (["adapter_props"] if args.suite == "adapters"
                      else ["L_general_small", "P_bipartite_small"])
            )
            for statement in names:
                reports.append(exhaustive_check(statement).to_json_dict())
        work = []
        for theorem in suites[args.suite]:
            work.extend(
                (t, spec.to_json_dict())
                for t, spec in sweep_specs(theorem, args.trials, args.seed)
            )
        if work:
            jobs = args.jobs or os.cpu_count() or 1
            if jobs > 1 and len(work) > 1:
                import multiprocessing

                with multiprocessing.Pool(jobs) as pool:
                    reports.extend(pool.imap(_trial_entry, work, chunksize=4))
            else:
                reports.extend(_trial_entry(item) for item in work)
        for record in reports:
            counts[record["outcome"]] += 1
            if record["outcome"] == "failed":
                failures.append(record)
            emit(record)
        emit({"suite": args.suite, **counts})
    finally:
        if out_fh:
            out_fh.close()
    if failures:
        for record in failures:
            print(
                f"FAILED trial; reproduce with spec: "
                f"{json.dumps(record.get('spec'), separators=(',', ':'))}",
                file=sys.stderr,
            )
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_bench(args) -> int:
    graph = _load_graph(args.input)
    timings = []
    for _ in range(args.repeat):
        begin = time.perf_counter()
        if args.t is not None:
            decompose(graph, args.t)
            op = "decompose"
        elif args.k is not None:
            if args.bipartite:
                rainbow_matching_bipartite(
                    graph, args.k, Fraction(args.epsilon) if args.epsilon else Fraction(1, 2)
                )
                op = "solve-bipartite"
            else:
                rainbow_matching(graph, args.k)
                op = "solve"
        else:
            raise SystemExit2(EXIT_IO, "bench needs --k or --t")
        timings.append(time.perf_counter() - begin)
    _dump({"op": op, "runs": args.repeat, "seconds": timings}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbowmatch",
        description="Rainbow matchings in edge-coloured graphs: solve, decompose, verify, generate, check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a rainbow matching of size k")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bipartite", action="store_true")
    p.add_argument("--epsilon", help="exact fraction p/q (with --bipartite)")
    p.add_argument("--trace", help="write per-iteration driver records (JSONL)")
    p.add_argument("--no-verify", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("decompose", help="edge-decompose into floor(t*n/2) rainbow matchings")
    p.add_argument("--input", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--keep-completion", action="store_true")
    p.add_argument("--no-verify", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("verify", help="re-verify a matching or decomposition")
    p.add_argument("--input", required=True)
    p.add_argument("--parts", help="decomposition JSON")
    p.add_argument("--matching", help="matching JSON")
    p.add_argument("--k", type=int)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="generate a seeded instance (.ecg)")
    p.add_argument("--spec", help="GenSpec JSON file")
    p.add_argument("--model")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--colours", type=int)
    p.add_argument("--p", default="1/2", help="edge probability as exact fraction")
    p.add_argument("--epsilon")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("oracle", help="exact maximum rainbow matching (brute force)")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("check", help="run verification sweeps / exhaustive checks")
    p.add_argument("--suite", required=True, choices=["T1", "T2", "T3", "lemmas", "adapters", "all"])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", help="also write the JSONL stream here")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("bench", help="time solve/decompose without verification")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--bipartite", action="store_true")
    p.add_argument("--epsilon")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
