"""Command-line interface: gen, solve, oracle, bench, check-prop, gb.

Exit codes: 0 success, 1 error, 2 no solution, 3 degenerate, 4 timeout.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import multiprocessing as mp
import random
import sys
import time

from .curve import Curve
from .errors import (Degenerate, EcquadError, NoSolution, ResourceError, SolverTimeout,
                     UsageError)
from .field import FieldCtx, is_prime

EXIT_OK, EXIT_ERROR, EXIT_NO_SOLUTION, EXIT_DEGENERATE, EXIT_TIMEOUT = 0, 1, 2, 3, 4

INSTANCE_FIELDS = {"p", "A", "B", "P", "Q", "n"}
BENCH_HEADER = ["p", "N", "m", "branch", "outcome", "t_build_ms", "t_elim_ms", "t_gb_ms",
                "t_solve_ms", "t_verify_ms", "gb_size", "gb_maxdeg", "seed"]
BENCH_MIN_ORDER = 16
# address-space limit for a bench worker; exceeding it counts as a timeout
BENCH_MEMORY_LIMIT = 3 << 30

log = logging.getLogger("ecquad")


def stream(seed, name: str) -> random.Random:
    """Named PRNG stream derived from the global seed."""
    return random.Random(f"{seed}:{name}")


# ---------------------------------------------------------------- instances

def generate_instance(p: int, seed: int, offset: int | None = None, min_order: int = 5) -> dict:
    from .pipeline import random_instance
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    inst = random_instance(p, stream(seed, f"gen:{p}"), min_order)
    n = inst.n if offset is None else (inst.N - offset) % inst.N
    Q = inst.curve.scalar_mul(n, inst.P)
    return {"p": p, "A": inst.curve.A, "B": inst.curve.B,
            "P": inst.P.to_json(), "Q": Q.to_json(), "n": n}


def load_instance(text: str):
    """Parse an instance file; returns (curve, P, Q, planted n or None)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("instance file must hold a JSON object")
    unknown = set(data) - INSTANCE_FIELDS
    if unknown:
        raise UsageError(f"unknown fields: {', '.join(sorted(unknown))}")
    missing = {"p", "A", "B", "P", "Q"} - set(data)
    if missing:
        raise UsageError(f"missing fields: {', '.join(sorted(missing))}")
    for key in ("p", "A", "B"):
        if not isinstance(data[key], int):
            raise UsageError(f"field {key} must be an integer")
    curve = Curve(FieldCtx(data["p"]), data["A"], data["B"])

    def point(v, name, allow_inf):
        if v is None:
            if not allow_inf:
                raise UsageError(f"{name} must not be the point at infinity")
            return curve.O
        if not (isinstance(v, list) and len(v) == 2 and all(isinstance(c, int) for c in v)):
            raise UsageError(f"{name} must be [x, y]")
        return curve.point(*v)

    P = point(data["P"], "P", False)
    Q = point(data["Q"], "Q", True)
    n = data.get("n")
    if n is not None and not isinstance(n, int):
        raise UsageError("field n must be an integer")
    return curve, P, Q, n


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _outcome_exit(exc: BaseException) -> tuple[str, int]:
    if isinstance(exc, NoSolution):
        return "no-solution", EXIT_NO_SOLUTION
    if isinstance(exc, Degenerate):
        return "degenerate", EXIT_DEGENERATE
    if isinstance(exc, (SolverTimeout, ResourceError, MemoryError)):
        return "timeout", EXIT_TIMEOUT
    return "error", EXIT_ERROR


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    inst = generate_instance(args.p, args.seed, args.offset, args.min_order)
    text = json.dumps(inst, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _config(args):
    from .pipeline import SolverConfig
    return SolverConfig(seed=args.seed, timeout=args.timeout,
                        max_rerandomizations=args.max_rerandomizations,
                        extra_gens=args.extra_gens, gb_path=args.gb_path)


def cmd_solve(args) -> int:
    from .pipeline import solve
    curve, P, Q, _ = load_instance(_read(args.instance))
    try:
        sol = solve(curve, P, Q, _config(args))
    except (EcquadError, MemoryError, TimeoutError) as exc:
        outcome, code = _outcome_exit(exc)
        if code == EXIT_ERROR:
            raise
        _emit({"outcome": outcome, "message": str(exc)})
        return code
    out = sol.to_json()
    out["outcome"] = "solved"
    _emit(out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .pipeline import bsgs_oracle
    curve, P, Q, _ = load_instance(_read(args.instance))
    N = curve.point_order(P)
    n = bsgs_oracle(curve, P, Q, N)
    if n is None:
        _emit({"outcome": "no-solution", "N": N})
        return EXIT_NO_SOLUTION
    _emit({"n": n, "N": N, "outcome": "solved"})
    return EXIT_OK


def _bench_worker(p, inst_seed, config, conn):
    """Solve one bench instance in a child process; sends a result dict."""
    try:
        import resource
        resource.setrlimit(resource.RLIMIT_AS, (BENCH_MEMORY_LIMIT, BENCH_MEMORY_LIMIT))
    except (ImportError, ValueError, OSError):
        pass
    from .curve import bit_length_m
    from .pipeline import bsgs_oracle, solve
    rec = {"p": p, "seed": inst_seed}
    try:
        curve, P, Q, n = load_instance(json.dumps(
            generate_instance(p, inst_seed, min_order=BENCH_MIN_ORDER)))
        N = curve.point_order(P)
        rec.update(N=N, m=bit_length_m(N))
        try:
            sol = solve(curve, P, Q, config, N=N)
        except (EcquadError, MemoryError, TimeoutError) as exc:
            outcome, code = _outcome_exit(exc)
            if code == EXIT_ERROR:
                raise
            rec["outcome"] = outcome
        else:
            rec.update(outcome="solved", branch=sol.branch,
                       gb_size=sol.gb_stats.get("gb_size", ""),
                       gb_maxdeg=sol.gb_stats.get("gb_maxdeg", ""))
            for k, v in sol.timings.items():
                rec[f"t_{k}_ms"] = round(1000 * v, 1)
            if N <= 10**6:
                rec["oracle_ok"] = bsgs_oracle(curve, P, Q, N) == sol.n
    except BaseException as exc:        # report everything to the parent
        rec["outcome"] = "error"
        rec["message"] = f"{type(exc).__name__}: {exc}"
    conn.send(rec)
    conn.close()


def run_bench_instance(p: int, inst_seed: int, config, hard_timeout: float) -> dict:
    """One instance in a forked child, killed after ``hard_timeout`` seconds."""
    ctx = mp.get_context("fork")
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_bench_worker, args=(p, inst_seed, config, send))
    proc.start()
    send.close()
    rec = None
    if recv.poll(hard_timeout):
        try:
            rec = recv.recv()
        except EOFError:
            rec = None
    if proc.is_alive():
        proc.kill()
    proc.join()
    if rec is None:
        # killed or crashed without reporting (e.g. out of memory)
        rec = {"p": p, "seed": inst_seed, "outcome": "timeout"}
        try:
            from .curve import bit_length_m
            inst = generate_instance(p, inst_seed, min_order=BENCH_MIN_ORDER)
            curve, P, _, _ = load_instance(json.dumps(inst))
            N = curve.point_order(P)
            rec.update(N=N, m=bit_length_m(N))
        except EcquadError:
            pass
    return rec


def cmd_bench(args) -> int:
    try:
        primes = [int(x) for x in args.primes.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad prime list {args.primes!r}") from None
    for p in primes:
        FieldCtx(p)
    config = _config(args)
    try:
        out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    bad = 0
    summary = []
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_HEADER, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for p in primes:
            counts: dict = {}
            for i in range(args.count):
                inst_seed = args.seed * 10_000 + i
                rec = run_bench_instance(p, inst_seed, config, args.timeout + args.grace)
                if rec.get("outcome") == "error" or rec.get("oracle_ok") is False:
                    bad += 1
                    log.error("instance p=%d seed=%d: %s", p, inst_seed,
                              rec.get("message", "oracle disagreement"))
                writer.writerow({k: rec.get(k, "") for k in BENCH_HEADER})
                out.flush()
                counts[rec["outcome"]] = counts.get(rec["outcome"], 0) + 1
            summary.append(f"p={p}: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    finally:
        if out is not sys.stdout:
            out.close()
    sys.stderr.write("bench summary: " + "; ".join(summary) + "\n")
    return EXIT_ERROR if bad else EXIT_OK


def cmd_check_prop(args) -> int:
    from .geom import check_proposition, random_triple
    if not is_prime(args.p):
        raise UsageError(f"{args.p} is not prime")
    rng = stream(args.seed, f"check-prop:{args.p}")
    unequal = 0
    for _ in range(args.trials):
        curve, C, x0 = random_triple(args.p, rng)
        rep = check_proposition(C, curve, x0)
        unequal += not rep["equal"]
        _emit({"curve": {"p": curve.p, "A": curve.A, "B": curve.B},
               "C": [list(c.coeffs) for c in C.coeffs],
               "x0": rep["x0"], "v": rep["v"], "mu": rep["mu"], "equal": rep["equal"]})
    return EXIT_ERROR if unequal else EXIT_OK


def cmd_gb(args) -> int:
    from .groebner import groebner
    from .mpoly import parse_system_file, system_to_text
    gens = parse_system_file(_read(args.system), args.p, args.order)
    if not gens:
        raise UsageError("empty system")
    deadline = time.monotonic() + args.timeout if args.timeout else None
    try:
        gb = groebner(gens, args.order, method=args.method, deadline=deadline)
    except (SolverTimeout, ResourceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_TIMEOUT
    sys.stdout.write(system_to_text(gb.generators, gb.ring))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ecquad",
                                 description="Elliptic-curve discrete logs through quadric "
                                             "systems and Groebner bases.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random planted instance")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--offset", type=int, default=None,
                   help="plant n = N - OFFSET instead of a random n")
    g.add_argument("--min-order", type=int, default=5, help="minimum order of P (default 5)")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    def solver_opts(sp, timeout=120.0):
        sp.add_argument("--timeout", type=float, default=timeout,
                        help="seconds per Groebner basis computation")
        sp.add_argument("--gb-path", choices=["f4", "buchberger"], default="f4")
        sp.add_argument("--extra-gens", action="store_true",
                        help="add the coefficient-matching equations")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-rerandomizations", type=int, default=8)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("instance")
    solver_opts(s)
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="baby-step giant-step reference solve")
    o.add_argument("instance")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="solve seeded random instances, write CSV")
    b.add_argument("--primes", required=True, help="comma-separated primes")
    b.add_argument("--count", type=int, default=5)
    b.add_argument("--out", default=None, help="CSV path (default stdout)")
    b.add_argument("--grace", type=float, default=30.0,
                   help="seconds beyond --timeout before a worker is killed")
    solver_opts(b)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("check-prop", help="check resultant valuation = intersection multiplicities")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check_prop)

    q = sub.add_parser("gb", help="reduced Groebner basis of a system file")
    q.add_argument("system")
    q.add_argument("--order", choices=["grevlex", "lex"], default=None)
    q.add_argument("--p", type=int, default=None, help="override the '# p' header")
    q.add_argument("--method", choices=["f4", "buchberger"], default="f4")
    q.add_argument("--timeout", type=float, default=None)
    q.set_defaults(func=cmd_gb)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, EcquadError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
