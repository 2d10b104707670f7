"""Acceptance criteria A1-A8, one summary line each (see the terminal summary).

Each criterion is a ``run_*`` function returning ``(ok, detail, payload)``;
the payload holds every non-timing output and is what A8 compares between
two runs.
"""
import hashlib
import json
import random
import time

import pytest

import ecquad.pipeline as pipeline
from ecquad.cli import main as cli_main
from ecquad.curve import Curve
from ecquad.errors import Degenerate
from ecquad.geom import (check_proposition, intersection_multiplicity, is_flex, random_triple,
                         resultant_valuation, tangent_line)
from ecquad.groebner import (brute_force_variety, fglm, groebner, is_groebner,
                             is_zero_dimensional, solve_zero_dim)
from ecquad.pipeline import (SolverConfig, bsgs_oracle, decode_relation, random_instance,
                             relation_holds, run_branch, solve)
from ecquad.system import build_system, sign_companion, target_norm
from ecquad.upoly import UPoly, curve_resultant

from oracles import planted_even_instance, random_prime_order_instance
from report import record
from test_groebner import planted_system, random_quadrics

A4_PRIMES = (251, 1009, 4093, 8191)
A4_COUNT = 25
A4_WALL_LIMIT = 120.0
STRETCH_PRIMES = (100003, 500009)

_cache = {}


def digest(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


# ---------------------------------------------------------------- A1, A2

def run_a1():
    payload, failures = [], 0
    for p in (101, 1009, 10007):
        rng = random.Random(f"A1:{p}")
        for _ in range(200):
            curve, C, x0 = random_triple(p, rng)
            rep = check_proposition(C, curve, x0)
            failures += not rep["equal"]
            payload.append([p, curve.A, curve.B, x0, rep["v"], rep["mu"]])
    return failures == 0, f"600 triples, {failures} inequalities", payload


def run_a2():
    rng = random.Random("A2")
    payload, bad = [], 0
    curve = Curve.random(10007, rng)
    tangents = 0
    while tangents < 50:
        P0 = curve.random_point(rng)
        if P0.y == 0 or is_flex(curve, P0):
            continue
        v = resultant_valuation(tangent_line(curve, P0), curve, P0.x)
        mu = intersection_multiplicity(tangent_line(curve, P0), curve, P0)
        bad += (v, mu) != (2, 2)
        payload.append([P0.x, P0.y, v, mu])
        tangents += 1
    flexes = 0
    for A in range(0, 40):
        for B in range(1, 40):
            if (4 * A ** 3 + 27 * B ** 2) % 101 == 0:
                continue
            E = Curve(101, A, B)
            for P0 in E.points():
                if is_flex(E, P0):
                    v = resultant_valuation(tangent_line(E, P0), E, P0.x)
                    bad += v != 3
                    payload.append([A, B, P0.x, P0.y, v])
                    flexes += 1
    ok = bad == 0 and flexes > 0
    return ok, f"50 tangents (valuation 2), {flexes} flex tangents (valuation 3), {bad} mismatches", payload


def test_a1_proposition():
    ok, detail, payload = run_a1()
    _cache["A1"] = payload
    record("A1", ok, detail)
    assert ok


def test_a2_tangent_flex():
    ok, detail, payload = run_a2()
    _cache["A2"] = payload
    record("A2", ok, detail)
    assert ok


# ---------------------------------------------------------------- A3

def run_a3():
    payload, bad = [], 0
    for p in (1009, 10007):
        rng = random.Random(f"A3:{p}")
        for _ in range(50):
            inst, eps, n, f = planted_even_instance(p, rng)
            sys_ = build_system(inst)
            zeros = (all(g.evaluate(f) == 0 for g in sys_.linear_gens)
                     and all(q.evaluate(f) == 0 for q in sys_.quadratic_gens))
            counts = len(sys_.linear_gens) == inst.d + 1 and len(sys_.quadratic_gens) == inst.d
            g = UPoly(inst.curve.ctx, list(f[:inst.d - 1]) + [1])
            h = UPoly(inst.curve.ctx, f[inst.d - 1:])
            r = curve_resultant(g, h, inst.curve)
            expected = -UPoly.from_roots(inst.curve.ctx,
                                         [Pi.x for Pi in inst.basis_points] * 2 + [inst.q_x])
            factored = r == expected == target_norm(inst)
            bad += not (zeros and counts and factored)
            payload.append([p, inst.N, n, list(f)])
    return bad == 0, f"100 planted instances, {bad} failures", payload


def test_a3_planted_soundness():
    ok, detail, payload = run_a3()
    _cache["A3"] = payload
    record("A3", ok, detail)
    assert ok


# ---------------------------------------------------------------- A4

def run_a4(bases=None):
    """Solve every instance; ``bases`` collects each Groebner basis computed."""
    original = pipeline.groebner

    def recording(*args, **kw):
        gb = original(*args, **kw)
        if bases is not None:
            bases.append(gb)
        return gb

    pipeline.groebner = recording
    payload, solutions, failures, slowest = [], [], [], 0.0
    try:
        for p in A4_PRIMES:
            for i in range(A4_COUNT):
                inst = random_instance(p, random.Random(f"A4:{p}:{i}"), min_order=16)
                t = time.perf_counter()
                sol = solve(inst.curve, inst.P, inst.Q, SolverConfig(seed=i))
                wall = time.perf_counter() - t
                slowest = max(slowest, wall)
                oracle = bsgs_oracle(inst.curve, inst.P, inst.Q, inst.N)
                good = (inst.curve.scalar_mul(sol.n, inst.P) == inst.Q
                        and sol.n % inst.N == oracle == inst.n and wall <= A4_WALL_LIMIT)
                if not good:
                    failures.append((p, i, sol.n, oracle, round(wall, 1)))
                solutions.append(sol)
                payload.append([p, i, inst.N, sol.n, sol.branch, sol.rerandomization_offset,
                                list(sol.epsilon),
                                list(sol.assignment) if sol.assignment else None])
    finally:
        pipeline.groebner = original
    ok = not failures
    detail = (f"{len(solutions) - len(failures)}/{len(solutions)} solved and oracle-checked, "
              f"slowest {slowest:.1f} s (limit {A4_WALL_LIMIT:.0f} s)")
    if failures:
        detail += f", failures {failures}"
    return ok, detail, payload, solutions


def run_a4_stretch(tmp_dir):
    out = tmp_dir / "stretch.csv"
    code = cli_main(["bench", "--primes", ",".join(map(str, STRETCH_PRIMES)), "--count", "1",
                     "--seed", "0", "--timeout", "20", "--grace", "20", "--out", str(out)])
    lines = out.read_text().splitlines()
    outcomes = [ln.split(",")[4] for ln in lines[1:]]
    ok = code == 0 and len(outcomes) == len(STRETCH_PRIMES) and all(
        o in ("solved", "timeout", "degenerate", "no-solution") for o in outcomes)
    return ok, dict(zip(STRETCH_PRIMES, outcomes))


def test_a4_end_to_end(tmp_path):
    bases = []
    ok, detail, payload, solutions = run_a4(bases)
    stretch_ok, stretch = run_a4_stretch(tmp_path)
    _cache["A4"] = payload
    _cache["A4_solutions"] = solutions
    _cache["A4_bases"] = bases
    record("A4", ok and stretch_ok, f"{detail}; stretch bench outcomes {stretch}")
    assert ok and stretch_ok


# ---------------------------------------------------------------- A5

def run_a5(extra_bases=()):
    payload = []
    # every basis computed by the solver plus the bases below: S-pairs reduce to zero
    checked = bad_gb = 0
    for gb in extra_bases:
        checked += 1
        bad_gb += not is_groebner(gb.generators)
    mismatches = 0
    for i in range(50):
        rng = random.Random(f"A5:compare:{i}")
        p = rng.choice([31, 101, 1009, 65521])
        n = rng.randint(2, 8)
        if n <= 6:
            gens = random_quadrics(p, n, n, rng)
        else:
            gens, _ = planted_system(p, n, n + 2, rng)
        a = groebner(gens, "grevlex", "f4")
        b = groebner(gens, "grevlex", "buchberger")
        same = [str(g) for g in a.generators] == [str(g) for g in b.generators]
        mismatches += not same
        checked += 1
        bad_gb += not is_groebner(a.generators)
        payload.append([p, n, [str(g) for g in a.generators]])
    scan_bad = 0
    done = 0
    i = 0
    while done < 100:
        rng = random.Random(f"A5:scan:{i}")
        i += 1
        p = rng.choice([5, 7, 11, 13, 17, 19, 23, 29, 31])
        k = rng.randint(1, 3)
        gens, _ = planted_system(p, k, k + rng.randint(0, 1), rng)
        gb = groebner(gens, "grevlex")
        if not is_zero_dimensional(gb):
            continue
        pts = solve_zero_dim(fglm(gb, "lex"), gens, rng)
        scan_bad += pts != brute_force_variety(gens)
        done += 1
        payload.append([p, k, pts])
    ok = bad_gb == 0 and mismatches == 0 and scan_bad == 0
    detail = (f"{checked} bases S-pair complete ({bad_gb} bad), 50 F4/Buchberger comparisons "
              f"({mismatches} differ), 100 variety scans ({scan_bad} differ)")
    return ok, detail, payload


def test_a5_groebner_engine():
    ok, detail, payload = run_a5(_cache.get("A4_bases", ()))
    _cache["A5"] = payload
    record("A5", ok, detail)
    assert ok


# ---------------------------------------------------------------- A6

def _filter_companions(cands, d, p):
    kept = []
    for c in cands:
        if sign_companion(d, c.assignment, p) not in [k.assignment for k in kept]:
            kept.append(c)
    return kept


def _branch(curve, P, Q, N, shift):
    return run_branch(curve, P, Q, N, shift, 0, SolverConfig(), random.Random("A6:roots"))


def run_a6():
    """Literal claims on 50 even and 50 odd instances with ord(P) an odd prime."""
    rng = random.Random("A6")
    payload = []
    even_ok = 0
    odd_even_empty = odd_shift_ok = aliased = alias_explained = 0
    for parity in (0, 1):
        count = 0
        while count < 50:
            curve, P, Q, N, n = random_prime_order_instance(1009, rng, parity)
            try:
                even = _branch(curve, P, Q, N, 0)
                odd = _branch(curve, P, Q, N, 1) if parity else None
            except Degenerate:
                continue
            count += 1
            p = curve.p
            verified = _filter_companions([c for c in even.candidates if c.verified],
                                          even.instance.d, p)
            if parity == 0:
                even_ok += len(verified) == 1 and verified[0].n == n
                payload.append([N, n, [c.n_raw for c in verified]])
                continue
            odd_verified = [c for c in odd.candidates if c.verified]
            odd_even_empty += not verified
            odd_shift_ok += any(c.n == n for c in odd_verified)
            if verified:
                aliased += 1
                m = even.instance.m
                alias_explained += all(c.n_raw == n + N and n + N < 2 ** (m + 1)
                                       for c in verified)
            payload.append([N, n, [c.n_raw for c in verified], [c.n_raw for c in odd_verified]])
    return {"even_ok": even_ok, "odd_even_empty": odd_even_empty, "odd_shift_ok": odd_shift_ok,
            "aliased": aliased, "alias_explained": alias_explained}, payload


def test_a6_parity():
    stats, payload = run_a6()
    _cache["A6"] = payload
    _cache["A6_stats"] = stats
    ok = stats["even_ok"] == 50 and stats["odd_even_empty"] == 50 and stats["odd_shift_ok"] == 50
    record("A6", ok,
           f"even n: {stats['even_ok']}/50 unique verified candidate; odd n: even branch empty in "
           f"{stats['odd_even_empty']}/50, odd-shift succeeds in {stats['odd_shift_ok']}/50; "
           f"{stats['aliased']} odd cases verified by the even branch as n+N "
           f"({stats['alias_explained']} with n+N < 2^(m+1))")
    assert stats["even_ok"] == 50
    assert stats["odd_shift_ok"] == 50


@pytest.mark.xfail(strict=True, reason="for odd n with n+N < 2^(m+1) the even branch "
                   "legitimately finds the even representative n+N; see notes")
def test_a6_odd_even_branch_empty_literal():
    stats = _cache.get("A6_stats") or run_a6()[0]
    assert stats["odd_even_empty"] == 50


def test_a6_alias_accounts_for_every_odd_hit():
    stats = _cache.get("A6_stats") or run_a6()[0]
    assert stats["aliased"] == stats["alias_explained"]
    assert stats["odd_even_empty"] + stats["aliased"] == 50


# ---------------------------------------------------------------- A7

def run_a7(solutions):
    """Negating the h-coordinates of every system-found A4 solution."""
    payload = []
    in_full = quad_ok = decode_ok = total = 0
    for sol in solutions:
        if sol.assignment is None:
            continue          # brute-force or trivial: no system was built
        total += 1
        inst = sol.instance
        p = inst.curve.p
        comp = sign_companion(inst.d, sol.assignment, p)
        sys_ = build_system(inst, extra_gens=True)
        in_full += all(g.evaluate(comp) == 0 for g in sys_.linear_gens + sys_.quadratic_gens)
        quad_ok += all(g.evaluate(comp) == 0 for g in sys_.quadratic_gens + sys_.extra_gens)
        t, c = decode_relation(sol.assignment, inst)
        t2, c2 = decode_relation(comp, inst)
        # the companion vanishes on the negated divisor: the relation for -T
        decode_ok += (t2 == -t and c2 == tuple(-v for v in c)
                      and relation_holds(t2, c2, inst) and relation_holds(t, c, inst))
        payload.append([inst.N, list(comp), t2, list(c2)])
    return {"total": total, "in_full": in_full, "quad_ok": quad_ok,
            "decode_ok": decode_ok}, payload


def _a7_stats():
    if "A7_stats" not in _cache:
        solutions = _cache.get("A4_solutions")
        if solutions is None:
            pytest.skip("A7 needs the A4 solutions")
        _cache["A7_stats"], _cache["A7"] = run_a7(solutions)
    return _cache["A7_stats"]


def test_a7_sign_companion():
    s = _a7_stats()
    ok = s["total"] > 0 and s["quad_ok"] == s["total"] and s["decode_ok"] == s["total"]
    record("A7", ok and s["in_full"] == s["total"],
           f"{s['total']} system solutions: companion kills all quadratic and coefficient "
           f"equations in {s['quad_ok']}, decodes to the -T relation in {s['decode_ok']}, "
           f"kills the linear equations too in {s['in_full']}")
    assert ok


@pytest.mark.xfail(strict=True, reason="negating h moves the zeros from P_i, -T to -P_i, T, "
                   "so the companion leaves the linear conditions; see notes")
def test_a7_companion_in_full_variety_literal():
    s = _a7_stats()
    assert s["in_full"] == s["total"]


# ---------------------------------------------------------------- A8

def test_a8_determinism(tmp_path):
    needed = ("A1", "A2", "A3", "A4", "A5", "A6", "A7")
    missing = [k for k in needed if k not in _cache]
    if missing:
        pytest.skip(f"A8 needs A1-A7 in the same session (missing {missing})")
    first = {k: digest(_cache[k]) for k in needed}
    again = {}
    again["A1"] = digest(run_a1()[2])
    again["A2"] = digest(run_a2()[2])
    again["A3"] = digest(run_a3()[2])
    bases = []
    _, _, a4, solutions = run_a4(bases)
    again["A4"] = digest(a4)
    again["A5"] = digest(run_a5(bases)[2])
    again["A6"] = digest(run_a6()[1])
    again["A7"] = digest(run_a7(solutions)[1])
    differ = [k for k in needed if first[k] != again[k]]
    record("A8", not differ, f"rerun of A1-A7 digests: {len(needed) - len(differ)}/7 identical"
           + (f", differ {differ}" if differ else ""))
    assert not differ
