"""End-to-end discrete-log driver.

Two parity branches are tried in turn: the even branch builds the system
for the target Q itself, the odd-shift branch for Q - P.  Every point of the
variety is decoded into bits, turned into a candidate n and checked by a
scalar multiplication; the first verified candidate wins.  Degenerate
targets are rerandomized to Q + kP with a known k.
"""
from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import dataclass, field

from .curve import Curve, CurvePoint, bit_length_m
from .errors import (Degenerate, DimensionError, NoSolution, ResourceError, SolverTimeout,
                     UsageError)
from .groebner import GBStats, fglm, groebner, solve_zero_dim
from .system import (DlpInstance, QuadraticSystem, assignment_polys, build_instance,
                     build_system, eliminate_linear)

log = logging.getLogger(__name__)

SMALL_N = 64
BSGS_TABLE_CAP = 1 << 24
STAGES = ("build", "elim", "gb", "solve", "verify")


@dataclass
class SolverConfig:
    seed: int = 0
    timeout: float = 120.0          # seconds, per Groebner basis computation
    max_rerandomizations: int = 8
    extra_gens: bool = False
    gb_path: str = "f4"

    def __post_init__(self):
        if not self.timeout > 0:
            raise UsageError("timeout must be positive")
        if self.gb_path not in ("f4", "buchberger"):
            raise UsageError(f"unknown gb_path {self.gb_path!r}")
        if self.max_rerandomizations < 0:
            raise UsageError("max_rerandomizations must be >= 0")


@dataclass
class Candidate:
    """A decoded variety point of one branch."""
    n: int                  # candidate log of the original Q, reduced mod N
    n_raw: int              # 2 * sum eps_i 2^i for the branch target
    epsilon: tuple
    assignment: tuple       # full coefficient vector g0.., h0..
    verified: bool


@dataclass
class BranchResult:
    branch: str
    offset: int                      # rerandomization k
    instance: DlpInstance | None
    system: QuadraticSystem | None
    candidates: list = field(default_factory=list)
    gb_size: int = 0
    gb_maxdeg: int = 0
    gb_stats: dict = field(default_factory=dict)


@dataclass
class DlpSolution:
    n: int
    N: int
    m: int
    epsilon: tuple
    branch: str
    rerandomization_offset: int
    timings: dict
    gb_stats: dict
    assignment: tuple | None = None
    instance: DlpInstance | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "m": self.m,
            "epsilon": list(self.epsilon),
            "branch": self.branch,
            "rerandomization_offset": self.rerandomization_offset,
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
            "gb_stats": self.gb_stats,
        }


def verify(n: int, P: CurvePoint, Q: CurvePoint, N: int | None = None) -> bool:
    """True iff (n mod N) * P == Q."""
    k = n % N if N else n
    return P.curve.scalar_mul(k, P) == Q


def bsgs_oracle(curve: Curve, P: CurvePoint, Q: CurvePoint, N: int) -> int | None:
    """Baby-step giant-step: n in [0, N) with nP = Q, or None."""
    if Q.is_infinity:
        return 0
    s = math.isqrt(N - 1) + 1 if N > 1 else 1
    if s > BSGS_TABLE_CAP:
        raise ResourceError(f"baby-step table of size {s} exceeds the cap")
    table = {}
    R = curve.O
    for j in range(s):
        key = (R.x, R.y)
        if key not in table:
            table[key] = j
        R = curve.add(R, P)
    step = curve.neg(curve.scalar_mul(s, P))
    G = Q
    for i in range(s + 1):
        j = table.get((G.x, G.y))
        if j is not None:
            n = (i * s + j) % N
            if curve.scalar_mul(n, P) == Q:
                return n
        G = curve.add(G, step)
    return None


def brute_force_log(curve: Curve, P: CurvePoint, Q: CurvePoint, N: int) -> int | None:
    R = curve.O
    for n in range(N):
        if R == Q:
            return n
        R = curve.add(R, P)
    return None


def rerandomize(inst: DlpInstance, k: int) -> DlpInstance:
    """Instance for Q + kP; the caller subtracts k from the recovered log."""
    if k == 0:
        return inst
    if not 0 < k < inst.N:
        raise UsageError("rerandomization offset must satisfy 0 < k < N")
    curve = inst.curve
    Q2 = curve.add(inst.Q, curve.scalar_mul(k, inst.P))
    return build_instance(curve, inst.P, Q2, inst.N)


def recover_bits(assignment, inst: DlpInstance) -> tuple:
    """eps_i = 0 iff f vanishes at -P_i, where f = y g(x) + h(x)."""
    ctx = inst.curve.ctx
    g, h = assignment_polys(ctx, inst.d, assignment)
    p = ctx.p
    bits = []
    for Pi in inst.basis_points:
        val = ((-Pi.y) * g(Pi.x) + h(Pi.x)) % p
        bits.append(0 if val == 0 else 1)
    return tuple(bits)


def bits_to_int(bits) -> int:
    return sum(b << i for i, b in enumerate(bits))


def decode_relation(assignment, inst: DlpInstance) -> tuple[int, tuple]:
    """Relation t*T = sum c_i P_i read off the divisor of f.

    c_i = mult(P_i) - mult(-P_i) and t = mult(-T) - mult(T), multiplicities
    being intersection multiplicities of f = 0 with the curve.
    """
    from .geom import PlaneCurve, intersection_multiplicity
    curve = inst.curve
    g, h = assignment_polys(curve.ctx, inst.d, assignment)
    C = PlaneCurve.from_gh(g, h)
    coeffs = []
    for Pi in inst.basis_points:
        coeffs.append(intersection_multiplicity(C, curve, Pi)
                      - intersection_multiplicity(C, curve, curve.neg(Pi)))
    T = inst.Q
    t = intersection_multiplicity(C, curve, curve.neg(T)) - intersection_multiplicity(C, curve, T)
    return t, tuple(coeffs)


def relation_holds(t: int, coeffs, inst: DlpInstance) -> bool:
    curve = inst.curve
    lhs = curve.scalar_mul(t, inst.Q)
    rhs = curve.O
    for c, Pi in zip(coeffs, inst.basis_points):
        rhs = curve.add(rhs, curve.scalar_mul(c, Pi))
    return lhs == rhs


def _variety(system: QuadraticSystem, config: SolverConfig, rng, timings: dict,
             stats: GBStats):
    """Points of the reduced system (empty list for the unit ideal)."""
    ring = system.reduced_ring
    gens = system.reduced_gens
    if not gens:
        raise DimensionError("no generators left after elimination")
    t = time.perf_counter()
    deadline = time.monotonic() + config.timeout
    gb = groebner(gens, "grevlex", method=config.gb_path, deadline=deadline, stats=stats)
    timings["gb"] += time.perf_counter() - t
    t = time.perf_counter()
    try:
        if gb.is_unit():
            return gb, []
        lex = fglm(gb, "lex")
        pts = solve_zero_dim(lex, gens, rng)
    finally:
        timings["solve"] += time.perf_counter() - t
    return gb, pts


def run_branch(curve: Curve, P: CurvePoint, Q: CurvePoint, N: int, shift: int, k: int,
               config: SolverConfig, rng=None, timings: dict | None = None) -> BranchResult:
    """Solve the system for T = Q + kP - shift*P and decode every point.

    Raises Degenerate (instance or positive-dimensional variety) and
    NoSolution only for an inconsistent linear part; an empty variety is a
    normal result with no candidates.
    """
    rng = rng or random.Random(f"{config.seed}:roots")
    timings = timings if timings is not None else dict.fromkeys(STAGES, 0.0)
    branch = "even" if shift == 0 else "odd-shift"
    t = time.perf_counter()
    T = curve.add(Q, curve.scalar_mul((k - shift) % N, P))
    if T.is_infinity:
        timings["build"] += time.perf_counter() - t
        n = (shift - k) % N
        ok = verify(n, P, Q, N)
        return BranchResult(branch, k, None, None,
                            [Candidate(n, 0, (), (), ok)])
    try:
        inst = build_instance(curve, P, T, N)
        system = build_system(inst, extra_gens=config.extra_gens)
    finally:
        timings["build"] += time.perf_counter() - t
    t = time.perf_counter()
    try:
        reduced = eliminate_linear(system)
    finally:
        timings["elim"] += time.perf_counter() - t
    stats = GBStats()
    try:
        gb, pts = _variety(reduced, config, rng, timings, stats)
    except DimensionError as exc:
        raise Degenerate(f"positive-dimensional variety: {exc}") from exc
    res = BranchResult(branch, k, inst, reduced, gb_size=len(gb), gb_maxdeg=gb.max_degree(),
                       gb_stats=stats.as_dict())
    t = time.perf_counter()
    for pt in pts:
        full = reduced.lift(pt)
        bits = recover_bits(full, inst)
        n_raw = 2 * bits_to_int(bits)
        n = (n_raw + shift - k) % N
        res.candidates.append(Candidate(n, n_raw, bits, full, verify(n, P, Q, N)))
    timings["verify"] += time.perf_counter() - t
    return res


@dataclass
class PlantedInstance:
    curve: Curve
    P: CurvePoint
    Q: CurvePoint
    N: int
    n: int


def random_instance(p: int, rng: random.Random, min_order: int = 16) -> PlantedInstance:
    """Random curve, random P with ord(P) >= min_order, random n in [0, N)."""
    while True:
        curve = Curve.random(p, rng)
        NE = curve.group_order()
        P = curve.random_point(rng)
        if P.is_infinity:
            continue
        N = curve.point_order(P, NE)
        if N < min_order:
            continue
        n = rng.randrange(N)
        return PlantedInstance(curve, P, curve.scalar_mul(n, P), N, n)


def _on_curve(curve: Curve, P: CurvePoint) -> bool:
    return P.is_infinity or (P.curve == curve and curve.contains(P.x, P.y))


def solve(curve: Curve, P: CurvePoint, Q: CurvePoint, config: SolverConfig | None = None,
          N: int | None = None) -> DlpSolution:
    """Recover n with nP = Q."""
    config = config or SolverConfig()
    if P.is_infinity:
        raise UsageError("P must not be the point at infinity")
    if not _on_curve(curve, P) or not _on_curve(curve, Q):
        raise UsageError("points must lie on the curve")
    if N is None:
        N = curve.point_order(P)
    m = bit_length_m(N)
    timings = dict.fromkeys(STAGES, 0.0)

    def done(n, branch, bits=(), k=0, stats=None, assignment=None, inst=None):
        return DlpSolution(n % N, N, m, tuple(bits), branch, k, timings,
                           stats or {}, assignment, inst)

    if Q.is_infinity:
        return done(0, "trivial")
    # a point outside <P> cannot be killed by N
    if not curve.scalar_mul(N, Q).is_infinity:
        raise NoSolution("Q is not in the subgroup generated by P")
    if N < SMALL_N:
        t = time.perf_counter()
        n = brute_force_log(curve, P, Q, N)
        timings["solve"] += time.perf_counter() - t
        if n is None:
            raise NoSolution("Q is not a multiple of P")
        return done(n, "brute-force")

    rr = random.Random(f"{config.seed}:rerandomize")
    roots_rng = random.Random(f"{config.seed}:roots")
    last_degenerate = None
    for attempt in range(config.max_rerandomizations + 1):
        k = 0 if attempt == 0 else rr.randrange(1, N)
        degenerate = False
        for shift in (0, 1):
            try:
                res = run_branch(curve, P, Q, N, shift, k, config, roots_rng, timings)
            except Degenerate as exc:
                log.info("branch shift=%d k=%d degenerate: %s", shift, k, exc)
                last_degenerate = exc
                degenerate = True
                continue
            except NoSolution:
                continue
            for c in res.candidates:
                if c.verified:
                    return done(c.n, res.branch, c.epsilon, k,
                                dict(res.gb_stats, gb_size=res.gb_size, gb_maxdeg=res.gb_maxdeg),
                                c.assignment, res.instance)
        if not degenerate:
            raise NoSolution("no branch produced a verified candidate")
    raise Degenerate(f"rerandomization budget exhausted ({last_degenerate})")


__all__ = ["PlantedInstance", "random_instance", "SolverConfig", "DlpSolution", "Candidate", "BranchResult", "solve", "run_branch",
           "verify", "bsgs_oracle", "brute_force_log", "rerandomize", "recover_bits",
           "bits_to_int", "decode_relation", "relation_holds", "SolverTimeout"]
