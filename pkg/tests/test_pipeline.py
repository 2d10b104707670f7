import random

import pytest

from ecquad.curve import Curve
from ecquad.errors import NoSolution, SolverTimeout, UsageError
from ecquad.pipeline import (SolverConfig, bits_to_int, brute_force_log, bsgs_oracle,
                             decode_relation, random_instance, relation_holds, run_branch,
                             solve)

from oracles import planted_even_instance


@pytest.mark.parametrize("p", [101, 251, 1009])
def test_bsgs_matches_brute_force(p):
    rng = random.Random(f"bsgs:{p}")
    for _ in range(10):
        inst = random_instance(p, rng, min_order=2)
        assert bsgs_oracle(inst.curve, inst.P, inst.Q, inst.N) == inst.n
        assert brute_force_log(inst.curve, inst.P, inst.Q, inst.N) == inst.n


@pytest.mark.parametrize("p", [251, 1009])
def test_solve_random_instances(p):
    rng = random.Random(f"solve:{p}")
    for _ in range(6):
        inst = random_instance(p, rng)
        sol = solve(inst.curve, inst.P, inst.Q)
        assert sol.n == inst.n
        assert inst.curve.scalar_mul(sol.n, inst.P) == inst.Q


def test_solve_buchberger_path():
    inst = random_instance(251, random.Random("bb"))
    sol = solve(inst.curve, inst.P, inst.Q, SolverConfig(gb_path="buchberger"))
    assert sol.n == inst.n


def test_solve_with_coefficient_equations():
    inst = random_instance(1009, random.Random("extra"))
    sol = solve(inst.curve, inst.P, inst.Q, SolverConfig(extra_gens=True))
    assert sol.n == inst.n


def test_trivial_and_small_orders():
    rng = random.Random("small")
    inst = random_instance(1009, rng)
    assert solve(inst.curve, inst.P, inst.curve.O).n == 0
    while True:
        small = random_instance(101, rng, min_order=2)
        if small.N < 64:
            break
    sol = solve(small.curve, small.P, small.Q)
    assert sol.branch == "brute-force" and sol.n == small.n


def test_degenerate_target_is_rerandomized():
    # Q = 2P collides with P_1 and Q - P = P_0, so both branches are degenerate
    inst = random_instance(1009, random.Random("rerand"))
    Q = inst.curve.scalar_mul(2, inst.P)
    sol = solve(inst.curve, inst.P, Q)
    assert sol.n == 2
    assert sol.rerandomization_offset != 0


def _non_cyclic_pair(p):
    """(curve, P, Q) with Q of prime order outside <P>."""
    for A in range(1, 200):
        for B in range(1, 50):
            if (4 * A ** 3 + 27 * B ** 2) % p == 0:
                continue
            E = Curve(p, A, B)
            NE = E.group_order()
            rng = random.Random(A * 1000 + B)
            pts = [E.random_point(rng) for _ in range(6)]
            for P in pts:
                N = E.point_order(P, NE)
                if N < 64:
                    continue
                for Q in pts:
                    if not E.scalar_mul(N, Q).is_infinity:
                        return E, P, Q
    raise AssertionError("no pair found")


def test_point_outside_subgroup():
    E, P, Q = _non_cyclic_pair(251)
    with pytest.raises(NoSolution):
        solve(E, P, Q)
    assert bsgs_oracle(E, P, Q, E.point_order(P)) is None


def test_timeout():
    inst = random_instance(4093, random.Random("timeout"), min_order=2048)
    with pytest.raises(SolverTimeout):
        solve(inst.curve, inst.P, inst.Q, SolverConfig(timeout=1e-4))


def test_config_validation():
    with pytest.raises(UsageError):
        SolverConfig(timeout=0)
    with pytest.raises(UsageError):
        SolverConfig(gb_path="magic")


@pytest.mark.parametrize("p", [1009, 4093])
def test_decode_relation_on_planted_f(p):
    rng = random.Random(f"decode:{p}")
    for _ in range(3):
        inst, eps, n, f = planted_even_instance(p, rng)
        t, coeffs = decode_relation(f, inst)
        # f vanishes at -T, doubly at P_i when eps_i = 1
        assert t == 1
        assert coeffs == tuple(2 * e for e in eps)
        assert relation_holds(t, coeffs, inst)


def test_run_branch_candidates_verified():
    inst, eps, n, f = planted_even_instance(1009, random.Random("branch"))
    res = run_branch(inst.curve, inst.P, inst.Q, inst.N, 0, 0, SolverConfig())
    verified = [c for c in res.candidates if c.verified]
    assert [c.assignment for c in verified] == [f]
    assert verified[0].n_raw == 2 * bits_to_int(eps)


def test_solution_json_schema():
    inst = random_instance(251, random.Random("json"))
    out = solve(inst.curve, inst.P, inst.Q).to_json()
    assert {"n", "N", "m", "branch", "rerandomization_offset", "timings", "gb_stats"} <= set(out)
