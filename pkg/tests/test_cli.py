import csv
import io
import json
from pathlib import Path

import pytest

from ecquad.cli import BENCH_HEADER, generate_instance, load_instance, main
from ecquad.errors import UsageError

from test_pipeline import _non_cyclic_pair

DATA = Path(__file__).parent / "data"
FIXTURE = DATA / "instance_1009_7.json"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write_instance(tmp_path, curve, P, Q, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"p": curve.p, "A": curve.A, "B": curve.B,
                                "P": P.to_json(), "Q": Q.to_json()}))
    return path


def test_gen_fixture_is_reproducible(capsys):
    code, out, _ = run(capsys, "gen", "--p", 1009, "--seed", 7)
    assert code == 0
    assert out == FIXTURE.read_text()
    curve, P, Q, n = load_instance(out)
    assert curve.scalar_mul(n, P) == Q


def test_gen_offset_and_errors(capsys):
    inst = generate_instance(1009, 3, offset=100)
    curve, P, Q, n = load_instance(json.dumps(inst))
    N = curve.point_order(P)
    assert n == N - 100 and curve.scalar_mul(n, P) == Q
    assert N > 4
    code, _, err = run(capsys, "gen", "--p", 1000)
    assert code == 1 and "not prime" in err


def test_solve_fixture(capsys):
    planted = json.loads(FIXTURE.read_text())["n"]
    code, out, _ = run(capsys, "solve", FIXTURE)
    assert code == 0
    res = json.loads(out)
    assert res["n"] % res["N"] == planted % res["N"]
    assert {"n", "N", "m", "branch", "rerandomization_offset", "timings", "gb_stats"} <= set(res)
    code, out, _ = run(capsys, "oracle", FIXTURE)
    assert code == 0 and json.loads(out)["n"] == res["n"]


def test_out_of_subgroup_exit_2(capsys, tmp_path):
    E, P, Q = _non_cyclic_pair(251)
    path = write_instance(tmp_path, E, P, Q)
    assert run(capsys, "solve", path)[0] == 2
    assert run(capsys, "oracle", path)[0] == 2


def test_oracle_infinity(capsys, tmp_path):
    curve, P, _, _ = load_instance(FIXTURE.read_text())
    path = write_instance(tmp_path, curve, P, curve.O)
    code, out, _ = run(capsys, "oracle", path)
    assert code == 0 and json.loads(out)["n"] == 0


def test_degenerate_exit_3(capsys, tmp_path):
    curve, P, _, _ = load_instance(FIXTURE.read_text())
    path = write_instance(tmp_path, curve, P, curve.scalar_mul(2, P))
    code, out, _ = run(capsys, "solve", path, "--max-rerandomizations", 0)
    assert code == 3 and json.loads(out)["outcome"] == "degenerate"


def test_timeout_exit_4(capsys):
    code, out, _ = run(capsys, "solve", FIXTURE, "--timeout", 1e-4)
    assert code == 4 and json.loads(out)["outcome"] == "timeout"


@pytest.mark.parametrize("text, msg", [
    ("{bad", "malformed JSON"),
    ('{"p": 101, "A": 1, "B": 1, "P": [0, 1], "Q": null, "extra": 1}', "unknown fields"),
    ('{"p": 101, "A": 1, "B": 1, "Q": null}', "missing fields"),
    ('{"p": 101, "A": 1, "B": 1, "P": [0, 2], "Q": null}', "not on"),
    ('{"p": 100, "A": 1, "B": 1, "P": [0, 1], "Q": null}', "not prime"),
])
def test_bad_instance_files(capsys, tmp_path, text, msg):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, _, err = run(capsys, "solve", path)
    assert code == 1 and msg in err


def test_bench_csv(capsys, tmp_path):
    out = tmp_path / "b.csv"
    args = ["bench", "--primes", "251,1009", "--count", 3, "--seed", 4, "--timeout", 60,
            "--out", out]
    code, _, err = run(capsys, *args)
    assert code == 0 and "bench summary" in err
    first = out.read_text()
    rows = list(csv.DictReader(io.StringIO(first)))
    assert first.splitlines()[0] == ",".join(BENCH_HEADER)
    assert len(rows) == 6 and all(r["outcome"] == "solved" for r in rows)
    run(capsys, *args)
    second = list(csv.DictReader(io.StringIO(out.read_text())))
    strip = [k for k in BENCH_HEADER if not k.startswith("t_")]
    assert [[r[k] for k in strip] for r in rows] == [[r[k] for k in strip] for r in second]


def test_bench_unwritable(capsys, tmp_path):
    code, _, err = run(capsys, "bench", "--primes", "251", "--count", 1,
                       "--out", tmp_path / "missing" / "x.csv")
    assert code == 1 and "cannot write" in err


def test_check_prop(capsys):
    code, out, _ = run(capsys, "check-prop", "--p", 101, "--trials", 0)
    assert code == 0 and out == ""
    code, out, _ = run(capsys, "check-prop", "--p", 101, "--trials", 20, "--seed", 2)
    lines = [json.loads(ln) for ln in out.splitlines()]
    assert code == 0 and len(lines) == 20 and all(r["equal"] for r in lines)
    assert {"curve", "C", "x0", "v", "mu", "equal"} == set(lines[0])
    assert run(capsys, "check-prop", "--p", 101, "--trials", 20, "--seed", 2)[1] == out


def test_gb_command(capsys, tmp_path):
    src = tmp_path / "s.txt"
    src.write_text("# p = 101\n# vars = x, y\nx\ny\n")
    code, out, _ = run(capsys, "gb", src)
    assert code == 0 and out.splitlines()[3:] == ["y", "x"]
    again = tmp_path / "t.txt"
    again.write_text(out)
    assert run(capsys, "gb", again)[1] == out


def test_gb_golden(capsys):
    golden = (DATA / "gb_1009_7.txt").read_text()
    for method in ("f4", "buchberger"):
        code, out, _ = run(capsys, "gb", DATA / "system_1009_7.txt", "--method", method)
        assert code == 0 and out == golden


def test_load_instance_rejects_non_object():
    with pytest.raises(UsageError):
        load_instance("[1, 2]")
