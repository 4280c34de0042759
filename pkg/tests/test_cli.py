import csv
from fractions import Fraction

import numpy as np
import pytest

from gebep import (
    ConsistencyError,
    EscParams,
    GEParams,
    admissible_mask,
    build_bounds_report,
    erasure_count_pmf,
    exact_bep,
    p_burst,
    p_rand,
    p_rand_burst,
    sample_blocks,
    select_best,
)
from gebep.cli import main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(out):
    lines = out.splitlines()
    assert lines and lines[0].startswith("# gebep ")
    rows = list(csv.reader(lines[1:]))
    return lines[0], rows[0], rows[1:]


def test_pk_defaults(capsys):
    code, out, _ = run_cli(capsys, ["pk"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert meta.startswith("# gebep pk ")
    assert header == ["n", "k", "p_nk"]
    assert len(rows) == 15
    ge = GEParams(1e-4, 0.5, 0.01, 1.0)
    total = 0.0
    for k, row in enumerate(rows):
        assert row[0] == "14" and int(row[1]) == k
        value = float(row[2])
        assert value == erasure_count_pmf(ge, 14, k)  # round-trip is exact
        total += value
    assert abs(total - 1.0) < 1e-10


def test_pk_custom_channel(capsys):
    code, out, _ = run_cli(
        capsys, ["pk", "--n", "6", "--alpha", "0.2", "--beta", "0.6", "--eps0", "0.1", "--eps1", "0.9"]
    )
    assert code == 0
    _, _, rows = parse_csv(out)
    ge = GEParams(0.2, 0.6, 0.1, 0.9)
    assert len(rows) == 7
    for k, row in enumerate(rows):
        assert float(row[2]) == erasure_count_pmf(ge, 6, k)


def test_pk_invalid_n(capsys):
    code, out, err = run_cli(capsys, ["pk", "--n", "0"])
    assert code == 2
    assert out == ""
    assert "configuration error" in err


def test_block_bep_grid(capsys):
    code, out, _ = run_cli(
        capsys,
        ["block-bep", "--eps-grid", "0.01,1.0,4", "--a", "2", "--b", "4", "--n", "10"],
    )
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == ["eps", "p_rand", "p_burst", "p_rand_burst"]
    grid = np.geomspace(0.01, 1.0, 4)
    assert len(rows) == 4
    for eps_ref, row in zip(grid, rows):
        eps = float(row[0])
        assert eps == float(eps_ref)
        ge = GEParams(1e-4, 0.5, eps, 1.0)
        assert float(row[1]) == p_rand(ge, 10, 2)
        assert float(row[2]) == p_burst(ge, 10, 4)
        assert float(row[3]) == p_rand_burst(ge, 10, 2, 4)
        assert float(row[3]) <= min(float(row[1]), float(row[2])) + 1e-12


def test_block_bep_noiseless(capsys):
    code, out, _ = run_cli(capsys, ["block-bep", "--eps0", "0", "--eps1", "0"])
    assert code == 0
    _, _, rows = parse_csv(out)
    assert len(rows) == 1
    assert [float(x) for x in rows[0][1:]] == [0.0, 0.0, 0.0]


def test_esc_bounds_default_has_exact(capsys):
    code, out, _ = run_cli(capsys, ["esc-bounds"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert meta.startswith("# gebep esc-bounds ")
    assert header == ["eps", "lower_simple", "lower_improved", "exact", "upper_improved", "upper_simple"]
    assert len(rows) == 1
    ge = GEParams(1e-4, 0.5, 0.01, 1.0)
    report = build_bounds_report(ge, EscParams(3, 6, 10, 14), with_exact=True)
    got = [float(x) for x in rows[0]]
    assert got[1:] == [
        report.lower_simple,
        report.lower_improved,
        report.exact,
        report.upper_improved,
        report.upper_simple,
    ]
    for left, right in zip(got[1:], got[2:]):
        assert left <= right + 1e-10


def test_esc_bounds_guard_drops_exact(capsys):
    code, out, _ = run_cli(capsys, ["esc-bounds", "--max-enum", "4"])
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == ["eps", "lower_simple", "lower_improved", "upper_improved", "upper_simple"]
    assert len(rows[0]) == 5


def test_esc_bounds_rejects_out_of_range_n(capsys):
    code, _, err = run_cli(capsys, ["esc-bounds", "--n", "20"])
    assert code == 2
    assert "configuration error" in err


def test_simulate_deterministic(capsys):
    argv = ["simulate", "--a", "2", "--b", "3", "--tau", "4", "--trials", "3000", "--seed", "9"]
    code, out1, _ = run_cli(capsys, argv)
    assert code == 0
    code, out2, _ = run_cli(capsys, argv)
    assert out1 == out2
    _, header, rows = parse_csv(out1)
    assert header == ["eps", "trials", "failures", "estimate", "ci_low", "ci_high", "analytic_exact"]
    row = rows[0]
    ge = GEParams(1e-4, 0.5, 0.01, 1.0)
    blocks = sample_blocks(ge, 6, 3000, seed=9)
    failures = int((~admissible_mask(blocks, 2, 3, 4)).sum())
    assert int(row[2]) == failures
    assert float(row[3]) == failures / 3000
    assert float(row[4]) <= float(row[3]) <= float(row[5])
    assert float(row[6]) == exact_bep(ge, EscParams(2, 3, 4, 6))


def test_simulate_noiseless(capsys):
    code, out, _ = run_cli(
        capsys,
        ["simulate", "--eps0", "0", "--eps1", "0", "--a", "1", "--b", "2", "--tau", "2", "--trials", "500"],
    )
    assert code == 0
    _, _, rows = parse_csv(out)
    row = rows[0]
    assert int(row[2]) == 0
    assert float(row[3]) == 0.0
    assert float(row[6]) == 0.0


def test_select_grid(capsys):
    code, out, _ = run_cli(
        capsys,
        ["select", "--tau", "4", "--pth", "0.001", "--pth", "0.1", "--eps-grid", "0.05,0.5,2"],
    )
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert meta.startswith("# gebep select ")
    assert header == ["eps", "p_th", "family", "a", "b", "n", "k", "rate", "bound_value", "feasible"]
    assert len(rows) == 2 * 2 * 3
    for row in rows:
        if row[9] == "true":
            a, b, n, k = (int(x) for x in row[3:7])
            assert Fraction(row[7]) == Fraction(k, n)
            assert n == 4 + 1 - a + b and k == 4 + 1 - a
            assert float(row[8]) <= float(row[1])
        else:
            assert row[3:8] == ["", "", "", "", ""]
    # spot-check one row against the library
    eps, p_th = float(rows[0][0]), float(rows[0][1])
    res = select_best(GEParams(1e-4, 0.5, eps, 1.0), 4, p_th, family=rows[0][2])
    assert rows[0][9] == ("true" if res.feasible else "false")
    assert float(rows[0][8]) == res.bound_value


def test_select_infeasible(capsys):
    code, out, _ = run_cli(
        capsys, ["select", "--tau", "3", "--eps0", "1", "--eps1", "1", "--pth", "1e-9"]
    )
    assert code == 0
    _, _, rows = parse_csv(out)
    assert len(rows) == 3
    for row in rows:
        assert row[9] == "false"
        assert row[3:8] == ["", "", "", "", ""]
        assert float(row[8]) > 1e-9


def test_out_file_matches_stdout(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, out, _ = run_cli(capsys, ["pk", "--n", "5"])
    assert code == 0
    code2, out2, _ = run_cli(capsys, ["pk", "--n", "5", "--out", str(target)])
    assert code2 == 0
    assert out2 == ""
    assert target.read_text() == out


def test_eps_grid_validation(capsys):
    for bad in ("0,1,5", "0.1,1", "a,b,c", "0.1,1,0", "0.1,2.0,5"):
        code, _, err = run_cli(capsys, ["block-bep", "--eps-grid", bad])
        assert code == 2
        assert "configuration error" in err


def test_consistency_violation_exit_code(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise ConsistencyError("forced for the test")

    monkeypatch.setattr("gebep.cli.erasure_count_pmf", boom)
    code, out, err = run_cli(capsys, ["pk", "--n", "3"])
    assert code == 3
    assert "consistency violation" in err


def test_unknown_subcommand_exits_nonzero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
