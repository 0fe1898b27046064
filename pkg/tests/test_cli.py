import io

import numpy as np
import pytest

from csma_fugacity.cli import build_parser, main
from csma_fugacity.graph import grid, load_dimacs
from csma_fugacity.io import parse_vector


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(map(str, argv)), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def chordal_file(tmp_path):
    path = tmp_path / "g.col"
    assert run("gen", "--kind", "chordal6", "--out", path)[0] == 0
    return path


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "k3.col"
    assert run("gen", "--kind", "complete", "--n", 3, "--out", path)[0] == 0
    return path


class TestGen:
    def test_stdout(self):
        code, out, _ = run("gen", "--kind", "grid", "--rows", 2, "--cols", 2)
        assert code == 0
        assert load_dimacs(out) == grid(2, 2)

    def test_random_reproducible(self, tmp_path):
        a, b = tmp_path / "a.col", tmp_path / "b.col"
        run("gen", "--kind", "random_geometric", "--n", 20, "--seed", 4, "--out", a)
        run("gen", "--kind", "random_geometric", "--n", 20, "--seed", 4, "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_missing_size(self):
        code, _, err = run("gen", "--kind", "grid", "--rows", 2)
        assert code == 1 and "cols" in err


class TestFugacityPipeline:
    def test_chordal_roundtrip(self, tmp_path, chordal_file):
        fug = tmp_path / "v.txt"
        assert run("fugacity", "--graph", chordal_file, "--method", "clique", "--rate", 0.2, "--out", fug)[0] == 0
        code, out, _ = run("marginals", "--graph", chordal_file, "--fugacities", fug)
        assert code == 0
        np.testing.assert_allclose(parse_vector(out, "s", 6), 0.2, atol=1e-9)

    def test_rates_file(self, tmp_path, chordal_file):
        rates = tmp_path / "s.txt"
        rates.write_text("0.1 0.2 0.15\n0.3 0.1 0.2\n")
        code, out, _ = run("fugacity", "--graph", chordal_file, "--rates", rates)
        assert code == 0 and len(out.splitlines()) == 6

    def test_infeasible_exit_2(self, triangle_file):
        code, out, err = run("fugacity", "--rate", 0.6, "--graph", triangle_file)
        assert code == 2 and out == ""
        assert "region {1,2,3}" in err and len(err.splitlines()) == 1

    def test_rate_and_rates_conflict(self, tmp_path, triangle_file):
        code, _, err = run("fugacity", "--graph", triangle_file, "--rate", 0.1, "--rates", tmp_path / "x")
        assert code == 1 and "--rates" in err

    def test_missing_graph_file(self, tmp_path):
        code, _, err = run("fugacity", "--graph", tmp_path / "nope.col", "--rate", 0.1)
        assert code == 1 and "nope.col" in err

    def test_malformed_graph(self, tmp_path):
        bad = tmp_path / "bad.col"
        bad.write_text("p edge 2 1\ne 1 5\n")
        code, _, err = run("fugacity", "--graph", bad, "--rate", 0.1)
        assert code == 1 and "line 2" in err

    def test_unknown_flag(self, chordal_file):
        code, _, err = run("fugacity", "--graph", chordal_file, "--rate", 0.1, "--colour", "red")
        assert code == 1 and "--colour" in err

    def test_out_of_range_rate(self, chordal_file):
        assert run("fugacity", "--graph", chordal_file, "--rate", 1.5)[0] == 1

    def test_too_large_exit_2(self, tmp_path):
        g = tmp_path / "big.col"
        run("gen", "--kind", "ring", "--n", 40, "--out", g)
        fug = tmp_path / "v.txt"
        run("fugacity", "--graph", g, "--rate", 0.1, "--out", fug)
        code, _, err = run("marginals", "--graph", g, "--fugacities", fug)
        assert code == 2 and "30" in err


class TestSimulate:
    def test_rates_and_trace(self, tmp_path, chordal_file):
        fug = tmp_path / "v.txt"
        trace = tmp_path / "trace.txt"
        run("fugacity", "--graph", chordal_file, "--rate", 0.2, "--out", fug)
        args = ("simulate", "--graph", chordal_file, "--fugacities", fug, "--slots", 200_000, "--burn-in", 1000, "--seed", 3)
        code, out, _ = run(*args, "--trace", trace)
        assert code == 0
        np.testing.assert_allclose(parse_vector(out, "s", 6), 0.2, atol=0.02)
        assert len(trace.read_text().splitlines()) == 200_000
        assert run(*args)[1] == out

    def test_burn_in_too_long(self, tmp_path, chordal_file):
        fug = tmp_path / "v.txt"
        run("fugacity", "--graph", chordal_file, "--rate", 0.2, "--out", fug)
        code, _, err = run("simulate", "--graph", chordal_file, "--fugacities", fug, "--slots", 10, "--burn-in", 10)
        assert code == 1 and "--burn-in" in err


class TestSweep:
    def test_grid_two_rows(self, tmp_path):
        csv = tmp_path / "out.csv"
        code, _, _ = run("sweep", "--kind", "grid", "--rows", 4, "--cols", 4, "--methods", "bethe,cycle4",
                         "--loads", 0.7, "--oracle", "exact", "--csv", csv)
        assert code == 0
        lines = csv.read_text().splitlines()
        assert lines[0] == "topology,n,seed,method,load,error_abs,error_pct,status"
        assert [line.split(",")[3] for line in lines[1:]] == ["bethe", "cycle4"]
        assert all(line.endswith(",ok") for line in lines[1:])

    def test_byte_identical(self, tmp_path):
        args = ("sweep", "--kind", "random_geometric", "--n", 10, "--seed", 2, "--loads", "0.5,0.9")
        assert run(*args)[1] == run(*args)[1]

    def test_sampler_oracle(self, chordal_file):
        code, out, _ = run("sweep", "--graph", chordal_file, "--methods", "clique", "--loads", 0.5,
                           "--oracle", "sampler", "--slots", 200_000)
        assert code == 0
        assert float(out.splitlines()[1].split(",")[5]) < 0.02

    def test_needs_exactly_one_source(self, chordal_file):
        assert run("sweep", "--loads", 0.5)[0] == 1
        assert run("sweep", "--graph", chordal_file, "--kind", "fig8")[0] == 1

    def test_bad_method_list(self):
        code, _, err = run("sweep", "--kind", "fig8", "--methods", "bethe,kikuchi")
        assert code == 1 and "--methods" in err


class TestTable1:
    def test_small(self, tmp_path):
        csv = tmp_path / "t.csv"
        code, out, _ = run("table1", "--count", 2, "--n", 10, "--load", 0.8, "--seed", 0, "--csv", csv)
        assert code == 0
        assert [line.split()[0] for line in out.splitlines()] == ["bethe", "clique", "cycle4"]
        assert len(csv.read_text().splitlines()) == 1 + 2 * 3


class TestHelp:
    @pytest.mark.parametrize("command, flags", [
        ("gen", {"--kind", "--n", "--rows", "--cols", "--side", "--radius", "--seed", "--out"}),
        ("fugacity", {"--graph", "--method", "--rate", "--rates", "--out"}),
        ("marginals", {"--graph", "--fugacities"}),
        ("simulate", {"--graph", "--fugacities", "--slots", "--burn-in", "--seed", "--trace"}),
        ("sweep", {"--graph", "--kind", "--n", "--rows", "--cols", "--side", "--radius", "--seed",
                   "--methods", "--loads", "--oracle", "--slots", "--csv"}),
        ("table1", {"--count", "--n", "--load", "--seed", "--csv"}),
    ])
    def test_flags(self, command, flags):
        sub = build_parser()._subparsers._group_actions[0].choices[command]
        listed = {opt for a in sub._actions for opt in a.option_strings if opt.startswith("--") and opt != "--help"}
        assert listed == flags

    def test_help_exit_zero(self):
        code, out, _ = run("sweep", "--help")
        assert code == 0
