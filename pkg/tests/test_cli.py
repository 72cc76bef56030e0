import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeineq import cli
from freeineq.cli import ConfigError, RunConfig, main, parse_function, parse_potential


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestFunctionSpecs:
    @pytest.mark.parametrize(
        "spec,x,expected",
        [
            ("x", 0.5, 0.5),
            ("x^2", 1.5, 2.25),
            ("x**3 - 2*x", 1.0, -1.0),
            ("exp", 0.3, np.exp(0.3)),
            ("1/(5-x)", 1.0, 0.25),
            ("cosh(x) + pi", 0.0, 1.0 + np.pi),
            ("mono:1,0,3", 2.0, 13.0),
            ("cheb:0,0,1", 2.0, 1.0),
        ],
    )
    def test_values(self, spec, x, expected):
        assert parse_function(spec).callable()(np.array([x]))[0] == pytest.approx(expected)

    @pytest.mark.parametrize("spec", ["unknownfn", "foo(x)", "x +", "", "cheb:", "cheb:a,b", "__import__('os')", "x.real"])
    def test_rejected(self, spec):
        with pytest.raises(ConfigError):
            parse_function(spec)

    def test_cheb_exact(self):
        s = parse_function("cheb:0,0,1").on_reference(24)
        assert s.coeffs.tolist() == [0.0, 0.0, 1.0]

    def test_label(self):
        assert parse_function("x ** 2").label == "x^2"


class TestPotentialSpecs:
    def test_named(self):
        assert parse_potential("quartic").monomials == ((4, 0.25),)

    def test_poly(self):
        assert parse_potential("poly:0,0,0.5").monomials == ((2, 0.5),)

    def test_record(self):
        v = parse_potential('{"monomials": [[1, 1.0]], "log_s": 1.0, "domain": [0, 1e9]}')
        assert v.log_s == 1.0 and v.domain == (0.0, 1e9)

    @pytest.mark.parametrize("spec", ["nope", '{"bad": 1}', "{not json"])
    def test_rejected(self, spec):
        with pytest.raises(ConfigError):
            parse_potential(spec)


class TestRunConfig:
    def test_roundtrip_default(self):
        cfg = RunConfig()
        assert RunConfig.from_text(cfg.to_text()) == cfg

    @given(
        st.sampled_from(cli.COMMANDS),
        st.integers(1, 512),
        st.floats(0, 1, allow_nan=False),
        st.lists(st.sampled_from(sorted(cli.NAMED_POTENTIALS)), max_size=3),
        st.text(alphabet="x^+-*/()0123456789 ", max_size=12),
    )
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_bit_exact(self, command, degree, tol, pots, fn):
        cfg = RunConfig(command=command, degree=degree, tol=tol, potentials=pots, fn=fn)
        back = RunConfig.from_text(cfg.to_text())
        assert back == cfg
        assert back.to_text() == cfg.to_text()

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            RunConfig.from_text("bogus = 1\n")

    def test_bounds(self):
        with pytest.raises(ConfigError):
            RunConfig.from_text("degree = 0\n")
        with pytest.raises(ConfigError):
            RunConfig.from_text('format = "xml"\n')
        with pytest.raises(ConfigError):
            RunConfig.from_text("tol = -1\n")

    def test_comments_and_bare_strings(self):
        cfg = RunConfig.from_text("# comment\ncommand = refine\nfn = cheb:0,0,1\nkmax = 3\n")
        assert cfg.command == "refine" and cfg.fn == "cheb:0,0,1" and cfg.kmax == 3

    def test_missing_equals(self):
        with pytest.raises(ConfigError):
            RunConfig.from_text("degree 3\n")


class TestMain:
    def test_poincare_x(self, capsys):
        code, out, _ = run(["poincare", "--fn", "x", "--format", "json"], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["lhs"] == pytest.approx(1.0) and rep["rhs"] == pytest.approx(1.0) and rep["passed"]
        assert rep["meta"]["omega_quadrature"] == pytest.approx(1.0)

    def test_refine_phi2(self, capsys):
        code, out, _ = run(["refine", "--fn", "cheb:0,0,1", "--kmax", "3"], capsys)
        assert code == 0 and "PASS" in out and "term[1] = 1.0000000000000000e+00" in out

    def test_unknown_function_exit_2(self, capsys):
        code, _, err = run(["poincare", "--fn", "unknownfn"], capsys)
        assert code == 2 and "unknownfn" in err

    def test_bad_flag_exit_2(self, capsys):
        code, _, _ = run(["poincare", "--nope"], capsys)
        assert code == 2

    def test_no_command_exit_2(self, capsys):
        assert run([], capsys)[0] == 2

    def test_failure_exit_1(self, capsys):
        code, out, _ = run(["refine", "--fn", "exp", "--tol", "0", "--format", "json"], capsys)
        rep = json.loads(out)
        assert code == 1 and not rep["passed"] and rep["slack"] != 0.0

    def test_solver_error_reported(self, capsys):
        code, out, _ = run(["equilibrium", "--potential", "poly:0,1", "--format", "json"], capsys)
        assert code == 1 and "SolverError" in json.loads(out)["meta"]["error"]

    def test_csv(self, capsys):
        code, out, _ = run(["brascamp-lieb", "--potential", "quartic-rescaled", "--fn", "x^2", "--format", "csv"], capsys)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "name,lhs,rhs,slack,tol,passed,meta"
        assert lines[1].startswith("brascamp_lieb,")

    def test_equality_default(self, capsys):
        code, out, _ = run(["brascamp-lieb", "--potential", "quartic-rescaled", "--fn", "V'", "--format", "json"], capsys)
        assert code == 0 and json.loads(out)["lhs"] == pytest.approx(4 / 3)

    def test_wishart(self, capsys):
        code, out, _ = run(["wishart", "--fn", "1/x", "--format", "json"], capsys)
        rep = json.loads(out)
        assert code == 0 and abs(rep["meta"]["weak_slack"]) < 1e-6

    def test_wishart_needs_log(self, capsys):
        assert run(["wishart", "--potential", "gaussian"], capsys)[0] == 2

    def test_v_independence(self, capsys):
        code, out, _ = run(["v-independence", "--fn", "cheb:0,0,1", "--galerkin-dim", "20", "--format", "json"], capsys)
        assert code == 0 and json.loads(out)["meta"]["galerkin_dim"] == 20

    def test_interpolate(self, capsys):
        assert run(["interpolate", "--fn", "exp", "--fn2", "x^3"], capsys)[0] == 0

    def test_mc(self, capsys):
        code, out, _ = run(["mc-fluctuations", "--fn", "x", "--mc-n", "20", "--mc-samples", "200", "--format", "json"], capsys)
        assert code == 0 and json.loads(out)["rhs"] == 1.0

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "r.json"
        code, out, _ = run(["poincare", "--fn", "x", "--format", "json", "--out", str(path)], capsys)
        assert code == 0 and out == "" and json.loads(path.read_text())["name"] == "poincare"

    def test_config_file_and_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("fn = cheb:0,0,1\nformat = json\n")
        code, out, _ = run(["poincare", "--config", str(cfg), "--fn", "x"], capsys)
        assert code == 0 and json.loads(out)["lhs"] == pytest.approx(1.0)

    def test_config_unknown_key_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("colour = blue\n")
        assert run(["poincare", "--config", str(cfg)], capsys)[0] == 2


class TestSuite:
    def test_empty_suite_exit_2(self, tmp_path, capsys):
        p = tmp_path / "suite.json"
        p.write_text("[]")
        assert run(["suite", "--suite", str(p)], capsys)[0] == 2

    def test_missing_suite_exit_2(self, tmp_path, capsys):
        assert run(["suite", "--suite", str(tmp_path / "none.json")], capsys)[0] == 2

    def test_custom_suite(self, tmp_path, capsys):
        p = tmp_path / "suite.json"
        p.write_text(json.dumps([{"command": "poincare", "fn": "x"}, {"command": "refine", "fn": "cheb:0,0,1", "kmax": 2}]))
        code, out, _ = run(["suite", "--suite", str(p), "--format", "json"], capsys)
        names = [json.loads(l)["name"] for l in out.splitlines()]
        assert code == 0 and names == ["poincare", "refinement"]

    def test_errors_collected(self, tmp_path, capsys):
        p = tmp_path / "suite.json"
        p.write_text(json.dumps([{"command": "equilibrium", "potentials": ["poly:0,1"]}, {"command": "poincare", "fn": "x"}]))
        code, out, _ = run(["suite", "--suite", str(p), "--format", "json"], capsys)
        reps = [json.loads(l) for l in out.splitlines()]
        assert code == 1 and len(reps) == 2 and reps[1]["passed"]

    def test_tolerance_zero(self, capsys):
        code, out, _ = run(["suite", "--tol", "0", "--format", "json"], capsys)
        reps = [json.loads(l) for l in out.splitlines()]
        assert code == 1
        failed = [r for r in reps if not r["passed"]]
        # identities fail, and so do inequalities sitting exactly at equality up to roundoff
        assert any(r["kind"] == "identity" for r in failed)
        assert all(r["kind"] == "identity" or abs(r["slack"]) < 1e-12 for r in failed)
        assert all(np.isfinite(r["slack"]) for r in failed)

    def test_default_suite_passes(self, capsys):
        code, out, _ = run(["suite", "--format", "json"], capsys)
        reps = [json.loads(l) for l in out.splitlines()]
        assert code == 0 and all(r["passed"] for r in reps)
