import csv
import io
import json
import math

import pytest

from regl4 import cli


def run(capsys, *argv, environ=None):
    code = cli.main(list(argv), environ=environ or {})
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_xi(capsys):
    code, out, _ = run(capsys, "eval", "xi", "--s", "2")
    assert code == 0
    rec = json.loads(out)
    assert rec["quantity"] == "xi"
    assert abs(rec["value_re"] - math.pi / 6) < 1e-12
    assert rec["value_im"] == 0
    assert rec["error_estimate"] is None
    assert rec["anchors"]


def test_eval_gauss_sum(capsys):
    code, out, _ = run(capsys, "eval", "gauss_sum", "--modulus", "5", "--char", "quadratic")
    rec = json.loads(out)
    assert code == 0
    assert abs(rec["value_re"] - math.sqrt(5)) < 1e-12 and abs(rec["value_im"]) < 1e-12
    assert rec["params"] == {"modulus": 5, "character": "5.4"}


def test_eval_complex_argument_with_i(capsys):
    code, out, _ = run(capsys, "eval", "lfun", "--s", "1+2i", "--modulus", "5", "--char", "4")
    rec = json.loads(out)
    assert code == 0
    assert rec["params"]["s"] == {"re": 1.0, "im": 2.0}
    assert abs(rec["value_re"] - 0.8473774484359909) < 1e-12


def test_eval_i2_constant_has_error_estimate(capsys):
    code, out, _ = run(capsys, "eval", "i2_constant", "--N", "5", "--T", "1")
    rec = json.loads(out)
    assert code == 0
    assert rec["params"]["character"] == "5.4"
    assert 0 < rec["error_estimate"] < 1e-4


def test_eval_triple_product_and_fourier(capsys):
    code, out, _ = run(capsys, "eval", "triple_product", "--N", "15", "--q1", "3", "--w1", "0.8", "--w2", "0.9", "--w3", "4")
    assert code == 0 and json.loads(out)["params"]["q1"] == 3
    code, out, _ = run(capsys, "eval", "fourier_coeff", "--N", "13", "--n", "6", "--s", "0.7")
    assert code == 0 and math.isfinite(json.loads(out)["value_re"])


def test_eval_grh_report(capsys):
    code, out, _ = run(capsys, "eval", "grh_report", "--N", "13", "--X", "1e4")
    rec = json.loads(out)
    assert code == 0
    assert rec["report"]["residual"] == rec["value_re"]


def test_eval_missing_parameter(capsys):
    code, _, err = run(capsys, "eval", "xi")
    assert code == 2
    assert "--s" in err


def test_eval_domain_violation_names_precondition(capsys):
    code, _, err = run(capsys, "eval", "triple_product", "--N", "5", "--w1", "0.7", "--w2", "0.7", "--w3", "3")
    assert code == 2
    assert "w1 must differ from w2" in err


def test_unknown_quantity_is_usage_error(capsys):
    code, _, _ = run(capsys, "eval", "nope")
    assert code == 2


def test_nonconvergence_exit_code(capsys):
    code, _, err = run(capsys, "eval", "i2_constant", "--N", "5", "--tol-derived", "1e-16")
    assert code == 3
    assert "converge" in err


def test_empty_n_list(capsys):
    code, _, err = run(capsys, "sweep", "N", "--N", "")
    assert code == 2


def test_i2_rejects_level_one(capsys):
    code, _, _ = run(capsys, "verify", "i2", "--N", "1")
    assert code == 2


def test_verify_characters_passes(capsys):
    code, out, _ = run(capsys, "verify", "characters")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("0 failed, 0 reported")


def test_verify_json_report(capsys):
    code, out, _ = run(capsys, "verify", "lfun", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["failed"] == 0
    for c in rep["checks"]:
        assert c["anchor"] and c["status"] in ("pass", "report")


def test_verify_i2_flags_printed_derivative_typos(capsys):
    code, out, _ = run(capsys, "verify", "i2", "--N", "5", "--T", "1", "--format", "json")
    rep = json.loads(out)
    failed = [c["name"] for c in rep["checks"] if c["status"] == "fail"]
    assert code == 1
    assert failed == ["F_3'(0) vs printed formula, N=5, T=1", "F_4'(0) vs printed formula, N=5, T=1"]


def test_sweep_csv(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "N", "--N", "5,13", "--T", "1", "--output", str(path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert [r["N"] for r in rows] == ["5", "13"]
    assert list(rows[0]) == list(cli.SWEEP_COLUMNS)
    assert all(math.isfinite(float(r["ratio"])) for r in rows)


def test_sweep_eta(capsys):
    code, out, _ = run(capsys, "sweep", "eta", "--N", "5", "--eta", "0.1,0.05")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert rows[0]["eta"] == "0.1" and rows[0]["xi_total_re"]


def test_sweep_deterministic_and_order_preserving_with_threads(capsys):
    _, serial, _ = run(capsys, "sweep", "T", "--N", "5", "--T", "2,0.5,1")
    _, threaded, _ = run(capsys, "sweep", "T", "--N", "5", "--T", "2,0.5,1", "--threads", "3")
    assert serial == threaded
    assert [r["T"] for r in csv.DictReader(io.StringIO(serial))] == ["2.0", "0.5", "1.0"]


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# scenario\nN = 13\ns = 3\nmodulus = 5\nchar = quadratic\n")
    code, out, _ = run(capsys, "eval", "lfun", "--config", str(cfg))
    assert json.loads(out)["params"]["s"]["re"] == 3.0
    code, out, _ = run(capsys, "eval", "lfun", "--config", str(cfg), "--s", "2")
    assert code == 0 and json.loads(out)["params"]["s"]["re"] == 2.0


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = 1\n")
    code, _, err = run(capsys, "eval", "xi", "--config", str(cfg))
    assert code == 2 and "frobnicate" in err


def test_thread_precedence(tmp_path):
    cfg = tmp_path / "t.cfg"
    cfg.write_text("threads = 2\n")
    p = cli.build_parser()
    ns = p.parse_args(["verify", "all", "--config", str(cfg)])
    assert cli.resolve_options(ns, {})["threads"] == 2
    assert cli.resolve_options(ns, {"REGL4_THREADS": "5"})["threads"] == 5
    ns = p.parse_args(["verify", "all", "--config", str(cfg), "--threads", "3"])
    assert cli.resolve_options(ns, {"REGL4_THREADS": "5"})["threads"] == 3
    ns = p.parse_args(["verify", "all"])
    assert cli.resolve_options(ns, {})["threads"] == 1


def test_nan_becomes_null():
    assert cli._jsonable({"x": float("nan"), "z": complex(1, float("inf"))}) == {"x": None, "z": {"re": 1.0, "im": None}}
