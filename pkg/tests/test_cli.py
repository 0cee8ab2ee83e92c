"""Command-line front end: reports, exit codes and configuration handling."""
import io
import json

import pytest

from cylimit.cli import ConfigError, JobConfig, run, validate_config
from cylimit.relations import construct_y000


def run_cli(args, tmp_path, name="out.json"):
    out = tmp_path / name
    buf = io.StringIO()
    code = run(list(args) + ["--out", str(out)], stdout=buf)
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report, buf.getvalue()


def test_periods_report(tmp_path):
    code, rep, text = run_cli(["periods", "--order", "20"], tmp_path)
    assert code == 0
    assert rep["result"]["frobenius_coefficients"]["f0"][:3] == ["1", "120", "113400"]
    assert rep["result"]["annihilation_exact"] == [True] * 4
    assert rep["order"] == "20" and rep["precision"] == "50"
    assert "conventions" in rep and "config" in rep
    assert "f0[0..9]" in text


def test_reports_are_deterministic(tmp_path):
    _, _, _ = run_cli(["mirror", "--order", "10", "--y111", "5"], tmp_path, "a.json")
    _, _, _ = run_cli(["mirror", "--order", "10", "--y111", "5"], tmp_path, "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_mirror_report(tmp_path):
    code, rep, _ = run_cli(["mirror", "--order", "12", "--y111", "5"], tmp_path)
    assert code == 0
    res = rep["result"]
    assert res["mirror_map"]["phi_of_q"][:3] == ["0", "1", "-770"]
    assert res["instanton_numbers_integral"]
    assert res["instanton_numbers"][0] == "-2875"
    assert rep["conventions"]["y001_mode"] == "auto"


def test_limit_mhs_example(tmp_path):
    code, rep, _ = run_cli(["limit-mhs", "--y111", "5", "--y000", "sym:chi=-200,r=0"], tmp_path)
    assert code == 0
    ext = rep["result"]["extension_class"]
    assert ext["zeta3_coeff"] == "-40"
    assert rep["result"]["hodge_tate"] is True
    assert rep["result"]["limit_mhs"]["hodge_dims"] == [1, 2, 3, 4]


def test_zeta3_check_round_trip(tmp_path):
    z = construct_y000(42, "-1/2", 100).value
    value = f"{mpmath_str(z.real)},{mpmath_str(z.imag)}"
    # a value starting with '-' must be attached with '='
    code, rep, _ = run_cli(["zeta3-check", "--precision", "80", f"--value={value}"], tmp_path)
    assert code == 0
    assert rep["result"]["detected"]["chi"] == "42" and rep["result"]["detected"]["r"] == "-1/2"


def mpmath_str(x):
    import mpmath

    return mpmath.nstr(x, 100)


def test_zeta3_check_detection_failure(tmp_path):
    code, rep, _ = run_cli(["zeta3-check", "--precision", "80", "--value", "0,3.14159"], tmp_path)
    assert code == 3
    assert rep["result"]["detected"] is None


def test_config_errors(tmp_path):
    assert run_cli(["periods", "--order", "2"], tmp_path)[0] == 1
    assert run_cli(["limit-mhs", "--y111", "5", "--y000", "1", "--monodromy"], tmp_path)[0] == 1
    assert run_cli(["periods", "--precision", "10"], tmp_path)[0] == 1
    assert run_cli(["limit-mhs", "--y111", "5"], tmp_path)[0] == 1
    assert run_cli(["nonsense"], tmp_path)[0] == 1
    assert run_cli(["limit-mhs", "--y111", "5", "--y000", "sym:chi=x"], tmp_path)[0] == 1


def test_computation_error(tmp_path):
    op = tmp_path / "op.json"
    # theta^4 - phi theta^2 has no finite singularity besides 0: no integral structure to find
    op.write_text(json.dumps({"theta_coefficients": [["0"], ["0"], ["0", "-1"], ["0"], ["1"]]}))
    code, _, _ = run_cli(["monodromy", "--operator", str(op), "--precision", "30"], tmp_path)
    assert code == 2


def test_validate_config_defaults(tmp_path):
    f = tmp_path / "job.json"
    f.write_text("{}")
    cfg = validate_config(f)
    assert cfg == JobConfig().check()
    assert cfg.order == 50 and cfg.precision == 50


def test_validate_config_rejections(tmp_path):
    f = tmp_path / "job.json"
    f.write_text('{"order": 2}')
    with pytest.raises(ConfigError, match="order"):
        validate_config(f)
    f.write_text('{"y000": "1", "monodromy": true}')
    with pytest.raises(ConfigError, match="mutually exclusive"):
        validate_config(f)
    f.write_text('{"order": 5,\n "bogus": 1}')
    with pytest.raises(ConfigError, match="bogus"):
        validate_config(f)
    f.write_text('{"order": 5,\n ,}')
    with pytest.raises(ConfigError, match="line 2"):
        validate_config(f)


def test_config_file_and_flag_override(tmp_path):
    f = tmp_path / "job.json"
    f.write_text('{"order": 8, "y111": 5, "lambda": "2"}')
    code, rep, _ = run_cli(["mirror", "--config", str(f), "--order", "9"], tmp_path)
    assert code == 0
    assert rep["config"]["order"] == "9" and rep["config"]["lam"] == "2"
