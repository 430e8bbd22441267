import json
from fractions import Fraction
from pathlib import Path

import pytest

from anharmonic_qes.cli import main
from anharmonic_qes.config import RunConfig, parse_width

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_outputs(capsys):
    code, out, _ = run(capsys, "spectrum", "--q", "4", "--N", "5", "--form", "exact")
    assert code == 0
    assert out.strip() == "4, -1, (3 +- sqrt(5))/2, (-2 +- 2*sqrt(5))/2"
    code, out, _ = run(capsys, "spectrum", "--q", "1", "--N", "4")
    assert out.strip() == "3 1 -1 -3"


def test_spectrum_formats(capsys):
    _, out, _ = run(capsys, "spectrum", "--q", "2", "--N", "3", "--format", "json")
    assert json.loads(out)["entries"] == ["2", "-1"]
    _, out, _ = run(capsys, "spectrum", "--q", "2", "--N", "3", "--format", "csv")
    assert out.splitlines() == ["q,N,root", "2,3,2", "2,3,-1"]


def test_unsupported_q_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["spectrum", "--q", "6", "--N", "2"])
    assert info.value.code == 2


def test_bad_N_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["spectrum", "--q", "1", "--N", "0"])
    assert info.value.code == 2


def test_eliminant_text(capsys):
    code, out, err = run(capsys, "eliminant", "--q", "2", "--N", "3")
    assert code == 0
    assert out.splitlines()[:2] == ["eliminant: s^6 - 7*s^3 - 8", "content: 1"]
    _, out, _ = run(capsys, "eliminant", "--q", "3", "--N", "3")
    assert "z-form: s*(z^2 - 12*z - 64) at z = s^4" in out
    _, out, _ = run(capsys, "eliminant", "--q", "1", "--N", "2")
    assert out.splitlines()[0] == "eliminant: s^2 - 1"


def test_eliminant_json(capsys):
    _, out, _ = run(capsys, "eliminant", "--q", "4", "--N", "3", "--format", "json")
    doc = json.loads(out)
    assert doc["degree"] == 15
    assert doc["removed_factor"] == "s"


def test_eliminant_budget_failure(capsys):
    code, _, err = run(capsys, "eliminant", "--q", "4", "--N", "4", "--budget-degree", "8")
    assert code == 3
    assert "budget" in err


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "--q", "4", "--N", "3")[0] == 0
    assert run(capsys, "verify", "--q", "4", "--N", "3", "--inject-error")[0] == 1


def test_verify_needs_case(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--q", "4"])
    assert info.value.code == 2


def test_table1_golden(capsys, tmp_path):
    code, out, _ = run(capsys, "table1", "--Nmax", "12")
    assert code == 0
    assert out == (GOLDEN / "table1.txt").read_text()
    dest = tmp_path / "t.txt"
    assert run(capsys, "table1", "--out", str(dest))[0] == 0
    assert dest.read_text() == out


def test_continuation_command(capsys):
    code, out, err = run(capsys, "continuation", "--q", "1", "--N", "2", "--grid", "3", "--format", "csv")
    assert code == 0
    assert len(out.splitlines()) == 4
    assert "monotone=True" in err


def test_residual_command(capsys):
    code, out, _ = run(capsys, "residual", "--q", "0", "--N", "3", "--ell", "0")
    assert code == 0
    assert out.startswith("E=11 ")
    code, out, _ = run(capsys, "residual", "--q", "1", "--N", "2", "--D", "100", "--format", "json")
    assert code == 0
    assert float(json.loads(out)["residual"]) < 1e-30


def test_output_is_deterministic(capsys):
    first = run(capsys, "eliminant", "--q", "4", "--N", "4", "--format", "json")
    second = run(capsys, "eliminant", "--q", "4", "--N", "4", "--format", "json")
    assert first == second


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"format": "json", "precision": 80}))
    _, out, _ = run(capsys, "spectrum", "--q", "1", "--N", "2", "--config", str(cfg))
    assert json.loads(out)["entries"] == ["1", "-1"]
    _, out, _ = run(capsys, "spectrum", "--q", "1", "--N", "2", "--config", str(cfg), "--format", "text")
    assert out.strip() == "1 -1"


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(ValueError):
        RunConfig.from_file(cfg)
    with pytest.raises(SystemExit):
        main(["table1", "--config", str(cfg)])


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(precision=10)
    with pytest.raises(ValueError):
        RunConfig(format="xml")
    assert RunConfig().merged({"jobs": 4, "out": None}).jobs == 4


@pytest.mark.parametrize(
    "text,value",
    [("1e-30", Fraction(1, 10**30)), ("1/10^30", Fraction(1, 10**30)), ("1/1000", Fraction(1, 1000)), ("2", Fraction(2))],
)
def test_parse_width(text, value):
    assert parse_width(text) == value
