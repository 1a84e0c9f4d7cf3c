import json
import subprocess
import sys

import pytest

from hyperhurwitz import cli

GAUSS = """[model]
gamma2 = 2
gamma3 = 1

[V]
2 = -1/2
1 = 3

[U]
2 = -1/2
1 = -3
"""


def write(tmp_path, text, name="m.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_help_exits_zero(capsys):
    assert cli.run(["--help"]) == 0
    assert "usage" in capsys.readouterr().out


def test_unknown_flag_is_usage_error():
    assert cli.run(["enumerate", "--bogus"]) == 2


def test_enumerate_first_order_term(capsys):
    assert cli.run(["enumerate", "--n", "5", "--dmax", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    want = {"q": 1, "N": 2, "t": {"1": 1}, "tt": {"1": 1}, "g2": 1, "g3": 2}
    assert doc["terms"] == [{"monomial": want, "coeff": "1"}]


def test_verify_dual_oracle(capsys):
    assert cli.run(["verify", "--suite", "dual-oracle", "--dmax", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ok"] and doc["dual-oracle"]["checked"] == len(doc["dual-oracle"]["tuples"]) > 0


def test_load_gaussian(tmp_path):
    m = cli.load_model_config(write(tmp_path, GAUSS))
    assert m.gamma2 == 2 and m.U[1] == -3


@pytest.mark.parametrize("text,line,fragment", [
    (GAUSS.replace("gamma2 = 2", "gamma2 = 1"), 2, "hard-wall"),
    (GAUSS.split("[U]")[0], 8, "missing section [U]"),
    (GAUSS.replace("1 = 3", "1 = three"), 7, "rational"),
    (GAUSS.replace("2 = -1/2\n1 = 3", "1 = 3"), 5, "degree >= 2"),
    (GAUSS + "[W]\n", 12, "unknown section"),
    (GAUSS.replace("gamma3 = 1", "gamma3 = 1\nbeta = 2"), 4, "unknown key"),
])
def test_config_errors_are_line_precise(tmp_path, capsys, text, line, fragment):
    path = write(tmp_path, text)
    with pytest.raises(cli.ConfigError) as e:
        cli.load_model_config(path)
    assert f"{path}:{line}:" in str(e.value)
    assert fragment in str(e.value)
    assert cli.run(["curve", "emit", "--model", path]) == 2


def test_output_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert cli.run(["enumerate", "--n", "4", "--dmax", "3", "--refined", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    for out in (a, b):
        assert cli.run(["oracle", "--check", "scaling", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_curve_emit(tmp_path, capsys):
    assert cli.run(["curve", "emit", "--model", write(tmp_path, GAUSS)]) == 0
    assert json.loads(capsys.readouterr().out)["terms"]


def test_computational_error_exit_code(tmp_path, capsys):
    cubic = GAUSS.replace("2 = -1/2\n1 = 3", "3 = -1/3\n2 = -1/2")
    assert cli.run(["curve", "solve", "--model", write(tmp_path, cubic)]) == 1
    assert "quadratic" in capsys.readouterr().err


def test_toprec_default_airy(capsys):
    assert cli.run(["toprec", "--gmax", "1", "--nmax", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["omega"]["1,1"] == [[[[0, 4]], "1/8"]]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "hyperhurwitz.cli", "verify", "--suite", "genus-count"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["genus-count"]["genus"] == 1
