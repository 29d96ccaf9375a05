import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from getzler import jsonio
from getzler.cli import main
from getzler.exterior import FormElement
from getzler.product import build_model
from getzler.symbolic import GaussSymbol

G = GaussSymbol

MODEL4 = {"n": 4, "s": "2", "kappa": [
    {"i": 1, "j": 2, "form": [{"coeff": "1", "index": [1, 2]}, {"coeff": "1", "index": [3, 4]}]},
    {"i": 3, "j": 4, "form": [{"coeff": "1", "index": [1, 2]}, {"coeff": "1", "index": [3, 4]}]},
]}
MODEL2 = {"n": 2, "s": "0", "kappa": [{"i": 1, "j": 2, "form": [{"coeff": "7/2", "index": [1, 2]}]}]}


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        p = tmp_path / name
        p.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_product(files, capsys):
    m = files("m.json", MODEL2)
    a = files("a.json", jsonio.symbol_to_json(G.xi(2, 1)))
    b = files("b.json", jsonio.symbol_to_json(G.xi(2, 2)))
    code, out, _ = run(capsys, "product", "--model", m, "--a", a, "--b", b)
    assert code == 0
    got = jsonio.symbol_from_json(json.loads(out))
    assert got == G.xi(2, 1) * G.xi(2, 2) - G.from_form(FormElement.basis(2, 1, 2, coeff=Fraction(7, 4)))


def test_product_taylor(files, capsys):
    m = files("m.json", MODEL2)
    t = {"n": 2, "order": 0, "coeffs": [jsonio.symbol_to_json(G.constant(2, 1)),
                                        jsonio.symbol_to_json(G.xi(2, 1))]}
    a = files("a.json", t)
    code, out, _ = run(capsys, "product", "--model", m, "--a", a, "--b", a)
    assert code == 0
    T = jsonio.taylor_from_json(json.loads(out))
    assert T.K == 1 and T.coeffs[1] == G.xi(2, 1).scale(2)


def test_heat_report(files, capsys):
    m = files("m.json", MODEL4)
    code, out, _ = run(capsys, "heat", "--model", m, "--K", "4")
    assert code == 0
    rep = json.loads(out)
    assert rep["residual_zero"] and rep["initial_conditions_ok"]
    audit = {a["order"]: a for a in rep["source_audit"]}
    assert audit[2]["factor_per_s"] == "1/2"
    assert audit[2]["printed_factor_per_s"] == "0"
    assert audit[2]["matches_printed"] is False
    assert audit[4]["factor_per_s"] == "3"
    code, text, _ = run(capsys, "heat", "--model", m, "--K", "2", "--format", "text")
    assert "residual_zero: True" in text


def test_index_report(files, capsys):
    m = dict(MODEL4, s="0")
    code, out, _ = run(capsys, "index", "--model", files("m.json", m), "--K", "2", "--tau", "1/2,1,2")
    assert code == 0
    rep = json.loads(out)
    assert rep["matchRatio"] == "1"
    assert rep["mckeanSinger"]["passed"] is True
    assert rep["tauIndependent"]["0"] is True


def test_borel(files, capsys):
    spec = {"coefficients": [jsonio.symbol_to_json(G.constant(2, 1)),
                             jsonio.symbol_to_json(G.xi(2, 1))], "bounds": ["1", "1"]}
    s = files("s.json", spec)
    code, out, _ = run(capsys, "borel", "--spec", s, "--xi", "0.5,0", "--t", "0")
    assert code == 0
    rep = json.loads(out)
    assert rep["value"] == [{"index": [], "value": "1"}]
    assert rep["spec"]["epsilons"] == ["1", "0.25"]
    code, out, _ = run(capsys, "borel", "--spec", s, "--xi", "0.5,0", "--t", "0.01")
    rep = json.loads(out)
    assert rep["activeTerms"] == [0, 1]
    assert rep["value"] == rep["partialSum"]
    code, out, _ = run(capsys, "borel", "--spec", s, "--xi", "0.5,0", "--t", "5")
    assert json.loads(out)["activeTerms"] == [] and json.loads(out)["value"] == []


def test_exit_codes(files, capsys):
    m = files("m.json", MODEL2)
    bad = dict(MODEL2, s="1/0")
    assert run(capsys, "heat", "--model", files("bad.json", bad))[0] == 2
    assert run(capsys, "heat", "--model", files("x.json", "{not json"))[0] == 2
    assert run(capsys, "heat", "--model", m + ".missing")[0] == 2
    assert run(capsys, "heat", "--model", m, "--K", "-1")[0] == 2
    assert run(capsys, "index", "--model", m, "--tau", "0,1")[0] == 2
    odd = {"n": 3, "s": "0", "kappa": []}
    assert run(capsys, "heat", "--model", files("odd.json", odd))[0] == 2
    a4 = files("a4.json", jsonio.symbol_to_json(G.xi(4, 1)))
    code, _, err = run(capsys, "product", "--model", m, "--a", a4, "--b", a4)
    assert code == 3 and "semantic error" in err
    spec = files("s.json", {"coefficients": [jsonio.symbol_to_json(G.constant(2, 1))]})
    assert run(capsys, "borel", "--spec", spec, "--xi", "1,2,3", "--t", "0.1")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["heat"])
    assert exc.value.code == 2


def test_error_message_names_field(files, capsys):
    bad = {"n": 2, "s": "0", "kappa": [{"i": 1, "j": 2, "form": [{"coeff": "x", "index": [1, 2]}]}]}
    code, _, err = run(capsys, "heat", "--model", files("b.json", bad))
    assert code == 2 and "kappa[0].form[0].coeff" in err


def test_json_roundtrips():
    M = build_model(4, Fraction(3, 2), {(1, 2): FormElement.basis(4, 3, 4, coeff=Fraction(-2, 3)),
                                        (2, 4): FormElement.basis(4, 1, 2)})
    assert jsonio.model_from_json(jsonio.model_to_json(M)) == M
    a = (G.xi(4, 1) * G.gaussian(4)).wedge_left(FormElement.basis(4, 1, 3)) + G.constant(4, Fraction(1, 3))
    assert jsonio.symbol_from_json(json.loads(jsonio.dumps(jsonio.symbol_to_json(a)))) == a
    from getzler.symbolic import ScalarResult
    x = ScalarResult({Fraction(-1, 2): Fraction(3, 7)}, Fraction(-3, 2), 3)
    assert jsonio.scalar_from_json(jsonio.scalar_to_json(x)) == x


def test_output_file_deterministic(files, tmp_path, capsys):
    m = files("m.json", MODEL4)
    outs = []
    for k in range(2):
        p = tmp_path / f"o{k}.json"
        assert run(capsys, "heat", "--model", m, "--K", "3", "--out", str(p))[0] == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_selfcheck(capsys):
    code, out, _ = run(capsys, "selfcheck", "--seed", "7")
    assert code == 0 and "FAIL" not in out


def test_module_entry_point_env_seed():
    env = dict(os.environ, GETZLER_SEED="99")
    proc = subprocess.run([sys.executable, "-m", "getzler", "selfcheck", "--format", "json"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["seed"] == 99
