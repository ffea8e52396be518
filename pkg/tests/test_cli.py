import json
import subprocess
import sys

import pytest

from ramanujan3.bigreal import working
from ramanujan3.catalog import load
from ramanujan3.cli import main, run
from ramanujan3.singular import alpha_numeric


def machine(capsys, *argv):
    code = main([*argv, "--format", "machine"])
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_derive_57_surds(capsys):
    code, report, _ = machine(capsys, "derive", "57", "--prec", "512", "--identify-degree", "2")
    assert code == 0
    res = report["results"][0]
    assert res["z_surd"] == "(-17044 - 3913*sqrt(19))/843750"
    assert res["a_surd"] == "(1654 + 133*sqrt(19))/6750"
    assert res["b_surd"] == "(5719 + 13*sqrt(19))/2250"


def test_derive_boundary_is_an_error_report(capsys):
    code, report, _ = machine(capsys, "derive", "1")
    assert code == 1
    assert report["status"] == "error"
    assert report["error"].startswith("DomainError")


def test_derive_without_root_fails(capsys):
    code, report, _ = machine(capsys, "derive", "5")
    assert code == 1 and report["error"].startswith("NoSolutionError")


def test_machine_output_is_deterministic(capsys):
    outputs = [machine(capsys, "derive", "99", "--identify-degree", "2", "--prec", "512")[2] for _ in range(2)]
    assert outputs[0] == outputs[1]
    assert list(json.loads(outputs[0])) == ["command", "inputs", "precision_bits", "status", "error", "results"]


def test_verify_all(capsys):
    code, report, _ = machine(capsys, "verify", "--all", "--digits", "60")
    assert code == 0
    ids = [r["id"] for r in report["results"]]
    assert ids == sorted(ids)
    assert {f"eq4.{i}" for i in range(1, 8)} <= set(ids)
    assert all(r["status"] == "pass" for r in report["results"])


def test_verify_to_a_hundred_digits(capsys):
    code, report, _ = machine(capsys, "verify", "eq4.1", "--digits", "100")
    assert code == 0
    assert abs(float(report["results"][0]["residual"])) < 1e-100


def test_verify_quartic_series(capsys):
    code, _, _ = machine(capsys, "verify", "baruah-berndt-1", "--digits", "50")
    assert code == 0


def test_verify_failure_names_the_entry(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text(
        "format = ramanujan3-catalog/1\n---\nid = off\nkind = series\ns = 3\n"
        "z = -9/16\na = sqrt(3)/4\nb = 5*sqrt(3)/4 + 1/1000\nstatus = conjectured\n"
    )
    code, report, _ = machine(capsys, "verify", "off", "--catalog", str(path))
    assert code == 1
    assert report["status"] == "fail" and "off" in report["error"]


def test_verify_placeholder_and_unknown(capsys):
    code, report, _ = machine(capsys, "verify", "n13-aldawoud")
    assert code == 1 and report["results"][0]["status"] == "skipped"
    code, report, _ = machine(capsys, "verify", "nope")
    assert code == 1 and report["error"].startswith("NotAvailableError")


@pytest.mark.parametrize("entry, r", [("eq4.1", "27"), ("eq4.7", "33"), ("n19-aldawoud", "57")])
def test_recover(capsys, entry, r):
    code, report, _ = machine(capsys, "recover", entry)
    assert code == 0 and report["results"][0]["r"] == r


def test_identify_sqrt2(capsys):
    code, report, _ = machine(capsys, "identify", "1.41421356237309504880168872420969807856967187537694807317667973799",
                              "--degree", "2")
    assert code == 0 and report["results"][0]["polynomial"] == "y^2 - 2"


def test_identify_y99(capsys):
    code, report, _ = machine(capsys, "identify",
                              "-0.0008061832541154204372383565774304030620870341057452650616929039474946834",
                              "--degree", "2")
    assert code == 0 and report["results"][0]["polynomial"] == "512*y^2 - 1240*y - 1"


def test_identify_alpha57_degree8(capsys):
    alpha = run(["constants", "57", "--prec", "800"]).results[0]["alpha"]
    code, report, _ = machine(capsys, "identify", alpha, "--degree", "8", "--height", "64")
    assert code == 0
    poly = report["results"][0]["polynomial"]
    assert report["results"][0]["degree"] == 8
    # the relation found from 237 digits must also annihilate alpha(57) at 2000 bits
    coeffs = [256, 0, 8101683456, 61166366208, 23955412192, -3204890120448, -21826625258160,
              -11965243775904, 6123063362137]
    assert poly.startswith("256*y^8 + 8101683456*y^6")
    with working(2064) as ctx:
        value = ctx.polyval(coeffs, ctx.mpf(alpha_numeric(57, 2000).value))
        assert abs(value) < ctx.mpf(2) ** -1900


def test_identify_too_few_digits(capsys):
    code, report, _ = machine(capsys, "identify", "1.23", "--degree", "2")
    assert code == 1 and "PrecisionLossError" in report["error"]


@pytest.mark.parametrize("r", ["11", "30", "57", "93"])
def test_constants_cross_checks(capsys, r):
    code, report, _ = machine(capsys, "constants", r)
    assert code == 0
    checks = [c for c in report["results"] if "matches_numeric" in c]
    assert checks and all(c["matches_numeric"] == "yes" for c in checks)


def test_constants_177_has_no_closed_form(capsys):
    code, report, _ = machine(capsys, "constants", "177")
    assert code == 0
    assert {"note": "no closed form known for this r"} in report["results"]


def test_emit_writes_a_loadable_entry(tmp_path, capsys):
    path = tmp_path / "derived.txt"
    code, _, _ = machine(capsys, "derive", "93", "--prec", "768", "--identify-degree", "2",
                              "--emit", str(path))
    assert code == 0
    entry = load(path, deep=True)["derived-r93"]
    assert entry.status == "derived-here" and entry.r_value == 93


def test_precision_environment_variable(monkeypatch):
    monkeypatch.setenv("RAMANUJAN3_PREC", "320")
    assert run(["derive", "27"]).precision_bits == 320
    assert run(["derive", "27", "--prec", "200"]).precision_bits == 200


def test_text_format(capsys):
    assert main(["recover", "eq4.7"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("recover: ok")
    assert "  r              33" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ramanujan3", "verify", "eq4.2", "--format", "machine"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "ok"


def test_verify_needs_ids():
    with pytest.raises(SystemExit):
        main(["verify"])
