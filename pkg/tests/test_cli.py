import json
from fractions import Fraction

import pytest

from dertool.cli import main, master_seed


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_certify_then_verify(tmp_path, capsys):
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "certify", "--algebra", "T2[t]", "--op", "d/dt", "--e", "E11", "--target", "E12", "--out", str(cert))
    assert code == 0 and cert.exists()
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == 0 and "verified" in out


def test_tampered_certificate_rejected(tmp_path, capsys):
    cert = tmp_path / "c.json"
    run(capsys, "certify", "--algebra", "T2[t]", "--op", "I-shift(1)", "--e", "E11", "--target", "E12*t^2", "--out", str(cert))
    data = json.loads(cert.read_text())
    assert data["construction"] == "ederiv_via_hD"
    data["preimage"]["coeffs"][1][1] = "5"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--json", str(bad))
    report = json.loads(out)
    assert code == 1 and report["verified"] is False and report["diff"]


def test_single_coefficient_perturbations(tmp_path, capsys):
    # a preimage is only determined up to ker D, so a preimage perturbation is
    # rejected exactly when D does not kill the perturbing monomial
    cert = tmp_path / "c.json"
    run(capsys, "certify", "--algebra", "T2[t]", "--op", "d/dt", "--e", "E11", "--target", "E12*t", "--a", "E11*t", "--b", "E12", "--out", str(cert))
    data = json.loads(cert.read_text())
    assert data["construction"] == "two_sided"
    for field in ("target", "preimage"):
        for k, row in enumerate(data[field]["coeffs"] + [["0", "0", "0"]]):
            for j in range(len(row)):
                tampered = json.loads(json.dumps(data))
                coeffs = tampered[field]["coeffs"]
                if k == len(coeffs):
                    coeffs.append(["0", "0", "0"])
                coeffs[k][j] = str(Fraction(row[j]) + 1)
                path = tmp_path / f"{field}{k}{j}.json"
                path.write_text(json.dumps(tampered))
                in_kernel = field == "preimage" and k == 0
                assert main(["verify", str(path)]) == (0 if in_kernel else 1)
    capsys.readouterr()


def test_findim_certificate(tmp_path, capsys):
    cert = tmp_path / "c.json"
    code, _, _ = run(capsys, "certify", "--algebra", "T2", "--op", "xi(ad(E12))", "--target", "E12", "--out", str(cert))
    assert code == 0
    assert json.loads(cert.read_text())["construction"] == "spectral_block"
    assert main(["verify", str(cert)]) == 0


def test_surjectivity_on_qt(capsys):
    code, out, _ = run(capsys, "surjectivity", "--op", "I-shift(1)", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "surjective" and rep["preimage_of_one"] == "-t"


def test_not_in_image_exit_code(capsys):
    code, out, _ = run(capsys, "surjectivity", "--algebra", "T2", "--op", "ad(E12)")
    assert code == 1


def test_input_errors_exit_2(capsys):
    assert run(capsys, "check", "--algebra", "nosuch", "--op", "I")[0] == 2
    assert run(capsys, "check", "--algebra", "T2", "--op", "E11 +")[0] == 2
    assert run(capsys, "exp", "--algebra", "dual", "--op", "I", "--element", "x")[0] == 2


def test_exp_and_log(capsys):
    code, out, _ = run(capsys, "exp", "--op", "d/dt", "--element", "t^2", "--json")
    assert json.loads(out)["xi"] == "-1 - 2*t"
    code, out, _ = run(capsys, "log", "--op", "I-shift(1)", "--element", "t^2", "--json")
    assert json.loads(out)["log"] == "2*t"


def test_check_and_grade(capsys):
    code, out, _ = run(capsys, "check", "--algebra", "T2", "--op", "ad(E12)", "--json")
    rep = json.loads(out)
    assert rep["is_derivation"] and rep["locally_nilpotent"]["status"] == "yes"
    code, out, _ = run(capsys, "grade", "--algebra", "T2", "--op", "ad(E11)", "--json")
    assert sorted(json.loads(out)["blocks"]) == ["0", "1"]
    code, out, _ = run(capsys, "image", "--algebra", "T2", "--op", "ad(E11)", "--json")
    assert json.loads(out)["image"] == [["0", "1", "0"]]


def test_jc_matrix_file(tmp_path, capsys):
    m = tmp_path / "m.json"
    m.write_text(json.dumps([["2", "1"], ["0", "2"]]))
    code, out, _ = run(capsys, "jc", "--matrix", str(m), "--json")
    rep = json.loads(out)
    assert rep["semisimple"] == [["2", "0"], ["0", "2"]] and rep["nilpotency_index"] == 2


def test_matrix_operator_file(tmp_path, capsys):
    m = tmp_path / "phi.json"
    m.write_text(json.dumps([["1", "0"], ["0", "2"]]))
    code, out, _ = run(capsys, "surjectivity", "--algebra", "dual", "--op", f"I-endo:{m}")
    assert code == 1 and "not in the image" in out


def test_hunt_byte_identical(tmp_path, capsys, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["hunt", "--mode", "roundtrip", "--trials", "10", "--seed", "4", "--out", str(a)]) == 0
    monkeypatch.setenv("DERTOOL_SEED", "4")
    assert main(["hunt", "--mode", "roundtrip", "--trials", "10", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_seed_precedence(monkeypatch):
    monkeypatch.delenv("DERTOOL_SEED", raising=False)
    assert master_seed(None) == 0
    monkeypatch.setenv("DERTOOL_SEED", "9")
    assert master_seed(None) == 9
    assert master_seed(3) == 3


def test_series_claim(capsys):
    code, out, _ = run(capsys, "series-claim", "--json")
    rep = json.loads(out)
    assert code == 0 and all(rep["results"].values()) and len(rep["results"]) == 10


def test_algebra_json_file(tmp_path, capsys):
    from dertool.algebra import upper_triangular

    f = tmp_path / "t2.json"
    f.write_text(json.dumps(upper_triangular(2).to_json()))
    code, out, _ = run(capsys, "check", "--algebra", f"{f}[t]", "--op", "d/dt", "--samples", "20", "--json")
    assert code == 0 and json.loads(out)["is_derivation"]


@pytest.mark.parametrize("argv", [["verify", "/nonexistent.json"], ["hunt", "--mode", "roundtrip", "--trials", "-1"]])
def test_bad_inputs(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()
