import argparse
import csv
import io
import json
import math

import pytest

from qec713.analysis import ReferenceTable
from qec713.cli import FIELDS, REGION_FIELDS, main, parse_angle, parse_range
from qec713.perturb import poly_eval
from qec713.steane import parse_circuit, serialize_circuit, steane_encoder


def cli(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def usage_error(capsys, *argv):
    with pytest.raises(SystemExit) as info:
        main(list(argv), out=io.StringIO())
    assert info.value.code == 2
    return capsys.readouterr().err


@pytest.mark.parametrize(
    "text, value",
    [("0", 0.0), ("pi/4", math.pi / 4), ("-pi/8", -math.pi / 8), ("2*pi/3", 2 * math.pi / 3), ("0.25", 0.25), ("1e-3", 1e-3)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("text", ["__import__('os')", "pi**2", "x", "", "pi/0"])
def test_parse_angle_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_angle(text)


def test_parse_range():
    assert list(parse_range("0:1e-3:3")) == pytest.approx([0, 5e-4, 1e-3])
    assert list(parse_range("2e-4:5e-4:1")) == [2e-4]
    for bad in ("0:1", "a:b:c", "0:1:0", "0:1:-2", "1:0:3"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_range(bad)


def test_run_noiseless_encode():
    code, out = cli("run", "--experiment", "encode", "--alpha", "0", "--px", "0", "--py", "0", "--pz", "0")
    assert code == 0
    assert out == ",".join(FIELDS) + "\n0,0,0,0,0,1,1,1\n"


def reference_noisy_qec_at_alpha0(p):
    poly = ReferenceTable.load().get("noisy-qec", "7").polynomial().at(0.0, 0.0)
    return poly_eval(poly, (p, p, p))


def test_run_noisy_qec_perturb_matches_reference():
    code, out = cli("run", "--experiment", "noisy-qec", "--alpha", "0", "--px", "1e-3", "--py", "1e-3", "--pz", "1e-3", "--backend", "perturb")
    assert code == 0
    assert float(rows(out)[0]["f7"]) == pytest.approx(reference_noisy_qec_at_alpha0(1e-3), abs=1e-5)


def test_run_noisy_qec_dense_near_reference():
    # third-order terms separate the dense value from the second-order reference
    code, out = cli("run", "--experiment", "noisy-qec", "--alpha", "0", "--px", "1e-3", "--py", "1e-3", "--pz", "1e-3")
    assert code == 0
    assert float(rows(out)[0]["f7"]) == pytest.approx(reference_noisy_qec_at_alpha0(1e-3), abs=1e-4)


def test_run_json_format():
    code, out = cli("run", "--experiment", "gate", "--gate", "x", "--px", "1e-4", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert set(FIELDS) <= set(rec)


def test_run_bad_gate(capsys):
    err = usage_error(capsys, "run", "--experiment", "gate", "--gate", "q")
    assert "gate must be h|x|p" in err


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (("run", "--experiment", "bogus"), "experiment"),
        (("run", "--px", "-0.1"), "px"),
        (("run", "--px", "0.5", "--py", "0.4", "--pz", "0.2"), "p"),
        (("run", "--alpha", "import os"), "alpha"),
        (("sweep", "--px-range", "0:1"), "range"),
    ],
)
def test_usage_errors_name_the_field(capsys, argv, fragment):
    assert fragment in usage_error(capsys, *argv)


def test_one_point_sweep_equals_run():
    _, run_out = cli("run", "--experiment", "encode", "--alpha", "pi/8", "--px", "2e-4", "--py", "0", "--pz", "1e-4")
    _, sweep_out = cli(
        "sweep", "--experiment", "encode", "--alpha", "pi/8", "--alpha-steps", "1",
        "--px-range", "2e-4:2e-4:1", "--pz-range", "1e-4:1e-4:1", "--py", "0",
    )  # fmt: skip
    assert sweep_out == run_out


def test_sweep_rows_and_monotone_in_px():
    code, out = cli("sweep", "--experiment", "encode", "--alpha-steps", "1", "--px-range", "0:2e-3:5", "--pz-range", "0:1e-3:2")
    assert code == 0
    data = rows(out)
    assert len(data) == 10 and list(data[0]) == list(FIELDS)
    for pz in ("0", "0.001"):
        f7 = [float(r["f7"]) for r in data if r["pz"] == pz]
        assert all(a > b for a, b in zip(f7, f7[1:]))
    assert [r["px"] for r in data[:2]] == ["0", "0"]  # pz varies fastest


def test_sweep_alpha_grid():
    _, out = cli("sweep", "--experiment", "encode", "--alpha-steps", "3", "--px-range", "1e-4:1e-4:1", "--pz-range", "0:0:1")
    alphas = [float(r["alpha"]) for r in rows(out)]
    assert alphas == pytest.approx([0, math.pi / 4, math.pi / 2], abs=1e-11)


def test_sweep_region_mode():
    code, out = cli(
        "sweep", "--mode", "qec-region", "--backend", "perturb", "--alpha-steps", "1",
        "--px-range", "1e-5:1e-4:2", "--pz-range", "1e-5:1e-4:2", "--py", "1e-5",
    )  # fmt: skip
    assert code == 0
    data = rows(out)
    assert list(data[0]) == list(REGION_FIELDS)
    improved = {(float(r["px"]), float(r["pz"])): r["improved"] for r in data}
    assert improved[(1e-5, 1e-4)] == "true"
    assert improved[(1e-4, 1e-5)] == "false"


def test_compare_encode_matched():
    code, out = cli("compare", "--experiment", "encode", "--kind", "7")
    doc = json.loads(out)
    assert code == 0 and doc["matched"] and doc["max_abs_diff"] < 1e-9
    assert {"name", "a", "b", "c", "ref_a", "ref_b", "ref_c", "abs_diff"} <= set(doc["monomials"][0])
    assert "CNOT 1 6" in doc["circuit_note"]


def test_compare_perfect_qec_first_order():
    code, out = cli("compare", "--experiment", "perfect-qec", "--kind", "7")
    doc = json.loads(out)
    assert code == 0
    by_name = {m["name"]: m for m in doc["monomials"]}
    for name in ("px", "py"):
        assert all(abs(by_name[name][k]) < 1e-12 for k in ("a", "b", "c", "ref_a", "ref_b", "ref_c"))


def test_compare_advisory_at_zero_tolerance():
    code, out = cli("compare", "--label", "A4", "--tolerance", "0")
    doc = json.loads(out)
    assert code == 1 and not doc["matched"]
    flagged = [m["name"] for m in doc["monomials"] if m["advisory"]]
    assert flagged == ["px*pz"]


def test_compare_unknown(capsys):
    usage_error(capsys, "compare", "--experiment", "perfect-qec", "--kind", "1")
    usage_error(capsys, "compare", "--label", "A99")


def test_circuits_dump_round_trips():
    code, listing = cli("circuits", "list")
    assert code == 0
    for name in listing.split():
        _, text = cli("circuits", "dump", name)
        assert serialize_circuit(parse_circuit(text)) == text
    _, enc = cli("circuits", "dump", "encoder")
    assert parse_circuit(enc) == steane_encoder()


def test_runs_are_deterministic():
    argv = ("sweep", "--experiment", "gate-h", "--alpha-steps", "2", "--px-range", "0:1e-3:3", "--pz-range", "0:1e-3:2")
    assert cli(*argv) == cli(*argv)
