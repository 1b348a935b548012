import csv
import io
import json

import pytest

from dimspec import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out


def run_json(argv, capsys):
    code, out = run(argv + ["--no-timestamp"], capsys)
    return code, json.loads(out)


def parse_csv(text):
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    return meta, rows[0], rows[1:]


# --- worked examples --------------------------------------------------------

def test_dim_cantor_pair(capsys):
    code, doc = run_json(["dim", "--family", "cantor-pair", "--tol", "1e-12"], capsys)
    assert code == 0
    mid = doc["result"]["mid"]
    assert abs(mid - 0.6309297535714574) < 1e-12
    assert doc["result"]["width"] <= 1e-12


def test_dim_square_exponent_full(capsys):
    code, doc = run_json(["dim", "--family", "square-exponent", "--subset", "full"], capsys)
    assert code == 0
    assert 0.50 <= doc["result"]["mid"] <= 0.52


def test_dim_single_ratio_is_zero(capsys):
    code, doc = run_json(["dim", "--ratios", "0.5", "--tol", "1e-12"], capsys)
    assert code == 0
    assert doc["result"]["lo"] == 0.0 and doc["result"]["hi"] == 0.0
    assert doc["result"]["exact"] is True


def test_dim_by_word(capsys):
    code, doc = run_json(["dim", "--family", "square-exponent", "--word", "11"], capsys)
    assert code == 0
    assert abs(doc["result"]["mid"] - 0.4649584172162091) < 1e-9


def test_spectrum_csv_shape(capsys):
    code, out = run(["spectrum", "--family", "square-exponent", "--depth", "8",
                     "--base", "1,2", "--format", "csv", "--no-timestamp"], capsys)
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert header == ["word", "lo", "hi", "mid", "width"]
    assert len(rows) == 64
    assert all(len(r[0]) == 8 and r[0].startswith("11") for r in rows)
    # decimal points, not commas, in the numbers
    assert all("." in r[3] for r in rows)
    config = json.loads(meta["config"])
    assert config["depth"] == 8


def test_classify_type_three(capsys):
    code, doc = run_json(["classify", "--family", "type-three", "--depth", "12"], capsys)
    assert code == 0
    assert doc["result"]["label"] == "Type III"


def test_construct_k_depth_four(capsys):
    code, out = run(["construct-k", "--depth", "4", "--format", "csv",
                     "--no-timestamp"], capsys)
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert len(rows) == 16
    assert rows[0][0] == "0000" and rows[-1][0] == "1111"
    assert rows[0][2] == ""  # f(0000) = 0 has no terms


def test_boxdim_cantor(capsys):
    code, doc = run_json(["boxdim", "--family", "cantor-pair", "--depth", "8"], capsys)
    assert code == 0
    assert abs(doc["slope"] - 0.6309297535714574) < 0.05


def test_gaps_output(capsys):
    code, doc = run_json(["gaps", "--family", "cantor-pair", "--depth", "7"], capsys)
    assert code == 0
    assert doc["result"]["max_ratio"] == pytest.approx(2.0, abs=1e-9)


def test_perturb_columns(capsys):
    code, out = run(["perturb", "--family", "square-exponent", "--subset", "1,2",
                     "--b-range", "4:7", "--format", "csv", "--no-timestamp"], capsys)
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert header[:2] == ["b", "ratio_b"]
    assert "log_ratio" in header and "log_increment" in header
    assert [r[0] for r in rows] == ["4", "5", "6", "7"]


def test_localdim_series_in_structured_output(capsys):
    code, doc = run_json(["localdim", "--family", "cantor-pair", "--depth", "7"], capsys)
    assert code == 0
    assert doc["n_points"] == 128
    assert len(doc["series"]) == 9


# --- error handling -----------------------------------------------------------

def test_config_error_exit_code(capsys):
    code, out = run(["dim", "--family", "square-exponent", "--subset", "1;2"], capsys)
    assert code == 2
    record = json.loads(out)
    assert record["error"]["type"] == "ConfigError"


def test_family_and_ratios_conflict(capsys):
    code, out = run(["dim", "--family", "geometric", "--ratios", "0.5"], capsys)
    assert code == 2


def test_missing_family(capsys):
    code, out = run(["dim", "--subset", "1,2"], capsys)
    assert code == 2


def test_numeric_error_exit_code(capsys):
    code, out = run(["dim", "--family", "cantor-pair", "--tol", "1e-40",
                     "--precision-bits", "64"], capsys)
    assert code == 3
    record = json.loads(out)
    assert record["error"]["type"] == "ToleranceNotReachable"


def test_point_commands_reject_raw_ratios(capsys):
    code, out = run(["boxdim", "--ratios", "0.5", "0.25", "--depth", "6"], capsys)
    assert code == 2


# --- reproducibility -------------------------------------------------------------

def test_config_echo_roundtrip(capsys):
    argv = ["dim", "--family", "square-exponent", "--subset", "1,3", "--tol", "1e-11",
            "--no-timestamp"]
    code, out = run(argv, capsys)
    assert code == 0
    doc = json.loads(out)
    again = cli.run_from_config(doc["config"])
    assert again == out


def test_config_echo_roundtrip_csv(capsys):
    argv = ["spectrum", "--family", "square-exponent", "--depth", "5", "--base", "1,2",
            "--format", "csv", "--no-timestamp"]
    code, out = run(argv, capsys)
    assert code == 0
    meta, _, _ = parse_csv(out)
    config = json.loads(meta["config"])
    assert cli.run_from_config(config) == out


def test_workers_flag_does_not_change_bytes(capsys):
    base = ["spectrum", "--family", "square-exponent", "--depth", "6", "--base", "1,2",
            "--format", "csv", "--no-timestamp"]
    _, one = run(base + ["--workers", "1"], capsys)
    _, four = run(base + ["--workers", "4"], capsys)
    assert one == four


def test_timestamp_present_by_default(capsys):
    code, out = run(["dim", "--ratios", "0.5", "0.25"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert "generated_at" in doc
    code, out = run(["dim", "--ratios", "0.5", "0.25", "--no-timestamp"], capsys)
    assert "generated_at" not in json.loads(out)


def test_out_file_writing(tmp_path, capsys):
    target = tmp_path / "result.json"
    code = cli.main(["dim", "--ratios", "1/3", "1/3", "--no-timestamp",
                     "--out", str(target)])
    capsys.readouterr()
    assert code == 0
    doc = json.loads(target.read_text())
    assert abs(doc["result"]["mid"] - 0.6309297535714574) < 1e-9


# --- verify ------------------------------------------------------------------------

def test_verify_single_green_criterion(capsys):
    code, out = run(["verify", "--criteria", "1", "--no-timestamp"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] == 1 and doc["total"] == 1
    assert doc["results"][0]["passed"] is True


def test_verify_reports_failures_with_nonzero_exit(capsys):
    # criterion 3 measures a 3.4% deviation against a 3% gate; the
    # suite reports that honestly instead of hiding it
    code, out = run(["verify", "--criteria", "3", "--no-timestamp"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["results"][0]["passed"] is False
    assert "slope" in doc["results"][0]["details"]


def test_verify_rejects_unknown_criterion(capsys):
    code, out = run(["verify", "--criteria", "99"], capsys)
    assert code == 2
