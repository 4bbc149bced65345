import csv
import io
import json

import pytest

from hqrcheck.cli import main, read_config
from hqrcheck.report import CSV_COLUMNS, JSON_FIELDS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "zygmund-hqr", "--family", "shifted-halfplane",
                       "--k", "0.5", "--c", "1", "--r", "0.9")
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 1 and reports[0]["verdict"] == "pass"
    assert tuple(reports[0]) == JSON_FIELDS


def test_zoo_list(capsys):
    code, out, _ = run(capsys, "zoo-list", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["family_id", "domains", "guarantees"]
    assert "shifted-halfplane" in {r[0] for r in rows[1:]}
    code, out, _ = run(capsys, "zoo-list")
    assert code == 0 and json.loads(out)[0]["family_id"]


def test_means_rejects_p_zero(capsys):
    code, _, err = run(capsys, "means", "--family", "shifted-halfplane", "--p", "0")
    assert code == 2 and "--p" in err


def test_means_csv_profile(capsys):
    code, out, _ = run(capsys, "means", "--family", "shifted-halfplane", "--quantity", "mean_of_u",
                       "--radii", "0.5,0.9", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "r" and len(rows) == 3


@pytest.mark.parametrize("argv", [
    ["verify", "--theorem", "zygmund-hqr", "--family", "nope"],
    ["verify", "--theorem", "zygmund-hqr", "--family", "shifted-halfplane", "--k", "1.5"],
    ["verify", "--theorem", "zygmund-hqr", "--family", "shifted-halfplane", "--alpha", "0.5"],
    ["verify", "--theorem", "zygmund-hqr", "--family", "shifted-halfplane", "--r", "1.0"],
    ["verify", "--theorem", "zygmund-hqr", "--family", "imaginary-halfplane"],
    ["verify"],
    ["probe", "--steps", "0", "--theorem", "converse"],
    ["bogus"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ntheorem = converse\nfamily = shifted-halfplane\nk = 0.2 # trailing\nr = 0.5\n"
                   "format = csv\n")
    assert read_config(str(cfg))["k"] == "0.2"
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--k", "0.5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["params"] == "c=1.0;k=0.5"
    assert tuple(rows[0]) == CSV_COLUMNS


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "verify", "--config", str(cfg), "--all")
    assert code == 2 and "colour" in err


def test_output_file_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "--theorem", "kalaj-1", "--family", "shifted-halfplane", "--k", "0.2", "--r", "0.5,0.9"]
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())) == 2 * 3


def test_probe_command(tmp_path, capsys):
    code, out, _ = run(capsys, "probe", "--theorem", "converse", "--steps", "5", "--trace")
    assert code == 0
    data = json.loads(out)
    assert data[0]["theorem_id"] == "converse" and "trace" in data[0]
