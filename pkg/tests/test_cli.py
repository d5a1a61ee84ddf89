import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from pdext.cli import CommandConfig, emit_table, main, run

F3 = '{"kind":"catalog","id":"F3"}'
F6 = '{"kind":"catalog","id":"F6"}'


def sampled_inverse_square():
    x = np.linspace(-0.99, 0.99, 199)
    return json.dumps({"kind": "sampled", "nodes": x.tolist(), "re": (1 / (1 - x ** 2)).tolist()})


def files(root):
    return sorted(os.path.relpath(os.path.join(d, f), root)
                  for d, _, fs in os.walk(root) for f in fs)


def test_pd_check_cosine_passes(tmp_path):
    assert main(["pd-check", "--F", F6, "--grid", "16", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "gram_report.json").read_text())
    assert rep["verdict"] == "psd"


def test_pd_check_refutes_sampled(tmp_path):
    assert main(["pd-check", "--F", sampled_inverse_square(), "--grid", "8",
                 "--out", str(tmp_path)]) == 1
    assert json.loads((tmp_path / "gram_report.json").read_text())["verdict"] == "indefinite"


def test_malformed_json_exits_2(tmp_path):
    assert main(["pd-check", "--F", "{not json", "--grid", "4", "--out", str(tmp_path)]) == 2
    assert main(["pd-check", "--F", '{"kind":"nope"}', "--grid", "4", "--out", str(tmp_path)]) == 2


def test_unknown_measure_shape_exits_2(tmp_path):
    # a misspelled schema must not silently become the zero measure
    assert main(["bochner", "--mu", '{"kind":"density","id":"cauchy"}', "--F", F3,
                 "--out", str(tmp_path)]) == 2


def test_bochner_verifies_cauchy(tmp_path):
    assert main(["bochner", "--mu", '{"densities":[{"id":"cauchy"}]}', "--F", F3, "--R", "200",
                 "--out", str(tmp_path)]) == 0


def test_usage_errors_exit_2(tmp_path):
    assert main(["mercer", "--out", str(tmp_path)]) == 2
    assert main(["gp-sim", "--kernel", "fbm", "--hurst", "1.5", "--m", "10",
                 "--out", str(tmp_path)]) == 2
    assert run(CommandConfig("no-such-command", {}, tmp_path)) == 2


def test_numeric_error_exits_3(tmp_path, monkeypatch):
    from pdext import gp
    from pdext.mercer import NumericError

    def boom(C):
        raise NumericError("forced")
    monkeypatch.setattr(gp, "cholesky_with_jitter", boom)
    assert main(["gp-sim", "--kernel", "bm", "--m", "10", "--times", "0.1:1:5",
                 "--out", str(tmp_path)]) == 3


def test_polya_then_mercer(tmp_path):
    assert main(["polya-extend", "--input", F3, "--out", str(tmp_path)]) == 0
    ext = tmp_path / "extension.json"
    out = tmp_path / "mercer"
    main(["mercer", "--F", str(ext), "--a", "2", "--n", "400", "--out", str(out)])
    with (out / "eigenvalues.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["index", "eigenvalue"]
    vals = [float(r[1]) for r in rows[1:]]
    assert vals == sorted(vals, reverse=True)
    report = json.loads((out / "trace_report.json").read_text())
    assert abs(report["trace"] - 2.0) < 1e-2


def test_polya_refutation_exits_1(tmp_path):
    assert main(["polya-extend", "--input", '{"kind":"catalog","id":"F5"}',
                 "--out", str(tmp_path)]) == 1


def test_csv_full_precision(tmp_path):
    main(["bochner", "--mu", '{"atoms":[[1.0,0.5],[-1.0,0.5]]}', "--F", F6,
          "--x", "0:1:3", "--out", str(tmp_path)])
    with (tmp_path / "transform.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[2][1] == format(np.cos(0.5), ".17g")


@pytest.mark.parametrize("argv", [
    ["gp-sim", "--kernel", "bridge", "--m", "500", "--seed", "7", "--times", "0:1:16"],
    ["rkhs", "--op", "greens", "--which", "F2", "--n", "256"],
    ["periodize", "--F", F3, "--N", "50"],
    ["shannon", "--F", '{"kind":"catalog","id":"F2"}', "--mu", '{"densities":[{"id":"fejer"}]}',
     "--N-max", "8"],
])
def test_reruns_are_byte_identical(tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    main(argv + ["--out", str(a)])
    main(argv + ["--out", str(b)])
    assert files(a) == files(b) and files(a)
    for name in files(a):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_writes_stay_in_output_dir(tmp_path):
    work = tmp_path / "work"
    work.mkdir()
    env = dict(os.environ, PDEXT_THREADS="1")
    cmd = [sys.executable, "-m", "pdext.cli", "rkhs", "--op", "membership", "--F", F3,
           "--xi", '{"kind":"exp","rate":-1}', "--out", "out"]
    proc = subprocess.run(cmd, cwd=work, env=env, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert files(work) == ["out/membership.json"]
    assert json.loads(proc.stdout)["verdict"] == "member-evidence"


def test_empty_table_is_header_only(tmp_path):
    emit_table([], tmp_path)
    assert (tmp_path / "catalog_table.csv").read_text().count("\n") == 1
    assert main(["catalog-table", "--ids", "", "--out", str(tmp_path / "t")]) == 0
    assert (tmp_path / "t" / "catalog_table.csv").read_text().count("\n") == 1


def test_single_f3_row(tmp_path):
    assert main(["catalog-table", "--ids", "F3", "--out", str(tmp_path)]) == 0
    row = json.loads((tmp_path / "catalog_table.json").read_text())["rows"][0]
    assert row["index"] == "(1, 1)" and row["verify_ext_pass"]
