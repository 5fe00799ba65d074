import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from skern import __version__, cli, kernels
from skern.chebpoly import ChebSeries
from skern.kernels import Kernel, ProblemSpec, sharp_constant
from skern.verify import operator_norm, rayleigh


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_kernel_json_schema(capsys):
    code, out, _ = run(capsys, "kernel", "--order", "1", "--n", "2")
    assert code == 0
    rec = json.loads(out)
    assert list(rec) == ["order", "half_width", "restriction", "constant", "weights", "provenance_notes", "tool_version"]
    assert rec["restriction"] == "unrestricted"
    np.testing.assert_allclose(rec["weights"], [0.2, 0.2, 0.2], atol=1e-16)
    assert rec["constant"] == pytest.approx(0.4, abs=1e-16)
    assert any(note.startswith("order 3:") for note in rec["provenance_notes"])
    assert rec["tool_version"] == __version__


def test_kernel_triangular_weights(capsys):
    code, out, _ = run(capsys, "kernel", "--order", "2", "--n", "2", "--restriction", "nonneg-ft")
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["weights"], [1 / 3, 2 / 9, 1 / 9], atol=1e-16)


@pytest.mark.parametrize("order,restriction", [(2, "unrestricted"), (3, "unrestricted"), (4, "nonneg-ft"), (6, "nonneg-ft")])
def test_kernel_roundtrip_through_file(tmp_path, capsys, order, restriction):
    path = tmp_path / "k.json"
    code, _, _ = run(capsys, "kernel", "--order", str(order), "--n", "7", "--restriction", restriction, "--out", str(path))
    assert code == 0
    rec = json.loads(path.read_text())
    u = Kernel(rec["weights"])
    assert u.normalization_error() <= 1e-12
    assert rec["constant"] == pytest.approx(sharp_constant(ProblemSpec(order, 7, restriction)), abs=1e-10)
    assert operator_norm(u, order).value == pytest.approx(rec["constant"], abs=1e-8)


def test_kernel_output_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(capsys, "kernel", "--order", "6", "--n", "10", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_floats_carry_17_digits(capsys):
    _, out, _ = run(capsys, "kernel", "--order", "4", "--n", "3")
    rec = json.loads(out)
    # every stored weight parses back to the identical double
    for w, text in zip(rec["weights"], out.split("[")[1].split("]")[0].split(",")):
        assert float(text) == w


def test_open_cell_exits_2(capsys):
    code, _, err = run(capsys, "kernel", "--order", "5", "--n", "3")
    assert code == 2
    assert "open case" in err
    code, _, err = run(capsys, "constant", "--order", "4", "--n", "3", "--restriction", "unrestricted")
    assert code == 2 and "open case" in err


def test_invalid_arguments_exit_2(capsys):
    assert run(capsys, "kernel", "--order", "2")[0] == 2
    assert run(capsys, "kernel", "--order", "2", "--n", "0")[0] == 2
    assert run(capsys, "table", "--name", "kn", "--from", "2", "--to", "5")[0] == 2
    assert run(capsys, "table", "--name", "kn", "--from", "8", "--to", "5")[0] == 2
    assert run(capsys, "plotdata", "--figure", "nope", "--n", "5")[0] == 2
    assert run(capsys, "smooth", "--order", "2", "--n", "3")[0] == 2


def test_unwritable_output_exits_1(tmp_path, capsys):
    code, _, err = run(capsys, "kernel", "--order", "2", "--n", "2", "--out", str(tmp_path / "missing" / "k.json"))
    assert code == 1 and "cannot write" in err


def test_constant_command(capsys):
    code, out, _ = run(capsys, "constant", "--order", "4", "--n", "10")
    assert code == 0
    assert float(out) == pytest.approx(64 / 144 * math.tan(math.pi / 24) ** 2, rel=1e-15)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_smooth_constant_series(tmp_path, capsys):
    src = write(tmp_path, "in.csv", "t,value\n" + "".join(f"{i},2.5\n" for i in range(50)))
    code, out, _ = run(capsys, "smooth", "--in", src, "--order", "4", "--n", "6")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["t", "original", "smoothed"]
    assert len(rows) == 50
    np.testing.assert_allclose([float(r[2]) for r in rows], 2.5, atol=1e-12)


def test_smooth_single_row_and_value_column(tmp_path, capsys):
    src = write(tmp_path, "one.csv", "value\n7\n")
    code, out, _ = run(capsys, "smooth", "--in", src, "--order", "6", "--n", "5")
    assert code == 0
    _, rows = read_csv(out)
    assert len(rows) == 1 and float(rows[0][0]) == 0.0
    assert float(rows[0][2]) == pytest.approx(7.0, abs=1e-12)


def test_smooth_demo_respects_the_constant(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "smooth", "--demo", "noisy-sine", "--order", "6", "--n", "35", "--out", str(path))
    assert code == 0
    _, rows = read_csv(path.read_text())
    f = np.array([float(r[1]) for r in rows])
    assert f.size == cli.DEMO_LENGTH
    u = kernels.optimal_kernel(ProblemSpec(6, 35))
    assert rayleigh(u, 6, f) <= sharp_constant(ProblemSpec(6, 35))


@pytest.mark.parametrize(
    "text,needle",
    [
        ("", "empty file"),
        ("time,value\n1,2\n", "line 1"),
        ("t,value\n0,1\n1\n", "line 3: expected 2"),
        ("t,value\n0,1\n1,abc\n", "line 3, column 2"),
        ("value\nnan\n", "non-finite"),
        ("value\n", "no data rows"),
    ],
)
def test_smooth_malformed_csv_exits_1(tmp_path, capsys, text, needle):
    src = write(tmp_path, "bad.csv", text)
    code, _, err = run(capsys, "smooth", "--in", src, "--order", "2", "--n", "3")
    assert code == 1
    assert needle in err


def test_smooth_missing_file_exits_1(tmp_path, capsys):
    assert run(capsys, "smooth", "--in", str(tmp_path / "nope.csv"), "--order", "2", "--n", "3")[0] == 1


def test_table_kn(capsys):
    code, out, _ = run(capsys, "table", "--name", "kn", "--from", "3", "--to", "8")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["n", "k_n", "a_n", "amp"]
    assert [int(r[0]) for r in rows] == list(range(3, 9))
    assert float(rows[0][1]) == pytest.approx(math.cos(math.pi / 12), abs=1e-12)


def test_table_asymptotics_six_digits(capsys):
    published = {75: (3.67363e-6, 3.66873e-6), 80: (2.83736e-6, 2.83400e-6)}
    code, out, _ = run(capsys, "table", "--name", "asymptotics", "--from", "75", "--to", "80")
    assert code == 0
    _, rows = read_csv(out)
    by_n = {int(r[0]): (float(r[1]), float(r[2])) for r in rows}
    for n, (amp, col3) in published.items():
        assert float(f"{by_n[n][0]:.5e}") == amp
        # the printed model column used K rounded to 2.3210, which moves the sixth digit
        assert by_n[n][1] == pytest.approx(col3, rel=2e-5)


def test_table_constants(capsys):
    code, out, _ = run(capsys, "table", "--name", "constants", "--from", "10", "--to", "10", "--order", "4")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["n", "C_4_nonneg-ft"]
    assert float(rows[0][1]) == pytest.approx(64 / 144 * math.tan(math.pi / 24) ** 2, rel=1e-15)
    code, out, _ = run(capsys, "table", "--name", "constants", "--from", "1", "--to", "3")
    header, rows = read_csv(out)
    assert code == 0 and len(header) == 7 and len(rows) == 3
    assert run(capsys, "table", "--name", "constants", "--from", "1", "--to", "3", "--order", "5")[0] == 2


def test_plotdata_chebbar_hits_extremes(capsys):
    code, out, _ = run(capsys, "plotdata", "--figure", "chebbar", "--n", "11")
    assert code == 0
    _, rows = read_csv(out)
    y = np.array([float(r[1]) for r in rows])
    assert len(rows) == 1024
    assert np.sum(np.abs(y) <= 1e-12) + np.sum(np.abs(y - 2) <= 1e-12) >= 11
    assert y.min() >= -1e-15 and y.max() <= 2 + 1e-15


def test_plotdata_zolotarev(capsys):
    code, out, _ = run(capsys, "plotdata", "--figure", "zolotarev", "--n", "11")
    assert code == 0
    _, rows = read_csv(out)
    x = np.array([float(r[0]) for r in rows])
    y = np.array([float(r[1]) for r in rows])
    assert len(rows) == 1024 and np.all(np.abs(y) <= 1 + 1e-15)
    assert x[-1] == 1.0 and y[-1] == pytest.approx(1.0, abs=1e-15)


def test_plotdata_kernel_stems(capsys):
    code, out, _ = run(capsys, "plotdata", "--figure", "kernel4", "--n", "10")
    assert code == 0
    _, rows = read_csv(out)
    assert [int(r[0]) for r in rows] == list(range(-10, 11))
    np.testing.assert_allclose([float(r[1]) for r in rows], kernels.optimal_kernel(ProblemSpec(4, 10)).full(), rtol=1e-15)
    for fig in ("kernel6", "smoothing"):
        assert run(capsys, "plotdata", "--figure", fig, "--n", "10")[0] == 0


def test_verify_fast_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "fast")
    assert code == 0
    assert "FAIL" not in out
    assert out.strip().splitlines()[-1].endswith("checks passed (fast suite)")


def test_verify_catches_a_corrupted_s_poly(monkeypatch, capsys):
    original = kernels.s_poly

    def corrupted(n):
        c = original(n).coeffs.copy()
        c[0] += 1e-3
        return ChebSeries(c)

    monkeypatch.setattr(kernels, "s_poly", corrupted)
    code, out, _ = run(capsys, "verify", "--suite", "fast")
    assert code == 3
    assert "FAIL" in out


def test_module_entry_point_and_version():
    res = subprocess.run([sys.executable, "-m", "skern", "--version"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and __version__ in res.stdout
    res = subprocess.run([sys.executable, "-m", "skern", "constant", "--order", "2", "--n", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and float(res.stdout) == 0.25
