import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from logtukey import data
from logtukey.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture(scope="module")
def eval_rows():
    import contextlib

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        assert main(["eval"]) == 0
    return parse(buf.getvalue())


class TestEval:
    def test_fifteen_rows_in_table_order(self, eval_rows):
        assert len(eval_rows) == 15
        assert [r["transform"] for r in eval_rows[:5]] == ["None", "Tukey", "Box-Cox", "Yeo-Johnson", "Log-Tukey"]
        assert [r["source"] for r in eval_rows[::5]] == ["Uni(0,1)", "Exp(0.5)", "Iris feature 0"]

    def test_iris_log_tukey_row(self, eval_rows):
        row = eval_rows[14]
        assert float(row["mean"]) == pytest.approx(1.226, abs=0.01)
        assert float(row["std_dev"]) == pytest.approx(0.05, abs=0.01)

    def test_minimum_is_log_tukey(self, eval_rows):
        flagged = [r for r in eval_rows if r["is_min"] == "1"]
        assert [r["transform"] for r in flagged] == ["Log-Tukey"] * 3

    def test_four_decimals(self, eval_rows):
        for r in eval_rows:
            for key in ("mean", "std_dev", "wasserstein"):
                assert len(r[key].split(".")[1]) == 4

    def test_data_file(self, tmp_path, capsys):
        path = tmp_path / "col.csv"
        path.write_text("\n".join(str(v) for v in data.iris_feature(0)) + "\n")
        code, out, _ = run(["eval", "--data", str(path)], capsys)
        assert code == 0
        rows = parse(out)
        assert len(rows) == 5 and rows[0]["source"] == "col.csv"
        assert float(rows[0]["mean"]) == pytest.approx(5.8433, abs=1e-4)

    def test_constant_data_is_compute_error(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        path.write_text("1\n1\n1\n")
        code, _, err = run(["eval", "--data", str(path)], capsys)
        assert code == 3
        assert "DegenerateInput" in err

    @pytest.mark.parametrize("fmt, marker", [("markdown", "|---|"), ("plain", "source  ")])
    def test_formats(self, fmt, marker, capsys):
        code, out, _ = run(["eval", "--n", "500", "--format", fmt], capsys)
        assert code == 0 and marker in out


class TestDensity:
    def modes(self, tmp_path, capsys, transform):
        code, out, _ = run(["density", "--source", "exponential", "--transform", transform,
                            "--out", str(tmp_path / transform)], capsys)
        assert code == 0
        return {r["curve"]: float(r["mode"]) for r in parse(out)}

    def test_tukey_mode_left_of_reference(self, tmp_path, capsys):
        m = self.modes(tmp_path, capsys, "tukey")
        assert m["kde"] < m["gaussian"]

    def test_log_tukey_gap_smaller(self, tmp_path, capsys):
        tukey = self.modes(tmp_path, capsys, "tukey")
        lt = self.modes(tmp_path, capsys, "logtukey")
        assert abs(lt["mode_gap"]) < abs(tukey["mode_gap"])

    def test_curves_share_grid(self, tmp_path, capsys):
        run(["density", "--source", "iris", "--out", str(tmp_path)], capsys)
        kde = np.loadtxt(tmp_path / "kde.csv", delimiter=",", skiprows=1)
        ref = np.loadtxt(tmp_path / "gaussian.csv", delimiter=",", skiprows=1)
        assert kde.shape == (256, 2)
        np.testing.assert_array_equal(kde[:, 0], ref[:, 0])
        assert np.trapezoid(kde[:, 1], kde[:, 0]) == pytest.approx(1.0, abs=1e-3)

    def test_constant_input(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        path.write_text("0.3\n0.3\n")
        code, _, err = run(["density", "--data", str(path), "--out", str(tmp_path / "o")], capsys)
        assert code == 3 and "DegenerateInput" in err

    def test_missing_out(self, capsys):
        assert run(["density"], capsys)[0] == 2

    def test_bad_transform(self, tmp_path, capsys):
        assert run(["density", "--transform", "cube", "--out", str(tmp_path)], capsys)[0] == 2


class TestFewshot:
    def test_compare_shape(self, capsys):
        code, out, _ = run(["fewshot", "--trials", "5", "--tasks", "2", "--p", "10"], capsys)
        assert code == 0
        rows = parse(out)
        assert [r["trial"] for r in rows] == ["1", "2", "3", "4", "5", "Avg"]
        assert list(rows[0]) == ["trial", "without_gs", "with_gs", "difference"]
        for r in rows:
            assert float(r["difference"]) == pytest.approx(float(r["with_gs"]) - float(r["without_gs"]), abs=2e-4)

    def test_p_grid(self, capsys):
        code, out, _ = run(["fewshot", "--p-grid", "50,100,150", "--trials", "1", "--tasks", "2"], capsys)
        assert code == 0
        rows = parse(out)
        for method in ("gs", "dc"):
            mine = [r for r in rows if r["method"] == method]
            assert [r["p"] for r in mine] == ["50", "100", "150"]
        assert {r["sampled_per_task"] for r in rows if r["p"] == "150"} == {"750", "3750"}

    def test_single_method(self, capsys):
        code, out, _ = run(["fewshot", "--method", "none", "--trials", "2", "--tasks", "3"], capsys)
        assert code == 0
        assert [r["trial"] for r in parse(out)] == ["1", "2", "Avg"]

    @pytest.mark.parametrize("grid", ["50,50", "100,50", "0,10", "a,b"])
    def test_bad_grid(self, grid, capsys):
        assert run(["fewshot", "--p-grid", grid], capsys)[0] == 2

    def test_too_many_ways_is_data_error(self, capsys):
        code, _, err = run(["fewshot", "--n-way", "30", "--tasks", "1", "--trials", "1"], capsys)
        assert code == 4 and "InsufficientData" in err

    def test_feature_files(self, tmp_path, capsys):
        ds = data.generate(data.GaussianMixtureClasses(n_classes=10, dim=8, samples_per_class=25, n_base=3,
                                                       n_validation=1))
        f, s = tmp_path / "f.csv", tmp_path / "s.csv"
        data.save_features(ds, f, s)
        code, out, _ = run(["fewshot", "--features", str(f), "--splits", str(s), "--trials", "1",
                            "--tasks", "2", "--p", "5"], capsys)
        assert code == 0 and parse(out)[-1]["trial"] == "Avg"

    def test_missing_split_file(self, tmp_path, capsys):
        assert run(["fewshot", "--features", str(tmp_path / "x.csv")], capsys)[0] == 2

    def test_bad_seed(self, capsys):
        assert run(["fewshot", "--seed", "-1"], capsys)[0] == 2


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ["eval", "--n", "2000"],
        ["fewshot", "--trials", "2", "--tasks", "3", "--p", "20"],
    ])
    def test_byte_identical(self, argv, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_density_byte_identical(self, tmp_path, capsys):
        for d in ("a", "b"):
            assert main(["density", "--seed", "7", "--out", str(tmp_path / d)]) == 0
        for name in ("kde.csv", "gaussian.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_seed_changes_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["eval", "--n", "500", "--seed", "1", "--out", str(a)])
        main(["eval", "--n", "500", "--seed", "2", "--out", str(b)])
        assert a.read_bytes() != b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "logtukey", "eval", "--n", "300"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("source,transform,param,mean,std_dev,wasserstein,is_min")
