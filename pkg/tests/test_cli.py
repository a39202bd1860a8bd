import csv
import json
import subprocess
import sys

import pytest

import fractions_oracle as fo

from zigzag_power import ALL_KINDS, ALTERNATIVE_NAMES, __version__
from zigzag_power.cli import main
from zigzag_power.report import STUDY_HEADER

HEADER = "alternative,statistic,sample_size,alpha,alpha1,alpha2,x1,x2,power_at_x1,power_at_x2,power,sensitivity,replicates,seed"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def default_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("default")
    assert main(["power", "--out", str(out)]) == 0
    return out


class TestPower:
    def test_study_csv_shape_and_header(self, default_run):
        raw = (default_run / "study.csv").read_bytes()
        assert raw.split(b"\n", 1)[0].decode() == HEADER == ",".join(STUDY_HEADER)
        assert b"\r" not in raw
        rows = read_csv(default_run / "study.csv")
        assert len(rows) == 252
        assert {r["alternative"] for r in rows} == set(ALTERNATIVE_NAMES)
        assert all(r["seed"] == "8675309" and r["replicates"] == "10000" for r in rows)

    def test_row_invariants(self, default_run):
        for r in read_csv(default_run / "study.csv"):
            assert float(r["alpha1"]) <= float(r["alpha"]) <= float(r["alpha2"])
            assert float(r["power"]) + float(r["sensitivity"]) == pytest.approx(1.0, abs=2e-6)
            lo, hi = sorted((float(r["power_at_x1"]), float(r["power_at_x2"])))
            assert lo - 1e-6 <= float(r["power"]) <= hi + 1e-6

    def test_curves_match_study_exactly(self, default_run):
        study = {(r["alternative"], r["statistic"], r["sample_size"]): r["power"] for r in read_csv(default_run / "study.csv")}
        for alt in ALTERNATIVE_NAMES:
            rows = read_csv(default_run / f"curve_{alt}.csv")
            assert [r["sample_size"] for r in rows] == ["10", "20", "30", "50", "100", "200"]
            for r in rows:
                for kind in ALL_KINDS:
                    assert r[kind.value] == study[(alt, kind.value, r["sample_size"])]

    def test_sensitivity_file(self, default_run):
        study = {(r["alternative"], r["statistic"], r["sample_size"]): r["sensitivity"] for r in read_csv(default_run / "study.csv")}
        rows = read_csv(default_run / "sensitivity.csv")
        assert len(rows) == 42
        for r in rows:
            values = {k.value: float(r[k.value]) for k in ALL_KINDS}
            for kind in ALL_KINDS:
                assert r[kind.value] == study[(r["alternative"], kind.value, r["sample_size"])]
            assert values[r["lowest_sensitivity"]] == min(values.values())

    def test_seed_and_json(self, tmp_path, capsys):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("replicates: 200\nsample_sizes: [10]\nalternatives: [bimodal]\nformats: [csv, json]\n")
        code, out, _ = run(capsys, "power", "--config", str(cfg), "--seed", "5", "--out", str(tmp_path / "o"), "--workers", "2")
        assert code == 0 and "study.json" in out
        data = json.loads((tmp_path / "o" / "study.json").read_text())
        assert data["plan"]["seed"] == 5
        rows = read_csv(tmp_path / "o" / "study.csv")
        assert len(rows) == 6 and all(r["seed"] == "5" for r in rows)
        assert len(data["records"]) == 6

    def test_env_var_sets_output(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("ZIGZAG_POWER_OUT", str(tmp_path / "env"))
        cfg = tmp_path / "c.yaml"
        cfg.write_text("replicates: 100\nsample_sizes: [10]\nalternatives: [bimodal]\n")
        assert run(capsys, "power", "--config", str(cfg))[0] == 0
        assert (tmp_path / "env" / "study.csv").exists()

    def test_partial_failure_exit_3(self, tmp_path, capsys):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("replicates: 100\nsample_sizes: [10]\nnull: [0.5, 0.0, 0.5]\nalternatives: [uniform:3]\n")
        code, _, err = run(capsys, "power", "--config", str(cfg), "--out", str(tmp_path / "o"))
        assert code == 3 and "2 of 6" in err
        rows = read_csv(tmp_path / "o" / "study.csv")
        assert len(rows) == 6
        failed = [r for r in rows if r["power"] == ""]
        assert {r["statistic"] for r in failed} == {"pearson-chi-square", "ordinal-ad"}

    def test_io_failure_exit_4(self, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        cfg = tmp_path / "c.yaml"
        cfg.write_text("replicates: 100\nsample_sizes: [10]\nalternatives: [bimodal]\n")
        code, _, err = run(capsys, "power", "--config", str(cfg), "--out", str(blocker / "sub"))
        assert code == 4 and "I/O error" in err

    @pytest.mark.parametrize(
        "text", ["alpha: 1.5", "sample_sizes: [10, 20\n", "null: nope", "null: uniform:3\nalternatives: [bimodal]"]
    )
    def test_bad_config_exit_2(self, tmp_path, capsys, text):
        cfg = tmp_path / "c.yaml"
        cfg.write_text(text)
        assert run(capsys, "power", "--config", str(cfg), "--out", str(tmp_path))[0] == 2

    def test_missing_config_exit_2(self, tmp_path, capsys):
        assert run(capsys, "power", "--config", str(tmp_path / "absent.yaml"))[0] == 2


def _stat_table(out):
    table = {}
    for line in out.splitlines():
        parts = line.split()
        if parts and parts[0] in {k.value for k in ALL_KINDS}:
            table[parts[0]] = parts[1:]
    return table


class TestStat:
    def test_hand_values(self, capsys):
        code, out, _ = run(capsys, "stat", "--counts", "4,1,1", "--null", "uniform:3", "--replicates", "500")
        table = _stat_table(out)
        assert code == 0
        assert float(table["pearson-chi-square"][0]) == 3.0
        assert float(table["nominal-ks"][0]) == 2.0
        assert float(table["ordinal-ad"][0]) == 1.25
        assert all(0.0 < float(v[1]) <= 1.0 for v in table.values())

    def test_exact_fit(self, capsys):
        code, out, _ = run(capsys, "stat", "--counts", "2,2,2", "--null", "uniform:3", "--replicates", "300")
        table = _stat_table(out)
        assert code == 0 and len(table) == 6
        assert all(float(v[0]) == 0.0 and float(v[1]) == 1.0 for v in table.values())

    def test_two_cells(self, capsys):
        code, out, _ = run(capsys, "stat", "--counts", "3,1", "--null", "0.5,0.5", "--replicates", "300")
        assert code == 0 and float(_stat_table(out)["ordinal-watson"][0]) == 0.0625

    def test_p_value_matches_exact_law(self, capsys):
        third = [fo.Fraction(1, 3)] * 3
        law = fo.exact_law("pearson-chi-square", third, third, 6)
        exact = float(sum(m for v, m in law.items() if v >= 3))
        assert exact == 279 / 729
        code, out, _ = run(capsys, "stat", "--counts", "4,1,1", "--null", "uniform:3", "--replicates", "20000", "--seed", "1")
        p = float(_stat_table(out)["pearson-chi-square"][1])
        assert abs(p - exact) <= 4 * (exact * (1 - exact) / 20000) ** 0.5

    def test_undefined_statistics_reported(self, capsys):
        code, out, _ = run(capsys, "stat", "--counts", "1,0,1", "--null", "0.5,0,0.5", "--replicates", "200")
        table = _stat_table(out)
        assert code == 0
        assert table["pearson-chi-square"][0] == "undefined" and table["ordinal-ad"][0] == "undefined"
        assert float(table["nominal-ks"][0]) == 0.0

    @pytest.mark.parametrize(
        "argv",
        [
            ("--counts", "1,2", "--null", "uniform:3"),
            ("--counts", "1,-2,3", "--null", "uniform:3"),
            ("--counts", "1,x,3", "--null", "uniform:3"),
            ("--counts", "1,2,3", "--null", "0.5,0.6,0.1"),
            ("--counts", "1,2,3", "--null", "nowhere"),
            ("--counts", "1,2,3", "--null", "uniform:3", "--replicates", "0"),
        ],
    )
    def test_invalid_exit_2(self, capsys, argv):
        assert run(capsys, "stat", *argv)[0] == 2


class TestZigzag:
    def test_falling_start(self, capsys):
        code, out, _ = run(capsys, "zigzag", "--probs", "0.3,0.1,0.3,0.1,0.2")
        assert code == 0 and "pattern: falling-start" in out and "is_zigzag: true" in out

    def test_catalog_null_row(self, capsys):
        code, out, _ = run(capsys, "zigzag", "--probs", "0.20,0.05,0.10,0.05,0.10,0.02,0.20,0.10,0.08,0.10")
        assert code == 1 and "first_violation: 8 (cells 8, 9)" in out

    def test_tie(self, capsys):
        assert run(capsys, "zigzag", "--probs", "0.5,0.5")[0] == 1

    @pytest.mark.parametrize("probs", ["0.5,0.6", "1.0", "a,b", "-0.5,1.5"])
    def test_invalid(self, capsys, probs):
        assert run(capsys, "zigzag", f"--probs={probs}")[0] == 2


def _bb_cells(out):
    return [line.split() for line in out.splitlines() if line.split() and line.split()[0].isdigit()]


class TestBetaBinomial:
    def test_uniform(self, capsys):
        code, out, _ = run(capsys, "betabinomial", "--a", "1", "--b", "1", "--k", "10")
        cells = _bb_cells(out)
        assert code == 0 and len(cells) == 10
        assert all(abs(float(c[1]) - 0.1) <= 1e-12 and c[2] == "0.10" for c in cells)

    def test_unimodal(self, capsys):
        cells = _bb_cells(run(capsys, "betabinomial", "--a", "1.5", "--b", "1.5", "--k", "10")[1])
        assert cells[0][2] == "0.06"

    def test_bathtub(self, capsys):
        cells = _bb_cells(run(capsys, "betabinomial", "--a", "0.9", "--b", "0.9", "--k", "10")[1])
        assert cells[0][2] == "0.11" and cells[-1][2] == "0.11"

    @pytest.mark.parametrize("argv", [("--a", "0", "--b", "1", "--k", "5"), ("--a", "1", "--b", "-2", "--k", "5"), ("--a", "1", "--b", "1", "--k", "1")])
    def test_invalid(self, capsys, argv):
        assert run(capsys, "betabinomial", *argv)[0] == 2


class TestOracle:
    def test_hand_case(self, capsys):
        code, out, _ = run(capsys, "oracle", "--kind", "pearson-chi-square", "--null", "0.5,0.5", "--alt", "0.8,0.2", "--n", "4", "--alpha", "0.25")
        assert code == 0 and "exact power: 0.52\n" in out

    def test_mc_side_by_side(self, capsys):
        code, out, _ = run(
            capsys, "oracle", "--kind", "pearson-chi-square", "--null", "0.5,0.5", "--alt", "0.8,0.2",
            "--n", "4", "--alpha", "0.25", "--mc", "--replicates", "5000",
        )
        line = next(l for l in out.splitlines() if l.startswith("monte carlo power"))
        assert code == 0 and abs(float(line.split()[3]) - 0.52) < 0.03

    def test_alt_equal_null(self, capsys):
        code, out, _ = run(capsys, "oracle", "--kind", "ordinal-cvm", "--null", "0.4,0.35,0.25", "--alt", "0.4,0.35,0.25", "--n", "6", "--alpha", "0.05")
        power = float(next(l for l in out.splitlines() if l.startswith("exact power")).split(":")[1])
        assert code == 0 and power == pytest.approx(0.05, abs=1e-12)

    def test_cap_exit_2(self, capsys):
        code, _, err = run(capsys, "oracle", "--kind", "nominal-ks", "--null", "zigzag-null", "--alt", "decreasing", "--n", "200", "--alpha", "0.01")
        assert code == 2 and "cap" in err


class TestCatalog:
    def test_stdout(self, capsys):
        code, out, _ = run(capsys, "catalog")
        assert code == 0
        assert out.splitlines()[0].startswith("name,row,p1,")
        assert len(out.splitlines()) == 1 + 16

    def test_dump(self, tmp_path, capsys):
        path = tmp_path / "catalog.csv"
        assert run(capsys, "catalog", "--dump", str(path))[0] == 0
        rows = read_csv(path)
        unimodal = [r for r in rows if r["name"] == "unimodal"]
        assert unimodal[0]["sum"] == "1.17" and "BB(1.5, 1.5)" in unimodal[1]["provenance_note"]

    def test_dump_io_failure(self, tmp_path, capsys):
        assert run(capsys, "catalog", "--dump", str(tmp_path / "missing" / "c.csv"))[0] == 4


def test_entry_point_and_version():
    out = subprocess.run([sys.executable, "-m", "zigzag_power", "--version"], capture_output=True, text=True, check=True)
    assert __version__ in out.stdout
    bad = subprocess.run([sys.executable, "-m", "zigzag_power", "stat", "--counts", "1,2"], capture_output=True, text=True)
    assert bad.returncode == 2
