import json

import pytest

from ocsflow.bench import CSV_HEADER
from ocsflow.cli import main
from ocsflow.model import dumps_canonical


def run_cli(argv):
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


@pytest.fixture
def instance_path(tmp_path):
    path = tmp_path / "instance.json"
    code = run_cli([
        "gen", "--m", "2", "--n", "2", "--r", "1,1", "--a-prime", "1,1",
        "--b-prime", "1,1", "--churn", "0", "--seed", "1", "--out", str(path),
    ])
    assert code == 0
    return path


class TestValidate:
    def test_valid_instance(self, instance_path, capsys):
        assert run_cli(["validate", str(instance_path)]) == 0
        assert "VALID" in capsys.readouterr().out

    def test_missing_file(self, tmp_path):
        assert run_cli(["validate", str(tmp_path / "nope.json")]) == 1

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "trunc.json"
        path.write_text('{"m": 2, "n"')
        assert run_cli(["validate", str(path)]) == 2

    def test_unknown_field(self, instance_path, tmp_path):
        doc = json.loads(instance_path.read_text())
        doc["bogus"] = 1
        path = tmp_path / "extra.json"
        path.write_text(json.dumps(doc))
        assert run_cli(["validate", str(path)]) == 2

    def test_unbalanced_ocs(self, instance_path, tmp_path, capsys):
        doc = json.loads(instance_path.read_text())
        doc["a"][0][0] += 1
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        assert run_cli(["validate", str(path)]) == 3
        assert "OCS 0" in capsys.readouterr().err


class TestSolve:
    def test_zero_churn_bimcf(self, instance_path, capsys):
        assert run_cli(["solve", str(instance_path), "--algo", "bimcf"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["algo"] == "bimcf"
        assert doc["rewires"] == 0
        assert doc["feasible"] is True

    def test_oracle_on_canonical_swap(self, tmp_path, capsys):
        doc = {
            "m": 2, "n": 2,
            "a": [[1, 1], [1, 1]], "b": [[1, 1], [1, 1]],
            "u": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]],
            "c_new": [[1, 1], [1, 1]],
        }
        path = tmp_path / "swap.json"
        path.write_text(json.dumps(doc))
        assert run_cli(["solve", str(path), "--algo", "oracle"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["rewires"] == 2

    def test_greedy_order_flag(self, tmp_path, capsys):
        path = tmp_path / "i.json"
        run_cli(["gen", "--m", "2", "--n", "2", "--r", "1,1", "--a-prime", "1,1",
                 "--b-prime", "1,1", "--churn", "1", "--seed", "3", "--out", str(path)])
        for order in ("0,1", "1,0"):
            assert run_cli(["solve", str(path), "--algo", "greedy", "--ocs-order", order]) == 0
            assert json.loads(capsys.readouterr().out)["feasible"] is True

    def test_strict_non_proportional(self, tmp_path):
        doc = {
            "m": 2, "n": 2,
            "a": [[1, 1], [1, 2]], "b": [[1, 2], [1, 1]],
            "u": [[[1, 0], [0, 1]], [[1, 1], [0, 1]]],
            "c_new": [[2, 1], [0, 2]],
        }
        path = tmp_path / "np.json"
        path.write_text(json.dumps(doc))
        assert run_cli(["solve", str(path), "--algo", "bimcf"]) == 4

    def test_oracle_budget_exceeded(self, tmp_path):
        path = tmp_path / "big.json"
        run_cli(["gen", "--m", "3", "--n", "3", "--r", "1,1,1", "--a-prime", "2,2,2",
                 "--b-prime", "2,2,2", "--churn", "1", "--seed", "0", "--out", str(path)])
        assert run_cli(["solve", str(path), "--algo", "oracle", "--oracle-budget", "10"]) == 6

    def test_out_file(self, instance_path, tmp_path):
        out = tmp_path / "result.json"
        assert run_cli(["solve", str(instance_path), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["rewires"] == 0


class TestGen:
    def test_byte_identical_for_fixed_seed(self, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            assert run_cli(["gen", "--m", "3", "--n", "2", "--r", "1,2",
                            "--a-prime", "1,2,1", "--b-prime", "2,1,1",
                            "--churn", "0.5", "--seed", "42", "--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        meta = json.loads((tmp_path / "a.json.meta.json").read_text())
        assert meta["seed"] == 42
        assert meta["witness_rewires"] >= 0

    def test_unbalanced_spec(self):
        assert run_cli(["gen", "--m", "2", "--n", "1", "--r", "1",
                        "--a-prime", "2,1", "--b-prime", "1,1"]) == 3


class TestBench:
    def _config(self, tmp_path, **overrides):
        config = {
            "grid": [
                {"m": 2, "n": 2, "r": [1, 1], "a_prime": [1, 1], "b_prime": [1, 1], "churn": 0.5},
                {"m": 3, "n": 2, "r": [1, 1], "a_prime": [1, 1, 1], "b_prime": [1, 1, 1], "churn": 1.0},
            ],
            "seeds": [0, 1, 2],
            "algos": ["bimcf", "greedy"],
            "oracle_budget": 100000,
        }
        config.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        return path

    def test_row_count_and_header(self, tmp_path):
        out = tmp_path / "bench.csv"
        assert run_cli(["bench", str(self._config(tmp_path)), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        rows = [ln for ln in lines if not ln.startswith("#")][1:]
        assert len(rows) == 2 * 3 * 2  # grid x seeds x algos
        assert all(ln.split(",")[-1] == "true" for ln in rows)
        summary = [ln for ln in lines if ln.startswith("#")]
        assert any("algo=bimcf" in ln for ln in summary)
        assert any("algo=greedy" in ln for ln in summary)

    def test_byte_stable_modulo_timing(self, tmp_path):
        outs = []
        for name in ("one.csv", "two.csv"):
            out = tmp_path / name
            assert run_cli(["bench", str(self._config(tmp_path)), "--out", str(out)]) == 0
            rows = []
            for ln in out.read_text().splitlines():
                if ln.startswith("#") or ln == CSV_HEADER:
                    continue
                cols = ln.split(",")
                del cols[7]  # solve_ms is the only unstable column
                rows.append(",".join(cols))
            outs.append(rows)
        assert outs[0] == outs[1]

    def test_oracle_skip_rule(self, tmp_path):
        config = self._config(
            tmp_path,
            grid=[{"m": 4, "n": 4, "r": [1, 1, 1, 1], "a_prime": [2, 2, 2, 2],
                   "b_prime": [2, 2, 2, 2], "churn": 0.5}],
            seeds=[0],
            algos=["bimcf", "oracle"],
        )
        out = tmp_path / "bench.csv"
        assert run_cli(["bench", str(config), "--out", str(out)]) == 0
        rows = [ln for ln in out.read_text().splitlines()
                if not ln.startswith("#") and ln != CSV_HEADER]
        assert all(",oracle," not in ln for ln in rows)
        errors = (tmp_path / "bench.csv.errors.log").read_text()
        assert "skipped" in errors

    def test_oracle_rows_when_small(self, tmp_path):
        config = self._config(tmp_path, seeds=[0], algos=["bimcf", "greedy", "oracle"])
        out = tmp_path / "bench.csv"
        assert run_cli(["bench", str(config), "--out", str(out)]) == 0
        rows = [ln for ln in out.read_text().splitlines()
                if not ln.startswith("#") and ln != CSV_HEADER]
        oracle_rows = [ln for ln in rows if ",oracle," in ln]
        assert len(oracle_rows) == 2

    def test_jobs_matches_sequential(self, tmp_path):
        config = self._config(tmp_path)
        seq = tmp_path / "seq.csv"
        par = tmp_path / "par.csv"
        assert run_cli(["bench", str(config), "--out", str(seq)]) == 0
        assert run_cli(["bench", str(config), "--out", str(par), "--jobs", "2"]) == 0

        def stable(path):
            rows = []
            for ln in path.read_text().splitlines():
                if ln.startswith("#") or ln == CSV_HEADER:
                    continue
                cols = ln.split(",")
                del cols[7]
                rows.append(",".join(cols))
            return rows

        assert stable(seq) == stable(par)

    def test_parse_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        assert run_cli(["bench", str(bad)]) == 2
