import json
from pathlib import Path

import pytest

from sturmdyn.cli import main, parse_rotation


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParsing:
    def test_named_rotations(self):
        assert parse_rotation("golden").tail == (1,)
        assert parse_rotation("silver").tail == (2,)

    def test_periodic_list(self):
        rot = parse_rotation("2,2,...")
        assert rot.tail == (2, 2)
        rot = parse_rotation("1,2,3")
        assert rot.head == (1, 2, 3) and rot.tail == ()

    def test_float(self):
        rot = parse_rotation("0.61803398875")
        assert rot.approximate
        assert rot.coefficient(1) == 1

    def test_bad_theta_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["words", "--alpha", "golden", "--theta", "1.5", "--k", "3"])
        assert exc.value.code == 2


class TestWordsCommand:
    def test_standard_word(self, capsys):
        code, out, _ = run(capsys, "words", "--alpha", "golden", "--k", "4")
        assert code == 0
        assert "s_4 = 10110" in out

    def test_complexity(self, capsys):
        code, out, _ = run(capsys, "words", "--alpha", "golden",
                           "--complexity", "50")
        assert code == 0
        assert "51 factors" in out

    def test_partition_output(self, capsys, tmp_path):
        code, out, _ = run(capsys, "words", "--alpha", "golden", "--k", "2",
                           "--partition", "2", "--range", "1", "13",
                           "--out", str(tmp_path))
        assert code == 0
        doc = json.loads((tmp_path / "words.json").read_text())
        blocks = doc["results"]["partition"]["blocks"]
        assert blocks[0] == {"start": 1, "end": 2, "label": "s2"}


class TestSpectrumCommand:
    def test_band_count(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--alpha", "golden",
                           "--lambda", "24", "--k", "4", "--p", "0")
        assert code == 0
        assert "3 bands" in out  # 0*q_4 + q_3 = 3

    def test_lwcor_report(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--alpha", "golden",
                           "--lambda", "24", "--check-lwcor", "--lwcor-k", "3")
        assert code == 0
        assert "min |x_k'|/bound" in out

    def test_lwcor_refused_at_low_coupling(self, capsys):
        code, _, err = run(capsys, "spectrum", "--alpha", "golden",
                           "--lambda", "18", "--check-lwcor")
        assert code == 2
        assert "requires coupling > 20" in err

    def test_csv_written(self, capsys, tmp_path):
        code, _, _ = run(capsys, "spectrum", "--alpha", "golden",
                         "--lambda", "24", "--k", "3", "--p", "1",
                         "--out", str(tmp_path))
        assert code == 0
        text = (tmp_path / "bands.csv").read_text()
        assert text.startswith("# schema_version=1\n")
        assert len(text.strip().split("\n")) == 2 + 2 * 2 + 1  # 1*q_3+q_2 = 5 bands


class TestDynamicsCommand:
    def test_exponent_line(self, capsys):
        code, out, _ = run(capsys, "dynamics", "--alpha", "golden",
                           "--lambda", "24", "--N", "120", "--T", "2,5")
        assert code == 0
        assert "p(lambda, alpha) = 2.4844" in out

    def test_theta_sweep_rows(self, capsys, tmp_path):
        code, _, _ = run(capsys, "dynamics", "--alpha", "golden",
                         "--lambda", "24", "--N", "80", "--T", "2",
                         "--theta-sweep", "3", "--seed", "11",
                         "--out", str(tmp_path))
        assert code == 0
        lines = (tmp_path / "dynamics.csv").read_text().strip().split("\n")
        assert len(lines) == 2 + 3  # header comment + columns + 3 rows

    def test_leakage_exit_3(self, capsys):
        code, _, err = run(capsys, "dynamics", "--alpha", "golden",
                           "--lambda", "24", "--N", "5", "--T", "20")
        assert code == 3
        assert "suggested half-width" in err


class TestDeterminism:
    def test_byte_identical_reruns(self, capsys, tmp_path):
        outs = []
        for sub in ("a", "b"):
            d = tmp_path / sub
            run(capsys, "dynamics", "--alpha", "golden", "--lambda", "24",
                "--N", "60", "--T", "2,4", "--theta-sweep", "2",
                "--seed", "7", "--out", str(d))
            run(capsys, "spectrum", "--alpha", "silver", "--lambda", "24",
                "--k", "3", "--p", "1", "--out", str(d))
            outs.append(d)
        for name in ("dynamics.csv", "dynamics.json", "bands.csv", "bands.json"):
            a = (outs[0] / name).read_bytes()
            b = (outs[1] / name).read_bytes()
            assert a == b, name


class TestConfigFile:
    def test_config_round_trip(self, capsys, tmp_path):
        cfg = {"alpha": "golden", "k": 4}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        code, out, _ = run(capsys, "--config", str(path), "words")
        assert code == 0
        assert "s_4 = 10110" in out
