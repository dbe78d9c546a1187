"""
Tests for the xokde-bench command line
"""

import json
import logging

import pytest

import config
import main


@pytest.fixture(autouse=True)
def no_log_file(monkeypatch):
    monkeypatch.setitem(config.LOGGING_CONFIG, "TO_FILE", False)


@pytest.fixture
def dataset_file(tmp_path, rng):
    lines = []
    for label, center in (("a", -3.0), ("b", 3.0)):
        for row in rng.normal(loc=center, size=(20, 2)):
            lines.append(f"{float(row[0])!r},{float(row[1])!r},{label}")
    path = tmp_path / "two.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestCommandLine:

    def test_json_report_to_file(self, dataset_file, tmp_path):
        out = tmp_path / "report.json"
        code = main.main(["--dataset", str(dataset_file), "--shuffles", "2", "--quiet", "--out", str(out)])

        assert code == 0
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data['completed'] == 2
        assert data['config']['shuffles'] == 2

    def test_csv_report_to_stdout(self, dataset_file, capsys):
        code = main.main(["--dataset", str(dataset_file), "--shuffles", "2", "--output", "csv",
                          "--covariance", "diag", "--quiet"])
        captured = capsys.readouterr()

        assert code == 0
        assert captured.out.splitlines()[0].startswith("row_type,")
        assert len(captured.out.strip().splitlines()) == 1 + 2 + 2

    def test_summary_on_stderr(self, dataset_file, tmp_path, capsys):
        main.main(["--dataset", str(dataset_file), "--shuffles", "1", "--out", str(tmp_path / "r.json"),
                   "--log-level", "ERROR"])
        assert "two: 40 samples" in capsys.readouterr().err

    def test_missing_file_is_io_error(self, tmp_path):
        assert main.main(["--dataset", str(tmp_path / "absent.csv"), "--quiet"]) == 1

    def test_malformed_file_is_io_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2,a\n1,x,b\n", encoding="utf-8")
        assert main.main(["--dataset", str(path), "--quiet"]) == 1

    @pytest.mark.parametrize("args", [["--train-frac", "1.5"], ["--dth", "0"], ["--shuffles", "0"]])
    def test_invalid_configuration(self, dataset_file, args):
        assert main.main(["--dataset", str(dataset_file), "--quiet"] + args) == 2

    def test_unknown_covariance_rejected_by_parser(self, dataset_file):
        with pytest.raises(SystemExit) as excinfo:
            main.main(["--dataset", str(dataset_file), "--covariance", "banded"])
        assert excinfo.value.code == 2

    def test_log_level_from_argument(self, dataset_file, tmp_path):
        main.main(["--dataset", str(dataset_file), "--shuffles", "1", "--quiet", "--log-level", "debug",
                   "--out", str(tmp_path / "r.json")])
        assert logging.getLogger().level == logging.DEBUG

    def test_reports_without_timing_are_byte_identical(self, dataset_file, tmp_path):
        outputs = []
        for name in ("first.json", "second.json"):
            out = tmp_path / name
            code = main.main(["--dataset", str(dataset_file), "--shuffles", "2", "--seed", "3", "--quiet",
                              "--no-timing", "--out", str(out)])
            assert code == 0
            outputs.append(out.read_bytes())

        assert outputs[0] == outputs[1]
        row = json.loads(outputs[0])['shuffles'][0]
        assert row['train_seconds'] is None and row['test_seconds'] is None
        assert row['accuracy'] is not None

    def test_final_compression_flag(self, dataset_file, tmp_path):
        out = tmp_path / "report.json"
        main.main(["--dataset", str(dataset_file), "--shuffles", "1", "--quiet", "--no-final-compress",
                   "--out", str(out)])
        assert json.loads(out.read_text(encoding="utf-8"))['config']['final_compress'] is False
