"""
Tests for JSON and CSV benchmark reports
"""

import json

import numpy as np
import pytest

from src.models.report import ExperimentConfig, ExperimentReport, ShuffleResult, ShuffleStatus
from src.services.report_generator import ReportGenerator
from src.utils.constants import CSV_COLUMNS


def completed(index, accuracy, nll):
    return ShuffleResult(
        index=index, n_train=112, n_test=38, accuracy=accuracy, avg_nll=nll, mean_components=7.5 + index,
        train_seconds=0.25, test_seconds=0.05, footprint_bytes=4096 + index, excluded_labels=[]
    )


@pytest.fixture
def report():
    rng = np.random.default_rng(7)
    rows = [completed(i, float(a), float(n))
            for i, (a, n) in enumerate(zip(rng.uniform(90, 100, 12), rng.uniform(-1, 2, 12)))]
    return ExperimentReport("iris", 150, 4, 3, ExperimentConfig(dataset_path="data/iris.csv"), rows)


@pytest.fixture
def generator():
    return ReportGenerator()


class TestJson:

    def test_header(self, generator, report):
        data = json.loads(generator.export_report_to_json(report))
        assert data['schema'] == "xokde-bench-report"
        assert data['version'] == 1
        assert data['dataset'] == {'name': 'iris', 'n_samples': 150, 'dim': 4, 'n_classes': 3}
        assert data['completed'] == 12

    def test_round_trip(self, generator, report):
        parsed = generator.parse_report(generator.export_report_to_json(report), "json")
        assert parsed == report

    def test_non_finite_values_become_null(self, generator, report):
        report.shuffles[0].avg_nll = float("inf")
        data = json.loads(generator.export_report_to_json(report))
        assert data['shuffles'][0]['avg_nll'] is None

    def test_foreign_document_rejected(self, generator):
        with pytest.raises(ValueError):
            generator.parse_report(json.dumps({'schema': 'other', 'version': 1}))


class TestCsv:

    def test_shuffle_and_aggregate_rows(self, generator, report):
        table = generator.parse_report(generator.export_report_to_csv(report), "csv")

        assert list(table.columns) == CSV_COLUMNS
        assert len(table) == 14
        assert list(table['row_type']) == ["shuffle"] * 12 + ["mean", "std"]

    def test_aggregates_recompute_from_rows(self, generator, report):
        table = generator.parse_report(generator.export_report_to_csv(report), "csv")
        shuffles = table[table['row_type'] == "shuffle"]
        std_row = table[table['row_type'] == "std"].iloc[0]
        mean_row = table[table['row_type'] == "mean"].iloc[0]

        for name in ("accuracy", "avg_nll", "mean_components"):
            assert std_row[name] == pytest.approx(np.std(shuffles[name], ddof=1), abs=1e-12)
            assert mean_row[name] == pytest.approx(np.mean(shuffles[name]), abs=1e-12)

    def test_failed_shuffle_row(self, generator, report):
        report.shuffles.append(ShuffleResult(index=12, status=ShuffleStatus.FAILED, error="Classes absent: x"))
        table = generator.parse_report(generator.export_report_to_csv(report), "csv")

        failed = table[table['status'] == "failed"].iloc[0]
        assert failed['error'] == "Classes absent: x"
        assert np.isnan(failed['accuracy'])
        assert len(table) == 15

    def test_excluded_labels_joined(self, generator, report):
        report.shuffles[0].excluded_labels = ["b", "c"]
        table = generator.parse_report(generator.export_report_to_csv(report), "csv")
        assert table['excluded_labels'].iloc[0] == "b;c"


class TestAggregate:

    def test_failed_rows_not_aggregated(self, report):
        before = report.aggregate()['mean']['accuracy']
        report.shuffles.append(ShuffleResult(index=12, status=ShuffleStatus.FAILED, error="boom"))
        assert report.aggregate()['mean']['accuracy'] == before

    def test_single_shuffle_has_zero_std(self):
        report = ExperimentReport("x", 10, 2, 2, ExperimentConfig(), [completed(0, 95.0, 1.0)])
        assert report.aggregate()['std']['accuracy'] == 0.0

    def test_memory_absent_stays_none(self, report):
        assert report.aggregate()['mean']['rss_mb'] is None


class TestSummary:

    def test_mentions_dataset_and_failures(self, generator, report):
        report.shuffles.append(ShuffleResult(index=12, status=ShuffleStatus.FAILED, error="boom"))
        text = generator.summary_text(report)
        assert text.startswith("iris: 150 samples")
        assert "12 completed, 1 failed" in text
        assert "shuffle 12 failed: boom" in text

    def test_emit_dispatches_on_format(self, generator, report):
        assert generator.emit_report(report, "csv").startswith("row_type,")
        assert generator.emit_report(report, "json").lstrip().startswith("{")
