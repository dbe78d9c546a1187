"""
Report Generator Service - Emits and parses benchmark reports as JSON or CSV
"""

import io
import json
import logging
from typing import Any, Dict, List, Union

import pandas as pd

import config
from src.models.report import ExperimentReport, ReportFormat
from src.utils.constants import CSV_COLUMNS, METRIC_FIELDS, ROW_TYPES
from src.utils.formatters import DataFormatter
from src.utils.helpers import finite_or_none


class ReportGenerator:
    """Service class for rendering experiment reports"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.formatter = DataFormatter()

    def emit_report(self, report: ExperimentReport, output_format: Union[str, ReportFormat]) -> str:
        """Render a report in the requested format"""
        output_format = ReportFormat(getattr(output_format, 'value', output_format))
        if output_format is ReportFormat.JSON:
            return self.export_report_to_json(report)
        return self.export_report_to_csv(report)

    def export_report_to_json(self, report: ExperimentReport) -> str:
        """Schema-versioned JSON; floats keep round-trip precision"""
        payload: Dict[str, Any] = {
            'schema': config.REPORT_SCHEMA["NAME"],
            'version': config.REPORT_SCHEMA["VERSION"],
            'generator': f"{config.APP_NAME} {config.APP_VERSION}"
        }
        payload.update(report.to_dict())
        return json.dumps(self._json_safe(payload), indent=2) + "\n"

    def _json_safe(self, value: Any) -> Any:
        if isinstance(value, dict):
            return {k: self._json_safe(v) for k, v in value.items()}
        if isinstance(value, list):
            return [self._json_safe(v) for v in value]
        if isinstance(value, float):
            return finite_or_none(value)
        return value

    def report_rows(self, report: ExperimentReport) -> List[Dict[str, Any]]:
        """One row per shuffle followed by the mean and std rows"""
        rows = []
        for shuffle in report.shuffles:
            row = shuffle.to_dict()
            row['row_type'] = ROW_TYPES['SHUFFLE']
            row['shuffle'] = row.pop('index')
            row['excluded_labels'] = ";".join(row['excluded_labels'])
            rows.append(row)

        aggregate = report.aggregate()
        for row_type in (ROW_TYPES['MEAN'], ROW_TYPES['STD']):
            row = {'row_type': row_type}
            row.update({name: aggregate[row_type][name] for name in METRIC_FIELDS})
            rows.append(row)

        return rows

    def export_report_to_csv(self, report: ExperimentReport) -> str:
        """CSV table with a row_type column marking shuffle and aggregate rows"""
        frame = pd.DataFrame(self.report_rows(report), columns=CSV_COLUMNS)
        output = io.StringIO()
        frame.to_csv(output, index=False)
        return output.getvalue()

    def parse_report(self, text: str, input_format: Union[str, ReportFormat] = ReportFormat.JSON) -> Union[ExperimentReport, pd.DataFrame]:
        """Parse emitted text: JSON gives the report back, CSV gives the table"""
        input_format = ReportFormat(getattr(input_format, 'value', input_format))
        if input_format is ReportFormat.CSV:
            return pd.read_csv(io.StringIO(text), float_precision='round_trip')

        data = json.loads(text)
        if data.get('schema') != config.REPORT_SCHEMA["NAME"]:
            raise ValueError(f"Not an {config.REPORT_SCHEMA['NAME']} document")
        if data.get('version') != config.REPORT_SCHEMA["VERSION"]:
            raise ValueError(f"Unsupported report version {data.get('version')!r}")
        return ExperimentReport.from_dict(data)

    def summary_text(self, report: ExperimentReport) -> str:
        """Human-readable summary of the aggregate rows"""
        aggregate = report.aggregate()
        mean, std = aggregate['mean'], aggregate['std']
        fmt = self.formatter

        lines = [
            f"{report.dataset}: {report.n_samples} samples, {report.dim} dimensions, {report.n_classes} classes "
            f"({report.config.covariance.value} covariance)",
            f"  shuffles      {len(report.completed)} completed, {len(report.failed)} failed",
            f"  accuracy      {fmt.format_mean_std(mean['accuracy'], std['accuracy'])} %",
            f"  avg -log L    {fmt.format_mean_std(mean['avg_nll'], std['avg_nll'])}",
            f"  components    {fmt.format_mean_std(mean['mean_components'], std['mean_components'], 1)}",
            f"  train time    {fmt.format_duration(mean['train_seconds'])}",
            f"  footprint     {fmt.format_file_size(mean['footprint_bytes'])}"
        ]
        if mean['rss_mb'] is not None:
            lines.append(f"  process RSS   {fmt.format_number(mean['rss_mb'], 1)} MB")
        for failed in report.failed:
            lines.append(f"  shuffle {failed.index} failed: {failed.error}")
        return "\n".join(lines)
