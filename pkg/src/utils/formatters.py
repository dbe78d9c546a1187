"""
Data Formatters - Functions to format benchmark figures for display
"""

from typing import Optional, Union


class DataFormatter:
    """Class containing various data formatting methods"""

    @staticmethod
    def format_number(number: Optional[Union[int, float]], precision: int = 0, use_separator: bool = True) -> str:
        """Format number with thousand separators"""
        if number is None:
            return "n/a"

        try:
            if use_separator:
                if precision == 0:
                    return f"{int(number):,}"
                return f"{number:,.{precision}f}"
            if precision == 0:
                return str(int(number))
            return f"{number:.{precision}f}"

        except (TypeError, ValueError):
            return "n/a"

    @staticmethod
    def format_mean_std(mean: Optional[float], std: Optional[float], precision: int = 2) -> str:
        """Format 'mean ± std'"""
        if mean is None:
            return "n/a"
        if std is None:
            return f"{mean:.{precision}f}"
        return f"{mean:.{precision}f} ± {std:.{precision}f}"

    @staticmethod
    def format_file_size(size_bytes: Optional[Union[int, float]]) -> str:
        """Format a byte count in human readable form"""
        if size_bytes is None or size_bytes < 0:
            return "0 B"

        for unit in ['B', 'KB', 'MB', 'GB', 'TB']:
            if size_bytes < 1024.0:
                if unit == 'B':
                    return f"{int(size_bytes)} {unit}"
                return f"{size_bytes:.1f} {unit}"
            size_bytes /= 1024.0

        return f"{size_bytes:.1f} PB"

    @staticmethod
    def format_duration(seconds: Optional[Union[int, float]]) -> str:
        """Format a duration; sub-second values keep millisecond precision"""
        if seconds is None:
            return "n/a"
        if seconds < 0:
            return "0s"

        if seconds < 1:
            return f"{seconds * 1000:.0f}ms"
        if seconds < 60:
            return f"{seconds:.2f}s"

        minutes, remaining = divmod(int(seconds), 60)
        if minutes < 60:
            return f"{minutes}m {remaining}s" if remaining else f"{minutes}m"

        hours, minutes = divmod(minutes, 60)
        return f"{hours}h {minutes}m" if minutes else f"{hours}h"
