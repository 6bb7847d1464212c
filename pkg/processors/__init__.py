"""
業務處理模組
Landscape analysis processors and artifact exporters
"""

from .critical_points import CriticalPointFinder, find_critical_points, minima_ordering
from .excel_service import ExcelExporter
from .phase_sweep import PhaseSample, PhaseSweeper
from .report_service import ReportService

__all__ = [
    'CriticalPointFinder',
    'find_critical_points',
    'minima_ordering',
    'ExcelExporter',
    'PhaseSample',
    'PhaseSweeper',
    'ReportService',
]
