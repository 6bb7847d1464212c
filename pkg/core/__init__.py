"""
雙成分 Curie–Weiss–Potts 能量地景分析工具 - 核心模組
Core modules: configuration, logging, domain types and statistics
"""

__version__ = '1.0.0'

from .config import ConfigManager
from .logger import LoggerManager
from .stats import AgreementStatistics, CensusCounts

__all__ = ['ConfigManager', 'LoggerManager', 'AgreementStatistics', 'CensusCounts']
